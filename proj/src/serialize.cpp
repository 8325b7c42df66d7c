#include "orbicover/serialize.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "orbicover/error.hpp"

namespace orbi {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::parse, what); }

template <typename F>
auto guarded(const char* what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Json::exception& e) {
    bad(std::string(what) + ": " + e.what());
  }
}

std::string mark_name(Mark m) {
  switch (m) {
    case Mark::none: return "none";
    case Mark::ramification: return "ramification";
    case Mark::wall: return "wall";
  }
  return "none";
}

Mark mark_from(const std::string& s) {
  if (s == "none") return Mark::none;
  if (s == "ramification") return Mark::ramification;
  if (s == "wall") return Mark::wall;
  bad("unknown vertex mark " + s);
}

std::string kind_name(PointKind k) {
  switch (k) {
    case PointKind::cone: return "cone";
    case PointKind::corner: return "corner";
    case PointKind::smooth: return "smooth";
  }
  return "smooth";
}

PointKind point_kind_from(const std::string& s) {
  if (s == "cone") return PointKind::cone;
  if (s == "corner") return PointKind::corner;
  if (s == "smooth") return PointKind::smooth;
  bad("unknown point kind " + s);
}

int vertex_index(const MarkedGraph& g, const std::string& id) {
  auto v = g.find_vertex(id);
  if (!v) bad("unknown vertex " + id);
  return *v;
}

int edge_index(const MarkedGraph& g, const std::string& id) {
  auto e = g.find_edge(id);
  if (!e) bad("unknown edge " + id);
  return *e;
}

int piece_index(const Orbicomplex& c, const std::string& id) {
  auto p = c.find_piece(id);
  if (!p) bad("unknown piece " + id);
  return *p;
}

Json point_json(const Orbicomplex& c, const PiecePoint& pp) {
  Json j{{"piece", c.pieces[pp.piece].id}, {"kind", kind_name(pp.point.kind)}};
  if (pp.point.kind != PointKind::smooth) j["index"] = pp.point.index;
  if (pp.point.kind == PointKind::corner) j["circle"] = pp.point.circle;
  return j;
}

PiecePoint point_from(const Orbicomplex& c, const Json& j) {
  PiecePoint pp;
  pp.piece = piece_index(c, j.at("piece").get<std::string>());
  pp.point.kind = point_kind_from(j.at("kind").get<std::string>());
  pp.point.index = j.value("index", 0);
  pp.point.circle = j.value("circle", 0);
  return pp;
}

Json bigint_json(const BigInt& n) {
  if (n <= BigInt(std::numeric_limits<long long>::max()) && n >= BigInt(std::numeric_limits<long long>::min())) {
    return n.convert_to<long long>();
  }
  return n.str();
}

}  // namespace

std::string to_string(const Rational& r) {
  std::ostringstream out;
  out << numerator(r);
  if (denominator(r) != 1) out << "/" << denominator(r);
  return out.str();
}

Json to_json(const DefiningGraph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back({g.vertices()[u], g.vertices()[v]});
  return {{"vertices", g.vertices()}, {"edges", edges}};
}

DefiningGraph defining_graph_from_json(const Json& j) {
  return guarded("defining graph", [&] {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) bad("edge must be a pair of vertices");
      edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return DefiningGraph(j.at("vertices").get<std::vector<std::string>>(), std::move(edges));
  });
}

Json to_json(const GroupPresentation& p) {
  Json relators = Json::array();
  for (const auto& w : p.relators) {
    Json word = Json::array();
    for (const auto& l : w) word.push_back({l.generator, l.exponent});
    relators.push_back(std::move(word));
  }
  return {{"generators", p.generators}, {"relators", relators}};
}

GroupPresentation presentation_from_json(const Json& j) {
  return guarded("presentation", [&] {
    GroupPresentation p;
    p.generators = j.at("generators").get<std::vector<std::string>>();
    for (const auto& w : j.at("relators")) {
      Word word;
      for (const auto& l : w) word.push_back({l.at(0).get<std::string>(), l.at(1).get<int>()});
      p.relators.push_back(std::move(word));
    }
    check_presentation(p);
    return p;
  });
}

Json to_json(const MarkedGraph& g) {
  Json vertices = Json::array(), edges = Json::array();
  for (const auto& v : g.vertices) {
    Json jv{{"id", v.id}, {"mark", mark_name(v.mark)}};
    if (v.mark == Mark::wall) jv["wall"] = v.wall;
    vertices.push_back(std::move(jv));
  }
  for (const auto& e : g.edges) {
    edges.push_back({{"id", e.id},
                     {"tail", g.vertices[e.tail].id},
                     {"head", g.vertices[e.head].id},
                     {"multiplicity", e.multiplicity}});
  }
  return {{"vertices", vertices}, {"edges", edges}};
}

MarkedGraph marked_graph_from_json(const Json& j) {
  return guarded("marked graph", [&] {
    MarkedGraph g;
    for (const auto& v : j.at("vertices")) {
      g.add_vertex(v.at("id").get<std::string>(), mark_from(v.value("mark", "none")), v.value("wall", ""));
    }
    for (const auto& e : j.at("edges")) {
      g.add_edge(e.at("id").get<std::string>(), vertex_index(g, e.at("tail").get<std::string>()),
                 vertex_index(g, e.at("head").get<std::string>()), e.value("multiplicity", 0));
    }
    return g;
  });
}

Json to_json(const Orbicomplex& c) {
  Json pieces = Json::array();
  for (int p = 0; p < static_cast<int>(c.pieces.size()); ++p) {
    const auto& piece = c.pieces[p];
    Json boundary = Json::array();
    for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
      Json circle = Json::array();
      for (int s = 0; s < piece.boundary[k].size(); ++s) {
        const auto& seg = piece.boundary[k].segments[s];
        Json js{{"kind", seg.kind == SegmentKind::mirror ? "mirror" : "free"}, {"label", seg.label}};
        if (const DirectedEdge* a = c.attachment({p, k, s})) {
          js["edge"] = a->edge >= 0 && a->edge < c.graph.edge_count() ? c.graph.edges[a->edge].id : "?";
          js["reversed"] = a->reversed;
        }
        circle.push_back(std::move(js));
      }
      boundary.push_back(std::move(circle));
    }
    pieces.push_back({{"id", piece.id}, {"genus", piece.genus}, {"cones", piece.cones}, {"boundary", boundary}});
  }
  Json out{{"graph", to_json(c.graph)}, {"pieces", pieces}};
  if (c.rotation) {
    Json rotation = Json::array();
    for (int v = 0; v < static_cast<int>(c.rotation->size()); ++v) {
      Json darts = Json::array();
      for (const auto& d : (*c.rotation)[v]) {
        darts.push_back({c.graph.edges[d.edge].id, d.end == EdgeEnd::tail ? "tail" : "head"});
      }
      rotation.push_back({{"vertex", c.graph.vertices[v].id}, {"darts", darts}});
    }
    out["rotation"] = rotation;
  } else {
    out["rotation"] = nullptr;
  }
  return out;
}

Orbicomplex orbicomplex_from_json(const Json& j) {
  return guarded("orbicomplex", [&] {
    Orbicomplex c;
    c.graph = marked_graph_from_json(j.at("graph"));
    for (const auto& jp : j.at("pieces")) {
      Piece piece;
      piece.id = jp.at("id").get<std::string>();
      piece.genus = jp.value("genus", 0);
      piece.cones = jp.value("cones", std::vector<int>{});
      const int p = static_cast<int>(c.pieces.size());
      int k = 0;
      for (const auto& jc : jp.at("boundary")) {
        BoundaryCircle circle;
        int s = 0;
        for (const auto& js : jc) {
          auto kind = js.at("kind").get<std::string>();
          if (kind != "mirror" && kind != "free") bad("unknown segment kind " + kind);
          circle.segments.push_back({kind == "mirror" ? SegmentKind::mirror : SegmentKind::free, js.value("label", "")});
          if (js.contains("edge")) {
            c.attachments[{p, k, s}] = {edge_index(c.graph, js.at("edge").get<std::string>()), js.value("reversed", false)};
          }
          ++s;
        }
        piece.boundary.push_back(std::move(circle));
        ++k;
      }
      c.pieces.push_back(std::move(piece));
    }
    if (j.contains("rotation") && !j.at("rotation").is_null()) {
      RotationSystem r(c.graph.vertex_count());
      for (const auto& jv : j.at("rotation")) {
        int v = vertex_index(c.graph, jv.at("vertex").get<std::string>());
        for (const auto& d : jv.at("darts")) {
          auto end = d.at(1).get<std::string>();
          if (end != "tail" && end != "head") bad("dart end must be tail or head");
          r[v].push_back({edge_index(c.graph, d.at(0).get<std::string>()), end == "tail" ? EdgeEnd::tail : EdgeEnd::head});
        }
      }
      c.rotation = std::move(r);
    }
    return c;
  });
}

Json to_json(const CoveringMap& f) {
  const auto& S = *f.source;
  const auto& T = *f.target;
  Json vertex_map = Json::object(), edge_map = Json::object(), piece_map = Json::object(),
       segment_map = Json::object(), fibers = Json::array();
  for (int v = 0; v < static_cast<int>(f.vertex_map.size()); ++v) {
    vertex_map[S.graph.vertices[v].id] = T.graph.vertices[f.vertex_map[v]].id;
  }
  for (int e = 0; e < static_cast<int>(f.edge_map.size()); ++e) {
    Json walk = Json::array();
    for (const auto& d : f.edge_map[e]) walk.push_back({T.graph.edges[d.edge].id, d.reversed});
    edge_map[S.graph.edges[e].id] = walk;
  }
  for (int p = 0; p < static_cast<int>(f.piece_map.size()); ++p) {
    piece_map[S.pieces[p].id] = {{"piece", T.pieces[f.piece_map[p].piece].id}, {"degree", f.piece_map[p].degree}};
    Json circles = Json::array();
    for (const auto& circle : f.segment_map[p]) {
      Json segs = Json::array();
      for (const auto& path : circle) {
        Json steps = Json::array();
        for (const auto& s : path) steps.push_back({s.circle, s.segment, s.reversed});
        segs.push_back(std::move(steps));
      }
      circles.push_back(std::move(segs));
    }
    segment_map[S.pieces[p].id] = circles;
  }
  for (const auto& fiber : f.point_fibers) {
    Json pre = Json::array();
    for (const auto& pp : fiber.preimages) pre.push_back(point_json(S, pp));
    fibers.push_back({{"target", point_json(T, fiber.target)}, {"preimages", pre}});
  }
  return {{"degree", f.degree},         {"source", to_json(S)},         {"target", to_json(T)},
          {"graph_map", {{"vertices", vertex_map}, {"edges", edge_map}}},
          {"piece_assignment", piece_map}, {"segment_map", segment_map}, {"cone_fibers", fibers}};
}

CoveringMap covering_map_from_json(const Json& j) {
  return guarded("covering map", [&] {
    CoveringMap f;
    auto source = std::make_shared<Orbicomplex>(orbicomplex_from_json(j.at("source")));
    auto target = std::make_shared<Orbicomplex>(orbicomplex_from_json(j.at("target")));
    const auto& S = *source;
    const auto& T = *target;
    f.source = source;
    f.target = target;
    f.degree = j.at("degree").get<int>();
    const auto& gm = j.at("graph_map");
    for (const auto& v : S.graph.vertices) {
      f.vertex_map.push_back(vertex_index(T.graph, gm.at("vertices").at(v.id).get<std::string>()));
    }
    for (const auto& e : S.graph.edges) {
      EdgeWalk walk;
      for (const auto& d : gm.at("edges").at(e.id)) {
        walk.push_back({edge_index(T.graph, d.at(0).get<std::string>()), d.at(1).get<bool>()});
      }
      f.edge_map.push_back(std::move(walk));
    }
    for (const auto& piece : S.pieces) {
      const auto& pa = j.at("piece_assignment").at(piece.id);
      f.piece_map.push_back({piece_index(T, pa.at("piece").get<std::string>()), pa.at("degree").get<int>()});
      std::vector<std::vector<SegmentPath>> circles;
      for (const auto& jc : j.at("segment_map").at(piece.id)) {
        std::vector<SegmentPath> segs;
        for (const auto& js : jc) {
          SegmentPath path;
          for (const auto& st : js) path.push_back({st.at(0).get<int>(), st.at(1).get<int>(), st.at(2).get<bool>()});
          segs.push_back(std::move(path));
        }
        circles.push_back(std::move(segs));
      }
      f.segment_map.push_back(std::move(circles));
    }
    for (const auto& jf : j.at("cone_fibers")) {
      PointFiber fiber{point_from(T, jf.at("target")), {}};
      for (const auto& jp : jf.at("preimages")) fiber.preimages.push_back(point_from(S, jp));
      f.point_fibers.push_back(std::move(fiber));
    }
    return f;
  });
}

Json to_json(const Branch& b) {
  return {{"path", b.path}, {"n", b.size()}, {"start_essential", b.start_essential}, {"end_essential", b.end_essential}};
}

Json to_json(const AbelianInvariants& a) {
  Json torsion = Json::array();
  for (const auto& d : a.torsion) torsion.push_back(bigint_json(d));
  return {{"free_rank", a.free_rank}, {"torsion", torsion}, {"text", to_string(a)}};
}

Json to_json(const VerifyReport& r) {
  Json out = Json::array();
  for (const auto& c : r.conditions) {
    out.push_back({{"condition", std::string(to_string(c.condition))},
                   {"status", c.pass ? "PASS" : "FAIL"},
                   {"witness", c.witnesses}});
  }
  return out;
}

Json to_json(const NormalForm& nf) {
  Json components = Json::array();
  for (const auto& c : nf.components) components.push_back({{"genus", c.genus}, {"boundary_circles", c.boundary_circles}});
  Json circles = Json::array();
  auto carriers = nf.carriers();
  for (std::size_t b = 0; b < carriers.size(); ++b) {
    circles.push_back({{"component", nf.circle_component[b]}, {"pieces", carriers[b]}});
  }
  return {{"components", components}, {"circles", circles}};
}

Json to_json(const CompareReport& r) {
  Json singular;
  if (r.singular_bijection) {
    singular = *r.singular_bijection;
  } else {
    singular = "no";
  }
  Json ab = Json::array();
  for (const auto& a : r.abelian) ab.push_back(a ? to_json(*a) : Json(nullptr));
  return {{"euler", {to_string(r.euler[0]), to_string(r.euler[1])}},
          {"singular_iso", singular},
          {"abelianization", ab},
          {"homotopy_certificate", std::string(to_string(r.certificate))},
          {"verdicts", r.verdicts}};
}

Json to_json(const TwoTorsionLabeling& phi) {
  Json out = Json::object();
  for (const auto& [g, v] : phi.values) {
    if (v & 1) out[g] = 1;
  }
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace orbi
