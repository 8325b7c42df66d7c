#include "orbicover/orbicomplex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "orbicover/error.hpp"

namespace orbi {

int Piece::mirror_count() const {
  int n = 0;
  for (const auto& circle : boundary) {
    for (const auto& s : circle.segments) n += s.kind == SegmentKind::mirror;
  }
  return n;
}

int junction_order(const BoundaryCircle& circle, int junction) {
  const int n = circle.size();
  const auto& before = circle.segments[(junction + n - 1) % n];
  const auto& after = circle.segments[junction % n];
  int mirrors = (before.kind == SegmentKind::mirror) + (after.kind == SegmentKind::mirror);
  return mirrors == 2 ? 4 : mirrors == 1 ? 2 : 1;
}

std::optional<int> Orbicomplex::find_piece(const std::string& id) const {
  for (int p = 0; p < static_cast<int>(pieces.size()); ++p) {
    if (pieces[p].id == id) return p;
  }
  return std::nullopt;
}

const DirectedEdge* Orbicomplex::attachment(const SegmentRef& ref) const {
  auto it = attachments.find(ref);
  return it == attachments.end() ? nullptr : &it->second;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::dangling_attachment: return "DanglingAttachment";
    case ViolationKind::mirror_attached: return "MirrorAttached";
    case ViolationKind::multiplicity_mismatch: return "MultiplicityMismatch";
    case ViolationKind::discontinuous_attachment: return "DiscontinuousAttachment";
    case ViolationKind::junction_stabilizer_mismatch: return "JunctionStabilizerMismatch";
    case ViolationKind::bad_piece: return "BadPiece";
    case ViolationKind::mirror_shape: return "MirrorShape";
    case ViolationKind::duplicate_id: return "DuplicateId";
    case ViolationKind::bad_edge: return "BadEdge";
    case ViolationKind::bad_wall_label: return "BadWallLabel";
    case ViolationKind::malformed_rotation: return "MalformedRotation";
  }
  return "Violation";
}

namespace {

std::string segment_name(const Orbicomplex& c, const SegmentRef& r) {
  std::ostringstream out;
  if (r.piece >= 0 && r.piece < static_cast<int>(c.pieces.size())) {
    out << c.pieces[r.piece].id;
  } else {
    out << "piece#" << r.piece;
  }
  out << "/" << r.circle << "/" << r.segment;
  return out.str();
}

bool valid_ref(const Orbicomplex& c, const SegmentRef& r) {
  if (r.piece < 0 || r.piece >= static_cast<int>(c.pieces.size())) return false;
  const auto& p = c.pieces[r.piece];
  if (r.circle < 0 || r.circle >= static_cast<int>(p.boundary.size())) return false;
  return r.segment >= 0 && r.segment < p.boundary[r.circle].size();
}

template <typename Range, typename Key>
void check_unique(const Range& items, Key key, const char* what, std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (!seen.insert(key(item)).second) {
      out.push_back({ViolationKind::duplicate_id, key(item), std::string("duplicate ") + what + " id"});
    }
  }
}

}  // namespace

std::vector<Violation> validate_complex(const Orbicomplex& c) {
  std::vector<Violation> out;
  const auto& g = c.graph;

  check_unique(c.pieces, [](const Piece& p) { return p.id; }, "piece", out);
  check_unique(g.vertices, [](const GraphVertex& v) { return v.id; }, "vertex", out);
  check_unique(g.edges, [](const GraphEdge& e) { return e.id; }, "edge", out);

  bool edges_ok = true;
  for (const auto& e : g.edges) {
    if (e.tail < 0 || e.tail >= g.vertex_count() || e.head < 0 || e.head >= g.vertex_count()) {
      out.push_back({ViolationKind::bad_edge, e.id, "endpoint out of range"});
      edges_ok = false;
    } else if (e.multiplicity < 0) {
      out.push_back({ViolationKind::bad_edge, e.id, "negative multiplicity"});
    }
  }

  std::set<std::string> walls;
  for (const auto& v : g.vertices) {
    if (v.mark != Mark::wall) continue;
    if (v.wall.empty() || !walls.insert(v.wall).second) {
      out.push_back({ViolationKind::bad_wall_label, v.id, "wall label missing or repeated"});
    }
  }

  for (const auto& p : c.pieces) {
    if (p.genus < 0) out.push_back({ViolationKind::bad_piece, p.id, "negative genus"});
    for (int m : p.cones) {
      if (m < 2) out.push_back({ViolationKind::bad_piece, p.id, "cone order below 2"});
    }
    for (const auto& circle : p.boundary) {
      if (circle.segments.empty()) out.push_back({ViolationKind::bad_piece, p.id, "empty boundary circle"});
    }
    if (p.has_mirrors() && (p.genus != 0 || p.boundary.size() != 1)) {
      out.push_back({ViolationKind::mirror_shape, p.id, "mirrored piece must be a polygon"});
    }
  }

  std::vector<int> attached_count(g.edge_count(), 0);
  for (const auto& [ref, de] : c.attachments) {
    if (!valid_ref(c, ref)) {
      out.push_back({ViolationKind::dangling_attachment, segment_name(c, ref), "no such segment"});
      continue;
    }
    if (de.edge < 0 || de.edge >= g.edge_count()) {
      out.push_back({ViolationKind::dangling_attachment, segment_name(c, ref), "no such edge"});
      continue;
    }
    const auto& seg = c.pieces[ref.piece].boundary[ref.circle].segments[ref.segment];
    if (seg.kind == SegmentKind::mirror) {
      out.push_back({ViolationKind::mirror_attached, segment_name(c, ref), "mirror segments are never attached"});
      continue;
    }
    ++attached_count[de.edge];
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    if (attached_count[e] != g.edges[e].multiplicity) {
      out.push_back({ViolationKind::multiplicity_mismatch, g.edges[e].id,
                     std::to_string(attached_count[e]) + " segments attached, multiplicity " +
                         std::to_string(g.edges[e].multiplicity)});
    }
  }

  if (edges_ok) {
    for (int p = 0; p < static_cast<int>(c.pieces.size()); ++p) {
      const auto& piece = c.pieces[p];
      for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
        const auto& circle = piece.boundary[k];
        const int n = circle.size();
        for (int j = 0; j < n; ++j) {
          SegmentRef before{p, k, (j + n - 1) % n}, after{p, k, j};
          const DirectedEdge* a = c.attachment(before);
          const DirectedEdge* b = c.attachment(after);
          if (a && (a->edge < 0 || a->edge >= g.edge_count())) a = nullptr;
          if (b && (b->edge < 0 || b->edge >= g.edge_count())) b = nullptr;
          if (!a && !b) continue;
          int v = a ? g.finish(*a) : g.start(*b);
          if (a && b && g.finish(*a) != g.start(*b)) {
            out.push_back({ViolationKind::discontinuous_attachment, segment_name(c, after),
                           "consecutive segments do not meet at a graph vertex"});
            continue;
          }
          if (junction_order(circle, j) != g.stabilizer_order(v)) {
            out.push_back({ViolationKind::junction_stabilizer_mismatch, segment_name(c, after),
                           "junction lands on vertex " + g.vertices[v].id +
                               " with a different local group"});
          }
        }
      }
    }
  }

  if (c.rotation && edges_ok) {
    try {
      check_rotation(g, *c.rotation);
    } catch (const Error& e) {
      out.push_back({ViolationKind::malformed_rotation, "rotation", e.what()});
    }
  }
  return out;
}

void require_valid(const Orbicomplex& c) {
  auto violations = validate_complex(c);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(ErrorKind::invalid_complex,
                std::string(to_string(v.kind)) + " at " + v.cell + ": " + v.detail);
  }
}

Rational piece_euler_characteristic(const Piece& p) {
  Rational chi = 2 - 2 * p.genus - static_cast<int>(p.boundary.size());
  for (const auto& circle : p.boundary) {
    for (int j = 0; j < circle.size(); ++j) {
      if (circle.segments[j].kind == SegmentKind::mirror) chi += Rational(1, 2);
      chi -= 1 - Rational(1, junction_order(circle, j));
    }
  }
  for (int m : p.cones) chi -= 1 - Rational(1, m);
  return chi;
}

Rational euler_characteristic(const Orbicomplex& c) {
  require_valid(c);
  Rational chi = 0;
  for (int v = 0; v < c.graph.vertex_count(); ++v) chi += Rational(1, c.graph.stabilizer_order(v));
  chi -= c.graph.edge_count();

  for (int p = 0; p < static_cast<int>(c.pieces.size()); ++p) {
    const auto& piece = c.pieces[p];
    chi += piece_euler_characteristic(piece);
    for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
      const auto& circle = piece.boundary[k];
      const int n = circle.size();
      for (int j = 0; j < n; ++j) {
        bool here = c.attachment({p, k, j}) != nullptr;
        bool before = c.attachment({p, k, (j + n - 1) % n}) != nullptr;
        if (here) chi += 1;
        if (here || before) chi -= Rational(1, junction_order(circle, j));
      }
    }
  }
  return chi;
}

MarkedGraph singular_subspace(const Orbicomplex& c) {
  require_valid(c);
  MarkedGraph g = c.graph;
  for (auto& v : g.vertices) {
    if (v.mark == Mark::wall) {
      v.mark = Mark::ramification;
      v.wall.clear();
    }
  }
  return g;
}

Orbicomplex standalone(const Piece& p) {
  Orbicomplex c;
  c.pieces.push_back(p);
  c.rotation = RotationSystem{};
  return c;
}

std::optional<EdgeWalk> circle_walk(const Orbicomplex& c, int piece, int circle) {
  EdgeWalk walk;
  const auto& segs = c.pieces[piece].boundary[circle];
  for (int j = 0; j < segs.size(); ++j) {
    const DirectedEdge* a = c.attachment({piece, circle, j});
    if (!a) return std::nullopt;
    walk.push_back(*a);
  }
  return walk;
}

std::string piece_type(const Piece& p) {
  std::vector<int> cones = p.cones;
  std::sort(cones.begin(), cones.end());
  std::ostringstream out;
  out << "g" << p.genus << " b" << p.boundary.size() << " m" << p.mirror_count() << " c";
  for (std::size_t i = 0; i < cones.size(); ++i) out << (i ? "," : "") << cones[i];
  return out.str();
}

std::map<std::string, int> piece_census(const Orbicomplex& c) {
  std::map<std::string, int> census;
  for (const auto& p : c.pieces) ++census[piece_type(p)];
  return census;
}

std::string disk_type(int cones) {
  Piece p;
  p.boundary.resize(1);
  p.cones.assign(cones, 2);
  return piece_type(p);
}

LabeledGraph to_labeled_graph(const Orbicomplex& c) {
  LabeledGraph out;
  const auto& g = c.graph;
  std::vector<int> vnode, enode;
  for (int v = 0; v < g.vertex_count(); ++v) {
    vnode.push_back(out.add_vertex("V" + std::to_string(g.stabilizer_order(v))));
  }
  for (const auto& e : g.edges) {
    int n = out.add_vertex("E" + std::to_string(e.multiplicity));
    out.add_edge(n, vnode[e.tail], "end");
    out.add_edge(n, vnode[e.head], "end");
    enode.push_back(n);
  }
  for (int p = 0; p < static_cast<int>(c.pieces.size()); ++p) {
    const auto& piece = c.pieces[p];
    int pn = out.add_vertex("P " + piece_type(piece));
    for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
      const auto& circle = piece.boundary[k];
      int cn = out.add_vertex("C");
      out.add_edge(pn, cn, "circle");
      const int n = circle.size();
      std::vector<int> junction(n), segment(n);
      for (int j = 0; j < n; ++j) {
        junction[j] = out.add_vertex("J" + std::to_string(junction_order(circle, j)));
        out.add_edge(cn, junction[j], "junction");
      }
      for (int j = 0; j < n; ++j) {
        bool mirror = circle.segments[j].kind == SegmentKind::mirror;
        segment[j] = out.add_vertex(mirror ? "Sm" : "Sf");
        out.add_edge(segment[j], junction[j], "side");
        out.add_edge(segment[j], junction[(j + 1) % n], "side");
        if (const DirectedEdge* a = c.attachment({p, k, j})) {
          out.add_edge(segment[j], enode[a->edge], "on");
          out.add_edge(junction[j], vnode[g.start(*a)], "at");
          out.add_edge(junction[(j + 1) % n], vnode[g.finish(*a)], "at");
        }
      }
    }
  }
  return out;
}

bool orbicomplex_isomorphic(const Orbicomplex& a, const Orbicomplex& b) {
  if (a.pieces.size() != b.pieces.size() || piece_census(a) != piece_census(b)) return false;
  if (!marked_graph_isomorphism(a.graph, b.graph)) return false;
  return find_isomorphism(to_labeled_graph(a), to_labeled_graph(b)).has_value();
}

}  // namespace orbi
