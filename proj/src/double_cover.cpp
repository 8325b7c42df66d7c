#include <array>
#include <algorithm>
#include <stdexcept>

#include "orbicover/covers.hpp"
#include "orbicover/error.hpp"
#include "orbicover/invariants.hpp"

namespace orbi {

int TwoTorsionLabeling::operator()(const std::string& generator) const {
  auto it = values.find(generator);
  return it == values.end() ? 0 : (it->second & 1);
}

bool is_homomorphism(const GroupPresentation& p, const TwoTorsionLabeling& phi) {
  for (const auto& w : p.relators) {
    int sum = 0;
    for (const auto& l : w) sum += phi(l.generator);
    if (sum % 2 != 0) return false;
  }
  return true;
}

namespace {

struct LiftedSegment {
  Segment segment;
  std::optional<DirectedEdge> attachment;  // into the lifted graph
  SegmentPath image;
};

using LiftedCircle = std::vector<LiftedSegment>;

struct LiftedPiece {
  Piece piece;  // boundary filled from circles at the end
  std::vector<LiftedCircle> circles;
  PieceImage image;
};

class Lift {
 public:
  Lift(const Orbicomplex& c, const TwoTorsionLabeling& phi) : c_(c), phi_(phi), tree_(spanning_forest(c.graph)) {}

  std::pair<Orbicomplex, CoveringMap> run() {
    lift_graph();
    for (int p = 0; p < static_cast<int>(c_.pieces.size()); ++p) lift_piece(p);
    suppress_folds();
    return assemble();
  }

 private:
  int edge_value(int e) const { return tree_[e] ? 0 : phi_("e:" + c_.graph.edges[e].id); }
  bool fold(int v) const {
    return c_.graph.vertices[v].mark != Mark::none && phi_(local_generator(c_.graph, v)) == 1;
  }
  int connector(int p, int k) const { return phi_("t:" + c_.pieces[p].id + ":" + std::to_string(k)); }

  void lift_graph() {
    const auto& g = c_.graph;
    lifted_vertex_.assign(g.vertex_count(), {0, 0});
    for (int v = 0; v < g.vertex_count(); ++v) {
      const auto& vx = g.vertices[v];
      if (fold(v)) {
        int w = graph_.add_vertex(vx.id);
        lifted_vertex_[v] = {w, w};
        vertex_image_.push_back(v);
        folds_.push_back(vx.id);
        continue;
      }
      for (int s = 0; s < 2; ++s) {
        std::string suffix = "/" + std::to_string(s);
        lifted_vertex_[v][s] = graph_.add_vertex(vx.id + suffix, vx.mark, vx.wall.empty() ? "" : vx.wall + suffix);
        vertex_image_.push_back(v);
      }
    }
    for (int e = 0; e < g.edge_count(); ++e) {
      const auto& ed = g.edges[e];
      for (int s = 0; s < 2; ++s) {
        graph_.add_edge(ed.id + "/" + std::to_string(s), lifted_vertex_[ed.tail][s],
                        lifted_vertex_[ed.head][s ^ edge_value(e)], ed.multiplicity);
        edge_image_.push_back({{e, false}});
      }
    }
    if (c_.rotation) {
      RotationSystem r(graph_.vertex_count());
      for (int v = 0; v < g.vertex_count(); ++v) {
        auto lifted_dart = [&](const Dart& d, int s) {
          return Dart{2 * d.edge + (d.end == EdgeEnd::tail ? s : s ^ edge_value(d.edge)), d.end};
        };
        const auto& darts = (*c_.rotation)[v];
        if (fold(v)) {
          auto& out = r[lifted_vertex_[v][0]];
          for (const auto& d : darts) out.push_back(lifted_dart(d, 0));
          for (auto it = darts.rbegin(); it != darts.rend(); ++it) out.push_back(lifted_dart(*it, 1));
        } else {
          for (int s = 0; s < 2; ++s) {
            for (const auto& d : darts) r[lifted_vertex_[v][s]].push_back(lifted_dart(d, s));
          }
        }
      }
      rotation_ = std::move(r);
    }
  }

  // Lifts one step from sheet s; returns the lifted edge and the new sheet.
  std::pair<DirectedEdge, int> lift_step(const DirectedEdge& d, int s) const {
    int flip = edge_value(d.edge);
    int tail_sheet = d.reversed ? s ^ flip : s;
    return {{2 * d.edge + tail_sheet, d.reversed}, s ^ flip};
  }

  // Walks the given segments of circle k of piece p, starting on sheet s.
  LiftedCircle lift_run(int p, int k, const std::vector<int>& run, bool backwards, int& s,
                        const std::string& tag) const {
    LiftedCircle out;
    const auto& circle = c_.pieces[p].boundary[k];
    for (int j : run) {
      LiftedSegment ls;
      ls.segment = circle.segments[j];
      ls.segment.label += tag;
      ls.image = {{k, j, backwards}};
      if (const DirectedEdge* a = c_.attachment({p, k, j})) {
        auto [lifted, next] = lift_step(backwards ? a->inverse() : *a, s);
        ls.attachment = lifted;
        s = next;
      }
      out.push_back(std::move(ls));
    }
    return out;
  }

  int walk_parity(int p, int k) const {
    int parity = 0;
    for (int j = 0; j < c_.pieces[p].boundary[k].size(); ++j) {
      if (const DirectedEdge* a = c_.attachment({p, k, j})) parity ^= edge_value(a->edge);
    }
    return parity;
  }

  void add_cone_fiber(int p, int cone, std::vector<std::pair<int, PointRef>> pre) {
    PointFiber fiber{{p, {PointKind::cone, cone, 0}}, {}};
    for (auto& [lp, ref] : pre) fiber.preimages.push_back({lp, ref});
    fibers_.push_back(std::move(fiber));
  }

  void lift_piece(int p) {
    const auto& piece = c_.pieces[p];
    if (piece.has_mirrors()) {
      lift_polygon(p);
      return;
    }
    const int ncircles = static_cast<int>(piece.boundary.size());
    std::vector<int> parity(ncircles);
    bool trivial = true;
    for (int k = 0; k < ncircles; ++k) {
      bool attached = circle_walk(c_, p, k).has_value();
      parity[k] = attached ? walk_parity(p, k) : phi_("d:" + piece.id + ":" + std::to_string(k));
      trivial &= parity[k] == 0;
    }
    for (int i = 0; i < static_cast<int>(piece.cones.size()); ++i) {
      trivial &= phi_("c:" + piece.id + ":" + std::to_string(i)) == 0;
    }
    for (int i = 0; i < piece.genus; ++i) {
      auto n = piece.id + ":" + std::to_string(i);
      trivial &= phi_("a:" + n) == 0 && phi_("b:" + n) == 0;
    }

    auto all_segments = [&](int k) {
      std::vector<int> run(piece.boundary[k].size());
      for (int j = 0; j < static_cast<int>(run.size()); ++j) run[j] = j;
      return run;
    };

    if (trivial) {
      for (int s = 0; s < 2; ++s) {
        LiftedPiece lp;
        lp.piece = piece;
        lp.piece.id = piece.id + "/" + std::to_string(s);
        lp.image = {p, 1};
        for (int k = 0; k < ncircles; ++k) {
          int sheet = s ^ connector(p, k);
          lp.circles.push_back(lift_run(p, k, all_segments(k), false, sheet, ""));
        }
        pieces_.push_back(std::move(lp));
      }
      int first = static_cast<int>(pieces_.size()) - 2;
      for (int i = 0; i < static_cast<int>(piece.cones.size()); ++i) {
        add_cone_fiber(p, i, {{first, {PointKind::cone, i, 0}}, {first + 1, {PointKind::cone, i, 0}}});
      }
      return;
    }

    LiftedPiece lp;
    lp.piece.id = piece.id + "~";
    lp.image = {p, 2};
    const int me = static_cast<int>(pieces_.size());
    for (int k = 0; k < ncircles; ++k) {
      int sheet = connector(p, k);
      if (parity[k] == 0) {
        for (int s = 0; s < 2; ++s) {
          int start = sheet ^ s;
          lp.circles.push_back(lift_run(p, k, all_segments(k), false, start, s ? "'" : ""));
        }
      } else {
        auto once = lift_run(p, k, all_segments(k), false, sheet, "");
        auto twice = lift_run(p, k, all_segments(k), false, sheet, "'");
        once.insert(once.end(), twice.begin(), twice.end());
        lp.circles.push_back(std::move(once));
      }
    }
    std::vector<int>& cones = lp.piece.cones;
    for (int i = 0; i < static_cast<int>(piece.cones.size()); ++i) {
      int m = piece.cones[i];
      if (phi_("c:" + piece.id + ":" + std::to_string(i)) == 0) {
        int a = static_cast<int>(cones.size());
        cones.push_back(m);
        cones.push_back(m);
        add_cone_fiber(p, i, {{me, {PointKind::cone, a, 0}}, {me, {PointKind::cone, a + 1, 0}}});
      } else if (m / 2 >= 2) {
        cones.push_back(m / 2);
        add_cone_fiber(p, i, {{me, {PointKind::cone, static_cast<int>(cones.size()) - 1, 0}}});
      } else {
        add_cone_fiber(p, i, {{me, {PointKind::smooth, 0, 0}}});
      }
    }
    // Genus from 2 chi(piece) = 2 - 2g - b - sum(1 - 1/m).
    Rational rest = 2 - static_cast<int>(lp.circles.size()) - 2 * piece_euler_characteristic(piece);
    for (int m : cones) rest -= 1 - Rational(1, m);
    if (denominator(rest) != 1 || numerator(rest) < 0 || numerator(rest) % 2 != 0) {
      throw std::logic_error("lifted piece of " + piece.id + " has no integral genus");
    }
    lp.piece.genus = static_cast<int>(numerator(rest) / 2);
    pieces_.push_back(std::move(lp));
  }

  void lift_polygon(int p) {
    const auto& piece = c_.pieces[p];
    if (!piece.cones.empty()) throw Error(ErrorKind::unsupported_piece, piece.id + ": cones on a mirrored piece");
    const auto& circle = piece.boundary[0];
    const int n = circle.size();
    int ones = 0, mirrors = 0;
    for (int j = 0; j < n; ++j) {
      if (circle.segments[j].kind != SegmentKind::mirror) continue;
      ++mirrors;
      ones += phi_("m:" + piece.id + ":" + std::to_string(j));
    }
    if (ones != 0 && ones != mirrors) {
      throw Error(ErrorKind::unsupported_piece, piece.id + ": mirrors labelled differently");
    }

    // Free run following the mirrors, in circle order.
    std::vector<int> run;
    for (int j = 0; j < n; ++j) {
      if (circle.segments[j].kind == SegmentKind::free && circle.segments[(j + n - 1) % n].kind == SegmentKind::mirror) {
        if (!run.empty()) throw Error(ErrorKind::unsupported_piece, piece.id + ": several free arcs");
        for (int i = j; circle.segments[i % n].kind == SegmentKind::free; ++i) run.push_back(i % n);
      }
    }
    const int sheet0 = connector(p, 0);

    if (ones == 0) {
      for (int s = 0; s < 2; ++s) {
        LiftedPiece lp;
        lp.piece = piece;
        lp.piece.id = piece.id + "/" + std::to_string(s);
        lp.image = {p, 1};
        LiftedCircle lc;
        int sheet = s ^ sheet0;
        std::vector<std::optional<LiftedSegment>> slots(n);
        auto lifted = lift_run(p, 0, run, false, sheet, "");
        for (std::size_t i = 0; i < run.size(); ++i) slots[run[i]] = lifted[i];
        for (int j = 0; j < n; ++j) {
          if (slots[j]) {
            lc.push_back(*slots[j]);
          } else {
            lc.push_back({circle.segments[j], std::nullopt, {{0, j, false}}});
          }
        }
        lp.circles.push_back(std::move(lc));
        pieces_.push_back(std::move(lp));
      }
      return;
    }

    if (run.empty()) throw Error(ErrorKind::unsupported_piece, piece.id + ": closed reflector");
    LiftedPiece lp;
    lp.piece.id = piece.id + "~";
    lp.image = {p, 2};
    const int me = static_cast<int>(pieces_.size());
    int sheet = sheet0;
    auto forward = lift_run(p, 0, run, false, sheet, "");
    sheet ^= 1;  // reflected in the terminal wall
    std::vector<int> reversed_run(run.rbegin(), run.rend());
    auto back = lift_run(p, 0, reversed_run, true, sheet, "'");
    forward.insert(forward.end(), back.begin(), back.end());
    lp.circles.push_back(std::move(forward));
    int cone = 0;
    for (int j = 0; j < n; ++j) {
      if (junction_order(circle, j) != 4) continue;
      lp.piece.cones.push_back(2);
      fibers_.push_back({{p, {PointKind::corner, j, 0}}, {{me, {PointKind::cone, cone++, 0}}}});
    }
    pieces_.push_back(std::move(lp));
  }

  // Removes fold vertices of valence 2, merging their two edges and the
  // boundary segments running through them.
  void suppress_folds() {
    for (const auto& id : folds_) {
      int v = *graph_.find_vertex(id);
      auto darts = graph_.darts_at(v);
      if (darts.size() != 2 || darts[0].edge == darts[1].edge) continue;
      int a = darts[0].edge, b = darts[1].edge;
      if (graph_.edges[a].multiplicity != graph_.edges[b].multiplicity) continue;
      if (!passes_straight(v, a, b)) continue;
      merge(v, a, b);
    }
  }

  bool passes_straight(int v, int a, int b) const {
    for (const auto& lp : pieces_) {
      for (const auto& circle : lp.circles) {
        const int n = static_cast<int>(circle.size());
        for (int j = 0; j < n; ++j) {
          const auto& x = circle[j];
          const auto& y = circle[(j + 1) % n];
          bool into = x.attachment && graph_.finish(*x.attachment) == v;
          bool out = y.attachment && graph_.start(*y.attachment) == v;
          if (!into && !out) continue;
          if (!into || !out || x.attachment->edge == y.attachment->edge) return false;
          if ((x.attachment->edge != a && x.attachment->edge != b) ||
              (y.attachment->edge != a && y.attachment->edge != b)) {
            return false;
          }
        }
      }
    }
    return true;
  }

  void merge(int v, int a, int b) {
    auto far = [&](int e) { return graph_.edges[e].tail == v ? graph_.edges[e].head : graph_.edges[e].tail; };
    const bool a_into = graph_.edges[a].head == v;
    const bool b_out = graph_.edges[b].tail == v;
    const int tail = far(a), head = far(b);

    EdgeWalk walk = a_into ? edge_image_[a] : orbi::inverse(edge_image_[a]);
    EdgeWalk rest = b_out ? edge_image_[b] : orbi::inverse(edge_image_[b]);
    walk.insert(walk.end(), rest.begin(), rest.end());

    if (rotation_) {
      auto& r = *rotation_;
      for (auto& dt : r[tail]) {
        if (dt.edge == a && graph_.endpoint(dt) == tail && dt.end == (a_into ? EdgeEnd::tail : EdgeEnd::head)) {
          dt = {a, EdgeEnd::tail};
          break;
        }
      }
      for (auto& dt : r[head]) {
        if (dt.edge == b && dt.end == (b_out ? EdgeEnd::head : EdgeEnd::tail)) {
          dt = {a, EdgeEnd::head};
          break;
        }
      }
    }

    for (auto& lp : pieces_) {
      for (auto& circle : lp.circles) {
        LiftedCircle merged;
        const int n = static_cast<int>(circle.size());
        // Start right after a junction at v, so no merge wraps around.
        int start = 0;
        for (int j = 0; j < n; ++j) {
          if (circle[j].attachment && graph_.start(*circle[j].attachment) == v) start = (j + 1) % n;
        }
        for (int i = 0; i < n; ++i) {
          const auto& x = circle[(start + i) % n];
          if (x.attachment && graph_.finish(*x.attachment) == v) {
            const auto& y = circle[(start + i + 1) % n];
            LiftedSegment m = x;
            m.attachment = DirectedEdge{a, x.attachment->edge != a};
            m.image.insert(m.image.end(), y.image.begin(), y.image.end());
            merged.push_back(std::move(m));
            ++i;
          } else {
            merged.push_back(x);
          }
        }
        circle = std::move(merged);
      }
    }

    graph_.edges[a].tail = tail;
    graph_.edges[a].head = head;
    edge_image_[a] = std::move(walk);
    graph_.edges.erase(graph_.edges.begin() + b);
    edge_image_.erase(edge_image_.begin() + b);
    graph_.vertices.erase(graph_.vertices.begin() + v);
    vertex_image_.erase(vertex_image_.begin() + v);
    for (auto& e : graph_.edges) {
      if (e.tail > v) --e.tail;
      if (e.head > v) --e.head;
    }
    auto shift = [&](int& e) {
      if (e > b) --e;
    };
    for (auto& lp : pieces_) {
      for (auto& circle : lp.circles) {
        for (auto& s : circle) {
          if (s.attachment) shift(s.attachment->edge);
        }
      }
    }
    if (rotation_) {
      rotation_->erase(rotation_->begin() + v);
      for (auto& darts : *rotation_) {
        for (auto& dt : darts) shift(dt.edge);
      }
    }
  }

  std::pair<Orbicomplex, CoveringMap> assemble() {
    Orbicomplex out;
    out.graph = graph_;
    out.rotation = rotation_;
    CoveringMap f;
    f.degree = 2;
    f.vertex_map = vertex_image_;
    f.edge_map = edge_image_;
    for (int p = 0; p < static_cast<int>(pieces_.size()); ++p) {
      auto& lp = pieces_[p];
      lp.piece.boundary.clear();
      f.segment_map.emplace_back();
      for (int k = 0; k < static_cast<int>(lp.circles.size()); ++k) {
        BoundaryCircle bc;
        f.segment_map[p].emplace_back();
        for (int j = 0; j < static_cast<int>(lp.circles[k].size()); ++j) {
          const auto& ls = lp.circles[k][j];
          bc.segments.push_back(ls.segment);
          if (ls.attachment) out.attachments[{p, k, j}] = *ls.attachment;
          f.segment_map[p][k].push_back(ls.image);
        }
        lp.piece.boundary.push_back(std::move(bc));
      }
      f.piece_map.push_back(lp.image);
      out.pieces.push_back(lp.piece);
    }
    f.point_fibers = fibers_;
    f.source = std::make_shared<Orbicomplex>(out);
    f.target = std::make_shared<Orbicomplex>(c_);
    return {std::move(out), std::move(f)};
  }

  const Orbicomplex& c_;
  const TwoTorsionLabeling& phi_;
  std::vector<bool> tree_;

  MarkedGraph graph_;
  std::vector<std::array<int, 2>> lifted_vertex_;
  std::vector<int> vertex_image_;
  std::vector<EdgeWalk> edge_image_;
  std::optional<RotationSystem> rotation_;
  std::vector<std::string> folds_;
  std::vector<LiftedPiece> pieces_;
  std::vector<PointFiber> fibers_;
};

}  // namespace

std::pair<Orbicomplex, CoveringMap> double_cover(const Orbicomplex& c, const TwoTorsionLabeling& phi) {
  auto presentation = fundamental_group_presentation(c);
  if (!is_homomorphism(presentation, phi)) {
    throw Error(ErrorKind::not_a_homomorphism, "labeling does not vanish on every relator");
  }
  bool onto = std::any_of(presentation.generators.begin(), presentation.generators.end(),
                          [&](const std::string& g) { return phi(g) == 1; });
  if (!onto) throw Error(ErrorKind::not_surjective, "labeling is identically zero");
  return Lift(c, phi).run();
}

std::vector<DoubleCover> enumerate_double_covers(const Orbicomplex& c) {
  for (const auto& p : c.pieces) {
    if (p.has_mirrors()) throw Error(ErrorKind::mirrors_present, p.id + " has mirror segments");
  }
  auto presentation = fundamental_group_presentation(c);
  std::vector<std::string> cycles;
  for (const auto& g : presentation.generators) {
    if (g.rfind("e:", 0) == 0) cycles.push_back(g);
  }
  const auto tree = spanning_forest(c.graph);
  if (cycles.size() >= 31) throw Error(ErrorKind::unsupported_piece, "too many graph cycles to enumerate");

  std::vector<DoubleCover> out;
  for (unsigned mask = 1; mask < (1u << cycles.size()); ++mask) {
    TwoTorsionLabeling phi;
    for (const auto& g : presentation.generators) phi.values[g] = 0;
    for (std::size_t i = 0; i < cycles.size(); ++i) phi.values[cycles[i]] = (mask >> i) & 1;

    bool completable = true;
    for (int p = 0; p < static_cast<int>(c.pieces.size()) && completable; ++p) {
      const auto& piece = c.pieces[p];
      int parity = 0;
      for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
        for (int j = 0; j < piece.boundary[k].size(); ++j) {
          const DirectedEdge* a = c.attachment({p, k, j});
          if (a && !tree[a->edge]) parity ^= phi("e:" + c.graph.edges[a->edge].id);
        }
      }
      if (parity == 0) continue;
      if (piece.cones.empty() || piece.cones[0] % 2 != 0) {
        completable = false;
      } else {
        phi.values["c:" + piece.id + ":0"] = 1;
      }
    }
    if (!completable || !is_homomorphism(presentation, phi)) continue;
    auto [complex, map] = double_cover(c, phi);
    out.push_back({std::move(phi), std::move(complex), std::move(map)});
  }
  std::sort(out.begin(), out.end(),
            [](const DoubleCover& a, const DoubleCover& b) { return a.labeling < b.labeling; });
  return out;
}

}  // namespace orbi
