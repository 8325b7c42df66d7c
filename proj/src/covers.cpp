#include "orbicover/covers.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "orbicover/error.hpp"

namespace orbi {

namespace {

SegmentPath inverse(const SegmentPath& path) {
  SegmentPath out;
  for (auto it = path.rbegin(); it != path.rend(); ++it) out.push_back({it->circle, it->segment, !it->reversed});
  return out;
}

int step_start(const SegmentImage& s, int n) { return s.reversed ? (s.segment + 1) % n : s.segment; }
int step_end(const SegmentImage& s, int n) { return s.reversed ? s.segment : (s.segment + 1) % n; }

Dart start_dart(const DirectedEdge& d) { return {d.edge, d.reversed ? EdgeEnd::head : EdgeEnd::tail}; }
Dart end_dart(const DirectedEdge& d) { return {d.edge, d.reversed ? EdgeEnd::tail : EdgeEnd::head}; }

int point_order(const Piece& p, const PointRef& r) {
  switch (r.kind) {
    case PointKind::cone: return p.cones[r.index];
    case PointKind::corner: return junction_order(p.boundary[r.circle], r.index);
    case PointKind::smooth: return 1;
  }
  return 1;
}

std::string describe(const Orbicomplex& c, const PiecePoint& pp) {
  std::ostringstream out;
  out << c.pieces[pp.piece].id;
  switch (pp.point.kind) {
    case PointKind::cone: out << " cone " << pp.point.index; break;
    case PointKind::corner: out << " junction " << pp.point.circle << "/" << pp.point.index; break;
    case PointKind::smooth: out << " smooth point"; break;
  }
  return out.str();
}

void mismatch(const std::string& what) { throw Error(ErrorKind::mismatched_complexes, what); }

void check_shapes(const CoveringMap& f) {
  if (!f.source || !f.target) mismatch("source or target missing");
  const auto& S = *f.source;
  const auto& T = *f.target;
  if (f.degree < 1) mismatch("degree must be positive");
  if (static_cast<int>(f.vertex_map.size()) != S.graph.vertex_count()) mismatch("vertex map size");
  for (int v : f.vertex_map) {
    if (v < 0 || v >= T.graph.vertex_count()) mismatch("vertex map out of range");
  }
  if (static_cast<int>(f.edge_map.size()) != S.graph.edge_count()) mismatch("edge map size");
  for (const auto& walk : f.edge_map) {
    for (const auto& d : walk) {
      if (d.edge < 0 || d.edge >= T.graph.edge_count()) mismatch("edge map out of range");
    }
  }
  if (f.piece_map.size() != S.pieces.size()) mismatch("piece map size");
  for (const auto& pi : f.piece_map) {
    if (pi.piece < 0 || pi.piece >= static_cast<int>(T.pieces.size())) mismatch("piece map out of range");
  }
  if (f.segment_map.size() != S.pieces.size()) mismatch("segment map size");
  for (std::size_t p = 0; p < S.pieces.size(); ++p) {
    const auto& piece = S.pieces[p];
    const auto& image = T.pieces[f.piece_map[p].piece];
    if (f.segment_map[p].size() != piece.boundary.size()) mismatch("segment map circles of " + piece.id);
    for (std::size_t k = 0; k < piece.boundary.size(); ++k) {
      if (static_cast<int>(f.segment_map[p][k].size()) != piece.boundary[k].size()) {
        mismatch("segment map segments of " + piece.id);
      }
      for (const auto& path : f.segment_map[p][k]) {
        for (const auto& s : path) {
          if (s.circle < 0 || s.circle >= static_cast<int>(image.boundary.size()) || s.segment < 0 ||
              s.segment >= image.boundary[s.circle].size()) {
            mismatch("segment image out of range in " + piece.id);
          }
        }
      }
    }
  }
  auto check_point = [](const Orbicomplex& c, const PiecePoint& pp) {
    if (pp.piece < 0 || pp.piece >= static_cast<int>(c.pieces.size())) mismatch("point fiber piece out of range");
    const auto& p = c.pieces[pp.piece];
    if (pp.point.kind == PointKind::cone &&
        (pp.point.index < 0 || pp.point.index >= static_cast<int>(p.cones.size()))) {
      mismatch("cone index out of range in " + p.id);
    }
    if (pp.point.kind == PointKind::corner &&
        (pp.point.circle < 0 || pp.point.circle >= static_cast<int>(p.boundary.size()) || pp.point.index < 0 ||
         pp.point.index >= p.boundary[pp.point.circle].size())) {
      mismatch("junction out of range in " + p.id);
    }
  };
  for (const auto& fiber : f.point_fibers) {
    check_point(T, fiber.target);
    for (const auto& pre : fiber.preimages) check_point(S, pre);
  }
}

// Passage of a source boundary circle through a target junction.
struct JunctionPass {
  int source_piece;
  int target_circle;
  int target_junction;
  int source_order;
};

std::vector<JunctionPass> junction_passes(const CoveringMap& f) {
  const auto& S = *f.source;
  const auto& T = *f.target;
  std::vector<JunctionPass> out;
  for (int p = 0; p < static_cast<int>(S.pieces.size()); ++p) {
    const auto& image = T.pieces[f.piece_map[p].piece];
    for (int k = 0; k < static_cast<int>(S.pieces[p].boundary.size()); ++k) {
      const auto& circle = S.pieces[p].boundary[k];
      const auto& paths = f.segment_map[p][k];
      for (int j = 0; j < circle.size(); ++j) {
        const auto& path = paths[j];
        if (path.empty()) continue;
        const int n = image.boundary[path.front().circle].size();
        // Junction j of the source sits where this segment's path starts.
        out.push_back({p, path.front().circle, step_start(path.front(), n), junction_order(circle, j)});
        int interior = circle.segments[j].kind == SegmentKind::mirror ? 2 : 1;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          const int m = image.boundary[path[i].circle].size();
          out.push_back({p, path[i].circle, step_end(path[i], m), interior});
        }
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::fiber_sums: return "fiber_sums";
    case Condition::piece_euler: return "piece_euler";
    case Condition::boundary: return "boundary";
    case Condition::cone_fibers: return "cone_fibers";
    case Condition::singular_covering: return "singular_covering";
    case Condition::global_euler: return "global_euler";
  }
  return "condition";
}

bool VerifyReport::passed() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& r) { return r.pass; });
}

const ConditionResult& VerifyReport::operator[](Condition c) const {
  for (const auto& r : conditions) {
    if (r.condition == c) return r;
  }
  throw std::out_of_range("condition not in report");
}

bool operator==(const CoveringMap& a, const CoveringMap& b) {
  auto same = [](const auto& x, const auto& y) { return x == y || (x && y && *x == *y); };
  return same(a.source, b.source) && same(a.target, b.target) && a.degree == b.degree &&
         a.vertex_map == b.vertex_map && a.edge_map == b.edge_map && a.piece_map == b.piece_map &&
         a.segment_map == b.segment_map && a.point_fibers == b.point_fibers;
}

VerifyReport verify_covering(const CoveringMap& f) {
  check_shapes(f);
  const auto& S = *f.source;
  const auto& T = *f.target;
  require_valid(S);
  require_valid(T);

  VerifyReport report;
  for (auto c : {Condition::fiber_sums, Condition::piece_euler, Condition::boundary, Condition::cone_fibers,
                 Condition::singular_covering, Condition::global_euler}) {
    report.conditions.push_back({c, true, {}});
  }
  auto fail = [&](Condition c, std::string witness) {
    auto& r = report.conditions[static_cast<int>(c)];
    r.pass = false;
    r.witnesses.push_back(std::move(witness));
  };
  const int d = f.degree;
  const auto& SG = S.graph;
  const auto& TG = T.graph;
  const int ntp = static_cast<int>(T.pieces.size());
  const auto passes = junction_passes(f);

  // (1) fiber sums over every target cell.
  {
    std::vector<Rational> vertex_sum(TG.vertex_count(), 0);
    for (int u = 0; u < SG.vertex_count(); ++u) {
      int v = f.vertex_map[u];
      vertex_sum[v] += Rational(TG.stabilizer_order(v), SG.stabilizer_order(u));
    }
    std::vector<int> edge_count(TG.edge_count(), 0);
    for (const auto& walk : f.edge_map) {
      for (std::size_t i = 0; i < walk.size(); ++i) {
        ++edge_count[walk[i].edge];
        if (i + 1 < walk.size()) {
          int v = TG.finish(walk[i]);
          vertex_sum[v] += TG.stabilizer_order(v);
        }
      }
    }
    for (int v = 0; v < TG.vertex_count(); ++v) {
      if (vertex_sum[v] != d) fail(Condition::fiber_sums, "vertex " + TG.vertices[v].id);
    }
    for (int e = 0; e < TG.edge_count(); ++e) {
      if (edge_count[e] != d) fail(Condition::fiber_sums, "edge " + TG.edges[e].id);
    }

    std::vector<int> piece_sum(ntp, 0);
    for (const auto& pi : f.piece_map) piece_sum[pi.piece] += pi.degree;
    for (int q = 0; q < ntp; ++q) {
      if (piece_sum[q] != d) fail(Condition::fiber_sums, "piece " + T.pieces[q].id);
    }

    std::map<std::tuple<int, int, int>, int> appearances;
    for (std::size_t p = 0; p < S.pieces.size(); ++p) {
      for (const auto& circle : f.segment_map[p]) {
        for (const auto& path : circle) {
          for (const auto& s : path) ++appearances[{f.piece_map[p].piece, s.circle, s.segment}];
        }
      }
    }
    std::map<std::tuple<int, int, int>, Rational> junction_sum;
    for (const auto& pass : passes) {
      int q = f.piece_map[pass.source_piece].piece;
      int order = junction_order(T.pieces[q].boundary[pass.target_circle], pass.target_junction);
      junction_sum[{q, pass.target_circle, pass.target_junction}] += Rational(order, pass.source_order);
    }
    std::map<PiecePoint, Rational> point_sum;
    for (const auto& fiber : f.point_fibers) {
      int order = point_order(T.pieces[fiber.target.piece], fiber.target.point);
      for (const auto& pre : fiber.preimages) {
        point_sum[fiber.target] += Rational(order, point_order(S.pieces[pre.piece], pre.point));
      }
      if (fiber.target.point.kind == PointKind::corner) {
        junction_sum[{fiber.target.piece, fiber.target.point.circle, fiber.target.point.index}] +=
            point_sum[fiber.target];
      }
    }

    for (int q = 0; q < ntp; ++q) {
      const auto& piece = T.pieces[q];
      for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
        const auto& circle = piece.boundary[k];
        for (int j = 0; j < circle.size(); ++j) {
          int a = appearances[{q, k, j}];
          Rational sum = a;
          if (circle.segments[j].kind == SegmentKind::mirror) {
            // Remaining sheets meet the mirror from the interior, two at a time.
            int rest = piece_sum[q] - a;
            sum = rest >= 0 && rest % 2 == 0 ? Rational(a + rest) : Rational(-1);
          }
          if (sum != d) fail(Condition::fiber_sums, piece.id + " segment " + std::to_string(k) + "/" + std::to_string(j));
          if (junction_sum[{q, k, j}] != d) {
            fail(Condition::fiber_sums, piece.id + " junction " + std::to_string(k) + "/" + std::to_string(j));
          }
        }
      }
      for (int i = 0; i < static_cast<int>(piece.cones.size()); ++i) {
        PiecePoint pp{q, {PointKind::cone, i, 0}};
        if (point_sum[pp] != d) fail(Condition::fiber_sums, describe(T, pp));
      }
    }
  }

  // (2) per-piece Euler characteristic.
  for (std::size_t p = 0; p < S.pieces.size(); ++p) {
    const auto& pi = f.piece_map[p];
    if (pi.degree < 1 ||
        piece_euler_characteristic(S.pieces[p]) != pi.degree * piece_euler_characteristic(T.pieces[pi.piece])) {
      fail(Condition::piece_euler, S.pieces[p].id);
    }
  }

  // (3) boundary compatibility.
  for (int p = 0; p < static_cast<int>(S.pieces.size()); ++p) {
    const auto& piece = S.pieces[p];
    const int q = f.piece_map[p].piece;
    const auto& image = T.pieces[q];
    std::map<std::pair<int, int>, int> seen;
    for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
      const auto& circle = piece.boundary[k];
      std::string where = piece.id + " circle " + std::to_string(k);
      SegmentPath whole;
      bool kinds_ok = true;
      for (int j = 0; j < circle.size(); ++j) {
        const auto& path = f.segment_map[p][k][j];
        if (path.empty()) kinds_ok = false;
        for (const auto& s : path) {
          if (image.boundary[s.circle].segments[s.segment].kind != circle.segments[j].kind) kinds_ok = false;
          ++seen[{s.circle, s.segment}];
          whole.push_back(s);
        }
      }
      if (!kinds_ok) {
        fail(Condition::boundary, where + ": segment kinds or empty image");
        continue;
      }
      bool continuous = true;
      for (std::size_t i = 0; i < whole.size() && continuous; ++i) {
        const auto& a = whole[i];
        const auto& b = whole[(i + 1) % whole.size()];
        if (a.circle != b.circle) {
          continuous = false;
          break;
        }
        const auto& tc = image.boundary[a.circle];
        const int n = tc.size();
        int at = step_end(a, n);
        if (step_start(b, n) != at) continuous = false;
        // Turning back is only possible at a reflection point.
        if (b.segment == a.segment && b.reversed != a.reversed && n > 1 && junction_order(tc, at) != 2) {
          continuous = false;
        }
      }
      if (!continuous) fail(Condition::boundary, where + ": image is not a closed boundary path");

      for (int j = 0; j < circle.size(); ++j) {
        if (circle.segments[j].kind != SegmentKind::free) continue;
        const auto& path = f.segment_map[p][k][j];
        const DirectedEdge* att = S.attachment({p, k, j});
        EdgeWalk expected, actual;
        bool images_attached = true, images_free = true;
        for (const auto& s : path) {
          const DirectedEdge* t = T.attachment({q, s.circle, s.segment});
          if (t) {
            images_free = false;
            actual.push_back(s.reversed ? t->inverse() : *t);
          } else {
            images_attached = false;
          }
        }
        if (att) {
          expected = att->reversed ? orbi::inverse(f.edge_map[att->edge]) : f.edge_map[att->edge];
          if (!images_attached || expected != actual) {
            fail(Condition::boundary, where + " segment " + std::to_string(j) + ": attachment does not commute");
          }
        } else if (!images_free) {
          fail(Condition::boundary, where + " segment " + std::to_string(j) + ": free segment lands on attached one");
        }
      }
    }
    const int k = f.piece_map[p].degree;
    for (int c = 0; c < static_cast<int>(image.boundary.size()); ++c) {
      for (int j = 0; j < image.boundary[c].size(); ++j) {
        int a = seen[{c, j}];
        bool ok = image.boundary[c].segments[j].kind == SegmentKind::free ? a == k : a <= k && (k - a) % 2 == 0;
        if (!ok) {
          fail(Condition::boundary, piece.id + " over " + image.id + " segment " + std::to_string(c) + "/" +
                                        std::to_string(j) + " covered " + std::to_string(a) + " times");
        }
      }
    }
  }

  // (4) cone and corner fibers, piece by piece.
  {
    std::set<PiecePoint> listed;
    std::map<std::pair<PiecePoint, int>, Rational> local;  // (target point, source piece)
    std::set<PiecePoint> targets;
    for (const auto& fiber : f.point_fibers) {
      const auto& tp = fiber.target;
      targets.insert(tp);
      int order = point_order(T.pieces[tp.piece], tp.point);
      if (tp.point.kind == PointKind::smooth ||
          (tp.point.kind == PointKind::corner && order != 4)) {
        fail(Condition::cone_fibers, describe(T, tp) + ": not a cone or corner");
      }
      for (const auto& pre : fiber.preimages) {
        int sorder = point_order(S.pieces[pre.piece], pre.point);
        if (f.piece_map[pre.piece].piece != tp.piece) {
          fail(Condition::cone_fibers, describe(S, pre) + " lies over another piece");
        }
        if (order % sorder != 0) fail(Condition::cone_fibers, describe(S, pre) + ": order does not divide");
        if (pre.point.kind != PointKind::smooth && !listed.insert(pre).second) {
          fail(Condition::cone_fibers, describe(S, pre) + " listed twice");
        }
        local[{tp, pre.piece}] += Rational(order, sorder);
      }
    }
    for (const auto& pass : passes) {
      int q = f.piece_map[pass.source_piece].piece;
      PiecePoint tp{q, {PointKind::corner, pass.target_junction, pass.target_circle}};
      if (junction_order(T.pieces[q].boundary[pass.target_circle], pass.target_junction) != 4) continue;
      targets.insert(tp);
      local[{tp, pass.source_piece}] += Rational(4, pass.source_order);
    }
    for (int q = 0; q < ntp; ++q) {
      for (int i = 0; i < static_cast<int>(T.pieces[q].cones.size()); ++i) targets.insert({q, {PointKind::cone, i, 0}});
      for (int k = 0; k < static_cast<int>(T.pieces[q].boundary.size()); ++k) {
        for (int j = 0; j < T.pieces[q].boundary[k].size(); ++j) {
          if (junction_order(T.pieces[q].boundary[k], j) == 4) targets.insert({q, {PointKind::corner, j, k}});
        }
      }
    }
    for (const auto& tp : targets) {
      for (int p = 0; p < static_cast<int>(S.pieces.size()); ++p) {
        if (f.piece_map[p].piece != tp.piece) continue;
        auto it = local.find({tp, p});
        Rational got = it == local.end() ? Rational(0) : it->second;
        if (got != f.piece_map[p].degree) {
          fail(Condition::cone_fibers, describe(T, tp) + " in " + S.pieces[p].id);
        }
      }
    }
    for (int p = 0; p < static_cast<int>(S.pieces.size()); ++p) {
      for (int i = 0; i < static_cast<int>(S.pieces[p].cones.size()); ++i) {
        PiecePoint pp{p, {PointKind::cone, i, 0}};
        if (!listed.count(pp)) fail(Condition::cone_fibers, describe(S, pp) + " lies over no target point");
      }
    }
  }

  // (5) the graph map is an orbifold covering of singular subspaces.
  {
    auto check_point = [&](int target_vertex, int source_order, const std::vector<Dart>& darts,
                           const std::string& where) {
      const int kv = TG.stabilizer_order(target_vertex);
      if (kv % source_order != 0) {
        fail(Condition::singular_covering, where + ": local group does not divide");
        return;
      }
      std::map<Dart, int> count;
      for (const auto& dt : darts) {
        if (TG.endpoint(dt) != target_vertex) {
          fail(Condition::singular_covering, where + ": dart lands at the wrong vertex");
          return;
        }
        ++count[dt];
      }
      for (const auto& dt : TG.darts_at(target_vertex)) {
        if (count[dt] != kv / source_order) {
          fail(Condition::singular_covering, where + ": not a local covering at " + TG.vertices[target_vertex].id);
          return;
        }
      }
    };

    std::vector<std::vector<Dart>> images(SG.vertex_count());
    for (int e = 0; e < SG.edge_count(); ++e) {
      const auto& walk = f.edge_map[e];
      const auto& se = SG.edges[e];
      if (walk.empty()) {
        fail(Condition::singular_covering, "edge " + se.id + " has an empty image");
        continue;
      }
      bool ok = TG.start(walk.front()) == f.vertex_map[se.tail] && TG.finish(walk.back()) == f.vertex_map[se.head];
      for (std::size_t i = 0; i + 1 < walk.size(); ++i) ok &= TG.finish(walk[i]) == TG.start(walk[i + 1]);
      if (!ok) {
        fail(Condition::singular_covering, "edge " + se.id + ": image is not a walk between the image vertices");
        continue;
      }
      for (const auto& step : walk) {
        if (TG.edges[step.edge].multiplicity != se.multiplicity) {
          fail(Condition::singular_covering, "edge " + se.id + ": multiplicity changes");
          break;
        }
      }
      images[se.tail].push_back(start_dart(walk.front()));
      images[se.head].push_back(end_dart(walk.back()));
      for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
        check_point(TG.finish(walk[i]), 1, {end_dart(walk[i]), start_dart(walk[i + 1])},
                    "edge " + se.id + " interior point " + std::to_string(i + 1));
      }
    }
    for (int u = 0; u < SG.vertex_count(); ++u) {
      check_point(f.vertex_map[u], SG.stabilizer_order(u), images[u], "vertex " + SG.vertices[u].id);
    }
  }

  // (6) global Euler characteristic.
  if (euler_characteristic(S) != d * euler_characteristic(T)) {
    fail(Condition::global_euler, "chi(source) != degree * chi(target)");
  }
  return report;
}

CoveringMap identity_cover(std::shared_ptr<const Orbicomplex> c) {
  CoveringMap f;
  f.source = c;
  f.target = c;
  f.degree = 1;
  for (int v = 0; v < c->graph.vertex_count(); ++v) f.vertex_map.push_back(v);
  for (int e = 0; e < c->graph.edge_count(); ++e) f.edge_map.push_back({{e, false}});
  for (int p = 0; p < static_cast<int>(c->pieces.size()); ++p) {
    const auto& piece = c->pieces[p];
    f.piece_map.push_back({p, 1});
    f.segment_map.emplace_back();
    for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
      f.segment_map[p].emplace_back();
      for (int j = 0; j < piece.boundary[k].size(); ++j) f.segment_map[p][k].push_back({{k, j, false}});
    }
    for (int i = 0; i < static_cast<int>(piece.cones.size()); ++i) {
      PiecePoint pp{p, {PointKind::cone, i, 0}};
      f.point_fibers.push_back({pp, {pp}});
    }
  }
  return f;
}

CoveringMap compose(const CoveringMap& outer, const CoveringMap& inner) {
  if (!outer.source || !inner.target || !(*outer.source == *inner.target)) {
    mismatch("inner target is not outer source");
  }
  const auto& A = *inner.source;
  const auto& B = *inner.target;
  CoveringMap f;
  f.source = inner.source;
  f.target = outer.target;
  f.degree = outer.degree * inner.degree;
  for (int v : inner.vertex_map) f.vertex_map.push_back(outer.vertex_map[v]);
  for (const auto& walk : inner.edge_map) {
    EdgeWalk out;
    for (const auto& s : walk) {
      auto part = s.reversed ? orbi::inverse(outer.edge_map[s.edge]) : outer.edge_map[s.edge];
      out.insert(out.end(), part.begin(), part.end());
    }
    f.edge_map.push_back(std::move(out));
  }
  for (const auto& pi : inner.piece_map) {
    f.piece_map.push_back({outer.piece_map[pi.piece].piece, pi.degree * outer.piece_map[pi.piece].degree});
  }
  for (std::size_t p = 0; p < A.pieces.size(); ++p) {
    const int q = inner.piece_map[p].piece;
    f.segment_map.emplace_back();
    for (const auto& circle : inner.segment_map[p]) {
      f.segment_map[p].emplace_back();
      for (const auto& path : circle) {
        SegmentPath out;
        for (const auto& s : path) {
          const auto& part = outer.segment_map[q][s.circle][s.segment];
          auto piece_path = s.reversed ? inverse(part) : part;
          out.insert(out.end(), piece_path.begin(), piece_path.end());
        }
        f.segment_map[p].back().push_back(std::move(out));
      }
    }
  }

  std::map<PiecePoint, std::vector<PiecePoint>> inner_fibers;
  for (const auto& fiber : inner.point_fibers) inner_fibers[fiber.target] = fiber.preimages;
  auto pull_back = [&](const PiecePoint& b, std::vector<PiecePoint>& out) {
    if (b.point.kind == PointKind::smooth) {
      for (int p = 0; p < static_cast<int>(A.pieces.size()); ++p) {
        if (inner.piece_map[p].piece != b.piece) continue;
        for (int i = 0; i < inner.piece_map[p].degree; ++i) out.push_back({p, {PointKind::smooth, 0, 0}});
      }
      return;
    }
    auto it = inner_fibers.find(b);
    if (it != inner_fibers.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  };

  std::map<PiecePoint, std::vector<PiecePoint>> fibers;
  for (const auto& fiber : outer.point_fibers) {
    auto& out = fibers[fiber.target];
    for (const auto& b : fiber.preimages) pull_back(b, out);
  }
  // Corners of B sitting on the boundary over a corner of C: their interior
  // preimages in A belong to the C corner.
  for (const auto& fiber : inner.point_fibers) {
    const auto& b = fiber.target;
    if (b.point.kind != PointKind::corner) continue;
    const auto& path = outer.segment_map[b.piece][b.point.circle][b.point.index];
    if (path.empty()) continue;
    const int c = outer.piece_map[b.piece].piece;
    const auto& circle = outer.target->pieces[c].boundary[path.front().circle];
    int j = step_start(path.front(), circle.size());
    if (junction_order(circle, j) != 4) continue;
    auto& out = fibers[{c, {PointKind::corner, j, path.front().circle}}];
    out.insert(out.end(), fiber.preimages.begin(), fiber.preimages.end());
  }
  for (auto& [target, pre] : fibers) {
    if (!pre.empty()) f.point_fibers.push_back({target, std::move(pre)});
  }
  (void)B;
  return f;
}

namespace {

Piece cone_disk(std::string id, int cones, std::vector<Segment> segments) {
  Piece p;
  p.id = std::move(id);
  p.cones.assign(cones, 2);
  p.boundary.push_back({std::move(segments)});
  return p;
}

std::vector<Segment> free_segments(int n, const std::string& prefix) {
  std::vector<Segment> out;
  for (int j = 0; j < n; ++j) out.push_back({SegmentKind::free, prefix + std::to_string(j)});
  return out;
}

CoveringMap standalone_map(const Piece& source, const Piece& target, int degree) {
  CoveringMap f;
  f.source = std::make_shared<Orbicomplex>(standalone(source));
  f.target = std::make_shared<Orbicomplex>(standalone(target));
  f.degree = degree;
  f.piece_map = {{0, degree}};
  f.segment_map.resize(1);
  return f;
}

}  // namespace

std::pair<Piece, CoveringMap> reflection_double(const Piece& polygon) {
  if (polygon.genus != 0 || polygon.boundary.size() != 1 || !polygon.cones.empty() || !polygon.has_mirrors()) {
    throw Error(ErrorKind::not_a_polygon, polygon.id + " is not a mirrored disk without cones");
  }
  const auto& circle = polygon.boundary[0];
  const int n = circle.size();
  std::vector<int> run;
  for (int j = 0; j < n; ++j) {
    if (circle.segments[j].kind == SegmentKind::free && circle.segments[(j + n - 1) % n].kind == SegmentKind::mirror) {
      if (!run.empty()) throw Error(ErrorKind::not_a_polygon, polygon.id + " has several free arcs");
      for (int i = j; circle.segments[i % n].kind == SegmentKind::free; ++i) run.push_back(i % n);
    }
  }
  if (run.empty()) throw Error(ErrorKind::not_a_polygon, polygon.id + " has no free arc");

  std::vector<Segment> segments;
  SegmentPath forward;
  for (int j : run) {
    segments.push_back(circle.segments[j]);
    forward.push_back({0, j, false});
  }
  SegmentPath back = inverse(forward);
  for (const auto& s : back) segments.push_back({SegmentKind::free, circle.segments[s.segment].label + "'"});

  int corners = 0;
  for (int j = 0; j < n; ++j) corners += junction_order(circle, j) == 4;
  Piece disk = cone_disk(polygon.id + "~", corners, std::move(segments));

  CoveringMap f = standalone_map(disk, polygon, 2);
  f.segment_map[0].emplace_back();
  for (const auto& s : forward) f.segment_map[0][0].push_back({s});
  for (const auto& s : back) f.segment_map[0][0].push_back({s});
  int cone = 0;
  for (int j = 0; j < n; ++j) {
    if (junction_order(circle, j) != 4) continue;
    f.point_fibers.push_back({{0, {PointKind::corner, j, 0}}, {{0, {PointKind::cone, cone++, 0}}}});
  }
  return {std::move(disk), std::move(f)};
}

std::pair<Piece, CoveringMap> rotation_double(const Piece& disk) {
  bool ok = disk.genus == 0 && disk.boundary.size() == 1 && !disk.has_mirrors() && disk.cones.size() >= 2 &&
            std::all_of(disk.cones.begin(), disk.cones.end(), [](int m) { return m == 2; });
  if (!ok) throw Error(ErrorKind::not_a_disk_orbifold, disk.id + " is not a disk with at least two order-2 cones");
  const int m = static_cast<int>(disk.cones.size()) - 1;
  const auto& circle = disk.boundary[0];
  const int n = circle.size();

  std::vector<Segment> segments;
  for (int sheet = 0; sheet < 2; ++sheet) {
    for (const auto& s : circle.segments) segments.push_back({s.kind, s.label + (sheet ? "'" : "")});
  }
  Piece source = cone_disk(disk.id + "^", 2 * m, std::move(segments));

  CoveringMap f = standalone_map(source, disk, 2);
  f.segment_map[0].emplace_back();
  for (int j = 0; j < 2 * n; ++j) f.segment_map[0][0].push_back({{0, j % n, false}});
  f.point_fibers.push_back({{0, {PointKind::cone, 0, 0}}, {{0, {PointKind::smooth, 0, 0}}}});
  for (int i = 1; i <= m; ++i) {
    f.point_fibers.push_back({{0, {PointKind::cone, i, 0}},
                              {{0, {PointKind::cone, 2 * (i - 1), 0}}, {0, {PointKind::cone, 2 * (i - 1) + 1, 0}}}});
  }
  return {std::move(source), std::move(f)};
}

std::pair<Orbicomplex, CoveringMap> build_x1() {
  auto target = std::make_shared<Orbicomplex>(davis_orbicomplex(example_defining_graph()));
  const auto& D = *target;

  Orbicomplex x1;
  int x = x1.graph.add_vertex("x");
  int y = x1.graph.add_vertex("y");
  for (int j = 1; j <= 3; ++j) x1.graph.add_edge("c" + std::to_string(j), x, y, 4);

  // Walls glued by d_i and by d_i' (1-based theta edges), per disk.
  const int first[6] = {1, 1, 1, 1, 3, 3};
  const int second[6] = {2, 2, 3, 3, 2, 2};

  CoveringMap f;
  f.degree = 2;
  f.vertex_map = {*D.graph.find_vertex("o"), *D.graph.find_vertex("o")};
  for (int j = 1; j <= 3; ++j) {
    int e = *D.graph.find_edge("e:v" + std::to_string(j));
    f.edge_map.push_back({{e, true}, {e, false}});
  }

  for (int i = 0; i < 6; ++i) {
    const auto& polygon = D.pieces[i];
    const int n = polygon.mirror_count();
    int corners = n - 1;
    std::string name = "d" + std::to_string(i + 1);
    x1.pieces.push_back(cone_disk("D" + std::to_string(i + 1), corners,
                                  {{SegmentKind::free, name}, {SegmentKind::free, name + "'"}}));
    x1.attachments[{i, 0, 0}] = {first[i] - 1, false};
    x1.attachments[{i, 0, 1}] = {second[i] - 1, true};

    auto fold_over = [&](int wall) -> SegmentPath {
      int e = *D.graph.find_edge("e:v" + std::to_string(wall));
      const DirectedEdge* end = D.attachment({i, 0, n});
      if (end->edge == e) return {{0, n, true}, {0, n, false}};
      return {{0, n + 1, false}, {0, n + 1, true}};
    };
    f.piece_map.push_back({i, 2});
    f.segment_map.push_back({{fold_over(first[i]), fold_over(second[i])}});
    for (int t = 1; t <= corners; ++t) {
      f.point_fibers.push_back({{i, {PointKind::corner, t, 0}}, {{i, {PointKind::cone, t - 1, 0}}}});
    }
  }
  x1.rotation = RotationSystem{{{0, EdgeEnd::tail}, {1, EdgeEnd::tail}, {2, EdgeEnd::tail}},
                               {{0, EdgeEnd::head}, {2, EdgeEnd::head}, {1, EdgeEnd::head}}};

  auto source = std::make_shared<Orbicomplex>(x1);
  f.source = source;
  f.target = target;
  return {std::move(x1), std::move(f)};
}

SurfaceTower surface_over_disk_tower(int genus, int segments) {
  if (genus < 1) throw Error(ErrorKind::bad_genus, "genus must be at least 1");
  if (segments < 1) throw Error(ErrorKind::bad_genus, "boundary circles need at least one segment");
  SurfaceTower t;
  t.disk = cone_disk("D", genus + 3, free_segments(segments, "s"));
  t.annulus.id = "A";
  t.annulus.cones.assign(2 * genus + 2, 2);
  t.surface.id = "S";
  t.surface.genus = genus;
  for (int k = 0; k < 2; ++k) t.annulus.boundary.push_back({free_segments(segments, "s" + std::to_string(k) + ".")});
  for (int k = 0; k < 4; ++k) t.surface.boundary.push_back({free_segments(segments, "s" + std::to_string(k) + ".")});

  auto circle_map = [&](int target_circle) {
    std::vector<SegmentPath> out;
    for (int j = 0; j < segments; ++j) out.push_back({{target_circle, j, false}});
    return out;
  };

  t.lower = standalone_map(t.annulus, t.disk, 2);
  t.lower.segment_map[0] = {circle_map(0), circle_map(0)};
  for (int i = 0; i < genus + 3; ++i) {
    PointFiber fiber{{0, {PointKind::cone, i, 0}}, {}};
    if (i < 2) {
      fiber.preimages.push_back({0, {PointKind::smooth, 0, 0}});
    } else {
      fiber.preimages.push_back({0, {PointKind::cone, 2 * (i - 2), 0}});
      fiber.preimages.push_back({0, {PointKind::cone, 2 * (i - 2) + 1, 0}});
    }
    t.lower.point_fibers.push_back(std::move(fiber));
  }

  t.upper = standalone_map(t.surface, t.annulus, 2);
  t.upper.segment_map[0] = {circle_map(0), circle_map(0), circle_map(1), circle_map(1)};
  for (int i = 0; i < 2 * genus + 2; ++i) {
    t.upper.point_fibers.push_back({{0, {PointKind::cone, i, 0}}, {{0, {PointKind::smooth, 0, 0}}}});
  }
  return t;
}

std::pair<Orbicomplex, CoveringMap> torsion_free_cover(const Orbicomplex& c) {
  require_valid(c);
  for (const auto& v : c.graph.vertices) {
    if (v.mark != Mark::none) throw Error(ErrorKind::unsupported_piece, "marked vertex " + v.id);
  }
  for (int p = 0; p < static_cast<int>(c.pieces.size()); ++p) {
    const auto& piece = c.pieces[p];
    bool ok = piece.genus == 0 && piece.boundary.size() == 1 && !piece.has_mirrors() && piece.cones.size() >= 4 &&
              std::all_of(piece.cones.begin(), piece.cones.end(), [](int m) { return m == 2; }) &&
              circle_walk(c, p, 0).has_value();
    if (!ok) throw Error(ErrorKind::unsupported_piece, piece.id + " is not an attached disk with >= 4 order-2 cones");
  }

  const int V = c.graph.vertex_count();
  const int E = c.graph.edge_count();
  Orbicomplex out;
  out.graph = disjoint_union({c.graph, c.graph, c.graph, c.graph});
  if (c.rotation) {
    RotationSystem r;
    for (int q = 0; q < 4; ++q) {
      for (const auto& darts : *c.rotation) {
        r.emplace_back();
        for (const auto& dt : darts) r.back().push_back({dt.edge + q * E, dt.end});
      }
    }
    out.rotation = std::move(r);
  }

  CoveringMap f;
  f.degree = 4;
  for (int q = 0; q < 4; ++q) {
    for (int v = 0; v < V; ++v) f.vertex_map.push_back(v);
  }
  for (int q = 0; q < 4; ++q) {
    for (int e = 0; e < E; ++e) f.edge_map.push_back({{e, false}});
  }

  for (int p = 0; p < static_cast<int>(c.pieces.size()); ++p) {
    const auto& disk = c.pieces[p];
    const auto& circle = disk.boundary[0];
    Piece surface;
    surface.id = disk.id + "^";
    surface.genus = static_cast<int>(disk.cones.size()) - 3;
    f.piece_map.push_back({p, 4});
    f.segment_map.emplace_back();
    for (int q = 0; q < 4; ++q) {
      BoundaryCircle copy;
      f.segment_map[p].emplace_back();
      for (int j = 0; j < circle.size(); ++j) {
        copy.segments.push_back({SegmentKind::free, circle.segments[j].label + "#" + std::to_string(q)});
        const DirectedEdge* att = c.attachment({p, 0, j});
        out.attachments[{p, q, j}] = {att->edge + q * E, att->reversed};
        f.segment_map[p][q].push_back({{0, j, false}});
      }
      surface.boundary.push_back(std::move(copy));
    }
    out.pieces.push_back(std::move(surface));
    // Two cones of the disk lift to smooth points of the annulus, the rest to
    // cone pairs; either way the surface sees two smooth preimages.
    for (int i = 0; i < static_cast<int>(disk.cones.size()); ++i) {
      f.point_fibers.push_back(
          {{p, {PointKind::cone, i, 0}}, {{p, {PointKind::smooth, 0, 0}}, {p, {PointKind::smooth, 0, 0}}}});
    }
  }
  f.source = std::make_shared<Orbicomplex>(out);
  f.target = std::make_shared<Orbicomplex>(c);
  return {std::move(out), std::move(f)};
}

}  // namespace orbi
