#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "orbicover/coxeter.hpp"
#include "orbicover/error.hpp"

using namespace orbi;

namespace {

bool has_violation(const Orbicomplex& c, ViolationKind kind) {
  for (const auto& v : validate_complex(c)) {
    if (v.kind == kind) return true;
  }
  return false;
}

MarkedGraph theta_graph(int multiplicity = 4) {
  MarkedGraph g;
  int x = g.add_vertex("x"), y = g.add_vertex("y");
  for (int i = 1; i <= 3; ++i) g.add_edge("c" + std::to_string(i), x, y, multiplicity);
  return g;
}

MarkedGraph marked_tripod() {
  MarkedGraph g;
  int o = g.add_vertex("o");
  for (int i = 0; i < 3; ++i) {
    int leaf = g.add_vertex("w" + std::to_string(i), Mark::ramification);
    g.add_edge("e" + std::to_string(i), leaf, o, 4);
  }
  return g;
}

// One disk glued along a loop.
Orbicomplex disk_on_loop(int cones) {
  Orbicomplex c;
  int v = c.graph.add_vertex("v");
  c.graph.add_edge("e", v, v, 1);
  c.pieces.push_back(oracle::disk("D", cones));
  c.attachments[{0, 0, 0}] = {0, false};
  return c;
}

}  // namespace

TEST_CASE("junction orders follow the adjacent segment kinds") {
  BoundaryCircle c{{{SegmentKind::mirror, "a"}, {SegmentKind::mirror, "b"}, {SegmentKind::free, "f"}, {SegmentKind::free, "g"}}};
  CHECK(junction_order(c, 1) == 4);
  CHECK(junction_order(c, 2) == 2);
  CHECK(junction_order(c, 3) == 1);
  CHECK(junction_order(c, 0) == 2);
}

TEST_CASE("euler characteristic of standalone pieces") {
  CHECK(euler_characteristic(standalone(oracle::disk("D", 0))) == 1);
  CHECK(euler_characteristic(standalone(oracle::disk("D", 4))) == -1);
  for (int n : {2, 5, 7}) {
    auto p = branch_polygon(Branch{std::vector<std::string>(n, "s"), true, true}, "P");
    auto c = standalone(p);
    CHECK(euler_characteristic(c) == oracle::weighted_cell_euler(c));
    CHECK(piece_euler_characteristic(p) == euler_characteristic(c));
  }
  CHECK(euler_characteristic(standalone(branch_polygon(Branch{{"a", "b", "c", "d", "e"}, true, true}))) == Rational(-1, 2));
  CHECK(euler_characteristic(standalone(branch_polygon(Branch{{"a", "b", "c", "d", "e", "f", "g"}, true, true}))) == -1);
  CHECK(euler_characteristic(standalone(branch_polygon(Branch{{"a", "b"}, true, true}))) == Rational(1, 4));
}

TEST_CASE("euler characteristic agrees with the weighted cell count") {
  auto d = davis_orbicomplex(example_defining_graph());
  CHECK(euler_characteristic(d) == Rational(-9, 2));
  CHECK(oracle::weighted_cell_euler(d) == Rational(-9, 2));
  auto [x1, f] = build_x1();
  CHECK(euler_characteristic(x1) == oracle::weighted_cell_euler(x1));
  for (int k = 1; k <= 6; ++k) {
    auto c = disk_on_loop(k);
    CHECK(euler_characteristic(c) == oracle::weighted_cell_euler(c));
  }
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Piece p;
    p.id = "S";
    p.genus = static_cast<int>(rng() % 3);
    int circles = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < circles; ++k) {
      BoundaryCircle circle;
      int segs = 1 + static_cast<int>(rng() % 4);
      for (int s = 0; s < segs; ++s) circle.segments.push_back({SegmentKind::free, "s"});
      p.boundary.push_back(circle);
    }
    p.cones.assign(rng() % 5, 2);
    auto c = standalone(p);
    CHECK(euler_characteristic(c) == oracle::weighted_cell_euler(c));
  }
}

TEST_CASE("validate_complex reports constructed defects") {
  auto d = davis_orbicomplex(example_defining_graph());
  CHECK(validate_complex(d).empty());

  auto dangling = d;
  dangling.attachments.begin()->second.edge = 99;
  CHECK(has_violation(dangling, ViolationKind::dangling_attachment));
  CHECK_THROWS_AS(euler_characteristic(dangling), Error);

  auto mirror = d;
  mirror.attachments[{0, 0, 0}] = {0, false};
  CHECK(has_violation(mirror, ViolationKind::mirror_attached));

  auto counts = d;
  counts.graph.edges[0].multiplicity += 1;
  CHECK(has_violation(counts, ViolationKind::multiplicity_mismatch));
}

TEST_CASE("singular subspaces of the built-in complexes") {
  auto d = davis_orbicomplex(example_defining_graph());
  auto s = singular_subspace(d);
  CHECK(marked_graph_isomorphism(topological_form(s), marked_tripod()).has_value());
  for (const auto& v : s.vertices) CHECK(v.mark != Mark::wall);

  auto [x1, f] = build_x1();
  CHECK(marked_graph_isomorphism(singular_subspace(x1), theta_graph()).has_value());

  CHECK(singular_subspace(standalone(oracle::disk("D", 3))).vertex_count() == 0);
}

TEST_CASE("topological form suppresses plain valence-2 vertices") {
  MarkedGraph path;
  for (int i = 0; i < 3; ++i) path.add_vertex("p" + std::to_string(i));
  path.add_edge("a", 0, 1, 2);
  path.add_edge("b", 1, 2, 2);
  auto t = topological_form(path);
  CHECK(t.vertex_count() == 2);
  CHECK(t.edge_count() == 1);
  CHECK(t.edges[0].id == "a");

  path.edges[1].multiplicity = 3;
  CHECK(topological_form(path).vertex_count() == 3);

  CHECK(topological_form(marked_tripod()) == marked_tripod());

  MarkedGraph sub;
  int x = sub.add_vertex("x"), y = sub.add_vertex("y");
  for (int i = 0; i < 3; ++i) {
    int a = sub.add_vertex("m" + std::to_string(i) + "a");
    int b = sub.add_vertex("m" + std::to_string(i) + "b");
    sub.add_edge("s" + std::to_string(i) + "0", x, a, 4);
    sub.add_edge("s" + std::to_string(i) + "1", a, b, 4);
    sub.add_edge("s" + std::to_string(i) + "2", y, b, 4);
  }
  auto smoothed = topological_form(sub);
  CHECK(smoothed.vertex_count() == 2);
  CHECK(marked_graph_isomorphism(smoothed, theta_graph()).has_value());
  CHECK(topological_form(smoothed) == smoothed);
}

TEST_CASE("marked graph isomorphism on small examples") {
  auto theta = theta_graph();
  MarkedGraph relabeled;
  int y = relabeled.add_vertex("q"), x = relabeled.add_vertex("p");
  relabeled.add_edge("k", y, x, 4);
  relabeled.add_edge("l", x, y, 4);
  relabeled.add_edge("m", y, x, 4);
  auto iso = marked_graph_isomorphism(theta, relabeled);
  REQUIRE(iso);
  CHECK(oracle::is_marked_isomorphism(theta, relabeled, *iso));
  CHECK_FALSE(marked_graph_isomorphism(theta, marked_tripod()));

  relabeled.edges[0].multiplicity = 2;
  CHECK_FALSE(marked_graph_isomorphism(theta, relabeled));
}

TEST_CASE("marked graph isomorphism agrees with brute force on random pairs") {
  std::mt19937 rng(20240611);
  int isomorphic = 0, distinct = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + static_cast<int>(rng() % 7);
    int m = static_cast<int>(rng() % (2 * n + 1));
    auto a = oracle::random_marked_graph(rng, n, m);
    MarkedGraph b;
    switch (trial % 3) {
      case 0: b = oracle::shuffled(a, rng); break;
      case 1: {
        b = oracle::shuffled(a, rng);
        if (b.edge_count() > 0) {
          b.edges[rng() % b.edge_count()].multiplicity += 1;
        } else {
          b.vertices[0].mark = b.vertices[0].mark == Mark::none ? Mark::ramification : Mark::none;
        }
        break;
      }
      default: b = oracle::random_marked_graph(rng, n, m);
    }
    bool expected = oracle::brute_force_isomorphic(a, b);
    auto found = marked_graph_isomorphism(a, b);
    CHECK(found.has_value() == expected);
    if (found) CHECK(oracle::is_marked_isomorphism(a, b, *found));
    (expected ? isomorphic : distinct) += 1;
  }
  CHECK(isomorphic >= 20);
  CHECK(distinct >= 20);
}

TEST_CASE("marked graph isomorphism is reflexive and symmetric up to 12 vertices") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + static_cast<int>(rng() % 12);
    auto a = oracle::random_marked_graph(rng, n, static_cast<int>(rng() % (2 * n + 1)));
    auto b = oracle::shuffled(a, rng);
    auto c = oracle::random_marked_graph(rng, n, a.edge_count());
    CHECK(marked_graph_isomorphism(a, a).has_value());
    CHECK(marked_graph_isomorphism(a, b).has_value());
    CHECK(marked_graph_isomorphism(b, a).has_value());
    CHECK(marked_graph_isomorphism(a, c).has_value() == marked_graph_isomorphism(c, a).has_value());
    CHECK(marked_graph_isomorphism(topological_form(a), topological_form(b)).has_value());
    CHECK(topological_form(topological_form(a)) == topological_form(a));
  }
}

TEST_CASE("ribbon neighbourhoods of planar and non-planar rotations") {
  MarkedGraph cycle;
  for (int i = 0; i < 3; ++i) cycle.add_vertex("v" + std::to_string(i));
  for (int i = 0; i < 3; ++i) cycle.add_edge("e" + std::to_string(i), i, (i + 1) % 3, 1);
  auto annulus = ribbon_neighborhood(cycle, edge_order_rotation(cycle));
  CHECK(annulus.genus == 0);
  CHECK(annulus.boundary.size() == 2);

  auto theta = theta_graph();
  RotationSystem planar{{{0, EdgeEnd::tail}, {1, EdgeEnd::tail}, {2, EdgeEnd::tail}},
                        {{0, EdgeEnd::head}, {2, EdgeEnd::head}, {1, EdgeEnd::head}}};
  auto pants = ribbon_neighborhood(theta, planar);
  CHECK(pants.genus == 0);
  CHECK(pants.boundary.size() == 3);

  RotationSystem twisted{{{0, EdgeEnd::tail}, {1, EdgeEnd::tail}, {2, EdgeEnd::tail}},
                         {{0, EdgeEnd::head}, {1, EdgeEnd::head}, {2, EdgeEnd::head}}};
  auto torus = ribbon_neighborhood(theta, twisted);
  CHECK(torus.genus == 1);
  CHECK(torus.boundary.size() == 1);

  RotationSystem missing{{{0, EdgeEnd::tail}, {1, EdgeEnd::tail}}, {{0, EdgeEnd::head}, {2, EdgeEnd::head}, {1, EdgeEnd::head}}};
  CHECK_THROWS_AS(ribbon_neighborhood(theta, missing), Error);
}

TEST_CASE("ribbon neighbourhoods satisfy the euler relation for random rotations") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 80; ++trial) {
    int n = 1 + static_cast<int>(rng() % 8);
    auto g = oracle::random_marked_graph(rng, n, static_cast<int>(rng() % (2 * n + 2)));
    auto rotation = edge_order_rotation(g);
    for (auto& darts : rotation) std::shuffle(darts.begin(), darts.end(), rng);
    auto r = ribbon_neighborhood(g, rotation);
    int closed = 0;
    for (const auto& c : r.components) closed += 2 - 2 * c.genus;
    CHECK(g.vertex_count() - g.edge_count() + static_cast<int>(r.boundary.size()) == closed);
    CHECK(static_cast<int>(r.components.size()) == g.component_count());
  }
}

TEST_CASE("dot export names marks and multiplicities") {
  auto dot = to_dot(marked_tripod());
  CHECK(dot.find("graph singular {") == 0);
  CHECK(dot.find("x4") != std::string::npos);
  CHECK(dot.find("(2)") != std::string::npos);
}

TEST_CASE("disk orbifolds on a loop are isomorphic exactly when cone counts agree") {
  CHECK(orbicomplex_isomorphic(disk_on_loop(3), disk_on_loop(3)));
  CHECK_FALSE(orbicomplex_isomorphic(disk_on_loop(3), disk_on_loop(4)));
  CHECK(piece_census(disk_on_loop(3)).at(disk_type(3)) == 1);
}
