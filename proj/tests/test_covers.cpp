#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "orbicover/coxeter.hpp"
#include "orbicover/error.hpp"

using namespace orbi;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::parse;
}

Piece polygon(int n) {
  std::vector<std::string> path;
  for (int i = 0; i < n; ++i) path.push_back("s" + std::to_string(i));
  return branch_polygon(Branch{path, true, true}, "P" + std::to_string(n));
}

std::shared_ptr<const Orbicomplex> shared(Orbicomplex c) { return std::make_shared<const Orbicomplex>(std::move(c)); }

void require_verified(const CoveringMap& f) {
  auto r = verify_covering(f);
  for (const auto& c : r.conditions) {
    INFO(to_string(c.condition));
    for (const auto& w : c.witnesses) INFO(w);
    CHECK(c.pass);
  }
  CHECK(oracle::multiplicative(f));
  CHECK(oracle::weighted_cell_euler(*f.source) == f.degree * oracle::weighted_cell_euler(*f.target));
}

int smooth_fibers(const CoveringMap& f) {
  int n = 0;
  for (const auto& fiber : f.point_fibers) {
    if (fiber.target.point.kind != PointKind::cone) continue;
    bool all_smooth = !fiber.preimages.empty();
    for (const auto& p : fiber.preimages) all_smooth &= p.point.kind == PointKind::smooth;
    n += all_smooth;
  }
  return n;
}

Orbicomplex disk_on_loop(int cones) {
  Orbicomplex c;
  int v = c.graph.add_vertex("v");
  c.graph.add_edge("e", v, v, 1);
  c.pieces.push_back(oracle::disk("D", cones));
  c.attachments[{0, 0, 0}] = {0, false};
  c.rotation = edge_order_rotation(c.graph);
  return c;
}

const Orbicomplex& x2() {
  static const Orbicomplex c = [] {
    for (auto& dc : enumerate_double_covers(build_x1().first)) {
      if (piece_census(dc.complex) == std::map<std::string, int>{{disk_type(6), 8}}) return dc.complex;
    }
    return Orbicomplex{};
  }();
  return c;
}

}  // namespace

TEST_CASE("identity covers verify") {
  auto d = shared(davis_orbicomplex(example_defining_graph()));
  auto id = identity_cover(d);
  CHECK(id.degree == 1);
  require_verified(id);
  require_verified(identity_cover(shared(build_x1().first)));
}

TEST_CASE("reflection doubles of polygons") {
  for (int n = 2; n <= 12; ++n) {
    INFO("mirrors " << n);
    auto [disk, f] = reflection_double(polygon(n));
    CHECK(f.degree == 2);
    CHECK(disk.cones.size() == static_cast<std::size_t>(n - 1));
    CHECK(disk.genus == 0);
    CHECK(disk.boundary.size() == 1);
    require_verified(f);
    CHECK(piece_euler_characteristic(disk) == 2 * piece_euler_characteristic(polygon(n)));
  }
  CHECK(piece_euler_characteristic(reflection_double(polygon(7)).first) == -2);
  CHECK(piece_euler_characteristic(reflection_double(polygon(2)).first) == Rational(1, 2));
  CHECK(kind_of([] { reflection_double(oracle::disk("D", 3)); }) == ErrorKind::not_a_polygon);
}

TEST_CASE("rotation doubles of cone disks") {
  for (int m = 1; m <= 8; ++m) {
    INFO("m = " << m);
    auto target = oracle::disk("D", m + 1);
    auto [cover, f] = rotation_double(target);
    CHECK(f.degree == 2);
    CHECK(cover.cones.size() == static_cast<std::size_t>(2 * m));
    require_verified(f);
    CHECK(smooth_fibers(f) == 1);
    int doubled = 0;
    for (const auto& fiber : f.point_fibers) doubled += fiber.preimages.size() == 2;
    CHECK(doubled == m);
  }
  CHECK(piece_euler_characteristic(rotation_double(oracle::disk("D", 2)).first) == 0);
  CHECK(kind_of([] { rotation_double(oracle::disk("D", 1)); }) == ErrorKind::not_a_disk_orbifold);
  CHECK(kind_of([] { rotation_double(polygon(4)); }) == ErrorKind::not_a_disk_orbifold);
}

TEST_CASE("reflection then rotation composes to degree four") {
  for (int n = 3; n <= 9; ++n) {
    auto [disk, reflect] = reflection_double(polygon(n));
    auto [cover, rotate] = rotation_double(disk);
    auto composite = compose(reflect, rotate);
    CHECK(composite.degree == 4);
    require_verified(composite);
  }
}

TEST_CASE("the explicit degree-two cover of the davis orbicomplex") {
  auto [x1, f] = build_x1();
  require_verified(f);
  CHECK(f.degree == 2);
  CHECK(euler_characteristic(x1) == -9);
  CHECK(piece_census(x1) == std::map<std::string, int>{{disk_type(6), 2}, {disk_type(4), 4}});
  CHECK(x1.graph.vertex_count() == 2);
  CHECK(x1.graph.edge_count() == 3);
  for (const auto& e : x1.graph.edges) CHECK(e.multiplicity == 4);
}

TEST_CASE("verification flags a corrupted local degree") {
  auto [x1, f] = build_x1();
  auto bad = f;
  bad.piece_map[0].degree = 3;
  auto r = verify_covering(bad);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r[Condition::fiber_sums].pass);
  CHECK_FALSE(r[Condition::piece_euler].pass);
  CHECK_FALSE(r[Condition::fiber_sums].witnesses.empty());

  auto dangling = f;
  dangling.vertex_map.pop_back();
  CHECK(kind_of([&] { verify_covering(dangling); }) == ErrorKind::mismatched_complexes);

  auto wrong_edge = f;
  std::swap(wrong_edge.edge_map[0], wrong_edge.edge_map[1]);
  CHECK_FALSE(verify_covering(wrong_edge).passed());
}

TEST_CASE("double cover with every reflection labelled one rebuilds X1") {
  auto d = davis_orbicomplex(example_defining_graph());
  auto p = fundamental_group_presentation(d);
  TwoTorsionLabeling all;
  for (const auto& g : p.generators) {
    if (g.rfind("m:", 0) == 0 || g.rfind("w:", 0) == 0) all.values[g] = 1;
  }
  CHECK(is_homomorphism(p, all));
  auto [cover, f] = double_cover(d, all);
  require_verified(f);
  CHECK(orbicomplex_isomorphic(cover, build_x1().first));

  CHECK(kind_of([&] { double_cover(d, TwoTorsionLabeling{}); }) == ErrorKind::not_surjective);
  TwoTorsionLabeling broken;
  broken.values[p.generators.front()] = 1;
  CHECK_FALSE(is_homomorphism(p, broken));
  CHECK(kind_of([&] { double_cover(d, broken); }) == ErrorKind::not_a_homomorphism);
}

TEST_CASE("double covers of X1") {
  auto covers = enumerate_double_covers(build_x1().first);
  REQUIRE(covers.size() == 3);
  int x2_like = 0;
  for (std::size_t i = 0; i < covers.size(); ++i) {
    require_verified(covers[i].map);
    CHECK(euler_characteristic(covers[i].complex) == -18);
    CHECK(covers[i].complex.graph.component_count() == 1);
    if (i) CHECK(covers[i - 1].labeling < covers[i].labeling);
    x2_like += piece_census(covers[i].complex) == std::map<std::string, int>{{disk_type(6), 8}};
  }
  CHECK(x2_like == 1);
  CHECK(x2().graph.vertex_count() == 4);
  CHECK(x2().graph.edge_count() == 6);
}

TEST_CASE("double covers of X2") {
  auto covers = enumerate_double_covers(x2());
  CHECK(covers.size() == 7);
  int candidates = 0;
  for (const auto& dc : covers) {
    require_verified(dc.map);
    CHECK(euler_characteristic(dc.complex) == -36);
    candidates += piece_census(dc.complex) == std::map<std::string, int>{{disk_type(10), 4}, {disk_type(6), 8}};
    CHECK(verify_covering(compose(identity_cover(dc.map.target), dc.map)).passed());
  }
  CHECK(candidates == 6);
}

TEST_CASE("double covers of a cone disk on a loop") {
  auto covers = enumerate_double_covers(disk_on_loop(2));
  REQUIRE(covers.size() == 1);
  require_verified(covers[0].map);
  CHECK(kind_of([] { enumerate_double_covers(davis_orbicomplex(example_defining_graph())); }) ==
        ErrorKind::mirrors_present);
}

TEST_CASE("surface over disk towers") {
  for (int g = 1; g <= 8; ++g) {
    INFO("genus " << g);
    auto t = surface_over_disk_tower(g, 1 + g % 3);
    require_verified(t.upper);
    require_verified(t.lower);
    auto composite = compose(t.lower, t.upper);
    CHECK(composite.degree == 4);
    require_verified(composite);
    CHECK(t.surface.genus == g);
    CHECK(t.surface.boundary.size() == 4);
    CHECK(t.annulus.cones.size() == static_cast<std::size_t>(2 * g + 2));
    CHECK(t.disk.cones.size() == static_cast<std::size_t>(g + 3));
  }
  auto t3 = surface_over_disk_tower(3);
  CHECK(piece_euler_characteristic(t3.surface) == -8);
  CHECK(piece_euler_characteristic(t3.annulus) == -4);
  CHECK(piece_euler_characteristic(t3.disk) == -2);
  CHECK(surface_over_disk_tower(7).disk.cones.size() == 10);
  CHECK(kind_of([] { surface_over_disk_tower(0); }) == ErrorKind::bad_genus);
}

TEST_CASE("torsion-free covers") {
  auto covers = enumerate_double_covers(x2());
  for (const auto& dc : covers) {
    auto [hat, f] = torsion_free_cover(dc.complex);
    CHECK(f.degree == 4);
    require_verified(f);
    CHECK(euler_characteristic(hat) == -144);
    CHECK(torsion_freeness(hat));
    CHECK(hat.graph.component_count() == 4);
    auto s = singular_subspace(dc.complex);
    CHECK(marked_graph_isomorphism(topological_form(singular_subspace(hat)), topological_form(disjoint_union({s, s, s, s})))
              .has_value());
    require_verified(compose(dc.map, f));
  }
  CHECK(kind_of([] { torsion_free_cover(davis_orbicomplex(example_defining_graph())); }) == ErrorKind::unsupported_piece);
}

TEST_CASE("singular maps of verified covers are graph coverings") {
  auto [x1, f] = build_x1();
  // Condition 5 in isolation: every target edge is covered twice.
  std::vector<int> hits(f.target->graph.edge_count());
  for (const auto& walk : f.edge_map) {
    for (const auto& d : walk) hits[d.edge] += 1;
  }
  for (int h : hits) CHECK(h == 2);
  CHECK(verify_covering(f)[Condition::singular_covering].pass);
}
