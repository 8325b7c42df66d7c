#include <catch2/catch_amalgamated.hpp>

#include <set>

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

// Two hubs joined by three paths, each with `interior` subdivision vertices.
DefiningGraph subdivided_theta(int interior) {
  std::vector<std::string> vs{"x", "y"};
  std::vector<std::pair<std::string, std::string>> es;
  for (int a = 0; a < 3; ++a) {
    std::string prev = "x";
    for (int i = 0; i < interior; ++i) {
      std::string v = "a" + std::to_string(a) + "_" + std::to_string(i);
      vs.push_back(v);
      es.emplace_back(prev, v);
      prev = v;
    }
    es.emplace_back(prev, "y");
  }
  return DefiningGraph(vs, es);
}

template <typename T>
std::pair<T, T> ordered(T a, T b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

DefiningGraph path_graph(int n) {
  std::vector<std::string> vs;
  std::vector<std::pair<std::string, std::string>> es;
  for (int i = 0; i < n; ++i) {
    vs.push_back("p" + std::to_string(i));
    if (i) es.emplace_back(vs[i - 1], vs[i]);
  }
  return DefiningGraph(vs, es);
}

}  // namespace

TEST_CASE("defining graphs reject loops, repeats and unknown vertices") {
  CHECK(kind_of([] { DefiningGraph({"a"}, {{"a", "a"}}); }) == ErrorKind::invalid_graph);
  CHECK(kind_of([] { DefiningGraph({"a", "b"}, {{"a", "b"}, {"b", "a"}}); }) == ErrorKind::invalid_graph);
  CHECK(kind_of([] { DefiningGraph({"a"}, {{"a", "z"}}); }) == ErrorKind::invalid_graph);
}

TEST_CASE("coxeter presentations") {
  auto one = racg_presentation(DefiningGraph({"s"}, {}));
  CHECK(one.generators == std::vector<std::string>{"s"});
  CHECK(one.relators == std::vector<Word>{{{"s", 1}, {"s", 1}}});

  auto edge = racg_presentation(DefiningGraph({"t", "s"}, {{"s", "t"}}));
  CHECK(edge.generators == std::vector<std::string>{"s", "t"});
  REQUIRE(edge.relators.size() == 3);
  CHECK(edge.relators[2] == Word{{"s", 1}, {"t", 1}, {"s", 1}, {"t", 1}});

  auto gamma = example_defining_graph();
  auto p = racg_presentation(gamma);
  CHECK(p.generators.size() == 25);
  CHECK(p.relators.size() == 25 + 28);
  CHECK(gamma.edges().size() == 28);
}

TEST_CASE("branch decomposition of the rigidity example") {
  auto gamma = example_defining_graph();
  auto branches = branch_decomposition(gamma);
  REQUIRE(branches.size() == 6);
  std::multiset<int> sizes;
  std::map<std::pair<std::string, std::string>, int> joins;
  std::set<std::pair<int, int>> covered;
  for (const auto& b : branches) {
    sizes.insert(b.size());
    CHECK(b.start_essential);
    CHECK(b.end_essential);
    joins[ordered(b.path.front(), b.path.back())] += 1;
    for (int i = 1; i + 1 < b.size(); ++i) CHECK(gamma.valence(gamma.index(b.path[i])) == 2);
    for (int i = 0; i + 1 < b.size(); ++i) {
      auto e = ordered(gamma.index(b.path[i]), gamma.index(b.path[i + 1]));
      CHECK(gamma.adjacent(e.first, e.second));
      CHECK(covered.insert(e).second);
    }
  }
  CHECK(sizes == std::multiset<int>{5, 5, 5, 5, 7, 7});
  CHECK(covered.size() == gamma.edges().size());
  CHECK(joins[{"v1", "v2"}] == 2);
  CHECK(joins[{"v1", "v3"}] == 2);
  CHECK(joins[{"v2", "v3"}] == 2);
  for (const auto& b : branches) {
    if (b.size() == 7) CHECK(ordered(b.path.front(), b.path.back()) == std::pair<std::string, std::string>("v1", "v2"));
  }
}

TEST_CASE("branch decomposition edge cases") {
  auto theta = branch_decomposition(subdivided_theta(2));
  CHECK(theta.size() == 3);
  for (const auto& b : theta) CHECK(b.size() == 4);
  CHECK(kind_of([] { branch_decomposition(path_graph(5)); }) == ErrorKind::no_essential_vertices);
  CHECK(kind_of([] {
          DefiningGraph cycle({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"a", "d"}});
          branch_decomposition(cycle);
        }) == ErrorKind::no_essential_vertices);
}

TEST_CASE("branch polygons") {
  auto p = branch_polygon(Branch{{"a", "b", "c", "d", "e"}, true, true}, "P");
  REQUIRE(p.boundary.size() == 1);
  const auto& segs = p.boundary[0].segments;
  REQUIRE(segs.size() == 7);
  for (int i = 0; i < 5; ++i) CHECK(segs[i].kind == SegmentKind::mirror);
  CHECK(segs[5].kind == SegmentKind::free);
  CHECK(segs[6].kind == SegmentKind::free);
  CHECK(p.genus == 0);
  CHECK(p.cones.empty());
  CHECK(piece_euler_characteristic(p) == Rational(-1, 2));
  CHECK(piece_euler_characteristic(branch_polygon(Branch{{"a", "b", "c", "d", "e", "f", "g"}, true, true})) == -1);
  CHECK(piece_euler_characteristic(branch_polygon(Branch{{"a", "b"}, true, true})) == Rational(1, 4));
  CHECK(kind_of([] { branch_polygon(Branch{{"a"}, true, true}); }) == ErrorKind::branch_too_short);
}

TEST_CASE("davis orbicomplex of the rigidity example") {
  auto d = davis_orbicomplex(example_defining_graph());
  CHECK(validate_complex(d).empty());
  CHECK(d.pieces.size() == 6);
  std::multiset<int> mirrors;
  for (const auto& p : d.pieces) mirrors.insert(p.mirror_count());
  CHECK(mirrors == std::multiset<int>{5, 5, 5, 5, 7, 7});
  CHECK(d.graph.vertex_count() == 4);
  CHECK(d.graph.edge_count() == 3);
  int walls = 0;
  for (const auto& v : d.graph.vertices) walls += v.mark == Mark::wall;
  CHECK(walls == 3);
  for (const auto& e : d.graph.edges) {
    CHECK(e.multiplicity == 4);
    CHECK(d.graph.vertices[e.tail].mark == Mark::wall);
  }
  CHECK(euler_characteristic(d) == Rational(-9, 2));
  CHECK(oracle::weighted_cell_euler(d) == Rational(-9, 2));
  CHECK(d.rotation.has_value());
}

TEST_CASE("davis orbicomplex of a subdivided theta") {
  auto d = davis_orbicomplex(subdivided_theta(4));
  CHECK(validate_complex(d).empty());
  CHECK(d.pieces.size() == 3);
  int walls = 0;
  for (const auto& v : d.graph.vertices) walls += v.mark == Mark::wall;
  CHECK(walls == 2);
  CHECK(euler_characteristic(d) == oracle::weighted_cell_euler(d));
}

TEST_CASE("davis orbicomplex rejects branches that end at a leaf") {
  DefiningGraph spider({"c", "a", "b", "d", "e"}, {{"c", "a"}, {"c", "b"}, {"c", "d"}, {"d", "e"}});
  CHECK(kind_of([&] { davis_orbicomplex(spider); }) == ErrorKind::unsupported_defining_graph);
}

TEST_CASE("one-endedness") {
  CHECK(one_endedness_check(example_defining_graph()));
  CHECK_FALSE(one_endedness_check(DefiningGraph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}})));
  CHECK_FALSE(one_endedness_check(DefiningGraph({"a", "b"}, {})));
  // A vertex separates a path, an edge separates two squares sharing it.
  CHECK_FALSE(one_endedness_check(path_graph(4)));
  CHECK(one_endedness_check(DefiningGraph({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"a", "d"}})));
  CHECK_FALSE(one_endedness_check(DefiningGraph({"a", "b", "c", "d", "e", "f"},
                                                {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}, {"c", "e"}, {"e", "f"}, {"f", "d"}})));
}
