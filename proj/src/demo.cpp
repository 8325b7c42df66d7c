#include "orbicover/demo.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>

#include "orbicover/error.hpp"
#include "orbicover/invariants.hpp"

namespace orbi {

namespace {

struct StageFailure {
  std::string what;
};

class Stage {
 public:
  explicit Stage(StageResult& result) : r_(result) {}

  void check(bool ok, const std::string& what) {
    if (!ok) throw StageFailure{what};
    r_.verdicts.push_back(what);
  }

  void verified(const CoveringMap& f, const std::string& name) {
    auto report = verify_covering(f);
    std::string failed;
    for (const auto& c : report.conditions) {
      if (!c.pass) failed += (failed.empty() ? "" : ",") + std::string(to_string(c.condition));
    }
    check(report.passed(), name + " passes verify_covering" + (failed.empty() ? "" : " (failed: " + failed + ")"));
  }

  StageResult& result() { return r_; }

 private:
  StageResult& r_;
};

std::string rational(const Rational& q) { return to_string(q); }

Json census_json(const Orbicomplex& c) {
  Json out = Json::object();
  for (const auto& [type, n] : piece_census(c)) out[type] = n;
  return out;
}

MarkedGraph star(int leaves, int multiplicity) {
  MarkedGraph g;
  int centre = g.add_vertex("o");
  for (int i = 0; i < leaves; ++i) {
    int leaf = g.add_vertex("l" + std::to_string(i), Mark::ramification);
    g.add_edge("e" + std::to_string(i), leaf, centre, multiplicity);
  }
  return g;
}

MarkedGraph theta(int multiplicity) {
  MarkedGraph g;
  int x = g.add_vertex("x"), y = g.add_vertex("y");
  for (int i = 0; i < 3; ++i) g.add_edge("c" + std::to_string(i), x, y, multiplicity);
  return g;
}

bool singular_isomorphic(const Orbicomplex& c, const MarkedGraph& expected) {
  return marked_graph_isomorphism(topological_form(singular_subspace(c)), topological_form(expected)).has_value();
}

std::vector<int> sorted_mirror_counts(const Orbicomplex& c) {
  std::vector<int> counts;
  for (const auto& p : c.pieces) counts.push_back(p.mirror_count());
  std::sort(counts.begin(), counts.end());
  return counts;
}

Json normal_form_summary(const std::optional<NormalForm>& nf) {
  if (!nf) return nullptr;
  Json comps = Json::array();
  for (const auto& c : nf->components) comps.push_back({{"genus", c.genus}, {"boundary_circles", c.boundary_circles}});
  return comps;
}

bool single_planar_component(const std::optional<NormalForm>& nf, int boundary) {
  return nf && nf->components.size() == 1 && nf->components[0].genus == 0 &&
         nf->components[0].boundary_circles == boundary;
}

std::map<std::string, int> default_x2_census() { return {{disk_type(6), 8}}; }
std::map<std::string, int> pair_census() { return {{disk_type(10), 4}, {disk_type(6), 8}}; }

template <typename T>
bool round_trips(const T& x, Json (*write)(const T&), T (*read)(const Json&)) {
  return read(parse_json(write(x).dump())) == x;
}

Json orbicomplex_json(const Orbicomplex& c) { return to_json(c); }
Json cover_json(const CoveringMap& f) { return to_json(f); }
Json graph_json(const MarkedGraph& g) { return to_json(g); }

}  // namespace

DemoReport run_counterexample_demo(const DemoOptions& options) {
  DemoReport report;
  auto& art = report.artifacts;

  auto stage1 = [&](Stage& s) {
    auto& r = s.result();
    art.gamma = example_defining_graph();
    const auto& g = *art.gamma;
    r.inputs = {{"defining_graph", {{"vertices", g.size()}, {"edges", g.edges().size()}}}};
    auto branches = branch_decomposition(g);
    art.davis = davis_orbicomplex(g);
    const auto& d = *art.davis;
    auto chi = euler_characteristic(d);
    auto ab = abelianization(fundamental_group_presentation(d));
    r.invariants = {{"branches", branches.size()},
                    {"mirror_counts", sorted_mirror_counts(d)},
                    {"euler", rational(chi)},
                    {"abelianization", to_string(ab)},
                    {"singular_subspace", to_json(singular_subspace(d))}};
    s.check(one_endedness_check(g), "defining graph is one-ended");
    s.check(sorted_mirror_counts(d) == std::vector<int>{5, 5, 5, 5, 7, 7}, "davis pieces have mirror counts {7,7,5,5,5,5}");
    s.check(chi == Rational(-9, 2), "chi(D) = -9/2");
    s.check(singular_isomorphic(d, star(3, 4)), "singular(D) is a tripod with three order-2 marks");
    s.check(ab.free_rank == 0 && ab.two_rank() == g.size() &&
                std::all_of(ab.torsion.begin(), ab.torsion.end(), [](const BigInt& t) { return t == 2; }),
            "H1(D) = (Z/2)^" + std::to_string(g.size()));
  };

  auto stage2 = [&](Stage& s) {
    auto& r = s.result();
    auto [x1, f] = build_x1();
    art.x1 = x1;
    art.x1_cover = f;
    auto chi = euler_characteristic(x1);
    r.inputs = {{"base", "D"}};
    r.invariants = {{"degree", f.degree},
                    {"euler", rational(chi)},
                    {"census", census_json(x1)},
                    {"abelianization", to_string(abelianization(fundamental_group_presentation(x1)))},
                    {"singular_subspace", to_json(singular_subspace(x1))}};
    s.verified(f, "X1 -> D");
    s.check(f.degree == 2, "X1 -> D has degree 2");
    s.check(chi == Rational(-9) && chi == 2 * euler_characteristic(*art.davis), "chi(X1) = -9 = 2 chi(D)");
    s.check(singular_isomorphic(x1, theta(4)), "singular(X1) is a theta graph");
  };

  auto stage3 = [&](Stage& s) {
    auto& r = s.result();
    auto covers = enumerate_double_covers(*art.x1);
    auto want = options.x2_census.value_or(default_x2_census());
    Json candidates = Json::array();
    std::vector<int> matches;
    for (int i = 0; i < static_cast<int>(covers.size()); ++i) {
      s.verified(covers[i].map, "double cover " + std::to_string(i) + " of X1");
      candidates.push_back({{"labeling", to_json(covers[i].labeling)}, {"census", census_json(covers[i].complex)}});
      if (piece_census(covers[i].complex) == want) matches.push_back(i);
    }
    Json want_json = Json::object();
    for (const auto& [t, n] : want) want_json[t] = n;
    r.inputs = {{"base", "X1"}, {"census_sought", want_json}};
    r.invariants = {{"double_covers", candidates}};
    s.check(!matches.empty(), "some double cover of X1 has the sought census");
    s.check(matches.size() == 1, "the X2 census singles out one cover");
    const auto& chosen = covers[matches[0]];
    art.x2 = chosen.complex;
    art.x2_cover = chosen.map;
    auto chi = euler_characteristic(*art.x2);
    r.invariants["selected"] = matches[0];
    r.invariants["euler"] = rational(chi);
    s.check(chi == Rational(-18), "chi(X2) = -18");
    s.verified(compose(*art.x1_cover, *art.x2_cover), "X2 -> D");
  };

  auto stage4 = [&](Stage& s) {
    auto& r = s.result();
    auto covers = enumerate_double_covers(*art.x2);
    auto want = pair_census();
    std::vector<int> candidates;
    Json listing = Json::array();
    std::vector<std::optional<NormalForm>> forms(covers.size());
    std::vector<MarkedGraph> singular(covers.size());
    for (int i = 0; i < static_cast<int>(covers.size()); ++i) {
      s.verified(covers[i].map, "double cover " + std::to_string(i) + " of X2");
      forms[i] = planar_normal_form(covers[i].complex);
      singular[i] = topological_form(singular_subspace(covers[i].complex));
      listing.push_back({{"labeling", to_json(covers[i].labeling)},
                         {"census", census_json(covers[i].complex)},
                         {"normal_form", normal_form_summary(forms[i])}});
      if (piece_census(covers[i].complex) == want) candidates.push_back(i);
    }
    r.inputs = {{"base", "X2"}, {"predicate", options.invert_pair_predicate
                                                  ? "isomorphic singular subspaces, different normal forms"
                                                  : "non-isomorphic singular subspaces, equal normal forms"}};
    r.invariants = {{"double_covers", listing}, {"candidates", candidates}};

    Json pairs = Json::array();
    std::optional<std::pair<int, int>> found;
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      for (std::size_t b = a + 1; b < candidates.size(); ++b) {
        int i = candidates[a], j = candidates[b];
        bool iso = marked_graph_isomorphism(singular[i], singular[j]).has_value();
        bool cert = homotopy_equivalence_certificate(covers[i].complex, covers[j].complex).has_value();
        bool ok = options.invert_pair_predicate ? (iso && !cert) : (!iso && cert);
        pairs.push_back({{"pair", {i, j}}, {"singular_isomorphic", iso}, {"normal_forms_equal", cert}});
        if (ok && !found) found = std::pair{i, j};
      }
    }
    r.invariants["pairs"] = pairs;
    s.check(found.has_value(), "pair search finds a qualifying pair");
    const auto& y = covers[found->first];
    const auto& z = covers[found->second];
    art.y = y.complex;
    art.z = z.complex;
    art.y_cover = y.map;
    art.z_cover = z.map;
    auto cmp = compare_report(*art.y, *art.z);
    r.invariants["selected"] = {found->first, found->second};
    r.invariants["compare"] = to_json(cmp);
    s.check(euler_characteristic(*art.y) == Rational(-36) && euler_characteristic(*art.z) == Rational(-36),
            "chi(Y) = chi(Z) = -36");
    s.check(!cmp.singular_bijection.has_value(), "singular(Y) and singular(Z) are not isomorphic");
    s.check(single_planar_component(forms[found->first], 6) && single_planar_component(forms[found->second], 6),
            "normal forms are one genus-0 neighbourhood with 6 boundary circles");
    s.check(cmp.certificate == CertificateStatus::present, "homotopy certificate present");
    s.check(cmp.abelian[0] && cmp.abelian[0] == cmp.abelian[1], "H1(Y) = H1(Z)");
    s.verified(compose(*art.x2_cover, *art.y_cover), "Y -> X1");
  };

  auto stage5 = [&](Stage& s) {
    auto& r = s.result();
    art.tower6 = surface_over_disk_tower(3);
    art.tower10 = surface_over_disk_tower(7);
    Json towers = Json::array();
    for (const auto* t : {&*art.tower6, &*art.tower10}) {
      s.verified(t->upper, "tower over " + piece_type(t->disk) + " (upper)");
      s.verified(t->lower, "tower over " + piece_type(t->disk) + " (lower)");
      towers.push_back({{"disk", piece_type(t->disk)},
                        {"surface_genus", t->surface.genus},
                        {"euler", {rational(piece_euler_characteristic(t->surface)),
                                   rational(piece_euler_characteristic(t->annulus)),
                                   rational(piece_euler_characteristic(t->disk))}}});
    }
    s.check(art.tower6->disk.cones.size() == 6 && art.tower6->surface.genus == 3, "D^2(6) tower uses g = 3");
    s.check(art.tower10->disk.cones.size() == 10 && art.tower10->surface.genus == 7, "D^2(10) tower uses g = 7");

    Json hats = Json::object();
    for (int k = 0; k < 2; ++k) {
      const Orbicomplex& base = k == 0 ? *art.y : *art.z;
      std::string name = k == 0 ? "Y" : "Z";
      auto [hat, f] = torsion_free_cover(base);
      s.verified(f, name + "^ -> " + name);
      s.check(f.degree == 4, name + "^ -> " + name + " has degree 4");
      auto chi = euler_characteristic(hat);
      s.check(chi == Rational(-144), "chi(" + name + "^) = -144");
      s.check(torsion_freeness(hat), name + "^ is torsion-free");
      auto base_singular = singular_subspace(base);
      s.check(singular_isomorphic(hat, disjoint_union({base_singular, base_singular, base_singular, base_singular})),
              "singular(" + name + "^) is four copies of singular(" + name + ")");
      auto genera = std::vector<int>{};
      for (const auto& p : hat.pieces) genera.push_back(p.genus);
      std::sort(genera.begin(), genera.end());
      genera.erase(std::unique(genera.begin(), genera.end()), genera.end());
      s.check(genera == std::vector<int>{3, 7}, name + "^ pieces have genus 3 and 7");
      auto homology = presentation_homology(fundamental_group_presentation(hat));
      s.check(Rational(homology.h1 - homology.h2) == 1 - chi, "rank H1 - rank H2 = 1 - chi(" + name + "^)");
      hats[name + "^"] = {{"euler", rational(chi)},
                          {"census", census_json(hat)},
                          {"h1_rank", homology.h1},
                          {"h2_rank", homology.h2}};
      (k == 0 ? art.y_hat : art.z_hat) = hat;
      (k == 0 ? art.y_hat_cover : art.z_hat_cover) = f;
    }
    s.verified(compose(*art.y_cover, *art.y_hat_cover), "Y^ -> X2");
    auto cmp = compare_report(*art.y_hat, *art.z_hat);
    s.check(!cmp.singular_bijection.has_value(), "singular(Y^) and singular(Z^) are not isomorphic");
    s.check(cmp.certificate == CertificateStatus::present, "homotopy certificate present for Y^, Z^");
    r.inputs = {{"bases", {"Y", "Z"}}};
    r.invariants = {{"towers", towers}, {"covers", hats}, {"compare", to_json(cmp)}};
  };

  auto stage6 = [&](Stage& s) {
    auto& r = s.result();
    int complexes = 0, maps = 0;
    for (const auto* c : {&art.davis, &art.x1, &art.x2, &art.y, &art.z, &art.y_hat, &art.z_hat}) {
      s.check(round_trips<Orbicomplex>(**c, orbicomplex_json, orbicomplex_from_json) &&
                  round_trips<MarkedGraph>((*c)->graph, graph_json, marked_graph_from_json),
              "complex " + std::to_string(complexes) + " round-trips through JSON");
      ++complexes;
    }
    for (const auto* f : {&art.x1_cover, &art.x2_cover, &art.y_cover, &art.z_cover, &art.y_hat_cover, &art.z_hat_cover}) {
      s.check(round_trips<CoveringMap>(**f, cover_json, covering_map_from_json),
              "covering map " + std::to_string(maps) + " round-trips through JSON");
      ++maps;
    }
    r.invariants = {{"complexes", complexes}, {"covering_maps", maps}};
    if (!options.export_dir.empty()) {
      namespace fs = std::filesystem;
      fs::path dir(options.export_dir);
      fs::create_directories(dir);
      write_json_file((dir / "gamma.json").string(), to_json(*art.gamma));
      const std::pair<const char*, const std::optional<Orbicomplex>*> complexes_out[] = {
          {"davis", &art.davis}, {"x1", &art.x1}, {"x2", &art.x2}, {"y", &art.y},
          {"z", &art.z}, {"y_hat", &art.y_hat}, {"z_hat", &art.z_hat}};
      for (const auto& [name, c] : complexes_out) write_json_file((dir / (std::string(name) + ".json")).string(), to_json(**c));
      const std::pair<const char*, const std::optional<CoveringMap>*> maps_out[] = {
          {"x1_cover", &art.x1_cover}, {"x2_cover", &art.x2_cover}, {"y_cover", &art.y_cover},
          {"z_cover", &art.z_cover}, {"y_hat_cover", &art.y_hat_cover}, {"z_hat_cover", &art.z_hat_cover}};
      for (const auto& [name, f] : maps_out) write_json_file((dir / (std::string(name) + ".json")).string(), to_json(**f));
      r.inputs = {{"export_dir", options.export_dir}};
    }
  };

  const std::pair<const char*, std::function<void(Stage&)>> stages[] = {
      {"davis orbicomplex", stage1}, {"X1", stage2},     {"X2 selection", stage3},
      {"pair search", stage4},       {"torsion-free towers", stage5}, {"report", stage6}};

  for (int i = 0; i < 6; ++i) {
    StageResult result;
    result.name = stages[i].first;
    Stage stage(result);
    auto start = std::chrono::steady_clock::now();
    try {
      stages[i].second(stage);
    } catch (const StageFailure& f) {
      report.failed_stage = i + 1;
      report.failure = f.what;
      return report;
    } catch (const Error& e) {
      report.failed_stage = i + 1;
      report.failure = e.what();
      return report;
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.stages.push_back(std::move(result));
  }
  report.passed = true;
  return report;
}

Json to_json(const DemoReport& r, bool with_timings) {
  Json stages = Json::array();
  for (int i = 0; i < static_cast<int>(r.stages.size()); ++i) {
    const auto& s = r.stages[i];
    Json js{{"stage", i + 1}, {"name", s.name}, {"inputs", s.inputs}, {"invariants", s.invariants}, {"verdicts", s.verdicts}};
    if (with_timings) js["seconds"] = s.seconds;
    stages.push_back(std::move(js));
  }
  Json out{{"passed", r.passed}, {"stages", stages}};
  if (!r.passed) out["failure"] = {{"stage", r.failed_stage}, {"assertion", r.failure}};
  return out;
}

}  // namespace orbi
