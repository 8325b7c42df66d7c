// Command-line front end. Exit codes: 0 success, 2 unreadable input,
// 3 failed precondition, 4 failed verification.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "orbicover/covers.hpp"
#include "orbicover/coxeter.hpp"
#include "orbicover/demo.hpp"
#include "orbicover/error.hpp"
#include "orbicover/invariants.hpp"
#include "orbicover/serialize.hpp"

using namespace orbi;

namespace {

constexpr int exit_parse = 2;
constexpr int exit_precondition = 3;
constexpr int exit_verification = 4;

struct Output {
  std::string file;
  bool json = false;

  // Text goes to stdout; JSON goes to --out when given, else stdout.
  void emit(const std::string& text, const Json& j) const {
    if (!file.empty()) write_json_file(file, j);
    if (json && file.empty()) {
      std::cout << j.dump(2) << "\n";
    } else if (!json) {
      std::cout << text;
    }
  }
};

std::string word_text(const Word& w) {
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += " ";
    out += l.generator;
    if (l.exponent != 1) out += "^" + std::to_string(l.exponent);
  }
  return out;
}

std::string presentation_text(const GroupPresentation& p) {
  std::ostringstream out;
  out << "generators: " << p.generators.size() << "\n";
  for (const auto& g : p.generators) out << "  " << g << "\n";
  out << "relators: " << p.relators.size() << "\n";
  for (const auto& w : p.relators) out << "  " << word_text(w) << "\n";
  return out.str();
}

std::string graph_text(const MarkedGraph& g) {
  std::ostringstream out;
  out << "vertices: " << g.vertex_count() << "\n";
  for (const auto& v : g.vertices) {
    out << "  " << v.id;
    if (v.mark == Mark::ramification) out << " [order 2]";
    if (v.mark == Mark::wall) out << " [wall " << v.wall << "]";
    out << "\n";
  }
  out << "edges: " << g.edge_count() << "\n";
  for (const auto& e : g.edges) {
    out << "  " << e.id << ": " << g.vertices[e.tail].id << " -> " << g.vertices[e.head].id
        << " x" << e.multiplicity << "\n";
  }
  return out.str();
}

std::string verify_text(const VerifyReport& r) {
  std::ostringstream out;
  for (const auto& c : r.conditions) {
    out << to_string(c.condition) << ": " << (c.pass ? "PASS" : "FAIL");
    for (const auto& w : c.witnesses) out << "\n  " << w;
    out << "\n";
  }
  out << (r.passed() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string compare_summary(const CompareReport& r) {
  std::string homeo = !r.singular_bijection ? "not homeomorphic"
                      : r.homeomorphic_compatible() ? "homeomorphism not excluded"
                                                    : "not homeomorphic";
  std::string homotopy = r.certificate == CertificateStatus::present ? "homotopy certificate present"
                         : r.certificate == CertificateStatus::absent ? "not homotopy equivalent"
                                                                        : "homotopy equivalence inconclusive";
  return homeo + "; " + homotopy;
}

Orbicomplex read_complex(const std::string& path) { return orbicomplex_from_json(read_json_file(path)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflection orbicomplexes, their finite covers and invariants"};
  app.require_subcommand(1);
  Output out;
  int status = 0;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", out.file, "Write JSON to FILE");
    cmd->add_flag("--json", out.json, "Print JSON instead of text");
  };

  std::string input, second;

  auto* racg = app.add_subcommand("racg", "Coxeter presentation, branches and one-endedness of a defining graph");
  racg->add_option("graph", input)->required();
  add_output(racg);
  racg->callback([&] {
    auto g = defining_graph_from_json(read_json_file(input));
    auto p = racg_presentation(g);
    bool one_ended = one_endedness_check(g);
    Json j{{"presentation", to_json(p)}, {"one_ended", one_ended}};
    std::ostringstream text;
    text << presentation_text(p) << "one-ended: " << (one_ended ? "true" : "false") << "\n";
    try {
      auto branches = branch_decomposition(g);
      Json jb = Json::array();
      text << "branches: " << branches.size() << "\n";
      for (const auto& b : branches) {
        jb.push_back(to_json(b));
        text << "  n=" << b.size() << ":";
        for (const auto& v : b.path) text << " " << v;
        text << "\n";
      }
      j["branches"] = jb;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::no_essential_vertices) throw;
      std::cout << text.str();
      throw;
    }
    out.emit(text.str(), j);
  });

  auto* davis = app.add_subcommand("davis", "Davis orbicomplex of a defining graph");
  davis->add_option("graph", input)->required();
  add_output(davis);
  davis->callback([&] {
    auto c = davis_orbicomplex(defining_graph_from_json(read_json_file(input)));
    out.json = true;
    out.emit("", to_json(c));
  });

  auto* euler = app.add_subcommand("euler", "Orbifold Euler characteristic of a complex");
  euler->add_option("complex", input)->required();
  add_output(euler);
  euler->callback([&] {
    auto chi = to_string(euler_characteristic(read_complex(input)));
    out.emit(chi + "\n", Json{{"euler", chi}});
  });

  bool dot = false;
  auto* singular = app.add_subcommand("singular", "Singular subspace of a complex");
  singular->add_option("complex", input)->required();
  singular->add_flag("--dot", dot, "Print Graphviz DOT");
  add_output(singular);
  singular->callback([&] {
    auto g = singular_subspace(read_complex(input));
    out.emit(dot ? to_dot(g) : graph_text(g), to_json(g));
  });

  bool ab = false;
  auto* pi1 = app.add_subcommand("pi1", "Orbifold fundamental group presentation");
  pi1->add_option("complex", input)->required();
  pi1->add_flag("--ab", ab, "Print the abelianization instead");
  add_output(pi1);
  pi1->callback([&] {
    auto p = fundamental_group_presentation(read_complex(input));
    if (ab) {
      auto a = abelianization(p);
      out.emit(to_string(a) + "\n", to_json(a));
    } else {
      out.emit(presentation_text(p), to_json(p));
    }
  });

  auto* verify = app.add_subcommand("verify", "Check a covering map");
  verify->add_option("cover", input)->required();
  add_output(verify);
  verify->callback([&] {
    auto f = covering_map_from_json(read_json_file(input));
    auto r = verify_covering(f);
    out.emit(verify_text(r), to_json(r));
    if (!r.passed()) status = exit_verification;
  });

  std::string cover_dir;
  auto* covers = app.add_subcommand("covers", "Enumerate the double covers of a mirror-free complex");
  covers->add_option("complex", input)->required();
  covers->add_option("--out", cover_dir, "Write cover_<i>.json into DIR");
  covers->add_flag("--json", out.json, "Print JSON instead of text");
  covers->callback([&] {
    auto list = enumerate_double_covers(read_complex(input));
    Json j = Json::array();
    std::ostringstream text;
    if (!cover_dir.empty()) std::filesystem::create_directories(cover_dir);
    for (int i = 0; i < static_cast<int>(list.size()); ++i) {
      const auto& dc = list[i];
      auto r = verify_covering(dc.map);
      if (!r.passed()) status = exit_verification;
      Json census = Json::object();
      text << "cover " << i << ": " << (r.passed() ? "PASS" : "FAIL") << " chi "
           << to_string(euler_characteristic(dc.complex)) << "\n  labeling:";
      for (const auto& [g, v] : dc.labeling.values) {
        if (v) text << " " << g;
      }
      text << "\n";
      for (const auto& [type, n] : piece_census(dc.complex)) {
        census[type] = n;
        text << "  " << n << " x " << type << "\n";
      }
      j.push_back({{"labeling", to_json(dc.labeling)}, {"census", census}, {"verify", r.passed() ? "PASS" : "FAIL"}});
      if (!cover_dir.empty()) {
        write_json_file((std::filesystem::path(cover_dir) / ("cover_" + std::to_string(i) + ".json")).string(),
                        to_json(dc.map));
      }
    }
    text << list.size() << " double covers\n";
    if (out.json) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << text.str();
    }
  });

  auto* compare = app.add_subcommand("compare", "Compare two complexes; rotations are read from the complexes");
  compare->add_option("a", input)->required();
  compare->add_option("b", second)->required();
  add_output(compare);
  compare->callback([&] {
    auto r = compare_report(read_complex(input), read_complex(second));
    std::ostringstream text;
    text << "euler: " << to_string(r.euler[0]) << " " << to_string(r.euler[1]) << "\n";
    text << "singular subspaces: " << (r.singular_bijection ? "isomorphic" : "non-isomorphic") << "\n";
    text << "abelianizations: " << (r.abelian[0] ? to_string(*r.abelian[0]) : "n/a") << " | "
         << (r.abelian[1] ? to_string(*r.abelian[1]) : "n/a") << "\n";
    for (const auto& v : r.verdicts) text << "verdict: " << v << "\n";
    text << compare_summary(r) << "\n";
    out.emit(text.str(), to_json(r));
  });

  DemoOptions demo;
  std::vector<std::string> census_terms;
  bool no_timings = false;
  auto* demo_cmd = app.add_subcommand("paper-demo", "Run the full counterexample pipeline");
  add_output(demo_cmd);
  demo_cmd->add_option("--export", demo.export_dir, "Write the built complexes and covers into DIR");
  demo_cmd->add_flag("--no-timings", no_timings, "Leave timings out of the report");
  demo_cmd->add_option("--x2-census", census_terms, "Census sought for X2, as TYPE=COUNT terms");
  demo_cmd->add_flag("--invert-pair-predicate", demo.invert_pair_predicate,
                  "Look for isomorphic singular subspaces with different normal forms");
  demo_cmd->callback([&] {
    if (!census_terms.empty()) {
      std::map<std::string, int> census;
      for (const auto& t : census_terms) {
        auto eq = t.rfind('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--x2-census", "expected TYPE=COUNT: " + t);
        census[t.substr(0, eq)] = std::stoi(t.substr(eq + 1));
      }
      demo.x2_census = census;
    }
    auto report = run_counterexample_demo(demo);
    std::ostringstream text;
    for (int i = 0; i < static_cast<int>(report.stages.size()); ++i) {
      const auto& s = report.stages[i];
      text << "stage " << i + 1 << " " << s.name << ": PASS";
      if (!no_timings) text << " (" << s.seconds << " s)";
      text << "\n";
      for (const auto& v : s.verdicts) text << "  " << v.get<std::string>() << "\n";
    }
    if (!report.passed) {
      text << "stage " << report.failed_stage << ": FAIL: " << report.failure << "\n";
      status = exit_verification;
    }
    out.emit(text.str(), to_json(report, !no_timings));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_parse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::parse ? exit_parse : exit_precondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_precondition;
  }
  return status;
}
