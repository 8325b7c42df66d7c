#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbicover/covers.hpp"
#include "orbicover/serialize.hpp"

namespace orbi {

/// Switches used to force the pipeline into its failure paths.
struct DemoOptions {
  /// Piece census the X2 selection looks for; default 8 x D^2(6).
  std::optional<std::map<std::string, int>> x2_census;
  /// Pair search asks for isomorphic singular subspaces and different
  /// normal forms instead of the reverse.
  bool invert_pair_predicate = false;
  /// When non-empty, fixtures are written to this directory.
  std::string export_dir;
};

struct StageResult {
  std::string name;
  Json inputs = Json::object();
  Json invariants = Json::object();
  Json verdicts = Json::array();
  double seconds = 0;
};

/// Everything the pipeline built, kept for inspection by callers.
struct DemoArtifacts {
  std::optional<DefiningGraph> gamma;
  std::optional<Orbicomplex> davis, x1, x2, y, z, y_hat, z_hat;
  std::optional<CoveringMap> x1_cover, x2_cover, y_cover, z_cover, y_hat_cover, z_hat_cover;
  std::optional<SurfaceTower> tower6, tower10;
};

struct DemoReport {
  std::vector<StageResult> stages;
  bool passed = false;
  int failed_stage = 0;       // 1-based; 0 when passed
  std::string failure;        // the first failed assertion
  DemoArtifacts artifacts;
};

DemoReport run_counterexample_demo(const DemoOptions& options = {});

Json to_json(const DemoReport& r, bool with_timings = true);

}  // namespace orbi
