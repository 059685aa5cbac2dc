// Run orchestration: configuration, job scheduling over disorder samples,
// persistence and result emission.  The CLI in tools/ is a thin wrapper over
// these entry points.
//
// Output layout under a run directory:
//   config.json                  resolved configuration (lossless round trip)
//   manifest.json                config hash, emitted files + content hashes,
//                                wall times, flagged-sample counts
//   points/<tag>/samples/sample_NNNNN.json   per-sample measurements
//   points/<tag>/samples/sample_NNNNN.ckpt   checkpoint (removed when done)
//   points/<tag>/observables.csv             disorder-averaged observables
//   points/<tag>/tc.json                     transition-location results
//   analysis/phase_diagram.json              per-size path summary + p*
//   analysis/thresholds.csv
//
// Completed sample files are never rewritten: a rerun or resume skips them,
// and all writes go through a temp-file + rename.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaugemc/analysis.hpp"

namespace gaugemc {

struct PointSpec {
  double p = 0.0, q = 0.0;
  double t_min = 0.0, t_max = 0.0;
  int n_t = 0;
  int b = 0;  // log2 sweep budget for this point
};

struct RunConfig {
  Family family = Family::Toric;
  std::optional<double> alpha;  // path q = alpha*p, when scanning a path
  std::vector<PointSpec> points;
  std::vector<std::pair<int, int>> sizes;  // (L, M)
  int n_sa = 16;
  std::uint64_t master_seed = 1;
  int workers = 1;
  int wilson_stride = 4;
  int n_blocks = 16;
  int max_wilson_keep = 256;
  std::uint64_t checkpoint_every = 4096;
  int n_boot = 1000;
  std::string out_dir;

  void validate() const;  // throws std::invalid_argument
  std::string to_json(int indent = 2) const;
  static RunConfig from_json(const std::string& text);
};

// Table-I-style defaults for a given bit-flip rate and layer size.
struct PointDefaults {
  double t_min, t_max;
  int n_t;
  int b;
  int n_sa;
};
PointDefaults table_defaults(double p, int L);

// Couplings and Nishimori temperature for one simulated point.  The clean
// point (p = q = 0) runs at J = K = 1 with no Nishimori temperature (NaN).
struct PointPhysics {
  Couplings couplings;
  double t_n;
};
PointPhysics resolve_point_physics(double p, double q);

// Simulate everything in the config (skipping completed samples), then
// aggregate.  Returns a process exit status: 0 ok, 1 systemic failure.
int run(const RunConfig& config);

// Re-run aggregation and threshold analysis over an existing run directory.
int analyze(const std::string& out_dir);

// Continue an interrupted run bit-exactly.  Refuses on a config-hash
// mismatch or when there is nothing to resume.
int resume(const std::string& out_dir);

int export_graph(Family family, int L, int M, const std::string& path);

// Built-in oracle-vs-implementation verification; prints one PASS/FAIL line
// per check.  Returns true when every check passed.
bool verify_suite(std::ostream& out, bool include_oracle_mc = true);

}  // namespace gaugemc
