// Quenched disorder samples: one sign tau per coupling term, drawn
// independently (rate p for qubit terms, q for measurement terms) from a
// counter-based generator, so any single sign can be recomputed from
// (master_seed, sample_index, term_index) alone.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gaugemc/geometry.hpp"

namespace gaugemc {

struct DisorderSample {
  Family family = Family::Toric;
  int L = 0, M = 0;
  double p = 0.0, q = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;
  std::int32_t num_qubit_terms = 0;
  std::vector<std::int8_t> tau;  // aligned with GaugeModel::terms

  std::int32_t num_terms() const {
    return static_cast<std::int32_t>(tau.size());
  }
};

DisorderSample generate_disorder(const GaugeModel& model, double p, double q,
                                 std::uint64_t master_seed,
                                 std::uint64_t sample_index);

// Recompute the sign of a single term without touching any other state.
std::int8_t regenerate_tau(const GaugeModel& model, double p, double q,
                           std::uint64_t master_seed,
                           std::uint64_t sample_index, std::int32_t term);

// Observed fraction of -1 signs among qubit terms and measurement terms.
std::pair<double, double> empirical_rates(const DisorderSample& sample);

// Versioned JSON file with a bit-packed sign payload; round-trips bit-exactly.
void save_disorder(const DisorderSample& sample, const std::string& path);
DisorderSample load_disorder(const std::string& path);

}  // namespace gaugemc
