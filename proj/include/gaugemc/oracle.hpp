// Exact brute-force reference for tiny instances.
//
// enumerate_exact walks all 2^num_spins configurations in Gray-code order,
// maintaining the unsatisfied-term counts incrementally, and histograms the
// integer pair (u_Q, u_M) together with the Wilson-loop value of a fixed
// patch.  Thermal averages on any temperature grid then follow from the
// histogram with a log-sum-exp combine, so the sweep over states is done
// once.  The histogram entries are exact integers, which makes the result
// independent of enumeration order and trivially mergeable across workers.

#pragma once

#include <cstdint>
#include <vector>

#include "gaugemc/model.hpp"

namespace gaugemc {

struct ExactResult {
  std::vector<double> temperatures;
  std::vector<double> mean_energy;   // <E>
  std::vector<double> mean_energy2;  // <E^2>
  std::vector<double> specific_heat; // beta^2 (<E^2>-<E>^2) / N_terms
  std::vector<double> mean_wilson;   // <W> for the given patch
  std::vector<double> log_z;
};

// Histogram over (u_Q, u_M): state counts and summed Wilson values.
struct EnumerationHistogram {
  std::int32_t nq = 0, nm = 0;  // table is (nq+1) x (nm+1)
  std::vector<std::uint64_t> count;
  std::vector<std::int64_t> wilson_sum;

  void merge(const EnumerationHistogram& other);
};

inline constexpr int kEnumerateMaxSpins = 28;

// Enumerate the sub-cube where the top `prefix_bits` spins are fixed to the
// sign pattern in `prefix` (bit i set = spin (num_spins-prefix_bits+i) is -1).
// prefix_bits = 0 enumerates the full configuration space.
EnumerationHistogram enumerate_histogram(const GaugeModel& model,
                                         const DisorderSample& sample,
                                         const WilsonPatch& patch,
                                         int prefix_bits = 0,
                                         std::uint32_t prefix = 0);

ExactResult averages_from_histogram(const GaugeModel& model,
                                    const EnumerationHistogram& hist,
                                    const Couplings& couplings,
                                    const std::vector<double>& temperatures);

// Convenience wrapper: full enumeration + averages.  Throws if
// num_spins > kEnumerateMaxSpins (expect ~minutes at the cap).
ExactResult enumerate_exact(const GaugeModel& model,
                            const DisorderSample& sample,
                            const Couplings& couplings,
                            const std::vector<double>& temperatures,
                            const WilsonPatch& patch);

struct GaugeOrbitReport {
  bool all_preserve = false;  // every generator preserves every term sign
  int num_generators = 0;
  int rank = 0;               // rank of the generator set over GF(2)
  std::vector<int> violations;  // offending generator indices, if any
};

// Combinatorial check (no state enumeration): generator/term overlaps must
// all be even; orbit size is 2^rank.
GaugeOrbitReport gauge_orbit_check(const GaugeModel& model);

}  // namespace gaugemc
