// Evaluation of the disordered gauge Hamiltonian
//
//   H = -J sum_{qubit terms j} tau_j prod(sigma)  -  K sum_{meas terms k} tau_k prod(sigma)
//
// on a spin configuration, plus gauge transformations and the tau-dressed
// rectangular Wilson-loop observable.  Energies are tracked in integer units
// (counts of unsatisfied terms) and converted to reals at the edge, so there
// is no floating-point drift over long runs.

#pragma once

#include <cstdint>
#include <vector>

#include "gaugemc/disorder.hpp"
#include "gaugemc/geometry.hpp"
#include "gaugemc/rng.hpp"

namespace gaugemc {

struct SpinConfiguration {
  std::vector<std::int8_t> spins;  // +1 / -1 per gauge spin
};

struct Couplings {
  double J = 1.0;  // qubit-term strength
  double K = 1.0;  // measurement-term strength
};

SpinConfiguration all_plus_config(const GaugeModel& model);
SpinConfiguration random_config(const GaugeModel& model, rng::Xoshiro256pp& gen);

// Sign tau * prod(sigma) of one term: +1 satisfied, -1 unsatisfied.
int term_sign(const GaugeModel& model, const DisorderSample& sample,
              const SpinConfiguration& config, std::int32_t term);

struct UnsatCounts {
  std::int64_t qubit = 0;
  std::int64_t meas = 0;
  friend bool operator==(const UnsatCounts&, const UnsatCounts&) = default;
};

UnsatCounts count_unsatisfied(const GaugeModel& model,
                              const DisorderSample& sample,
                              const SpinConfiguration& config);

// E = -J (N_Q - 2 u_Q) - K (N_M - 2 u_M)
double energy_from_counts(const GaugeModel& model, const Couplings& c,
                          const UnsatCounts& u);

double energy(const GaugeModel& model, const DisorderSample& sample,
              const Couplings& c, const SpinConfiguration& config);

// Sum of current signs of the qubit terms and measurement terms incident to
// one spin.  Flipping the spin changes the energy by 2 (J*dq + K*dm) and the
// unsatisfied counts by (dq, dm).
struct IncidentSigns {
  int qubit = 0;
  int meas = 0;
};
IncidentSigns incident_signs(const GaugeModel& model,
                             const DisorderSample& sample,
                             const SpinConfiguration& config,
                             std::int32_t spin);

// Energy change of flipping one spin, touching only incident terms.
double delta_energy(const GaugeModel& model, const DisorderSample& sample,
                    const Couplings& c, const SpinConfiguration& config,
                    std::int32_t spin);

// Flip every spin listed in the generator (an involution; preserves the sign
// of every term and hence the energy and all Wilson loops).
void apply_gauge(SpinConfiguration& config,
                 const std::vector<std::int32_t>& generator);

// An axis-aligned ell x ell patch of co-planar qubit terms in one time slice.
// Toric: the x-oriented edge terms with cell (x0+i, y0+j) at slice t0.
// Color: the qubit terms of both vertices of cells (x0+i, y0+j) at slice t0.
struct WilsonPatch {
  int ell = 0;
  LatticeCoords origin;
  std::vector<std::int32_t> terms;
};

WilsonPatch make_wilson_patch(const GaugeModel& model, int ell, int x0, int y0,
                              int t0);

// Canonical measurement set: ell = max(1, L/2), origins {0, ell}^2, every
// time slice.  Space-time loops are excluded (anisotropic time direction).
std::vector<WilsonPatch> default_wilson_patches(const GaugeModel& model);

// W = prod over patch terms of tau * prod(sigma); gauge invariant, +/-1.
int wilson_loop(const GaugeModel& model, const DisorderSample& sample,
                const SpinConfiguration& config, const WilsonPatch& patch);

}  // namespace gaugemc
