// Conversion of error rates (p, q) to couplings and the Nishimori
// temperature, with the normalization K = 1:
//
//   exp(-2 J / T_N) = p / (1 - p),   exp(-2 K / T_N) = q / (1 - q)
//
// so J = ln((1-p)/p) / ln((1-q)/q) and T_N = 2 / ln((1-q)/q).

#pragma once

#include <vector>

namespace gaugemc {

struct NishimoriPoint {
  double p = 0.0, q = 0.0;
  double J = 0.0, K = 1.0;
  double T_N = 0.0;
};

// Preconditions: 0 < q < 0.5 and 0 <= p < 0.5.  p = 0 yields J = infinity
// (clean qubits) and is rejected by the simulation driver; q = 0 collapses
// the stacked model to its 2D single-round limit and is refused here.
NishimoriPoint nishimori_point(double p, double q);

// Points along the path q = alpha * p for each grid value of p.
std::vector<NishimoriPoint> sheet_path(double alpha,
                                       const std::vector<double>& p_grid);

// Inverse map used by the round-trip identity: p = 1/(1 + e^{2J/T}).
double rate_from_coupling(double coupling, double temperature);

}  // namespace gaugemc
