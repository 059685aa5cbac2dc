#include "gaugemc/nishimori.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gaugemc {

NishimoriPoint nishimori_point(double p, double q) {
  if (!(p >= 0.0 && p < 0.5))
    throw std::invalid_argument("nishimori_point: need 0 <= p < 0.5");
  if (!(q > 0.0 && q < 0.5))
    throw std::invalid_argument(
        q == 0.0 ? "nishimori_point: q = 0 is the measurement-perfect limit; "
                   "the stacked model collapses to its 2D single-round form "
                   "and is not simulated here"
                 : "nishimori_point: need 0 < q < 0.5");
  NishimoriPoint n;
  n.p = p;
  n.q = q;
  n.K = 1.0;
  const double lq = std::log((1.0 - q) / q);
  n.J = p == 0.0 ? std::numeric_limits<double>::infinity()
                 : std::log((1.0 - p) / p) / lq;
  n.T_N = 2.0 / lq;
  return n;
}

std::vector<NishimoriPoint> sheet_path(double alpha,
                                       const std::vector<double>& p_grid) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("sheet_path: alpha must be positive");
  std::vector<NishimoriPoint> points;
  points.reserve(p_grid.size());
  for (double p : p_grid) points.push_back(nishimori_point(p, alpha * p));
  return points;
}

double rate_from_coupling(double coupling, double temperature) {
  return 1.0 / (1.0 + std::exp(2.0 * coupling / temperature));
}

}  // namespace gaugemc
