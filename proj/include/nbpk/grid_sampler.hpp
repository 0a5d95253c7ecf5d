#ifndef NBPK_GRID_SAMPLER_HPP
#define NBPK_GRID_SAMPLER_HPP

#include <vector>

#include "nbpk/quadrature.hpp"
#include "nbpk/random.hpp"

namespace nbpk {

/// Inverse-CDF sampler for an unnormalised density exp(log_h(y)) on the real line.
///
/// The density is tabulated in the coordinate y = sinh(t) used by the
/// quadrature routines, on a grid refined until halving any cell changes its
/// piecewise-exponential mass by less than `cell_rel_tol`. Draws are exact for
/// the piecewise-exponential interpolant.
class GridSampler {
 public:
  explicit GridSampler(const LogFunction& log_h, double cell_rel_tol = 1e-6);

  /// One draw of y.
  double sample(Rng& rng) const;

  /// log of the total mass of the interpolant.
  double log_mass() const { return log_mass_; }
  std::size_t cells() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }

 private:
  std::vector<double> nodes_;     // t coordinates
  std::vector<double> log_density_;  // log density in t, relative to the peak
  std::vector<double> cdf_;       // normalised cumulative mass at each node
  double log_mass_ = 0.0;
};

}  // namespace nbpk

#endif  // NBPK_GRID_SAMPLER_HPP
