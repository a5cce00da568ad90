#pragma once

// Scaled boundary mass H(r) and energy E(r) on half balls:
//   H(r) = r^-(n+a) int_{dB_r^+} rho u^2,   E(r) = r^-(n+a-1) int_{B_r^+} rho |grad u|^2
// For weight-a harmonic u vanishing on y = 0 (eps = 0), H'(r) = 2 E(r) / r.

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "rholab/mesh.hpp"
#include "rholab/weights.hpp"

namespace rholab {

struct FrequencyProfile {
  std::vector<double> radii;
  std::vector<double> H;
  std::vector<double> E;
  std::vector<double> dH_dr;
  double a = 0.0;
  double eps = 0.0;
  int n = 1;
  /// The field is zero on y = 0 (odd grid, or a checked analytic field).
  bool vanishes_on_sigma = false;
};

struct FrequencyOptions {
  int boundary_nodes = 512;
  int subsamples = 8;
};

/// Grid version: H by the midpoint rule on the half sphere with interpolated
/// u, E from the face energy with dual-cell fractions. Needs a half grid,
/// eps in {0, 1}, increasing radii in [4h, 1].
FrequencyProfile compute_HE(const Field& u, const WeightParams& w, std::span<const double> radii,
                            const FrequencyOptions& opts = {});

using GradientFunction = std::function<void(std::span<const double>, std::span<double>)>;

/// Analytic version: polar quadrature of u and grad u (adaptive in the
/// radius, midpoint in the angles). `n` is the x-dimension.
FrequencyProfile compute_HE(const PointFunction& u, const GradientFunction& grad, int n,
                            const WeightParams& w, std::span<const double> radii,
                            const FrequencyOptions& opts = {});

/// max over interior radii of |H' - 2E/r| / |2E/r|. Raises wrong_class unless
/// eps = 0 and the field vanishes on y = 0.
double check_derivative_relation(const FrequencyProfile& profile);

/// Least-squares slope of log H against log r (>= 5 radii, H > 0).
double growth_exponent(const FrequencyProfile& profile);

/// n geometric radii from r0 to r1.
std::vector<double> log_radii(double r0, double r1, int count);

/// Columns r, H, E, dH_dr, two_E_over_r.
void write_csv(std::ostream& os, const FrequencyProfile& profile);

}  // namespace rholab
