#pragma once

// Weighted norms, Holder and C^{1,alpha} exponent estimation, the Moser
// sup-bound ratio and the critical Sobolev-type exponents.

#include <cstdint>
#include <span>
#include <vector>

#include "rholab/mesh.hpp"
#include "rholab/weights.hpp"

namespace rholab {

struct Region {
  enum class Kind { whole, box, ball };
  Kind kind = Kind::whole;
  Point lo{};
  Point hi{};
  double radius = 0.0;

  static Region whole() { return {}; }
  static Region box(Point lo, Point hi) { return {Kind::box, lo, hi, 0.0}; }
  static Region ball(double r) { return {Kind::ball, {}, {}, r}; }

  bool contains(const Point& z, int dim) const;
};

/// (sum over region cells of rho(center) |u|^p vol)^(1/p).
double weighted_lp(const Field& u, double p, const WeightParams& w, const Region& region);

struct RegularityReport {
  double alpha_fit = 0.0;
  double seminorm = 0.0;
  double scale_min = 0.0;
  double scale_max = 0.0;
  double fit_residual = 0.0;
  /// osc vanished identically; alpha_fit holds the cap and seminorm is 0.
  bool degenerate = false;
  /// c1alpha only: false when the gradient oscillation does not decay.
  bool c1 = true;
  std::vector<double> scales;
  std::vector<double> oscillation;
};

struct HolderOptions {
  std::uint64_t seed = 0x243f6a8885a308d3ULL;
  int random_pairs = 1000;
  /// Upper end of the fitted exponent range.
  double cap = 1.0;
};

/// 4h 2^k for k = 0, 1, ... while <= r/2, with h the smallest cell width.
std::vector<double> dyadic_scales(const Grid& grid, double r);

/// Largest |u(z) - u(w)| over axis-aligned and seeded random cell pairs whose
/// center distance is within 1% of s, both ends inside the region.
double oscillation(const Field& u, const Region& region, double s, const HolderOptions& opts = {});

/// Fits osc(s) = A + B s^alpha with A <= 0 by relative least squares on an
/// alpha grid of step 1e-3 in [0, cap]. Needs >= 4 scales, each >= 2h.
RegularityReport holder_estimate(const Field& u, const Region& region,
                                 std::span<const double> scales, const HolderOptions& opts = {});

/// max_s osc(s) / s^alpha over the given scales.
double holder_seminorm(const Field& u, const Region& region, std::span<const double> scales,
                       double alpha, const HolderOptions& opts = {});

/// Centered-difference gradient components (symmetric ghost across y = 0).
std::vector<Field> gradient(const Field& u);

/// holder_estimate on every non-negligible gradient component; the worst one
/// is reported as 1 + its exponent. A gradient whose oscillation does not
/// decay (fit below 0.05) marks the field as not C^1, and the Holder exponent
/// of u itself is reported instead.
RegularityReport c1alpha_estimate(const Field& u, const Region& region,
                                  std::span<const double> scales, const HolderOptions& opts = {});

/// max_s osc(grad u)(s) / s^alpha, worst gradient component.
double c1alpha_seminorm(const Field& u, const Region& region, std::span<const double> scales,
                        double alpha, const HolderOptions& opts = {});

/// |u|_{L^inf(B_r)} / (|u|_{L^beta(B_1, rho)} + |f|_{L^p(B_1, rho)}); needs
/// p > (n + 1 + a^+)/2.
double moser_ratio(const Field& u, const Field& f, const WeightParams& w, double p, double beta,
                   double r);

struct Exponents {
  double n_star;    // n + 1 + a^+
  double two_star;  // 2 (n + 1 + a^+) / (n + a^+ - 1)
  double p_star;    // 2n / (n - 1 + t)
};

Exponents exponents(double a, int n, double t);

}  // namespace rholab
