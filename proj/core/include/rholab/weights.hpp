#pragma once

// The regularized weight family rho_eps^a(y) = (eps^2 + y^2)^(a/2), its
// optional normalization, and the closed-form special solutions built on it.
// Everything here is a pure function; the rest of the library treats these
// values as the analytic oracle.

#include <span>
#include <string>
#include <string_view>

namespace rholab {

struct WeightParams {
  double a = 0.0;
  double eps = 0.0;
  /// Multiply the raw weight by min{eps^-a, 1} (a >= 0) or max{eps^-a, 1}
  /// (a <= 0). For eps <= 1 the factor is 1 and both conventions agree.
  bool normalized = false;

  /// Same eps and convention, exponent -a.
  WeightParams dual() const { return {-a, eps, normalized}; }
};

/// Throws out_of_range unless eps >= 0 and both numbers are finite.
void validate(const WeightParams& p);

double normalization_factor(const WeightParams& p);

/// rho_eps^a(y). Throws singular_evaluation for eps = 0, a < 0, y = 0.
double eval_weight(const WeightParams& p, double y);

/// Integral of rho over [y0, y1] (y0 <= y1, the interval may contain 0).
/// Infinite when eps = 0, a <= -1 and the interval touches 0.
double weight_integral(const WeightParams& p, double y0, double y1);

/// Integral of 1/rho over [y0, y1]; for eps > 0 this is the difference of the
/// odd extension of u_bar, so it is exact on u_bar itself.
double inverse_weight_integral(const WeightParams& p, double y0, double y1);

/// Mean of rho over a cell [y0, y1].
double weight_cell_average(const WeightParams& p, double y0, double y1);

/// u_bar(y) = int_0^y rho^{-1}(s) ds for y >= 0. Closed form at eps = 0;
/// adaptive Gauss-Kronrod (relative tolerance 1e-12) otherwise. Throws
/// divergent_integral for eps = 0, a >= 1.
double u_bar(const WeightParams& p, double y);

/// mu_1(y) = y / (rho_1^a(y) u_bar_1(y)); tends to 1 at 0 and 1-a at infinity.
double mu1(double a, double y);

struct OdeValues {
  double u;
  double du;
  double d2u;
};

/// Explicit even solution of -(rho u')' = rho on (0,1) with u(0)=1, u'(0)=0.
/// u'' comes from its closed expression, not from differencing. Requires
/// eps > 0 and a > -1. The equation is invariant under rescaling rho, so the
/// normalization flag does not change the result.
OdeValues ode_example(const WeightParams& p, double y);

enum class SolutionKind { odd_singular, jump, cutoff, neumann_special, u_bar, constant };

struct SolutionId {
  SolutionKind kind = SolutionKind::constant;
  double delta = 0.0;  // cutoff only
};

/// Accepts "odd_singular", "jump", "cutoff(0.1)", "neumann_special", "u_bar",
/// "constant". Throws unknown_name.
SolutionId parse_solution_id(std::string_view text);
std::string to_string(const SolutionId& id);

/// Pointwise value of an analytic solution at z = (x..., y); y is z.back().
double catalog(const SolutionId& id, const WeightParams& p, std::span<const double> z);

/// Piecewise-logarithmic cutoff: 0 for |y| <= delta^2, log(|y|/delta^2)/log(1/delta)
/// in between, 1 for |y| >= delta.
double cutoff_profile(double delta, double y);

/// int_0^1 y^a |f_delta'(y)|^2 dy in closed form.
double cutoff_energy(double a, double delta);

}  // namespace rholab
