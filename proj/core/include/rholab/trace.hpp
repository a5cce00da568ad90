#pragma once

// Rayleigh quotients for the weighted trace and boundary Hardy inequalities
// on the unit half ball, for fields vanishing on y = 0.

#include <cstdint>
#include <vector>

#include "rholab/ball.hpp"
#include "rholab/mesh.hpp"
#include "rholab/weights.hpp"

namespace rholab {

struct TraceOptions {
  int boundary_nodes = 512;
  int subsamples = 8;
  /// minimize mode
  int max_iterations = 200;
  double tolerance = 1e-9;
};

/// Energy and boundary integrals of one trial field on B_1^+.
struct TraceTerms {
  double energy = 0.0;     // int rho |grad u|^2
  double mass = 0.0;       // int_{dB} rho u^2
  double hardy = 0.0;      // int_{dB} rho u^2 / y
  double mu_mass = 0.0;    // int_{dB} rho mu_eps u^2, mu_eps = y / (rho u_bar)
  double correction = 0.0; // int_{dB} rho u^2 / (eps^2 + y^2)
};

/// Trial fields must live on an odd half grid (u = 0 on y = 0 is built in);
/// anything else raises trial_violates_pre.
TraceTerms trace_terms(const Field& u, const WeightParams& w, const TraceOptions& opts = {});

/// energy / mass.
double rayleigh_trace(const Field& u, const WeightParams& w, const TraceOptions& opts = {});

/// Samples an analytic trial on an odd half grid after checking that it
/// vanishes on y = 0 to 1e-12 (relative to its peak).
Field sample_trial(GridPtr grid, const PointFunction& u);

/// Approximate infimum of energy / mass over fields vanishing on y = 0, by
/// inverse iteration on the cells that carry energy inside B_1^+.
double rayleigh_trace_min(GridPtr grid, const WeightParams& w, const TraceOptions& opts = {});

/// energy / int_{dB} rho u^2 / y.
double rayleigh_hardy(const Field& u, const WeightParams& w, const TraceOptions& opts = {});

/// energy / int_{dB} rho mu_eps u^2; at eps = 0 mu is the constant 1 - a.
double rayleigh_trace_mu(const Field& u, const WeightParams& w, const TraceOptions& opts = {});

/// (energy - (a/2) eps^2 correction) / mass.
double stability_quotient(const Field& u, const WeightParams& w, const TraceOptions& opts = {});

/// u = y q(x, y) with q a quadratic whose coefficients are uniform in [-1,1].
PointFunction random_trial(std::uint64_t seed, int n);

}  // namespace rholab
