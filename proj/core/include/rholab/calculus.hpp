#pragma once

// Discrete versions of the y-derivative operators used for higher
// regularity of even solutions:
//   weighted derivative   d_y^a u = rho d_y u      (on y-faces)
//   G u   = d_y u / y
//   F_a u = rho^{-1} d_y (rho d_y u)
// with the identity d_yy u = F_a u - a G u at eps = 0.

#include <cstddef>
#include <vector>

#include "rholab/mesh.hpp"
#include "rholab/weights.hpp"

namespace rholab {

/// Values on the Ny+1 y-faces of every column; face j sits at lo_y + j h_y.
struct StaggeredField {
  GridPtr grid;
  std::vector<double> values;

  std::size_t columns() const;
  int faces() const;
  double& at(std::size_t column, int j);
  double at(std::size_t column, int j) const;
};

enum class FaceRule {
  midpoint,   // rho at the face midpoint times the centered difference
  flux_exact  // difference divided by the exact integral of 1/rho between centers
};

/// rho(face) (u_above - u_below) / h_y on interior faces. The y = 0 face of a
/// half grid follows the grid symmetry (even: 0, odd: mirrored ghost with the
/// flux-exact coefficient, which is also used whenever rho(0) is not finite
/// and positive). Outer faces use a one-sided second-order difference.
StaggeredField weighted_dy(const Field& u, const WeightParams& p, FaceRule rule = FaceRule::midpoint);

/// Centered d_y u divided by the cell-center y; symmetric ghost across y = 0.
Field op_G(const Field& u);

/// Difference of weighted_dy across each cell divided by h_y and the cell
/// mean of rho. With a = 0 this is the discrete d_yy used by second_dy.
Field op_Fa(const Field& u, const WeightParams& p);

/// op_Fa with the unit weight.
Field second_dy(const Field& u);

struct DualityResult {
  Field v;          // rho d_y w at cell centers
  double residual;  // interior residual in solution units, see below
};

/// v = rho d_y w (flux-exact faces, averaged to centers). `residual` is
/// max |e| where L_{-a} e equals the residual of v on cells at least two
/// layers away from the outer boundary (zero Dirichlet data for e).
DualityResult duality_transform(const Field& w, const WeightParams& p);

/// G u recovered from g = F_a u through
///   y^{-(1+a)} int_0^y t^a (g(t) - g(0)) dt + g(0)/(1+a),
/// integrating t^a times the piecewise-linear interpolant exactly. g(0) is
/// extrapolated quadratically in y^2. Needs a > -1 and an even half grid.
Field G_from_rhs(const Field& g, double a);

}  // namespace rholab
