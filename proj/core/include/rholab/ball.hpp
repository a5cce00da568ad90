#pragma once

// Quadrature on the upper half ball B_r^+ of a half grid: dual-cell volume
// fractions for the face energy and interpolated nodes on the curved part of
// the boundary.

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "rholab/mesh.hpp"
#include "rholab/weights.hpp"

namespace rholab {

/// Fraction of each face's dual box lying in B_r^+. `face[i * dim + d]` is
/// the face between cell i and its upper neighbour along axis d; `sigma[i]`
/// is the strip between y = 0 and the first row (bottom-row cells only).
struct BallFractions {
  double radius = 0.0;
  std::vector<double> face;
  std::vector<double> sigma;
};

BallFractions ball_fractions(const Grid& grid, double r, int subsamples = 8);

struct BoundaryNode {
  Point z{};
  double weight = 0.0;  // surface element times rule weight
  int count = 0;
  std::array<std::pair<std::size_t, double>, 8> stencil{};
};

/// Midpoint rule on the half circle (n = 1, `nodes` angles) or the half
/// sphere (n = 2, nodes/2 polar by `nodes` azimuthal angles) of radius r. The
/// stencil is the (bi/tri)linear interpolant from cell centers, continued
/// across y = 0 by the grid symmetry.
std::vector<BoundaryNode> half_sphere_nodes(const Grid& grid, double r, int nodes);

double interpolate(const Field& u, const BoundaryNode& node);

/// Face-based weighted energy int_{B_r^+} rho |grad u|^2 using the fractions.
double ball_energy(const Field& u, const WeightParams& w, const BallFractions& frac);

}  // namespace rholab
