#pragma once

// Conservative finite-volume discretization of -div(rho A grad u) on the
// cell-centered grids of mesh.hpp. Rows are scaled per unit cell volume, so an
// interior a = 0 row is the usual 2(n+1)+1 point Laplacian.

#include <vector>

#include "rholab/mesh.hpp"
#include "rholab/solver.hpp"
#include "rholab/weights.hpp"

namespace rholab {

/// identity, or diagonal A = diag(mu_x, ..., mu_x, mu_y) with cell fields.
struct CoefficientSpec {
  enum class Kind { identity, diagonal };
  Kind kind = Kind::identity;
  Field mu_x;
  Field mu_y;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
};

struct BoundaryCondition {
  enum class Kind { dirichlet, weighted_neumann };
  Kind kind = Kind::dirichlet;
  /// Dirichlet value, or the conormal flux rho A grad u . nu. Empty means 0.
  PointFunction g;

  static BoundaryCondition dirichlet(PointFunction g = {}) { return {Kind::dirichlet, std::move(g)}; }
  static BoundaryCondition neumann(PointFunction g = {}) {
    return {Kind::weighted_neumann, std::move(g)};
  }
};

/// Outer faces: x = +-1 (lateral), y = 1 (top) and, on full grids, y = -1.
struct BoundarySet {
  BoundaryCondition lateral;
  BoundaryCondition top;
  BoundaryCondition bottom;
};

enum class RhsKind { none, volumetric, divergence, neumann_flux };

struct ProblemSpec {
  WeightParams weight;
  CoefficientSpec coeff;
  RhsKind rhs = RhsKind::none;
  Field f;                 // volumetric: cell values of f in -L u = rho f
  std::vector<Field> F;    // divergence: one field per axis
  PointFunction flux;      // neumann_flux: lim rho d_y u on y = 0, as a function of x
  BoundarySet bc;
};

/// Matrix plus the rhs selected by spec.rhs. Symmetry comes from the grid:
/// even makes the y = 0 face flux-free, odd imposes u = 0 there.
SparseSystem assemble(const ProblemSpec& spec, GridPtr grid);

/// -sum_faces rho(face) F.nu area / volume, i.e. minus the discrete weighted
/// divergence. Under even symmetry F_y must vanish on y = 0.
std::vector<double> assemble_div_rhs(const ProblemSpec& spec, const Grid& grid);

/// Inhomogeneous weighted Neumann data on y = 0: requires a in (-1,1), a half
/// grid and even symmetry; the datum f = lim rho d_y u enters as -f/h_y.
SparseSystem assemble_neumann(const ProblemSpec& spec, GridPtr grid);

/// Transmissibility rho(face) A / h^2 of the face between cell idx and its
/// neighbour along axis on the given side (-1 or +1); 0 on outer faces.
double face_transmissibility(const ProblemSpec& spec, const Grid& grid, std::size_t idx, int axis,
                             int side);

/// Discrete weighted Dirichlet energy sum over interior faces of T (du)^2 vol.
double discrete_energy(const ProblemSpec& spec, const Field& u);

}  // namespace rholab
