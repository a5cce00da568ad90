#include "rholab/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "rholab/error.hpp"

namespace rholab {

namespace {

bool has_face_neighbour(const Grid& g, const std::array<int, 3>& ijk, int axis, int side) {
  const int k = ijk[axis] + side;
  return k >= 0 && k < g.cells(axis);
}

/// True if the face of cell ijk along y on the given side lies on y = 0.
bool is_sigma_face(const Grid& g, const std::array<int, 3>& ijk, int side) {
  const int j = ijk[g.yaxis()];
  const int row = g.sigma_row();
  return (side < 0 && j == row) || (side > 0 && j == row - 1);
}

double mu_at(const ProblemSpec& spec, int axis, const Grid& g, std::size_t idx) {
  if (spec.coeff.kind == CoefficientSpec::Kind::identity) return 1.0;
  return axis == g.yaxis() ? spec.coeff.mu_y[idx] : spec.coeff.mu_x[idx];
}

double harmonic(double p, double q) { return 2.0 * p * q / (p + q); }

/// Effective weight hy / int rho^{-1} across the y = 0 segment [-hy/2, hy/2].
/// Zero when the integral diverges (eps = 0, a >= 1).
double sigma_coefficient(const WeightParams& w, double hy) {
  const double inv = inverse_weight_integral(w, -0.5 * hy, 0.5 * hy);
  if (!std::isfinite(inv)) return 0.0;
  return hy / inv;
}

void validate_coefficients(const ProblemSpec& spec, const Grid& g) {
  const auto& c = spec.coeff;
  if (c.kind == CoefficientSpec::Kind::identity) return;
  if (!(c.lambda1 > 0.0 && c.lambda1 <= c.lambda2)) {
    throw Error(ErrorKind::out_of_range, "ellipticity bounds need 0 < lambda1 <= lambda2");
  }
  for (const Field* m : {&c.mu_x, &c.mu_y}) {
    if (!m->grid || m->size() != g.size()) {
      throw Error(ErrorKind::inconsistent_flags, "coefficient fields must live on the problem grid");
    }
    for (double v : m->values) {
      if (!(v >= c.lambda1 && v <= c.lambda2)) {
        throw Error(ErrorKind::out_of_range, "coefficient outside [lambda1, lambda2]");
      }
    }
    if (!g.half()) {
      const int ny = g.cells(g.yaxis());
      for (std::size_t i = 0; i < g.size(); ++i) {
        auto ijk = g.coords(i);
        ijk[g.yaxis()] = ny - 1 - ijk[g.yaxis()];
        if ((*m)[i] != (*m)[g.index(ijk)]) {
          throw Error(ErrorKind::symmetry_inconsistency, "coefficients must be even in y");
        }
      }
    }
  }
}

double boundary_value(const PointFunction& g, const Grid& grid, std::size_t idx, int axis,
                      int side) {
  if (!g) return 0.0;
  Point z = grid.center(idx);
  z[axis] = side > 0 ? grid.hi(axis) : grid.lo(axis);
  return g(std::span<const double>(z.data(), grid.dim()));
}

const BoundaryCondition& outer_condition(const ProblemSpec& spec, const Grid& g, int axis,
                                         int side) {
  if (axis != g.yaxis()) return spec.bc.lateral;
  return side > 0 ? spec.bc.top : spec.bc.bottom;
}

}  // namespace

double face_transmissibility(const ProblemSpec& spec, const Grid& g, std::size_t idx, int axis,
                             int side) {
  const auto ijk = g.coords(idx);
  if (!has_face_neighbour(g, ijk, axis, side)) return 0.0;
  const std::size_t nb = side > 0 ? idx + g.stride(axis) : idx - g.stride(axis);
  const double a_face = harmonic(mu_at(spec, axis, g, idx), mu_at(spec, axis, g, nb));
  const double h = g.h(axis);
  if (axis != g.yaxis()) {
    const double y = g.center(g.yaxis(), ijk[g.yaxis()]);
    return eval_weight(spec.weight, y) * a_face / (h * h);
  }
  if (is_sigma_face(g, ijk, side)) {
    return sigma_coefficient(spec.weight, h) * a_face / (h * h);
  }
  const double y_face = g.center(axis, ijk[axis]) + 0.5 * side * h;
  return eval_weight(spec.weight, y_face) * a_face / (h * h);
}

SparseSystem assemble(const ProblemSpec& spec, GridPtr grid) {
  const Grid& g = *grid;
  validate(spec.weight);
  validate_coefficients(spec, g);
  if (spec.rhs == RhsKind::neumann_flux) {
    if (!(spec.weight.a > -1.0 && spec.weight.a < 1.0)) {
      throw Error(ErrorKind::out_of_range, "Neumann data on y = 0 needs a in (-1, 1)");
    }
    if (!g.half() || g.symmetry() != Symmetry::even) {
      throw Error(ErrorKind::inconsistent_flags, "Neumann data on y = 0 needs an even half grid");
    }
  }

  const std::size_t N = g.size();
  const int yax = g.yaxis();
  SparseSystem sys;
  sys.grid = grid;
  sys.rhs.assign(N, 0.0);
  auto& M = sys.matrix;
  M.dim = N;
  M.row_ptr.assign(N + 1, 0);
  M.col.reserve(N * (2 * g.dim() + 1));
  M.val.reserve(N * (2 * g.dim() + 1));

  bool any_dirichlet = g.symmetry() == Symmetry::odd;
  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t i = 0; i < N; ++i) {
    const auto ijk = g.coords(i);
    row.clear();
    double diag = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
      const double h = g.h(d);
      for (int side : {-1, 1}) {
        if (has_face_neighbour(g, ijk, d, side)) {
          const double T = face_transmissibility(spec, g, i, d, side);
          const std::size_t nb = side > 0 ? i + g.stride(d) : i - g.stride(d);
          diag += T;
          row.emplace_back(nb, -T);
          continue;
        }
        // y = 0 on a half grid: symmetry rule.
        if (d == yax && side < 0 && g.half()) {
          if (g.symmetry() == Symmetry::odd) {
            const double T = sigma_coefficient(spec.weight, h) * mu_at(spec, d, g, i) / (h * h);
            diag += 2.0 * T;
          }
          continue;
        }
        const BoundaryCondition& bc = outer_condition(spec, g, d, side);
        const double val = boundary_value(bc.g, g, i, d, side);
        if (bc.kind == BoundaryCondition::Kind::dirichlet) {
          any_dirichlet = true;
          double y = g.center(yax, ijk[yax]);
          if (d == yax) y += 0.5 * side * h;
          const double T = 2.0 * eval_weight(spec.weight, y) * mu_at(spec, d, g, i) / (h * h);
          diag += T;
          sys.rhs[i] += T * val;
        } else {
          sys.rhs[i] += val / h;
        }
      }
    }
    row.emplace_back(i, diag);
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      M.col.push_back(c);
      M.val.push_back(v);
    }
    M.row_ptr[i + 1] = M.col.size();
  }

  switch (spec.rhs) {
    case RhsKind::none:
      break;
    case RhsKind::volumetric: {
      if (!spec.f.grid || spec.f.size() != N) {
        throw Error(ErrorKind::inconsistent_flags, "volumetric rhs must live on the problem grid");
      }
      const double hy = g.h(yax);
      for (std::size_t i = 0; i < N; ++i) {
        const double yc = g.center(yax, g.coords(i)[yax]);
        sys.rhs[i] += weight_cell_average(spec.weight, yc - 0.5 * hy, yc + 0.5 * hy) * spec.f[i];
      }
      break;
    }
    case RhsKind::divergence: {
      const auto b = assemble_div_rhs(spec, g);
      for (std::size_t i = 0; i < N; ++i) sys.rhs[i] += b[i];
      break;
    }
    case RhsKind::neumann_flux: {
      const double hy = g.h(yax);
      for (std::size_t i : g.sigma_faces(std::numeric_limits<double>::infinity())) {
        Point z = g.center(i);
        z[yax] = 0.0;
        const double f = spec.flux ? spec.flux(std::span<const double>(z.data(), g.dim())) : 0.0;
        sys.rhs[i] -= f / hy;
      }
      break;
    }
  }
  sys.mean_zero_gauge = !any_dirichlet;
  return sys;
}

SparseSystem assemble_neumann(const ProblemSpec& spec, GridPtr grid) {
  if (!(spec.weight.a > -1.0 && spec.weight.a < 1.0)) {
    throw Error(ErrorKind::out_of_range, "Neumann data on y = 0 needs a in (-1, 1)");
  }
  ProblemSpec s = spec;
  s.rhs = RhsKind::neumann_flux;
  return assemble(s, std::move(grid));
}

std::vector<double> assemble_div_rhs(const ProblemSpec& spec, const Grid& g) {
  const int dim = g.dim();
  const int yax = g.yaxis();
  if (static_cast<int>(spec.F.size()) != dim) {
    throw Error(ErrorKind::inconsistent_flags, "divergence rhs needs one field per axis");
  }
  for (const auto& c : spec.F) {
    if (c.size() != g.size()) {
      throw Error(ErrorKind::inconsistent_flags, "divergence rhs must live on the problem grid");
    }
  }
  const Field& Fy = spec.F[yax];
  if (g.half() && g.symmetry() == Symmetry::even) {
    // F_y(x,0) by quadratic extrapolation from the first three rows.
    double peak = 0.0;
    for (double v : Fy.values) peak = std::max(peak, std::abs(v));
    const double hy = g.h(yax);
    const double tol = 4.0 * peak * hy * hy + 1e-14;
    const std::size_t sy = g.stride(yax);
    for (std::size_t i : g.sigma_faces(std::numeric_limits<double>::infinity())) {
      const double at0 = (15.0 * Fy[i] - 10.0 * Fy[i + sy] + 3.0 * Fy[i + 2 * sy]) / 8.0;
      if (std::abs(at0) > tol) {
        throw Error(ErrorKind::symmetry_inconsistency,
                    "F_y must vanish on y = 0 for even problems");
      }
    }
  }

  std::vector<double> b(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ijk = g.coords(i);
    double div = 0.0;
    for (int d = 0; d < dim; ++d) {
      const Field& Fd = spec.F[d];
      const double h = g.h(d);
      for (int side : {-1, 1}) {
        double face = 0.0;
        double y = g.center(yax, ijk[yax]);
        if (d == yax) y += 0.5 * side * h;
        if (has_face_neighbour(g, ijk, d, side)) {
          const std::size_t nb = side > 0 ? i + g.stride(d) : i - g.stride(d);
          face = 0.5 * (Fd[i] + Fd[nb]);
        } else if (d == yax && side < 0 && g.half()) {
          // Mirror: F_y is odd for even problems and even for odd ones.
          face = g.symmetry() == Symmetry::even ? 0.0 : Fd[i];
        } else if (has_face_neighbour(g, ijk, d, -side)) {
          const std::size_t in = side > 0 ? i - g.stride(d) : i + g.stride(d);
          face = 1.5 * Fd[i] - 0.5 * Fd[in];
        } else {
          face = Fd[i];
        }
        if (face == 0.0) continue;
        const bool on_sigma = d == yax && y == 0.0;
        if (on_sigma && spec.weight.eps == 0.0 && spec.weight.a < 0.0) {
          throw Error(ErrorKind::singular_evaluation, "weighted flux of F on y = 0 with a < 0");
        }
        div += side * eval_weight(spec.weight, y) * face / h;
      }
    }
    b[i] = -div;
  }
  return b;
}

double discrete_energy(const ProblemSpec& spec, const Field& u) {
  const Grid& g = *u.grid;
  const double vol = g.cell_volume();
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ijk = g.coords(i);
    for (int d = 0; d < g.dim(); ++d) {
      if (has_face_neighbour(g, ijk, d, 1)) {
        const double du = u[i + g.stride(d)] - u[i];
        e += face_transmissibility(spec, g, i, d, 1) * du * du * vol;
      }
    }
    if (g.half() && g.symmetry() == Symmetry::odd && ijk[g.yaxis()] == 0) {
      const double h = g.h(g.yaxis());
      const double T = sigma_coefficient(spec.weight, h) * mu_at(spec, g.yaxis(), g, i) / (h * h);
      e += 2.0 * T * u[i] * u[i] * vol;
    }
  }
  return e;
}

}  // namespace rholab
