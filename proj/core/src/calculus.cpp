#include "rholab/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "rholab/assembly.hpp"
#include "rholab/error.hpp"
#include "rholab/solver.hpp"

namespace rholab {

std::size_t StaggeredField::columns() const { return grid->stride(grid->yaxis()); }
int StaggeredField::faces() const { return grid->cells(grid->yaxis()) + 1; }
double& StaggeredField::at(std::size_t column, int j) {
  return values[column * static_cast<std::size_t>(faces()) + static_cast<std::size_t>(j)];
}
double StaggeredField::at(std::size_t column, int j) const {
  return values[column * static_cast<std::size_t>(faces()) + static_cast<std::size_t>(j)];
}

namespace {

bool weight_regular_at_zero(const WeightParams& p) { return p.eps > 0.0 || p.a == 0.0; }

/// Effective rho for the segment [-h/2, h/2] around y = 0.
double sigma_weight(const WeightParams& p, double h, FaceRule rule) {
  if (rule == FaceRule::midpoint && weight_regular_at_zero(p)) return eval_weight(p, 0.0);
  const double inv = inverse_weight_integral(p, -0.5 * h, 0.5 * h);
  return std::isfinite(inv) ? h / inv : 0.0;
}

struct ColumnView {
  const Field& u;
  std::size_t column;
  std::size_t stride;
  double operator[](int j) const { return u[column + static_cast<std::size_t>(j) * stride]; }
};

}  // namespace

StaggeredField weighted_dy(const Field& u, const WeightParams& p, FaceRule rule) {
  validate(p);
  const Grid& g = *u.grid;
  const int yax = g.yaxis();
  const int ny = g.cells(yax);
  const double h = g.h(yax);
  StaggeredField out{u.grid, {}};
  out.values.assign(out.columns() * static_cast<std::size_t>(ny + 1), 0.0);

  for (std::size_t c = 0; c < out.columns(); ++c) {
    const ColumnView col{u, c, g.stride(yax)};
    for (int j = 0; j <= ny; ++j) {
      const double yf = g.lo(yax) + j * h;
      double value = 0.0;
      if (j == 0 && g.half()) {
        if (g.symmetry() == Symmetry::odd) value = sigma_weight(p, h, rule) * 2.0 * col[0] / h;
      } else if (j == 0) {
        value = -eval_weight(p, yf) * (2.0 * col[0] - 3.0 * col[1] + col[2]) / h;
      } else if (j == ny) {
        value = eval_weight(p, yf) * (2.0 * col[ny - 1] - 3.0 * col[ny - 2] + col[ny - 3]) / h;
      } else {
        const double du = col[j] - col[j - 1];
        if (!g.half() && j == g.sigma_row()) {
          value = sigma_weight(p, h, rule) * du / h;
        } else if (rule == FaceRule::midpoint) {
          value = eval_weight(p, yf) * du / h;
        } else {
          const double inv = inverse_weight_integral(p, yf - 0.5 * h, yf + 0.5 * h);
          value = std::isfinite(inv) ? du / inv : 0.0;
        }
      }
      out.at(c, j) = value;
    }
  }
  return out;
}

Field op_G(const Field& u) {
  const Grid& g = *u.grid;
  const int yax = g.yaxis();
  const int ny = g.cells(yax);
  const double h = g.h(yax);
  const std::size_t sy = g.stride(yax);
  Field out(u.grid);
  for (std::size_t c = 0; c < sy; ++c) {
    const ColumnView col{u, c, sy};
    for (int j = 0; j < ny; ++j) {
      double dy;
      if (j == 0 && g.half()) {
        const double ghost = g.symmetry() == Symmetry::odd ? -col[0] : col[0];
        dy = (col[1] - ghost) / (2.0 * h);
      } else if (j == 0) {
        dy = (-3.0 * col[0] + 4.0 * col[1] - col[2]) / (2.0 * h);
      } else if (j == ny - 1) {
        dy = (3.0 * col[j] - 4.0 * col[j - 1] + col[j - 2]) / (2.0 * h);
      } else {
        dy = (col[j + 1] - col[j - 1]) / (2.0 * h);
      }
      out[c + static_cast<std::size_t>(j) * sy] = dy / g.center(yax, j);
    }
  }
  return out;
}

Field op_Fa(const Field& u, const WeightParams& p) {
  const Grid& g = *u.grid;
  const int yax = g.yaxis();
  const int ny = g.cells(yax);
  const double h = g.h(yax);
  const std::size_t sy = g.stride(yax);
  const StaggeredField W = weighted_dy(u, p, FaceRule::midpoint);
  std::vector<double> mean_rho(static_cast<std::size_t>(ny));
  for (int j = 0; j < ny; ++j) {
    const double yc = g.center(yax, j);
    mean_rho[static_cast<std::size_t>(j)] = weight_cell_average(p, yc - 0.5 * h, yc + 0.5 * h);
  }
  Field out(u.grid);
  for (std::size_t c = 0; c < sy; ++c) {
    for (int j = 0; j < ny; ++j) {
      out[c + static_cast<std::size_t>(j) * sy] =
          (W.at(c, j + 1) - W.at(c, j)) / (h * mean_rho[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

Field second_dy(const Field& u) { return op_Fa(u, WeightParams{0.0, 0.0, false}); }

DualityResult duality_transform(const Field& w, const WeightParams& p) {
  const Grid& g = *w.grid;
  const int yax = g.yaxis();
  const int ny = g.cells(yax);
  const std::size_t sy = g.stride(yax);
  const StaggeredField W = weighted_dy(w, p, FaceRule::flux_exact);

  std::vector<int> cells(g.dim());
  for (int d = 0; d < g.dim(); ++d) cells[d] = g.cells(d);
  Symmetry flipped = Symmetry::none;
  if (g.symmetry() == Symmetry::even) flipped = Symmetry::odd;
  if (g.symmetry() == Symmetry::odd) flipped = Symmetry::even;
  GridPtr dual_grid = build_grid(g.n(), cells, g.half(), flipped);

  Field v(dual_grid);
  for (std::size_t c = 0; c < sy; ++c) {
    for (int j = 0; j < ny; ++j) {
      v[c + static_cast<std::size_t>(j) * sy] = 0.5 * (W.at(c, j) + W.at(c, j + 1));
    }
  }

  ProblemSpec spec;
  spec.weight = p.dual();
  const SparseSystem sys = assemble(spec, dual_grid);
  const Field r = apply(sys, v);

  // The pointwise residual of a smooth v blows up like h^2 y^-3 next to the
  // degenerate plane, so it is reported in solution units: the largest
  // correction that makes v discretely weight(-a) harmonic in the interior.
  std::vector<double> interior(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ijk = g.coords(i);
    bool inner = true;
    for (int d = 0; d < g.dim(); ++d) {
      const int k = ijk[d];
      const bool open_below = d == yax && g.half();
      if ((!open_below && k < 2) || k > g.cells(d) - 3) inner = false;
    }
    if (inner) interior[i] = r[i];
  }
  const std::vector<double> correction = solve_vector(sys.matrix, interior, {}, false, nullptr);
  double worst = 0.0;
  for (double c : correction) worst = std::max(worst, std::abs(c));
  return {std::move(v), worst};
}

Field G_from_rhs(const Field& gfield, double a) {
  const Grid& g = *gfield.grid;
  if (!(a > -1.0)) throw Error(ErrorKind::out_of_range, "G_from_rhs needs a > -1");
  if (!g.half() || g.symmetry() != Symmetry::even) {
    throw Error(ErrorKind::inconsistent_flags, "G_from_rhs needs an even half-grid field");
  }
  const int yax = g.yaxis();
  const int ny = g.cells(yax);
  const std::size_t sy = g.stride(yax);

  // Quadratic extrapolation in s = y^2 from the first three centers.
  const double s[3] = {std::pow(g.center(yax, 0), 2), std::pow(g.center(yax, 1), 2),
                       std::pow(g.center(yax, 2), 2)};
  double lag[3];
  for (int k = 0; k < 3; ++k) {
    double num = 1.0;
    double den = 1.0;
    for (int m = 0; m < 3; ++m) {
      if (m == k) continue;
      num *= -s[m];
      den *= s[k] - s[m];
    }
    lag[k] = num / den;
  }

  // int_{t0}^{t1} t^a (alpha + beta t) dt
  auto segment = [a](double t0, double t1, double f0, double f1) {
    const double beta = (f1 - f0) / (t1 - t0);
    const double alpha = f0 - beta * t0;
    return alpha * (std::pow(t1, a + 1.0) - std::pow(t0, a + 1.0)) / (a + 1.0) +
           beta * (std::pow(t1, a + 2.0) - std::pow(t0, a + 2.0)) / (a + 2.0);
  };

  Field out(gfield.grid);
  for (std::size_t c = 0; c < sy; ++c) {
    const ColumnView col{gfield, c, sy};
    const double g0 = lag[0] * col[0] + lag[1] * col[1] + lag[2] * col[2];
    double t_prev = 0.0;
    double f_prev = 0.0;
    double integral = 0.0;
    for (int j = 0; j < ny; ++j) {
      const double t = g.center(yax, j);
      const double f = col[j] - g0;
      integral += segment(t_prev, t, f_prev, f);
      out[c + static_cast<std::size_t>(j) * sy] = integral / std::pow(t, 1.0 + a) + g0 / (1.0 + a);
      t_prev = t;
      f_prev = f;
    }
  }
  return out;
}

}  // namespace rholab
