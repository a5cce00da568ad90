#include "rholab/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rholab/ball.hpp"
#include "rholab/error.hpp"

namespace rholab {

namespace {

void check_weight(const WeightParams& w) {
  validate(w);
  if (w.eps != 0.0 && w.eps != 1.0) {
    throw Error(ErrorKind::out_of_range, "frequency quantities are taken at eps = 0 or eps = 1");
  }
}

void check_radii(std::span<const double> radii, double rmin, double rmax) {
  if (radii.empty()) throw Error(ErrorKind::out_of_range, "need at least one radius");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k] < rmin * (1.0 - 1e-12)) {
      throw Error(ErrorKind::radius_too_small, "radius below 4h");
    }
    if (radii[k] > rmax) throw Error(ErrorKind::out_of_range, "radius leaves the domain");
    if (k > 0 && !(radii[k] > radii[k - 1])) {
      throw Error(ErrorKind::out_of_range, "radii must increase");
    }
  }
}

/// Derivative at x[k] of the Lagrange interpolant through five neighbours.
double lagrange_derivative(std::span<const double> x, std::span<const double> f, std::size_t k) {
  const std::size_t m = x.size();
  const std::size_t width = std::min<std::size_t>(5, m);
  std::size_t lo = k >= 2 ? k - 2 : 0;
  lo = std::min(lo, m - width);
  double d = 0.0;
  for (std::size_t i = lo; i < lo + width; ++i) {
    // l_i'(x_k)
    double li = 0.0;
    for (std::size_t j = lo; j < lo + width; ++j) {
      if (j == i) continue;
      double term = 1.0 / (x[i] - x[j]);
      for (std::size_t l = lo; l < lo + width; ++l) {
        if (l == i || l == j) continue;
        term *= (x[k] - x[l]) / (x[i] - x[l]);
      }
      li += term;
    }
    d += f[i] * li;
  }
  return d;
}

void finish(FrequencyProfile& p) {
  p.dH_dr.resize(p.radii.size());
  if (p.radii.size() < 2) {
    std::fill(p.dH_dr.begin(), p.dH_dr.end(), std::numeric_limits<double>::quiet_NaN());
    return;
  }
  for (std::size_t k = 0; k < p.radii.size(); ++k) p.dH_dr[k] = lagrange_derivative(p.radii, p.H, k);
}

struct Direction {
  Point omega;
  double weight;
};

/// Midpoint directions on the unit upper half circle / half sphere.
std::vector<Direction> half_sphere_directions(int n, int nodes) {
  std::vector<Direction> out;
  if (n == 1) {
    const double dt = M_PI / nodes;
    for (int k = 0; k < nodes; ++k) {
      const double t = (k + 0.5) * dt;
      out.push_back({{std::cos(t), std::sin(t), 0.0}, dt});
    }
    return out;
  }
  const int polar = std::max(2, nodes / 2);
  const double dth = 0.5 * M_PI / polar;
  const double dph = 2.0 * M_PI / nodes;
  for (int a = 0; a < polar; ++a) {
    const double th = (a + 0.5) * dth;
    for (int b = 0; b < nodes; ++b) {
      const double ph = (b + 0.5) * dph;
      out.push_back({{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)},
                     std::sin(th) * dth * dph});
    }
  }
  return out;
}

}  // namespace

FrequencyProfile compute_HE(const Field& u, const WeightParams& w, std::span<const double> radii,
                            const FrequencyOptions& opts) {
  const Grid& g = *u.grid;
  check_weight(w);
  if (!g.half()) throw Error(ErrorKind::inconsistent_flags, "frequency profiles need a half grid");
  double h = 0.0;
  for (int d = 0; d < g.dim(); ++d) h = std::max(h, g.h(d));
  check_radii(radii, 4.0 * h, 1.0);

  FrequencyProfile p;
  p.a = w.a;
  p.eps = w.eps;
  p.n = g.n();
  p.vanishes_on_sigma = g.symmetry() == Symmetry::odd;
  const double n = g.n();
  for (double r : radii) {
    double mass = 0.0;
    for (const auto& node : half_sphere_nodes(g, r, opts.boundary_nodes)) {
      const double v = interpolate(u, node);
      mass += node.weight * eval_weight(w, node.z[g.yaxis()]) * v * v;
    }
    const double energy = ball_energy(u, w, ball_fractions(g, r, opts.subsamples));
    p.radii.push_back(r);
    p.H.push_back(mass / std::pow(r, n + w.a));
    p.E.push_back(energy / std::pow(r, n + w.a - 1.0));
  }
  finish(p);
  return p;
}

FrequencyProfile compute_HE(const PointFunction& u, const GradientFunction& grad, int n,
                            const WeightParams& w, std::span<const double> radii,
                            const FrequencyOptions& opts) {
  check_weight(w);
  if (n != 1 && n != 2) throw Error(ErrorKind::out_of_range, "x-dimension must be 1 or 2");
  check_radii(radii, 0.0, std::numeric_limits<double>::infinity());
  const int dim = n + 1;
  const auto dirs = half_sphere_directions(n, opts.boundary_nodes);

  FrequencyProfile p;
  p.a = w.a;
  p.eps = w.eps;
  p.n = n;

  // u(x, 0) = 0 at a few sample points decides the class.
  p.vanishes_on_sigma = true;
  for (double x : {-0.9, -0.37, 0.0, 0.21, 0.66}) {
    Point z{x, n == 2 ? 0.5 * x : 0.0, 0.0};
    if (std::abs(u(std::span<const double>(z.data(), dim))) > 1e-12) p.vanishes_on_sigma = false;
  }

  auto shell = [&](double s, bool gradient) {
    double acc = 0.0;
    std::array<double, 3> gvec{};
    for (const auto& d : dirs) {
      Point z{};
      for (int k = 0; k < dim; ++k) z[k] = s * d.omega[k];
      const std::span<const double> zs(z.data(), dim);
      const double rho = eval_weight(w, z[n]);
      double v;
      if (gradient) {
        grad(zs, std::span<double>(gvec.data(), dim));
        v = 0.0;
        for (int k = 0; k < dim; ++k) v += gvec[k] * gvec[k];
      } else {
        const double val = u(zs);
        v = val * val;
      }
      acc += d.weight * rho * v;
    }
    return acc * std::pow(s, n);
  };

  for (double r : radii) {
    const double mass = shell(r, false);
    const double energy = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double s) { return shell(s, true); }, 0.0, r, 15, 1e-13);
    p.radii.push_back(r);
    p.H.push_back(mass / std::pow(r, n + w.a));
    p.E.push_back(energy / std::pow(r, n + w.a - 1.0));
  }
  finish(p);
  return p;
}

double check_derivative_relation(const FrequencyProfile& p) {
  if (p.eps != 0.0) {
    throw Error(ErrorKind::wrong_class, "H' = 2E/r holds at eps = 0 only; eps = 1 adds a correction");
  }
  if (!p.vanishes_on_sigma) {
    throw Error(ErrorKind::wrong_class, "H' = 2E/r needs a field vanishing on y = 0");
  }
  if (p.radii.size() < 5) throw Error(ErrorKind::out_of_range, "need at least 5 radii");
  double worst = 0.0;
  for (std::size_t k = 2; k + 2 < p.radii.size(); ++k) {
    const double rhs = 2.0 * p.E[k] / p.radii[k];
    worst = std::max(worst, std::abs(p.dH_dr[k] - rhs) / std::abs(rhs));
  }
  return worst;
}

double growth_exponent(const FrequencyProfile& p) {
  if (p.radii.size() < 5) throw Error(ErrorKind::out_of_range, "need at least 5 radii");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < p.radii.size(); ++k) {
    if (!(p.H[k] > 0.0)) throw Error(ErrorKind::degenerate_fit, "H must be positive on the window");
    const double x = std::log(p.radii[k]);
    const double y = std::log(p.H[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(p.radii.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<double> log_radii(double r0, double r1, int count) {
  if (count < 2 || !(r0 > 0.0) || !(r1 > r0)) {
    throw Error(ErrorKind::out_of_range, "need 0 < r0 < r1 and at least 2 radii");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[k] = r0 * std::pow(r1 / r0, static_cast<double>(k) / (count - 1));
  out.back() = r1;
  return out;
}

void write_csv(std::ostream& os, const FrequencyProfile& p) {
  os << "r,H,E,dH_dr,two_E_over_r\n";
  char buf[160];
  for (std::size_t k = 0; k < p.radii.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e\n", p.radii[k], p.H[k], p.E[k],
                  p.dH_dr[k], 2.0 * p.E[k] / p.radii[k]);
    os << buf;
  }
}

}  // namespace rholab
