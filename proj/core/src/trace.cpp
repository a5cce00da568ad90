#include "rholab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "rholab/assembly.hpp"
#include "rholab/error.hpp"
#include "rholab/random.hpp"
#include "rholab/solver.hpp"

namespace rholab {

namespace {

void require_trial_grid(const Grid& g) {
  if (!g.half() || g.symmetry() != Symmetry::odd) {
    throw Error(ErrorKind::trial_violates_pre,
                "trial fields must vanish on y = 0 (use an odd half grid)");
  }
}

void require_weight(const WeightParams& w) {
  validate(w);
  if (!(w.a < 1.0)) throw Error(ErrorKind::out_of_range, "trace quotients need a < 1");
}

double mu_eps(const WeightParams& w, double y) {
  if (w.eps == 0.0) return 1.0 - w.a;
  return y / (eval_weight(w, y) * u_bar(w, y));
}

}  // namespace

TraceTerms trace_terms(const Field& u, const WeightParams& w, const TraceOptions& opts) {
  const Grid& g = *u.grid;
  require_trial_grid(g);
  require_weight(w);
  TraceTerms t;
  t.energy = ball_energy(u, w, ball_fractions(g, 1.0, opts.subsamples));
  for (const auto& node : half_sphere_nodes(g, 1.0, opts.boundary_nodes)) {
    const double y = node.z[g.yaxis()];
    const double v = interpolate(u, node);
    const double m = node.weight * eval_weight(w, y) * v * v;
    t.mass += m;
    t.hardy += m / y;
    t.mu_mass += m * mu_eps(w, y);
    t.correction += m / (w.eps * w.eps + y * y);
  }
  return t;
}

namespace {
double ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                    : std::numeric_limits<double>::infinity();
  return num / den;
}
}  // namespace

double rayleigh_trace(const Field& u, const WeightParams& w, const TraceOptions& opts) {
  const auto t = trace_terms(u, w, opts);
  return ratio(t.energy, t.mass);
}

double rayleigh_hardy(const Field& u, const WeightParams& w, const TraceOptions& opts) {
  const auto t = trace_terms(u, w, opts);
  return ratio(t.energy, t.hardy);
}

double rayleigh_trace_mu(const Field& u, const WeightParams& w, const TraceOptions& opts) {
  const auto t = trace_terms(u, w, opts);
  return ratio(t.energy, t.mu_mass);
}

double stability_quotient(const Field& u, const WeightParams& w, const TraceOptions& opts) {
  const auto t = trace_terms(u, w, opts);
  return ratio(t.energy - 0.5 * w.a * w.eps * w.eps * t.correction, t.mass);
}

Field sample_trial(GridPtr grid, const PointFunction& u) {
  require_trial_grid(*grid);
  Field f = sample(grid, u);
  double peak = 1.0;
  for (double v : f.values) peak = std::max(peak, std::abs(v));
  const Grid& g = *grid;
  for (std::size_t i : g.sigma_faces(std::numeric_limits<double>::infinity())) {
    Point z = g.center(i);
    z[g.yaxis()] = 0.0;
    if (std::abs(u(std::span<const double>(z.data(), g.dim()))) > 1e-12 * peak) {
      throw Error(ErrorKind::trial_violates_pre, "trial does not vanish on y = 0");
    }
  }
  return f;
}

double rayleigh_trace_min(GridPtr grid, const WeightParams& w, const TraceOptions& opts) {
  const Grid& g = *grid;
  require_trial_grid(g);
  require_weight(w);
  const int dim = g.dim();
  const int yax = g.yaxis();
  const double vol = g.cell_volume();
  const double hy = g.h(yax);
  const BallFractions frac = ball_fractions(g, 1.0, opts.subsamples);

  std::vector<long> slot(g.size(), -1);
  std::vector<std::size_t> cells;
  auto activate = [&](std::size_t i) {
    if (slot[i] < 0) {
      slot[i] = static_cast<long>(cells.size());
      cells.push_back(i);
    }
  };
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int d = 0; d < dim; ++d) {
      if (frac.face[i * dim + d] > 0.0) {
        activate(i);
        activate(i + g.stride(d));
      }
    }
    if (frac.sigma[i] > 0.0) activate(i);
  }
  const std::size_t m = cells.size();

  // Energy matrix on the active cells.
  ProblemSpec spec;
  spec.weight = w;
  std::vector<std::map<std::size_t, double>> rows(m);
  const double strip_inv = inverse_weight_integral(w, 0.0, 0.5 * hy);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int d = 0; d < dim; ++d) {
      const double f = frac.face[i * dim + d];
      if (f == 0.0) continue;
      const double c = f * face_transmissibility(spec, g, i, d, 1) * vol;
      const auto p = static_cast<std::size_t>(slot[i]);
      const auto q = static_cast<std::size_t>(slot[i + g.stride(d)]);
      rows[p][p] += c;
      rows[q][q] += c;
      rows[p][q] -= c;
      rows[q][p] -= c;
    }
    if (frac.sigma[i] > 0.0 && std::isfinite(strip_inv)) {
      const auto p = static_cast<std::size_t>(slot[i]);
      rows[p][p] += frac.sigma[i] / strip_inv * (vol / hy);
    }
  }
  SparseMatrix K;
  K.dim = m;
  K.row_ptr.assign(m + 1, 0);
  for (std::size_t r = 0; r < m; ++r) {
    for (const auto& [c, v] : rows[r]) {
      K.col.push_back(c);
      K.val.push_back(v);
    }
    K.row_ptr[r + 1] = K.col.size();
  }

  // Boundary mass as a sum of rank-one terms; stencil weights on inactive
  // cells are dropped and the rest rescaled.
  struct Node {
    double weight;
    std::vector<std::pair<std::size_t, double>> phi;
  };
  std::vector<Node> nodes;
  for (const auto& node : half_sphere_nodes(g, 1.0, opts.boundary_nodes)) {
    Node n{node.weight * eval_weight(w, node.z[yax]), {}};
    double all = 0.0;
    double kept = 0.0;
    for (int k = 0; k < node.count; ++k) {
      const auto [cell, wt] = node.stencil[static_cast<std::size_t>(k)];
      all += std::abs(wt);
      if (slot[cell] >= 0) {
        kept += std::abs(wt);
        n.phi.emplace_back(static_cast<std::size_t>(slot[cell]), wt);
      }
    }
    if (kept == 0.0) continue;
    for (auto& e : n.phi) e.second *= all / kept;
    nodes.push_back(std::move(n));
  }
  auto apply_mass = [&](const std::vector<double>& x) {
    std::vector<double> y(m, 0.0);
    for (const auto& n : nodes) {
      double s = 0.0;
      for (const auto& [c, v] : n.phi) s += v * x[c];
      for (const auto& [c, v] : n.phi) y[c] += n.weight * s * v;
    }
    return y;
  };
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  std::vector<double> x(m), kx(m);
  for (std::size_t k = 0; k < m; ++k) x[k] = g.center(cells[k])[yax];
  double lambda = std::numeric_limits<double>::infinity();
  SolveOptions so;
  so.rel_tol = 1e-10;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const auto mx = apply_mass(x);
    x = solve_vector(K, mx, so);
    const double norm = std::sqrt(dot(x, x));
    for (double& v : x) v /= norm;
    K.multiply(x, kx);
    const double next = dot(x, kx) / dot(x, apply_mass(x));
    const bool done = std::abs(next - lambda) <= opts.tolerance * std::abs(next);
    lambda = next;
    if (done) break;
  }
  return lambda;
}

PointFunction random_trial(std::uint64_t seed, int n) {
  SplitMix64 rng(seed);
  const int terms = n == 1 ? 6 : 10;
  std::vector<double> c(static_cast<std::size_t>(terms));
  for (double& v : c) v = rng.uniform(-1.0, 1.0);
  if (n == 1) {
    return [c](std::span<const double> z) {
      const double x = z[0], y = z[1];
      return y * (c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y);
    };
  }
  return [c](std::span<const double> z) {
    const double x1 = z[0], x2 = z[1], y = z[2];
    return y * (c[0] + c[1] * x1 + c[2] * x2 + c[3] * y + c[4] * x1 * x1 + c[5] * x2 * x2 +
                c[6] * y * y + c[7] * x1 * x2 + c[8] * x1 * y + c[9] * x2 * y);
  };
}

}  // namespace rholab
