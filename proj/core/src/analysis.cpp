#include "rholab/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "rholab/error.hpp"
#include "rholab/random.hpp"

namespace rholab {

bool Region::contains(const Point& z, int dim) const {
  switch (kind) {
    case Kind::whole:
      return true;
    case Kind::box:
      for (int d = 0; d < dim; ++d) {
        if (z[d] < lo[d] || z[d] > hi[d]) return false;
      }
      return true;
    case Kind::ball: {
      double s = 0.0;
      for (int d = 0; d < dim; ++d) s += z[d] * z[d];
      return s < radius * radius;
    }
  }
  return false;
}

namespace {

std::vector<char> region_mask(const Grid& g, const Region& region) {
  std::vector<char> mask(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) mask[i] = region.contains(g.center(i), g.dim());
  return mask;
}

double min_h(const Grid& g) {
  double h = g.h(0);
  for (int d = 1; d < g.dim(); ++d) h = std::min(h, g.h(d));
  return h;
}

struct Fit {
  double alpha = 0.0;
  double A = 0.0;
  double B = 0.0;
  double ssr = std::numeric_limits<double>::infinity();
};

/// Relative least squares for osc = A + B s^alpha, A <= 0, B >= 0.
Fit fit_offset_power(std::span<const double> s, std::span<const double> osc, double cap) {
  Fit best;
  const int steps = static_cast<int>(std::lround(cap / 1e-3));
  for (int k = 0; k <= steps; ++k) {
    const double alpha = k * 1e-3;
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double w = 1.0 / (osc[i] * osc[i]);
      const double p = std::pow(s[i], alpha);
      s11 += w;
      s12 += w * p;
      s22 += w * p * p;
      b1 += w * osc[i];
      b2 += w * osc[i] * p;
    }
    double A = 0.0;
    double B = 0.0;
    const double det = s11 * s22 - s12 * s12;
    if (std::abs(det) > 1e-14 * s11 * s22) {
      A = (b1 * s22 - b2 * s12) / det;
      B = (s11 * b2 - s12 * b1) / det;
    }
    if (!(A <= 0.0) || std::abs(det) <= 1e-14 * s11 * s22) {
      A = 0.0;
      B = b2 / s22;
    }
    B = std::max(B, 0.0);
    double ssr = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double r = (osc[i] - A - B * std::pow(s[i], alpha)) / osc[i];
      ssr += r * r;
    }
    if (ssr < best.ssr - 1e-15) best = {alpha, A, B, ssr};
  }
  return best;
}

void check_scales(const Grid& g, std::span<const double> scales) {
  if (scales.size() < 4) throw Error(ErrorKind::out_of_range, "need at least 4 scales");
  const double hmin = min_h(g);
  for (double s : scales) {
    if (!(s >= 2.0 * hmin * (1.0 - 1e-12))) {
      throw Error(ErrorKind::out_of_range, "scales must be at least 2h");
    }
  }
}

}  // namespace

double weighted_lp(const Field& u, double p, const WeightParams& w, const Region& region) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::out_of_range, "need finite p >= 1");
  const Grid& g = *u.grid;
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point z = g.center(i);
    if (!region.contains(z, g.dim())) continue;
    sum += eval_weight(w, z[g.yaxis()]) * std::pow(std::abs(u[i]), p);
  }
  return std::pow(sum * g.cell_volume(), 1.0 / p);
}

std::vector<double> dyadic_scales(const Grid& grid, double r) {
  std::vector<double> out;
  for (double s = 4.0 * min_h(grid); s <= 0.5 * r * (1.0 + 1e-12); s *= 2.0) out.push_back(s);
  return out;
}

double oscillation(const Field& u, const Region& region, double s, const HolderOptions& opts) {
  const Grid& g = *u.grid;
  const auto mask = region_mask(g, region);
  double m = 0.0;
  for (int d = 0; d < g.dim(); ++d) {
    const int k = static_cast<int>(std::lround(s / g.h(d)));
    if (k < 1 || std::abs(k * g.h(d) / s - 1.0) > 0.01) continue;
    const std::size_t off = static_cast<std::size_t>(k) * g.stride(d);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!mask[i] || g.coords(i)[d] + k >= g.cells(d)) continue;
      if (mask[i + off]) m = std::max(m, std::abs(u[i] - u[i + off]));
    }
  }

  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mask[i]) cells.push_back(i);
  }
  if (cells.empty() || opts.random_pairs <= 0) return m;
  // Random pairs: a random direction rounded to the lattice; the pair counts
  // only when its true distance is within 1% of s.
  SplitMix64 rng(opts.seed ^ std::bit_cast<std::uint64_t>(s));
  const int dim = g.dim();
  int accepted = 0;
  for (int attempt = 0; attempt < 50 * opts.random_pairs && accepted < opts.random_pairs;
       ++attempt) {
    const std::size_t i = cells[rng.below(cells.size())];
    Point dir{};
    if (dim == 2) {
      const double t = rng.uniform(0.0, 2.0 * M_PI);
      dir = {std::cos(t), std::sin(t), 0.0};
    } else {
      const double c = rng.uniform(-1.0, 1.0);
      const double t = rng.uniform(0.0, 2.0 * M_PI);
      const double r = std::sqrt(1.0 - c * c);
      dir = {r * std::cos(t), r * std::sin(t), c};
    }
    auto ijk = g.coords(i);
    bool inside = true;
    double dist2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      const int k = static_cast<int>(std::lround(s * dir[d] / g.h(d)));
      dist2 += std::pow(k * g.h(d), 2);
      ijk[d] += k;
      if (ijk[d] < 0 || ijk[d] >= g.cells(d)) inside = false;
    }
    if (!inside || std::abs(std::sqrt(dist2) / s - 1.0) > 0.01) continue;
    const std::size_t j = g.index(ijk);
    if (!mask[j]) continue;
    ++accepted;
    m = std::max(m, std::abs(u[i] - u[j]));
  }
  return m;
}

RegularityReport holder_estimate(const Field& u, const Region& region,
                                 std::span<const double> scales, const HolderOptions& opts) {
  check_scales(*u.grid, scales);
  RegularityReport rep;
  rep.scales.assign(scales.begin(), scales.end());
  rep.scale_min = *std::min_element(scales.begin(), scales.end());
  rep.scale_max = *std::max_element(scales.begin(), scales.end());
  double peak = 0.0;
  for (double s : scales) {
    rep.oscillation.push_back(oscillation(u, region, s, opts));
    peak = std::max(peak, rep.oscillation.back());
  }
  if (peak == 0.0) {
    rep.degenerate = true;
    rep.alpha_fit = opts.cap;
    return rep;
  }
  std::vector<double> s_fit, o_fit;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (rep.oscillation[i] > 0.0) {
      s_fit.push_back(scales[i]);
      o_fit.push_back(rep.oscillation[i]);
    }
  }
  const Fit fit = fit_offset_power(s_fit, o_fit, opts.cap);
  rep.alpha_fit = fit.alpha;
  rep.fit_residual = std::sqrt(fit.ssr / static_cast<double>(s_fit.size()));
  for (std::size_t i = 0; i < scales.size(); ++i) {
    rep.seminorm = std::max(rep.seminorm, rep.oscillation[i] / std::pow(scales[i], fit.alpha));
  }
  return rep;
}

double holder_seminorm(const Field& u, const Region& region, std::span<const double> scales,
                       double alpha, const HolderOptions& opts) {
  double m = 0.0;
  for (double s : scales) m = std::max(m, oscillation(u, region, s, opts) / std::pow(s, alpha));
  return m;
}

std::vector<Field> gradient(const Field& u) {
  const Grid& g = *u.grid;
  std::vector<Field> out;
  for (int d = 0; d < g.dim(); ++d) {
    Field c(u.grid);
    const double h = g.h(d);
    const std::size_t st = g.stride(d);
    const int n = g.cells(d);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const int k = g.coords(i)[d];
      double v;
      if (k == 0 && d == g.yaxis() && g.half()) {
        const double ghost = g.symmetry() == Symmetry::odd ? -u[i] : u[i];
        v = (u[i + st] - ghost) / (2.0 * h);
      } else if (k == 0) {
        v = (-3.0 * u[i] + 4.0 * u[i + st] - u[i + 2 * st]) / (2.0 * h);
      } else if (k == n - 1) {
        v = (3.0 * u[i] - 4.0 * u[i - st] + u[i - 2 * st]) / (2.0 * h);
      } else {
        v = (u[i + st] - u[i - st]) / (2.0 * h);
      }
      c[i] = v;
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

/// Gradient components whose oscillation is not negligible next to the largest.
std::vector<Field> active_components(const Field& u, const Region& region,
                                     std::span<const double> scales, const HolderOptions& opts) {
  auto comps = gradient(u);
  std::vector<double> peaks;
  double top = 0.0;
  for (const auto& c : comps) {
    double p = 0.0;
    for (double s : scales) p = std::max(p, oscillation(c, region, s, opts));
    peaks.push_back(p);
    top = std::max(top, p);
  }
  std::vector<Field> active;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    if (top > 0.0 && peaks[k] > 1e-6 * top) active.push_back(std::move(comps[k]));
  }
  return active;
}

}  // namespace

RegularityReport c1alpha_estimate(const Field& u, const Region& region,
                                  std::span<const double> scales, const HolderOptions& opts) {
  check_scales(*u.grid, scales);
  HolderOptions unit = opts;
  unit.cap = 1.0;
  const auto comps = active_components(u, region, scales, unit);
  if (comps.empty()) {
    RegularityReport rep;
    rep.degenerate = true;
    rep.alpha_fit = 2.0;
    rep.scales.assign(scales.begin(), scales.end());
    rep.scale_min = scales.front();
    rep.scale_max = scales.back();
    return rep;
  }
  RegularityReport worst;
  bool first = true;
  for (const auto& c : comps) {
    auto rep = holder_estimate(c, region, scales, unit);
    if (first || rep.alpha_fit < worst.alpha_fit) worst = std::move(rep);
    first = false;
  }
  if (worst.alpha_fit < 0.05) {
    auto rep = holder_estimate(u, region, scales, unit);
    rep.c1 = false;
    return rep;
  }
  worst.alpha_fit += 1.0;
  return worst;
}

double c1alpha_seminorm(const Field& u, const Region& region, std::span<const double> scales,
                        double alpha, const HolderOptions& opts) {
  double m = 0.0;
  for (const auto& c : active_components(u, region, scales, opts)) {
    m = std::max(m, holder_seminorm(c, region, scales, alpha, opts));
  }
  return m;
}

double moser_ratio(const Field& u, const Field& f, const WeightParams& w, double p, double beta,
                   double r) {
  const Grid& g = *u.grid;
  const double threshold = (g.n() + 1 + std::max(w.a, 0.0)) / 2.0;
  if (!(p > threshold)) {
    throw Error(ErrorKind::out_of_range, "Moser bound needs p > (n + 1 + a^+)/2");
  }
  if (!(beta > 0.0)) throw Error(ErrorKind::out_of_range, "Moser bound needs beta > 0");
  const Region inner = Region::ball(r);
  double sup = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (inner.contains(g.center(i), g.dim())) sup = std::max(sup, std::abs(u[i]));
  }
  const Region unit = Region::ball(1.0);
  double ubeta = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point z = g.center(i);
    if (unit.contains(z, g.dim())) {
      ubeta += eval_weight(w, z[g.yaxis()]) * std::pow(std::abs(u[i]), beta);
    }
  }
  ubeta = std::pow(ubeta * g.cell_volume(), 1.0 / beta);
  return sup / (ubeta + weighted_lp(f, p, w, unit));
}

Exponents exponents(double a, int n, double t) {
  if (n < 1) throw Error(ErrorKind::out_of_range, "exponents need n >= 1");
  const double ap = std::max(a, 0.0);
  const double den2 = n + ap - 1.0;
  const double denp = n - 1.0 + t;
  if (den2 == 0.0) {
    throw Error(ErrorKind::out_of_range, "2* is undefined for n + a^+ = 1 (every p > 1 embeds)");
  }
  if (denp == 0.0) throw Error(ErrorKind::out_of_range, "p* is undefined for n - 1 + t = 0");
  return {n + 1.0 + ap, 2.0 * (n + 1.0 + ap) / den2, 2.0 * n / denp};
}

}  // namespace rholab
