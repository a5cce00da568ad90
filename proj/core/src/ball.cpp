#include "rholab/ball.hpp"

#include <algorithm>
#include <cmath>

#include "rholab/assembly.hpp"
#include "rholab/error.hpp"

namespace rholab {

namespace {

/// Fraction of the box [lo, hi] inside {|z| < r, y > 0}.
double box_fraction(const Point& lo, const Point& hi, int dim, double r, int sub) {
  double near = 0.0;
  double far = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double c = std::clamp(0.0, lo[d], hi[d]);
    near += c * c;
    far += std::max(lo[d] * lo[d], hi[d] * hi[d]);
  }
  const double r2 = r * r;
  if (near >= r2) return 0.0;
  if (far <= r2) return 1.0;
  int inside = 0;
  int total = 0;
  std::array<int, 3> k{};
  const int n3 = dim == 3 ? sub : 1;
  for (k[2] = 0; k[2] < n3; ++k[2]) {
    for (k[1] = 0; k[1] < sub; ++k[1]) {
      for (k[0] = 0; k[0] < sub; ++k[0]) {
        double s = 0.0;
        for (int d = 0; d < dim; ++d) {
          const double x = lo[d] + (k[d] + 0.5) / sub * (hi[d] - lo[d]);
          s += x * x;
        }
        inside += s < r2;
        ++total;
      }
    }
  }
  return static_cast<double>(inside) / total;
}

}  // namespace

BallFractions ball_fractions(const Grid& g, double r, int subsamples) {
  if (!g.half()) throw Error(ErrorKind::inconsistent_flags, "half-ball quadrature needs a half grid");
  const int dim = g.dim();
  const int yax = g.yaxis();
  BallFractions out;
  out.radius = r;
  out.face.assign(g.size() * static_cast<std::size_t>(dim), 0.0);
  out.sigma.assign(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ijk = g.coords(i);
    const Point c = g.center(i);
    for (int d = 0; d < dim; ++d) {
      if (ijk[d] + 1 >= g.cells(d)) continue;
      Point lo{}, hi{};
      for (int e = 0; e < dim; ++e) {
        lo[e] = c[e] - 0.5 * g.h(e);
        hi[e] = c[e] + 0.5 * g.h(e);
      }
      lo[d] = c[d];
      hi[d] = c[d] + g.h(d);
      out.face[i * dim + d] = box_fraction(lo, hi, dim, r, subsamples);
    }
    if (ijk[yax] == 0) {
      Point lo{}, hi{};
      for (int e = 0; e < dim; ++e) {
        lo[e] = c[e] - 0.5 * g.h(e);
        hi[e] = c[e] + 0.5 * g.h(e);
      }
      lo[yax] = 0.0;
      hi[yax] = c[yax];
      out.sigma[i] = box_fraction(lo, hi, dim, r, subsamples);
    }
  }
  return out;
}

std::vector<BoundaryNode> half_sphere_nodes(const Grid& g, double r, int nodes) {
  if (!g.half()) throw Error(ErrorKind::inconsistent_flags, "half-ball quadrature needs a half grid");
  if (nodes < 4) throw Error(ErrorKind::out_of_range, "need at least 4 angular nodes");
  const int dim = g.dim();
  const int yax = g.yaxis();
  const double ysign = g.symmetry() == Symmetry::odd ? -1.0 : 1.0;

  auto make_node = [&](const Point& z, double weight) {
    BoundaryNode node;
    node.z = z;
    node.weight = weight;
    std::array<int, 3> base{};
    std::array<double, 3> t{};
    for (int d = 0; d < dim; ++d) {
      // Index of the lower interpolation cell; the y axis may start at the
      // ghost row -1 below y = 0.
      const double pos = (z[d] - g.lo(d)) / g.h(d) - 0.5;
      int k = static_cast<int>(std::floor(pos));
      const int kmin = d == yax ? -1 : 0;
      k = std::clamp(k, kmin, g.cells(d) - 2);
      base[d] = k;
      t[d] = pos - k;
    }
    const int corners = 1 << dim;
    for (int m = 0; m < corners; ++m) {
      double w = 1.0;
      std::array<int, 3> ijk{};
      double sign = 1.0;
      for (int d = 0; d < dim; ++d) {
        const int bit = (m >> d) & 1;
        w *= bit ? t[d] : 1.0 - t[d];
        ijk[d] = base[d] + bit;
      }
      if (ijk[yax] < 0) {
        ijk[yax] = 0;
        sign = ysign;
      }
      node.stencil[static_cast<std::size_t>(node.count++)] = {g.index(ijk), sign * w};
    }
    return node;
  };

  std::vector<BoundaryNode> out;
  if (g.n() == 1) {
    out.reserve(static_cast<std::size_t>(nodes));
    const double dt = M_PI / nodes;
    for (int k = 0; k < nodes; ++k) {
      const double t = (k + 0.5) * dt;
      out.push_back(make_node({r * std::cos(t), r * std::sin(t), 0.0}, r * dt));
    }
  } else {
    const int polar = std::max(2, nodes / 2);
    const double dth = 0.5 * M_PI / polar;
    const double dph = 2.0 * M_PI / nodes;
    out.reserve(static_cast<std::size_t>(polar) * static_cast<std::size_t>(nodes));
    for (int a = 0; a < polar; ++a) {
      const double th = (a + 0.5) * dth;
      for (int b = 0; b < nodes; ++b) {
        const double ph = (b + 0.5) * dph;
        const Point z{r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph),
                      r * std::cos(th)};
        out.push_back(make_node(z, r * r * std::sin(th) * dth * dph));
      }
    }
  }
  return out;
}

double interpolate(const Field& u, const BoundaryNode& node) {
  double s = 0.0;
  for (int k = 0; k < node.count; ++k) {
    s += node.stencil[static_cast<std::size_t>(k)].second * u[node.stencil[static_cast<std::size_t>(k)].first];
  }
  return s;
}

double ball_energy(const Field& u, const WeightParams& w, const BallFractions& frac) {
  const Grid& g = *u.grid;
  const int dim = g.dim();
  const int yax = g.yaxis();
  ProblemSpec spec;
  spec.weight = w;
  const double vol = g.cell_volume();
  const double hy = g.h(yax);
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int d = 0; d < dim; ++d) {
      const double f = frac.face[i * dim + d];
      if (f == 0.0) continue;
      const double du = u[i + g.stride(d)] - u[i];
      e += f * face_transmissibility(spec, g, i, d, 1) * du * du * vol;
    }
    if (frac.sigma[i] > 0.0 && g.symmetry() == Symmetry::odd) {
      // Strip [0, hy/2] with u(x,0) = 0: rho d_y u = u0 / u_bar(hy/2).
      const double inv = inverse_weight_integral(w, 0.0, 0.5 * hy);
      if (std::isfinite(inv)) e += frac.sigma[i] * u[i] * u[i] / inv * (vol / hy);
    }
  }
  return e;
}

}  // namespace rholab
