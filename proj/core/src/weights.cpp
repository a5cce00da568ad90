#include "rholab/weights.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rholab/error.hpp"

namespace rholab {

namespace {

constexpr double kQuadTol = 1e-12;
constexpr unsigned kMaxDepth = 20;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class F>
double gauss_kronrod(F&& f, double lo, double hi) {
  if (hi <= lo) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, kMaxDepth,
                                                                       kQuadTol);
}

// int_{t0}^{t1} (1 + t^2)^{alpha/2} dt for 0 <= t0 <= t1. Beyond t = 1 the
// integrand is close to a power law, so integrate in s = log t there.
double scaled_power_integral(double alpha, double t0, double t1) {
  if (alpha == 0.0) return t1 - t0;
  double total = 0.0;
  if (t0 < 1.0) {
    total += gauss_kronrod([alpha](double t) { return std::pow(1.0 + t * t, 0.5 * alpha); }, t0,
                           std::min(t1, 1.0));
  }
  if (t1 > 1.0) {
    const double s0 = std::log(std::max(t0, 1.0));
    const double s1 = std::log(t1);
    total += gauss_kronrod(
        [alpha](double s) {
          const double t = std::exp(s);
          return std::pow(1.0 + t * t, 0.5 * alpha) * t;
        },
        s0, s1);
  }
  return total;
}

// int_{y0}^{y1} (eps^2 + s^2)^{alpha/2} ds for 0 <= y0 <= y1.
double power_integral(double alpha, double eps, double y0, double y1) {
  if (y1 <= y0) return 0.0;
  if (eps == 0.0) {
    if (y0 == 0.0 && alpha <= -1.0) return kInf;
    if (alpha == -1.0) return std::log(y1 / y0);
    return (std::pow(y1, alpha + 1.0) - std::pow(y0, alpha + 1.0)) / (alpha + 1.0);
  }
  return std::pow(eps, 1.0 + alpha) * scaled_power_integral(alpha, y0 / eps, y1 / eps);
}

double signed_power_integral(double alpha, double eps, double y0, double y1) {
  if (y0 >= 0.0) return power_integral(alpha, eps, y0, y1);
  if (y1 <= 0.0) return power_integral(alpha, eps, -y1, -y0);
  return power_integral(alpha, eps, 0.0, -y0) + power_integral(alpha, eps, 0.0, y1);
}

// Odd antiderivative of |s|^{-a}, valid away from 0 for every a.
double singular_antiderivative(double a, double y) {
  const double s = y > 0.0 ? 1.0 : -1.0;
  if (a == 1.0) return s * std::log(std::abs(y));
  return s * std::pow(std::abs(y), 1.0 - a) / (1.0 - a);
}

}  // namespace

void validate(const WeightParams& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.eps) || p.eps < 0.0) {
    std::ostringstream os;
    os << "weight parameters need finite a and eps >= 0 (a=" << p.a << ", eps=" << p.eps << ")";
    throw Error(ErrorKind::out_of_range, os.str());
  }
}

double normalization_factor(const WeightParams& p) {
  if (!p.normalized || p.eps == 0.0 || p.a == 0.0) return 1.0;
  const double scale = std::pow(p.eps, -p.a);
  return p.a > 0.0 ? std::min(scale, 1.0) : std::max(scale, 1.0);
}

double eval_weight(const WeightParams& p, double y) {
  validate(p);
  if (p.a == 0.0) return 1.0;
  if (p.eps == 0.0) {
    if (y == 0.0 && p.a < 0.0) {
      throw Error(ErrorKind::singular_evaluation, "|y|^a at y = 0 with a < 0");
    }
    return std::pow(std::abs(y), p.a);
  }
  return std::pow(p.eps * p.eps + y * y, 0.5 * p.a) * normalization_factor(p);
}

double weight_integral(const WeightParams& p, double y0, double y1) {
  validate(p);
  if (y1 < y0) std::swap(y0, y1);
  return normalization_factor(p) * signed_power_integral(p.a, p.eps, y0, y1);
}

double u_bar(const WeightParams& p, double y) {
  validate(p);
  if (y < 0.0) throw Error(ErrorKind::out_of_range, "u_bar is defined for y >= 0");
  if (p.eps == 0.0) {
    if (p.a >= 1.0) {
      throw Error(ErrorKind::divergent_integral, "int_0^y |s|^{-a} ds diverges for a >= 1");
    }
    return std::pow(y, 1.0 - p.a) / (1.0 - p.a);
  }
  return power_integral(-p.a, p.eps, 0.0, y) / normalization_factor(p);
}

double inverse_weight_integral(const WeightParams& p, double y0, double y1) {
  validate(p);
  if (y1 < y0) std::swap(y0, y1);
  if (p.eps == 0.0) {
    if (p.a >= 1.0) {
      if (y0 <= 0.0 && y1 >= 0.0) return kInf;
      return singular_antiderivative(p.a, y1) - singular_antiderivative(p.a, y0);
    }
  }
  auto odd_ubar = [&p](double y) { return y >= 0.0 ? u_bar(p, y) : -u_bar(p, -y); };
  return odd_ubar(y1) - odd_ubar(y0);
}

double weight_cell_average(const WeightParams& p, double y0, double y1) {
  if (y1 == y0) return eval_weight(p, y0);
  return weight_integral(p, y0, y1) / std::abs(y1 - y0);
}

double mu1(double a, double y) {
  if (!(a < 1.0)) throw Error(ErrorKind::out_of_range, "mu_1 needs a < 1");
  if (!(y > 0.0)) throw Error(ErrorKind::out_of_range, "mu_1 needs y > 0");
  const WeightParams p{a, 1.0, false};
  return y / (eval_weight(p, y) * u_bar(p, y));
}

OdeValues ode_example(const WeightParams& p, double y) {
  validate(p);
  if (!(p.eps > 0.0)) throw Error(ErrorKind::out_of_range, "ode_example needs eps > 0");
  if (!(p.a > -1.0)) throw Error(ErrorKind::out_of_range, "ode_example needs a > -1");
  if (y < 0.0) throw Error(ErrorKind::out_of_range, "ode_example needs y >= 0");
  const double a = p.a;
  const double eps = p.eps;
  auto raw = [a, eps](double s) { return std::pow(eps * eps + s * s, 0.5 * a); };
  auto mass = [a, eps](double s) { return power_integral(a, eps, 0.0, s); };

  const double m = mass(y);
  OdeValues out{};
  out.du = -m / raw(y);
  out.d2u = a * y * m / std::pow(eps * eps + y * y, 0.5 * a + 1.0) - 1.0;
  out.u = 1.0 - gauss_kronrod([&](double s) { return mass(s) / raw(s); }, 0.0, y);
  return out;
}

SolutionId parse_solution_id(std::string_view text) {
  auto trimmed = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trimmed(text);
  if (text == "odd_singular") return {SolutionKind::odd_singular, 0.0};
  if (text == "jump") return {SolutionKind::jump, 0.0};
  if (text == "neumann_special") return {SolutionKind::neumann_special, 0.0};
  if (text == "u_bar") return {SolutionKind::u_bar, 0.0};
  if (text == "constant") return {SolutionKind::constant, 0.0};
  if (text.starts_with("cutoff")) {
    auto rest = trimmed(text.substr(6));
    if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') {
      const std::string inner(trimmed(rest.substr(1, rest.size() - 2)));
      char* end = nullptr;
      const double delta = std::strtod(inner.c_str(), &end);
      if (!inner.empty() && end == inner.c_str() + inner.size()) {
        return {SolutionKind::cutoff, delta};
      }
    }
  }
  throw Error(ErrorKind::unknown_name, "unknown solution '" + std::string(text) + "'");
}

std::string to_string(const SolutionId& id) {
  switch (id.kind) {
    case SolutionKind::odd_singular: return "odd_singular";
    case SolutionKind::jump: return "jump";
    case SolutionKind::neumann_special: return "neumann_special";
    case SolutionKind::u_bar: return "u_bar";
    case SolutionKind::constant: return "constant";
    case SolutionKind::cutoff: {
      std::ostringstream os;
      os << "cutoff(" << id.delta << ")";
      return os.str();
    }
  }
  return "unknown";
}

double cutoff_profile(double delta, double y) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::out_of_range, "cutoff needs 0 < delta < 1");
  }
  const double t = std::abs(y);
  if (t <= delta * delta) return 0.0;
  if (t >= delta) return 1.0;
  return std::log(t / (delta * delta)) / std::log(1.0 / delta);
}

double cutoff_energy(double a, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::out_of_range, "cutoff needs 0 < delta < 1");
  }
  const double L = std::log(1.0 / delta);
  // f' = 1/(y L) on [delta^2, delta], zero elsewhere.
  if (a == 1.0) return 1.0 / L;
  return (std::pow(delta, a - 1.0) - std::pow(delta, 2.0 * (a - 1.0))) / ((a - 1.0) * L * L);
}

double catalog(const SolutionId& id, const WeightParams& p, std::span<const double> z) {
  validate(p);
  if (z.empty()) throw Error(ErrorKind::out_of_range, "catalog needs a point");
  const double y = z.back();
  switch (id.kind) {
    case SolutionKind::constant:
      return 1.0;
    case SolutionKind::jump:
      return y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
    case SolutionKind::cutoff:
      return cutoff_profile(id.delta, y);
    case SolutionKind::odd_singular:
      if (y == 0.0) {
        if (p.a < 1.0) return 0.0;
        throw Error(ErrorKind::singular_evaluation, "|y|^{-a} y at y = 0 with a >= 1");
      }
      return std::pow(std::abs(y), -p.a) * y;
    case SolutionKind::neumann_special:
      if (!(p.a > -1.0 && p.a < 1.0)) {
        throw Error(ErrorKind::out_of_range, "neumann_special needs a in (-1, 1)");
      }
      return u_bar(p, std::abs(y));
    case SolutionKind::u_bar:
      return y >= 0.0 ? u_bar(p, y) : -u_bar(p, -y);
  }
  throw Error(ErrorKind::unknown_name, "unhandled solution kind");
}

}  // namespace rholab
