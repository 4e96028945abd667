#include "symmoments/dists.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "symmoments/coeffs.hpp"
#include "symmoments/errors.hpp"
#include "symmoments/quadrature.hpp"
#include "symmoments/special.hpp"

namespace symmoments {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": must be finite");
}

// Shape and scale of the Weibull-type tail exp(-(t/scale)^shape); the
// symmetric exponential is shape 1, scale 1/√2.
struct TailParams {
  double shape;
  double scale;
};

std::optional<TailParams> weibull_params(const Distribution& d) {
  switch (d.kind()) {
    case Kind::sym_exponential:
    case Kind::weibull_tail:
      return TailParams{d.alpha(), d.scale()};
    default:
      return std::nullopt;
  }
}

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::rademacher: return "rademacher";
    case Kind::sym_exponential: return "symExponential";
    case Kind::gaussian: return "gaussian";
    case Kind::weibull_tail: return "weibullTail";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(std::string_view name) {
  for (Kind k : {Kind::rademacher, Kind::sym_exponential, Kind::gaussian, Kind::weibull_tail}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

Distribution Distribution::sym_exponential() {
  return Distribution(Kind::sym_exponential, 1.0, 1.0 / kSqrt2);
}

Distribution Distribution::weibull_tail(double alpha) {
  if (std::isnan(alpha) || alpha < 1.0) {
    throw DomainError("weibullTail: alpha must be >= 1 (log-concave tails)");
  }
  require_finite(alpha, "weibullTail alpha");
  const double scale = std::exp(-0.5 * special::log_gamma(1.0 + 2.0 / alpha));
  return Distribution(Kind::weibull_tail, alpha, scale);
}

Distribution normalize_to_unit_variance(double alpha) { return Distribution::weibull_tail(alpha); }

double tail_probability(const Distribution& d, double t) {
  if (std::isnan(t) || t < 0.0) throw DomainError("tail_probability: t must be >= 0");
  switch (d.kind()) {
    case Kind::rademacher: return t <= 1.0 ? 1.0 : 0.0;
    case Kind::gaussian: return std::erfc(t / kSqrt2);
    default: return std::exp(-tail_exponent(d, t));
  }
}

double tail_exponent(const Distribution& d, double t) {
  if (std::isnan(t) || t < 0.0) throw DomainError("tail_exponent: t must be >= 0");
  switch (d.kind()) {
    case Kind::rademacher: return t <= 1.0 ? 0.0 : kInfinity;
    case Kind::gaussian: return -special::log_erfc(t / kSqrt2);
    default: {
      const auto w = *weibull_params(d);
      return std::pow(t / w.scale, w.shape);
    }
  }
}

double tail_exponent_slope(const Distribution& d, double t) {
  if (std::isnan(t) || t <= 0.0) throw DomainError("tail_exponent_slope: t must be > 0");
  switch (d.kind()) {
    case Kind::rademacher: return t < 1.0 ? 0.0 : kInfinity;
    case Kind::gaussian: {
      // 2φ(t) / erfc(t/√2), evaluated in log space.
      const double log_density = std::log(2.0) - 0.5 * t * t - 0.5 * std::log(2.0 * std::numbers::pi);
      return std::exp(log_density - special::log_erfc(t / kSqrt2));
    }
    default: {
      const auto w = *weibull_params(d);
      return w.shape / w.scale * std::pow(t / w.scale, w.shape - 1.0);
    }
  }
}

double abs_moment(const Distribution& d, double p) {
  if (std::isnan(p) || p <= -1.0) throw DomainError("abs_moment: p must be > -1");
  switch (d.kind()) {
    case Kind::rademacher: return 1.0;
    case Kind::gaussian:
      return std::exp(0.5 * p * std::log(2.0) + special::log_gamma(0.5 * (p + 1.0)) -
                      0.5 * std::log(std::numbers::pi));
    default: {
      // E|X|^p = b^p Γ(1 + p/α)
      const auto w = *weibull_params(d);
      return std::exp(p * std::log(w.scale) + special::log_gamma(1.0 + p / w.shape));
    }
  }
}

double gamma_p(double p) {
  if (std::isnan(p) || p < 1.0) throw DomainError("gamma_p: p must be >= 1");
  if (p == 2.0) return 1.0;
  const double log_moment = 0.5 * p * std::log(2.0) + special::log_gamma(0.5 * (p + 1.0)) -
                            0.5 * std::log(std::numbers::pi);
  return std::exp(log_moment / p);
}

double single_moment_rademacher(double a, double b, double p) {
  if (std::isnan(p) || p < 0.0) throw DomainError("single_moment_rademacher: p must be >= 0");
  return 0.5 * (std::pow(std::abs(a + b), p) + std::pow(std::abs(a - b), p));
}

double single_moment_quadrature(const Distribution& d, double a, double b, double p) {
  const auto w = weibull_params(d);
  if (!w) throw DomainError("single_moment_quadrature: needs symExponential or weibullTail");
  if (std::isnan(p) || p < 0.0) throw DomainError("single_moment_quadrature: p must be >= 0");
  require_finite(a, "a");
  require_finite(b, "b");
  if (p == 0.0) return 1.0;
  if (b == 0.0) return std::pow(std::abs(a), p);

  // E f(X) = ∫_0^1 (f(x(u)) + f(-x(u)))/2 du with u = P(|X| >= x), i.e.
  // x(u) = scale · (-ln u)^{1/shape}.
  const double shape = w->shape;
  const double scale = w->scale;
  auto integrand = [&](double u) {
    const double x = scale * std::pow(-std::log(u), 1.0 / shape);
    return 0.5 * (std::pow(std::abs(a + b * x), p) + std::pow(std::abs(a - b * x), p));
  };
  std::vector<double> breaks{0.0, 1.0};
  if (a != 0.0) {
    // |a ± bx| vanishes at x = |a/b|; split there.
    const double kink = std::exp(-std::pow(std::abs(a / b) / scale, shape));
    if (kink > 0.0 && kink < 1.0) breaks = {0.0, kink, 1.0};
  }
  quadrature::Options opts;
  opts.rel_tol = 1e-12;
  opts.max_intervals = 4000;
  return quadrature::integrate(integrand, breaks, opts).value;
}

double single_moment_exponential(double a, double b, double p) {
  if (std::isnan(p) || p < 0.0) throw DomainError("single_moment_exponential: p must be >= 0");
  require_finite(a, "a");
  require_finite(b, "b");
  if (a == 0.0) return std::pow(std::abs(b), p);
  if (b == 0.0) {
    // E|a𝓔|^p = |a|^p 2^{-p/2} Γ(p+1)
    return std::exp(p * std::log(std::abs(a)) - 0.5 * p * std::log(2.0) +
                    special::log_gamma(p + 1.0));
  }
  std::vector<double> orders;
  double order = p;
  while (order >= 2.0) {
    orders.push_back(order);
    order -= 2.0;
  }
  // Even integer p bottoms out at order 0, where E|·|^0 = 1.
  double moment = order == 0.0 ? 1.0
                               : single_moment_quadrature(Distribution::sym_exponential(), b, a, order);
  for (auto it = orders.rbegin(); it != orders.rend(); ++it) {
    const double q = *it;
    moment = std::pow(std::abs(b), q) + 0.5 * q * (q - 1.0) * a * a * moment;
  }
  return moment;
}

double sample(const Distribution& d, RandomStream& stream) {
  switch (d.kind()) {
    case Kind::rademacher: return stream.sign();
    case Kind::gaussian: return stream.normal();
    case Kind::sym_exponential: {
      // Laplace inverse CDF on |X|, independent sign.
      const double s = stream.sign();
      return s * (-std::log(stream.uniform())) / kSqrt2;
    }
    case Kind::weibull_tail: {
      const double s = stream.sign();
      return s * d.scale() * std::pow(-std::log(stream.uniform()), 1.0 / d.alpha());
    }
  }
  return 0.0;
}

}  // namespace symmoments
