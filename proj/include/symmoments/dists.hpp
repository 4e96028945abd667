#pragma once

#include <optional>
#include <string_view>

#include "symmoments/random.hpp"

namespace symmoments {

enum class Kind { rademacher, sym_exponential, gaussian, weibull_tail };

std::string_view to_string(Kind kind);
/// Accepts the wire names rademacher, symExponential, gaussian, weibullTail.
std::optional<Kind> parse_kind(std::string_view name);

/// A symmetric law with unit variance and log-concave tails.
///
/// The Weibull-tail family has P(|X| >= t) = exp(-(t/b)^α) with α >= 1; the
/// scale b is always the unit-variance one, so the only way to obtain such a
/// law is weibull_tail(α).
class Distribution {
 public:
  static Distribution rademacher() { return Distribution(Kind::rademacher, 0.0, 1.0); }
  static Distribution sym_exponential();
  static Distribution gaussian() { return Distribution(Kind::gaussian, 2.0, 1.0); }
  static Distribution weibull_tail(double alpha);

  Kind kind() const { return kind_; }
  /// Tail shape. 1 for the symmetric exponential, 0 for Rademacher.
  double alpha() const { return alpha_; }
  double scale() const { return scale_; }

  bool operator==(const Distribution&) const = default;

 private:
  Distribution(Kind kind, double alpha, double scale) : kind_(kind), alpha_(alpha), scale_(scale) {}

  Kind kind_;
  double alpha_;
  double scale_;
};

/// Weibull-tail law with scale b = Γ(1 + 2/α)^{-1/2}. Rejects α < 1.
Distribution normalize_to_unit_variance(double alpha);

/// P(|X| >= t), t >= 0.
double tail_probability(const Distribution& d, double t);

/// N(t) = -ln P(|X| >= t); +inf past the support.
double tail_exponent(const Distribution& d, double t);

/// N'(t) for t > 0 (the hazard rate of |X|); +inf past the support.
double tail_exponent_slope(const Distribution& d, double t);

/// E|X|^p in closed form, p > -1.
double abs_moment(const Distribution& d, double p);

/// ‖N(0,1)‖_p = (2^{p/2} Γ((p+1)/2) / √π)^{1/p}, p >= 1.
double gamma_p(double p);

/// E|aε + b|^p for a Rademacher ε.
double single_moment_rademacher(double a, double b, double p);

/// E|a𝓔 + b|^p for the unit-variance symmetric exponential 𝓔.
///
/// Orders p >= 2 descend through the exact identity
///   E|a𝓔+b|^p = |b|^p + p(p-1)/2 · a² · E|a𝓔+b|^{p-2}
/// until the residual order drops below 2; a fractional residual is then
/// integrated once against the density. Throws QuadratureError on
/// non-convergence.
double single_moment_exponential(double a, double b, double p);

/// E|a + bX|^p by direct quadrature against the law of X, for the
/// symmetric exponential and Weibull-tail laws (no recursion involved).
double single_moment_quadrature(const Distribution& d, double a, double b, double p);

/// One draw from d.
double sample(const Distribution& d, RandomStream& stream);

}  // namespace symmoments
