#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "symmoments/coeffs.hpp"
#include "symmoments/dists.hpp"
#include "symmoments/summoments.hpp"

namespace symmoments {

enum class BoundSource { estrad, estexp, logconc, gauss_gap, khintchine, comp2 };

std::string_view to_string(BoundSource source);

/// Two-sided estimate lower <= ‖S‖_p <= upper.
struct BoundInterval {
  double lower = 0.0;
  double upper = 0.0;
  BoundSource source = BoundSource::estrad;
  double p = 0.0;

  double width() const { return upper - lower; }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Rademacher sums, p >= 2, with (head, tail) split of a* at ceil(p/2):
///   max{γ_p‖tail‖_2, Σhead/√2} <= ‖S‖_p <= γ_p‖tail‖_2 + Σhead.
BoundInterval rademacher_bounds(const CoefficientVector& v, double p);

/// Symmetric exponential sums, p >= 2:
///   max{γ_p‖a‖_2, p‖a‖_∞/(e√2)} <= ‖S‖_p <= γ_p‖a‖_2 + p‖a‖_∞.
BoundInterval exponential_bounds(const CoefficientVector& v, double p);

/// Entries with 1-based index i < p of a rearranged vector (at most n).
Eigen::VectorXd logconcave_head(const CoefficientVector& v, double p);

/// (Σ_{i >= ceil(p/2)} a_i²)^{1/2} of a rearranged vector.
double logconcave_tail_norm(const CoefficientVector& v, double p);

/// Log-concave tails, p >= 3. `head_norm` is ‖Σ_{i<p} a_i X_i‖_p for the
/// same law; the head (i < p) and the tail (i >= ceil(p/2)) overlap.
BoundInterval logconcave_bounds(const CoefficientVector& v, const Distribution& d, double p,
                                const MomentEstimate& head_norm);

/// Gaussian approximation, p >= 3:
///   |‖S‖_p - γ_p‖a‖_2| <= p‖a‖_∞, lower end clamped at 0.
BoundInterval gaussian_approx_gap(const CoefficientVector& v, double p);

/// Optimal-constant Khintchine range for Rademacher sums, p >= 2:
///   ‖a‖_2 <= ‖S‖_p <= γ_p‖a‖_2.
BoundInterval khintchine_bounds(const CoefficientVector& v, double p);

/// Outer links of the Rademacher/exponential comparison chain, p >= 2:
///   γ_p‖tail‖_2 <= ‖S‖_p <= γ_p‖a‖_2.
BoundInterval comparison_bounds(const CoefficientVector& v, double p);

/// M(x) = x² for |x| <= 1 and N(|x|) = -ln P(|X| >= |x|) beyond.
class OrliczFunction {
 public:
  explicit OrliczFunction(Distribution d) : dist_(d) {}

  double operator()(double x) const;
  /// N(x) for x >= 1.
  double tail(double x) const;
  /// N'(x) for x >= 1.
  double tail_slope(double x) const;
  /// False when N is infinite beyond 1 (Rademacher).
  bool has_tail() const { return dist_.kind() != Kind::rademacher; }
  /// Maximiser of b ↦ ratio·b - N(b) over b >= 1; nullopt when unbounded.
  std::optional<double> tail_argmax(double ratio) const;

  const Distribution& distribution() const { return dist_; }

 private:
  Distribution dist_;
};

/// Coordinate cap for gk_dual_norm's piece enumeration.
inline constexpr Eigen::Index kDualNormCap = 20;

/// sup{Σ a_i b_i : Σ M_i(b_i) <= p}.
///
/// Each coordinate sits either on its quadratic piece (|b| <= 1) or on its
/// tail piece (|b| >= 1); both pieces are convex, so every assignment is a
/// convex problem solved exactly by minimising the Lagrange dual
/// D(λ) = λp + Σ_i max_b (a_i b - λ M_i(b)) with bisection on D'. The
/// answer is the best assignment.
double gk_dual_norm(const CoefficientVector& v, std::span<const OrliczFunction> m, double p);

}  // namespace symmoments
