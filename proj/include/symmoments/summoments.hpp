#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "symmoments/coeffs.hpp"
#include "symmoments/dists.hpp"

namespace symmoments {

enum class Method { enumeration, partial_fractions, haagerup, monte_carlo, recursion, closed_form };
enum class RigorKind { exact, tolerance, ci };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);
std::string_view to_string(RigorKind kind);

struct Rigor {
  RigorKind kind = RigorKind::exact;
  double tolerance = 0.0;   // relative, RigorKind::tolerance
  double halfwidth = 0.0;   // on the raw moment, RigorKind::ci
  double confidence = 0.0;  // RigorKind::ci

  static Rigor exact() { return {}; }
  static Rigor within(double relative) { return {RigorKind::tolerance, relative, 0.0, 0.0}; }
  static Rigor interval(double halfwidth, double confidence) {
    return {RigorKind::ci, 0.0, halfwidth, confidence};
  }
};

/// ‖S‖_p (value) together with E|S|^p (raw_moment).
struct MomentEstimate {
  double p = 0.0;
  double value = 0.0;
  double raw_moment = 0.0;
  Method method = Method::enumeration;
  Rigor rigor;

  /// Absolute uncertainty on raw_moment implied by the rigor class.
  double raw_uncertainty() const;
  /// Norm-scale interval implied by raw_uncertainty().
  double value_lower() const;
  double value_upper() const;
};

MomentEstimate make_estimate(double p, double raw_moment, Method method, Rigor rigor);

inline constexpr Eigen::Index kEnumerationCap = 26;
inline constexpr double kDegeneracyThreshold = 1e-6;
inline constexpr double kResidueGuard = 1e8;
inline constexpr double kCiConfidence = 0.997;
inline constexpr double kCiZ = 3.0;
inline constexpr double kHaagerupTolerance = 1e-6;

/// Exact E|Σ a_i ε_i|^p by enumerating sign patterns. Zero coefficients are
/// dropped first; more than kEnumerationCap nonzero entries throws
/// CapacityError.
MomentEstimate rademacher_sum_moment(const CoefficientVector& v, double p);

/// Σ a_i 𝓔_i written as the signed Laplace mixture Σ c_i · Laplace(|a_i|/√2).
struct LaplaceMixture {
  Eigen::VectorXd squares;  // a_i² of the nonzero coefficients
  Eigen::VectorXd weights;  // residues c_i = Π_{j≠i} a_i² / (a_i² - a_j²)
};

/// Throws DegeneracyError when the squared coefficients are closer than
/// `gap` (relative to the largest) or when Σ|c_i| exceeds kResidueGuard.
LaplaceMixture laplace_mixture(const CoefficientVector& v, double gap = kDegeneracyThreshold);

/// Exact E|Σ a_i 𝓔_i|^p, p > -1, from the Laplace mixture.
MomentEstimate laplace_sum_moment_exact(const CoefficientVector& v, double p,
                                        double gap = kDegeneracyThreshold);

/// Π cos(a_i t) (rademacher) or Π 1/(1 + a_i² t²/2) (symExponential).
double characteristic_function(const CoefficientVector& v, Kind kind, double t);

/// E|S|^p for 2 < p < 4 from the characteristic-function integral
///   E|S|^p = C_p ∫_0^∞ (φ_S(t) - 1 + t² E S²/2) t^{-p-1} dt,
///   C_p = -(2/π) sin(pπ/2) Γ(p+1).
MomentEstimate haagerup_moment(const CoefficientVector& v, Kind kind, double p);

/// Exact E S^p for an even integer p, by expanding the sum one coefficient
/// at a time with the binomial theorem (all terms are nonnegative).
MomentEstimate even_moment_exact(const CoefficientVector& v, const Distribution& d, int p);

/// Sample mean of |Σ a_i X_i|^p with a 3σ asymptotic-normal interval.
MomentEstimate monte_carlo_sum_moment(const CoefficientVector& v, const Distribution& d, double p,
                                      std::size_t samples, std::uint64_t seed);

/// Same draws shared across several orders.
std::vector<MomentEstimate> monte_carlo_sum_moments(const CoefficientVector& v,
                                                    const Distribution& d,
                                                    std::span<const double> ps,
                                                    std::size_t samples, std::uint64_t seed);

/// ‖Σ a_i g_i‖_p = γ_p ‖a‖_2.
MomentEstimate gaussian_sum_norm(const CoefficientVector& v, double p);

struct EngineOptions {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
};

/// Strongest non-statistical engine available for (v, d, p), if any.
std::optional<MomentEstimate> exact_sum_moment(const CoefficientVector& v, const Distribution& d,
                                               double p);

/// exact_sum_moment, falling back to Monte Carlo.
MomentEstimate best_sum_moment(const CoefficientVector& v, const Distribution& d, double p,
                               const EngineOptions& options);

}  // namespace symmoments
