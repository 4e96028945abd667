#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "symmoments/bounds.hpp"
#include "symmoments/coeffs.hpp"
#include "symmoments/dists.hpp"
#include "symmoments/random.hpp"
#include "symmoments/summoments.hpp"

namespace symmoments {

/// Slack for links computed with exact engines, relative to the larger side.
inline constexpr double kNumericalSlack = 1e-9;
/// Absolute slack for the cosine-product inequality.
inline constexpr double kCosProductSlack = 1e-12;

enum class Outcome { pass, ci_resolved, inconclusive, violation };

/// Tally for one inequality.
///
/// Margins are signed: (larger side - smaller side) / max(|sides|) for the
/// moment inequalities, absolute lhs - rhs for the cosine-product inequality.
/// A violation is a margin below -(numerical slack + statistical slack);
/// a statistical link whose interval straddles the boundary is inconclusive
/// and never counted as a pass.
struct VerificationReport {
  std::string check;
  std::size_t cases = 0;
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::size_t ci_resolved = 0;
  std::size_t inconclusive = 0;
  std::uint64_t seed = 0;
  // Coordinates of the worst case seen.
  std::vector<double> witness;
  double witness_p = std::numeric_limits<double>::quiet_NaN();
  double witness_t = std::numeric_limits<double>::quiet_NaN();

  bool passed() const { return violations == 0; }
  /// Fold another tally in. Worst-margin ties keep the left witness.
  void merge(const VerificationReport& other);
};

/// One side of an inequality with its uncertainty, in the units compared.
struct Quantity {
  double value = 0.0;
  double tolerance = 0.0;  // absolute numerical uncertainty
  double halfwidth = 0.0;  // absolute statistical (CI) uncertainty

  static Quantity exact(double x) { return {x, 0.0, 0.0}; }
  /// Raw moment of an estimate.
  static Quantity raw(const MomentEstimate& e);
  /// Norm of an estimate.
  static Quantity norm(const MomentEstimate& e);
};

/// Classifies larger >= smaller under the slack rules and returns the
/// relative margin through `margin`.
Outcome classify(const Quantity& larger, const Quantity& smaller, double& margin);

// Inequality checks --------------------------------------------------------

/// Π cos(a_i t) + a_1²t²/2 >= Π_{i>=2} 1/(1 + a_i²t²/2) at every t.
/// Requires |a_1| >= |a_2| >= ... (DomainError otherwise).
VerificationReport check_cos_product(const CoefficientVector& v, std::span<const double> t_grid);

/// The four terms of the Rademacher/exponential comparison chain.
struct ChainValues {
  MomentEstimate gaussian_all;   // γ_p^p (Σ a_i²)^{p/2}
  MomentEstimate rademacher;     // E|Σ a_i ε_i|^p
  MomentEstimate exponential_tail;  // E|Σ_{i>=ceil(p/2)} a*_i 𝓔_i|^p
  MomentEstimate gaussian_tail;  // γ_p^p (Σ_{i>=ceil(p/2)} a*_i²)^{p/2}
};

ChainValues comparison_chain(const CoefficientVector& v, double p, const EngineOptions& options);

VerificationReport check_comparison_chain(const CoefficientVector& v, double p, std::uint64_t seed,
                                          std::size_t samples = 1'000'000);

/// ‖Σa_iε_i‖_p <= ‖Σa_iX_i‖_p <= ‖Σa_i𝓔_i‖_p with X Weibull-tail(α); the
/// middle term by Monte Carlo (closed form when n = 1).
VerificationReport check_extremality(const CoefficientVector& v, double alpha, double p,
                                     std::uint64_t seed, std::size_t samples = 1'000'000);

/// Same, several orders sharing one Monte Carlo run.
VerificationReport check_extremality(const CoefficientVector& v, double alpha,
                                     std::span<const double> ps, std::uint64_t seed,
                                     std::size_t samples = 1'000'000);

/// Every bound interval applicable to (d, p) contains the reference norm; for
/// p >= 3 also |‖S‖_p - γ_p‖a‖_2| <= p‖a‖_∞ in signed form.
VerificationReport check_bounds_sandwich(const CoefficientVector& v, const Distribution& d,
                                         double p, std::uint64_t seed,
                                         std::size_t samples = 1'000'000);

/// E|Σ_{i=1}^n a_iε_i|^p >= E|Σ_{i=2}^n a_i𝓔_i|^p for 2 <= p <= 4 on a
/// rearranged vector.
VerificationReport check_p24_comparison(const CoefficientVector& v, double p, std::uint64_t seed,
                                        std::size_t samples = 1'000'000);

/// Exact recursion E|a𝓔+b|^p = |b|^p + p(p-1)/2 a² E|a𝓔+b|^{p-2} (both sides
/// by direct quadrature, relative tolerance 1e-8) and the Rademacher lower
/// bound E|aε+b|^p >= |b|^p + p(p-1)/2 a²|b|^{p-2} for p >= 3, over random
/// (a, b, p).
VerificationReport check_recursion_identity(std::uint64_t seed, std::size_t cases);
VerificationReport check_rademacher_recursion_bound(std::uint64_t seed, std::size_t cases);

/// Ratio ‖Σ_{i<p} a_iX_i‖_p / gk_dual_norm kept inside [band_low, band_high].
struct RatioReport {
  VerificationReport report;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
};
RatioReport check_dual_norm_ratio(const CoefficientVector& v, const Distribution& d, double p,
                                  std::uint64_t seed, std::size_t samples,
                                  double band_low = 1.0 / 20.0, double band_high = 20.0);

// Randomised inputs ----------------------------------------------------------

/// Mixture of the three regimes the bounds distinguish: uniform [-1,1]^n,
/// geometric decay ±r^i, and one spike over small noise.
CoefficientVector sample_coefficients(RandomStream& stream, Eigen::Index n);

// Counterexample search ------------------------------------------------------

struct SearchConfig {
  std::string check = "comp2";
  Eigen::Index n_min = 1;
  Eigen::Index n_max = 6;
  std::vector<double> p_grid = {2.5, 3.0, 4.0, 6.0};
  std::size_t iterations = 10'000;
  std::uint64_t seed = 0;
};

/// Check ids accepted by search_counterexamples.
std::span<const std::string> search_checks();

/// Random restarts plus coordinate hill-climbing toward the smallest margin,
/// exact engines only. Every evaluation counts as one case.
VerificationReport search_counterexamples(const SearchConfig& config);

// Suite -----------------------------------------------------------------------

struct SuiteConfig {
  std::uint64_t seed = 42;
  std::size_t samples = 200'000;
  /// Random instances per randomized check.
  std::size_t cases = 50;
  std::size_t search_iterations = 2'000;
};

/// Check ids run by run_suite, in output order.
std::span<const std::string> suite_checks();

/// Runs the named checks (all when `checks` is empty) and returns one report
/// per check, in suite order.
std::vector<VerificationReport> run_suite(const SuiteConfig& config,
                                          std::span<const std::string> checks = {});

/// Default t grid for the cosine-product check: [0, 100] at step 1e-3.
std::vector<double> default_t_grid();

inline constexpr double kDefaultPGrid[] = {2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 8.0};

}  // namespace symmoments
