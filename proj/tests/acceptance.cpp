// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "gk_oracle.hpp"
#include "symmoments/bounds.hpp"
#include "symmoments/errors.hpp"
#include "symmoments/summoments.hpp"
#include "symmoments/verify.hpp"

using namespace symmoments;
using std::numbers::sqrt2;

namespace {

constexpr std::uint64_t kSeed = 42;

// Pinned tolerances and budgets.
constexpr double kAgreementTol = 1e-5;
constexpr std::size_t kAgreementSamples = 1'000'000;
constexpr double kAgreementSeconds = 300;
constexpr double kSpotTol = 1e-10;
constexpr double kCosSeconds = 60;
constexpr double kRecursionTol = 1e-8;
constexpr double kEqualityTol = 1e-12;
constexpr double kChainTol = 1e-3;
constexpr double kChainSeconds = 600;
constexpr std::size_t kExtremalitySamples = 1'000'000;
constexpr std::size_t kSandwichSamples = 200'000;
constexpr double kTightTol = 1e-12;
constexpr std::size_t kGapSamples = 1'000'000;
constexpr double kGridTol = 1e-4;
constexpr double kBandLow = 1.0 / 20.0, kBandHigh = 20.0;
constexpr std::size_t kSearchIterations = 10'000;

using Clock = std::chrono::steady_clock;

int failures = 0;

void line(int id, const std::string& name, bool pass, const std::string& detail, Clock::time_point start) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("[%s] AC%02d %s: %s (%.1f s)\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

CoefficientVector random_vector(RandomStream& s, Eigen::Index n_max) {
  const Eigen::Index n = 1 + static_cast<Eigen::Index>(s.bits() % static_cast<std::uint64_t>(n_max));
  return sample_coefficients(s, n);
}

// 1 -----------------------------------------------------------------------------
void engine_agreement() {
  const auto start = Clock::now();
  RandomStream s(kSeed, 1);
  const double ps[] = {2.5, 3.0, 3.5};
  double worst = 0.0, worst_z = 0.0;
  int outside = 0, compared = 0, redrawn = 0;
  for (int count = 0; count < 500;) {
    const CoefficientVector v = random_vector(s, 8);
    try {
      laplace_mixture(v);
    } catch (const DegeneracyError&) {
      ++redrawn;
      continue;
    }
    const auto mc = monte_carlo_sum_moments(v, Distribution::sym_exponential(), ps, kAgreementSamples,
                                            mix_seed(kSeed, 1, static_cast<std::uint64_t>(count)));
    for (std::size_t k = 0; k < 3; ++k) {
      const double exact = laplace_sum_moment_exact(v, ps[k]).raw_moment;
      const double h = haagerup_moment(v, Kind::sym_exponential, ps[k]).raw_moment;
      worst = std::max(worst, rel(exact, h));
      ++compared;
      const double err = std::abs(mc[k].raw_moment - exact);
      worst_z = std::max(worst_z, 3.0 * err / mc[k].rigor.halfwidth);
      if (err > mc[k].rigor.halfwidth) ++outside;
    }
    ++count;
  }
  const double secs = seconds_since(start);
  line(1, "engine agreement", worst <= kAgreementTol && outside == 0 && secs <= kAgreementSeconds,
       fmt("500 vectors x 3 orders; max |partialFractions - haagerup| rel %.2e (tol %.0e); "
           "Monte Carlo outside 3-sigma CI in %d of %d comparisons (nominal expectation %.1f, largest |z| %.2f); "
           "%d degenerate draws redrawn",
           worst, kAgreementTol, outside, compared, compared * (1 - kCiConfidence), worst_z, redrawn),
       start);
}

// 2 -----------------------------------------------------------------------------
void spot_values() {
  const auto start = Clock::now();
  const auto ex = Distribution::sym_exponential();
  std::vector<std::pair<std::string, std::pair<double, double>>> rows = {
      {"E|e1+e2+e3|^4", {rademacher_sum_moment({1, 1, 1}, 4).raw_moment, 21.0}},
      {"E|E1+E2|^4", {exact_sum_moment({1, 1}, ex, 4)->raw_moment, 18.0}},
      {"E|E1+E2|^3", {exact_sum_moment({1, 1}, ex, 3)->raw_moment, 15 / (2 * sqrt2)}},
      {"E|2E1+E2|^2", {laplace_sum_moment_exact({2, 1}, 2).raw_moment, 5.0}},
  };
  const std::array<std::pair<int, double>, 4> factorials = {{{2, 2.0}, {3, 6.0}, {4, 24.0}, {6, 720.0}}};
  for (auto [p, fact] : factorials) {
    const double expected = std::pow(2.0, -p / 2.0) * fact;
    rows.push_back({fmt("E|E|^%d (recursion)", p), {single_moment_exponential(1, 0, p), expected}});
    rows.push_back({fmt("E|E|^%d (partial fractions)", p), {laplace_sum_moment_exact({1}, p).raw_moment, expected}});
  }
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, vals] : rows) {
    const double r = rel(vals.first, vals.second);
    if (r >= worst) {
      worst = r;
      worst_name = name;
    }
  }
  line(2, "closed-form spot values", worst <= kSpotTol,
       fmt("%zu values; max relative error %.2e at %s (tol %.0e)", rows.size(), worst, worst_name.c_str(), kSpotTol),
       start);
}

// 3 -----------------------------------------------------------------------------
void cosine_product() {
  const auto start = Clock::now();
  SuiteConfig c;
  c.seed = kSeed;
  const std::string checks[] = {"cos_product"};
  const auto r = run_suite(c, checks).front();
  const double secs = seconds_since(start);
  line(3, "cosine product inequality", r.passed() && secs <= kCosSeconds,
       fmt("%zu (v, t) evaluations (t grid [0,100] step 1e-3 on %zu vectors plus 10^4 random points); "
           "%zu violations; worst margin %.3g (slack %.0e)",
           r.cases, c.cases + 10, r.violations, r.worst_margin, kCosProductSlack),
       start);
}

// 4 -----------------------------------------------------------------------------
void recursions() {
  const auto start = Clock::now();
  const auto rec1 = check_recursion_identity(kSeed, 200);
  const auto rec2 = check_rademacher_recursion_bound(kSeed, 200);
  const double equality_gap = std::abs(single_moment_rademacher(1, 1, 3) - (1.0 + 3.0));
  const double rec1_err = kRecursionTol - rec1.worst_margin;
  line(4, "single-variable recursions",
       rec1.passed() && rec2.passed() && rec1_err <= kRecursionTol && equality_gap <= kEqualityTol,
       fmt("identity: 200 cases, max relative error %.2e (tol %.0e); lower bound: 200 cases, %zu violations, "
           "worst margin %.2e; equality at (1,1,3) off by %.1e (tol %.0e)",
           rec1_err, kRecursionTol, rec2.violations, rec2.worst_margin, equality_gap, kEqualityTol),
       start);
}

// 5 -----------------------------------------------------------------------------
void comparison_chain_check() {
  const auto start = Clock::now();
  RandomStream s(kSeed, 5);
  VerificationReport total;
  const double ps[] = {2.0, 2.5, 3.0, 4.0, 6.0};
  for (int i = 0; i < 200; ++i) {
    const CoefficientVector v = random_vector(s, 8);
    for (std::size_t k = 0; k < 5; ++k) {
      total.merge(check_comparison_chain(v, ps[k], mix_seed(kSeed, 5, i * 5 + k)));
    }
  }
  const auto chain = comparison_chain({1, 1, 1}, 3, {kSandwichSamples, kSeed});
  const double got[] = {chain.gaussian_all.value, chain.rademacher.value, chain.exponential_tail.value,
                        chain.gaussian_tail.value};
  const double want[] = {2.024, 1.9574, 1.7437, 1.6528};
  double dev = 0.0;
  for (int k = 0; k < 4; ++k) dev = std::max(dev, std::abs(got[k] - want[k]));
  const double secs = seconds_since(start);
  line(5, "comparison chain", total.passed() && dev <= kChainTol && secs <= kChainSeconds,
       fmt("%zu chains, %zu violations, %zu inconclusive, worst margin %.2e; (1,1,1) p=3 chain "
           "%.4f >= %.4f >= %.4f >= %.4f, max deviation %.1e (tol %.0e)",
           total.cases, total.violations, total.inconclusive, total.worst_margin, got[0], got[1], got[2], got[3], dev,
           kChainTol),
       start);
}

// 6 -----------------------------------------------------------------------------
void p24_comparison() {
  const auto start = Clock::now();
  RandomStream s(kSeed, 6);
  VerificationReport total;
  const double ps[] = {2.0, 2.5, 3.0, 3.5, 4.0};
  for (int i = 0; i < 100; ++i) {
    const CoefficientVector v = rearrange(random_vector(s, 8));
    for (std::size_t k = 0; k < 5; ++k) total.merge(check_p24_comparison(v, ps[k], mix_seed(kSeed, 6, i * 5 + k)));
  }
  line(6, "comparison for 2 <= p <= 4", total.passed(),
       fmt("%zu cases, %zu violations, %zu inconclusive, worst margin %.3g", total.cases, total.violations,
           total.inconclusive, total.worst_margin),
       start);
}

// 7 -----------------------------------------------------------------------------
void extremality() {
  const auto start = Clock::now();
  const double alphas[] = {1.0, 1.5, 2.0, 3.0};
  const double ps[] = {3.0, 4.0, 6.0};
  std::string per_alpha;
  bool pass = true;
  int equal_within = 0, equal_total = 0;
  double worst_z = 0.0;
  for (double alpha : alphas) {
    RandomStream s(kSeed, 7);
    VerificationReport total;
    for (int i = 0; i < 50; ++i) {
      const CoefficientVector v = random_vector(s, 8);
      const std::uint64_t seed = mix_seed(kSeed, 7, static_cast<std::uint64_t>(i));
      total.merge(check_extremality(v, alpha, ps, mix_seed(seed, static_cast<std::uint64_t>(alpha * 10)),
                                    kExtremalitySamples));
      if (alpha == 1.0) {
        // The middle law is the exponential law: the exponential end must
        // lie inside the middle term's interval.
        const auto mid = monte_carlo_sum_moments(v, Distribution::weibull_tail(1.0), ps, kExtremalitySamples,
                                                 mix_seed(seed, 1000));
        for (std::size_t k = 0; k < 3; ++k) {
          const auto ex = best_sum_moment(v, Distribution::sym_exponential(), ps[k], {kExtremalitySamples, seed});
          const double slack = mid[k].rigor.halfwidth + ex.raw_uncertainty();
          ++equal_total;
          const double err = std::abs(mid[k].raw_moment - ex.raw_moment);
          worst_z = std::max(worst_z, 3.0 * err / slack);
          if (err <= slack) ++equal_within;
        }
      }
    }
    pass = pass && total.passed();
    per_alpha += fmt("alpha=%g: %zu cases, %zu violations, %zu inconclusive; ", alpha, total.cases, total.violations,
                     total.inconclusive);
  }
  pass = pass && equal_within == equal_total;
  line(7, "extremality of Bernoulli and exponential laws", pass,
       per_alpha + fmt("alpha=1 equality within CI in %d of %d (nominal expectation %.1f outside, largest |z| %.2f)",
                       equal_within, equal_total, equal_total * (1 - kCiConfidence), worst_z),
       start);
}

// 8 -----------------------------------------------------------------------------
void sandwiches() {
  const auto start = Clock::now();
  const double ps[] = {2.0, 2.5, 3.0, 4.0, 6.0};
  const double ps3[] = {3.0, 4.0, 6.0};
  const Distribution laws[] = {Distribution::rademacher(), Distribution::sym_exponential(), Distribution::gaussian(),
                               Distribution::weibull_tail(1.5), Distribution::weibull_tail(2.0),
                               Distribution::weibull_tail(3.0)};
  VerificationReport rad, ex, lc;
  double tight = 0.0;
  RandomStream s(kSeed, 8);
  for (int i = 0; i < 200; ++i) {
    const CoefficientVector v = random_vector(s, 8);
    const std::uint64_t seed = mix_seed(kSeed, 8, static_cast<std::uint64_t>(i));
    rad.merge(check_bounds_sandwich(v, Distribution::rademacher(), ps[i % 5], seed, kSandwichSamples));
    ex.merge(check_bounds_sandwich(v, Distribution::sym_exponential(), ps[(i / 5) % 5], seed, kSandwichSamples));
    lc.merge(check_bounds_sandwich(v, laws[i % 6], ps3[(i / 6) % 3], seed, kSandwichSamples));
    const BoundInterval b = rademacher_bounds(v, 2.0);
    const double l2 = norm(v, 2.0);
    tight = std::max({tight, b.width() / l2, rel(rademacher_sum_moment(v, 2.0).value, l2), rel(b.upper, l2)});
  }
  line(8, "bound sandwiches", rad.passed() && ex.passed() && lc.passed() && tight <= kTightTol,
       fmt("Rademacher: %zu cases/%zu violations; exponential: %zu/%zu; log-concave: %zu/%zu (%zu inconclusive); "
           "p=2 width and norm deviation %.1e (tol %.0e)",
           rad.cases, rad.violations, ex.cases, ex.violations, lc.cases, lc.violations, lc.inconclusive, tight,
           kTightTol),
       start);
}

// 9 -----------------------------------------------------------------------------
void gaussian_gap() {
  const auto start = Clock::now();
  bool pass = true;
  std::string detail;
  for (double alpha : {1.0, 2.0}) {
    const Distribution d = alpha == 1.0 ? Distribution::sym_exponential() : Distribution::weibull_tail(alpha);
    for (double p : {3.0, 4.0}) {
      double gaps[2];
      int idx = 0;
      for (Eigen::Index n : {25, 100}) {
        const CoefficientVector v(Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))));
        const auto est = best_sum_moment(v, d, p, {kGapSamples, mix_seed(kSeed, 9, static_cast<std::uint64_t>(n))});
        Quantity gap = Quantity::norm(est);
        gap.value = std::abs(est.value - gamma_p(p));
        double margin = 0.0;
        const Outcome o = classify(Quantity::exact(p / std::sqrt(static_cast<double>(n))), gap, margin);
        pass = pass && o != Outcome::violation;
        gaps[idx++] = gap.value;
      }
      detail += fmt("alpha=%g p=%g gap %.4f (n=25) -> %.4f (n=100), bound %.2f -> %.2f; ", alpha, p, gaps[0], gaps[1],
                    p / 5.0, p / 10.0);
    }
  }
  line(9, "Gaussian approximation gap", pass, detail + "trend reported only", start);
}

// 10 ----------------------------------------------------------------------------
void dual_norm() {
  const auto start = Clock::now();
  RandomStream s(kSeed, 10);
  const Distribution laws[] = {Distribution::rademacher(), Distribution::sym_exponential(), Distribution::gaussian(),
                               Distribution::weibull_tail(1.5), Distribution::weibull_tail(3.0)};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index n = 1 + i % 3;
    Eigen::VectorXd a(n);
    for (Eigen::Index j = 0; j < n; ++j) a[j] = (0.05 + 2.0 * s.uniform()) * s.sign();
    const CoefficientVector v(a);
    const double p = 1.0 + 5.0 * s.uniform();
    const std::vector<OrliczFunction> m(static_cast<std::size_t>(n), OrliczFunction(laws[i % 5]));
    worst = std::max(worst, rel(gk_dual_norm(v, m, p), oracle::grid_dual_norm({v.begin(), v.end()}, m, p)));
  }
  double lo = kInfinity, hi = 0.0;
  std::size_t cases = 0;
  const Distribution corpus_laws[] = {Distribution::rademacher(), Distribution::sym_exponential(),
                                      Distribution::gaussian(), Distribution::weibull_tail(2.0)};
  RandomStream c(kSeed, 11);
  for (int i = 0; i < 60; ++i) {
    const CoefficientVector v = random_vector(c, 8);
    for (const auto& d : corpus_laws) {
      for (double p : {3.0, 4.0, 6.0}) {
        const auto r = check_dual_norm_ratio(v, d, p, mix_seed(kSeed, 10, cases), 100'000, kBandLow, kBandHigh);
        lo = std::min(lo, r.min_ratio);
        hi = std::max(hi, r.max_ratio);
        ++cases;
      }
    }
  }
  line(10, "dual norm functional", worst <= kGridTol && lo >= kBandLow && hi <= kBandHigh,
       fmt("grid oracle: 50 instances, max relative difference %.2e (tol %.0e); ratio over %zu corpus cases in "
           "[%.3f, %.3f] (band [%.3f, %g])",
           worst, kGridTol, cases, lo, hi, kBandLow, kBandHigh),
       start);
}

// 11 ----------------------------------------------------------------------------
void search() {
  const auto start = Clock::now();
  bool pass = true;
  std::string detail;
  for (const auto& check : search_checks()) {
    SearchConfig c;
    c.check = check;
    c.n_max = check == "cos_product" ? 6 : 8;
    c.iterations = kSearchIterations;
    c.seed = kSeed;
    const auto r = search_counterexamples(c);
    pass = pass && r.passed();
    detail += fmt("%s %zu/%zu min margin %.2g; ", check.c_str(), r.violations, r.cases, r.worst_margin);
  }
  line(11, "counterexample search", pass, detail + "(violations/iterations)", start);
}

// 12 ----------------------------------------------------------------------------
std::pair<int, std::string> capture(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {-1, out};
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

void reproducibility() {
  const auto start = Clock::now();
  const std::string command = std::string(SYMMOMENTS_TOOL) + " verify --seed 42";
  const auto a = capture(command);
  const auto b = capture(command);
  const bool same = a.second == b.second && !a.second.empty();
  line(12, "reproducibility", same && a.first == 0 && b.first == 0,
       fmt("two runs of `verify --seed 42`: exit %d and %d, %zu bytes each, %s", a.first, b.first, a.second.size(),
           same ? "byte-identical" : "DIFFERENT"),
       start);
}

}  // namespace

int main() {
  const std::function<void()> criteria[] = {engine_agreement, spot_values, cosine_product, recursions,
                                            comparison_chain_check, p24_comparison, extremality, sandwiches,
                                            gaussian_gap, dual_norm, search, reproducibility};
  for (int i = 0; i < 12; ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      std::printf("[FAIL] AC%02d raised: %s\n", i + 1, e.what());
      ++failures;
    }
  }
  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
