#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "symmoments/errors.hpp"
#include "symmoments/random.hpp"
#include "symmoments/summoments.hpp"

using namespace symmoments;
using std::numbers::sqrt2;

namespace {

// Plain 2^n loop over sign patterns.
double brute_rademacher(const std::vector<double>& a, double p) {
  const std::size_t n = a.size();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (mask >> i & 1) ? a[i] : -a[i];
    total += std::pow(std::abs(s), p);
  }
  return total / static_cast<double>(1ULL << n);
}

std::vector<double> random_entries(RandomStream& s, int n) {
  std::vector<double> a(static_cast<std::size_t>(n));
  for (auto& x : a) x = (0.1 + 1.9 * s.uniform()) * s.sign();
  return a;
}

CoefficientVector cv(const std::vector<double>& a) { return CoefficientVector(std::span<const double>(a)); }

}  // namespace

TEST_CASE("method and rigor names") {
  CHECK(to_string(Method::partial_fractions) == "partialFractions");
  CHECK(to_string(Method::monte_carlo) == "monteCarlo");
  CHECK(parse_method("haagerup") == Method::haagerup);
  CHECK_FALSE(parse_method("bogus").has_value());
  CHECK(to_string(RigorKind::ci) == "ci");
}

TEST_CASE("Rademacher enumeration examples") {
  auto e = rademacher_sum_moment({1, 1}, 4);
  CHECK(e.raw_moment == 8.0);
  CHECK(e.value == doctest::Approx(std::pow(8.0, 0.25)).epsilon(1e-15));
  CHECK(e.method == Method::enumeration);
  CHECK(e.rigor.kind == RigorKind::exact);
  CHECK(rademacher_sum_moment({1, 1, 1}, 4).raw_moment == 21.0);
  e = rademacher_sum_moment({1, 1, 1}, 3);
  CHECK(e.raw_moment == 7.5);
  CHECK(e.value == doctest::Approx(1.9574338205844317).epsilon(1e-14));
}

TEST_CASE("Rademacher enumeration against a plain loop") {
  RandomStream s(1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_entries(s, 1 + trial % 12);
    for (double p : {1.0, 2.5, 3.0, 7.3}) {
      CHECK(rademacher_sum_moment(cv(a), p).raw_moment == doctest::Approx(brute_rademacher(a, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Rademacher quadratic and quartic identities") {
  RandomStream s(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_entries(s, 1 + trial % 15);
    const Eigen::VectorXd v = cv(a).values();
    const double s2 = v.squaredNorm(), s4 = v.array().pow(4).sum();
    CHECK(rademacher_sum_moment(cv(a), 2).raw_moment == doctest::Approx(s2).epsilon(1e-12));
    CHECK(rademacher_sum_moment(cv(a), 4).raw_moment == doctest::Approx(3 * s2 * s2 - 2 * s4).epsilon(1e-12));
  }
}

TEST_CASE("Rademacher enumeration cap") {
  const std::vector<double> ones(27, 1.0);
  CHECK_THROWS_AS(rademacher_sum_moment(cv(ones), 3), CapacityError);
  try {
    rademacher_sum_moment(cv(ones), 3);
  } catch (const CapacityError& e) {
    CHECK(std::string(e.what()).find("26") != std::string::npos);
    CHECK(std::string(e.what()).find("monteCarlo") != std::string::npos);
  }
  // Zeros do not count toward the cap.
  std::vector<double> padded(26, 1.0);
  padded.resize(40, 0.0);
  CHECK(rademacher_sum_moment(cv(padded), 2).raw_moment == doctest::Approx(26.0).epsilon(1e-14));
  CHECK_THROWS_AS(rademacher_sum_moment({1, 2}, 0.5), DomainError);
}

TEST_CASE("Laplace partial fractions examples") {
  auto e = laplace_sum_moment_exact({2, 1}, 2);
  CHECK(e.raw_moment == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(e.method == Method::partial_fractions);
  CHECK(laplace_sum_moment_exact({2, 1}, 0).raw_moment == doctest::Approx(1.0).epsilon(1e-15));
  // Multinomial expansion 6(a⁴ + b⁴) + 6a²b².
  CHECK(laplace_sum_moment_exact({3, 1}, 4).raw_moment == doctest::Approx(546.0).epsilon(1e-13));
  CHECK(laplace_sum_moment_exact({2, 1}, 4).raw_moment == doctest::Approx(126.0).epsilon(1e-13));
  // Independent nested-quadrature reference values.
  CHECK(laplace_sum_moment_exact({1, 0.5}, 3).raw_moment == doctest::Approx(2.740038777097871).epsilon(1e-11));
  CHECK(laplace_sum_moment_exact({1, 0.5}, 2.5).raw_moment == doctest::Approx(1.7807260988757831).epsilon(1e-11));
  CHECK(laplace_sum_moment_exact({1, 0.6, 0.3}, 3.5).raw_moment == doctest::Approx(5.505472538348853).epsilon(1e-10));
  // Fractional negative orders.
  CHECK(laplace_sum_moment_exact({1}, -0.5).raw_moment ==
        doctest::Approx(std::pow(2.0, 0.25) * std::tgamma(0.5)).epsilon(1e-13));
}

TEST_CASE("Laplace partial fractions refuse degenerate input") {
  CHECK_THROWS_AS(laplace_sum_moment_exact({1, 1}, 3), DegeneracyError);
  CHECK_THROWS_AS(laplace_sum_moment_exact({1, -1.0000000001}, 3), DegeneracyError);
  CHECK_THROWS_AS(laplace_sum_moment_exact({1, 2}, -1.5), DomainError);
  // Many close squares blow up the residues.
  std::vector<double> crowd;
  for (int i = 0; i < 8; ++i) crowd.push_back(1.0 + 0.01 * i);
  CHECK_THROWS_AS(laplace_sum_moment_exact(cv(crowd), 3), DegeneracyError);
  // Zero coefficients are dropped.
  CHECK(laplace_sum_moment_exact({2, 0, 1}, 2).raw_moment == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(laplace_sum_moment_exact({0, 0}, 3).raw_moment == 0.0);
}

TEST_CASE("partial fraction residues conserve mass and variance") {
  RandomStream s(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_entries(s, 1 + trial % 8);
    LaplaceMixture m;
    try {
      m = laplace_mixture(cv(a));
    } catch (const DegeneracyError&) {
      continue;
    }
    CHECK(m.weights.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.weights.dot(m.squares) == doctest::Approx(m.squares.sum()).epsilon(1e-9));
  }
}

TEST_CASE("characteristic functions") {
  CHECK(characteristic_function({1, 2, 3}, Kind::rademacher, 0) == 1.0);
  CHECK(characteristic_function({1, 2, 3}, Kind::sym_exponential, 0) == 1.0);
  CHECK(characteristic_function({1, 1}, Kind::rademacher, std::numbers::pi) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(characteristic_function({sqrt2}, Kind::sym_exponential, 1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("Haagerup integral examples") {
  auto e = haagerup_moment({1}, Kind::rademacher, 3);
  CHECK(e.raw_moment == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(e.method == Method::haagerup);
  CHECK(e.rigor.kind == RigorKind::tolerance);
  CHECK(e.rigor.tolerance == 1e-6);
  CHECK(haagerup_moment({1}, Kind::sym_exponential, 3).raw_moment == doctest::Approx(3 / sqrt2).epsilon(1e-9));
  CHECK(haagerup_moment({1, 1}, Kind::sym_exponential, 3).raw_moment ==
        doctest::Approx(15 / (2 * sqrt2)).epsilon(1e-9));
  CHECK_THROWS_AS(haagerup_moment({1}, Kind::rademacher, 2), DomainError);
  CHECK_THROWS_AS(haagerup_moment({1}, Kind::rademacher, 4), DomainError);
  CHECK_THROWS_AS(haagerup_moment({1}, Kind::gaussian, 3), DomainError);
}

TEST_CASE("engines agree") {
  RandomStream s(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = random_entries(s, 1 + trial % 8);
    for (double p : {2.5, 3.0, 3.5}) {
      const double enumerated = rademacher_sum_moment(cv(a), p).raw_moment;
      CHECK(haagerup_moment(cv(a), Kind::rademacher, p).raw_moment == doctest::Approx(enumerated).epsilon(1e-7));
      try {
        const double exact = laplace_sum_moment_exact(cv(a), p).raw_moment;
        CHECK(haagerup_moment(cv(a), Kind::sym_exponential, p).raw_moment == doctest::Approx(exact).epsilon(1e-7));
      } catch (const DegeneracyError&) {
      }
    }
  }
  // Tiny and large p near the ends of the range.
  CHECK(haagerup_moment({1, 0.5}, Kind::sym_exponential, 2.001).raw_moment ==
        doctest::Approx(laplace_sum_moment_exact({1, 0.5}, 2.001).raw_moment).epsilon(1e-7));
  CHECK(haagerup_moment({1, 0.5}, Kind::sym_exponential, 3.999).raw_moment ==
        doctest::Approx(laplace_sum_moment_exact({1, 0.5}, 3.999).raw_moment).epsilon(1e-7));
}

TEST_CASE("even moments by binomial expansion") {
  const auto e = Distribution::sym_exponential();
  CHECK(even_moment_exact({1, 1}, e, 4).raw_moment == doctest::Approx(18.0).epsilon(1e-14));
  CHECK(even_moment_exact({1, 1, 1}, Distribution::rademacher(), 4).raw_moment == doctest::Approx(21.0).epsilon(1e-14));
  CHECK(even_moment_exact({3, 4}, Distribution::gaussian(), 4).raw_moment == doctest::Approx(3 * 625.0).epsilon(1e-14));
  CHECK(even_moment_exact({2, 1}, e, 6).raw_moment ==
        doctest::Approx(laplace_sum_moment_exact({2, 1}, 6).raw_moment).epsilon(1e-12));
  CHECK(even_moment_exact({2, 1}, e, 6).method == Method::recursion);
  const auto w = Distribution::weibull_tail(2.0);
  CHECK(even_moment_exact({1.0}, w, 4).raw_moment == doctest::Approx(abs_moment(w, 4)).epsilon(1e-13));
  CHECK_THROWS_AS(even_moment_exact({1}, e, 3), DomainError);
}

TEST_CASE("Gaussian sums") {
  CHECK(gaussian_sum_norm({3, 4}, 2).value == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(gaussian_sum_norm({1}, 4).value == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-13));
  CHECK(gaussian_sum_norm({1, 1}, 4).value == doctest::Approx(std::pow(3.0, 0.25) * sqrt2).epsilon(1e-13));
}

TEST_CASE("Monte Carlo estimates") {
  auto e = monte_carlo_sum_moment({1, 1}, Distribution::sym_exponential(), 4, 1'000'000, 1);
  CHECK(std::abs(e.raw_moment - 18.0) <= e.rigor.halfwidth);
  CHECK(e.rigor.kind == RigorKind::ci);
  CHECK(e.rigor.confidence == 0.997);
  CHECK(e.rigor.halfwidth > 0.0);
  e = monte_carlo_sum_moment({1, 1, 1}, Distribution::rademacher(), 4, 1'000'000, 2);
  CHECK(std::abs(e.raw_moment - 21.0) <= e.rigor.halfwidth);
  e = monte_carlo_sum_moment({1}, Distribution::gaussian(), 2, 1'000'000, 3);
  CHECK(std::abs(e.raw_moment - 1.0) <= e.rigor.halfwidth);
  CHECK_THROWS_AS(monte_carlo_sum_moment({1}, Distribution::gaussian(), 2, 9'999, 3), DomainError);

  const auto a = monte_carlo_sum_moment({1, 0.5}, Distribution::weibull_tail(1.5), 3, 100'000, 9);
  const auto b = monte_carlo_sum_moment({1, 0.5}, Distribution::weibull_tail(1.5), 3, 100'000, 9);
  const auto c = monte_carlo_sum_moment({1, 0.5}, Distribution::weibull_tail(1.5), 3, 100'000, 10);
  CHECK(a.raw_moment == b.raw_moment);
  CHECK(a.rigor.halfwidth == b.rigor.halfwidth);
  CHECK(a.raw_moment != c.raw_moment);

  const double ps[] = {3.0, 5.0};
  const auto shared = monte_carlo_sum_moments({1, 0.5}, Distribution::weibull_tail(1.5), ps, 100'000, 9);
  CHECK(shared[0].raw_moment == a.raw_moment);
}

TEST_CASE("estimate invariants") {
  RandomStream s(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_entries(s, 1 + trial % 6);
    for (double p : {2.0, 3.0, 3.5, 6.0}) {
      const auto e = best_sum_moment(cv(a), Distribution::sym_exponential(), p, {100'000, 1});
      CHECK(e.value == doctest::Approx(std::pow(e.raw_moment, 1 / p)).epsilon(1e-12));
      CHECK(e.value_lower() <= e.value);
      CHECK(e.value_upper() >= e.value);
      if (e.rigor.kind == RigorKind::exact) {
        CHECK((e.method == Method::enumeration || e.method == Method::partial_fractions ||
               e.method == Method::recursion || e.method == Method::closed_form));
      }
    }
  }
}

TEST_CASE("permutation, sign and scaling invariance") {
  RandomStream s(8);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = random_entries(s, 2 + trial % 6);
    const double p = 2.5 + trial % 3 * 0.5;
    const double lambda = 0.3 + 2.0 * s.uniform();
    auto b = a;
    std::reverse(b.begin(), b.end());
    b[0] = -b[0];
    auto c = a;
    for (auto& x : c) x *= lambda;
    for (Kind k : {Kind::rademacher, Kind::sym_exponential}) {
      const double base = haagerup_moment(cv(a), k, p).raw_moment;
      CHECK(haagerup_moment(cv(b), k, p).raw_moment == doctest::Approx(base).epsilon(1e-9));
      CHECK(haagerup_moment(cv(c), k, p).raw_moment == doctest::Approx(base * std::pow(lambda, p)).epsilon(1e-9));
    }
    const double r = rademacher_sum_moment(cv(a), p).raw_moment;
    CHECK(rademacher_sum_moment(cv(b), p).raw_moment == doctest::Approx(r).epsilon(1e-12));
    CHECK(rademacher_sum_moment(cv(c), p).value == doctest::Approx(lambda * std::pow(r, 1 / p)).epsilon(1e-12));
    try {
      const double l = laplace_sum_moment_exact(cv(a), p).raw_moment;
      CHECK(laplace_sum_moment_exact(cv(b), p).raw_moment == doctest::Approx(l).epsilon(1e-12));
      CHECK(laplace_sum_moment_exact(cv(c), p).raw_moment == doctest::Approx(l * std::pow(lambda, p)).epsilon(1e-11));
    } catch (const DegeneracyError&) {
    }
  }
}

TEST_CASE("engine selection") {
  const auto e = Distribution::sym_exponential();
  CHECK(exact_sum_moment({1, 1}, e, 4)->method == Method::recursion);
  CHECK(exact_sum_moment({1, 1}, e, 3)->method == Method::haagerup);
  CHECK(exact_sum_moment({1, 0.5}, e, 5)->method == Method::partial_fractions);
  CHECK_FALSE(exact_sum_moment({1, 1}, e, 5).has_value());
  CHECK_FALSE(exact_sum_moment({1, 1}, Distribution::weibull_tail(2), 3).has_value());
  CHECK(exact_sum_moment({1, 1}, Distribution::rademacher(), 5)->method == Method::enumeration);
  CHECK(exact_sum_moment({1, 1}, Distribution::gaussian(), 5)->method == Method::closed_form);
  CHECK(best_sum_moment({1, 1}, e, 5, {20'000, 1}).method == Method::monte_carlo);
}
