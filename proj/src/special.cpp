#include "symmoments/special.hpp"

#include <cmath>
#include <numbers>

#include "symmoments/errors.hpp"

namespace symmoments::special {

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double log_erfc(double x) {
  if (x < 20.0) return std::log(std::erfc(x));
  // Asymptotic series: erfc(x) ~ exp(-x²)/(x√π) · Σ (-1)^k (2k-1)!! / (2x²)^k.
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 12; ++k) {
    term *= -(2.0 * k - 1.0) * inv;
    sum += term;
  }
  return -x * x - std::log(x * std::sqrt(std::numbers::pi)) + std::log(sum);
}

double log1p_minus_identity(double y) {
  if (std::abs(y) < 1e-2) {
    // -y²/2 + y³/3 - ...
    double power = y * y;
    double sum = 0.0;
    for (int k = 2; k < 40; ++k) {
      const double term = ((k % 2 == 0) ? -1.0 : 1.0) * power / k;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
      power *= y;
    }
    return sum;
  }
  return std::log1p(y) - y;
}

double expm1_minus_identity(double w) {
  if (std::abs(w) < 0.5) {
    double term = w * w / 2.0;
    double sum = term;
    for (int k = 3; k < 60; ++k) {
      term *= w / k;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::expm1(w) - w;
}

double cos_minus_quadratic(double x) {
  // cos x - 1 + x²/2 = 2 (z - sin z)(z + sin z), z = x/2.
  const double z = 0.5 * x;
  double z_minus_sin;
  if (std::abs(z) < 1.0) {
    // z³/3! - z⁵/5! + ...
    double term = z * z * z / 6.0;
    z_minus_sin = term;
    for (int k = 2; k < 30; ++k) {
      term *= -z * z / ((2.0 * k) * (2.0 * k + 1.0));
      z_minus_sin += term;
      if (std::abs(term) <= 1e-18 * std::abs(z_minus_sin)) break;
    }
  } else {
    z_minus_sin = z - std::sin(z);
  }
  return 2.0 * z_minus_sin * (z + std::sin(z));
}

}  // namespace symmoments::special
