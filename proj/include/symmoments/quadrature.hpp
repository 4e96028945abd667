#pragma once

#include <functional>
#include <span>

namespace symmoments::quadrature {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss–Kronrod integration over [a, b].
/// Throws QuadratureError when the subdivision cap is reached first.
Result integrate(const Integrand& f, double a, double b, const Options& options = {});

/// Same, with the initial partition given by sorted breakpoints
/// (first and last are the integration limits).
Result integrate(const Integrand& f, std::span<const double> breakpoints,
                 const Options& options = {});

}  // namespace symmoments::quadrature
