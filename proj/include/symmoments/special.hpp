#pragma once

namespace symmoments::special {

/// ln Γ(x) for x > 0. Reentrant (does not touch the global signgam).
double log_gamma(double x);

/// ln erfc(x), finite far into the tail where erfc itself underflows.
double log_erfc(double x);

/// log1p(y) - y without cancellation for small |y|.
double log1p_minus_identity(double y);

/// exp(w) - 1 - w without cancellation for small |w|.
double expm1_minus_identity(double w);

/// cos(x) - 1 + x²/2 without cancellation for small |x|.
double cos_minus_quadratic(double x);

}  // namespace symmoments::special
