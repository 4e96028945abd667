#include "symmoments/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "symmoments/errors.hpp"

namespace symmoments {

namespace {

void require_order(double p, double min, const char* op) {
  if (std::isnan(p) || p < min || !std::isfinite(p)) {
    throw DomainError(std::string(op) + ": p must be >= " + std::to_string(static_cast<int>(min)));
  }
}

BoundInterval make_interval(double lower, double upper, BoundSource source, double p) {
  // Rounding can leave lower a few ulps above upper when both are the same
  // Gaussian term; collapse that to a point.
  if (lower > upper) {
    if (lower - upper > 1e-12 * std::max(1.0, upper)) {
      throw std::logic_error("bound interval with lower > upper");
    }
    lower = upper;
  }
  return {lower, upper, source, p};
}

}  // namespace

std::string_view to_string(BoundSource source) {
  switch (source) {
    case BoundSource::estrad: return "estrad";
    case BoundSource::estexp: return "estexp";
    case BoundSource::logconc: return "logconc";
    case BoundSource::gauss_gap: return "gaussGap";
    case BoundSource::khintchine: return "khintchine";
    case BoundSource::comp2: return "comp2";
  }
  return "unknown";
}

BoundInterval rademacher_bounds(const CoefficientVector& v, double p) {
  require_order(p, 2.0, "rademacher_bounds");
  const HeadTail split = head_tail_split(rearrange(v), p);
  const double gaussian = gamma_p(p) * lp_norm(split.tail, 2.0);
  const double head = split.head.sum();
  return make_interval(std::max(gaussian, head / std::numbers::sqrt2), gaussian + head,
                       BoundSource::estrad, p);
}

BoundInterval exponential_bounds(const CoefficientVector& v, double p) {
  require_order(p, 2.0, "exponential_bounds");
  const double gaussian = gamma_p(p) * norm(v, 2.0);
  const double largest = norm(v, kInfinity);
  return make_interval(std::max(gaussian, p / (std::numbers::e * std::numbers::sqrt2) * largest),
                       gaussian + p * largest, BoundSource::estexp, p);
}

Eigen::VectorXd logconcave_head(const CoefficientVector& v, double p) {
  return v.values().head(std::min(indices_below(p), v.size()));
}

double logconcave_tail_norm(const CoefficientVector& v, double p) {
  const Eigen::Index skip = std::min(split_index(p) - 1, v.size());
  return lp_norm(v.values().tail(v.size() - skip), 2.0);
}

BoundInterval logconcave_bounds(const CoefficientVector& v, const Distribution&, double p,
                                const MomentEstimate& head_norm) {
  require_order(p, 3.0, "logconcave_bounds");
  if (!is_rearranged(v)) throw DomainError("logconcave_bounds: coefficients must be rearranged");
  if (head_norm.p != p) throw DomainError("logconcave_bounds: head norm computed at a different p");
  const double gaussian = gamma_p(p) * logconcave_tail_norm(v, p);
  return make_interval(std::max(gaussian, head_norm.value), gaussian + head_norm.value,
                       BoundSource::logconc, p);
}

BoundInterval gaussian_approx_gap(const CoefficientVector& v, double p) {
  require_order(p, 3.0, "gaussian_approx_gap");
  const double centre = gamma_p(p) * norm(v, 2.0);
  const double radius = p * norm(v, kInfinity);
  return make_interval(std::max(centre - radius, 0.0), centre + radius, BoundSource::gauss_gap, p);
}

BoundInterval khintchine_bounds(const CoefficientVector& v, double p) {
  require_order(p, 2.0, "khintchine_bounds");
  const double l2 = norm(v, 2.0);
  return make_interval(l2, gamma_p(p) * l2, BoundSource::khintchine, p);
}

BoundInterval comparison_bounds(const CoefficientVector& v, double p) {
  require_order(p, 2.0, "comparison_bounds");
  const HeadTail split = head_tail_split(rearrange(v), p);
  const double g = gamma_p(p);
  return make_interval(g * lp_norm(split.tail, 2.0), g * norm(v, 2.0), BoundSource::comp2, p);
}

double OrliczFunction::operator()(double x) const {
  const double ax = std::abs(x);
  return ax <= 1.0 ? ax * ax : tail(ax);
}

double OrliczFunction::tail(double x) const { return tail_exponent(dist_, x); }

double OrliczFunction::tail_slope(double x) const { return tail_exponent_slope(dist_, x); }

std::optional<double> OrliczFunction::tail_argmax(double ratio) const {
  if (!has_tail()) return 1.0;
  if (ratio <= tail_slope(1.0)) return 1.0;
  switch (dist_.kind()) {
    case Kind::sym_exponential:
    case Kind::weibull_tail: {
      const double alpha = dist_.alpha();
      const double scale = dist_.scale();
      if (alpha == 1.0) return std::nullopt;  // linear tail, slope already exceeded
      return scale * std::pow(ratio * scale / alpha, 1.0 / (alpha - 1.0));
    }
    default: {
      // N' is nondecreasing and unbounded for the Gaussian tail.
      double lo = 1.0, hi = 2.0;
      while (tail_slope(hi) < ratio) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e150) return std::nullopt;
      }
      for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail_slope(mid) < ratio ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
}

namespace {

struct DualPoint {
  double value = 0.0;  // D(λ)
  double slope = 0.0;  // p - Σ cost
  bool finite = true;
};

// D(λ) for one assignment of coordinates to pieces.
DualPoint dual_at(std::span<const double> a, std::span<const OrliczFunction* const> m,
                  std::span<const bool> on_tail, double p, double lambda) {
  DualPoint out{lambda * p, p, true};
  for (std::size_t i = 0; i < a.size(); ++i) {
    double b, cost;
    if (!on_tail[i]) {
      b = lambda == 0.0 ? 1.0 : std::min(a[i] / (2.0 * lambda), 1.0);
      cost = b * b;
    } else {
      if (lambda == 0.0) return {kInfinity, -kInfinity, false};
      const auto arg = m[i]->tail_argmax(a[i] / lambda);
      if (!arg) return {kInfinity, -kInfinity, false};
      b = *arg;
      cost = m[i]->tail(b);
    }
    out.value += a[i] * b - lambda * cost;
    out.slope -= cost;
  }
  return out;
}

double solve_assignment(std::span<const double> a, std::span<const OrliczFunction* const> m,
                        std::span<const bool> on_tail, double p, double base_cost) {
  // No budget left beyond the tail floor: the only feasible point puts the
  // tail coordinates at 1 and the rest at 0, and the dual minimum sits at λ→∞.
  if (p - base_cost <= 1e-12 * p) {
    double value = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) value += on_tail[i] ? a[i] : 0.0;
    return value;
  }
  double hi = 1.0;
  DualPoint at_hi = dual_at(a, m, on_tail, p, hi);
  while ((!at_hi.finite || at_hi.slope < 0.0) && hi < 1e300) {
    hi *= 2.0;
    at_hi = dual_at(a, m, on_tail, p, hi);
  }
  double lo = 0.0;
  for (int iter = 0; iter < 400 && hi - lo > 1e-16 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const DualPoint at_mid = dual_at(a, m, on_tail, p, mid);
    if (at_mid.finite && at_mid.slope >= 0.0) {
      hi = mid;
      at_hi = at_mid;
    } else {
      lo = mid;
    }
  }
  // λ = 0 is the unconstrained optimum when the budget is never binding.
  const DualPoint at_zero = dual_at(a, m, on_tail, p, 0.0);
  if (at_zero.finite && at_zero.slope >= 0.0) return at_zero.value;
  return at_hi.value;
}

}  // namespace

double gk_dual_norm(const CoefficientVector& v, std::span<const OrliczFunction> m, double p) {
  if (static_cast<std::size_t>(v.size()) != m.size()) {
    throw DomainError("gk_dual_norm: one Orlicz function per coefficient is required");
  }
  if (std::isnan(p) || p < 1.0 || !std::isfinite(p)) throw DomainError("gk_dual_norm: p must be >= 1");

  // The problem is symmetric in the sign of each a_i; zeros take b_i = 0.
  std::vector<double> a;
  std::vector<const OrliczFunction*> fns;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      a.push_back(std::abs(v[i]));
      fns.push_back(&m[static_cast<std::size_t>(i)]);
    }
  }
  if (a.empty()) return 0.0;
  if (static_cast<Eigen::Index>(a.size()) > kDualNormCap) {
    throw CapacityError("gk_dual_norm: more than " + std::to_string(kDualNormCap) +
                        " nonzero coefficients");
  }

  std::vector<std::size_t> free_tails;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (fns[i]->has_tail()) free_tails.push_back(i);
  }
  double best = 0.0;
  const std::size_t assignments = std::size_t{1} << free_tails.size();
  for (std::size_t bits = 0; bits < assignments; ++bits) {
    double base_cost = 0.0;
    bool on_tail[kDualNormCap] = {};
    for (std::size_t k = 0; k < free_tails.size(); ++k) {
      if ((bits >> k) & 1U) {
        on_tail[free_tails[k]] = true;
        base_cost += fns[free_tails[k]]->tail(1.0);
      }
    }
    if (base_cost > p) continue;  // no feasible point on these pieces
    best = std::max(best, solve_assignment(a, fns, std::span<const bool>(on_tail, a.size()), p, base_cost));
  }
  return best;
}

}  // namespace symmoments
