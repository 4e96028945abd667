#include "symmoments/summoments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "symmoments/errors.hpp"
#include "symmoments/parallel.hpp"
#include "symmoments/quadrature.hpp"
#include "symmoments/special.hpp"

namespace symmoments {

namespace {

void require_order(double p, double min, const char* op) {
  if (std::isnan(p) || p < min || !std::isfinite(p)) {
    throw DomainError(std::string(op) + ": p must be a finite number >= " + std::to_string(min));
  }
}

std::vector<double> nonzero_entries(const CoefficientVector& v) {
  std::vector<double> out;
  for (double a : v) {
    if (a != 0.0) out.push_back(a);
  }
  return out;
}

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

std::vector<double> signed_subset_sums(std::span<const double> a) {
  std::vector<double> sums{0.0};
  sums.reserve(std::size_t{1} << a.size());
  for (double x : a) {
    const std::size_t size = sums.size();
    for (std::size_t i = 0; i < size; ++i) {
      sums.push_back(sums[i] - x);
      sums[i] += x;
    }
  }
  return sums;
}

bool is_even_integer(double p) { return p >= 0.0 && p == std::floor(p) && std::fmod(p, 2.0) == 0.0; }

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::enumeration: return "enumeration";
    case Method::partial_fractions: return "partialFractions";
    case Method::haagerup: return "haagerup";
    case Method::monte_carlo: return "monteCarlo";
    case Method::recursion: return "recursion";
    case Method::closed_form: return "closedForm";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::enumeration, Method::partial_fractions, Method::haagerup,
                   Method::monte_carlo, Method::recursion, Method::closed_form}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

std::string_view to_string(RigorKind kind) {
  switch (kind) {
    case RigorKind::exact: return "exact";
    case RigorKind::tolerance: return "tolerance";
    case RigorKind::ci: return "ci";
  }
  return "unknown";
}

double MomentEstimate::raw_uncertainty() const {
  switch (rigor.kind) {
    case RigorKind::exact: return 0.0;
    case RigorKind::tolerance: return rigor.tolerance * raw_moment;
    case RigorKind::ci: return rigor.halfwidth;
  }
  return 0.0;
}

double MomentEstimate::value_lower() const {
  const double raw = std::max(0.0, raw_moment - raw_uncertainty());
  return std::pow(raw, 1.0 / p);
}

double MomentEstimate::value_upper() const {
  return std::pow(raw_moment + raw_uncertainty(), 1.0 / p);
}

MomentEstimate make_estimate(double p, double raw_moment, Method method, Rigor rigor) {
  MomentEstimate e;
  e.p = p;
  e.raw_moment = raw_moment;
  e.value = p == 0.0 ? 1.0 : std::pow(raw_moment, 1.0 / p);
  e.method = method;
  e.rigor = rigor;
  return e;
}

MomentEstimate rademacher_sum_moment(const CoefficientVector& v, double p) {
  require_order(p, 1.0, "rademacher_sum_moment");
  const std::vector<double> a = nonzero_entries(v);
  if (static_cast<Eigen::Index>(a.size()) > kEnumerationCap) {
    throw CapacityError("rademacher_sum_moment: " + std::to_string(a.size()) +
                        " nonzero coefficients exceed the enumeration cap of " +
                        std::to_string(kEnumerationCap) + "; use monteCarlo");
  }
  if (a.empty()) return make_estimate(p, 0.0, Method::enumeration, Rigor::exact());

  // S and -S have the same law, so fix ε_1 = +1 and enumerate the rest as
  // (high half) × (low half) tables of signed subset sums.
  const std::span<const double> rest(a.data() + 1, a.size() - 1);
  const std::size_t low_count = rest.size() / 2;
  const std::vector<double> low = signed_subset_sums(rest.first(low_count));
  const std::vector<double> high = signed_subset_sums(rest.subspan(low_count));

  CompensatedSum total;
  for (double h : high) {
    CompensatedSum inner;
    const double shifted = a.front() + h;
    for (double l : low) inner.add(std::pow(std::abs(shifted + l), p));
    total.add(inner.value());
  }
  const double raw = std::ldexp(total.value(), -static_cast<int>(rest.size()));
  return make_estimate(p, raw, Method::enumeration, Rigor::exact());
}

LaplaceMixture laplace_mixture(const CoefficientVector& v, double gap) {
  const std::vector<double> a = nonzero_entries(v);
  const auto n = static_cast<Eigen::Index>(a.size());
  LaplaceMixture mix{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) mix.squares[i] = a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];
  if (n == 0) return mix;

  const double largest = mix.squares.maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(mix.squares[i] - mix.squares[j]) < gap * largest) {
        throw DegeneracyError("laplace_sum_moment_exact: squared coefficients " + std::to_string(i) +
                              " and " + std::to_string(j) + " are closer than the relative gap " +
                              std::to_string(gap) + "; use monteCarlo");
      }
    }
  }
  long double magnitude = 0.0L;
  for (Eigen::Index i = 0; i < n; ++i) {
    long double c = 1.0L;
    const long double si = mix.squares[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) c *= si / (si - static_cast<long double>(mix.squares[j]));
    }
    mix.weights[i] = static_cast<double>(c);
    magnitude += std::abs(c);
  }
  if (magnitude > kResidueGuard) {
    throw DegeneracyError("laplace_sum_moment_exact: residue magnitude " +
                          std::to_string(static_cast<double>(magnitude)) +
                          " exceeds the cancellation guard; use monteCarlo");
  }
  return mix;
}

MomentEstimate laplace_sum_moment_exact(const CoefficientVector& v, double p, double gap) {
  if (std::isnan(p) || p <= -1.0 || !std::isfinite(p)) {
    throw DomainError("laplace_sum_moment_exact: p must be > -1");
  }
  const LaplaceMixture mix = laplace_mixture(v, gap);
  if (mix.squares.size() == 0) {
    if (p < 0.0) throw DomainError("laplace_sum_moment_exact: E|0|^p is infinite for p < 0");
    return make_estimate(p, p == 0.0 ? 1.0 : 0.0, Method::partial_fractions, Rigor::exact());
  }
  // E|Laplace(β)|^p = Γ(p+1) β^p with β² = a²/2.
  long double sum = 0.0L;
  for (Eigen::Index i = 0; i < mix.squares.size(); ++i) {
    sum += static_cast<long double>(mix.weights[i]) *
           std::exp(0.5L * p * std::log(static_cast<long double>(mix.squares[i]) / 2.0L));
  }
  if (sum < 0.0L) {
    throw DegeneracyError("laplace_sum_moment_exact: cancellation produced a negative moment");
  }
  const double raw = static_cast<double>(sum * std::exp(static_cast<long double>(special::log_gamma(p + 1.0))));
  return make_estimate(p, raw, Method::partial_fractions, Rigor::exact());
}

double characteristic_function(const CoefficientVector& v, Kind kind, double t) {
  double product = 1.0;
  switch (kind) {
    case Kind::rademacher:
      for (double a : v) product *= std::cos(a * t);
      return product;
    case Kind::sym_exponential:
      for (double a : v) product /= 1.0 + 0.5 * a * a * t * t;
      return product;
    default:
      throw DomainError("characteristic_function: kind must be rademacher or symExponential");
  }
}

namespace {

// φ(t) - 1 + t²/2 for a sum normalised to unit variance, accurate down to
// t → 0 where the three terms cancel to O(t⁴). Works from ψ = ln φ:
// φ - 1 + s = (e^ψ - 1 - ψ) + (ψ + s) with s = t²/2 and ψ + s summed per
// coefficient from cancellation-free pieces.
double centred_cf(const Eigen::VectorXd& w, Kind kind, double t) {
  const double s = 0.5 * t * t;
  if (kind == Kind::sym_exponential) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double u = 0.5 * w[i] * w[i] * t * t;
      r -= special::log1p_minus_identity(u);
    }
    return special::expm1_minus_identity(r - s) + r;
  }
  const double largest = w.cwiseAbs().maxCoeff() * std::abs(t);
  if (largest < 1.0) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double x = w[i] * t;
      const double y = -2.0 * std::pow(std::sin(0.5 * x), 2);  // cos x - 1
      r += special::log1p_minus_identity(y) + special::cos_minus_quadratic(x);
    }
    return special::expm1_minus_identity(r - s) + r;
  }
  double product = 1.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) product *= std::cos(w[i] * t);
  return product - 1.0 + s;
}

}  // namespace

MomentEstimate haagerup_moment(const CoefficientVector& v, Kind kind, double p) {
  if (kind != Kind::rademacher && kind != Kind::sym_exponential) {
    throw DomainError("haagerup_moment: kind must be rademacher or symExponential");
  }
  if (std::isnan(p) || !(p > 2.0 && p < 4.0)) {
    throw DomainError("haagerup_moment: p must lie strictly between 2 and 4");
  }
  const double sigma = norm(v, 2.0);
  if (sigma == 0.0) return make_estimate(p, 0.0, Method::haagerup, Rigor::within(kHaagerupTolerance));

  // E|λS|^p = λ^p E|S|^p: integrate the unit-variance sum.
  const Eigen::VectorXd w = v.values() / sigma;
  const double w_max = w.cwiseAbs().maxCoeff();

  // (0, τ]: Taylor series of φ - 1 + t²/2 from the even moments of S.
  const double sum4 = w.array().pow(4).sum();
  const double sum6 = w.array().pow(6).sum();
  const double sum8 = w.array().pow(8).sum();
  double k4, k6, k8;
  if (kind == Kind::rademacher) {
    k4 = -2.0 * sum4;
    k6 = 16.0 * sum6;
    k8 = -272.0 * sum8;
  } else {
    k4 = 3.0 * sum4;
    k6 = 30.0 * sum6;
    k8 = 630.0 * sum8;
  }
  const double m4 = k4 + 3.0;
  const double m6 = k6 + 15.0 * k4 + 15.0;
  const double m8 = k8 + 28.0 * k6 + 35.0 * k4 * k4 + 210.0 * k4 + 105.0;
  const double tau = 1e-3 / w_max;
  const double head = m4 / 24.0 * std::pow(tau, 4.0 - p) / (4.0 - p) -
                      m6 / 720.0 * std::pow(tau, 6.0 - p) / (6.0 - p) +
                      m8 / 40320.0 * std::pow(tau, 8.0 - p) / (8.0 - p);

  const double log_cp = std::log(2.0 / std::numbers::pi) +
                        std::log(-std::sin(p * std::numbers::pi / 2.0)) +
                        special::log_gamma(p + 1.0);
  const double cp = std::exp(log_cp);

  // Truncation point T: the dropped ∫_T^∞ φ t^{-p-1} dt must stay below
  // 1e-11 of the integral, which is at least 1/C_p since E|S|^p >= 1.
  double upper;
  std::vector<double> breaks;
  if (kind == Kind::rademacher) {
    upper = std::pow(cp * 1e11 / p, 1.0 / p);
    upper = std::max(upper, 2.0 * tau + 2.0);
    const double step = std::min(2.0, std::numbers::pi / w_max);
    for (double t = std::max(1.0, 2.0 * tau); t < upper; t += step) breaks.push_back(t);
  } else {
    upper = std::pow(2.0 * cp * 1e11 / (w_max * w_max * (p + 2.0)), 1.0 / (p + 2.0));
    upper = std::max(upper, 2.0 * tau + 2.0);
    for (double t = std::max(1.0, 2.0 * tau); t < upper; t *= 2.0) breaks.push_back(t);
  }
  breaks.push_back(upper);
  breaks.insert(breaks.begin(), tau);

  auto integrand = [&](double t) { return centred_cf(w, kind, t) * std::pow(t, -p - 1.0); };
  quadrature::Options opts;
  opts.rel_tol = 1e-12;
  opts.max_intervals = static_cast<int>(breaks.size()) + 20000;
  const quadrature::Result body = quadrature::integrate(integrand, breaks, opts);

  // ∫_T^∞ (t²/2 - 1) t^{-p-1} dt in closed form.
  const double tail = std::pow(upper, 2.0 - p) / (2.0 * (p - 2.0)) - std::pow(upper, -p) / p;

  const double integral = head + body.value + tail;
  const double raw = cp * integral * std::pow(sigma, p);
  return make_estimate(p, raw, Method::haagerup, Rigor::within(kHaagerupTolerance));
}

MomentEstimate even_moment_exact(const CoefficientVector& v, const Distribution& d, int p) {
  if (p < 0 || p % 2 != 0) throw DomainError("even_moment_exact: p must be a nonnegative even integer");
  const auto order = static_cast<std::size_t>(p);
  std::vector<long double> law(order + 1, 0.0L);
  for (std::size_t j = 0; j <= order; j += 2) law[j] = abs_moment(d, static_cast<double>(j));

  std::vector<std::vector<long double>> binom(order + 1, std::vector<long double>(order + 1, 0.0L));
  for (std::size_t k = 0; k <= order; ++k) {
    binom[k][0] = 1.0L;
    for (std::size_t j = 1; j <= k; ++j) binom[k][j] = binom[k - 1][j - 1] + (j < k ? binom[k - 1][j] : 0.0L);
  }

  // moments[k] = E T^k for the running partial sum T.
  std::vector<long double> moments(order + 1, 0.0L);
  moments[0] = 1.0L;
  for (double a : v) {
    if (a == 0.0) continue;
    std::vector<long double> next(order + 1, 0.0L);
    for (std::size_t k = 0; k <= order; k += 2) {
      long double power = 1.0L;
      for (std::size_t j = 0; j <= k; j += 2) {
        next[k] += binom[k][j] * power * law[j] * moments[k - j];
        power *= static_cast<long double>(a) * a;
      }
    }
    moments = std::move(next);
  }
  return make_estimate(p, static_cast<double>(moments[order]), Method::recursion, Rigor::exact());
}

std::vector<MomentEstimate> monte_carlo_sum_moments(const CoefficientVector& v,
                                                    const Distribution& d,
                                                    std::span<const double> ps,
                                                    std::size_t samples, std::uint64_t seed) {
  for (double p : ps) require_order(p, 1.0, "monte_carlo_sum_moment");
  if (samples < 10'000) throw DomainError("monte_carlo_sum_moment: samples must be >= 10000");

  constexpr std::size_t kBlock = std::size_t{1} << 16;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  const std::size_t orders = ps.size();

  struct Stats {
    double count = 0.0;
    std::vector<double> mean, m2;
  };
  std::vector<Stats> per_block(blocks);
  const Eigen::VectorXd& a = v.values();

  parallel_for(blocks, [&](std::size_t b) {
    RandomStream stream(seed, b);
    Stats st;
    st.mean.assign(orders, 0.0);
    st.m2.assign(orders, 0.0);
    const std::size_t count = std::min(kBlock, samples - b * kBlock);
    for (std::size_t i = 0; i < count; ++i) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < a.size(); ++j) s += a[j] * sample(d, stream);
      const double x = std::abs(s);
      st.count += 1.0;
      for (std::size_t k = 0; k < orders; ++k) {
        const double y = std::pow(x, ps[k]);
        const double delta = y - st.mean[k];
        st.mean[k] += delta / st.count;
        st.m2[k] += delta * (y - st.mean[k]);
      }
    }
    per_block[b] = std::move(st);
  });

  // Chan et al. pairwise merge, always in block order.
  Stats total = per_block.front();
  for (std::size_t b = 1; b < blocks; ++b) {
    const Stats& st = per_block[b];
    const double n = total.count + st.count;
    for (std::size_t k = 0; k < orders; ++k) {
      const double delta = st.mean[k] - total.mean[k];
      total.mean[k] += delta * st.count / n;
      total.m2[k] += st.m2[k] + delta * delta * total.count * st.count / n;
    }
    total.count = n;
  }

  std::vector<MomentEstimate> out;
  for (std::size_t k = 0; k < orders; ++k) {
    const double sd = std::sqrt(total.m2[k] / (total.count - 1.0));
    const double halfwidth = kCiZ * sd / std::sqrt(total.count);
    out.push_back(make_estimate(ps[k], total.mean[k], Method::monte_carlo,
                                Rigor::interval(halfwidth, kCiConfidence)));
  }
  return out;
}

MomentEstimate monte_carlo_sum_moment(const CoefficientVector& v, const Distribution& d, double p,
                                      std::size_t samples, std::uint64_t seed) {
  const double ps[] = {p};
  return monte_carlo_sum_moments(v, d, ps, samples, seed).front();
}

MomentEstimate gaussian_sum_norm(const CoefficientVector& v, double p) {
  require_order(p, 1.0, "gaussian_sum_norm");
  const double value = gamma_p(p) * norm(v, 2.0);
  MomentEstimate e = make_estimate(p, std::pow(value, p), Method::closed_form, Rigor::exact());
  e.value = value;
  return e;
}

std::optional<MomentEstimate> exact_sum_moment(const CoefficientVector& v, const Distribution& d,
                                               double p) {
  require_order(p, 1.0, "exact_sum_moment");
  switch (d.kind()) {
    case Kind::rademacher:
      try {
        return rademacher_sum_moment(v, p);
      } catch (const CapacityError&) {
        return std::nullopt;
      }
    case Kind::gaussian:
      return gaussian_sum_norm(v, p);
    case Kind::sym_exponential:
      if (is_even_integer(p) && p <= 64.0) return even_moment_exact(v, d, static_cast<int>(p));
      try {
        return laplace_sum_moment_exact(v, p);
      } catch (const CapacityError&) {
      }
      if (p > 2.0 && p < 4.0) {
        try {
          return haagerup_moment(v, Kind::sym_exponential, p);
        } catch (const QuadratureError&) {
        }
      }
      return std::nullopt;
    case Kind::weibull_tail:
      return std::nullopt;
  }
  return std::nullopt;
}

MomentEstimate best_sum_moment(const CoefficientVector& v, const Distribution& d, double p,
                               const EngineOptions& options) {
  if (auto exact = exact_sum_moment(v, d, p)) return *exact;
  return monte_carlo_sum_moment(v, d, p, options.samples, options.seed);
}

}  // namespace symmoments
