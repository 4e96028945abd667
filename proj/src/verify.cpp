#include "symmoments/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "symmoments/errors.hpp"
#include "symmoments/parallel.hpp"

namespace symmoments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Worst outcome and margin over the links of one case.
struct CaseTally {
  Outcome outcome = Outcome::pass;
  double margin = kInfinity;

  void absorb(Outcome o, double m) {
    outcome = std::max(outcome, o);
    margin = std::min(margin, m);
  }
  void link(const Quantity& larger, const Quantity& smaller) {
    double m = 0.0;
    const Outcome o = classify(larger, smaller, m);
    absorb(o, m);
  }
};

void add_case(VerificationReport& report, const CaseTally& tally, std::span<const double> witness,
              double p = kNaN, double t = kNaN) {
  ++report.cases;
  switch (tally.outcome) {
    case Outcome::violation: ++report.violations; break;
    case Outcome::inconclusive: ++report.inconclusive; break;
    case Outcome::ci_resolved: ++report.ci_resolved; break;
    case Outcome::pass: break;
  }
  if (tally.margin < report.worst_margin) {
    report.worst_margin = tally.margin;
    report.witness.assign(witness.begin(), witness.end());
    report.witness_p = p;
    report.witness_t = t;
  }
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.begin(), v.end()}; }

double gaussian_raw(double p, double sum_sq) {
  if (sum_sq == 0.0) return 0.0;
  return std::exp(p * std::log(gamma_p(p)) + 0.5 * p * std::log(sum_sq));
}

MomentEstimate zero_moment(double p) { return make_estimate(p, 0.0, Method::closed_form, Rigor::exact()); }

bool all_zero(const Eigen::VectorXd& v) { return v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0; }

// Runs `count` independent cases in parallel and folds their reports in
// index order.
VerificationReport run_cases(const std::string& check, std::uint64_t seed, std::size_t count,
                             const std::function<void(std::size_t, VerificationReport&)>& body) {
  std::vector<VerificationReport> parts(count);
  parallel_for(count, [&](std::size_t i) {
    parts[i].check = check;
    parts[i].seed = seed;
    body(i, parts[i]);
  });
  VerificationReport total;
  total.check = check;
  total.seed = seed;
  for (const auto& part : parts) total.merge(part);
  return total;
}

std::uint64_t check_tag(std::string_view check) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : check) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

void VerificationReport::merge(const VerificationReport& other) {
  cases += other.cases;
  violations += other.violations;
  ci_resolved += other.ci_resolved;
  inconclusive += other.inconclusive;
  if (other.worst_margin < worst_margin) {
    worst_margin = other.worst_margin;
    witness = other.witness;
    witness_p = other.witness_p;
    witness_t = other.witness_t;
  }
}

Quantity Quantity::raw(const MomentEstimate& e) {
  Quantity q{e.raw_moment, 0.0, 0.0};
  if (e.rigor.kind == RigorKind::ci) q.halfwidth = e.raw_uncertainty();
  else q.tolerance = e.raw_uncertainty();
  return q;
}

Quantity Quantity::norm(const MomentEstimate& e) {
  const double spread = std::max(e.value - e.value_lower(), e.value_upper() - e.value);
  Quantity q{e.value, 0.0, 0.0};
  if (e.rigor.kind == RigorKind::ci) q.halfwidth = spread;
  else q.tolerance = spread;
  return q;
}

Outcome classify(const Quantity& larger, const Quantity& smaller, double& margin) {
  const double scale = std::max(std::abs(larger.value), std::abs(smaller.value));
  if (scale == 0.0) {
    margin = 0.0;
    return Outcome::pass;
  }
  margin = (larger.value - smaller.value) / scale;
  const double numerical = kNumericalSlack + (larger.tolerance + smaller.tolerance) / scale;
  const double statistical = (larger.halfwidth + smaller.halfwidth) / scale;
  if (margin - statistical >= -numerical) {
    return statistical > 0.0 ? Outcome::ci_resolved : Outcome::pass;
  }
  if (margin + statistical >= -numerical) return Outcome::inconclusive;
  return Outcome::violation;
}

VerificationReport check_cos_product(const CoefficientVector& v, std::span<const double> t_grid) {
  if (!is_rearranged(v)) {
    throw DomainError("check_cos_product: coefficients must be nonincreasing in absolute value");
  }
  VerificationReport report;
  report.check = "cos_product";
  const std::vector<double> witness = to_std(v.values());
  const double a1 = v[0];
  for (double t : t_grid) {
    double cosines = 1.0;
    for (double a : v) cosines *= std::cos(a * t);
    double rational = 1.0;
    for (Eigen::Index i = 1; i < v.size(); ++i) rational /= 1.0 + 0.5 * v[i] * v[i] * t * t;
    const double margin = cosines + 0.5 * a1 * a1 * t * t - rational;
    CaseTally tally;
    tally.absorb(margin >= -kCosProductSlack ? Outcome::pass : Outcome::violation, margin);
    add_case(report, tally, witness, kNaN, t);
  }
  return report;
}

ChainValues comparison_chain(const CoefficientVector& v, double p, const EngineOptions& options) {
  const CoefficientVector sorted = rearrange(v);
  const HeadTail split = head_tail_split(sorted, p);
  ChainValues out;
  out.gaussian_all =
      make_estimate(p, gaussian_raw(p, sorted.values().squaredNorm()), Method::closed_form, Rigor::exact());
  out.rademacher = best_sum_moment(sorted, Distribution::rademacher(), p,
                                   {options.samples, mix_seed(options.seed, 1)});
  out.exponential_tail =
      all_zero(split.tail)
          ? zero_moment(p)
          : best_sum_moment(CoefficientVector(split.tail), Distribution::sym_exponential(), p,
                            {options.samples, mix_seed(options.seed, 2)});
  out.gaussian_tail =
      make_estimate(p, gaussian_raw(p, split.tail.squaredNorm()), Method::closed_form, Rigor::exact());
  return out;
}

VerificationReport check_comparison_chain(const CoefficientVector& v, double p, std::uint64_t seed,
                                          std::size_t samples) {
  if (std::isnan(p) || p < 2.0) throw DomainError("check_comparison_chain: p must be >= 2");
  const ChainValues chain = comparison_chain(v, p, {samples, seed});
  VerificationReport report;
  report.check = "comp2";
  report.seed = seed;
  CaseTally tally;
  tally.link(Quantity::raw(chain.gaussian_all), Quantity::raw(chain.rademacher));
  tally.link(Quantity::raw(chain.rademacher), Quantity::raw(chain.exponential_tail));
  tally.link(Quantity::raw(chain.exponential_tail), Quantity::raw(chain.gaussian_tail));
  add_case(report, tally, to_std(v.values()), p);
  return report;
}

VerificationReport check_extremality(const CoefficientVector& v, double alpha,
                                     std::span<const double> ps, std::uint64_t seed,
                                     std::size_t samples) {
  for (double p : ps) {
    if (std::isnan(p) || p < 3.0) throw DomainError("check_extremality: p must be >= 3");
  }
  const Distribution x = Distribution::weibull_tail(alpha);
  std::vector<MomentEstimate> middle;
  Eigen::Index nonzero = 0;
  double single = 0.0;
  for (double a : v) {
    if (a != 0.0) {
      ++nonzero;
      single = a;
    }
  }
  if (nonzero <= 1) {
    for (double p : ps) {
      middle.push_back(make_estimate(p, std::pow(std::abs(single), p) * abs_moment(x, p),
                                     Method::closed_form, Rigor::exact()));
    }
  } else {
    middle = monte_carlo_sum_moments(v, x, ps, samples, mix_seed(seed, 3));
  }

  VerificationReport report;
  report.check = "extremality";
  report.seed = seed;
  const std::vector<double> witness = to_std(v.values());
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const double p = ps[k];
    const MomentEstimate rad =
        best_sum_moment(v, Distribution::rademacher(), p, {samples, mix_seed(seed, 4, k)});
    const MomentEstimate exp =
        best_sum_moment(v, Distribution::sym_exponential(), p, {samples, mix_seed(seed, 5, k)});
    CaseTally tally;
    tally.link(Quantity::raw(middle[k]), Quantity::raw(rad));
    tally.link(Quantity::raw(exp), Quantity::raw(middle[k]));
    add_case(report, tally, witness, p);
  }
  return report;
}

VerificationReport check_extremality(const CoefficientVector& v, double alpha, double p,
                                     std::uint64_t seed, std::size_t samples) {
  const double ps[] = {p};
  return check_extremality(v, alpha, ps, seed, samples);
}

VerificationReport check_bounds_sandwich(const CoefficientVector& v, const Distribution& d,
                                         double p, std::uint64_t seed, std::size_t samples) {
  const bool khintchine_family = d.kind() == Kind::rademacher || d.kind() == Kind::sym_exponential;
  if (std::isnan(p) || p < (khintchine_family ? 2.0 : 3.0)) {
    throw DomainError("check_bounds_sandwich: p below the range of every applicable bound");
  }
  const CoefficientVector sorted = rearrange(v);
  const MomentEstimate ref = best_sum_moment(sorted, d, p, {samples, mix_seed(seed, 6)});
  const Quantity norm = Quantity::norm(ref);

  VerificationReport report;
  report.check = "sandwich";
  report.seed = seed;
  CaseTally tally;
  auto sandwich = [&](const BoundInterval& bound, const Quantity& endpoint_uncertainty) {
    Quantity lower = endpoint_uncertainty, upper = endpoint_uncertainty;
    lower.value = bound.lower;
    upper.value = bound.upper;
    tally.link(upper, norm);
    tally.link(norm, lower);
  };

  if (d.kind() == Kind::rademacher) {
    sandwich(rademacher_bounds(sorted, p), {});
    sandwich(khintchine_bounds(sorted, p), {});
    sandwich(comparison_bounds(sorted, p), {});
  } else if (d.kind() == Kind::sym_exponential) {
    sandwich(exponential_bounds(sorted, p), {});
  }
  if (p >= 3.0) {
    const Eigen::VectorXd head = logconcave_head(sorted, p);
    const MomentEstimate head_norm =
        all_zero(head) ? zero_moment(p)
                       : best_sum_moment(CoefficientVector(head), d, p, {samples, mix_seed(seed, 7)});
    Quantity head_unc = Quantity::norm(head_norm);
    head_unc.value = 0.0;
    sandwich(logconcave_bounds(sorted, d, p, head_norm), head_unc);

    sandwich(gaussian_approx_gap(sorted, p), {});
    // Signed form: p‖a‖_∞ >= |‖S‖_p - γ_p‖a‖_2|.
    Quantity gap = norm;
    gap.value = std::abs(ref.value - gamma_p(p) * symmoments::norm(sorted, 2.0));
    tally.link(Quantity::exact(p * symmoments::norm(sorted, kInfinity)), gap);
  }
  add_case(report, tally, to_std(v.values()), p);
  return report;
}

VerificationReport check_p24_comparison(const CoefficientVector& v, double p, std::uint64_t seed,
                                        std::size_t samples) {
  if (std::isnan(p) || p < 2.0 || p > 4.0) {
    throw DomainError("check_p24_comparison: p must lie in [2, 4]");
  }
  if (!is_rearranged(v)) {
    throw DomainError("check_p24_comparison: coefficients must be nonincreasing in absolute value");
  }
  const MomentEstimate lhs =
      best_sum_moment(v, Distribution::rademacher(), p, {samples, mix_seed(seed, 8)});
  const Eigen::VectorXd rest = v.values().tail(v.size() - 1);
  const MomentEstimate rhs =
      all_zero(rest) ? zero_moment(p)
                     : best_sum_moment(CoefficientVector(rest), Distribution::sym_exponential(), p,
                                       {samples, mix_seed(seed, 9)});
  VerificationReport report;
  report.check = "comp1";
  report.seed = seed;
  CaseTally tally;
  tally.link(Quantity::raw(lhs), Quantity::raw(rhs));
  add_case(report, tally, to_std(v.values()), p);
  return report;
}

VerificationReport check_recursion_identity(std::uint64_t seed, std::size_t cases) {
  constexpr double kOrders[] = {2.5, 3.0, 4.7, 6.0};
  constexpr double kTolerance = 1e-8;
  return run_cases("rec1", seed, cases, [&](std::size_t i, VerificationReport& report) {
    RandomStream stream(seed, mix_seed(check_tag("rec1"), i));
    const double a = 6.0 * stream.uniform() - 3.0;
    const double b = 6.0 * stream.uniform() - 3.0;
    const double p = kOrders[i % 4];
    const Distribution e = Distribution::sym_exponential();
    // E|a𝓔+b|^q = E|b + a𝓔|^q by direct quadrature on both sides.
    const double direct = single_moment_quadrature(e, b, a, p);
    const double lower = single_moment_quadrature(e, b, a, p - 2.0);
    const double identity = std::pow(std::abs(b), p) + 0.5 * p * (p - 1.0) * a * a * lower;
    const double engine = single_moment_exponential(a, b, p);
    const double err_identity = std::abs(direct - identity) / std::max(direct, identity);
    const double err_engine = std::abs(direct - engine) / std::max(direct, engine);
    CaseTally tally;
    for (double err : {err_identity, err_engine}) {
      const double margin = kTolerance - err;
      tally.absorb(margin >= 0.0 ? Outcome::pass : Outcome::violation, margin);
    }
    const double witness[] = {a, b};
    add_case(report, tally, witness, p);
  });
}

VerificationReport check_rademacher_recursion_bound(std::uint64_t seed, std::size_t cases) {
  return run_cases("rec2", seed, cases, [&](std::size_t i, VerificationReport& report) {
    double a = 1.0, b = 1.0, p = 3.0;
    if (i > 0) {
      RandomStream stream(seed, mix_seed(check_tag("rec2"), i));
      a = 6.0 * stream.uniform() - 3.0;
      b = 6.0 * stream.uniform() - 3.0;
      p = 3.0 + 7.0 * stream.uniform();
    }
    const double larger = single_moment_rademacher(a, b, p);
    const double smaller =
        std::pow(std::abs(b), p) + 0.5 * p * (p - 1.0) * a * a * std::pow(std::abs(b), p - 2.0);
    CaseTally tally;
    tally.link(Quantity::exact(larger), Quantity::exact(smaller));
    const double witness[] = {a, b};
    add_case(report, tally, witness, p);
  });
}

RatioReport check_dual_norm_ratio(const CoefficientVector& v, const Distribution& d, double p,
                                  std::uint64_t seed, std::size_t samples, double band_low,
                                  double band_high) {
  const CoefficientVector sorted = rearrange(v);
  const Eigen::VectorXd head = logconcave_head(sorted, p);
  RatioReport out;
  out.report.check = "gk_ratio";
  out.report.seed = seed;
  CaseTally tally;
  double ratio = 1.0;
  if (!all_zero(head)) {
    const CoefficientVector head_vec(head);
    const MomentEstimate head_norm = best_sum_moment(head_vec, d, p, {samples, mix_seed(seed, 10)});
    const std::vector<OrliczFunction> m(static_cast<std::size_t>(head.size()), OrliczFunction(d));
    ratio = head_norm.value / gk_dual_norm(head_vec, m, p);
  }
  const double margin = std::min(std::log(ratio / band_low), std::log(band_high / ratio));
  tally.absorb(margin >= 0.0 ? Outcome::pass : Outcome::violation, margin);
  add_case(out.report, tally, to_std(v.values()), p);
  out.min_ratio = out.max_ratio = ratio;
  return out;
}

CoefficientVector sample_coefficients(RandomStream& stream, Eigen::Index n) {
  if (n < 1) throw DomainError("sample_coefficients: n must be >= 1");
  Eigen::VectorXd a(n);
  switch (stream.bits() % 3) {
    case 0:
      for (Eigen::Index i = 0; i < n; ++i) a[i] = 2.0 * stream.uniform() - 1.0;
      break;
    case 1: {
      const double r = 0.2 + 0.75 * stream.uniform();
      for (Eigen::Index i = 0; i < n; ++i) a[i] = stream.sign() * std::pow(r, static_cast<double>(i));
      break;
    }
    default:
      for (Eigen::Index i = 0; i < n; ++i) a[i] = 0.4 * stream.uniform() - 0.2;
      a[0] = stream.sign() * (2.0 + 3.0 * stream.uniform());
      break;
  }
  for (Eigen::Index i = n - 1; i > 0; --i) {
    std::swap(a[i], a[static_cast<Eigen::Index>(stream.bits() % static_cast<std::uint64_t>(i + 1))]);
  }
  return CoefficientVector(std::move(a));
}

// Counterexample search --------------------------------------------------------

namespace {

struct Candidate {
  std::vector<double> a;
  double p = 3.0;
  double t = 0.0;
};

struct Evaluation {
  double margin = kNaN;  // NaN when no exact engine applies
  double slack = kNumericalSlack;
};

double pick(RandomStream& stream, std::span<const double> grid) {
  return grid[static_cast<std::size_t>(stream.bits() % grid.size())];
}

// Both sides zero is a vacuous link; keep it from steering the search.
double relative_margin(const Quantity& larger, const Quantity& smaller, double& slack) {
  double m = 0.0;
  classify(larger, smaller, m);
  const double scale = std::max(std::abs(larger.value), std::abs(smaller.value));
  if (scale == 0.0) return kInfinity;
  slack = std::max(slack, kNumericalSlack + (larger.tolerance + smaller.tolerance) / scale);
  return m;
}

Evaluation evaluate(const std::string& check, const Candidate& c) {
  Evaluation out;
  const CoefficientVector v(std::span<const double>(c.a));
  const double p = c.p;
  if (check == "cos_product") {
    const CoefficientVector sorted = rearrange(v);
    const double t_grid[] = {c.t};
    out.margin = check_cos_product(sorted, t_grid).worst_margin;
    out.slack = kCosProductSlack;
    return out;
  }
  if (check == "rec2") {
    const double a = c.a[0], b = c.a.size() > 1 ? c.a[1] : 1.0;
    const double larger = single_moment_rademacher(a, b, p);
    const double smaller =
        std::pow(std::abs(b), p) + 0.5 * p * (p - 1.0) * a * a * std::pow(std::abs(b), p - 2.0);
    out.margin = relative_margin(Quantity::exact(larger), Quantity::exact(smaller), out.slack);
    return out;
  }
  const CoefficientVector sorted = rearrange(v);
  if (check == "comp2") {
    const HeadTail split = head_tail_split(sorted, p);
    const auto rad = exact_sum_moment(sorted, Distribution::rademacher(), p);
    std::optional<MomentEstimate> tail =
        all_zero(split.tail) ? zero_moment(p)
                             : exact_sum_moment(CoefficientVector(split.tail), Distribution::sym_exponential(), p);
    if (!rad || !tail) return out;
    const Quantity all = Quantity::exact(gaussian_raw(p, sorted.values().squaredNorm()));
    const Quantity gt = Quantity::exact(gaussian_raw(p, split.tail.squaredNorm()));
    out.margin = std::min({relative_margin(all, Quantity::raw(*rad), out.slack),
                           relative_margin(Quantity::raw(*rad), Quantity::raw(*tail), out.slack),
                           relative_margin(Quantity::raw(*tail), gt, out.slack)});
    return out;
  }
  if (check == "comp1") {
    const auto lhs = exact_sum_moment(sorted, Distribution::rademacher(), p);
    const Eigen::VectorXd rest = sorted.values().tail(sorted.size() - 1);
    std::optional<MomentEstimate> rhs =
        all_zero(rest) ? zero_moment(p)
                       : exact_sum_moment(CoefficientVector(rest), Distribution::sym_exponential(), p);
    if (!lhs || !rhs) return out;
    out.margin = relative_margin(Quantity::raw(*lhs), Quantity::raw(*rhs), out.slack);
    return out;
  }
  const bool rademacher = check == "estrad" || (check == "gauss_gap" && c.t < 0.5);
  const Distribution d = rademacher ? Distribution::rademacher() : Distribution::sym_exponential();
  const auto ref = exact_sum_moment(sorted, d, p);
  if (!ref) return out;
  const Quantity norm = Quantity::norm(*ref);
  if (check == "estrad" || check == "estexp") {
    const BoundInterval b = check == "estrad" ? rademacher_bounds(sorted, p) : exponential_bounds(sorted, p);
    out.margin = std::min(relative_margin(Quantity::exact(b.upper), norm, out.slack),
                          relative_margin(norm, Quantity::exact(b.lower), out.slack));
    return out;
  }
  if (check == "gauss_gap") {
    Quantity gap = norm;
    gap.value = std::abs(ref->value - gamma_p(p) * symmoments::norm(sorted, 2.0));
    out.margin = relative_margin(Quantity::exact(p * symmoments::norm(sorted, kInfinity)), gap, out.slack);
    return out;
  }
  throw DomainError("search_counterexamples: unknown check '" + check + "'");
}

Candidate random_candidate(const SearchConfig& config, std::span<const double> p_grid,
                           RandomStream& stream) {
  Candidate c;
  const auto span = static_cast<std::uint64_t>(config.n_max - config.n_min + 1);
  Eigen::Index n = config.n_min + static_cast<Eigen::Index>(stream.bits() % span);
  if (config.check == "rec2") n = 2;
  const CoefficientVector v = sample_coefficients(stream, n);
  c.a.assign(v.begin(), v.end());
  if (config.check == "rec2") {
    c.a = {6.0 * stream.uniform() - 3.0, 6.0 * stream.uniform() - 3.0};
  }
  c.p = pick(stream, p_grid);
  const double a1 = std::max(1e-3, rearrange(v)[0]);
  c.t = config.check == "cos_product" ? 20.0 * stream.uniform() / a1 : stream.uniform();
  return c;
}

Candidate perturb(const Candidate& c, std::span<const double> p_grid, double step,
                  RandomStream& stream, bool moves_t) {
  Candidate next = c;
  const std::size_t slots = next.a.size() + (moves_t ? 1 : 0);
  const auto j = static_cast<std::size_t>(stream.bits() % slots);
  if (j == next.a.size()) {
    next.t = std::max(0.0, next.t + step * (1.0 + next.t) * stream.normal());
  } else {
    next.a[j] += step * (std::abs(next.a[j]) + 0.1) * stream.normal();
  }
  if (stream.uniform() < 0.1) next.p = pick(stream, p_grid);
  return next;
}

}  // namespace

std::span<const std::string> search_checks() {
  static const std::array<std::string, 7> kChecks = {"cos_product", "comp2", "comp1", "rec2",
                                                     "estrad", "estexp", "gauss_gap"};
  return kChecks;
}

VerificationReport search_counterexamples(const SearchConfig& config) {
  if (config.iterations < 1) throw DomainError("search_counterexamples: iterations must be >= 1");
  if (config.n_min < 1 || config.n_max < config.n_min) {
    throw DomainError("search_counterexamples: need 1 <= n_min <= n_max");
  }
  if (std::find(search_checks().begin(), search_checks().end(), config.check) == search_checks().end()) {
    throw DomainError("search_counterexamples: unknown check '" + config.check + "'");
  }
  // Restrict the p grid to each inequality's range.
  std::vector<double> grid;
  for (double p : config.p_grid) {
    const bool ok = config.check == "comp1" ? (p >= 2.0 && p <= 4.0)
                    : (config.check == "rec2" || config.check == "gauss_gap") ? p >= 3.0
                    : config.check == "cos_product" ? true
                                                    : p >= 2.0;
    if (ok) grid.push_back(p);
  }
  if (grid.empty()) throw DomainError("search_counterexamples: no p in the grid fits check '" + config.check + "'");

  VerificationReport report;
  report.check = "search:" + config.check;
  report.seed = config.seed;
  RandomStream stream(config.seed, check_tag(config.check));
  constexpr std::size_t kRestartEvery = 100;
  const bool moves_t = config.check == "cos_product" || config.check == "gauss_gap";

  Candidate current;
  double current_margin = kInfinity;
  double step = 0.5;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    Candidate trial;
    if (it % kRestartEvery == 0) {
      trial = random_candidate(config, grid, stream);
      current_margin = kInfinity;
      step = 0.5;
    } else {
      trial = perturb(current, grid, step, stream, moves_t);
    }
    const Evaluation e = evaluate(config.check, trial);
    CaseTally tally;
    if (std::isnan(e.margin)) {
      tally.absorb(Outcome::inconclusive, kInfinity);
    } else {
      tally.absorb(e.margin >= -e.slack ? Outcome::pass : Outcome::violation, e.margin);
    }
    const bool is_cos = config.check == "cos_product";
    add_case(report, tally, trial.a, is_cos ? kNaN : trial.p, is_cos ? trial.t : kNaN);
    if (!std::isnan(e.margin) && e.margin < current_margin) {
      current = trial;
      current_margin = e.margin;
    } else {
      step = std::max(step * 0.9, 1e-4);
    }
  }
  return report;
}

// Suite ------------------------------------------------------------------------

std::vector<double> default_t_grid() {
  std::vector<double> grid;
  grid.reserve(100'001);
  for (int k = 0; k <= 100'000; ++k) grid.push_back(k * 1e-3);
  return grid;
}

std::span<const std::string> suite_checks() {
  static const std::array<std::string, 11> kChecks = {
      "cos_product", "rec1", "rec2", "comp1", "comp2", "extremality",
      "estrad", "estexp", "logconc", "gauss_gap", "gk_ratio"};
  return kChecks;
}

namespace {

CoefficientVector random_vector(std::uint64_t seed, std::string_view check, std::size_t index,
                                Eigen::Index n_max) {
  RandomStream stream(seed, mix_seed(check_tag(check), index));
  const Eigen::Index n = 1 + static_cast<Eigen::Index>(stream.bits() % static_cast<std::uint64_t>(n_max));
  return sample_coefficients(stream, n);
}

VerificationReport suite_check(const std::string& check, const SuiteConfig& config) {
  const std::uint64_t seed = config.seed;
  const std::size_t cases = config.cases;
  const std::size_t samples = config.samples;
  const std::size_t mc_cases = std::max<std::size_t>(1, cases / 5);

  if (check == "cos_product") {
    const std::vector<double> grid = default_t_grid();
    VerificationReport report = run_cases(check, seed, 10 + cases, [&](std::size_t i, VerificationReport& r) {
      const CoefficientVector v = i < 10 ? CoefficientVector(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(i) + 1))
                                         : rearrange(random_vector(seed, check, i, 8));
      r.merge(check_cos_product(v, grid));
    });
    // 10⁴ random (v, t) pairs with t in [0, 10⁴].
    report.merge(run_cases(check, seed, 10'000, [&](std::size_t i, VerificationReport& r) {
      RandomStream stream(seed, mix_seed(check_tag("cos_product_t"), i));
      const Eigen::Index n = 1 + static_cast<Eigen::Index>(stream.bits() % 8);
      const CoefficientVector v = rearrange(sample_coefficients(stream, n));
      const double t[] = {1e4 * stream.uniform()};
      r.merge(check_cos_product(v, t));
    }));
    return report;
  }
  if (check == "rec1") return check_recursion_identity(seed, 4 * cases);
  if (check == "rec2") return check_rademacher_recursion_bound(seed, 4 * cases);
  if (check == "comp1" || check == "comp2") {
    static constexpr double kComp1[] = {2.0, 2.5, 3.0, 3.5, 4.0};
    static constexpr double kComp2[] = {2.0, 2.5, 3.0, 4.0, 6.0};
    const std::span<const double> ps = check == "comp1" ? std::span<const double>(kComp1)
                                                        : std::span<const double>(kComp2);
    return run_cases(check, seed, cases * ps.size(), [&](std::size_t i, VerificationReport& r) {
      const CoefficientVector v = random_vector(seed, check, i / ps.size(), 8);
      const double p = ps[i % ps.size()];
      const std::uint64_t case_seed = mix_seed(seed, check_tag(check), i);
      r.merge(check == "comp1" ? check_p24_comparison(rearrange(v), p, case_seed, samples)
                               : check_comparison_chain(v, p, case_seed, samples));
    });
  }
  if (check == "extremality") {
    static constexpr double kAlphas[] = {1.0, 1.5, 2.0, 3.0};
    static constexpr double kOrders[] = {3.0, 4.0, 6.0};
    return run_cases(check, seed, 4 * mc_cases, [&](std::size_t i, VerificationReport& r) {
      const CoefficientVector v = random_vector(seed, check, i / 4, 8);
      r.merge(check_extremality(v, kAlphas[i % 4], kOrders, mix_seed(seed, check_tag(check), i), samples));
    });
  }
  if (check == "estrad" || check == "estexp") {
    const Distribution d = check == "estrad" ? Distribution::rademacher() : Distribution::sym_exponential();
    const std::size_t orders = std::size(kDefaultPGrid);
    return run_cases(check, seed, cases * orders, [&](std::size_t i, VerificationReport& r) {
      const CoefficientVector v = random_vector(seed, check, i / orders, 8);
      VerificationReport part = check_bounds_sandwich(v, d, kDefaultPGrid[i % orders],
                                                      mix_seed(seed, check_tag(check), i), samples);
      part.check = check;
      r.merge(part);
    });
  }
  if (check == "logconc") {
    const std::array<Distribution, 4> laws = {Distribution::rademacher(), Distribution::sym_exponential(),
                                              Distribution::gaussian(), Distribution::weibull_tail(2.0)};
    static constexpr double kOrders[] = {3.0, 4.0, 6.0};
    return run_cases(check, seed, mc_cases * 12, [&](std::size_t i, VerificationReport& r) {
      const CoefficientVector v = random_vector(seed, check, i / 12, 8);
      VerificationReport part = check_bounds_sandwich(v, laws[(i / 3) % 4], kOrders[i % 3],
                                                      mix_seed(seed, check_tag(check), i), samples);
      part.check = check;
      r.merge(part);
    });
  }
  if (check == "gauss_gap") {
    // Flat vectors (1/√n)(1, ..., 1) where the Gaussian approximation bites.
    static constexpr Eigen::Index kLengths[] = {25, 100};
    static constexpr double kAlphas[] = {1.0, 2.0};
    static constexpr double kOrders[] = {3.0, 4.0};
    return run_cases(check, seed, 8, [&](std::size_t i, VerificationReport& r) {
      const Eigen::Index n = kLengths[i / 4];
      const CoefficientVector v(Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))));
      VerificationReport part =
          check_bounds_sandwich(v, Distribution::weibull_tail(kAlphas[(i / 2) % 2]), kOrders[i % 2],
                                mix_seed(seed, check_tag(check), i), samples);
      part.check = check;
      r.merge(part);
    });
  }
  if (check == "gk_ratio") {
    const std::array<Distribution, 3> laws = {Distribution::rademacher(), Distribution::sym_exponential(),
                                              Distribution::gaussian()};
    static constexpr double kOrders[] = {3.0, 4.0, 6.0};
    return run_cases(check, seed, cases * 9, [&](std::size_t i, VerificationReport& r) {
      const CoefficientVector v = random_vector(seed, check, i / 9, 8);
      r.merge(check_dual_norm_ratio(v, laws[(i / 3) % 3], kOrders[i % 3],
                                    mix_seed(seed, check_tag(check), i), samples)
                  .report);
    });
  }
  if (check.rfind("search:", 0) == 0) {
    SearchConfig sc;
    sc.check = check.substr(7);
    sc.n_max = 8;
    sc.iterations = config.search_iterations;
    sc.seed = seed;
    return search_counterexamples(sc);
  }
  throw DomainError("unknown check '" + check + "'");
}

}  // namespace

std::vector<VerificationReport> run_suite(const SuiteConfig& config, std::span<const std::string> checks) {
  std::vector<std::string> names;
  if (checks.empty()) {
    names.assign(suite_checks().begin(), suite_checks().end());
    for (const auto& s : search_checks()) names.push_back("search:" + s);
  } else {
    names.assign(checks.begin(), checks.end());
  }
  std::vector<VerificationReport> out;
  out.reserve(names.size());
  for (const auto& name : names) out.push_back(suite_check(name, config));
  return out;
}

}  // namespace symmoments
