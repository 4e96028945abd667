#include "symmoments/cli/job.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "symmoments/bounds.hpp"
#include "symmoments/errors.hpp"
#include "symmoments/summoments.hpp"
#include "symmoments/verify.hpp"

namespace symmoments::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMomentSamples = 1'000'000;
constexpr std::size_t kSuiteSamples = 200'000;
constexpr std::size_t kMinSamples = 10'000;
constexpr double kSearchPGrid[] = {2.5, 3.0, 4.0, 6.0};
constexpr Eigen::Index kSweepLengths[] = {2, 4, 8, 16};
constexpr std::string_view kFamilies[] = {"flat", "geometric", "spiked"};

std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Document fields ---------------------------------------------------------------

double json_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ValidationError(path, "not a finite number");
  return x;
}

std::uint64_t json_count(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ValidationError(path, "expected a non-negative integer");
}

std::string json_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> json_numbers(const json& j, const std::string& path, bool allow_scalar) {
  if (allow_scalar && j.is_number()) return {json_number(j, path)};
  if (!j.is_array()) throw ValidationError(path, allow_scalar ? "expected a number or an array" : "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(json_number(j[i], indexed(path, i)));
  return out;
}

std::vector<std::string> json_strings(const json& j, const std::string& path) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) throw ValidationError(path, "expected a string or an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(json_string(j[i], indexed(path, i)));
  return out;
}

Kind kind_from(const std::string& name, const std::string& path) {
  if (auto k = parse_kind(name)) return *k;
  throw ValidationError(path, "unknown distribution '" + name +
                                  "' (expected rademacher, symExponential, gaussian or weibullTail)");
}

Command command_from(const std::string& name, const std::string& path) {
  if (auto c = parse_command(name)) return *c;
  throw ValidationError(path, "unknown command '" + name + "' (expected moment, bounds, verify, sweep or search)");
}

Format format_from(const std::string& name, const std::string& path) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw ValidationError(path, "unknown format '" + name + "' (expected json or csv)");
}

// Flag values ---------------------------------------------------------------------

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    out.push_back(first == std::string::npos ? "" : item.substr(first, last - first + 1));
  }
  return out;
}

double flag_number(const std::string& text, const std::string& path) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, x);
  if (res.ec != std::errc{} || res.ptr != end) throw ValidationError(path, "'" + text + "' is not a number");
  if (!std::isfinite(x)) throw ValidationError(path, "not a finite number");
  return x;
}

std::uint64_t flag_count(const std::string& text, const std::string& path) {
  std::uint64_t n = 0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, n);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ValidationError(path, "'" + text + "' is not a non-negative integer");
  }
  return n;
}

std::vector<double> flag_numbers(const std::string& text, const std::string& path) {
  std::vector<double> out;
  const auto items = split_list(text);
  for (std::size_t i = 0; i < items.size(); ++i) out.push_back(flag_number(items[i], indexed(path, i)));
  return out;
}

// Running ---------------------------------------------------------------------------

Distribution distribution_of(const JobSpec& job) {
  switch (job.kind) {
    case Kind::rademacher: return Distribution::rademacher();
    case Kind::sym_exponential: return Distribution::sym_exponential();
    case Kind::gaussian: return Distribution::gaussian();
    case Kind::weibull_tail: return Distribution::weibull_tail(*job.alpha);
  }
  throw std::logic_error("distribution_of: unknown kind");
}

Record header(const JobSpec& job, const std::string& digest) {
  Record r;
  r.add("command", std::string(to_string(*job.command)));
  r.add("version", std::string(kVersion));
  r.add("digest", digest);
  if (job.seed) r.add("seed", *job.seed);
  else r.add("seed", std::monostate{});
  return r;
}

bool is_even_integer(double p) { return p == std::floor(p) && std::fmod(p, 2.0) == 0.0 && p <= 1024.0; }

std::string describe(const JobSpec& job, double p) {
  std::string s = std::string(to_string(job.kind));
  if (job.alpha) s += "(alpha=" + format_number(*job.alpha) + ")";
  return s + " at p=" + format_number(p);
}

MomentEstimate run_engine(const JobSpec& job, const CoefficientVector& v, const Distribution& d,
                          double p, const std::string& engine, const std::string& path) {
  const std::size_t samples = job.samples.value_or(kMomentSamples);
  if (engine == "auto") {
    if (auto exact = exact_sum_moment(v, d, p)) return *exact;
    if (!job.seed) {
      throw ValidationError("seed", "required: no exact engine applies to " + describe(job, p) +
                                        ", so Monte Carlo is used");
    }
    return monte_carlo_sum_moment(v, d, p, samples, *job.seed);
  }
  const Method method = *parse_method(engine);
  auto unavailable = [&](const std::string& why) {
    return ValidationError(path, "engine '" + engine + "' " + why + " (" + describe(job, p) + ")");
  };
  try {
    switch (method) {
      case Method::enumeration:
        if (d.kind() != Kind::rademacher) throw unavailable("only applies to rademacher sums");
        return rademacher_sum_moment(v, p);
      case Method::partial_fractions:
        if (d.kind() != Kind::sym_exponential) throw unavailable("only applies to symExponential sums");
        return laplace_sum_moment_exact(v, p);
      case Method::haagerup:
        if (d.kind() != Kind::rademacher && d.kind() != Kind::sym_exponential) {
          throw unavailable("only applies to rademacher and symExponential sums");
        }
        if (!(p > 2.0 && p < 4.0)) throw unavailable("needs 2 < p < 4");
        return haagerup_moment(v, d.kind(), p);
      case Method::recursion:
        if (!is_even_integer(p)) throw unavailable("needs an even integer p");
        return even_moment_exact(v, d, static_cast<int>(p));
      case Method::closed_form:
        if (d.kind() != Kind::gaussian) throw unavailable("only applies to gaussian sums");
        return gaussian_sum_norm(v, p);
      case Method::monte_carlo:
        return monte_carlo_sum_moment(v, d, p, samples, *job.seed);
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const DomainError& e) {
    throw ValidationError(path, e.what());
  }
  throw std::logic_error("run_engine: unknown method");
}

void add_estimate(Record& r, const MomentEstimate& e) {
  r.add("method", std::string(to_string(e.method)));
  r.add("value", e.value);
  r.add("raw_moment", e.raw_moment);
  r.add("rigor", std::string(to_string(e.rigor.kind)));
  r.add("tolerance", e.rigor.tolerance);
  r.add("halfwidth", e.rigor.halfwidth);
  r.add("confidence", e.rigor.confidence);
  r.add("value_lower", e.value_lower());
  r.add("value_upper", e.value_upper());
}

using HeadNorm = std::function<MomentEstimate(const CoefficientVector&)>;

// Every interval that applies to (d, p), on a rearranged vector.
std::vector<BoundInterval> applicable_bounds(const CoefficientVector& sorted, const Distribution& d,
                                             double p, const HeadNorm& head_norm) {
  std::vector<BoundInterval> out;
  if (p >= 2.0 && d.kind() == Kind::rademacher) {
    out.push_back(rademacher_bounds(sorted, p));
    out.push_back(khintchine_bounds(sorted, p));
    out.push_back(comparison_bounds(sorted, p));
  }
  if (p >= 2.0 && d.kind() == Kind::sym_exponential) out.push_back(exponential_bounds(sorted, p));
  if (p >= 3.0) {
    const Eigen::VectorXd head = logconcave_head(sorted, p);
    const MomentEstimate h = head.cwiseAbs().maxCoeff() == 0.0
                                 ? make_estimate(p, 0.0, Method::closed_form, Rigor::exact())
                                 : head_norm(CoefficientVector(head));
    out.push_back(logconcave_bounds(sorted, d, p, h));
    out.push_back(gaussian_approx_gap(sorted, p));
  }
  return out;
}

HeadNorm head_norm_for(const JobSpec& job, const Distribution& d, double p, std::uint64_t stream) {
  return [&job, d, p, stream](const CoefficientVector& head) {
    if (auto exact = exact_sum_moment(head, d, p)) return *exact;
    if (!job.seed) {
      throw ValidationError("seed", "required: the head norm for " + describe(job, p) + " needs Monte Carlo");
    }
    return monte_carlo_sum_moment(head, d, p, job.samples.value_or(kSuiteSamples),
                                  mix_seed(*job.seed, stream));
  };
}

void add_report(Record& r, const VerificationReport& rep) {
  r.add("check", rep.check);
  r.add("cases", static_cast<std::uint64_t>(rep.cases));
  r.add("violations", static_cast<std::uint64_t>(rep.violations));
  r.add("ci_resolved", static_cast<std::uint64_t>(rep.ci_resolved));
  r.add("inconclusive", static_cast<std::uint64_t>(rep.inconclusive));
  r.add("worst_margin", rep.worst_margin);
  r.add("witness", rep.witness);
  r.add("witness_p", rep.witness_p);
  r.add("witness_t", rep.witness_t);
  r.add("passed", rep.passed());
}

Eigen::VectorXd family(std::string_view name, Eigen::Index n) {
  Eigen::VectorXd a(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (name == "flat") a[i] = 1.0 / std::sqrt(static_cast<double>(n));
    else if (name == "geometric") a[i] = std::pow(0.7, static_cast<double>(i));
    else a[i] = i == 0 ? 1.0 : 0.1;
  }
  return a;
}

bool known_check(const std::string& name, bool search_only) {
  const auto in = [&](std::span<const std::string> list, const std::string& s) {
    return std::find(list.begin(), list.end(), s) != list.end();
  };
  if (search_only) return in(search_checks(), name);
  if (in(suite_checks(), name)) return true;
  return name.rfind("search:", 0) == 0 && in(search_checks(), name.substr(7));
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::moment: return "moment";
    case Command::bounds: return "bounds";
    case Command::verify: return "verify";
    case Command::sweep: return "sweep";
    case Command::search: return "search";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::moment, Command::bounds, Command::verify, Command::sweep, Command::search}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

JobSpec parse_job(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ValidationError("$", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("$", "job document must be a JSON object");

  JobSpec job;
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      job.command = command_from(json_string(value, key), key);
    } else if (key == "coefficients") {
      job.coefficients = json_numbers(value, key, false);
    } else if (key == "distribution") {
      if (value.is_string()) {
        job.kind = kind_from(value.get<std::string>(), key);
      } else if (value.is_object()) {
        if (!value.contains("kind")) throw ValidationError("distribution.kind", "required");
        for (const auto& [k, v] : value.items()) {
          const std::string path = "distribution." + k;
          if (k == "kind") job.kind = kind_from(json_string(v, path), path);
          else if (k == "alpha") job.alpha = json_number(v, path);
          else throw ValidationError(path, "unknown field");
        }
      } else {
        throw ValidationError(key, "expected a kind name or an object {kind, alpha}");
      }
    } else if (key == "alpha") {
      job.alpha = json_number(value, key);
    } else if (key == "p") {
      job.p = json_numbers(value, key, true);
    } else if (key == "engines") {
      job.engines = json_strings(value, key);
    } else if (key == "samples") {
      job.samples = json_count(value, key);
    } else if (key == "seed") {
      job.seed = json_count(value, key);
    } else if (key == "format") {
      job.format = format_from(json_string(value, key), key);
    } else if (key == "checks") {
      job.checks = json_strings(value, key);
    } else if (key == "iterations") {
      job.iterations = json_count(value, key);
    } else if (key == "cases") {
      job.cases = json_count(value, key);
    } else {
      throw ValidationError(key, "unknown field");
    }
  }
  return job;
}

void apply_flags(JobSpec& job, const FlagOverrides& flags) {
  if (flags.command) job.command = command_from(*flags.command, "command");
  if (flags.coeffs) job.coefficients = flag_numbers(*flags.coeffs, "--coeffs");
  if (flags.dist) job.kind = kind_from(*flags.dist, "--dist");
  if (flags.alpha) job.alpha = flag_number(*flags.alpha, "--alpha");
  if (flags.p) job.p = flag_numbers(*flags.p, "--p");
  if (flags.engine) job.engines = split_list(*flags.engine);
  if (flags.samples) job.samples = flag_count(*flags.samples, "--samples");
  if (flags.seed) job.seed = flag_count(*flags.seed, "--seed");
  if (flags.format) job.format = format_from(*flags.format, "--format");
  if (flags.checks) job.checks = split_list(*flags.checks);
  if (flags.iterations) job.iterations = flag_count(*flags.iterations, "--iterations");
  if (flags.cases) job.cases = flag_count(*flags.cases, "--cases");
}

void validate(const JobSpec& job) {
  if (!job.command) throw ValidationError("command", "required");
  const Command cmd = *job.command;

  if (job.kind == Kind::weibull_tail) {
    if (!job.alpha) throw ValidationError("alpha", "required for weibullTail");
    if (!(*job.alpha >= 1.0)) throw ValidationError("alpha", "must be >= 1 (log-concave tails)");
  } else if (job.alpha) {
    throw ValidationError("alpha", "only applies to weibullTail");
  }
  for (std::size_t i = 0; i < job.coefficients.size(); ++i) {
    if (!std::isfinite(job.coefficients[i])) throw ValidationError(indexed("coefficients", i), "not a finite number");
  }
  for (std::size_t i = 0; i < job.p.size(); ++i) {
    if (!(job.p[i] >= 1.0) || !std::isfinite(job.p[i])) throw ValidationError(indexed("p", i), "must be a finite number >= 1");
  }
  if (job.samples && *job.samples < kMinSamples) {
    throw ValidationError("samples", "must be >= " + std::to_string(kMinSamples));
  }
  if (job.iterations && *job.iterations < 1) throw ValidationError("iterations", "must be >= 1");
  if (job.cases && *job.cases < 1) throw ValidationError("cases", "must be >= 1");

  const bool uses_vector = cmd == Command::moment || cmd == Command::bounds;
  if (uses_vector) {
    if (job.coefficients.empty()) throw ValidationError("coefficients", "required and non-empty");
    if (job.p.empty()) throw ValidationError("p", "required and non-empty");
  } else if (!job.coefficients.empty()) {
    throw ValidationError("coefficients", "not used by " + std::string(to_string(cmd)));
  }
  if (cmd != Command::moment && !job.engines.empty()) {
    throw ValidationError("engines", "only used by moment");
  }
  for (std::size_t i = 0; i < job.engines.size(); ++i) {
    if (job.engines[i] != "auto" && !parse_method(job.engines[i])) {
      throw ValidationError(indexed("engines", i),
                            "unknown engine '" + job.engines[i] +
                                "' (expected auto, enumeration, partialFractions, haagerup, monteCarlo, "
                                "recursion or closedForm)");
    }
    if (job.engines[i] == "monteCarlo" && !job.seed) {
      throw ValidationError("seed", "required by the monteCarlo engine");
    }
  }
  const bool checked = cmd == Command::verify || cmd == Command::search;
  if (!checked) {
    if (!job.checks.empty()) throw ValidationError("checks", "only used by verify and search");
    if (job.iterations) throw ValidationError("iterations", "only used by verify and search");
  }
  if (cmd != Command::verify && job.cases) throw ValidationError("cases", "only used by verify");
  if (checked || cmd == Command::sweep) {
    if (!job.seed) throw ValidationError("seed", "required by " + std::string(to_string(cmd)));
  }
  if (cmd == Command::verify && !job.p.empty()) throw ValidationError("p", "not used by verify");
  for (std::size_t i = 0; i < job.checks.size(); ++i) {
    if (!known_check(job.checks[i], cmd == Command::search)) {
      throw ValidationError(indexed("checks", i), "unknown check '" + job.checks[i] + "'");
    }
  }
}

std::string inputs_digest(const JobSpec& job) {
  std::string canon;
  auto field = [&](std::string_view key, const std::string& value) {
    canon.append(key).append("=").append(value).append(";");
  };
  auto numbers = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_number(xs[i]);
    return s;
  };
  auto strings = [](const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i];
    return s;
  };
  auto opt = [](const auto& o) { return o ? std::to_string(*o) : std::string(); };
  field("command", job.command ? std::string(to_string(*job.command)) : "");
  field("coefficients", numbers(job.coefficients));
  field("distribution", std::string(to_string(job.kind)));
  field("alpha", job.alpha ? format_number(*job.alpha) : "");
  field("p", numbers(job.p));
  field("engines", strings(job.engines));
  field("samples", opt(job.samples));
  field("seed", opt(job.seed));
  field("checks", strings(job.checks));
  field("iterations", opt(job.iterations));
  field("cases", opt(job.cases));

  std::uint64_t h = 1469598103934665603ULL;
  for (char c : canon) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int status_for(std::span<const VerificationReport> reports) {
  for (const auto& r : reports) {
    if (!r.passed()) return kExitViolation;
  }
  return kExitOk;
}

int run(const JobSpec& job, std::ostream& out) {
  validate(job);
  const std::string digest = inputs_digest(job);
  const Command cmd = *job.command;
  std::vector<Record> records;
  std::vector<VerificationReport> reports;

  switch (cmd) {
    case Command::moment: {
      const CoefficientVector v(std::span<const double>(job.coefficients));
      const Distribution d = distribution_of(job);
      const std::vector<std::string> engines = job.engines.empty() ? std::vector<std::string>{"auto"} : job.engines;
      for (double p : job.p) {
        for (std::size_t i = 0; i < engines.size(); ++i) {
          const MomentEstimate e = run_engine(job, v, d, p, engines[i], indexed("engines", i));
          Record r = header(job, digest);
          r.add("p", p);
          r.add("engine", engines[i]);
          add_estimate(r, e);
          records.push_back(std::move(r));
        }
      }
      break;
    }
    case Command::bounds: {
      const CoefficientVector sorted = rearrange(CoefficientVector(std::span<const double>(job.coefficients)));
      const Distribution d = distribution_of(job);
      for (std::size_t j = 0; j < job.p.size(); ++j) {
        const double p = job.p[j];
        const auto intervals = applicable_bounds(sorted, d, p, head_norm_for(job, d, p, j));
        if (intervals.empty()) {
          throw ValidationError(indexed("p", j), "no bound applies to " + describe(job, p));
        }
        for (const BoundInterval& b : intervals) {
          Record r = header(job, digest);
          r.add("p", p);
          r.add("source", std::string(to_string(b.source)));
          r.add("lower", b.lower);
          r.add("upper", b.upper);
          r.add("width", b.width());
          records.push_back(std::move(r));
        }
      }
      break;
    }
    case Command::verify: {
      SuiteConfig config;
      config.seed = *job.seed;
      if (job.samples) config.samples = *job.samples;
      if (job.cases) config.cases = *job.cases;
      if (job.iterations) config.search_iterations = *job.iterations;
      reports = run_suite(config, job.checks);
      for (const auto& rep : reports) {
        Record r = header(job, digest);
        add_report(r, rep);
        records.push_back(std::move(r));
      }
      break;
    }
    case Command::search: {
      std::vector<std::string> checks = job.checks;
      if (checks.empty()) checks.assign(search_checks().begin(), search_checks().end());
      for (const auto& check : checks) {
        SearchConfig config;
        config.check = check;
        config.n_max = 8;
        if (!job.p.empty()) config.p_grid = job.p;
        else config.p_grid.assign(std::begin(kSearchPGrid), std::end(kSearchPGrid));
        if (job.iterations) config.iterations = *job.iterations;
        config.seed = *job.seed;
        reports.push_back(search_counterexamples(config));
        Record r = header(job, digest);
        add_report(r, reports.back());
        records.push_back(std::move(r));
      }
      break;
    }
    case Command::sweep: {
      const Distribution d = distribution_of(job);
      std::vector<double> ps = job.p;
      if (ps.empty()) ps.assign(std::begin(kDefaultPGrid), std::end(kDefaultPGrid));
      std::uint64_t row = 0;
      for (std::string_view fam : kFamilies) {
        for (Eigen::Index n : kSweepLengths) {
          const CoefficientVector v = rearrange(CoefficientVector(family(fam, n)));
          for (double p : ps) {
            ++row;
            const MomentEstimate ref =
                best_sum_moment(v, d, p, {job.samples.value_or(kSuiteSamples), mix_seed(*job.seed, row)});
            for (const BoundInterval& b : applicable_bounds(v, d, p, head_norm_for(job, d, p, row << 32))) {
              Record r = header(job, digest);
              r.add("family", std::string(fam));
              r.add("n", static_cast<std::uint64_t>(n));
              r.add("p", p);
              r.add("method", std::string(to_string(ref.method)));
              r.add("norm", ref.value);
              r.add("norm_lower", ref.value_lower());
              r.add("norm_upper", ref.value_upper());
              r.add("source", std::string(to_string(b.source)));
              r.add("lower", b.lower);
              r.add("upper", b.upper);
              const double slack = kNumericalSlack * std::max(b.upper, ref.value_upper());
              r.add("consistent", b.lower <= ref.value_upper() + slack && ref.value_lower() <= b.upper + slack);
              records.push_back(std::move(r));
            }
          }
        }
      }
      break;
    }
  }

  const Format format = job.format.value_or(cmd == Command::sweep ? Format::csv : Format::json);
  std::ostringstream buffer;
  RecordWriter writer(buffer, format);
  for (const Record& r : records) writer.write(r);
  out << buffer.str();
  return status_for(reports);
}

int execute(const JobSpec& job, std::ostream& out, std::ostream& err) {
  try {
    return run(job, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const QuadratureError& e) {
    err << "capacity: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace symmoments::cli
