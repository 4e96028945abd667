#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symmoments/cli/records.hpp"
#include "symmoments/dists.hpp"
#include "symmoments/verify.hpp"

namespace symmoments::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Command { moment, bounds, verify, sweep, search };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view name);

enum ExitStatus : int { kExitOk = 0, kExitValidation = 1, kExitCapacity = 2, kExitViolation = 3 };

/// Invalid job field; `path` names it, e.g. "coefficients[2]" or "--p[1]".
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string path, const std::string& message)
      : std::invalid_argument(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct JobSpec {
  std::optional<Command> command;
  std::vector<double> coefficients;
  Kind kind = Kind::rademacher;
  std::optional<double> alpha;
  std::vector<double> p;
  /// Method wire names or "auto"; empty means "auto".
  std::vector<std::string> engines;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<Format> format;
  /// verify and search only.
  std::vector<std::string> checks;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> cases;
};

/// Parses a job document (one JSON object). Unknown fields are rejected.
JobSpec parse_job(std::string_view document);

/// Raw flag values; each present flag replaces the document field.
struct FlagOverrides {
  std::optional<std::string> command, coeffs, dist, alpha, p, engine, samples, seed, format, checks,
      iterations, cases;
};

void apply_flags(JobSpec& job, const FlagOverrides& flags);

/// Command-independent and command-specific field checks.
void validate(const JobSpec& job);

/// FNV-1a 64 of the canonical input fields, as 16 hex digits.
std::string inputs_digest(const JobSpec& job);

/// kExitViolation when any report has a violation, else kExitOk.
int status_for(std::span<const VerificationReport> reports);

/// Validates and runs the job, writing records to `out` only once every
/// record has been computed. Throws ValidationError, DomainError and
/// CapacityError; returns kExitViolation when a check found a violation.
int run(const JobSpec& job, std::ostream& out);

/// run() with errors mapped to exit statuses and diagnostics on `err`.
int execute(const JobSpec& job, std::ostream& out, std::ostream& err);

}  // namespace symmoments::cli
