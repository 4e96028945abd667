#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "symmoments/cli/job.hpp"

namespace cli = symmoments::cli;

namespace {

bool read_all(const std::string& path, std::string& text) {
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  text.assign(std::istreambuf_iterator<char>(in), {});
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moments and moment bounds for weighted sums of symmetric random variables"};
  app.set_version_flag("--version", std::string(cli::kVersion));

  cli::FlagOverrides flags;
  std::string job_path, out_path;
  auto opt = [&](const char* name, std::optional<std::string>& slot, const char* help) {
    app.add_option_function<std::string>(name, [&slot](const std::string& v) { slot = v; }, help);
  };
  opt("command", flags.command, "moment | bounds | verify | sweep | search");
  app.add_option("--job", job_path, "Job document (JSON file, or - for standard input)");
  opt("--coeffs", flags.coeffs, "Coefficients, comma separated");
  opt("--dist", flags.dist, "rademacher | symExponential | gaussian | weibullTail");
  opt("--alpha", flags.alpha, "Weibull tail exponent (weibullTail only)");
  opt("--p", flags.p, "Moment orders, comma separated");
  opt("--engine", flags.engine, "Engines, comma separated (moment only)");
  opt("--samples", flags.samples, "Monte Carlo sample count");
  opt("--seed", flags.seed, "Random seed (required for stochastic commands)");
  opt("--format", flags.format, "json | csv");
  opt("--checks", flags.checks, "Checks to run, comma separated (verify, search)");
  opt("--iterations", flags.iterations, "Search iterations per check");
  opt("--cases", flags.cases, "Random instances per verify check");
  app.add_option("--out", out_path, "Write records to this file instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitValidation;
  }

  cli::JobSpec job;
  try {
    if (!job_path.empty()) {
      std::string text;
      if (!read_all(job_path, text)) {
        std::cerr << "error: --job: cannot read '" << job_path << "'\n";
        return cli::kExitValidation;
      }
      job = cli::parse_job(text);
    }
    cli::apply_flags(job, flags);
  } catch (const cli::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitValidation;
  }

  std::ostringstream records;
  const int status = cli::execute(job, records, std::cerr);
  if (out_path.empty()) {
    std::cout << records.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << records.str();
    if (!out) {
      std::cerr << "error: --out: cannot write '" << out_path << "'\n";
      return cli::kExitValidation;
    }
  }
  return status;
}
