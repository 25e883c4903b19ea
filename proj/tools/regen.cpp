#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "regen/cli.hpp"
#include "regen/errors.hpp"

namespace {

using regen::Rational;
using namespace regen::cli;

struct Common {
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::int64_t d = 0;
  std::string alpha = "1";
  std::string out;
};

void add_triple(CLI::App* cmd, Common& c) {
  cmd->add_option("--n", c.n, "node count")->required();
  cmd->add_option("--k", c.k, "reconstruction degree")->required();
  cmd->add_option("--d", c.d, "repair degree")->required();
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return ExitCode::ok;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text) || !file.flush()) {
    std::cerr << "regen: cannot write " << path << '\n';
    return ExitCode::io_failure;
  }
  return ExitCode::ok;
}

std::vector<Rational> parse_rationals(const std::vector<std::string>& texts) {
  std::vector<Rational> out;
  for (const auto& t : texts) out.push_back(Rational::parse(t));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regenerating-code tradeoff curves and verified code constructions"};
  app.require_subcommand(1);

  Common curve_args;
  std::size_t samples = 99;
  auto* curve = app.add_subcommand("curve", "tradeoff table as CSV");
  add_triple(curve, curve_args);
  curve->add_option("--alpha", curve_args.alpha, "node size, p/q accepted");
  curve->add_option("--samples", samples, "evenly spaced gamma values")->check(CLI::Range(2, 1000000));
  curve->add_option("--out", curve_args.out, "output path (stdout if omitted)");

  std::string recipe;
  std::string construct_out;
  std::string code_out;
  std::uint64_t seed = 1;
  std::size_t trials = 2000;
  std::size_t budget = regen::constructions::kDefaultSymbolBudget;
  bool strict_basis = false;
  auto* construct = app.add_subcommand("construct", "build a code from a recipe and verify it");
  construct->add_option("recipe", recipe, "e.g. blowup_full(base(3,2))")->required();
  construct->add_option("--out", construct_out, "report path (stdout if omitted)");
  construct->add_option("--code-json", code_out, "also write the code's generators and repair rule");
  construct->add_option("--seed", seed, "seed for probe messages and sampling");
  construct->add_option("--samples", trials, "trials when a sweep is too large to exhaust");
  construct->add_option("--budget", budget, "ceiling on stored symbols")->envname("REGEN_BUDGET");
  construct->add_flag("--strict-basis", strict_basis, "also probe every unit message");

  Common asym_args;
  std::vector<std::string> s_values = {"1/4", "1/2", "1"};
  std::vector<std::int64_t> shifts = {100, 1000, 10000, 100000, 1000000};
  bool unrounded = false;
  auto* asym = app.add_subcommand("asymptotic", "P1/C along (n+M, k+M, d+M)");
  add_triple(asym, asym_args);
  asym->add_option("--s", s_values, "bandwidth fractions in (0,1]");
  asym->add_option("--M", shifts, "shifts");
  asym->add_flag("--unrounded", unrounded, "evaluate at the exact index instead of the nearest integer");
  asym->add_option("--out", asym_args.out, "output path (stdout if omitted)");

  Common cmp_args;
  std::string gamma;
  auto* compare = app.add_subcommand("compare", "capacity, timesharing and P1..P4 at one point");
  add_triple(compare, cmp_args);
  compare->add_option("--alpha", cmp_args.alpha, "node size, p/q accepted");
  compare->add_option("--gamma", gamma, "repair bandwidth, p/q accepted")->required();
  compare->add_option("--out", cmp_args.out, "output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ExitCode::ok : ExitCode::input_error;
  }

  try {
    if (curve->parsed()) {
      const regen::tradeoff::SystemParams p(curve_args.n, curve_args.k, curve_args.d);
      return emit(run_curve(p, Rational::parse(curve_args.alpha), samples), curve_args.out);
    }
    if (construct->parsed()) {
      regen::verify::Options options;
      options.seed = seed;
      options.trials = trials;
      options.strict_basis = strict_basis;
      const auto result = run_construct_verify(recipe, options, budget);
      int written = emit(result.report.dump(2) + "\n", construct_out);
      if (written == ExitCode::ok && !code_out.empty()) written = emit(regen::to_json(*result.code).dump(2) + "\n", code_out);
      if (written != ExitCode::ok) return written;
      return result.passed ? ExitCode::ok : ExitCode::verification_failed;
    }
    if (asym->parsed()) {
      AsymptoticRequest request;
      request.base = regen::tradeoff::SystemParams(asym_args.n, asym_args.k, asym_args.d);
      request.s_values = parse_rationals(s_values);
      request.shifts = shifts;
      request.rounding = unrounded ? regen::tradeoff::IndexRounding::exact : regen::tradeoff::IndexRounding::nearest;
      return emit(run_asymptotic(request), asym_args.out);
    }
    const regen::tradeoff::SystemParams p(cmp_args.n, cmp_args.k, cmp_args.d);
    const auto report = run_compare(p, Rational::parse(cmp_args.alpha), Rational::parse(gamma));
    return emit(report.dump(2) + "\n", cmp_args.out);
  } catch (const regen::ResourceError& e) {
    std::cerr << "regen: " << e.what() << '\n';
    return ExitCode::budget_exceeded;
  } catch (const std::invalid_argument& e) {
    std::cerr << "regen: " << e.what() << '\n';
    return ExitCode::input_error;
  } catch (const std::out_of_range& e) {
    std::cerr << "regen: " << e.what() << '\n';
    return ExitCode::input_error;
  } catch (const std::domain_error& e) {
    std::cerr << "regen: " << e.what() << '\n';
    return ExitCode::input_error;
  } catch (const std::exception& e) {
    std::cerr << "regen: " << e.what() << '\n';
    return ExitCode::io_failure;
  }
}
