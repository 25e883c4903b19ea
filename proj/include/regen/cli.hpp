#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "regen/constructions.hpp"
#include "regen/tradeoff.hpp"
#include "regen/verifier.hpp"

// The pieces behind the `regen` command: recipe parsing, curve and asymptotic
// tables, and construct-and-verify reports. Everything here returns text or
// JSON; tools/regen.cpp owns argument parsing, files and exit codes.
namespace regen::cli {

enum ExitCode : int { ok = 0, io_failure = 1, verification_failed = 2, input_error = 3, budget_exceeded = 4 };

/// Parsed form of e.g. "blowup_full(concat(base(3,2),base(3,2)))".
struct Recipe {
  std::string op;
  std::vector<Recipe> children;
  std::vector<std::int64_t> integers;

  std::string to_string() const;
};

/// Throws InputError with the offending position on malformed text.
Recipe parse_recipe(const std::string& text);

/// base(n,k) is Reed-Solomon over GF(2^8); base(n,k,m) picks GF(2^m).
DssPtr build(const Recipe& recipe, std::size_t symbol_budget);

/// Normalized (alpha = 1) operating point the tradeoff formulas predict for a recipe.
struct Prediction {
  tradeoff::SystemParams params{2, 1, 1};
  tradeoff::OperatingPoint point;
  std::string source;
  std::optional<std::int64_t> p1_index;  // set while the code sits on a P1 point
  bool msr_base = false;                 // a bare MSR base code
};

Prediction predict(const Recipe& recipe);

struct ConstructResult {
  DssPtr code;
  nlohmann::ordered_json report;
  bool passed = false;
};

ConstructResult run_construct_verify(const std::string& recipe, const verify::Options& options,
                                     std::size_t symbol_budget);

/// Table rows over gamma in [alpha, d alpha/(d-k+1)]: `samples` evenly spaced values
/// plus every point where P1 is realizable or P2, P3, P4 are defined.
std::string run_curve(const tradeoff::SystemParams& p, const Rational& alpha, std::size_t samples);

struct AsymptoticRequest {
  tradeoff::SystemParams base{2, 1, 1};
  std::vector<Rational> s_values;
  std::vector<std::int64_t> shifts;
  tradeoff::IndexRounding rounding = tradeoff::IndexRounding::nearest;
};

std::string run_asymptotic(const AsymptoticRequest& request);

/// Capacity, timesharing and P1..P4 at one (alpha, gamma); undefined entries are null.
nlohmann::ordered_json run_compare(const tradeoff::SystemParams& p, const Rational& alpha, const Rational& gamma);

}  // namespace regen::cli
