#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "regen/dss.hpp"

// Checks a concrete code against its contract: every k-subset decodes, every
// single-node repair is exact, and the measured node size, repair bandwidth
// and file size agree with a predicted operating point.
namespace regen::verify {

/// Above this many subsets (or repair pairs) exhaustive sweeps refuse to run.
inline constexpr std::size_t kExhaustiveLimit = 100'000;

enum class Strategy {
  automatic,   // exhaustive under the ceiling, sampled above it
  exhaustive,  // ResourceError above the ceiling
  sampled,
};

struct Options {
  Strategy strategy = Strategy::automatic;
  std::uint64_t seed = 1;
  std::size_t trials = 2000;
  /// Probe with every unit message in addition to the zero and random ones.
  bool strict_basis = false;
  std::size_t exhaustive_limit = kExhaustiveLimit;
};

struct SweepMode {
  bool exhaustive = true;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
};

struct ReconstructionResult {
  bool ok = true;
  std::optional<std::vector<NodeIndex>> counterexample;
  std::string failure;
  std::size_t checks = 0;
  SweepMode mode;
};

struct RepairRecord {
  NodeIndex failed = 0;
  std::vector<NodeIndex> helpers;
  BandwidthReport bandwidth;
};

struct RepairResult {
  bool ok = true;
  std::optional<std::pair<NodeIndex, std::vector<NodeIndex>>> counterexample;
  std::string failure;
  std::size_t checks = 0;
  SweepMode mode;
  /// Same BandwidthReport for every probe message.
  bool bandwidth_data_independent = true;
  std::vector<RepairRecord> records;
};

struct SymmetryResult {
  bool symmetric = true;
  /// Largest max-minus-min per-helper count over all recorded repairs.
  std::size_t max_deviation = 0;
};

struct Measurement {
  SymbolPoint measured;
  bool alpha_uniform = true;
  bool gamma_constant = true;
  /// Measured point equals the code's own closed form, symbol for symbol.
  bool declared_match = false;
  /// gamma/alpha and B/alpha agree exactly with the prediction's.
  bool match = false;
};

struct VerificationReport {
  std::string kind;
  SystemParams params{2, 1, 1};
  ReconstructionResult reconstruction;
  RepairResult repair;
  SymmetryResult symmetry;
  Measurement measurement;
  SymbolPoint declared;
  tradeoff::OperatingPoint predicted;
  std::string predicted_label;

  std::size_t checks_run() const { return reconstruction.checks + repair.checks; }
  /// Reconstruction and repair passed and the measured point matches both predictions.
  bool passed() const;
};

/// Zero message, two seeded random messages and, with strict_basis, every unit message.
std::vector<SymbolVector> probe_messages(const LinearDss& dss, const Options& options);

ReconstructionResult verify_reconstruction(const LinearDss& dss, const Options& options = {});
RepairResult verify_exact_repair(const LinearDss& dss, const Options& options = {});
SymmetryResult check_symmetric_repair(const std::vector<RepairRecord>& records);

/// Measured (alpha, gamma, B) from the node sizes and recorded repairs.
Measurement measure_and_compare(const LinearDss& dss, const RepairResult& repair,
                                const tradeoff::OperatingPoint& predicted);

/// All of the above; `predicted` defaults to the code's declared point.
VerificationReport verify(const LinearDss& dss, const Options& options = {},
                          std::optional<tradeoff::OperatingPoint> predicted = std::nullopt,
                          std::string predicted_label = "declared");

tradeoff::OperatingPoint to_operating_point(const SymbolPoint& point);

nlohmann::ordered_json to_json(const VerificationReport& report);

}  // namespace regen::verify
