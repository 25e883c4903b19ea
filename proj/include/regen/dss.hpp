#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "regen/gf.hpp"
#include "regen/tradeoff.hpp"

namespace regen {

using NodeIndex = std::size_t;
using gf::Symbol;
using gf::SymbolVector;
using tradeoff::SystemParams;

/// Symbols sent by each helper during one repair.
struct BandwidthReport {
  std::map<NodeIndex, std::size_t> per_helper;
  std::size_t total = 0;

  friend bool operator==(const BandwidthReport&, const BandwidthReport&) = default;
};

/// Integer (alpha, gamma, B) in field symbols, as promised by a code's closed form.
struct SymbolPoint {
  std::size_t alpha = 0;
  std::size_t gamma = 0;
  std::size_t file_size = 0;

  friend bool operator==(const SymbolPoint&, const SymbolPoint&) = default;
};

/// A linear exact-repair storage code over GF(2^m).
///
/// Node i stores G_i * message. Any k nodes reconstruct the message and any d
/// surviving nodes regenerate a lost node bit for bit. Repair is split into a
/// helper side (`helper_transfer`, which sees only that helper's own content)
/// and a newcomer side (`rebuild`, which sees only what the helpers sent), so
/// the symbols counted in a BandwidthReport are all the newcomer ever learns.
///
/// Node and subset index lists passed to the virtual hooks are strictly
/// increasing; the free functions below validate caller input before
/// dispatching.
class LinearDss {
 public:
  virtual ~LinearDss() = default;

  const SystemParams& params() const { return params_; }
  const gf::Field& field() const { return field_; }
  std::size_t node_count() const { return node_sizes_.size(); }
  std::size_t node_size(NodeIndex node) const { return node_sizes_.at(node); }
  const std::vector<std::size_t>& node_sizes() const { return node_sizes_; }
  std::size_t file_size() const { return file_size_; }
  /// Closed-form (alpha, gamma, B) this code claims; the verifier measures it independently.
  const SymbolPoint& declared() const { return declared_; }
  bool uniform_node_size() const;

  virtual std::string kind() const = 0;
  /// Repair rule and composition metadata, recursively including any base code.
  virtual nlohmann::json describe() const = 0;

  virtual std::vector<SymbolVector> encode_nodes(std::span<const Symbol> message) const = 0;
  virtual SymbolVector decode(std::span<const NodeIndex> subset, std::span<const SymbolVector> contents) const = 0;
  virtual std::size_t transfer_size(NodeIndex failed, std::span<const NodeIndex> helpers, NodeIndex helper) const = 0;
  virtual SymbolVector helper_transfer(NodeIndex failed, std::span<const NodeIndex> helpers, NodeIndex helper,
                                       std::span<const Symbol> helper_content) const = 0;
  virtual SymbolVector rebuild(NodeIndex failed, std::span<const NodeIndex> helpers,
                               std::span<const SymbolVector> transfers) const = 0;

 protected:
  LinearDss(gf::Field field, SystemParams params, std::vector<std::size_t> node_sizes, std::size_t file_size,
            SymbolPoint declared);

 private:
  gf::Field field_;
  SystemParams params_;
  std::vector<std::size_t> node_sizes_;
  std::size_t file_size_;
  SymbolPoint declared_;
};

using DssPtr = std::shared_ptr<const LinearDss>;

/// Code given by explicit per-node generator matrices, with d = k and the
/// download-everything repair: each of the k helpers sends its whole node,
/// the newcomer decodes the file and re-encodes the lost node.
class GeneratorCode final : public LinearDss {
 public:
  /// Throws InputError for ragged generators, entries outside the field, or n <= k.
  GeneratorCode(gf::Field field, std::size_t k, std::vector<gf::FieldMatrix> generators);

  const gf::FieldMatrix& generator(NodeIndex node) const { return generators_.at(node); }

  std::string kind() const override { return "generator"; }
  nlohmann::json describe() const override;
  std::vector<SymbolVector> encode_nodes(std::span<const Symbol> message) const override;
  SymbolVector decode(std::span<const NodeIndex> subset, std::span<const SymbolVector> contents) const override;
  std::size_t transfer_size(NodeIndex failed, std::span<const NodeIndex> helpers, NodeIndex helper) const override;
  SymbolVector helper_transfer(NodeIndex failed, std::span<const NodeIndex> helpers, NodeIndex helper,
                               std::span<const Symbol> helper_content) const override;
  SymbolVector rebuild(NodeIndex failed, std::span<const NodeIndex> helpers,
                       std::span<const SymbolVector> transfers) const override;

 private:
  std::vector<gf::FieldMatrix> generators_;
};

struct RepairOutcome {
  SymbolVector content;
  BandwidthReport bandwidth;
};

/// Node contents G_i * message; throws InputError on a length mismatch.
std::vector<SymbolVector> encode(const LinearDss& dss, std::span<const Symbol> message);

/// Recovers the message from the contents of exactly k nodes (aligned with `subset`).
///
/// Throws InputError for malformed subsets and InvariantViolation when the
/// code cannot decode a subset it is supposed to (a broken code).
SymbolVector reconstruct(const LinearDss& dss, std::span<const NodeIndex> subset,
                         std::span<const SymbolVector> contents);

/// Regenerates node `failed` from exactly d helpers (contents aligned with `helpers`).
RepairOutcome repair(const LinearDss& dss, NodeIndex failed, std::span<const NodeIndex> helpers,
                     std::span<const SymbolVector> helper_contents);

/// Systematic Reed-Solomon code with d = k and one symbol per node.
///
/// Node i evaluates the message's interpolating polynomial at field element i;
/// when n = 2^m + 1 the last node holds the leading coefficient (the point at
/// infinity), which makes rs_base(3, 2) over GF(2) the x, y, x+y code.
DssPtr rs_base(std::size_t n, std::size_t k, const gf::Field& field = gf::Field::gf256());

/// The (3,2,2) code storing x, y and x+y over GF(2).
DssPtr xor_base_322();

/// Evaluation point of rs_base node `node`; nullopt for the point at infinity.
std::optional<Symbol> rs_evaluation_point(std::size_t n, NodeIndex node, const gf::Field& field);

/// Generator of one node, materialized by encoding unit messages.
gf::FieldMatrix node_generator(const LinearDss& dss, NodeIndex node);

/// Field, dimensions, generator entries and repair rule as a JSON document.
/// Throws ResourceError when the generators exceed `entry_budget` entries.
nlohmann::json to_json(const LinearDss& dss, std::size_t entry_budget = 1'000'000);

}  // namespace regen
