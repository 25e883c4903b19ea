#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "regen/dss.hpp"

// Composition of base codes into new exact-repair codes: permuted copies of a
// base system padded with a special node (empty, a duplicate of an existing
// node, or the whole file), and side-by-side concatenation.
namespace regen::constructions {

inline constexpr std::size_t kDefaultSymbolBudget = 10'000'000;
/// Largest number of permuted copies any construction will lay out (6!).
inline constexpr std::size_t kMaxCopies = 720;

enum class CompositionKind { blowup_simple, blowup_full, concat, copy_blowup, filenode_blowup, iterate };

std::string to_string(CompositionKind kind);

/// What the extra base node(s) of a permuted composite hold.
enum class SpecialNode { empty, twin, file };

struct CompositionMeta {
  CompositionKind kind = CompositionKind::blowup_full;
  std::size_t copies = 0;
  /// copy_layout[c][p] = extended base node stored at composite position p in copy c.
  /// Extended indices 0..n-1 are base nodes; n.. are the special nodes.
  std::vector<std::vector<std::size_t>> copy_layout;
  std::vector<std::string> base_labels;
};

/// A composite whose node p concatenates, copy by copy, the extended base
/// node that copy places at position p. The message interleaves copies
/// symbol by symbol: symbol s of copy c is message[s * copies + c].
class PermutedComposite final : public LinearDss {
 public:
  PermutedComposite(DssPtr base, SpecialNode special, std::size_t special_count, CompositionMeta meta,
                    SystemParams params, SymbolPoint declared);

  const CompositionMeta& meta() const { return meta_; }
  const LinearDss& base() const { return *base_; }
  SpecialNode special() const { return special_; }

  std::string kind() const override { return to_string(meta_.kind); }
  nlohmann::json describe() const override;
  std::vector<SymbolVector> encode_nodes(std::span<const Symbol> message) const override;
  SymbolVector decode(std::span<const NodeIndex> subset, std::span<const SymbolVector> contents) const override;
  std::size_t transfer_size(NodeIndex failed, std::span<const NodeIndex> helpers, NodeIndex helper) const override;
  SymbolVector helper_transfer(NodeIndex failed, std::span<const NodeIndex> helpers, NodeIndex helper,
                               std::span<const Symbol> helper_content) const override;
  SymbolVector rebuild(NodeIndex failed, std::span<const NodeIndex> helpers,
                       std::span<const SymbolVector> transfers) const override;

 private:
  enum class Mode { idle, delegate, verbatim, encode_from_file, decode_file };

  // How one copy regenerates its piece of the failed node.
  struct CopyRepair {
    Mode mode = Mode::idle;
    std::size_t base_failed = 0;
    std::vector<NodeIndex> base_nodes;  // base-code indices, strictly increasing
    std::vector<NodeIndex> positions;   // composite helper position sending for each base node
  };

  std::size_t base_count() const { return base_->node_count(); }
  std::size_t extended_size(std::size_t ext) const;
  std::size_t underlying(std::size_t ext) const;
  std::span<const Symbol> segment(std::span<const Symbol> content, std::size_t copy, NodeIndex position) const;
  CopyRepair plan_copy(std::size_t copy, NodeIndex failed, std::span<const NodeIndex> helpers) const;
  std::size_t copy_transfer_size(std::size_t copy, const CopyRepair& plan, NodeIndex position) const;

  DssPtr base_;
  SpecialNode special_;
  std::size_t special_count_;
  CompositionMeta meta_;
  std::vector<std::vector<std::size_t>> base_to_position_;
  std::vector<std::vector<std::size_t>> offsets_;  // offsets_[c][p]: start of copy c's segment in node p
};

/// Parts laid side by side; node positions and file are concatenated part by part.
class ConcatenatedCode final : public LinearDss {
 public:
  ConcatenatedCode(std::vector<DssPtr> parts, SystemParams params, SymbolPoint declared);

  const std::vector<DssPtr>& parts() const { return parts_; }

  std::string kind() const override { return "concat"; }
  nlohmann::json describe() const override;
  std::vector<SymbolVector> encode_nodes(std::span<const Symbol> message) const override;
  SymbolVector decode(std::span<const NodeIndex> subset, std::span<const SymbolVector> contents) const override;
  std::size_t transfer_size(NodeIndex failed, std::span<const NodeIndex> helpers, NodeIndex helper) const override;
  SymbolVector helper_transfer(NodeIndex failed, std::span<const NodeIndex> helpers, NodeIndex helper,
                               std::span<const Symbol> helper_content) const override;
  SymbolVector rebuild(NodeIndex failed, std::span<const NodeIndex> helpers,
                       std::span<const SymbolVector> transfers) const override;

 private:
  std::size_t part_of(NodeIndex position) const;
  // Helpers inside the failed node's part that actually send, as part-local indices.
  std::vector<NodeIndex> local_helpers(std::size_t part, std::span<const NodeIndex> helpers) const;

  std::vector<DssPtr> parts_;
  std::vector<std::size_t> first_position_;
  std::vector<std::size_t> first_symbol_;
};

/// (n,k,d) -> (n+1,k+1,d+1) with n+1 copies; copy j leaves position j empty.
DssPtr blowup_simple(DssPtr base, std::size_t symbol_budget = kDefaultSymbolBudget);

/// (n,k,d) -> (n+1,k+1,d+1) with one copy per permutation of n+1 positions; repair is symmetric.
DssPtr blowup_full(DssPtr base, std::size_t symbol_budget = kDefaultSymbolBudget);

/// `depth`-fold blowup_full.
DssPtr iterate(DssPtr base, std::size_t depth, std::size_t symbol_budget = kDefaultSymbolBudget);

/// Side-by-side union of parts sharing n_j-k_j, n_j-d_j and node size; declared gamma is the largest part's.
DssPtr concat(std::vector<DssPtr> parts, std::size_t symbol_budget = kDefaultSymbolBudget);

/// (n,k,d) -> (n+l,k+l,d+l): base plus exact duplicates of its first l nodes, in every permutation.
DssPtr copy_blowup(DssPtr base, std::size_t l, std::size_t symbol_budget = kDefaultSymbolBudget);

/// (n,k,d) -> (n+1,k,d): base plus a node holding the whole file, in every permutation.
DssPtr filenode_blowup(DssPtr base, std::size_t symbol_budget = kDefaultSymbolBudget);

/// Closed-form (alpha, gamma, B) of each construction given its base's values.
SymbolPoint blowup_simple_point(const SystemParams& base, const SymbolPoint& point);
SymbolPoint blowup_full_point(const SystemParams& base, const SymbolPoint& point);
SymbolPoint copy_blowup_point(const SystemParams& base, const SymbolPoint& point, std::size_t l);
SymbolPoint filenode_blowup_point(const SystemParams& base, const SymbolPoint& point);

}  // namespace regen::constructions
