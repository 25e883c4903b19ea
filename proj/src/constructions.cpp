#include "regen/constructions.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "regen/errors.hpp"

namespace regen::constructions {

namespace {

std::size_t checked_mul(std::size_t a, std::size_t b) {
  std::size_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw ResourceError("symbol count overflows 64 bits");
  return out;
}

std::size_t checked_add(std::size_t a, std::size_t b) {
  std::size_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw ResourceError("symbol count overflows 64 bits");
  return out;
}

std::size_t factorial(std::size_t n) {
  std::size_t out = 1;
  for (std::size_t i = 2; i <= n; ++i) out = checked_mul(out, i);
  return out;
}

std::size_t as_size(std::int64_t value) { return static_cast<std::size_t>(value); }

std::size_t extended_size_of(const LinearDss& base, SpecialNode special, std::size_t ext) {
  const std::size_t n = base.node_count();
  if (ext < n) return base.node_size(ext);
  switch (special) {
    case SpecialNode::empty:
      return 0;
    case SpecialNode::twin:
      return base.node_size(ext - n);
    case SpecialNode::file:
      return base.file_size();
  }
  return 0;
}

std::vector<std::size_t> layout_node_sizes(const LinearDss& base, SpecialNode special,
                                           const std::vector<std::vector<std::size_t>>& layout) {
  const std::size_t positions = layout.empty() ? 0 : layout.front().size();
  std::vector<std::size_t> sizes(positions, 0);
  for (const auto& copy : layout) {
    for (std::size_t p = 0; p < positions; ++p) sizes[p] += extended_size_of(base, special, copy[p]);
  }
  return sizes;
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t size) {
  std::vector<std::size_t> perm(size);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

void require_uniform(const LinearDss& base, const char* construction) {
  if (!base.uniform_node_size()) {
    throw InputError(std::string(construction) + " needs a base code with equal node sizes");
  }
}

void require_budget(std::size_t nodes, const SymbolPoint& point, std::size_t budget) {
  const std::size_t stored = checked_mul(nodes, point.alpha);
  if (stored > budget) {
    throw ResourceError("construction would store " + std::to_string(stored) + " symbols, budget is " +
                        std::to_string(budget));
  }
}

void require_copies(std::size_t positions) {
  if (positions > 6 || factorial(positions) > kMaxCopies) {
    throw ResourceError(std::to_string(positions) + "! permuted copies exceed the limit of " +
                        std::to_string(kMaxCopies));
  }
}

SystemParams shifted(const SystemParams& p, std::int64_t dn, std::int64_t dk, std::int64_t dd) {
  return SystemParams(p.n() + dn, p.k() + dk, p.d() + dd);
}

template <typename T>
std::ptrdiff_t index_of(const std::vector<T>& values, const T& value) {
  const auto it = std::find(values.begin(), values.end(), value);
  return it == values.end() ? -1 : std::distance(values.begin(), it);
}

std::ptrdiff_t index_of(std::span<const NodeIndex> values, NodeIndex value) {
  const auto it = std::find(values.begin(), values.end(), value);
  return it == values.end() ? -1 : std::distance(values.begin(), it);
}

DssPtr make_full(DssPtr base, CompositionKind kind, std::size_t budget) {
  require_uniform(*base, "blowup_full");
  if (base->params().n() > 5) {
    throw ResourceError("blowup_full needs (n+1)! copies; n=" + std::to_string(base->params().n()) +
                        " exceeds the limit n <= 5");
  }
  const SymbolPoint point = blowup_full_point(base->params(), base->declared());
  const SystemParams params = shifted(base->params(), 1, 1, 1);
  require_budget(as_size(params.n()), point, budget);
  CompositionMeta meta{kind, 0, all_permutations(as_size(params.n())), {base->kind()}};
  meta.copies = meta.copy_layout.size();
  return std::make_shared<PermutedComposite>(std::move(base), SpecialNode::empty, 1, std::move(meta), params, point);
}

}  // namespace

std::string to_string(CompositionKind kind) {
  switch (kind) {
    case CompositionKind::blowup_simple:
      return "blowup_simple";
    case CompositionKind::blowup_full:
      return "blowup_full";
    case CompositionKind::concat:
      return "concat";
    case CompositionKind::copy_blowup:
      return "copy_blowup";
    case CompositionKind::filenode_blowup:
      return "filenode_blowup";
    case CompositionKind::iterate:
      return "iterate";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Closed forms

SymbolPoint blowup_simple_point(const SystemParams& base, const SymbolPoint& point) {
  const std::size_t n = as_size(base.n());
  return {checked_mul(n, point.alpha), checked_mul(n, point.gamma), checked_mul(n + 1, point.file_size)};
}

SymbolPoint blowup_full_point(const SystemParams& base, const SymbolPoint& point) {
  const std::size_t n = as_size(base.n());
  const std::size_t nonempty = checked_mul(n, factorial(n));
  return {checked_mul(nonempty, point.alpha), checked_mul(nonempty, point.gamma),
          checked_mul(factorial(n + 1), point.file_size)};
}

SymbolPoint copy_blowup_point(const SystemParams& base, const SymbolPoint& point, std::size_t l) {
  const std::size_t n = as_size(base.n());
  const std::size_t d = as_size(base.d());
  const std::size_t copies = factorial(n + l);
  // copies in which the failed node's duplicate is among the helpers
  const std::size_t with_twin = checked_mul(checked_mul(2 * l, d + l), factorial(n + l - 2));
  return {checked_mul(copies, point.alpha),
          checked_add(checked_mul(with_twin, point.alpha), checked_mul(copies - with_twin, point.gamma)),
          checked_mul(copies, point.file_size)};
}

SymbolPoint filenode_blowup_point(const SystemParams& base, const SymbolPoint& point) {
  const std::size_t n = as_size(base.n());
  const std::size_t k = as_size(base.k());
  const std::size_t d = as_size(base.d());
  const std::size_t f = factorial(n);
  return {checked_mul(f, checked_add(checked_mul(n, point.alpha), point.file_size)),
          checked_mul(f, checked_add(checked_mul(n - d, point.gamma), checked_mul(d + k, point.alpha))),
          checked_mul(factorial(n + 1), point.file_size)};
}

// ---------------------------------------------------------------------------
// PermutedComposite

PermutedComposite::PermutedComposite(DssPtr base, SpecialNode special, std::size_t special_count,
                                     CompositionMeta meta, SystemParams params, SymbolPoint declared)
    : LinearDss(base->field(), params, layout_node_sizes(*base, special, meta.copy_layout),
                meta.copy_layout.size() * base->file_size(), declared),
      base_(std::move(base)),
      special_(special),
      special_count_(special_count),
      meta_(std::move(meta)) {
  const std::size_t positions = node_count();
  const std::size_t extended = base_count() + special_count_;
  if (extended != positions) throw InvariantViolation("copy layout does not cover every extended node");
  if (special_ == SpecialNode::twin && special_count_ > base_count()) {
    throw InvariantViolation("more duplicates than base nodes");
  }
  base_to_position_.assign(meta_.copy_layout.size(), std::vector<std::size_t>(extended, positions));
  offsets_.assign(meta_.copy_layout.size(), std::vector<std::size_t>(positions, 0));
  std::vector<std::size_t> filled(positions, 0);
  for (std::size_t c = 0; c < meta_.copy_layout.size(); ++c) {
    const auto& layout = meta_.copy_layout[c];
    if (layout.size() != positions) throw InvariantViolation("ragged copy layout");
    for (std::size_t p = 0; p < positions; ++p) {
      const std::size_t ext = layout[p];
      if (ext >= extended || base_to_position_[c][ext] != positions) {
        throw InvariantViolation("copy layout is not a permutation");
      }
      base_to_position_[c][ext] = p;
      offsets_[c][p] = filled[p];
      filled[p] += extended_size(ext);
    }
  }
}

std::size_t PermutedComposite::extended_size(std::size_t ext) const { return extended_size_of(*base_, special_, ext); }

std::size_t PermutedComposite::underlying(std::size_t ext) const {
  return (special_ == SpecialNode::twin && ext >= base_count()) ? ext - base_count() : ext;
}

std::span<const Symbol> PermutedComposite::segment(std::span<const Symbol> content, std::size_t copy,
                                                   NodeIndex position) const {
  return content.subspan(offsets_[copy][position], extended_size(meta_.copy_layout[copy][position]));
}

nlohmann::json PermutedComposite::describe() const {
  static const char* const kSpecial[] = {"empty", "twin", "file"};
  nlohmann::json rule = {{"kind", "per_copy_delegation"}, {"special", kSpecial[static_cast<int>(special_)]}};
  switch (special_) {
    case SpecialNode::empty:
      rule["helper_choice"] = "drop_largest_base_index";
      break;
    case SpecialNode::twin:
      rule["helper_choice"] = "duplicate_first_then_lowest_underlying_index";
      break;
    case SpecialNode::file:
      rule["helper_choice"] = "file_node_first_then_lowest_base_index";
      break;
  }
  return {{"kind", kind()},
          {"repair_rule", std::move(rule)},
          {"composition",
           {{"kind", to_string(meta_.kind)},
            {"copies", meta_.copies},
            {"special_count", special_count_},
            {"copy_layout", meta_.copy_layout},
            {"base_labels", meta_.base_labels},
            {"base", base_->describe()}}}};
}

std::vector<SymbolVector> PermutedComposite::encode_nodes(std::span<const Symbol> message) const {
  const std::size_t copies = meta_.copy_layout.size();
  const std::size_t sub_len = base_->file_size();
  std::vector<SymbolVector> nodes(node_count());
  for (std::size_t p = 0; p < nodes.size(); ++p) nodes[p].reserve(node_size(p));
  SymbolVector sub(sub_len);
  for (std::size_t c = 0; c < copies; ++c) {
    for (std::size_t s = 0; s < sub_len; ++s) sub[s] = message[s * copies + c];
    const auto contents = base_->encode_nodes(sub);
    for (std::size_t p = 0; p < nodes.size(); ++p) {
      const std::size_t ext = meta_.copy_layout[c][p];
      if (ext < base_count()) {
        nodes[p].insert(nodes[p].end(), contents[ext].begin(), contents[ext].end());
      } else if (special_ == SpecialNode::twin) {
        nodes[p].insert(nodes[p].end(), contents[ext - base_count()].begin(), contents[ext - base_count()].end());
      } else if (special_ == SpecialNode::file) {
        nodes[p].insert(nodes[p].end(), sub.begin(), sub.end());
      }
    }
  }
  return nodes;
}

SymbolVector PermutedComposite::decode(std::span<const NodeIndex> subset, std::span<const SymbolVector> contents) const {
  const std::size_t copies = meta_.copy_layout.size();
  const std::size_t sub_len = base_->file_size();
  const auto k0 = as_size(base_->params().k());
  SymbolVector message(file_size());
  for (std::size_t c = 0; c < copies; ++c) {
    SymbolVector sub;
    std::vector<std::pair<NodeIndex, std::size_t>> available;  // (underlying base node, subset slot)
    for (std::size_t i = 0; i < subset.size(); ++i) {
      const std::size_t ext = meta_.copy_layout[c][subset[i]];
      if (special_ == SpecialNode::file && ext == base_count()) {
        const auto seg = segment(contents[i], c, subset[i]);
        sub.assign(seg.begin(), seg.end());
        break;
      }
      if (ext >= base_count() && special_ == SpecialNode::empty) continue;
      available.emplace_back(underlying(ext), i);
    }
    if (sub.empty()) {
      std::stable_sort(available.begin(), available.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      available.erase(std::unique(available.begin(), available.end(),
                                  [](const auto& a, const auto& b) { return a.first == b.first; }),
                      available.end());
      if (available.size() < k0) {
        throw InvariantViolation("copy " + std::to_string(c) + " sees only " + std::to_string(available.size()) +
                                 " distinct base nodes, needs " + std::to_string(k0));
      }
      std::vector<NodeIndex> nodes;
      std::vector<SymbolVector> pieces;
      for (std::size_t j = 0; j < k0; ++j) {
        const auto [node, slot] = available[j];
        nodes.push_back(node);
        const auto seg = segment(contents[slot], c, subset[slot]);
        pieces.emplace_back(seg.begin(), seg.end());
      }
      sub = base_->decode(nodes, pieces);
    }
    for (std::size_t s = 0; s < sub_len; ++s) message[s * copies + c] = sub[s];
  }
  return message;
}

PermutedComposite::CopyRepair PermutedComposite::plan_copy(std::size_t copy, NodeIndex failed,
                                                           std::span<const NodeIndex> helpers) const {
  const auto& layout = meta_.copy_layout[copy];
  const std::size_t n0 = base_count();
  const auto k0 = as_size(base_->params().k());
  const auto d0 = as_size(base_->params().d());
  const std::size_t failed_ext = layout[failed];
  CopyRepair plan;

  // (underlying base node, helper position), one entry per distinct base node, sorted by base node
  auto ordinary_helpers = [&]() {
    std::vector<std::pair<NodeIndex, NodeIndex>> out;
    for (NodeIndex h : helpers) {
      const std::size_t ext = layout[h];
      if (ext >= n0 && special_ != SpecialNode::twin) continue;
      out.emplace_back(underlying(ext), h);
    }
    // Equal base nodes (a node and its duplicate) keep the lower position.
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              out.end());
    return out;
  };
  auto take = [&](const std::vector<std::pair<NodeIndex, NodeIndex>>& candidates, std::size_t count, Mode mode,
                  std::size_t base_failed) {
    if (candidates.size() < count) {
      throw InvariantViolation("copy " + std::to_string(copy) + " has " + std::to_string(candidates.size()) +
                               " usable helpers, needs " + std::to_string(count));
    }
    plan.mode = mode;
    plan.base_failed = base_failed;
    for (std::size_t j = 0; j < count; ++j) {
      plan.base_nodes.push_back(candidates[j].first);
      plan.positions.push_back(candidates[j].second);
    }
  };

  switch (special_) {
    case SpecialNode::empty: {
      if (failed_ext >= n0) return plan;  // nothing stored, nothing to repair
      auto candidates = ordinary_helpers();
      // With d+1 non-empty helpers, the one holding the largest base index sits out.
      if (candidates.size() > d0 + 1) throw InvariantViolation("too many helpers for an empty-node composite");
      take(candidates, d0, Mode::delegate, failed_ext);
      return plan;
    }
    case SpecialNode::twin: {
      const std::size_t u = underlying(failed_ext);
      std::size_t twin = n0 + special_count_;  // sentinel: no duplicate
      if (failed_ext >= n0) {
        twin = u;
      } else if (u < special_count_) {
        twin = n0 + u;
      }
      if (twin < n0 + special_count_ && index_of(helpers, base_to_position_[copy][twin]) >= 0) {
        plan.mode = Mode::verbatim;
        plan.base_failed = u;
        plan.base_nodes.push_back(u);
        plan.positions.push_back(base_to_position_[copy][twin]);
        return plan;
      }
      take(ordinary_helpers(), d0, Mode::delegate, u);
      return plan;
    }
    case SpecialNode::file: {
      if (failed_ext == n0) {
        take(ordinary_helpers(), k0, Mode::decode_file, failed_ext);
        return plan;
      }
      const NodeIndex file_position = base_to_position_[copy][n0];
      if (index_of(helpers, file_position) >= 0) {
        plan.mode = Mode::encode_from_file;
        plan.base_failed = failed_ext;
        plan.base_nodes.push_back(n0);
        plan.positions.push_back(file_position);
        return plan;
      }
      take(ordinary_helpers(), d0, Mode::delegate, failed_ext);
      return plan;
    }
  }
  return plan;
}

std::size_t PermutedComposite::copy_transfer_size(std::size_t copy, const CopyRepair& plan, NodeIndex position) const {
  const auto slot = index_of(plan.positions, position);
  if (slot < 0) return 0;
  const auto i = static_cast<std::size_t>(slot);
  switch (plan.mode) {
    case Mode::idle:
      return 0;
    case Mode::delegate:
      return base_->transfer_size(plan.base_failed, plan.base_nodes, plan.base_nodes[i]);
    case Mode::verbatim:
    case Mode::encode_from_file:
      return base_->node_size(plan.base_failed);
    case Mode::decode_file:
      return extended_size(meta_.copy_layout[copy][position]);
  }
  return 0;
}

std::size_t PermutedComposite::transfer_size(NodeIndex failed, std::span<const NodeIndex> helpers,
                                             NodeIndex helper) const {
  std::size_t total = 0;
  for (std::size_t c = 0; c < meta_.copy_layout.size(); ++c) {
    total += copy_transfer_size(c, plan_copy(c, failed, helpers), helper);
  }
  return total;
}

SymbolVector PermutedComposite::helper_transfer(NodeIndex failed, std::span<const NodeIndex> helpers,
                                                NodeIndex helper, std::span<const Symbol> helper_content) const {
  SymbolVector out;
  for (std::size_t c = 0; c < meta_.copy_layout.size(); ++c) {
    const CopyRepair plan = plan_copy(c, failed, helpers);
    const auto slot = index_of(plan.positions, helper);
    if (slot < 0) continue;
    const auto seg = segment(helper_content, c, helper);
    switch (plan.mode) {
      case Mode::idle:
        break;
      case Mode::delegate: {
        const SymbolVector sent = base_->helper_transfer(plan.base_failed, plan.base_nodes,
                                                         plan.base_nodes[static_cast<std::size_t>(slot)], seg);
        out.insert(out.end(), sent.begin(), sent.end());
        break;
      }
      case Mode::verbatim:
      case Mode::decode_file:
        out.insert(out.end(), seg.begin(), seg.end());
        break;
      case Mode::encode_from_file: {
        const SymbolVector node = base_->encode_nodes(seg)[plan.base_failed];
        out.insert(out.end(), node.begin(), node.end());
        break;
      }
    }
  }
  return out;
}

SymbolVector PermutedComposite::rebuild(NodeIndex failed, std::span<const NodeIndex> helpers,
                                        std::span<const SymbolVector> transfers) const {
  std::vector<std::size_t> cursor(helpers.size(), 0);
  SymbolVector out;
  out.reserve(node_size(failed));
  for (std::size_t c = 0; c < meta_.copy_layout.size(); ++c) {
    const CopyRepair plan = plan_copy(c, failed, helpers);
    if (plan.mode == Mode::idle) continue;
    std::vector<SymbolVector> chunks;
    for (NodeIndex position : plan.positions) {
      const auto h = static_cast<std::size_t>(index_of(helpers, position));
      const std::size_t size = copy_transfer_size(c, plan, position);
      if (cursor[h] + size > transfers[h].size()) throw InvariantViolation("helper transfer is too short");
      const auto begin = transfers[h].begin() + static_cast<std::ptrdiff_t>(cursor[h]);
      chunks.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(size));
      cursor[h] += size;
    }
    SymbolVector piece;
    switch (plan.mode) {
      case Mode::idle:
        break;
      case Mode::delegate:
        piece = base_->rebuild(plan.base_failed, plan.base_nodes, chunks);
        break;
      case Mode::verbatim:
      case Mode::encode_from_file:
        piece = std::move(chunks.front());
        break;
      case Mode::decode_file:
        piece = base_->decode(plan.base_nodes, chunks);
        break;
    }
    out.insert(out.end(), piece.begin(), piece.end());
  }
  for (std::size_t h = 0; h < helpers.size(); ++h) {
    if (cursor[h] != transfers[h].size()) throw InvariantViolation("helper transfer has unused symbols");
  }
  return out;
}

// ---------------------------------------------------------------------------
// ConcatenatedCode

namespace {

std::vector<std::size_t> concat_node_sizes(const std::vector<DssPtr>& parts) {
  std::vector<std::size_t> sizes;
  for (const auto& part : parts) sizes.insert(sizes.end(), part->node_sizes().begin(), part->node_sizes().end());
  return sizes;
}

std::size_t concat_file_size(const std::vector<DssPtr>& parts) {
  std::size_t total = 0;
  for (const auto& part : parts) total += part->file_size();
  return total;
}

}  // namespace

ConcatenatedCode::ConcatenatedCode(std::vector<DssPtr> parts, SystemParams params, SymbolPoint declared)
    : LinearDss(parts.at(0)->field(), params, concat_node_sizes(parts), concat_file_size(parts), declared),
      parts_(std::move(parts)) {
  std::size_t position = 0;
  std::size_t symbol = 0;
  for (const auto& part : parts_) {
    first_position_.push_back(position);
    first_symbol_.push_back(symbol);
    position += part->node_count();
    symbol += part->file_size();
  }
}

nlohmann::json ConcatenatedCode::describe() const {
  nlohmann::json parts = nlohmann::json::array();
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& part : parts_) {
    parts.push_back(part->describe());
    labels.push_back(part->kind());
  }
  return {{"kind", kind()},
          {"repair_rule", {{"kind", "owning_part"}, {"helper_choice", "lowest_positions_in_part"}}},
          {"composition",
           {{"kind", "concat"}, {"copies", parts_.size()}, {"base_labels", labels}, {"parts", std::move(parts)}}}};
}

std::size_t ConcatenatedCode::part_of(NodeIndex position) const {
  const auto it = std::upper_bound(first_position_.begin(), first_position_.end(), position);
  return static_cast<std::size_t>(std::distance(first_position_.begin(), it)) - 1;
}

std::vector<NodeIndex> ConcatenatedCode::local_helpers(std::size_t part, std::span<const NodeIndex> helpers) const {
  std::vector<NodeIndex> local;
  const auto d = as_size(parts_[part]->params().d());
  for (NodeIndex h : helpers) {
    if (part_of(h) == part && local.size() < d) local.push_back(h - first_position_[part]);
  }
  if (local.size() < d) throw InvariantViolation("part " + std::to_string(part) + " lacks helpers");
  return local;
}

std::vector<SymbolVector> ConcatenatedCode::encode_nodes(std::span<const Symbol> message) const {
  std::vector<SymbolVector> nodes;
  nodes.reserve(node_count());
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    auto contents = parts_[j]->encode_nodes(message.subspan(first_symbol_[j], parts_[j]->file_size()));
    for (auto& c : contents) nodes.push_back(std::move(c));
  }
  return nodes;
}

SymbolVector ConcatenatedCode::decode(std::span<const NodeIndex> subset, std::span<const SymbolVector> contents) const {
  SymbolVector message(file_size());
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    const auto k = as_size(parts_[j]->params().k());
    std::vector<NodeIndex> local;
    std::vector<SymbolVector> pieces;
    for (std::size_t i = 0; i < subset.size() && local.size() < k; ++i) {
      if (part_of(subset[i]) != j) continue;
      local.push_back(subset[i] - first_position_[j]);
      pieces.push_back(contents[i]);
    }
    if (local.size() < k) throw InvariantViolation("part " + std::to_string(j) + " has too few nodes to decode");
    const SymbolVector sub = parts_[j]->decode(local, pieces);
    std::copy(sub.begin(), sub.end(), message.begin() + static_cast<std::ptrdiff_t>(first_symbol_[j]));
  }
  return message;
}

std::size_t ConcatenatedCode::transfer_size(NodeIndex failed, std::span<const NodeIndex> helpers,
                                            NodeIndex helper) const {
  const std::size_t part = part_of(failed);
  if (part_of(helper) != part) return 0;
  const auto local = local_helpers(part, helpers);
  const NodeIndex h = helper - first_position_[part];
  if (std::find(local.begin(), local.end(), h) == local.end()) return 0;
  return parts_[part]->transfer_size(failed - first_position_[part], local, h);
}

SymbolVector ConcatenatedCode::helper_transfer(NodeIndex failed, std::span<const NodeIndex> helpers, NodeIndex helper,
                                               std::span<const Symbol> helper_content) const {
  const std::size_t part = part_of(failed);
  if (part_of(helper) != part) return {};
  const auto local = local_helpers(part, helpers);
  const NodeIndex h = helper - first_position_[part];
  if (std::find(local.begin(), local.end(), h) == local.end()) return {};
  return parts_[part]->helper_transfer(failed - first_position_[part], local, h, helper_content);
}

SymbolVector ConcatenatedCode::rebuild(NodeIndex failed, std::span<const NodeIndex> helpers,
                                       std::span<const SymbolVector> transfers) const {
  const std::size_t part = part_of(failed);
  const auto local = local_helpers(part, helpers);
  std::vector<SymbolVector> chunks;
  for (std::size_t i = 0; i < helpers.size(); ++i) {
    const bool sends = part_of(helpers[i]) == part &&
                       std::find(local.begin(), local.end(), helpers[i] - first_position_[part]) != local.end();
    if (sends) {
      chunks.push_back(transfers[i]);
    } else if (!transfers[i].empty()) {
      throw InvariantViolation("a non-participating helper sent symbols");
    }
  }
  return parts_[part]->rebuild(failed - first_position_[part], local, chunks);
}

// ---------------------------------------------------------------------------
// Factories

DssPtr blowup_simple(DssPtr base, std::size_t symbol_budget) {
  require_uniform(*base, "blowup_simple");
  const SymbolPoint point = blowup_simple_point(base->params(), base->declared());
  const SystemParams params = shifted(base->params(), 1, 1, 1);
  require_budget(as_size(params.n()), point, symbol_budget);
  const std::size_t n = base->node_count();
  CompositionMeta meta{CompositionKind::blowup_simple, n + 1, {}, {base->kind()}};
  for (std::size_t c = 0; c <= n; ++c) {
    std::vector<std::size_t> layout(n + 1);
    for (std::size_t p = 0; p <= n; ++p) layout[p] = p < c ? p : (p == c ? n : p - 1);
    meta.copy_layout.push_back(std::move(layout));
  }
  return std::make_shared<PermutedComposite>(std::move(base), SpecialNode::empty, 1, std::move(meta), params, point);
}

DssPtr blowup_full(DssPtr base, std::size_t symbol_budget) {
  return make_full(std::move(base), CompositionKind::blowup_full, symbol_budget);
}

DssPtr iterate(DssPtr base, std::size_t depth, std::size_t symbol_budget) {
  if (depth == 0) throw InputError("iterate needs depth >= 1");
  for (std::size_t level = 1; level <= depth; ++level) {
    base = make_full(std::move(base), level == depth && depth > 1 ? CompositionKind::iterate
                                                                  : CompositionKind::blowup_full,
                     symbol_budget);
  }
  return base;
}

DssPtr concat(std::vector<DssPtr> parts, std::size_t symbol_budget) {
  if (parts.empty()) throw InputError("concat needs at least one part");
  const auto& first = *parts.front();
  for (const auto& part : parts) {
    require_uniform(*part, "concat");
    if (part->params().epsilon() != first.params().epsilon() || part->params().delta() != first.params().delta()) {
      throw InputError("concat parts must share n-k and n-d");
    }
    if (part->declared().alpha != first.declared().alpha) throw InputError("concat parts must share node size");
    if (!(part->field() == first.field())) throw InputError("concat parts must use the same field");
  }
  std::int64_t n = 0;
  std::size_t file = 0;
  std::size_t gamma = 0;  // parts with unequal bandwidth give a code whose repair cost depends on the failed node
  for (const auto& part : parts) {
    n += part->params().n();
    file += part->declared().file_size;
    gamma = std::max(gamma, part->declared().gamma);
  }
  const SystemParams params(n, n - first.params().epsilon(), n - first.params().delta());
  const SymbolPoint point{first.declared().alpha, gamma, file};
  require_budget(as_size(n), point, symbol_budget);
  return std::make_shared<ConcatenatedCode>(std::move(parts), params, point);
}

DssPtr copy_blowup(DssPtr base, std::size_t l, std::size_t symbol_budget) {
  require_uniform(*base, "copy_blowup");
  const auto k = as_size(base->params().k());
  if (l < 1 || l > k - 1) {
    throw RangeError("copy_blowup needs 1 <= l <= k-1, got l=" + std::to_string(l));
  }
  const std::size_t positions = base->node_count() + l;
  require_copies(positions);
  const SymbolPoint point = copy_blowup_point(base->params(), base->declared(), l);
  const auto li = static_cast<std::int64_t>(l);
  const SystemParams params = shifted(base->params(), li, li, li);
  require_budget(positions, point, symbol_budget);
  CompositionMeta meta{CompositionKind::copy_blowup, 0, all_permutations(positions), {base->kind()}};
  meta.copies = meta.copy_layout.size();
  return std::make_shared<PermutedComposite>(std::move(base), SpecialNode::twin, l, std::move(meta), params, point);
}

DssPtr filenode_blowup(DssPtr base, std::size_t symbol_budget) {
  require_uniform(*base, "filenode_blowup");
  const std::size_t positions = base->node_count() + 1;
  require_copies(positions);
  const SymbolPoint point = filenode_blowup_point(base->params(), base->declared());
  const SystemParams params = shifted(base->params(), 1, 0, 0);
  require_budget(positions, point, symbol_budget);
  CompositionMeta meta{CompositionKind::filenode_blowup, 0, all_permutations(positions), {base->kind()}};
  meta.copies = meta.copy_layout.size();
  return std::make_shared<PermutedComposite>(std::move(base), SpecialNode::file, 1, std::move(meta), params, point);
}

}  // namespace regen::constructions
