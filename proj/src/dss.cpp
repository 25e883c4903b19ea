#include "regen/dss.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "regen/errors.hpp"

namespace regen {

namespace {

void require_increasing(std::span<const NodeIndex> nodes, std::size_t node_count, const char* what) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= node_count) {
      throw InputError(std::string(what) + " index " + std::to_string(nodes[i]) + " out of range");
    }
    if (i > 0 && nodes[i] <= nodes[i - 1]) {
      throw InputError(std::string(what) + " indices must be strictly increasing");
    }
  }
}

void require_sizes(const LinearDss& dss, std::span<const NodeIndex> nodes, std::span<const SymbolVector> contents,
                   const char* what) {
  if (contents.size() != nodes.size()) throw InputError(std::string(what) + ": one content vector per node expected");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (contents[i].size() != dss.node_size(nodes[i])) {
      throw InputError(std::string(what) + ": node " + std::to_string(nodes[i]) + " content has " +
                       std::to_string(contents[i].size()) + " symbols, expected " +
                       std::to_string(dss.node_size(nodes[i])));
    }
  }
}

}  // namespace

LinearDss::LinearDss(gf::Field field, SystemParams params, std::vector<std::size_t> node_sizes,
                     std::size_t file_size, SymbolPoint declared)
    : field_(std::move(field)),
      params_(params),
      node_sizes_(std::move(node_sizes)),
      file_size_(file_size),
      declared_(declared) {
  if (node_sizes_.size() != static_cast<std::size_t>(params_.n())) {
    throw InvariantViolation("node size table does not match n");
  }
}

bool LinearDss::uniform_node_size() const {
  return std::adjacent_find(node_sizes_.begin(), node_sizes_.end(), std::not_equal_to<>()) == node_sizes_.end();
}

// ---------------------------------------------------------------------------
// GeneratorCode

namespace {

SystemParams generator_params(std::size_t n, std::size_t k) {
  if (k == 0 || k >= n) {
    throw InputError("generator code needs 1 <= k < n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  return SystemParams(static_cast<std::int64_t>(n), static_cast<std::int64_t>(k), static_cast<std::int64_t>(k));
}

std::vector<std::size_t> generator_rows(const std::vector<gf::FieldMatrix>& generators) {
  std::vector<std::size_t> rows;
  rows.reserve(generators.size());
  for (const auto& g : generators) rows.push_back(static_cast<std::size_t>(g.rows()));
  return rows;
}

std::size_t generator_cols(const std::vector<gf::FieldMatrix>& generators) {
  if (generators.empty()) throw InputError("generator code needs at least one node");
  const auto cols = generators.front().cols();
  for (const auto& g : generators) {
    if (g.cols() != cols) throw InputError("generators disagree on the file length");
  }
  return static_cast<std::size_t>(cols);
}

SymbolPoint generator_declared(const std::vector<gf::FieldMatrix>& generators, std::size_t k) {
  const auto rows = generator_rows(generators);
  const std::size_t alpha = *std::max_element(rows.begin(), rows.end());
  return {alpha, k * alpha, generator_cols(generators)};
}

}  // namespace

GeneratorCode::GeneratorCode(gf::Field field, std::size_t k, std::vector<gf::FieldMatrix> generators)
    : LinearDss(field, generator_params(generators.size(), k), generator_rows(generators), generator_cols(generators),
                generator_declared(generators, k)),
      generators_(std::move(generators)) {
  for (const auto& g : generators_) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      for (Eigen::Index j = 0; j < g.cols(); ++j) {
        if (!this->field().contains(g(i, j))) throw InputError("generator entry outside the field");
      }
    }
  }
}

nlohmann::json GeneratorCode::describe() const {
  return {{"kind", kind()},
          {"repair_rule", {{"kind", "download_all_reencode"}, {"helpers", params().d()}}}};
}

std::vector<SymbolVector> GeneratorCode::encode_nodes(std::span<const Symbol> message) const {
  std::vector<SymbolVector> out;
  out.reserve(generators_.size());
  for (const auto& g : generators_) out.push_back(gf::multiply(field(), g, message));
  return out;
}

SymbolVector GeneratorCode::decode(std::span<const NodeIndex> subset, std::span<const SymbolVector> contents) const {
  Eigen::Index rows = 0;
  for (NodeIndex node : subset) rows += generators_[node].rows();
  gf::FieldMatrix stacked(rows, static_cast<Eigen::Index>(file_size()));
  gf::FieldMatrix rhs(rows, 1);
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const auto& g = generators_[subset[i]];
    stacked.middleRows(at, g.rows()) = g;
    for (Eigen::Index r = 0; r < g.rows(); ++r) rhs(at + r, 0) = contents[i][static_cast<std::size_t>(r)];
    at += g.rows();
  }
  gf::FieldMatrix solution;
  try {
    solution = gf::solve(field(), stacked, rhs);
  } catch (const SingularMatrixError& e) {
    throw InvariantViolation(std::string("generator stack is not invertible: ") + e.what());
  } catch (const InputError& e) {
    throw InvariantViolation(std::string("node contents are inconsistent with the code: ") + e.what());
  }
  SymbolVector message(file_size());
  for (std::size_t s = 0; s < message.size(); ++s) message[s] = solution(static_cast<Eigen::Index>(s), 0);
  return message;
}

std::size_t GeneratorCode::transfer_size(NodeIndex /*failed*/, std::span<const NodeIndex> /*helpers*/,
                                         NodeIndex helper) const {
  return node_size(helper);
}

SymbolVector GeneratorCode::helper_transfer(NodeIndex /*failed*/, std::span<const NodeIndex> /*helpers*/,
                                            NodeIndex /*helper*/, std::span<const Symbol> helper_content) const {
  return {helper_content.begin(), helper_content.end()};
}

SymbolVector GeneratorCode::rebuild(NodeIndex failed, std::span<const NodeIndex> helpers,
                                    std::span<const SymbolVector> transfers) const {
  const SymbolVector message = decode(helpers, transfers);
  return gf::multiply(field(), generators_[failed], message);
}

// ---------------------------------------------------------------------------
// Free functions

std::vector<SymbolVector> encode(const LinearDss& dss, std::span<const Symbol> message) {
  if (message.size() != dss.file_size()) {
    throw InputError("message has " + std::to_string(message.size()) + " symbols, code stores " +
                     std::to_string(dss.file_size()));
  }
  for (Symbol s : message) {
    if (!dss.field().contains(s)) throw InputError("message symbol outside the field");
  }
  return dss.encode_nodes(message);
}

SymbolVector reconstruct(const LinearDss& dss, std::span<const NodeIndex> subset,
                         std::span<const SymbolVector> contents) {
  if (subset.size() != static_cast<std::size_t>(dss.params().k())) {
    throw InputError("reconstruction needs exactly k=" + std::to_string(dss.params().k()) + " nodes");
  }
  require_increasing(subset, dss.node_count(), "subset");
  require_sizes(dss, subset, contents, "reconstruct");
  SymbolVector message = dss.decode(subset, contents);
  if (message.size() != dss.file_size()) throw InvariantViolation("decoder returned a message of the wrong length");
  return message;
}

RepairOutcome repair(const LinearDss& dss, NodeIndex failed, std::span<const NodeIndex> helpers,
                     std::span<const SymbolVector> helper_contents) {
  if (failed >= dss.node_count()) throw InputError("failed node index out of range");
  if (helpers.size() != static_cast<std::size_t>(dss.params().d())) {
    throw InputError("repair needs exactly d=" + std::to_string(dss.params().d()) + " helpers");
  }
  require_increasing(helpers, dss.node_count(), "helper");
  if (std::find(helpers.begin(), helpers.end(), failed) != helpers.end()) {
    throw InputError("the failed node cannot help repair itself");
  }
  require_sizes(dss, helpers, helper_contents, "repair");

  RepairOutcome outcome;
  std::vector<SymbolVector> transfers;
  transfers.reserve(helpers.size());
  for (std::size_t i = 0; i < helpers.size(); ++i) {
    SymbolVector sent = dss.helper_transfer(failed, helpers, helpers[i], helper_contents[i]);
    if (sent.size() != dss.transfer_size(failed, helpers, helpers[i])) {
      throw InvariantViolation("helper " + std::to_string(helpers[i]) + " sent a transfer of undeclared size");
    }
    outcome.bandwidth.per_helper[helpers[i]] = sent.size();
    outcome.bandwidth.total += sent.size();
    transfers.push_back(std::move(sent));
  }
  outcome.content = dss.rebuild(failed, helpers, transfers);
  if (outcome.content.size() != dss.node_size(failed)) {
    throw InvariantViolation("repair produced a node of the wrong size");
  }
  return outcome;
}

std::optional<Symbol> rs_evaluation_point(std::size_t n, NodeIndex node, const gf::Field& field) {
  if (node < field.order()) return static_cast<Symbol>(node);
  if (node == field.order() && n == static_cast<std::size_t>(field.order()) + 1) return std::nullopt;
  throw InputError("no evaluation point for node " + std::to_string(node));
}

DssPtr rs_base(std::size_t n, std::size_t k, const gf::Field& field) {
  if (k == 0 || k >= n) throw InputError("rs_base needs 1 <= k < n");
  if (n > static_cast<std::size_t>(field.order()) + 1) {
    throw InputError("GF(2^" + std::to_string(field.degree()) + ") is too small for " + std::to_string(n) +
                     " Reed-Solomon nodes");
  }
  const auto kk = static_cast<Eigen::Index>(k);
  gf::FieldMatrix vandermonde = gf::FieldMatrix::Zero(static_cast<Eigen::Index>(n), kk);
  for (std::size_t i = 0; i < n; ++i) {
    const auto point = rs_evaluation_point(n, i, field);
    const auto row = static_cast<Eigen::Index>(i);
    if (!point) {
      vandermonde(row, kk - 1) = 1;
      continue;
    }
    for (Eigen::Index j = 0; j < kk; ++j) vandermonde(row, j) = field.pow(*point, static_cast<std::uint64_t>(j));
  }
  const gf::FieldMatrix systematic =
      gf::multiply(field, vandermonde, gf::inverse(field, gf::FieldMatrix(vandermonde.topRows(kk))));
  std::vector<gf::FieldMatrix> generators;
  generators.reserve(n);
  for (std::size_t i = 0; i < n; ++i) generators.emplace_back(systematic.row(static_cast<Eigen::Index>(i)));
  return std::make_shared<GeneratorCode>(field, k, std::move(generators));
}

DssPtr xor_base_322() { return rs_base(3, 2, gf::Field::binary()); }

gf::FieldMatrix node_generator(const LinearDss& dss, NodeIndex node) {
  const std::size_t len = dss.file_size();
  gf::FieldMatrix g(static_cast<Eigen::Index>(dss.node_size(node)), static_cast<Eigen::Index>(len));
  SymbolVector unit(len, 0);
  for (std::size_t s = 0; s < len; ++s) {
    unit[s] = 1;
    const auto contents = dss.encode_nodes(unit);
    for (std::size_t r = 0; r < contents[node].size(); ++r) {
      g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = contents[node][r];
    }
    unit[s] = 0;
  }
  return g;
}

nlohmann::json to_json(const LinearDss& dss, std::size_t entry_budget) {
  std::size_t entries = 0;
  for (std::size_t size : dss.node_sizes()) entries += size * dss.file_size();
  if (entries > entry_budget) {
    throw ResourceError("generator serialization needs " + std::to_string(entries) + " entries, budget is " +
                        std::to_string(entry_budget));
  }
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeIndex i = 0; i < dss.node_count(); ++i) {
    const gf::FieldMatrix g = node_generator(dss, i);
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < g.cols(); ++c) row.push_back(g(r, c));
      rows.push_back(std::move(row));
    }
    nodes.push_back(std::move(rows));
  }
  return {{"field", {{"m", dss.field().degree()}, {"modulus", dss.field().spec().modulus}}},
          {"n", dss.params().n()},
          {"k", dss.params().k()},
          {"d", dss.params().d()},
          {"node_sizes", dss.node_sizes()},
          {"file_len", dss.file_size()},
          {"declared", {{"alpha", dss.declared().alpha}, {"gamma", dss.declared().gamma},
                        {"file_size", dss.declared().file_size}}},
          {"generators", std::move(nodes)},
          {"code", dss.describe()}};
}

}  // namespace regen
