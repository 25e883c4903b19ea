#include "regen/verifier.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "regen/errors.hpp"

namespace regen::verify {

namespace {

// C(n, r), saturating at the size_t maximum.
std::size_t binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 out = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    out = out * (n - r + i) / i;
    if (out > std::numeric_limits<std::size_t>::max()) return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(out);
}

// Advances `c` (strictly increasing, drawn from `pool`) to the next combination in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t pool) {
  const std::size_t r = c.size();
  for (std::size_t i = r; i-- > 0;) {
    if (c[i] < pool - r + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

template <typename Visit>
void for_each_combination(std::size_t pool, std::size_t r, Visit&& visit) {
  std::vector<std::size_t> c(r);
  std::iota(c.begin(), c.end(), 0);
  if (r > pool) return;
  do {
    if (!visit(c)) return;
  } while (next_combination(c, pool));
}

std::vector<std::size_t> random_subset(std::vector<std::size_t> pool, std::size_t r, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < r; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(r);
  std::sort(pool.begin(), pool.end());
  return pool;
}

SweepMode choose_mode(std::size_t total, const Options& options, const char* what) {
  switch (options.strategy) {
    case Strategy::exhaustive:
      if (total > options.exhaustive_limit) {
        throw ResourceError(std::string(what) + ": " + std::to_string(total) + " cases exceed the exhaustive limit of " +
                            std::to_string(options.exhaustive_limit));
      }
      return {true, 0, 0};
    case Strategy::sampled:
      return {false, options.seed, options.trials};
    case Strategy::automatic:
      break;
  }
  if (total <= options.exhaustive_limit) return {true, 0, 0};
  return {false, options.seed, options.trials};
}

std::string rational_text(const Rational& r) { return r.to_string(); }

nlohmann::ordered_json point_json(const SymbolPoint& p) {
  nlohmann::ordered_json out;
  out["alpha"] = p.alpha;
  out["gamma"] = p.gamma;
  out["file_size"] = p.file_size;
  return out;
}

nlohmann::ordered_json mode_json(const SweepMode& mode) {
  nlohmann::ordered_json out;
  out["kind"] = mode.exhaustive ? "exhaustive" : "sampled";
  if (!mode.exhaustive) {
    out["seed"] = mode.seed;
    out["trials"] = mode.trials;
  }
  return out;
}

}  // namespace

bool VerificationReport::passed() const {
  return reconstruction.ok && repair.ok && measurement.match && measurement.declared_match;
}

tradeoff::OperatingPoint to_operating_point(const SymbolPoint& point) {
  return {Rational(static_cast<long>(point.alpha)), Rational(static_cast<long>(point.gamma)), std::nullopt,
          Rational(static_cast<long>(point.file_size))};
}

std::vector<SymbolVector> probe_messages(const LinearDss& dss, const Options& options) {
  const std::size_t len = dss.file_size();
  std::vector<SymbolVector> probes;
  probes.emplace_back(len, Symbol{0});
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::uint32_t> symbol(0, dss.field().order() - 1);
  for (int r = 0; r < 2; ++r) {
    SymbolVector message(len);
    for (auto& s : message) s = static_cast<Symbol>(symbol(rng));
    probes.push_back(std::move(message));
  }
  if (options.strict_basis) {
    for (std::size_t i = 0; i < len; ++i) {
      SymbolVector unit(len, Symbol{0});
      unit[i] = 1;
      probes.push_back(std::move(unit));
    }
  }
  return probes;
}

ReconstructionResult verify_reconstruction(const LinearDss& dss, const Options& options) {
  const std::size_t n = dss.node_count();
  const auto k = static_cast<std::size_t>(dss.params().k());
  ReconstructionResult result;
  result.mode = choose_mode(binomial(n, k), options, "reconstruction");

  const auto probes = probe_messages(dss, options);
  std::vector<std::vector<SymbolVector>> encoded;
  for (const auto& m : probes) encoded.push_back(encode(dss, m));

  auto check = [&](const std::vector<std::size_t>& subset) {
    ++result.checks;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      std::vector<SymbolVector> contents;
      for (NodeIndex i : subset) contents.push_back(encoded[p][i]);
      try {
        if (reconstruct(dss, subset, contents) == probes[p]) continue;
        result.failure = "decoded message differs from the original";
      } catch (const std::exception& e) {
        result.failure = e.what();
      }
      result.ok = false;
      result.counterexample = subset;
      return false;
    }
    return true;
  };

  if (result.mode.exhaustive) {
    for_each_combination(n, k, check);
  } else {
    std::mt19937_64 rng(options.seed);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t t = 0; t < options.trials; ++t) {
      if (!check(random_subset(all, k, rng))) break;
    }
  }
  return result;
}

RepairResult verify_exact_repair(const LinearDss& dss, const Options& options) {
  const std::size_t n = dss.node_count();
  const auto d = static_cast<std::size_t>(dss.params().d());
  RepairResult result;
  const std::size_t per_node = binomial(n - 1, d);
  const std::size_t total = per_node > std::numeric_limits<std::size_t>::max() / n ? per_node : n * per_node;
  result.mode = choose_mode(total, options, "repair");

  const auto probes = probe_messages(dss, options);
  std::vector<std::vector<SymbolVector>> encoded;
  for (const auto& m : probes) encoded.push_back(encode(dss, m));

  auto check = [&](NodeIndex failed, const std::vector<NodeIndex>& helpers) {
    ++result.checks;
    RepairRecord record{failed, helpers, {}};
    for (std::size_t p = 0; p < probes.size(); ++p) {
      std::vector<SymbolVector> contents;
      for (NodeIndex h : helpers) contents.push_back(encoded[p][h]);
      try {
        RepairOutcome outcome = repair(dss, failed, helpers, contents);
        if (p == 0) {
          record.bandwidth = outcome.bandwidth;
        } else if (!(outcome.bandwidth == record.bandwidth)) {
          result.bandwidth_data_independent = false;
        }
        if (outcome.content == encoded[p][failed]) continue;
        result.failure = "repaired content differs from the lost node";
      } catch (const std::exception& e) {
        result.failure = e.what();
      }
      result.ok = false;
      result.counterexample = std::make_pair(failed, helpers);
      return false;
    }
    result.records.push_back(std::move(record));
    return true;
  };

  // Helper sets are drawn from the n-1 survivors; map pool index to node index around `failed`.
  auto lift = [](NodeIndex failed, std::vector<std::size_t> pool_indices) {
    for (auto& i : pool_indices) i += i >= failed ? 1 : 0;
    return pool_indices;
  };

  if (result.mode.exhaustive) {
    for (NodeIndex failed = 0; failed < n && result.ok; ++failed) {
      for_each_combination(n - 1, d, [&](const std::vector<std::size_t>& c) { return check(failed, lift(failed, c)); });
    }
  } else {
    std::mt19937_64 rng(options.seed ^ 0x9E3779B97F4A7C15ULL);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> pool(n - 1);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t t = 0; t < options.trials; ++t) {
      const NodeIndex failed = pick(rng);
      if (!check(failed, lift(failed, random_subset(pool, d, rng)))) break;
    }
  }
  return result;
}

SymmetryResult check_symmetric_repair(const std::vector<RepairRecord>& records) {
  SymmetryResult result;
  for (const auto& r : records) {
    if (r.bandwidth.per_helper.empty()) continue;
    const auto [lo, hi] = std::minmax_element(r.bandwidth.per_helper.begin(), r.bandwidth.per_helper.end(),
                                              [](const auto& a, const auto& b) { return a.second < b.second; });
    result.max_deviation = std::max(result.max_deviation, hi->second - lo->second);
  }
  result.symmetric = result.max_deviation == 0;
  return result;
}

Measurement measure_and_compare(const LinearDss& dss, const RepairResult& repair,
                                const tradeoff::OperatingPoint& predicted) {
  Measurement m;
  const auto [lo, hi] = std::minmax_element(dss.node_sizes().begin(), dss.node_sizes().end());
  m.measured.alpha = *hi;
  m.alpha_uniform = *lo == *hi;
  if (!repair.records.empty()) {
    std::size_t gmin = std::numeric_limits<std::size_t>::max();
    std::size_t gmax = 0;
    for (const auto& r : repair.records) {
      gmin = std::min(gmin, r.bandwidth.total);
      gmax = std::max(gmax, r.bandwidth.total);
    }
    m.measured.gamma = gmax;
    m.gamma_constant = gmin == gmax;
  }
  m.measured.file_size = dss.file_size();
  m.declared_match = m.measured == dss.declared() && m.alpha_uniform && m.gamma_constant;

  const tradeoff::OperatingPoint got = to_operating_point(m.measured);
  m.match = m.alpha_uniform && m.gamma_constant && got.alpha.sign() > 0 && predicted.alpha.sign() > 0 &&
            got.gamma / got.alpha == predicted.gamma / predicted.alpha &&
            got.file_size / got.alpha == predicted.file_size / predicted.alpha;
  return m;
}

VerificationReport verify(const LinearDss& dss, const Options& options,
                          std::optional<tradeoff::OperatingPoint> predicted, std::string predicted_label) {
  VerificationReport report;
  report.kind = dss.kind();
  report.params = dss.params();
  report.declared = dss.declared();
  report.reconstruction = verify_reconstruction(dss, options);
  report.repair = verify_exact_repair(dss, options);
  report.symmetry = check_symmetric_repair(report.repair.records);
  report.predicted = predicted ? *predicted : to_operating_point(dss.declared());
  report.predicted_label = std::move(predicted_label);
  report.measurement = measure_and_compare(dss, report.repair, report.predicted);
  return report;
}

nlohmann::ordered_json to_json(const VerificationReport& report) {
  nlohmann::ordered_json out;
  out["kind"] = report.kind;
  out["params"] = {{"n", report.params.n()}, {"k", report.params.k()}, {"d", report.params.d()}};
  out["passed"] = report.passed();

  nlohmann::ordered_json recon;
  recon["ok"] = report.reconstruction.ok;
  recon["counterexample"] = report.reconstruction.counterexample ? nlohmann::ordered_json(*report.reconstruction.counterexample)
                                                                 : nlohmann::ordered_json(nullptr);
  if (!report.reconstruction.ok) recon["failure"] = report.reconstruction.failure;
  recon["checks"] = report.reconstruction.checks;
  recon["mode"] = mode_json(report.reconstruction.mode);
  out["reconstruction"] = std::move(recon);

  nlohmann::ordered_json rep;
  rep["ok"] = report.repair.ok;
  if (report.repair.counterexample) {
    rep["counterexample"] = {{"failed", report.repair.counterexample->first},
                             {"helpers", report.repair.counterexample->second}};
  } else {
    rep["counterexample"] = nullptr;
  }
  if (!report.repair.ok) rep["failure"] = report.repair.failure;
  rep["checks"] = report.repair.checks;
  rep["mode"] = mode_json(report.repair.mode);
  rep["bandwidth_data_independent"] = report.repair.bandwidth_data_independent;
  out["repair"] = std::move(rep);

  out["checks_run"] = report.checks_run();
  out["symmetric"] = report.symmetry.symmetric;
  out["max_helper_deviation"] = report.symmetry.max_deviation;

  const Measurement& m = report.measurement;
  out["measured"] = point_json(m.measured);
  out["alpha_uniform"] = m.alpha_uniform;
  out["gamma_constant"] = m.gamma_constant;
  out["declared"] = point_json(report.declared);
  out["declared_match"] = m.declared_match;

  nlohmann::ordered_json pred;
  pred["source"] = report.predicted_label;
  pred["alpha"] = rational_text(report.predicted.alpha);
  pred["gamma"] = rational_text(report.predicted.gamma);
  pred["file_size"] = rational_text(report.predicted.file_size);
  out["predicted"] = std::move(pred);
  if (m.measured.alpha > 0) {
    const auto got = to_operating_point(m.measured);
    out["normalized"] = {{"gamma", rational_text(got.gamma / got.alpha)},
                         {"file_size", rational_text(got.file_size / got.alpha)}};
  }
  out["match"] = m.match;
  return out;
}

}  // namespace regen::verify
