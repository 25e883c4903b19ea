#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "regen/constructions.hpp"
#include "regen/errors.hpp"
#include "regen/verifier.hpp"

using namespace regen;
namespace cs = regen::constructions;

namespace {

// Forwards to a healthy code but breaks one thing on purpose.
class Faulty final : public LinearDss {
 public:
  enum class Fault { zero_generator_row, zero_transfer, none };

  Faulty(DssPtr inner, Fault fault)
      : LinearDss(inner->field(), inner->params(), inner->node_sizes(), inner->file_size(), inner->declared()),
        inner_(std::move(inner)),
        fault_(fault) {}

  std::string kind() const override { return "faulty"; }
  nlohmann::json describe() const override { return inner_->describe(); }
  std::vector<SymbolVector> encode_nodes(std::span<const Symbol> message) const override {
    auto nodes = inner_->encode_nodes(message);
    if (fault_ == Fault::zero_generator_row) nodes[0][0] = 0;
    return nodes;
  }
  SymbolVector decode(std::span<const NodeIndex> subset, std::span<const SymbolVector> contents) const override {
    return inner_->decode(subset, contents);
  }
  std::size_t transfer_size(NodeIndex failed, std::span<const NodeIndex> helpers, NodeIndex helper) const override {
    return inner_->transfer_size(failed, helpers, helper);
  }
  SymbolVector helper_transfer(NodeIndex failed, std::span<const NodeIndex> helpers, NodeIndex helper,
                               std::span<const Symbol> content) const override {
    auto sent = inner_->helper_transfer(failed, helpers, helper, content);
    if (fault_ == Fault::zero_transfer && helper == helpers.front()) std::fill(sent.begin(), sent.end(), Symbol{0});
    return sent;
  }
  SymbolVector rebuild(NodeIndex failed, std::span<const NodeIndex> helpers,
                       std::span<const SymbolVector> transfers) const override {
    return inner_->rebuild(failed, helpers, transfers);
  }

 private:
  DssPtr inner_;
  Fault fault_;
};

}  // namespace

TEST_CASE("exhaustive counts") {
  for (auto code : {cs::blowup_full(rs_base(3, 2)), rs_base(5, 2), cs::filenode_blowup(rs_base(3, 2))}) {
    const auto report = verify::verify(*code);
    const auto n = code->node_count();
    const auto k = static_cast<std::size_t>(code->params().k());
    const auto d = static_cast<std::size_t>(code->params().d());
    CHECK(report.reconstruction.mode.exhaustive);
    CHECK(report.checks_run() == oracle::choose(n, k) + n * oracle::choose(n - 1, d));
    CHECK(report.passed());
  }
}

TEST_CASE("rs_base(5,2) repairs with two symbols") {
  const auto report = verify::verify(*rs_base(5, 2));
  CHECK(report.repair.checks == 30);
  for (const auto& r : report.repair.records) CHECK(r.bandwidth.total == 2);
  CHECK(report.reconstruction.checks == 10);
}

TEST_CASE("symmetry") {
  const auto full = verify::verify(*cs::blowup_full(rs_base(3, 2)));
  CHECK(full.symmetry.symmetric);
  for (const auto& r : full.repair.records) {
    for (const auto& [h, c] : r.bandwidth.per_helper) CHECK(c == 12);
  }
  CHECK(verify::verify(*cs::blowup_simple(rs_base(3, 2))).symmetry.symmetric);
  // helpers outside the failed node's part send nothing
  const auto cat = verify::verify(*cs::concat({rs_base(3, 2), rs_base(3, 2)}));
  CHECK_FALSE(cat.symmetry.symmetric);
  CHECK(cat.symmetry.max_deviation == 1);
}

TEST_CASE("measured points") {
  const auto full = verify::verify(*cs::blowup_full(rs_base(3, 2)));
  CHECK(full.measurement.measured == SymbolPoint{18, 36, 48});
  const auto copy = verify::verify(*cs::copy_blowup(rs_base(3, 2), 1));
  CHECK(copy.measurement.measured == SymbolPoint{24, 36, 48});
  const auto file = verify::verify(*cs::filenode_blowup(rs_base(3, 2)));
  CHECK(file.measurement.measured == SymbolPoint{30, 36, 48});
  for (const auto* r : {&full, &copy, &file}) {
    CHECK(r->measurement.declared_match);
    CHECK(r->measurement.match);
  }
  // normalized comparison: B/alpha = 8/3 at gamma/alpha = 2
  const auto m = verify::measure_and_compare(*cs::blowup_full(rs_base(3, 2)), full.repair,
                                             {Rational(3), Rational(6), std::nullopt, Rational(8)});
  CHECK(m.match);
  const auto wrong = verify::measure_and_compare(*cs::blowup_full(rs_base(3, 2)), full.repair,
                                                 {Rational(3), Rational(6), std::nullopt, Rational(9)});
  CHECK_FALSE(wrong.match);
}

TEST_CASE("fault injection") {
  const Faulty broken_generator(rs_base(4, 2), Faulty::Fault::zero_generator_row);
  const auto r1 = verify::verify_reconstruction(broken_generator);
  CHECK_FALSE(r1.ok);
  REQUIRE(r1.counterexample.has_value());
  CHECK(r1.counterexample->front() == 0);

  const Faulty broken_repair(cs::blowup_full(rs_base(3, 2)), Faulty::Fault::zero_transfer);
  const auto r2 = verify::verify_exact_repair(broken_repair);
  CHECK_FALSE(r2.ok);
  CHECK(r2.counterexample.has_value());

  const Faulty healthy(rs_base(4, 2), Faulty::Fault::none);
  CHECK(verify::verify(healthy).passed());
}

TEST_CASE("probe messages") {
  const auto code = rs_base(4, 3);
  verify::Options o;
  o.seed = 99;
  const auto a = verify::probe_messages(*code, o);
  CHECK(a.size() == 3);
  CHECK(a[0] == SymbolVector(3, 0));
  CHECK(a == verify::probe_messages(*code, o));
  o.strict_basis = true;
  CHECK(verify::probe_messages(*code, o).size() == 6);
  CHECK(verify::verify(*cs::blowup_simple(rs_base(3, 2)), o).passed());
}

TEST_CASE("sampling and ceilings") {
  const auto code = rs_base(20, 10);  // C(20,10) = 184756 subsets
  verify::Options strict;
  strict.strategy = verify::Strategy::exhaustive;
  CHECK_THROWS_AS(verify::verify_reconstruction(*code, strict), regen::ResourceError);
  verify::Options automatic;
  automatic.trials = 300;
  automatic.seed = 5;
  const auto r = verify::verify_reconstruction(*code, automatic);
  CHECK_FALSE(r.mode.exhaustive);
  CHECK(r.mode.seed == 5);
  CHECK(r.checks == 300);
  CHECK(r.ok);
  const auto rep = verify::verify_exact_repair(*code, automatic);
  CHECK_FALSE(rep.mode.exhaustive);
  CHECK(rep.ok);
  const auto json = verify::to_json(verify::verify(*code, automatic));
  CHECK(json["reconstruction"]["mode"]["kind"] == "sampled");
  CHECK(json["reconstruction"]["mode"]["seed"] == 5);
}

TEST_CASE("report json key order is stable") {
  const auto j = verify::to_json(verify::verify(*xor_base_322()));
  std::vector<std::string> keys;
  for (const auto& [key, value] : j.items()) keys.push_back(key);
  const std::vector<std::string> expected = {"kind",           "params",         "passed",   "reconstruction",
                                             "repair",         "checks_run",     "symmetric", "max_helper_deviation",
                                             "measured",       "alpha_uniform",  "gamma_constant", "declared",
                                             "declared_match", "predicted",      "normalized", "match"};
  CHECK(keys == expected);
  CHECK(j.dump() == verify::to_json(verify::verify(*xor_base_322())).dump());
}
