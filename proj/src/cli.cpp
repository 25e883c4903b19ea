#include "regen/cli.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "regen/errors.hpp"

namespace regen::cli {

namespace tr = regen::tradeoff;
namespace cs = regen::constructions;

namespace {

class RecipeParser {
 public:
  explicit RecipeParser(const std::string& text) : text_(text) {}

  Recipe parse() {
    Recipe r = recipe();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("recipe '" + text_ + "': " + what + " at position " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Recipe recipe() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(text_[start]))) fail("expected a construction name");
    Recipe r;
    r.op = text_.substr(start, pos_ - start);
    expect('(');
    do {
      skip_space();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        std::int64_t value = 0;
        const auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (ec != std::errc()) fail("integer out of range");
        pos_ = static_cast<std::size_t>(end - text_.data());
        r.integers.push_back(value);
      } else {
        if (!r.integers.empty()) fail("sub-recipes must precede integer arguments");
        r.children.push_back(recipe());
      }
    } while (peek(',') && (++pos_, true));
    expect(')');
    validate(r);
    return r;
  }

  void validate(const Recipe& r) const {
    auto shape = [&](std::size_t children, std::size_t integers) {
      if (r.children.size() != children || r.integers.size() != integers) {
        fail(r.op + " takes " + std::to_string(children) + " sub-recipe(s) and " + std::to_string(integers) +
             " integer(s)");
      }
    };
    if (r.op == "base") {
      if (r.integers.size() != 3 || !r.children.empty()) shape(0, 2);
    } else if (r.op == "blowup_simple" || r.op == "blowup_full" || r.op == "filenode_blowup") {
      shape(1, 0);
    } else if (r.op == "iterate" || r.op == "copy_blowup") {
      shape(1, 1);
    } else if (r.op == "concat") {
      if (r.children.empty() || !r.integers.empty()) fail("concat takes one or more sub-recipes");
    } else {
      fail("unknown construction '" + r.op + "'");
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

Rational factorial(std::int64_t n) {
  Rational out(1);
  for (std::int64_t i = 2; i <= n; ++i) out = out * Rational(i);
  return out;
}

tr::SystemParams shift(const tr::SystemParams& p, std::int64_t by) { return {p.n() + by, p.k() + by, p.d() + by}; }

Prediction lift_once(const Prediction& base) {
  Prediction out;
  out.params = shift(base.params, 1);
  if (base.p1_index) {
    out.point = tr::perf_p1(out.params, Rational(1), *base.p1_index);
    out.p1_index = base.p1_index;
    out.source = "p1";
  } else {
    out.point = {Rational(1), base.point.gamma, std::nullopt, tr::lift_bound(out.params, 1, base.point.file_size)};
    out.source = "lift";
  }
  return out;
}

std::string exact(const std::optional<Rational>& r) { return r ? r->to_string() : std::string(); }
std::string decimal(const std::optional<Rational>& r) { return r ? r->to_decimal(12) : std::string(); }

nlohmann::ordered_json value_json(const Rational& r) {
  nlohmann::ordered_json out;
  out["exact"] = r.to_string();
  out["decimal"] = r.to_decimal(12);
  return out;
}

Rational gamma_max(const tr::SystemParams& p, const Rational& alpha) {
  return Rational(p.d()) * alpha / Rational(p.d() - p.k() + 1);
}

// P1 index x at bandwidth gamma: gamma = (d-k+x) alpha / (d-k+1).
Rational p1_index_at(const tr::SystemParams& p, const Rational& alpha, const Rational& gamma) {
  return gamma * Rational(p.d() - p.k() + 1) / alpha - Rational(p.d() - p.k());
}

std::map<Rational, Rational> p2_points(const tr::SystemParams& p, const Rational& alpha) {
  std::map<Rational, Rational> out;
  for (std::int64_t l = 1; l <= tr::max_split(p); ++l) {
    const auto pt = tr::perf_p2(p, alpha, l);
    auto [it, fresh] = out.emplace(pt.gamma, pt.file_size);
    if (!fresh) it->second = max(it->second, pt.file_size);
  }
  return out;
}

std::map<Rational, Rational> p3_points(const tr::SystemParams& p, const Rational& alpha) {
  std::map<Rational, Rational> out;
  for (std::int64_t l = 1; l <= (p.k() - 1) / 2; ++l) {
    const auto pt = tr::perf_p3(p, alpha, l);
    auto [it, fresh] = out.emplace(pt.gamma, pt.file_size);
    if (!fresh) it->second = max(it->second, pt.file_size);
  }
  return out;
}

// P4 lives at (n, k, d) when built on (n-1, k, d).
std::optional<tr::OperatingPoint> p4_point(const tr::SystemParams& p, const Rational& alpha) {
  if (p.d() > p.n() - 2) return std::nullopt;
  const auto pt = tr::perf_p4(tr::SystemParams(p.n() - 1, p.k(), p.d()), alpha);
  if (pt.gamma < alpha || gamma_max(p, alpha) < pt.gamma) return std::nullopt;
  return pt;
}

}  // namespace

std::string Recipe::to_string() const {
  std::string out = op + "(";
  bool first = true;
  for (const auto& c : children) {
    out += (first ? "" : ",") + c.to_string();
    first = false;
  }
  for (auto v : integers) {
    out += (first ? "" : ",") + std::to_string(v);
    first = false;
  }
  return out + ")";
}

Recipe parse_recipe(const std::string& text) { return RecipeParser(text).parse(); }

DssPtr build(const Recipe& r, std::size_t budget) {
  if (r.op == "base") {
    const auto n = r.integers[0];
    const auto k = r.integers[1];
    if (k < 1 || n <= k) throw InputError("base(n,k) needs 1 <= k < n");
    const gf::Field field = r.integers.size() == 3 ? gf::Field(gf::default_spec(static_cast<int>(r.integers[2])))
                                                   : gf::Field::gf256();
    return rs_base(static_cast<std::size_t>(n), static_cast<std::size_t>(k), field);
  }
  if (r.op == "concat") {
    std::vector<DssPtr> parts;
    for (const auto& c : r.children) parts.push_back(build(c, budget));
    return cs::concat(std::move(parts), budget);
  }
  DssPtr base = build(r.children.front(), budget);
  if (r.op == "blowup_simple") return cs::blowup_simple(std::move(base), budget);
  if (r.op == "blowup_full") return cs::blowup_full(std::move(base), budget);
  if (r.op == "filenode_blowup") return cs::filenode_blowup(std::move(base), budget);
  if (r.integers.front() < 1) throw InputError(r.op + " needs a positive integer argument");
  const auto j = static_cast<std::size_t>(r.integers.front());
  if (r.op == "iterate") return cs::iterate(std::move(base), j, budget);
  return cs::copy_blowup(std::move(base), j, budget);
}

Prediction predict(const Recipe& r) {
  if (r.op == "base") {
    Prediction out;
    out.params = tr::SystemParams(r.integers[0], r.integers[1], r.integers[1]);
    out.point = tr::perf_p1(out.params, Rational(1), out.params.k());
    out.p1_index = out.params.k();
    out.msr_base = true;
    out.source = "p1";
    return out;
  }
  if (r.op == "concat") {
    std::vector<Prediction> parts;
    std::int64_t n = 0;
    for (const auto& c : r.children) {
      parts.push_back(predict(c));
      n += parts.back().params.n();
    }
    const auto& first = parts.front().params;
    Prediction out;
    out.params = tr::SystemParams(n, n - first.epsilon(), n - first.delta());
    const auto l = static_cast<std::int64_t>(parts.size());
    bool split = l <= tr::max_split(out.params);
    if (split) {
      const auto spec = tr::split_params(out.params, l);
      for (std::size_t j = 0; j < parts.size(); ++j) {
        split = split && parts[j].msr_base && parts[j].params.n() == spec.sizes[j];
      }
    }
    if (split) {
      out.point = tr::perf_p2(out.params, Rational(1), l);
      out.source = "p2";
      return out;
    }
    Rational gamma = parts.front().point.gamma;
    Rational file(0);
    for (const auto& part : parts) {
      gamma = max(gamma, part.point.gamma);
      file = file + part.point.file_size;
    }
    out.point = {Rational(1), gamma, std::nullopt, file};
    out.source = "sum";
    return out;
  }
  const Prediction base = predict(r.children.front());
  if (r.op == "blowup_simple" || r.op == "blowup_full") return lift_once(base);
  if (r.op == "iterate") {
    Prediction out = base;
    for (std::int64_t level = 0; level < r.integers.front(); ++level) out = lift_once(out);
    return out;
  }
  const Rational n(base.params.n());
  const Rational k(base.params.k());
  const Rational d(base.params.d());
  Prediction out;
  if (r.op == "copy_blowup") {
    const std::int64_t l = r.integers.front();
    out.params = shift(base.params, l);
    if (base.msr_base && l >= 1 && l <= (out.params.k() - 1) / 2) {
      out.point = tr::perf_p3(out.params, Rational(1), l);
      out.source = "p3";
      return out;
    }
    const Rational copies = factorial(base.params.n() + l);
    const Rational twin = Rational(2 * l) * (d + Rational(l)) * factorial(base.params.n() + l - 2);
    out.point = {Rational(1), (twin + (copies - twin) * base.point.gamma) / copies, std::nullopt,
                 base.point.file_size};
    out.source = "copy_closed_form";
    return out;
  }
  // filenode_blowup
  out.params = tr::SystemParams(base.params.n() + 1, base.params.k(), base.params.d());
  if (base.msr_base) {
    out.point = tr::perf_p4(base.params, Rational(1));
    out.source = "p4";
    return out;
  }
  const Rational node = n + base.point.file_size;
  out.point = {Rational(1), ((n - d) * base.point.gamma + d + k) / node, std::nullopt,
               (n + 1) * base.point.file_size / node};
  out.source = "filenode_closed_form";
  return out;
}

ConstructResult run_construct_verify(const std::string& text, const verify::Options& options, std::size_t budget) {
  const Recipe recipe = parse_recipe(text);
  const Prediction prediction = predict(recipe);
  const DssPtr dss = build(recipe, budget);
  const auto report = verify::verify(*dss, options, prediction.point, prediction.source);
  ConstructResult out;
  out.code = dss;
  out.report["recipe"] = recipe.to_string();
  out.report.update(verify::to_json(report));
  out.report["composition"] = dss->describe();
  out.passed = report.passed();
  return out;
}

std::string run_curve(const tr::SystemParams& p, const Rational& alpha, std::size_t samples) {
  if (samples < 2) throw InputError("curve needs at least 2 samples");
  if (alpha.sign() <= 0) throw InputError("alpha must be positive");
  const Rational top = gamma_max(p, alpha);
  std::set<Rational> grid;
  for (std::size_t j = 0; j < samples; ++j) {
    grid.insert(alpha + (top - alpha) * Rational(static_cast<long>(j)) / Rational(static_cast<long>(samples - 1)));
  }
  for (std::int64_t i = 1; i <= p.k(); ++i) grid.insert(tr::p1_gamma(p, alpha, Rational(i)));
  const auto p2 = p2_points(p, alpha);
  const auto p3 = p3_points(p, alpha);
  const auto p4 = p4_point(p, alpha);
  for (const auto& [g, b] : p2) grid.insert(g);
  for (const auto& [g, b] : p3) grid.insert(g);
  if (p4) grid.insert(p4->gamma);

  auto lookup = [](const std::map<Rational, Rational>& m, const Rational& g) -> std::optional<Rational> {
    const auto it = m.find(g);
    return it == m.end() ? std::nullopt : std::optional<Rational>(it->second);
  };

  std::ostringstream out;
  out << "gamma,capacity,p1,p2,p3,p4,timeshare,"
         "gamma_dec,capacity_dec,p1_dec,p2_dec,p3_dec,p4_dec,timeshare_dec,p1_realizable\n";
  for (const Rational& g : grid) {
    const Rational x = p1_index_at(p, alpha, g);
    const std::vector<std::optional<Rational>> cells = {
        g,
        tr::functional_capacity(p, alpha, g),
        tr::perf_p1_interpolated(p, alpha, x),
        lookup(p2, g),
        lookup(p3, g),
        (p4 && p4->gamma == g) ? std::optional<Rational>(p4->file_size) : std::nullopt,
        tr::timeshare_bound(p, alpha, g),
    };
    for (const auto& c : cells) out << exact(c) << ',';
    for (const auto& c : cells) out << decimal(c) << ',';
    out << (x.is_integer() ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string run_asymptotic(const AsymptoticRequest& request) {
  std::ostringstream out;
  out << "s,M,i,fraction,fraction_dec,h1_over_M3,h2_over_M,h3_over_M2,h4_over_M2\n";
  for (const Rational& s : request.s_values) {
    for (std::int64_t m : request.shifts) {
      const tr::AsymptoticSetup setup{request.base, s, m};
      const auto r = tr::asymptotic_fraction(setup, request.rounding);
      const Rational big(m);
      out << s.to_string() << ',' << m << ',' << r.index_used.to_string() << ',' << r.fraction.to_string() << ','
          << r.fraction.to_decimal(12) << ',' << (r.h1 / (big * big * big)).to_decimal(12) << ','
          << (r.h2 / big).to_decimal(12) << ',' << (r.h3 / (big * big)).to_decimal(12) << ','
          << (r.h4 / (big * big)).to_decimal(12) << '\n';
    }
  }
  return out.str();
}

nlohmann::ordered_json run_compare(const tr::SystemParams& p, const Rational& alpha, const Rational& gamma) {
  if (alpha.sign() <= 0 || gamma.sign() <= 0) throw InputError("alpha and gamma must be positive");
  nlohmann::ordered_json out;
  out["params"] = {{"n", p.n()}, {"k", p.k()}, {"d", p.d()}};
  out["alpha"] = alpha.to_string();
  out["gamma"] = gamma.to_string();
  out["capacity"] = value_json(tr::functional_capacity(p, alpha, gamma));
  const bool in_range = !(gamma < alpha) && !(gamma_max(p, alpha) < gamma);
  out["timeshare"] = in_range ? value_json(tr::timeshare_bound(p, alpha, gamma)) : nlohmann::ordered_json(nullptr);
  if (in_range) {
    const Rational x = p1_index_at(p, alpha, gamma);
    auto p1 = value_json(tr::perf_p1_interpolated(p, alpha, x));
    p1["index"] = x.to_string();
    p1["realizable"] = x.is_integer();
    out["p1"] = std::move(p1);
  } else {
    out["p1"] = nullptr;
  }
  const auto p2 = p2_points(p, alpha);
  const auto p3 = p3_points(p, alpha);
  const auto p4 = p4_point(p, alpha);
  out["p2"] = p2.count(gamma) ? value_json(p2.at(gamma)) : nlohmann::ordered_json(nullptr);
  out["p3"] = p3.count(gamma) ? value_json(p3.at(gamma)) : nlohmann::ordered_json(nullptr);
  out["p4"] = (p4 && p4->gamma == gamma) ? value_json(p4->file_size) : nlohmann::ordered_json(nullptr);
  return out;
}

}  // namespace regen::cli
