#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "regen/rational.hpp"

// Exact evaluation of the storage/bandwidth tradeoff: the functional-repair
// cut-set capacity, the MSR/MBR extremes, the timesharing line between them,
// and the achievable file sizes P1..P4 of the exact-repair constructions.
namespace regen::tradeoff {

/// The (n, k, d) triple of a storage system, with 1 <= k <= d <= n-1.
class SystemParams {
 public:
  /// Throws InputError when the triple violates 1 <= k <= d <= n-1.
  SystemParams(std::int64_t n, std::int64_t k, std::int64_t d);

  std::int64_t n() const { return n_; }
  std::int64_t k() const { return k_; }
  std::int64_t d() const { return d_; }
  std::int64_t epsilon() const { return n_ - k_; }
  std::int64_t delta() const { return n_ - d_; }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;

 private:
  std::int64_t n_;
  std::int64_t k_;
  std::int64_t d_;
};

struct OperatingPoint {
  Rational alpha;
  Rational gamma;
  std::optional<Rational> beta;
  Rational file_size;

  friend bool operator==(const OperatingPoint&, const OperatingPoint&) = default;
};

/// Split of n nodes into pieces sharing the same gaps n_j-k_j and n_j-d_j.
struct SplitSpec {
  std::int64_t l = 0;
  std::vector<std::int64_t> sizes;
  std::vector<std::int64_t> k_parts;
  std::vector<std::int64_t> d_parts;
};

/// Parameters (n+M, k+M, d+M) tied to the bandwidth fraction s in (0, 1].
struct AsymptoticSetup {
  SystemParams base;
  Rational s;
  std::int64_t shift = 0;

  SystemParams shifted() const;
  /// 1 + s (k_M - 1), generally not an integer.
  Rational index() const;
};

enum class IndexRounding { nearest, exact };

struct AsymptoticResult {
  Rational fraction;
  Rational index_used;
  Rational h1;
  Rational h2;
  Rational h3;
  Rational h4;
};

/// sum_{j=0}^{k-1} min{alpha, (d-j) gamma / d}, evaluated in closed form.
Rational functional_capacity(const SystemParams& p, const Rational& alpha, const Rational& gamma);

OperatingPoint msr_point(const SystemParams& p, const Rational& file_size);
OperatingPoint mbr_point(const SystemParams& p, const Rational& file_size);

/// File size on the MBR-MSR timesharing line at fixed alpha, alpha <= gamma <= d alpha/(d-k+1).
Rational timeshare_bound(const SystemParams& p, const Rational& alpha, const Rational& gamma);

/// Repair bandwidth (d-k+x) alpha / (d-k+1) of the main construction at index x.
Rational p1_gamma(const SystemParams& p, const Rational& alpha, const Rational& x);

/// Main construction seeded by an MSR code: integer index 1 <= i <= k.
OperatingPoint perf_p1(const SystemParams& p, const Rational& alpha, std::int64_t i);

/// Piecewise-linear file size between the integer points of perf_p1, 1 <= x <= k.
Rational perf_p1_interpolated(const SystemParams& p, const Rational& alpha, const Rational& x);

/// n/(n-j) * base_file_size for a system at (n-j, k-j, d-j), 0 <= j <= k-1.
Rational lift_bound(const SystemParams& p, std::int64_t j, const Rational& base_file_size);

/// l-1 pieces of floor(n/l) nodes and one remainder piece, 1 <= l <= floor(n/(n+1-k)).
SplitSpec split_params(const SystemParams& p, std::int64_t l);
std::int64_t max_split(const SystemParams& p);

OperatingPoint perf_p2(const SystemParams& p, const Rational& alpha, std::int64_t l);

/// Node-copy construction, 1 <= l <= floor((k-1)/2).
OperatingPoint perf_p3(const SystemParams& p, const Rational& alpha, std::int64_t l);

/// File-node construction built on `base` = (n, k, d); the point lives at (n+1, k, d), node size alpha.
OperatingPoint perf_p4(const SystemParams& base, const Rational& alpha);
/// Same construction before normalizing: node size (n+k) alpha, file (n+1) k alpha.
OperatingPoint perf_p4_unnormalized(const SystemParams& base, const Rational& alpha);

/// P1 / C for the (n, n-1, n-1) family at gamma = i alpha, 1 <= i <= n-1.
Rational closecase_fraction(std::int64_t n, std::int64_t i);
/// 2 i^2 / (2 i^2 + i - 1), the large-n value of closecase_fraction.
Rational closecase_limit(std::int64_t i);

/// P1 / C on the shifted family, plus the Appendix terms h1..h4 (which always use the exact index).
AsymptoticResult asymptotic_fraction(const AsymptoticSetup& setup,
                                     IndexRounding rounding = IndexRounding::nearest);

}  // namespace regen::tradeoff
