#include "regen/tradeoff.hpp"

#include <algorithm>
#include <string>

#include "regen/errors.hpp"

namespace regen::tradeoff {

namespace {

void require_positive(const Rational& value, const char* name) {
  if (value.sign() <= 0) throw RangeError(std::string(name) + " must be positive, got " + value.to_string());
}

std::string triple(const SystemParams& p) {
  return "(" + std::to_string(p.n()) + "," + std::to_string(p.k()) + "," + std::to_string(p.d()) + ")";
}

}  // namespace

SystemParams::SystemParams(std::int64_t n, std::int64_t k, std::int64_t d) : n_(n), k_(k), d_(d) {
  if (k < 1 || k > d || d > n - 1) {
    throw InputError("invalid system parameters (n,k,d)=(" + std::to_string(n) + "," + std::to_string(k) + "," +
                     std::to_string(d) + "): need 1 <= k <= d <= n-1");
  }
}

SystemParams AsymptoticSetup::shifted() const {
  if (shift < 0) throw RangeError("shift M must be non-negative");
  return SystemParams(base.n() + shift, base.k() + shift, base.d() + shift);
}

Rational AsymptoticSetup::index() const { return Rational(1) + s * Rational(shifted().k() - 1); }

Rational functional_capacity(const SystemParams& p, const Rational& alpha, const Rational& gamma) {
  require_positive(alpha, "alpha");
  require_positive(gamma, "gamma");
  const Rational d(p.d());
  const Rational k(p.k());
  // Summand j saturates at alpha iff (d-j) gamma >= d alpha, i.e. j <= d - d alpha / gamma.
  const Rational last_saturated = (d - d * alpha / gamma).floor();
  const Rational saturated = min(k, max(Rational(0), last_saturated + 1));
  const Rational unsaturated = k - saturated;
  // sum_{j=saturated}^{k-1} (d - j)
  const Rational tail = unsaturated * d - (saturated + k - 1) * unsaturated / 2;
  return saturated * alpha + gamma / d * tail;
}

OperatingPoint msr_point(const SystemParams& p, const Rational& file_size) {
  require_positive(file_size, "file size");
  const Rational k(p.k());
  const Rational d(p.d());
  const Rational gamma = d * file_size / (k * (d - k + 1));
  return {file_size / k, gamma, gamma / d, file_size};
}

OperatingPoint mbr_point(const SystemParams& p, const Rational& file_size) {
  require_positive(file_size, "file size");
  const Rational k(p.k());
  const Rational d(p.d());
  const Rational value = 2 * d * file_size / (k * (2 * d - k + 1));
  return {value, value, value / d, file_size};
}

Rational timeshare_bound(const SystemParams& p, const Rational& alpha, const Rational& gamma) {
  require_positive(alpha, "alpha");
  const Rational k(p.k());
  const Rational d(p.d());
  const Rational gamma_mbr = alpha;
  const Rational gamma_msr = d * alpha / (d - k + 1);
  if (gamma < gamma_mbr || gamma > gamma_msr) {
    throw RangeError("gamma " + gamma.to_string() + " outside [" + gamma_mbr.to_string() + ", " +
                     gamma_msr.to_string() + "] for " + triple(p));
  }
  const Rational file_mbr = k * (2 * d - k + 1) * alpha / (2 * d);
  const Rational file_msr = k * alpha;
  if (gamma_msr == gamma_mbr) return file_msr;  // k = 1: both extremes coincide
  const Rational t = (gamma - gamma_mbr) / (gamma_msr - gamma_mbr);
  return file_mbr + t * (file_msr - file_mbr);
}

Rational p1_gamma(const SystemParams& p, const Rational& alpha, const Rational& x) {
  return Rational(p.d() - p.k()) * alpha / Rational(p.d() - p.k() + 1) +
         x * alpha / Rational(p.d() - p.k() + 1);
}

OperatingPoint perf_p1(const SystemParams& p, const Rational& alpha, std::int64_t i) {
  require_positive(alpha, "alpha");
  if (i < 1 || i > p.k()) {
    throw RangeError("index i=" + std::to_string(i) + " outside [1," + std::to_string(p.k()) + "]");
  }
  const Rational file = Rational(p.n() * i) * alpha / Rational(p.n() - p.k() + i);
  return {alpha, p1_gamma(p, alpha, Rational(i)), std::nullopt, file};
}

Rational perf_p1_interpolated(const SystemParams& p, const Rational& alpha, const Rational& x) {
  if (x < 1 || x > Rational(p.k())) {
    throw RangeError("interpolation index " + x.to_string() + " outside [1," + std::to_string(p.k()) + "]");
  }
  const Rational lo = x.floor();
  const Rational hi = x.ceil();
  const Rational file_lo = perf_p1(p, alpha, lo.to_int64()).file_size;
  if (lo == hi) return file_lo;
  const Rational file_hi = perf_p1(p, alpha, hi.to_int64()).file_size;
  return file_lo + (x - lo) * (file_hi - file_lo);
}

Rational lift_bound(const SystemParams& p, std::int64_t j, const Rational& base_file_size) {
  if (j < 0 || j > p.k() - 1) {
    throw RangeError("lift depth j=" + std::to_string(j) + " outside [0," + std::to_string(p.k() - 1) + "]");
  }
  return Rational(p.n(), p.n() - j) * base_file_size;
}

std::int64_t max_split(const SystemParams& p) { return p.n() / (p.n() + 1 - p.k()); }

SplitSpec split_params(const SystemParams& p, std::int64_t l) {
  if (l < 1 || l > max_split(p)) {
    throw RangeError("split count l=" + std::to_string(l) + " outside [1," + std::to_string(max_split(p)) +
                     "] for " + triple(p));
  }
  SplitSpec spec;
  spec.l = l;
  const std::int64_t piece = p.n() / l;
  for (std::int64_t j = 0; j < l; ++j) {
    const std::int64_t size = (j + 1 < l) ? piece : p.n() - (l - 1) * piece;
    spec.sizes.push_back(size);
    spec.k_parts.push_back(size - p.epsilon());
    spec.d_parts.push_back(size - p.delta());
  }
  for (std::int64_t j = 0; j < l; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    if (spec.sizes[idx] < p.epsilon() + 1 || spec.k_parts[idx] < 1 || spec.k_parts[idx] > spec.d_parts[idx] ||
        spec.d_parts[idx] > spec.sizes[idx] - 1) {
      throw InvariantViolation("split piece " + std::to_string(j) + " of " + triple(p) + " is not a valid system");
    }
  }
  return spec;
}

OperatingPoint perf_p2(const SystemParams& p, const Rational& alpha, std::int64_t l) {
  require_positive(alpha, "alpha");
  const SplitSpec split = split_params(p, l);
  const Rational k1(split.k_parts.front());
  const Rational d1(split.d_parts.front());
  const Rational kl(split.k_parts.back());
  const Rational dl(split.d_parts.back());
  const Rational gamma = d1 * alpha / Rational(p.d() - p.k() + 1);
  const Rational file = (Rational(l - 1) * k1 + kl * d1 / dl) * alpha;
  return {alpha, gamma, std::nullopt, file};
}

OperatingPoint perf_p3(const SystemParams& p, const Rational& alpha, std::int64_t l) {
  require_positive(alpha, "alpha");
  if (l < 1 || l > (p.k() - 1) / 2) {
    throw RangeError("copy count l=" + std::to_string(l) + " outside [1," + std::to_string((p.k() - 1) / 2) +
                     "] for " + triple(p));
  }
  const Rational n(p.n());
  const Rational d(p.d());
  const Rational share = 2 * Rational(l) * d / (n * (n - 1));
  const Rational gamma = (share + (1 - share) * (d - Rational(l)) / Rational(p.d() - p.k() + 1)) * alpha;
  return {alpha, gamma, std::nullopt, Rational(p.k() - l) * alpha};
}

OperatingPoint perf_p4(const SystemParams& base, const Rational& alpha) {
  require_positive(alpha, "alpha");
  const Rational n(base.n());
  const Rational k(base.k());
  const Rational d(base.d());
  const Rational gamma = (n * d + d - k * k + k) * alpha / ((n + k) * (d - k + 1));
  const Rational file = (n + 1) * k * alpha / (n + k);
  return {alpha, gamma, std::nullopt, file};
}

OperatingPoint perf_p4_unnormalized(const SystemParams& base, const Rational& alpha) {
  require_positive(alpha, "alpha");
  const Rational n(base.n());
  const Rational k(base.k());
  const Rational d(base.d());
  return {(n + k) * alpha, (d * (n - d) / (d - k + 1) + d + k) * alpha, std::nullopt, (n + 1) * k * alpha};
}

Rational closecase_fraction(std::int64_t n, std::int64_t i) {
  if (n < 2) throw RangeError("close-case fraction needs n >= 2");
  if (i < 1 || i > n - 1) {
    throw RangeError("index i=" + std::to_string(i) + " outside [1," + std::to_string(n - 1) + "]");
  }
  const Rational nr(n);
  const Rational ir(i);
  const Rational t = ((nr - 1) * (1 - 1 / ir)).floor();
  const Rational numerator = nr * ir / (1 + ir);
  const Rational denominator = t + 1 + ir * (nr - t - 1) * (nr - t - 2) / (2 * (nr - 1));
  return numerator / denominator;
}

Rational closecase_limit(std::int64_t i) {
  const Rational ir(i);
  return 2 * ir * ir / (2 * ir * ir + ir - 1);
}

AsymptoticResult asymptotic_fraction(const AsymptoticSetup& setup, IndexRounding rounding) {
  if (setup.s.sign() <= 0 || setup.s > 1) throw RangeError("s must lie in (0,1], got " + setup.s.to_string());
  const SystemParams shifted = setup.shifted();
  const Rational exact_index = setup.index();
  if (exact_index < 1 || exact_index > Rational(shifted.k())) {
    throw RangeError("index " + exact_index.to_string() + " outside [1,k_M]");
  }

  AsymptoticResult result;
  const Rational alpha(1);
  if (rounding == IndexRounding::nearest) {
    const Rational rounded = min(Rational(shifted.k()), max(Rational(1), exact_index.round_half_up()));
    result.index_used = rounded;
    const OperatingPoint point = perf_p1(shifted, alpha, rounded.to_int64());
    result.fraction = point.file_size / functional_capacity(shifted, alpha, point.gamma);
  } else {
    result.index_used = exact_index;
    const Rational gamma = p1_gamma(shifted, alpha, exact_index);
    const Rational performance =
        Rational(shifted.n()) * exact_index * alpha / (Rational(shifted.n() - shifted.k()) + exact_index);
    result.fraction = performance / functional_capacity(shifted, alpha, gamma);
  }

  const Rational n(setup.base.n());
  const Rational k(setup.base.k());
  const Rational d(setup.base.d());
  const Rational m(setup.shift);
  const Rational n_m(shifted.n());
  const Rational k_m(shifted.k());
  const Rational d_m(shifted.d());
  const Rational& s = setup.s;
  const Rational t = d_m * s * (k_m - 1) / (d - k + 1 + s * (k_m - 1));
  result.h1 = 2 * n_m * (1 + s * (k_m - 1)) * d_m * (d - k + 1);
  result.h2 = n - k + 1 + s * (k_m - 1);
  result.h3 = 2 * (t + 1) * d_m * (d - k + 1);
  result.h4 = (k_m - t - 1) * (2 * d - k + m - t) * (d - k + 1 + s * (k_m - 1));
  return result;
}

}  // namespace regen::tradeoff
