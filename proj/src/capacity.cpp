// Copyright 2026 The molmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "molmix/capacity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "molmix/errors.hpp"

namespace molmix {
namespace {

constexpr long double kLn2 = 0.693147180559945309417232121458176568L;
// Guards the exact loops; beyond this the caller wants the log domain.
constexpr std::uint64_t kMaxExactSteps = 2'000'000;

std::uint64_t to_u64(const BigInt& x, const char* what) {
  if (x < 0 || x > std::numeric_limits<std::uint64_t>::max()) {
    throw ValidationError(fmt::format("{} out of range", what));
  }
  return x.convert_to<std::uint64_t>();
}

long double to_ld(const BigInt& x) { return x.convert_to<long double>(); }

bool exact_ok(const BigInt& a, const BigInt& b) { return a + b <= kExactLimit; }

// ln(n! / (n-k)!) for large n, via the difference of Stirling series written
// so that nothing of magnitude n ln n is cancelled.
long double log_falling(long double n, long double k) {
  const long double m = n - k;
  if (k == 0) return 0.0L;
  return k * std::log(n) + (m + 0.5L) * std::log1p(k / m) - k +
         (1.0L / (12.0L * n) - 1.0L / (12.0L * m)) -
         (1.0L / (360.0L * n * n * n) - 1.0L / (360.0L * m * m * m));
}

long double ln_binomial(long double n, long double k) {
  if (k < 0 || k > n) return -std::numeric_limits<long double>::infinity();
  k = std::min(k, n - k);
  if (k == 0) return 0.0L;
  if (n < 1e7L) {
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
  }
  return log_falling(n, k) - std::lgamma(k + 1);
}

// Standard normal CDF, log2 of it.
long double log2_normal_cdf(long double z) {
  return std::log2(0.5L * std::erfc(-z / std::sqrt(2.0L)));
}

// log2 of sum_{q=0..Q} C(M, q) for Q <= M/2, summing terms downward from q=Q
// until they stop contributing.
long double log2_lower_binomial_sum(long double M, long double Q) {
  const long double top = ln_binomial(M, Q) / kLn2;
  long double sum = 1.0L;
  long double term = 1.0L;
  const long double steps = std::min<long double>(Q, kMaxExactSteps);
  for (long double j = 0; j < steps; j += 1) {
    term *= (Q - j) / (M - Q + j + 1);
    sum += term;
    if (term < 1e-21L * sum) return top + std::log2(sum);
  }
  if (Q <= kMaxExactSteps) return top + std::log2(sum);
  // Q within a few sqrt(M) of M/2 with enormous M: the central limit form is
  // exact to far more digits than the result carries.
  const long double z = (Q + 0.5L - M / 2) / (std::sqrt(M) / 2);
  return M + log2_normal_cdf(z);
}

}  // namespace

double log2_big(const BigInt& x) {
  if (x <= 0) throw ValidationError("log2 of a non-positive integer");
  const std::size_t msb = boost::multiprecision::msb(x);
  if (msb < 63) return std::log2(static_cast<double>(x.convert_to<std::uint64_t>()));
  const std::size_t shift = msb - 62;
  const BigInt top = x >> shift;
  return static_cast<double>(std::log2(static_cast<long double>(top.convert_to<std::uint64_t>())) +
                             static_cast<long double>(shift));
}

BigInt parse_big(const std::string& text) {
  auto parse_plain = [&](const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw ValidationError(fmt::format("not a non-negative integer: '{}'", text));
    }
    return BigInt(s);
  };
  const auto caret = text.find('^');
  if (caret == std::string::npos) return parse_plain(text);
  const BigInt base = parse_plain(text.substr(0, caret));
  const BigInt exponent = parse_plain(text.substr(caret + 1));
  return pow_big(base, to_u64(exponent, "exponent"));
}

BigInt pow_big(const BigInt& base, std::uint64_t exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

BigInt binomial_big(const BigInt& n, const BigInt& k) {
  if (k < 0 || n < 0 || k > n) return 0;
  const BigInt kk = std::min(k, BigInt(n - k));
  if (kk > kMaxExactSteps) {
    throw ValidationError("exact binomial too large; use the log-domain capacity");
  }
  const std::uint64_t steps = kk.convert_to<std::uint64_t>();
  BigInt result = 1;
  const BigInt base = n - kk;
  for (std::uint64_t i = 1; i <= steps; ++i) {
    result *= base + i;
    result /= i;
  }
  return result;
}

void MixtureRegime::validate() const {
  if (library_size < 1) throw ValidationError("library size M must be >= 1");
  if (max_select < 0) throw ValidationError("Q must be >= 0");
  if (!allow_duplicates && max_select > library_size) {
    throw ValidationError("Q must not exceed M without duplicates");
  }
  if (levels < 2) throw ValidationError("L must be >= 2");
  if (sparsity < 1 || sparsity > library_size) throw ValidationError("S must be in [1, M]");
  if (library_size % sparsity != 0) throw ValidationError("S must divide M");
}

void PolymerSpec::validate() const {
  if (alphabet_size < 2) throw ValidationError("alphabet size B must be >= 2");
  if (length < 1) throw ValidationError("polymer length N must be >= 1");
  if (address_positions > length) throw ValidationError("address positions A must be <= N");
}

BigInt PolymerSpec::library_size() const { return pow_big(alphabet_size, length); }
BigInt PolymerSpec::sparsity() const { return pow_big(alphabet_size, length - address_positions); }
BigInt PolymerSpec::num_addresses() const { return pow_big(alphabet_size, address_positions); }

void EnergyModel::validate() const {
  if (!(epsilon >= 0)) throw ValidationError("epsilon must be >= 0");
  if (!(gamma >= 0)) throw ValidationError("gamma must be >= 0");
  if (wells < 1) throw ValidationError("W must be >= 1");
}

double EnergyModel::synthesis_energy(double unique_per_well, double length) const {
  return epsilon * static_cast<double>(wells) * unique_per_well * length;
}

double EnergyModel::mixing_energy(double unique_per_well) const {
  return gamma * static_cast<double>(wells) * unique_per_well;
}

BigInt omega_with_duplicates(const BigInt& M, const BigInt& Q) {
  if (M < 1) throw ValidationError("M must be >= 1");
  if (Q < 0) throw ValidationError("Q must be >= 0");
  // sum_{q<=Q} C(M+q-1, M-1) = C(M+Q, M) by the hockey-stick identity.
  return binomial_big(M + Q, Q);
}

BigInt omega_without_duplicates(const BigInt& M, const BigInt& Q) {
  if (M < 1) throw ValidationError("M must be >= 1");
  if (Q < 0 || Q > M) throw ValidationError("Q must be in [0, M]");
  if (Q > kMaxExactSteps) throw ValidationError("exact subset count too large");
  if (Q == M) return BigInt(1) << to_u64(M, "M");
  const std::uint64_t q_max = Q.convert_to<std::uint64_t>();
  BigInt term = 1;
  BigInt sum = 1;
  for (std::uint64_t q = 0; q < q_max; ++q) {
    term = term * (M - q) / (q + 1);
    sum += term;
  }
  return sum;
}

namespace logdomain {

double log2_binomial(long double n, long double k) {
  return static_cast<double>(ln_binomial(n, k) / kLn2);
}

double log2_omega_with_duplicates(long double M, long double Q) {
  return log2_binomial(M + Q, Q);
}

double log2_omega_without_duplicates(long double M, long double Q) {
  if (Q >= M) return static_cast<double>(M);
  if (Q <= M / 2) return static_cast<double>(log2_lower_binomial_sum(M, Q));
  // Complement: 2^M minus the upper tail, which mirrors a lower sum.
  const long double tail = log2_lower_binomial_sum(M, M - Q - 1);
  const long double ratio = std::exp2(tail - M);
  return static_cast<double>(M + std::log1p(-ratio) / kLn2);
}

}  // namespace logdomain

CapacityValue capacity_c1(const BigInt& M, const BigInt& Q) {
  if (M < 1) throw ValidationError("M must be >= 1");
  if (Q < 0) throw ValidationError("Q must be >= 0");
  CapacityValue out;
  if (exact_ok(M, Q)) {
    out.omega = omega_with_duplicates(M, Q);
    out.bits = log2_big(*out.omega);
  } else {
    out.bits = logdomain::log2_omega_with_duplicates(to_ld(M), to_ld(Q));
  }
  return out;
}

CapacityValue capacity_c2(const BigInt& M, const BigInt& Q) {
  if (M < 1) throw ValidationError("M must be >= 1");
  if (Q < 0 || Q > M) throw ValidationError("C2 requires 0 <= Q <= M");
  CapacityValue out;
  if (exact_ok(M, Q)) {
    out.omega = omega_without_duplicates(M, Q);
    out.bits = Q == M ? M.convert_to<double>() : log2_big(*out.omega);
  } else if (Q == M) {
    out.bits = M.convert_to<double>();
  } else {
    out.bits = logdomain::log2_omega_without_duplicates(to_ld(M), to_ld(Q));
  }
  return out;
}

CapacityValue capacity_c3(const BigInt& M, unsigned L) {
  if (M < 1) throw ValidationError("M must be >= 1");
  if (L < 2) throw ValidationError("L must be >= 2");
  CapacityValue out;
  out.bits = static_cast<double>(to_ld(M) * std::log2(static_cast<long double>(L)));
  if (M <= kExactLimit) out.omega = pow_big(L, M.convert_to<std::uint64_t>());
  return out;
}

CapacityValue capacity_c4(const BigInt& M, const BigInt& S) {
  if (M < 1) throw ValidationError("M must be >= 1");
  if (S < 1 || S > M) throw ValidationError("S must be in [1, M]");
  if (M % S != 0) throw ValidationError("S must divide M");
  const BigInt blocks = M / S;
  CapacityValue out;
  out.degenerate = S == 1;
  out.bits = out.degenerate ? 0.0 : static_cast<double>(to_ld(blocks) * log2_big(S));
  if (M <= kExactLimit) out.omega = pow_big(S, blocks.convert_to<std::uint64_t>());
  return out;
}

AddressPayload address_payload_equivalence(const PolymerSpec& spec) {
  spec.validate();
  AddressPayload out;
  const BigInt library = spec.library_size();
  out.num_addresses = spec.num_addresses();
  out.sparsity = spec.sparsity();
  const CapacityValue sparse = capacity_c4(library, out.sparsity);
  out.bits_per_mixture = sparse.bits;
  out.degenerate = sparse.degenerate;
  out.dense_bits = capacity_c2(library, library).bits;
  return out;
}

namespace {

ConfusionCapacity confusion_impl(double log2_omega, double log2_omega_minus_one, double pc) {
  if (!(pc > 0.0 && pc <= 1.0)) throw ValidationError("Pc must be in (0, 1]");
  if (!(log2_omega >= 1.0)) throw ValidationError("Omega must be >= 2");
  ConfusionCapacity out;
  double raw = log2_omega + pc * std::log2(pc);
  if (pc < 1.0) raw += (1.0 - pc) * (std::log2(1.0 - pc) - log2_omega_minus_one);
  out.raw = raw;
  out.clamped = raw < 0.0;
  out.bits = out.clamped ? 0.0 : raw;
  return out;
}

}  // namespace

ConfusionCapacity confusion_limited_capacity(double log2_omega, double pc) {
  // log2(2^L - 1) = L + log2(1 - 2^-L)
  const double minus_one = log2_omega + std::log1p(-std::exp2(-log2_omega)) / static_cast<double>(kLn2);
  return confusion_impl(log2_omega, minus_one, pc);
}

ConfusionCapacity confusion_limited_capacity(const BigInt& omega, double pc) {
  if (omega < 2) throw ValidationError("Omega must be >= 2");
  return confusion_impl(log2_big(omega), log2_big(omega - 1), pc);
}

double confusion_limited_approx(double log2_omega, double pc) {
  return pc * log2_omega - binary_entropy(pc);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binary entropy needs p in [0, 1]");
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

double energy_per_bit_sparse(double epsilon, unsigned alphabet_size) {
  if (alphabet_size < 2) throw ValidationError("alphabet size B must be >= 2");
  if (!(epsilon >= 0)) throw ValidationError("epsilon must be >= 0");
  return epsilon / std::log2(static_cast<double>(alphabet_size));
}

double energy_per_bit_dense(double epsilon, unsigned length) {
  if (length < 1) throw ValidationError("polymer length N must be >= 1");
  return epsilon * static_cast<double>(length) / 2.0;
}

double energy_per_bit_mixing(double gamma) {
  if (!(gamma >= 0)) throw ValidationError("gamma must be >= 0");
  return gamma / 2.0;
}

Partition optimal_partition(double capacity_bits) {
  if (!(capacity_bits >= 1.0) || !std::isfinite(capacity_bits) || capacity_bits > 9.0e15) {
    throw ValidationError("partition needs 1 <= C <= 9e15");
  }
  const auto target = static_cast<std::uint64_t>(std::ceil(capacity_bits));
  const auto root = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(target))));
  Partition best{target, 1, std::sqrt(capacity_bits)};
  std::uint64_t best_sum = target + 1;
  for (std::uint64_t w = 1; w <= root + 1; ++w) {
    const std::uint64_t m = (target + w - 1) / w;
    const std::uint64_t sum = w + m;
    const auto gap = [](std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; };
    if (sum < best_sum || (sum == best_sum && gap(w, m) < gap(best.wells, best.library))) {
      best.wells = w;
      best.library = m;
      best_sum = sum;
    }
  }
  return best;
}

}  // namespace molmix
