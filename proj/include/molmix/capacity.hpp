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

#ifndef MOLMIX_CAPACITY_HPP_
#define MOLMIX_CAPACITY_HPP_

// Information capacity and write-energy bounds for molecular mixtures.
//
// State counts are exact arbitrary-precision integers whenever M + Q is at
// most kExactLimit; beyond that the capacities are evaluated in the log2
// domain through log-gamma. Every function here is pure.

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace molmix {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kExactLimit = 10000;

// log2 of a positive big integer, accurate to double precision.
double log2_big(const BigInt& x);

// Parses decimal integers and powers written as "b^e" (e.g. "4^40").
BigInt parse_big(const std::string& text);

BigInt pow_big(const BigInt& base, std::uint64_t exponent);
BigInt binomial_big(const BigInt& n, const BigInt& k);

struct MixtureRegime {
  BigInt library_size = 1;  // M
  BigInt max_select = 0;    // Q
  bool allow_duplicates = true;
  unsigned levels = 2;      // L
  BigInt sparsity = 1;      // S

  void validate() const;
};

struct PolymerSpec {
  unsigned alphabet_size = 4;  // B
  unsigned length = 1;         // N
  unsigned address_positions = 0;

  void validate() const;
  BigInt library_size() const;  // B^N
  BigInt sparsity() const;      // B^(N-A)
  BigInt num_addresses() const; // B^A
};

struct EnergyModel {
  double epsilon = 1.0;  // energy per monomer incorporation
  double gamma = 1.0;    // energy per fluid-handling action
  std::uint64_t wells = 1;

  void validate() const;
  // Synthesis energy of W mixtures of Q molecules of length N.
  double synthesis_energy(double unique_per_well, double length) const;
  // Mixing energy of W mixtures of Q molecules.
  double mixing_energy(double unique_per_well) const;
};

struct CapacityValue {
  double bits = 0.0;
  std::optional<BigInt> omega;
  // Set for sparse coding with S = 1, where the one-hot formula gives 0 bits.
  bool degenerate = false;
};

// Sum over q = 0..Q of C(M+q-1, M-1), i.e. multisets of size <= Q.
BigInt omega_with_duplicates(const BigInt& M, const BigInt& Q);
// Sum over q = 0..Q of C(M, q), i.e. subsets of size <= Q.
BigInt omega_without_duplicates(const BigInt& M, const BigInt& Q);

CapacityValue capacity_c1(const BigInt& M, const BigInt& Q);
CapacityValue capacity_c2(const BigInt& M, const BigInt& Q);
CapacityValue capacity_c3(const BigInt& M, unsigned L);
CapacityValue capacity_c4(const BigInt& M, const BigInt& S);

// Log-gamma evaluation paths, usable at any magnitude. capacity_c1 and
// capacity_c2 call these above kExactLimit.
namespace logdomain {
double log2_binomial(long double n, long double k);
double log2_omega_with_duplicates(long double M, long double Q);
double log2_omega_without_duplicates(long double M, long double Q);
}  // namespace logdomain

struct AddressPayload {
  BigInt num_addresses;
  BigInt sparsity;
  double bits_per_mixture = 0.0;
  bool degenerate = false;
  // C2(M, M) = M bits, the densest-mixture capacity of the same library.
  double dense_bits = 0.0;
};

AddressPayload address_payload_equivalence(const PolymerSpec& spec);

struct ConfusionCapacity {
  double bits = 0.0;
  double raw = 0.0;      // unclamped expression
  bool clamped = false;  // raw was negative (Pc below random guessing)
};

// Capacity under worst-case equiprobable confusion, Omega given as log2.
ConfusionCapacity confusion_limited_capacity(double log2_omega, double pc);
ConfusionCapacity confusion_limited_capacity(const BigInt& omega, double pc);
// Large-Omega approximation Pc*log2(Omega) - H_B(Pc).
double confusion_limited_approx(double log2_omega, double pc);

double binary_entropy(double p);

double energy_per_bit_sparse(double epsilon, unsigned alphabet_size);
double energy_per_bit_dense(double epsilon, unsigned length);
double energy_per_bit_mixing(double gamma);

struct Partition {
  std::uint64_t wells = 1;
  std::uint64_t library = 1;
  double continuous = 1.0;  // sqrt(C), the asymptotic optimum
};

// Minimizes W + M subject to W * M >= C by exhaustive search over W.
Partition optimal_partition(double capacity_bits);

}  // namespace molmix

#endif  // MOLMIX_CAPACITY_HPP_
