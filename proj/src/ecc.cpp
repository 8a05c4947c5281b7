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

#include "molmix/ecc.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include <fmt/format.h>

#include "molmix/errors.hpp"

namespace molmix {
namespace {

constexpr Word kHammingRows[3] = {0b0011011, 0b0101101, 0b1001110};

Word mask(std::size_t n) { return n >= 32 ? ~Word{0} : (Word{1} << n) - 1; }

unsigned parity(Word w) { return static_cast<unsigned>(std::popcount(w)) & 1U; }

void check_length(std::size_t n) {
  if (n < 1 || n > kMaxCodewordLength) {
    throw ValidationError(fmt::format("codeword length {} outside [1, {}]", n, kMaxCodewordLength));
  }
}

std::uint64_t binomial_u64(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::string word_to_string(Word w, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t i = 0; i < n; ++i) s[i] = ((w >> i) & 1U) ? '1' : '0';
  return s;
}

Word word_from_string(const std::string& text) {
  check_length(text.size());
  Word w = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      w |= Word{1} << i;
    } else if (text[i] != '0') {
      throw ValidationError(fmt::format("'{}' is not a 0/1 string", text));
    }
  }
  return w;
}

Word word_from_bits(std::span<const std::uint8_t> bits) {
  check_length(bits.size());
  Word w = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) w |= static_cast<Word>(bits[i] & 1U) << i;
  return w;
}

Word hamming_encode(Word data) {
  const Word d = data & 0xFU;
  const Word d0 = d & 1U, d1 = (d >> 1U) & 1U, d2 = (d >> 2U) & 1U, d3 = (d >> 3U) & 1U;
  return d | ((d0 ^ d1 ^ d3) << 4U) | ((d0 ^ d2 ^ d3) << 5U) | ((d1 ^ d2 ^ d3) << 6U);
}

Word hamming_correct(Word received) {
  Word r = received & 0x7FU;
  Word syndrome = 0;
  for (unsigned j = 0; j < 3; ++j) syndrome |= parity(r & kHammingRows[j]) << j;
  if (syndrome == 0) return r;
  for (unsigned i = 0; i < 7; ++i) {
    Word column = 0;
    for (unsigned j = 0; j < 3; ++j) column |= ((kHammingRows[j] >> i) & 1U) << j;
    if (column == syndrome) return r ^ (Word{1} << i);
  }
  return r;  // unreachable: every nonzero syndrome is a column of H
}

Word hamming_syndrome_decode(Word received) { return hamming_correct(received) & 0xFU; }

std::size_t gf2_rank(std::vector<Word> rows) {
  std::size_t rank = 0;
  for (unsigned col = 0; col < 32 && rank < rows.size(); ++col) {
    const Word bit = Word{1} << col;
    auto it = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(rank), rows.end(),
                           [&](Word r) { return (r & bit) != 0; });
    if (it == rows.end()) continue;
    std::iter_swap(rows.begin() + static_cast<std::ptrdiff_t>(rank), it);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r] & bit)) rows[r] ^= rows[rank];
    }
    ++rank;
  }
  return rank;
}

Codebook Codebook::linear(std::size_t n, std::vector<Word> parity_rows) {
  check_length(n);
  Codebook cb;
  cb.kind_ = Kind::kLinear;
  cb.n_ = n;
  for (Word& r : parity_rows) {
    if (r & ~mask(n)) throw ValidationError("parity-check row wider than codeword length");
  }
  cb.parity_ = parity_rows;

  // Reduced row echelon form, pivots taken from the highest positions first
  // so that a [P^T | I] matrix leaves the data at the leading positions.
  std::vector<Word> rows = std::move(parity_rows);
  std::vector<std::size_t> pivot_of_row;
  std::size_t rank = 0;
  for (std::size_t col = n; col-- > 0 && rank < rows.size();) {
    const Word bit = Word{1} << col;
    auto it = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(rank), rows.end(),
                           [&](Word r) { return (r & bit) != 0; });
    if (it == rows.end()) continue;
    std::iter_swap(rows.begin() + static_cast<std::ptrdiff_t>(rank), it);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r] & bit)) rows[r] ^= rows[rank];
    }
    pivot_of_row.push_back(col);
    ++rank;
  }
  cb.k_ = n - rank;
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivot_of_row) is_pivot[p] = true;
  for (std::size_t col = 0; col < n; ++col) {
    if (!is_pivot[col]) cb.info_.push_back(col);
  }
  for (std::size_t f : cb.info_) {
    Word v = Word{1} << f;
    for (std::size_t r = 0; r < rank; ++r) {
      if ((rows[r] >> f) & 1U) v |= Word{1} << pivot_of_row[r];
    }
    cb.basis_.push_back(v);
  }
  return cb;
}

Codebook Codebook::explicit_list(std::size_t n, std::vector<Word> codewords) {
  check_length(n);
  if (codewords.empty()) throw ValidationError("explicit codebook is empty");
  for (Word w : codewords) {
    if (w & ~mask(n)) throw ValidationError("codeword wider than codeword length");
  }
  std::sort(codewords.begin(), codewords.end());
  if (std::adjacent_find(codewords.begin(), codewords.end()) != codewords.end()) {
    throw ValidationError("explicit codebook repeats a codeword");
  }
  Codebook cb;
  cb.kind_ = Kind::kExplicit;
  cb.n_ = n;
  cb.words_ = std::move(codewords);
  cb.k_ = static_cast<std::size_t>(std::bit_width(cb.words_.size()) - 1);
  return cb;
}

Codebook Codebook::hamming74() {
  return linear(7, {kHammingRows[0], kHammingRows[1], kHammingRows[2]});
}

Codebook Codebook::random_linear(std::size_t n, std::size_t k, std::uint64_t seed) {
  check_length(n);
  if (k >= n) throw ValidationError("random linear code needs k < n");
  std::mt19937_64 rng(seed);
  std::vector<Word> rows;
  while (true) {
    rows.clear();
    for (std::size_t r = 0; r < n - k; ++r) rows.push_back(static_cast<Word>(rng()) & mask(n));
    if (gf2_rank(rows) == n - k) break;
  }
  return linear(n, std::move(rows));
}

double Codebook::log2_size() const {
  if (kind_ == Kind::kLinear) return static_cast<double>(k_);
  return std::log2(static_cast<double>(words_.size()));
}

std::uint64_t Codebook::size() const {
  return kind_ == Kind::kLinear ? (std::uint64_t{1} << k_) : words_.size();
}

bool Codebook::contains(Word w) const {
  if (w & ~mask(n_)) return false;
  if (kind_ == Kind::kExplicit) return std::binary_search(words_.begin(), words_.end(), w);
  return std::all_of(parity_.begin(), parity_.end(), [&](Word r) { return parity(r & w) == 0; });
}

Word Codebook::encode(Word data) const {
  if (k_ < 32 && (data >> k_) != 0) throw ValidationError("data word wider than code dimension");
  if (kind_ == Kind::kExplicit) return words_[data];
  Word c = 0;
  for (std::size_t j = 0; j < k_; ++j) {
    if ((data >> j) & 1U) c ^= basis_[j];
  }
  return c;
}

std::optional<Word> Codebook::extract(Word codeword) const {
  if (kind_ == Kind::kExplicit) {
    const auto it = std::lower_bound(words_.begin(), words_.end(), codeword);
    if (it == words_.end() || *it != codeword) return std::nullopt;
    const auto index = static_cast<std::size_t>(it - words_.begin());
    if (index >= (std::size_t{1} << k_)) return std::nullopt;
    return static_cast<Word>(index);
  }
  if (!contains(codeword)) return std::nullopt;
  Word data = 0;
  for (std::size_t j = 0; j < info_.size(); ++j) data |= ((codeword >> info_[j]) & 1U) << j;
  return data;
}

NoiseGuessOrder::NoiseGuessOrder(std::size_t n, std::size_t budget) : n_(n) {
  check_length(n);
  if (budget < 1) throw ValidationError("guess budget must be >= 1");
  if (n < 63) budget = static_cast<std::size_t>(std::min<std::uint64_t>(budget, std::uint64_t{1} << n));
  patterns_.reserve(std::min<std::size_t>(budget, 1U << 20U));
  for (std::size_t weight = 0; weight <= n && patterns_.size() < budget; ++weight) {
    std::vector<std::size_t> pos(weight);
    for (std::size_t i = 0; i < weight; ++i) pos[i] = i;
    while (patterns_.size() < budget) {
      Word w = 0;
      for (auto p : pos) w |= Word{1} << p;
      patterns_.push_back(w);
      // Next combination in lexicographic order.
      std::size_t i = weight;
      while (i > 0 && pos[i - 1] == n - weight + i - 1) --i;
      if (i == 0) break;
      ++pos[i - 1];
      for (std::size_t j = i; j < weight; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
}

NoiseGuessOrder NoiseGuessOrder::up_to_weight(std::size_t n, std::size_t weight) {
  std::uint64_t budget = 0;
  for (std::size_t w = 0; w <= std::min(weight, n); ++w) budget += binomial_u64(n, w);
  return NoiseGuessOrder(n, static_cast<std::size_t>(budget));
}

NoiseGuessOrder NoiseGuessOrder::default_for(std::size_t n) { return up_to_weight(n, n <= 16 ? 3 : 2); }

NoiseGuessOrder NoiseGuessOrder::exhaustive(std::size_t n) {
  if (n > 24) throw ValidationError("exhaustive noise order limited to n <= 24");
  return NoiseGuessOrder(n, std::size_t{1} << n);
}

GrandResult grand_decode(Word received, const Codebook& codebook, const NoiseGuessOrder& order) {
  if (order.length() != codebook.length()) throw ValidationError("noise order length does not match codebook");
  const Word r = received & mask(codebook.length());
  GrandResult out;
  for (Word pattern : order.patterns()) {
    ++out.guesses;
    const Word candidate = r ^ pattern;
    if (codebook.contains(candidate)) {
      out.found = true;
      out.codeword = candidate;
      return out;
    }
  }
  return out;
}

bool rate_admissible(double log2_codebook_size, std::size_t codeword_length, double capacity_per_use) {
  return log2_codebook_size / static_cast<double>(codeword_length) < capacity_per_use;
}

namespace {

// Position of bit i of codeword j in the interleaved stream.
std::size_t interleaved_index(std::size_t j, std::size_t i, std::size_t n, std::size_t m, std::size_t stride) {
  const std::size_t group = j / stride;
  const std::size_t first = group * stride;
  const std::size_t members = std::min(stride, m - first);
  return first * n + i * members + (j - first);
}

}  // namespace

BitVector ecc_encode_bits(std::span<const std::uint8_t> data, const Codebook& codebook, std::size_t stride) {
  if (data.empty()) throw ValidationError("empty bitstream");
  if (stride < 1) throw ValidationError("stride must be >= 1");
  const std::size_t n = codebook.length();
  const std::size_t k = codebook.dimension();
  if (k == 0) throw ValidationError("codebook carries no data bits");
  const std::size_t m = (data.size() + k - 1) / k;
  BitVector out(m * n, 0);
  for (std::size_t j = 0; j < m; ++j) {
    Word d = 0;
    for (std::size_t b = 0; b < k && j * k + b < data.size(); ++b) {
      if (data[j * k + b] > 1) throw ValidationError("bit is not 0 or 1");
      d |= static_cast<Word>(data[j * k + b]) << b;
    }
    const Word c = codebook.encode(d);
    for (std::size_t i = 0; i < n; ++i) out[interleaved_index(j, i, n, m, stride)] = (c >> i) & 1U;
  }
  return out;
}

EccDecode ecc_decode_bits(std::span<const std::uint8_t> coded, std::size_t data_length, const Codebook& codebook,
                          const NoiseGuessOrder& order, std::size_t stride) {
  if (stride < 1) throw ValidationError("stride must be >= 1");
  const std::size_t n = codebook.length();
  const std::size_t k = codebook.dimension();
  if (coded.size() % n != 0) throw ValidationError("coded length is not a multiple of the codeword length");
  const std::size_t m = coded.size() / n;
  if (data_length > m * k) throw ValidationError("data length exceeds coded capacity");
  EccDecode out;
  out.codewords = m;
  out.data.assign(m * k, 0);
  for (std::size_t j = 0; j < m; ++j) {
    Word r = 0;
    for (std::size_t i = 0; i < n; ++i) r |= static_cast<Word>(coded[interleaved_index(j, i, n, m, stride)] & 1U) << i;
    const GrandResult g = grand_decode(r, codebook, order);
    std::optional<Word> d;
    if (g.found) d = codebook.extract(g.codeword);
    Word data = 0;
    if (d) {
      data = *d;
      ++out.guesses_histogram[g.guesses];
    } else {
      ++out.abandoned;
      // Hard decision on the information positions.
      for (std::size_t b = 0; b < codebook.information_set().size(); ++b) {
        data |= ((r >> codebook.information_set()[b]) & 1U) << b;
      }
    }
    for (std::size_t b = 0; b < k; ++b) out.data[j * k + b] = (data >> b) & 1U;
  }
  out.data.resize(data_length);
  return out;
}

PlateLayout ecc_encode_layout(std::span<const std::uint8_t> data, const Codebook& codebook,
                              const std::string& codebook_ref, const CompoundLibrary& library, Scheme scheme,
                              std::size_t stride) {
  const BitVector coded = ecc_encode_bits(data, codebook, stride);
  PlateLayout layout = scheme == Scheme::kDense ? encode_dense(coded, library) : encode_sparse(coded, library);
  layout.manifest.ecc = EccManifest{codebook_ref, codebook.length(), codebook.dimension(), data.size(), stride};
  return layout;
}

EccDecode ecc_decode_layout(const PlateLayout& layout, const Codebook& codebook, const NoiseGuessOrder& order) {
  const auto& ecc = layout.manifest.ecc;
  if (!ecc) throw ValidationError("layout manifest has no ECC section");
  if (ecc->n != codebook.length() || ecc->k != codebook.dimension()) {
    throw ValidationError(fmt::format("manifest expects a ({},{}) code, codebook is ({},{})", ecc->n, ecc->k,
                                      codebook.length(), codebook.dimension()));
  }
  return ecc_decode_bits(decode_layout(layout), ecc->data_bit_length, codebook, order, ecc->stride);
}

}  // namespace molmix
