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

#ifndef MOLMIX_ECC_HPP_
#define MOLMIX_ECC_HPP_

// Channel coding over mixture bits.
//
// Words are held in a uint32_t: bit i of the integer is position i of the
// codeword, position 0 being the first bit in the stream.
//
// The (7,4) Hamming code is systematic, c = [d0 d1 d2 d3 p0 p1 p2] with
//
//   G = [ I4 | P ]     P = | 1 1 0 |     H = [ P^T | I3 ] = | 1 1 0 1 1 0 0 |
//                          | 1 0 1 |                        | 1 0 1 1 0 1 0 |
//                          | 0 1 1 |                        | 0 1 1 1 0 0 1 |
//                          | 1 1 1 |
//
// so p0 = d0^d1^d3, p1 = d0^d2^d3, p2 = d1^d2^d3.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "molmix/codec.hpp"

namespace molmix {

using Word = std::uint32_t;

inline constexpr std::size_t kMaxCodewordLength = 32;

std::string word_to_string(Word w, std::size_t n);
Word word_from_string(const std::string& text);
Word word_from_bits(std::span<const std::uint8_t> bits);

Word hamming_encode(Word data);
Word hamming_syndrome_decode(Word received);
// Codeword chosen by syndrome decoding (received with the flagged bit fixed).
Word hamming_correct(Word received);

class Codebook {
 public:
  enum class Kind { kExplicit, kLinear };

  // Rows of the parity-check matrix, each an n-bit word.
  static Codebook linear(std::size_t n, std::vector<Word> parity_rows);
  static Codebook explicit_list(std::size_t n, std::vector<Word> codewords);
  static Codebook hamming74();
  // Random full-rank parity-check matrix with n - k rows.
  static Codebook random_linear(std::size_t n, std::size_t k, std::uint64_t seed);

  Kind kind() const { return kind_; }
  std::size_t length() const { return n_; }
  // Data bits per codeword.
  std::size_t dimension() const { return k_; }
  // |c| as log2; exact for linear codes.
  double log2_size() const;
  std::uint64_t size() const;
  double rate() const { return static_cast<double>(k_) / static_cast<double>(n_); }

  bool contains(Word w) const;
  Word encode(Word data) const;
  // Data carried by a codeword; nullopt for words that carry none.
  std::optional<Word> extract(Word codeword) const;

  const std::vector<Word>& parity_rows() const { return parity_; }
  const std::vector<Word>& codewords() const { return words_; }
  // Positions holding the data bits of linear codewords.
  const std::vector<std::size_t>& information_set() const { return info_; }

 private:
  Kind kind_ = Kind::kLinear;
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<Word> parity_;
  std::vector<Word> basis_;  // generator rows, one per information position
  std::vector<std::size_t> info_;
  std::vector<Word> words_;
};

// Rank of a set of row vectors over GF(2).
std::size_t gf2_rank(std::vector<Word> rows);

// Noise patterns in non-increasing likelihood for an i.i.d. bit flip channel
// with p < 0.5: by Hamming weight, then lexicographically by the sorted list
// of flipped positions.
class NoiseGuessOrder {
 public:
  NoiseGuessOrder(std::size_t n, std::size_t budget);
  // All patterns of weight <= 3 for n <= 16, weight <= 2 above that.
  static NoiseGuessOrder default_for(std::size_t n);
  static NoiseGuessOrder up_to_weight(std::size_t n, std::size_t weight);
  static NoiseGuessOrder exhaustive(std::size_t n);

  std::size_t length() const { return n_; }
  std::size_t budget() const { return patterns_.size(); }
  const std::vector<Word>& patterns() const { return patterns_; }

 private:
  std::size_t n_;
  std::vector<Word> patterns_;
};

struct GrandResult {
  bool found = false;  // false: budget exhausted, decoder abandons
  Word codeword = 0;
  std::size_t guesses = 0;
};

GrandResult grand_decode(Word received, const Codebook& codebook, const NoiseGuessOrder& order);

bool rate_admissible(double log2_codebook_size, std::size_t codeword_length, double capacity_per_use);

// Pads data with zeros to whole codewords, encodes, and lays codewords out
// consecutively; stride d > 1 interleaves bits across groups of d codewords.
BitVector ecc_encode_bits(std::span<const std::uint8_t> data, const Codebook& codebook, std::size_t stride = 1);

struct EccDecode {
  BitVector data;
  std::size_t codewords = 0;
  std::size_t abandoned = 0;
  std::map<std::size_t, std::size_t> guesses_histogram;  // guesses -> count
};

EccDecode ecc_decode_bits(std::span<const std::uint8_t> coded, std::size_t data_length, const Codebook& codebook,
                          const NoiseGuessOrder& order, std::size_t stride = 1);

// Encodes data through the code and then a codec scheme; the manifest records
// the ECC parameters.
PlateLayout ecc_encode_layout(std::span<const std::uint8_t> data, const Codebook& codebook,
                              const std::string& codebook_ref, const CompoundLibrary& library, Scheme scheme,
                              std::size_t stride = 1);
// Reads the layout's codewords back and GRAND-decodes them.
EccDecode ecc_decode_layout(const PlateLayout& layout, const Codebook& codebook, const NoiseGuessOrder& order);

}  // namespace molmix

#endif  // MOLMIX_ECC_HPP_
