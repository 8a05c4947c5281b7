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

#ifndef MOLMIX_CODEC_HPP_
#define MOLMIX_CODEC_HPP_

// Bitstreams to plate layouts and back.
//
// Dense scheme: each compound carries log2(L) bits per well, compound i takes
// bit group i of the well (big-endian digits). Sparse scheme: the library is
// cut into blocks of S compounds, each block is one-hot and its index carries
// log2(S) big-endian bits. The final well is padded with level 0 / index 0 and
// the padding is recorded in the manifest.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace molmix {

using BitVector = std::vector<std::uint8_t>;

struct Compound {
  int id = 0;
  std::string name;
  double detection_mass = 0.0;  // Daltons
};

class CompoundLibrary {
 public:
  CompoundLibrary() = default;
  // Throws ValidationError unless ids are 0..M-1 in order, masses are
  // distinct, S divides M and L >= 2.
  CompoundLibrary(std::vector<Compound> compounds, std::size_t block_size, unsigned levels);

  // Evenly spaced masses starting at base_mass.
  static CompoundLibrary synthetic(std::size_t size, std::size_t block_size, unsigned levels,
                                   double base_mass = 150.0, double spacing = 2.0);

  std::size_t size() const { return compounds_.size(); }
  std::size_t block_size() const { return block_size_; }
  unsigned levels() const { return levels_; }
  const std::vector<Compound>& compounds() const { return compounds_; }
  const Compound& operator[](std::size_t i) const { return compounds_[i]; }

 private:
  std::vector<Compound> compounds_;
  std::size_t block_size_ = 1;
  unsigned levels_ = 2;
};

struct MixtureState {
  std::vector<std::uint8_t> levels;

  bool operator==(const MixtureState&) const = default;
};

enum class Scheme { kDense, kSparse };

const char* scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& text);

// Present when the layout carries codewords rather than raw data.
struct EccManifest {
  std::string codebook_ref;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t data_bit_length = 0;
  std::size_t stride = 1;

  bool operator==(const EccManifest&) const = default;
};

struct Manifest {
  Scheme scheme = Scheme::kDense;
  std::size_t library_size = 0;  // M
  std::size_t block_size = 1;    // S
  unsigned levels = 2;           // L
  std::size_t wells = 0;
  std::size_t original_bit_length = 0;
  std::size_t padding_bits = 0;
  std::size_t wells_per_plate = 1536;
  double well_pitch_mm = 2.25;
  std::string library_ref;
  // Source image shape when the payload came from a bitmap; 0 otherwise.
  std::size_t image_width = 0;
  std::size_t image_height = 0;
  std::optional<EccManifest> ecc;

  std::size_t bits_per_well() const;
  bool operator==(const Manifest&) const = default;
};

struct PlateLayout {
  Manifest manifest;
  std::vector<MixtureState> wells;

  // Checks shapes, level ranges, padding accounting and the one-hot
  // invariant in sparse mode.
  void validate() const;
  bool operator==(const PlateLayout&) const = default;
};

struct BitImage {
  std::size_t width = 0;
  std::size_t height = 0;
  BitVector bits;  // row-major

  bool operator==(const BitImage&) const = default;
};

std::size_t bits_per_level(unsigned levels);  // log2(L), L a power of two
bool is_power_of_two(std::uint64_t x);

PlateLayout encode_dense(std::span<const std::uint8_t> bits, const CompoundLibrary& library);
PlateLayout encode_dense(std::span<const std::uint8_t> bits, const CompoundLibrary& library,
                         unsigned levels);
BitVector decode_dense(const PlateLayout& layout);

PlateLayout encode_sparse(std::span<const std::uint8_t> bits, const CompoundLibrary& library);
BitVector decode_sparse(const PlateLayout& layout);

// Dispatches on the manifest scheme.
BitVector decode_layout(const PlateLayout& layout);

BitVector image_to_bits(const BitImage& image);
BitImage bits_to_image(std::span<const std::uint8_t> bits, std::size_t width, std::size_t height);

}  // namespace molmix

#endif  // MOLMIX_CODEC_HPP_
