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

#include "molmix/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "molmix/errors.hpp"

namespace molmix {
namespace {

constexpr unsigned kMaxLevels = 256;

void check_bits(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw ValidationError("empty bitstream");
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw ValidationError(fmt::format("bit {} is not 0 or 1", i));
  }
}

// Reads `width` bits starting at `pos`, big-endian; positions past the end
// read as zero padding.
std::size_t read_digit(std::span<const std::uint8_t> bits, std::size_t pos, std::size_t width) {
  std::size_t value = 0;
  for (std::size_t b = 0; b < width; ++b) {
    const std::size_t at = pos + b;
    value = (value << 1U) | (at < bits.size() ? bits[at] : 0U);
  }
  return value;
}

void write_digit(BitVector& out, std::size_t value, std::size_t width) {
  for (std::size_t b = width; b-- > 0;) out.push_back(static_cast<std::uint8_t>((value >> b) & 1U));
}

Manifest base_manifest(Scheme scheme, const CompoundLibrary& library, unsigned levels,
                       std::size_t bit_count) {
  Manifest m;
  m.scheme = scheme;
  m.library_size = library.size();
  m.block_size = scheme == Scheme::kSparse ? library.block_size() : 1;
  m.levels = levels;
  const std::size_t per_well = m.bits_per_well();
  m.wells = (bit_count + per_well - 1) / per_well;
  m.original_bit_length = bit_count;
  m.padding_bits = m.wells * per_well - bit_count;
  return m;
}

BitVector strip_padding(BitVector bits, const Manifest& manifest) {
  if (bits.size() != manifest.original_bit_length + manifest.padding_bits) {
    throw ValidationError("manifest bit accounting does not match layout");
  }
  bits.resize(manifest.original_bit_length);
  return bits;
}

}  // namespace

CompoundLibrary::CompoundLibrary(std::vector<Compound> compounds, std::size_t block_size,
                                 unsigned levels)
    : compounds_(std::move(compounds)), block_size_(block_size), levels_(levels) {
  if (compounds_.empty()) throw ValidationError("library has no compounds");
  if (levels_ < 2 || levels_ > kMaxLevels) throw ValidationError("levels L must be in [2, 256]");
  if (block_size_ < 1 || compounds_.size() % block_size_ != 0) {
    throw ValidationError(
        fmt::format("block size {} does not divide library size {}", block_size_, compounds_.size()));
  }
  std::unordered_set<double> masses;
  for (std::size_t i = 0; i < compounds_.size(); ++i) {
    const Compound& c = compounds_[i];
    if (c.id != static_cast<int>(i)) {
      throw ValidationError(fmt::format("compound ids must be 0..M-1 in order (row {} has id {})", i, c.id));
    }
    if (!(c.detection_mass > 0) || !std::isfinite(c.detection_mass)) {
      throw ValidationError(fmt::format("compound {} has invalid mass", c.id));
    }
    if (!masses.insert(c.detection_mass).second) {
      throw ValidationError(fmt::format("compound {} repeats mass {}", c.id, c.detection_mass));
    }
  }
}

CompoundLibrary CompoundLibrary::synthetic(std::size_t size, std::size_t block_size, unsigned levels,
                                           double base_mass, double spacing) {
  if (!(spacing > 0)) throw ValidationError("mass spacing must be positive");
  std::vector<Compound> compounds;
  compounds.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    compounds.push_back({static_cast<int>(i), fmt::format("cmpd{:03}", i),
                         base_mass + spacing * static_cast<double>(i)});
  }
  return CompoundLibrary(std::move(compounds), block_size, levels);
}

const char* scheme_name(Scheme scheme) { return scheme == Scheme::kDense ? "dense" : "sparse"; }

Scheme parse_scheme(const std::string& text) {
  if (text == "dense") return Scheme::kDense;
  if (text == "sparse") return Scheme::kSparse;
  throw ValidationError(fmt::format("unknown scheme '{}'", text));
}

bool is_power_of_two(std::uint64_t x) { return std::has_single_bit(x); }

std::size_t bits_per_level(unsigned levels) {
  if (levels < 2 || !is_power_of_two(levels)) {
    throw ValidationError(fmt::format("L = {} is not a power of two >= 2", levels));
  }
  return static_cast<std::size_t>(std::countr_zero(levels));
}

std::size_t Manifest::bits_per_well() const {
  if (scheme == Scheme::kDense) return library_size * bits_per_level(levels);
  if (block_size < 2 || !is_power_of_two(block_size)) {
    throw ValidationError(fmt::format("sparse block size S = {} must be a power of two >= 2", block_size));
  }
  return (library_size / block_size) * static_cast<std::size_t>(std::countr_zero(block_size));
}

void PlateLayout::validate() const {
  const Manifest& m = manifest;
  if (m.library_size == 0) throw ValidationError("manifest library size is 0");
  if (m.block_size == 0 || m.library_size % m.block_size != 0) {
    throw ValidationError("manifest block size does not divide library size");
  }
  if (wells.size() != m.wells) {
    throw ValidationError(fmt::format("manifest lists {} wells, layout has {}", m.wells, wells.size()));
  }
  if (m.wells * m.bits_per_well() != m.original_bit_length + m.padding_bits) {
    throw ValidationError("manifest does not reconcile W * bits_per_well = original + padding");
  }
  for (std::size_t w = 0; w < wells.size(); ++w) {
    const auto& levels = wells[w].levels;
    if (levels.size() != m.library_size) {
      throw ValidationError(fmt::format("well {} has {} compounds, expected {}", w, levels.size(), m.library_size));
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] >= m.levels) {
        throw ValidationError(fmt::format("well {} compound {} level {} out of range", w, i, levels[i]));
      }
    }
    if (m.scheme == Scheme::kSparse) {
      for (std::size_t b = 0; b < m.library_size / m.block_size; ++b) {
        const auto first = levels.begin() + static_cast<std::ptrdiff_t>(b * m.block_size);
        const auto last = first + static_cast<std::ptrdiff_t>(m.block_size);
        if (std::count(first, last, 1) != 1 || std::count(first, last, 0) != static_cast<std::ptrdiff_t>(m.block_size - 1)) {
          throw ValidationError(fmt::format("well {} block {} is not one-hot", w, b));
        }
      }
    }
  }
}

PlateLayout encode_dense(std::span<const std::uint8_t> bits, const CompoundLibrary& library) {
  return encode_dense(bits, library, library.levels());
}

PlateLayout encode_dense(std::span<const std::uint8_t> bits, const CompoundLibrary& library,
                         unsigned levels) {
  check_bits(bits);
  const std::size_t width = bits_per_level(levels);
  PlateLayout layout;
  layout.manifest = base_manifest(Scheme::kDense, library, levels, bits.size());
  const std::size_t per_well = layout.manifest.bits_per_well();
  layout.wells.resize(layout.manifest.wells);
  for (std::size_t w = 0; w < layout.wells.size(); ++w) {
    auto& state = layout.wells[w].levels;
    state.resize(library.size());
    for (std::size_t i = 0; i < library.size(); ++i) {
      state[i] = static_cast<std::uint8_t>(read_digit(bits, w * per_well + i * width, width));
    }
  }
  return layout;
}

BitVector decode_dense(const PlateLayout& layout) {
  if (layout.manifest.scheme != Scheme::kDense) throw ValidationError("layout is not dense");
  layout.validate();
  const std::size_t width = bits_per_level(layout.manifest.levels);
  BitVector out;
  out.reserve(layout.wells.size() * layout.manifest.bits_per_well());
  for (const auto& well : layout.wells) {
    for (const auto level : well.levels) write_digit(out, level, width);
  }
  return strip_padding(std::move(out), layout.manifest);
}

PlateLayout encode_sparse(std::span<const std::uint8_t> bits, const CompoundLibrary& library) {
  const std::size_t block = library.block_size();
  if (block == 1) throw ValidationError("sparse coding with S = 1 carries no information");
  if (!is_power_of_two(block)) throw ValidationError(fmt::format("S = {} is not a power of two", block));
  check_bits(bits);
  const std::size_t width = static_cast<std::size_t>(std::countr_zero(block));
  const std::size_t blocks = library.size() / block;
  PlateLayout layout;
  layout.manifest = base_manifest(Scheme::kSparse, library, 2, bits.size());
  const std::size_t per_well = layout.manifest.bits_per_well();
  layout.wells.resize(layout.manifest.wells);
  for (std::size_t w = 0; w < layout.wells.size(); ++w) {
    auto& state = layout.wells[w].levels;
    state.assign(library.size(), 0);
    for (std::size_t b = 0; b < blocks; ++b) {
      state[b * block + read_digit(bits, w * per_well + b * width, width)] = 1;
    }
  }
  return layout;
}

BitVector decode_sparse(const PlateLayout& layout) {
  const Manifest& m = layout.manifest;
  if (m.scheme != Scheme::kSparse) throw ValidationError("layout is not sparse");
  layout.validate();
  const std::size_t width = static_cast<std::size_t>(std::countr_zero(m.block_size));
  BitVector out;
  out.reserve(layout.wells.size() * m.bits_per_well());
  for (const auto& well : layout.wells) {
    for (std::size_t b = 0; b < m.library_size / m.block_size; ++b) {
      const auto first = well.levels.begin() + static_cast<std::ptrdiff_t>(b * m.block_size);
      const auto hot = std::find(first, first + static_cast<std::ptrdiff_t>(m.block_size), 1);
      write_digit(out, static_cast<std::size_t>(hot - first), width);
    }
  }
  return strip_padding(std::move(out), m);
}

BitVector decode_layout(const PlateLayout& layout) {
  return layout.manifest.scheme == Scheme::kDense ? decode_dense(layout) : decode_sparse(layout);
}

BitVector image_to_bits(const BitImage& image) {
  if (image.bits.size() != image.width * image.height) {
    throw ValidationError("image bit count does not match width * height");
  }
  return image.bits;
}

BitImage bits_to_image(std::span<const std::uint8_t> bits, std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw ValidationError("image dimensions must be positive");
  if (bits.size() != width * height) {
    throw ValidationError(fmt::format("{} bits cannot fill a {}x{} image", bits.size(), width, height));
  }
  return BitImage{width, height, BitVector(bits.begin(), bits.end())};
}

}  // namespace molmix
