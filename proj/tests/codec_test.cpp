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

#include <random>

#include <gtest/gtest.h>

#include "molmix/codec.hpp"
#include "molmix/errors.hpp"

namespace molmix {
namespace {

BitVector random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BitVector bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1U);
  return bits;
}

BitVector from_string(const std::string& s) {
  BitVector bits;
  for (char c : s) bits.push_back(c == '1');
  return bits;
}

TEST(Library, Validation) {
  EXPECT_NO_THROW(CompoundLibrary::synthetic(256, 16, 2));
  EXPECT_THROW(CompoundLibrary::synthetic(10, 3, 2), ValidationError);
  EXPECT_THROW(CompoundLibrary({{0, "a", 100.0}, {1, "b", 100.0}}, 1, 2), ValidationError);
  EXPECT_THROW(CompoundLibrary({{0, "a", 100.0}, {2, "b", 101.0}}, 1, 2), ValidationError);
  EXPECT_THROW(CompoundLibrary({{0, "a", -1.0}}, 1, 2), ValidationError);
}

TEST(Dense, ReferenceWellCounts) {
  const auto lib = CompoundLibrary::synthetic(5, 1, 2);
  const PlateLayout layout = encode_dense(random_bits(6142, 1), lib);
  EXPECT_EQ(layout.manifest.wells, 1229U);
  EXPECT_EQ(layout.manifest.padding_bits, 3U);
}

TEST(Dense, SingleWell) {
  const auto lib = CompoundLibrary::synthetic(5, 1, 2);
  const PlateLayout layout = encode_dense(from_string("10101"), lib);
  ASSERT_EQ(layout.wells.size(), 1U);
  EXPECT_EQ(layout.wells[0].levels, (std::vector<std::uint8_t>{1, 0, 1, 0, 1}));
  EXPECT_EQ(decode_dense(layout), from_string("10101"));
}

TEST(Dense, ZerosAndEmpty) {
  const auto lib = CompoundLibrary::synthetic(5, 1, 2);
  const PlateLayout layout = encode_dense(BitVector(100, 0), lib);
  EXPECT_EQ(layout.wells.size(), 20U);
  for (const auto& w : layout.wells) EXPECT_EQ(w.levels, std::vector<std::uint8_t>(5, 0));
  EXPECT_THROW(encode_dense(BitVector{}, lib), ValidationError);
}

TEST(Dense, MultiLevelBigEndian) {
  const auto lib = CompoundLibrary::synthetic(3, 1, 4);
  const PlateLayout layout = encode_dense(from_string("100111"), lib, 4);
  ASSERT_EQ(layout.wells.size(), 1U);
  EXPECT_EQ(layout.wells[0].levels, (std::vector<std::uint8_t>{2, 1, 3}));
  EXPECT_EQ(layout.manifest.bits_per_well(), 6U);
  EXPECT_THROW(encode_dense(from_string("1"), CompoundLibrary::synthetic(3, 1, 3), 3), ValidationError);
}

TEST(Dense, RoundTripProperty) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> len(1, 10000);
  for (unsigned levels : {2U, 4U, 16U}) {
    const auto lib = CompoundLibrary::synthetic(5, 1, levels);
    for (int trial = 0; trial < 60; ++trial) {
      const BitVector bits = random_bits(len(rng), rng());
      const PlateLayout layout = encode_dense(bits, lib, levels);
      EXPECT_EQ(layout.manifest.wells * layout.manifest.bits_per_well(),
                layout.manifest.original_bit_length + layout.manifest.padding_bits);
      EXPECT_LT(layout.manifest.padding_bits, layout.manifest.bits_per_well());
      EXPECT_NO_THROW(layout.validate());
      EXPECT_EQ(decode_dense(layout), bits);
      EXPECT_EQ(encode_dense(bits, lib, levels), layout);
    }
  }
  const auto lib = CompoundLibrary::synthetic(5, 1, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    const BitVector bits = random_bits(6142, 1000 + trial);
    ASSERT_EQ(decode_dense(encode_dense(bits, lib)), bits);
  }
}

TEST(Sparse, BlockIndex) {
  const auto lib = CompoundLibrary::synthetic(32, 16, 2);
  const PlateLayout layout = encode_sparse(from_string("10000010"), lib);
  ASSERT_EQ(layout.wells.size(), 1U);
  const auto& lv = layout.wells[0].levels;
  for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(lv[i], (i == 8 || i == 16 + 2) ? 1 : 0) << i;
  EXPECT_EQ(decode_sparse(layout), from_string("10000010"));
}

TEST(Sparse, ReferenceWellCounts) {
  const auto lib = CompoundLibrary::synthetic(256, 16, 2);
  const BitVector bits = random_bits(97969, 3);
  const PlateLayout layout = encode_sparse(bits, lib);
  EXPECT_EQ(layout.manifest.bits_per_well(), 64U);
  EXPECT_EQ(layout.manifest.wells, 1531U);
  EXPECT_EQ(layout.manifest.padding_bits, 1531U * 64U - 97969U);
  EXPECT_EQ(decode_sparse(layout), bits);
  const PlateLayout zeros = encode_sparse(BitVector(64, 0), lib);
  ASSERT_EQ(zeros.wells.size(), 1U);
  for (std::size_t b = 0; b < 16; ++b) EXPECT_EQ(zeros.wells[0].levels[b * 16], 1);
}

TEST(Sparse, OneHotEveryBlockIncludingPadding) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> len(1, 10000);
  for (std::size_t s : {2U, 4U, 16U, 256U}) {
    const auto lib = CompoundLibrary::synthetic(256, s, 2);
    for (int trial = 0; trial < 30; ++trial) {
      const BitVector bits = random_bits(len(rng), rng());
      const PlateLayout layout = encode_sparse(bits, lib);
      for (const auto& w : layout.wells) {
        for (std::size_t b = 0; b < 256 / s; ++b) {
          int on = 0;
          for (std::size_t j = 0; j < s; ++j) on += w.levels[b * s + j];
          ASSERT_EQ(on, 1);
        }
      }
      EXPECT_EQ(decode_sparse(layout), bits);
    }
  }
}

TEST(Sparse, Rejections) {
  EXPECT_THROW(encode_sparse(from_string("1"), CompoundLibrary::synthetic(8, 1, 2)), ValidationError);
  EXPECT_THROW(encode_sparse(from_string("1"), CompoundLibrary::synthetic(12, 6, 2)), ValidationError);
  const auto lib = CompoundLibrary::synthetic(32, 16, 2);
  PlateLayout layout = encode_sparse(from_string("0001"), lib);
  layout.wells[0].levels[20] = 1;
  try {
    layout.validate();
    FAIL() << "two compounds on in one block";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("well 0"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("block 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(decode_dense(layout), ValidationError);
}

TEST(Image, RowMajor) {
  const BitImage img{2, 2, {1, 0, 0, 1}};
  EXPECT_EQ(image_to_bits(img), from_string("1001"));
  const BitImage line{5, 1, {1, 1, 0, 1, 0}};
  EXPECT_EQ(bits_to_image(image_to_bits(line), 5, 1), line);
  EXPECT_THROW(bits_to_image(from_string("101"), 2, 2), ValidationError);
  BitImage big{97, 101, random_bits(97 * 101, 9)};
  EXPECT_EQ(bits_to_image(image_to_bits(big), 97, 101), big);
}

}  // namespace
}  // namespace molmix
