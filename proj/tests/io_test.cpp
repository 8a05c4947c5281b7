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

#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "molmix/ecc.hpp"
#include "molmix/errors.hpp"
#include "molmix/io.hpp"
#include "molmix/specsim.hpp"

namespace molmix {
namespace {

BitVector random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BitVector bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1U);
  return bits;
}

TEST(Io, LibraryRoundTrip) {
  const auto lib = CompoundLibrary::synthetic(256, 16, 2, 133.0417, 1.7);
  const std::string text = format_library(lib);
  EXPECT_EQ(text.rfind("format: molmix-library/1\n", 0), 0U);
  const CompoundLibrary back = parse_library(text);
  EXPECT_EQ(back.size(), lib.size());
  EXPECT_EQ(back.block_size(), 16U);
  for (std::size_t i = 0; i < lib.size(); ++i) {
    EXPECT_EQ(back[i].name, lib[i].name);
    EXPECT_EQ(back[i].detection_mass, lib[i].detection_mass);
  }
  EXPECT_EQ(format_library(back), text);
}

TEST(Io, LayoutRoundTrip) {
  const auto lib = CompoundLibrary::synthetic(32, 4, 2);
  PlateLayout sparse = encode_sparse(random_bits(1000, 1), lib);
  sparse.manifest.library_ref = "lib.csv";
  sparse.manifest.image_width = 25;
  sparse.manifest.image_height = 40;
  EXPECT_EQ(parse_layout(format_layout(sparse)), sparse);

  const auto dense_lib = CompoundLibrary::synthetic(5, 1, 2);
  const PlateLayout coded = ecc_encode_layout(random_bits(333, 2), Codebook::hamming74(), "hamming74", dense_lib,
                                              Scheme::kDense, 3);
  const std::string text = format_layout(coded);
  EXPECT_EQ(parse_layout(text), coded);
  EXPECT_EQ(format_layout(parse_layout(text)), text);
  EXPECT_EQ(parse_manifest(text), coded.manifest);
}

TEST(Io, LayoutRejectsCorruption) {
  const auto lib = CompoundLibrary::synthetic(5, 1, 2);
  const std::string text = format_layout(encode_dense(random_bits(20, 3), lib));
  EXPECT_THROW(parse_layout("format: molmix-layout/2\n" + text.substr(text.find('\n') + 1)), ValidationError);
  std::string bad_padding = text;
  bad_padding.replace(bad_padding.find("padding_bits: 0"), 15, "padding_bits: 1");
  EXPECT_THROW(parse_layout(bad_padding), ValidationError);
  std::string bad_level = text;
  bad_level.replace(bad_level.rfind('\n', bad_level.size() - 2) + 1, 1, "7");
  EXPECT_THROW(parse_layout(bad_level), ValidationError);
  EXPECT_THROW(parse_layout(text.substr(0, text.size() - 10)), ValidationError);
}

TEST(Io, SpectraRoundTripIsBitExact) {
  const auto lib = CompoundLibrary::synthetic(16, 1, 2);
  const PlateLayout layout = encode_dense(random_bits(160, 4), lib);
  const auto spectra = simulate_readout(layout, lib, ChannelConfig::dense_nominal());
  const std::string text = format_spectra(spectra);
  EXPECT_EQ(parse_spectra(text), spectra);
}

TEST(Io, ChannelConfigRoundTrip) {
  ChannelConfig c = ChannelConfig::sparse_nominal();
  c.rng_seed = 0xdeadbeefcafeULL;
  c.dropout_probability = 0.125;
  EXPECT_EQ(parse_channel_config(format_channel_config(c)), c);
  EXPECT_THROW(parse_channel_config("format: molmix-channel/1\nintensity_on_sigma: -1\n"), ValidationError);
  EXPECT_THROW(parse_channel_config("format: molmix-channel/1\nbogus: 1\n"), ValidationError);
}

TEST(Io, CodebookRoundTrip) {
  for (const Codebook& cb : {Codebook::hamming74(), Codebook::random_linear(12, 6, 5),
                             Codebook::explicit_list(5, {0b00000, 0b11100, 0b00111, 0b11011})}) {
    const Codebook back = parse_codebook(format_codebook(cb));
    EXPECT_EQ(back.length(), cb.length());
    EXPECT_EQ(back.dimension(), cb.dimension());
    for (Word w = 0; w < (Word{1} << cb.length()); ++w) EXPECT_EQ(back.contains(w), cb.contains(w));
  }
}

TEST(Io, PbmVariants) {
  const BitImage img{10, 3, random_bits(30, 6)};
  const std::string ascii = format_pbm(img);
  EXPECT_EQ(ascii.rfind("P1", 0), 0U);
  EXPECT_EQ(parse_pbm(ascii), img);
  // Binary rows are padded to whole bytes, MSB first.
  std::string raw = "P4\n# comment\n10 3\n";
  for (std::size_t y = 0; y < 3; ++y) {
    unsigned char hi = 0, lo = 0;
    for (std::size_t x = 0; x < 8; ++x) hi = static_cast<unsigned char>(hi | img.bits[y * 10 + x] << (7 - x));
    for (std::size_t x = 8; x < 10; ++x) lo = static_cast<unsigned char>(lo | img.bits[y * 10 + x] << (15 - x));
    raw.push_back(static_cast<char>(hi));
    raw.push_back(static_cast<char>(lo));
  }
  EXPECT_EQ(parse_pbm(raw), img);
  EXPECT_THROW(parse_pbm("P4\n10 3\n\x01"), ValidationError);
  EXPECT_THROW(parse_pbm("P2\n1 1\n1\n"), ValidationError);
}

TEST(Io, BitsAndFiles) {
  const BitVector bits = random_bits(777, 8);
  EXPECT_EQ(parse_bits(format_bits(bits)), bits);
  EXPECT_EQ(parse_bits("10 1\n1\n"), (BitVector{1, 0, 1, 1}));
  EXPECT_THROW(parse_bits("102"), ValidationError);

  const auto dir = std::filesystem::temp_directory_path() / "molmix_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "x.txt").string();
  write_text_file(path, "hello\n");
  EXPECT_EQ(read_text_file(path), "hello\n");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_THROW(read_text_file((dir / "missing").string()), ValidationError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace molmix
