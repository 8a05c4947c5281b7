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

#ifndef MOLMIX_IO_HPP_
#define MOLMIX_IO_HPP_

// Text file formats. Every file opens with a "format: <name>/<version>" line
// followed by "key: value" header lines.
//
//   library   molmix-library/1   header block_size, levels; then CSV
//                                "id,name,detection_mass"
//   layout    molmix-layout/1    manifest keys; "data:"; one CSV row of
//                                levels per well, one column per compound
//   spectra   molmix-spectra/1   CSV "well_id,mass,intensity"
//   channel   molmix-channel/1   one key per ChannelConfig field
//   codebook  molmix-codebook/1  type, N_c, k; "rows:"; 0/1 strings, either
//                                parity-check rows (linear) or codewords
//   image     portable bitmap, P1 or P4 in, P1 out
//
// Numbers are written in shortest round-trip form, so parse followed by
// format reproduces a file byte for byte.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "molmix/codec.hpp"
#include "molmix/ecc.hpp"
#include "molmix/specsim.hpp"

namespace molmix {

using HeaderFields = std::map<std::string, std::string, std::less<>>;

// Manifest as "key: value" lines, as used in layout headers and reports.
std::string format_manifest_fields(const Manifest& manifest);
// With strict set, keys that are not manifest keys are rejected.
Manifest manifest_from_fields(const HeaderFields& fields, bool strict);

std::string read_text_file(const std::string& path);
// Writes through a temporary file and renames it into place.
void write_text_file(const std::string& path, std::string_view content);

std::string format_library(const CompoundLibrary& library);
CompoundLibrary parse_library(std::string_view text);

std::string format_layout(const PlateLayout& layout);
PlateLayout parse_layout(std::string_view text);
// Header only; the data rows, if any, are not read.
Manifest parse_manifest(std::string_view text);

std::string format_spectra(const std::vector<Spectrum>& spectra);
std::vector<Spectrum> parse_spectra(std::string_view text);

std::string format_channel_config(const ChannelConfig& config);
ChannelConfig parse_channel_config(std::string_view text);

std::string format_codebook(const Codebook& codebook);
Codebook parse_codebook(std::string_view text);

std::string format_pbm(const BitImage& image);
BitImage parse_pbm(std::string_view data);

std::string format_bits(const BitVector& bits);
BitVector parse_bits(std::string_view text);

}  // namespace molmix

#endif  // MOLMIX_IO_HPP_
