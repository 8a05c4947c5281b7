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

#include "molmix/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "molmix/errors.hpp"

namespace molmix {
namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    auto end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++number_;
    return true;
  }
  std::size_t number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    out.push_back(trim(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  T value{};
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw ValidationError(fmt::format("bad {} value '{}'", what, s));
  }
  return value;
}

// Header of "key: value" lines up to an optional terminator line.
struct Header {
  HeaderFields values;

  bool has(std::string_view key) const { return values.find(key) != values.end(); }
  const std::string& get(std::string_view key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw ValidationError(fmt::format("missing header key '{}'", key));
    return it->second;
  }
  template <typename T>
  T number(std::string_view key) const {
    return parse_number<T>(get(key), key);
  }
};

Header read_header(LineReader& reader, std::string_view format, std::string_view terminator) {
  std::string_view line;
  if (!reader.next(line) || trim(line) != fmt::format("format: {}", format)) {
    throw ValidationError(fmt::format("expected first line 'format: {}'", format));
  }
  Header header;
  while (reader.next(line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!terminator.empty() && t == terminator) return header;
    const auto colon = t.find(':');
    if (colon == std::string_view::npos) {
      if (terminator.empty()) break;
      throw ValidationError(fmt::format("line {}: expected 'key: value'", reader.number()));
    }
    header.values.emplace(std::string(trim(t.substr(0, colon))), std::string(trim(t.substr(colon + 1))));
  }
  if (!terminator.empty()) throw ValidationError(fmt::format("missing '{}' line", terminator));
  return header;
}

void expect_keys(const Header& header, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : header.values) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(fmt::format("unknown header key '{}'", key));
    }
  }
}

constexpr std::string_view kLibraryFormat = "molmix-library/1";
constexpr std::string_view kLayoutFormat = "molmix-layout/1";
constexpr std::string_view kSpectraFormat = "molmix-spectra/1";
constexpr std::string_view kChannelFormat = "molmix-channel/1";
constexpr std::string_view kCodebookFormat = "molmix-codebook/1";

}  // namespace

Manifest manifest_from_fields(const HeaderFields& fields, bool strict) {
  const Header h{fields};
  if (strict) {
    expect_keys(h, {"scheme", "M", "S", "L", "wells", "original_bit_length", "padding_bits", "wells_per_plate",
                    "well_pitch_mm", "library", "image_width", "image_height", "ecc_codebook", "ecc_n", "ecc_k",
                    "ecc_data_bit_length", "ecc_stride"});
  }
  Manifest m;
  m.scheme = parse_scheme(h.get("scheme"));
  m.library_size = h.number<std::size_t>("M");
  m.block_size = h.number<std::size_t>("S");
  m.levels = h.number<unsigned>("L");
  m.wells = h.number<std::size_t>("wells");
  m.original_bit_length = h.number<std::size_t>("original_bit_length");
  m.padding_bits = h.number<std::size_t>("padding_bits");
  m.wells_per_plate = h.number<std::size_t>("wells_per_plate");
  m.well_pitch_mm = h.number<double>("well_pitch_mm");
  m.library_ref = h.has("library") ? h.get("library") : "";
  if (h.has("image_width")) {
    m.image_width = h.number<std::size_t>("image_width");
    m.image_height = h.number<std::size_t>("image_height");
  }
  if (h.has("ecc_codebook")) {
    EccManifest e;
    e.codebook_ref = h.get("ecc_codebook");
    e.n = h.number<std::size_t>("ecc_n");
    e.k = h.number<std::size_t>("ecc_k");
    e.data_bit_length = h.number<std::size_t>("ecc_data_bit_length");
    e.stride = h.number<std::size_t>("ecc_stride");
    m.ecc = e;
  }
  return m;
}

std::string format_manifest_fields(const Manifest& m) {
  std::string out = fmt::format(
      "scheme: {}\nM: {}\nS: {}\nL: {}\nwells: {}\noriginal_bit_length: {}\npadding_bits: {}\n"
      "wells_per_plate: {}\nwell_pitch_mm: {}\n",
      scheme_name(m.scheme), m.library_size, m.block_size, m.levels, m.wells, m.original_bit_length,
      m.padding_bits, m.wells_per_plate, m.well_pitch_mm);
  if (!m.library_ref.empty()) out += fmt::format("library: {}\n", m.library_ref);
  if (m.image_width > 0) out += fmt::format("image_width: {}\nimage_height: {}\n", m.image_width, m.image_height);
  if (m.ecc) {
    out += fmt::format("ecc_codebook: {}\necc_n: {}\necc_k: {}\necc_data_bit_length: {}\necc_stride: {}\n",
                       m.ecc->codebook_ref, m.ecc->n, m.ecc->k, m.ecc->data_bit_length, m.ecc->stride);
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError(fmt::format("cannot write '{}'", path));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ValidationError(fmt::format("write to '{}' failed", path));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ValidationError(fmt::format("cannot move '{}' into place: {}", path, ec.message()));
}

std::string format_library(const CompoundLibrary& library) {
  std::string out = fmt::format("format: {}\nblock_size: {}\nlevels: {}\nid,name,detection_mass\n", kLibraryFormat,
                                library.block_size(), library.levels());
  for (const auto& c : library.compounds()) out += fmt::format("{},{},{}\n", c.id, c.name, c.detection_mass);
  return out;
}

CompoundLibrary parse_library(std::string_view text) {
  LineReader reader(text);
  const Header h = read_header(reader, kLibraryFormat, "id,name,detection_mass");
  expect_keys(h, {"block_size", "levels"});
  std::vector<Compound> compounds;
  std::string_view line;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 3) throw ValidationError(fmt::format("library line {}: expected 3 columns", reader.number()));
    if (cols[1].empty()) throw ValidationError(fmt::format("library line {}: empty name", reader.number()));
    compounds.push_back({parse_number<int>(cols[0], "id"), std::string(cols[1]), parse_number<double>(cols[2], "mass")});
  }
  return CompoundLibrary(std::move(compounds), h.number<std::size_t>("block_size"), h.number<unsigned>("levels"));
}

std::string format_layout(const PlateLayout& layout) {
  const Manifest& m = layout.manifest;
  std::string out = fmt::format("format: {}\n", kLayoutFormat) + format_manifest_fields(m) + "data:\n";
  out.reserve(out.size() + layout.wells.size() * m.library_size * 2);
  for (const auto& well : layout.wells) {
    for (std::size_t i = 0; i < well.levels.size(); ++i) {
      if (i > 0) out += ',';
      out += fmt::format("{}", well.levels[i]);
    }
    out += '\n';
  }
  return out;
}

PlateLayout parse_layout(std::string_view text) {
  LineReader reader(text);
  PlateLayout layout;
  layout.manifest = manifest_from_fields(read_header(reader, kLayoutFormat, "data:").values, true);
  std::string_view line;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    MixtureState state;
    for (auto cell : split(line, ',')) {
      const auto level = parse_number<unsigned>(cell, "level");
      if (level > 255) throw ValidationError(fmt::format("layout line {}: level out of range", reader.number()));
      state.levels.push_back(static_cast<std::uint8_t>(level));
    }
    layout.wells.push_back(std::move(state));
  }
  layout.validate();
  return layout;
}

Manifest parse_manifest(std::string_view text) {
  LineReader reader(text);
  return manifest_from_fields(read_header(reader, kLayoutFormat, "data:").values, true);
}

std::string format_spectra(const std::vector<Spectrum>& spectra) {
  std::string out = fmt::format("format: {}\nwell_id,mass,intensity\n", kSpectraFormat);
  for (const auto& s : spectra) {
    for (const auto& p : s.peaks) out += fmt::format("{},{},{}\n", s.well_id, p.mass, p.intensity);
  }
  return out;
}

std::vector<Spectrum> parse_spectra(std::string_view text) {
  LineReader reader(text);
  read_header(reader, kSpectraFormat, "well_id,mass,intensity");
  std::vector<Spectrum> out;
  std::string_view line;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 3) throw ValidationError(fmt::format("spectra line {}: expected 3 columns", reader.number()));
    const auto well = parse_number<std::size_t>(cols[0], "well_id");
    const Peak peak{parse_number<double>(cols[1], "mass"), parse_number<double>(cols[2], "intensity")};
    if (!(peak.intensity >= 0)) throw ValidationError(fmt::format("spectra line {}: negative intensity", reader.number()));
    if (out.empty() || out.back().well_id != well) {
      for (const auto& s : out) {
        if (s.well_id == well) throw ValidationError(fmt::format("spectra line {}: well {} is split", reader.number(), well));
      }
      out.push_back(Spectrum{well, {}});
    }
    auto& peaks = out.back().peaks;
    if (!peaks.empty() && !(peak.mass > peaks.back().mass)) {
      throw ValidationError(fmt::format("spectra line {}: masses must increase within a well", reader.number()));
    }
    peaks.push_back(peak);
  }
  return out;
}

std::string format_channel_config(const ChannelConfig& c) {
  return fmt::format(
      "format: {}\nintensity_on_mean: {}\nintensity_on_sigma: {}\nintensity_off_mean: {}\nintensity_off_sigma: {}\n"
      "mass_tolerance_ppm: {}\nsodiation_mass_shift: {}\nrng_seed: {}\ndropout_probability: {}\n",
      kChannelFormat, c.intensity_on_mean, c.intensity_on_sigma, c.intensity_off_mean, c.intensity_off_sigma,
      c.mass_tolerance_ppm, c.sodiation_mass_shift, c.rng_seed, c.dropout_probability);
}

ChannelConfig parse_channel_config(std::string_view text) {
  LineReader reader(text);
  const Header h = read_header(reader, kChannelFormat, "");
  expect_keys(h, {"intensity_on_mean", "intensity_on_sigma", "intensity_off_mean", "intensity_off_sigma",
                  "mass_tolerance_ppm", "sodiation_mass_shift", "rng_seed", "dropout_probability"});
  ChannelConfig c;
  auto set = [&](std::string_view key, double& field) {
    if (h.has(key)) field = h.number<double>(key);
  };
  set("intensity_on_mean", c.intensity_on_mean);
  set("intensity_on_sigma", c.intensity_on_sigma);
  set("intensity_off_mean", c.intensity_off_mean);
  set("intensity_off_sigma", c.intensity_off_sigma);
  set("mass_tolerance_ppm", c.mass_tolerance_ppm);
  set("sodiation_mass_shift", c.sodiation_mass_shift);
  set("dropout_probability", c.dropout_probability);
  if (h.has("rng_seed")) c.rng_seed = h.number<std::uint64_t>("rng_seed");
  c.validate();
  return c;
}

std::string format_codebook(const Codebook& codebook) {
  const bool linear = codebook.kind() == Codebook::Kind::kLinear;
  std::string out = fmt::format("format: {}\ntype: {}\nN_c: {}\nk: {}\nrows:\n", kCodebookFormat,
                                linear ? "linear" : "explicit", codebook.length(), codebook.dimension());
  for (Word w : linear ? codebook.parity_rows() : codebook.codewords()) {
    out += word_to_string(w, codebook.length());
    out += '\n';
  }
  return out;
}

Codebook parse_codebook(std::string_view text) {
  LineReader reader(text);
  const Header h = read_header(reader, kCodebookFormat, "rows:");
  expect_keys(h, {"type", "N_c", "k"});
  const auto n = h.number<std::size_t>("N_c");
  const auto k = h.number<std::size_t>("k");
  std::vector<Word> rows;
  std::string_view line;
  while (reader.next(line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.size() != n) throw ValidationError(fmt::format("codebook line {}: expected {} bits", reader.number(), n));
    rows.push_back(word_from_string(std::string(t)));
  }
  const std::string& type = h.get("type");
  Codebook cb = type == "linear"     ? Codebook::linear(n, std::move(rows))
                : type == "explicit" ? Codebook::explicit_list(n, std::move(rows))
                                     : throw ValidationError(fmt::format("unknown codebook type '{}'", type));
  if (cb.dimension() != k) {
    throw ValidationError(fmt::format("codebook header says k = {}, rows give k = {}", k, cb.dimension()));
  }
  return cb;
}

std::string format_pbm(const BitImage& image) {
  std::string out = fmt::format("P1\n{} {}\n", image.width, image.height);
  for (std::size_t y = 0; y < image.height; ++y) {
    for (std::size_t x = 0; x < image.width; ++x) {
      if (x > 0) out += ' ';
      out += image.bits[y * image.width + x] ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

BitImage parse_pbm(std::string_view data) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&] {
    skip_space();
    const std::size_t start = pos;
    while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) ++pos;
    return parse_number<std::size_t>(data.substr(start, pos - start), "PBM dimension");
  };
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '1' && data[1] != '4')) {
    throw ValidationError("not a PBM file (expected P1 or P4)");
  }
  const bool binary = data[1] == '4';
  pos = 2;
  BitImage image;
  image.width = read_uint();
  image.height = read_uint();
  if (image.width == 0 || image.height == 0) throw ValidationError("PBM dimensions must be positive");
  image.bits.reserve(image.width * image.height);
  if (binary) {
    ++pos;  // single whitespace byte before the raster
    const std::size_t row_bytes = (image.width + 7) / 8;
    if (data.size() < pos + row_bytes * image.height) throw ValidationError("PBM raster truncated");
    for (std::size_t y = 0; y < image.height; ++y) {
      for (std::size_t x = 0; x < image.width; ++x) {
        const auto byte = static_cast<unsigned char>(data[pos + y * row_bytes + x / 8]);
        image.bits.push_back(static_cast<std::uint8_t>((byte >> (7 - x % 8)) & 1U));
      }
    }
  } else {
    while (image.bits.size() < image.width * image.height) {
      skip_space();
      if (pos >= data.size()) throw ValidationError("PBM raster truncated");
      const char c = data[pos++];
      if (c != '0' && c != '1') throw ValidationError("PBM raster holds a non-binary character");
      image.bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
  }
  return image;
}

std::string format_bits(const BitVector& bits) {
  std::string out;
  out.reserve(bits.size() + bits.size() / 64 + 1);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out += bits[i] ? '1' : '0';
    if (i % 64 == 63) out += '\n';
  }
  if (bits.size() % 64 != 0) out += '\n';
  return out;
}

BitVector parse_bits(std::string_view text) {
  BitVector bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw ValidationError(fmt::format("bits file holds '{}'", c));
    }
  }
  return bits;
}

}  // namespace molmix
