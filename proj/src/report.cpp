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

#include "molmix/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "molmix/capacity.hpp"
#include "molmix/errors.hpp"
#include "molmix/io.hpp"

namespace molmix {
namespace {

constexpr std::string_view kReportFormat = "molmix-report/1";

double capacity_or_zero(double log2_omega, double pc) {
  if (!(pc > 0.0)) return 0.0;
  return confusion_limited_capacity(log2_omega, std::min(pc, 1.0)).bits;
}

std::size_t count_differences(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw ValidationError("bitstreams differ in length");
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

std::vector<HistogramRow> histograms(const PlateLayout& truth, const ReportInputs& in) {
  const auto matrix = intensity_matrix(in.spectra, *in.library, *in.config, truth.wells.size());
  std::vector<std::vector<double>> logs(matrix.size());
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (double v : matrix[i]) {
      const double x = std::log10(std::max(v, 1e-12));
      logs[i].push_back(x);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  std::vector<HistogramRow> rows;
  if (!(hi >= lo) || in.histogram_bins == 0) return rows;
  const std::size_t bins = in.histogram_bins;
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    std::vector<HistogramRow> per(bins);
    for (std::size_t b = 0; b < bins; ++b) {
      per[b].compound = i;
      per[b].lo = lo + width * static_cast<double>(b);
      per[b].hi = lo + width * static_cast<double>(b + 1);
    }
    for (std::size_t w = 0; w < logs[i].size(); ++w) {
      const auto b = std::min(bins - 1, static_cast<std::size_t>((logs[i][w] - lo) / width));
      (truth.wells[w].levels[i] > 0 ? per[b].present : per[b].absent) += 1;
    }
    rows.insert(rows.end(), per.begin(), per.end());
  }
  return rows;
}

template <typename T>
T number(std::string_view s, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ValidationError(fmt::format("report: bad {} value '{}'", what, s));
  }
  return value;
}

std::vector<std::string_view> columns(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto at = line.find(',', start);
    out.push_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

}  // namespace

RunReport build_report(const PlateLayout& truth, const PlateLayout& decoded, const ReportInputs& inputs) {
  truth.validate();
  decoded.validate();
  const ConfusionEstimate confusion = estimate_confusion(decoded, truth);
  RunReport r;
  r.manifest = truth.manifest;
  r.compound_errors = confusion.compound_errors;
  r.compound_error_rates = confusion.compound_error_rates;
  r.compounds_below_1pct = confusion.compounds_below(0.01);
  r.pc = confusion.pc;

  const BitVector truth_bits = decode_layout(truth);
  const BitVector decoded_bits = decode_layout(decoded);
  r.raw_bit_error = truth_bits.empty()
                        ? 0.0
                        : static_cast<double>(count_differences(truth_bits, decoded_bits)) /
                              static_cast<double>(truth_bits.size());

  BitVector truth_data = truth_bits;
  BitVector decoded_data = decoded_bits;
  double log2_codebook = 1.0;
  std::size_t codeword_length = 1;
  if (truth.manifest.ecc) {
    if (inputs.codebook == nullptr) throw ValidationError("layout uses ECC but no codebook was given");
    const NoiseGuessOrder fallback = NoiseGuessOrder::default_for(inputs.codebook->length());
    const NoiseGuessOrder& order = inputs.order ? *inputs.order : fallback;
    truth_data = ecc_decode_layout(truth, *inputs.codebook, order).data;
    EccDecode ecc = ecc_decode_layout(decoded, *inputs.codebook, order);
    decoded_data = std::move(ecc.data);
    r.abandoned = ecc.abandoned;
    r.guesses_histogram = std::move(ecc.guesses_histogram);
    log2_codebook = inputs.codebook->log2_size();
    codeword_length = inputs.codebook->length();
  }
  r.data_bits = truth_data.size();
  r.bit_errors = count_differences(truth_data, decoded_data);
  r.bit_accuracy = r.data_bits ? 1.0 - static_cast<double>(r.bit_errors) / static_cast<double>(r.data_bits) : 1.0;

  r.log2_omega = static_cast<double>(truth.manifest.bits_per_well());
  r.achieved_cprime = capacity_or_zero(r.log2_omega, r.pc);
  r.cprime_per_bit = capacity_or_zero(1.0, 1.0 - r.raw_bit_error);
  r.code_rate = log2_codebook / static_cast<double>(codeword_length);
  r.rate_admissible = rate_admissible(log2_codebook, codeword_length, r.cprime_per_bit);

  if (!inputs.spectra.empty() && inputs.library != nullptr && inputs.config != nullptr) {
    r.histograms = histograms(truth, inputs);
  }
  return r;
}

std::string format_report(const RunReport& r) {
  std::string out = fmt::format("format: {}\n", kReportFormat);
  out += format_manifest_fields(r.manifest);
  out += fmt::format(
      "data_bits: {}\nbit_errors: {}\nbit_accuracy: {}\nraw_bit_error: {}\npc: {}\nlog2_omega: {}\n"
      "achieved_cprime: {}\ncprime_per_bit: {}\ncode_rate: {}\nrate_admissible: {}\ncompounds: {}\n"
      "compounds_below_1pct: {}\nabandoned: {}\n",
      r.data_bits, r.bit_errors, r.bit_accuracy, r.raw_bit_error, r.pc, r.log2_omega, r.achieved_cprime,
      r.cprime_per_bit, r.code_rate, r.rate_admissible ? "true" : "false", r.compound_error_rates.size(),
      r.compounds_below_1pct, r.abandoned);
  out += fmt::format("summary: {} of {} compounds below 1% raw error; decoded bit accuracy {:.4f}%\n",
                     r.compounds_below_1pct, r.compound_error_rates.size(), 100.0 * r.bit_accuracy);
  out += "[compound_errors]\ncompound,errors,rate\n";
  for (std::size_t i = 0; i < r.compound_error_rates.size(); ++i) {
    out += fmt::format("{},{},{}\n", i, r.compound_errors[i], r.compound_error_rates[i]);
  }
  out += "[guesses]\nguesses,count\n";
  for (const auto& [g, n] : r.guesses_histogram) out += fmt::format("{},{}\n", g, n);
  out += "[histograms]\ncompound,log10_lo,log10_hi,absent,present\n";
  for (const auto& h : r.histograms) out += fmt::format("{},{},{},{},{}\n", h.compound, h.lo, h.hi, h.absent, h.present);
  return out;
}

RunReport parse_report(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != fmt::format("format: {}", kReportFormat)) {
    throw ValidationError(fmt::format("expected first line 'format: {}'", kReportFormat));
  }
  HeaderFields fields;
  std::string section;
  RunReport r;
  bool expect_columns = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line;
      expect_columns = true;
      continue;
    }
    if (section.empty()) {
      const auto colon = line.find(':');
      if (colon == std::string::npos) throw ValidationError(fmt::format("report: bad header line '{}'", line));
      std::string value = line.substr(colon + 1);
      value.erase(0, value.find_first_not_of(' '));
      fields.emplace(line.substr(0, colon), value);
      continue;
    }
    if (expect_columns) {
      expect_columns = false;
      continue;
    }
    const auto cols = columns(line);
    if (section == "[compound_errors]" && cols.size() == 3) {
      r.compound_errors.push_back(number<std::size_t>(cols[1], "errors"));
      r.compound_error_rates.push_back(number<double>(cols[2], "rate"));
    } else if (section == "[guesses]" && cols.size() == 2) {
      r.guesses_histogram[number<std::size_t>(cols[0], "guesses")] = number<std::size_t>(cols[1], "count");
    } else if (section == "[histograms]" && cols.size() == 5) {
      r.histograms.push_back({number<std::size_t>(cols[0], "compound"), number<double>(cols[1], "log10_lo"),
                              number<double>(cols[2], "log10_hi"), number<std::size_t>(cols[3], "absent"),
                              number<std::size_t>(cols[4], "present")});
    } else {
      throw ValidationError(fmt::format("report: unexpected line '{}' in section {}", line, section));
    }
  }
  auto get = [&](const char* key) -> const std::string& {
    const auto it = fields.find(key);
    if (it == fields.end()) throw ValidationError(fmt::format("report: missing '{}'", key));
    return it->second;
  };
  r.manifest = manifest_from_fields(fields, false);
  r.data_bits = number<std::size_t>(get("data_bits"), "data_bits");
  r.bit_errors = number<std::size_t>(get("bit_errors"), "bit_errors");
  r.bit_accuracy = number<double>(get("bit_accuracy"), "bit_accuracy");
  r.raw_bit_error = number<double>(get("raw_bit_error"), "raw_bit_error");
  r.pc = number<double>(get("pc"), "pc");
  r.log2_omega = number<double>(get("log2_omega"), "log2_omega");
  r.achieved_cprime = number<double>(get("achieved_cprime"), "achieved_cprime");
  r.cprime_per_bit = number<double>(get("cprime_per_bit"), "cprime_per_bit");
  r.code_rate = number<double>(get("code_rate"), "code_rate");
  r.rate_admissible = get("rate_admissible") == "true";
  r.compounds_below_1pct = number<std::size_t>(get("compounds_below_1pct"), "compounds_below_1pct");
  r.abandoned = number<std::size_t>(get("abandoned"), "abandoned");
  if (number<std::size_t>(get("compounds"), "compounds") != r.compound_error_rates.size()) {
    throw ValidationError("report: compound table does not match 'compounds'");
  }
  return r;
}

}  // namespace molmix
