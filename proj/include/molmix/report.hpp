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

#ifndef MOLMIX_REPORT_HPP_
#define MOLMIX_REPORT_HPP_

// Run reports: accuracy, confusion and capacity figures computed from a
// truth layout and a decoded layout, plus optional intensity histograms.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molmix/codec.hpp"
#include "molmix/ecc.hpp"
#include "molmix/specsim.hpp"

namespace molmix {

struct HistogramRow {
  std::size_t compound = 0;
  double lo = 0.0;  // log10 intensity bin edges
  double hi = 0.0;
  std::size_t absent = 0;
  std::size_t present = 0;

  bool operator==(const HistogramRow&) const = default;
};

struct RunReport {
  Manifest manifest;
  std::size_t data_bits = 0;
  std::size_t bit_errors = 0;
  double bit_accuracy = 1.0;
  double raw_bit_error = 0.0;  // over mixture bits, before ECC
  double pc = 1.0;
  double log2_omega = 0.0;     // per well
  double achieved_cprime = 0.0;
  double cprime_per_bit = 1.0;
  double code_rate = 1.0;
  bool rate_admissible = false;
  std::vector<std::size_t> compound_errors;
  std::vector<double> compound_error_rates;
  std::size_t compounds_below_1pct = 0;
  std::size_t abandoned = 0;
  std::map<std::size_t, std::size_t> guesses_histogram;
  std::vector<HistogramRow> histograms;

  bool operator==(const RunReport&) const = default;
};

struct ReportInputs {
  const Codebook* codebook = nullptr;  // required when the manifest has ECC
  const NoiseGuessOrder* order = nullptr;
  // Optional readout, for per-compound intensity histograms.
  std::span<const Spectrum> spectra;
  const CompoundLibrary* library = nullptr;
  const ChannelConfig* config = nullptr;
  std::size_t histogram_bins = 20;
};

RunReport build_report(const PlateLayout& truth, const PlateLayout& decoded, const ReportInputs& inputs = {});

std::string format_report(const RunReport& report);
RunReport parse_report(std::string_view text);

}  // namespace molmix

#endif  // MOLMIX_REPORT_HPP_
