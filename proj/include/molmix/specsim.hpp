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

#ifndef MOLMIX_SPECSIM_HPP_
#define MOLMIX_SPECSIM_HPP_

// Simulated mass-spectrometry readout of plate layouts, and decoders that
// turn peak lists back into mixture states.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "molmix/codec.hpp"

namespace molmix {

// Intensities are log-normal. The *_mean fields are the location exp(mu) in
// linear intensity units and *_sigma the standard deviation of ln(I); a mean
// of 0 yields exactly zero intensity.
struct ChannelConfig {
  double intensity_on_mean = 1.0;
  double intensity_on_sigma = 0.0;
  double intensity_off_mean = 0.0;
  double intensity_off_sigma = 0.0;
  double mass_tolerance_ppm = 5.0;
  double sodiation_mass_shift = 21.981944;  // Na+ replacing H+
  std::uint64_t rng_seed = 1;
  double dropout_probability = 0.0;

  void validate() const;
  bool operator==(const ChannelConfig&) const = default;

  static ChannelConfig zero_noise();
  // Dense on/off gap set so the two-class overlap is a 6.5e-4 raw bit error.
  static ChannelConfig dense_nominal();
  // One-hot S=16 gap set for 94.6% post-decode bit accuracy.
  static ChannelConfig sparse_nominal();
  // Named preset lookup: zero-noise, dense-nominal, sparse-nominal.
  static bool preset(const std::string& name, ChannelConfig& out);
};

struct Peak {
  double mass = 0.0;
  double intensity = 0.0;

  bool operator==(const Peak&) const = default;
};

struct Spectrum {
  std::size_t well_id = 0;
  std::vector<Peak> peaks;  // strictly increasing mass

  bool operator==(const Spectrum&) const = default;
};

// Throws ChannelError when two sodiated masses are not separated by more than
// twice the tolerance window.
void check_mass_separation(const CompoundLibrary& library, const ChannelConfig& config);

// One spectrum per well, in well order. Each well draws from its own RNG
// stream seeded by (rng_seed, well_id), so any thread count gives identical
// output.
std::vector<Spectrum> simulate_readout(const PlateLayout& layout, const CompoundLibrary& library,
                                       const ChannelConfig& config, unsigned threads = 1);

// Intensity of the peak nearest `mass` within the ppm window, else 0.
double matched_intensity(const Spectrum& spectrum, double mass, double tolerance_ppm);

// compounds x wells matrix of matched intensities; wells with no spectrum
// read as all zero.
std::vector<std::vector<double>> intensity_matrix(std::span<const Spectrum> spectra,
                                                  const CompoundLibrary& library,
                                                  const ChannelConfig& config, std::size_t wells);

// ln(max(I, floor)), the feature the classifier works on.
double log_intensity(double intensity);

struct FisherBoundary {
  double weight = 1.0;     // (mu1 - mu0) / (s0^2 + s1^2)
  double threshold = 0.0;  // in feature units
  bool fallback = false;   // a class with no spread, midpoint used

  bool above(double feature) const { return weight * feature > weight * threshold; }
};

// 1-D Fisher discriminant between a lower class and an upper class of
// feature values. Throws ValidationError on empty or identical classes.
FisherBoundary fit_fisher_1d(std::span<const double> lower, std::span<const double> upper);

class IntensityClassifier {
 public:
  IntensityClassifier() = default;
  // boundaries[i] holds the L-1 ordered boundaries of compound i.
  explicit IntensityClassifier(std::vector<std::vector<FisherBoundary>> boundaries)
      : boundaries_(std::move(boundaries)) {}

  std::size_t size() const { return boundaries_.size(); }
  const std::vector<FisherBoundary>& boundaries(std::size_t compound) const { return boundaries_[compound]; }
  std::uint8_t predict(std::size_t compound, double intensity) const;
  std::size_t fallback_count() const;

 private:
  std::vector<std::vector<FisherBoundary>> boundaries_;
};

inline constexpr std::size_t kMinCalibrationExamples = 10;

// Fits per-compound boundaries on calibration wells with known truth.
IntensityClassifier fit_classifier(std::span<const Spectrum> calibration_spectra,
                                   const PlateLayout& calibration_truth, const CompoundLibrary& library,
                                   const ChannelConfig& config);

struct SpectraDecode {
  PlateLayout layout;
  BitVector bits;
  std::size_t empty_blocks = 0;  // sparse: blocks with no signal, index 0 chosen
};

SpectraDecode decode_dense_spectra(std::span<const Spectrum> spectra, const IntensityClassifier& classifier,
                                   const CompoundLibrary& library, const Manifest& manifest,
                                   const ChannelConfig& config, unsigned threads = 1);

// Per-compound mean intensity over calibration wells where it is absent.
std::vector<double> background_from_calibration(std::span<const Spectrum> calibration_spectra,
                                                const PlateLayout& calibration_truth,
                                                const CompoundLibrary& library, const ChannelConfig& config);
// Per-compound median intensity over the data wells.
std::vector<double> background_from_data(std::span<const Spectrum> spectra, const CompoundLibrary& library,
                                          const ChannelConfig& config, std::size_t wells);

// Argmax of intensity / background within each block, ties to the lowest id.
// Without a background vector, background_from_data is used.
SpectraDecode decode_sparse_spectra(std::span<const Spectrum> spectra, const CompoundLibrary& library,
                                    const Manifest& manifest, const ChannelConfig& config,
                                    std::span<const double> background = {}, unsigned threads = 1);

struct ConfusionEstimate {
  double pc = 1.0;  // fraction of wells decoded exactly
  std::vector<double> compound_error_rates;
  std::vector<std::size_t> compound_errors;
  std::size_t wells = 0;
  std::size_t exact_wells = 0;
  double independent_pc = 1.0;  // prod(1 - e_i)

  std::size_t compounds_below(double rate) const;
};

ConfusionEstimate estimate_confusion(const PlateLayout& decoded, const PlateLayout& truth);

// Calibration of the log-normal presets.
double normal_cdf(double z);
// Raw bit error of a midpoint threshold between equal-variance classes.
double two_class_overlap_error(double log_gap, double sigma);
// P(the present compound loses the argmax to one of S-1 absent ones).
double one_hot_block_error(double log_gap, double sigma, std::size_t block_size);
// Expected bit error given a block error: a uniformly wrong index differs in
// log2(S) * (S/2) / (S-1) bits on average, out of log2(S).
double one_hot_bit_error(double log_gap, double sigma, std::size_t block_size);
double calibrate_dense_gap(double target_bit_error, double sigma);
double calibrate_sparse_gap(double target_bit_error, double sigma, std::size_t block_size);

}  // namespace molmix

#endif  // MOLMIX_SPECSIM_HPP_
