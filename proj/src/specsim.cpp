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

#include "molmix/specsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "molmix/errors.hpp"
#include "molmix/parallel.hpp"

namespace molmix {
namespace {

constexpr double kIntensityFloor = 1e-12;

double window_da(double mass, double ppm) { return mass * ppm * 1e-6; }

std::mt19937_64 well_stream(std::uint64_t seed, std::size_t well) {
  const auto w = static_cast<std::uint64_t>(well);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                    static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(w >> 32U)};
  return std::mt19937_64(seq);
}

// Compound indices in increasing sodiated mass.
std::vector<std::size_t> mass_order(const CompoundLibrary& library) {
  std::vector<std::size_t> order(library.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return library[a].detection_mass < library[b].detection_mass;
  });
  return order;
}

void check_library_matches(const CompoundLibrary& library, const Manifest& manifest) {
  if (library.size() != manifest.library_size) {
    throw ValidationError(fmt::format("library has {} compounds, manifest expects {}", library.size(),
                                      manifest.library_size));
  }
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments moments(std::span<const double> xs) {
  Moments m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

bool negligible_spread(const Moments& m) { return m.sd <= 1e-9 * std::max(1.0, std::abs(m.mean)); }

}  // namespace

void ChannelConfig::validate() const {
  if (!(intensity_on_mean >= 0) || !(intensity_off_mean >= 0)) {
    throw ValidationError("intensity means must be >= 0");
  }
  if (!(intensity_on_sigma >= 0) || !(intensity_off_sigma >= 0)) {
    throw ValidationError("intensity sigmas must be >= 0");
  }
  if (!(mass_tolerance_ppm > 0)) throw ValidationError("mass tolerance must be > 0");
  if (!std::isfinite(sodiation_mass_shift)) throw ValidationError("sodiation shift must be finite");
  if (!(dropout_probability >= 0 && dropout_probability <= 1)) {
    throw ValidationError("dropout probability must be in [0, 1]");
  }
}

ChannelConfig ChannelConfig::zero_noise() { return ChannelConfig{}; }

ChannelConfig ChannelConfig::dense_nominal() {
  ChannelConfig c;
  c.intensity_off_mean = 1.0e4;
  c.intensity_off_sigma = 0.5;
  c.intensity_on_sigma = 0.5;
  c.intensity_on_mean = c.intensity_off_mean * std::exp(calibrate_dense_gap(6.5e-4, 0.5));
  return c;
}

ChannelConfig ChannelConfig::sparse_nominal() {
  ChannelConfig c;
  c.intensity_off_mean = 1.0e4;
  c.intensity_off_sigma = 0.5;
  c.intensity_on_sigma = 0.5;
  c.intensity_on_mean = c.intensity_off_mean * std::exp(calibrate_sparse_gap(1.0 - 0.946, 0.5, 16));
  return c;
}

bool ChannelConfig::preset(const std::string& name, ChannelConfig& out) {
  if (name == "zero-noise") {
    out = zero_noise();
  } else if (name == "dense-nominal") {
    out = dense_nominal();
  } else if (name == "sparse-nominal") {
    out = sparse_nominal();
  } else {
    return false;
  }
  return true;
}

void check_mass_separation(const CompoundLibrary& library, const ChannelConfig& config) {
  const auto order = mass_order(library);
  for (std::size_t k = 1; k < order.size(); ++k) {
    const Compound& lo = library[order[k - 1]];
    const Compound& hi = library[order[k]];
    const double lo_mass = lo.detection_mass + config.sodiation_mass_shift;
    const double hi_mass = hi.detection_mass + config.sodiation_mass_shift;
    if (hi_mass - lo_mass <= 2.0 * window_da(hi_mass, config.mass_tolerance_ppm)) {
      throw ChannelError(fmt::format("compounds {} and {} collide: sodiated masses {:.6f} and {:.6f} within {} ppm",
                                     lo.id, hi.id, lo_mass, hi_mass, config.mass_tolerance_ppm));
    }
  }
}

std::vector<Spectrum> simulate_readout(const PlateLayout& layout, const CompoundLibrary& library,
                                       const ChannelConfig& config, unsigned threads) {
  config.validate();
  layout.validate();
  check_library_matches(library, layout.manifest);
  check_mass_separation(library, config);

  const auto order = mass_order(library);
  const double top_level = static_cast<double>(layout.manifest.levels - 1);
  std::vector<Spectrum> spectra(layout.wells.size());
  parallel_for(layout.wells.size(), threads, [&](std::size_t w) {
    auto rng = well_stream(config.rng_seed, w);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    const auto& levels = layout.wells[w].levels;
    std::vector<double> intensity(library.size());
    for (std::size_t i = 0; i < library.size(); ++i) {
      const double u = uniform(rng);
      const double z = normal(rng);
      if (levels[i] > 0 && !(u < config.dropout_probability)) {
        intensity[i] = config.intensity_on_mean * (levels[i] / top_level) * std::exp(config.intensity_on_sigma * z);
      } else {
        intensity[i] = config.intensity_off_mean * std::exp(config.intensity_off_sigma * z);
      }
    }
    Spectrum& s = spectra[w];
    s.well_id = w;
    s.peaks.reserve(library.size());
    for (std::size_t i : order) {
      s.peaks.push_back({library[i].detection_mass + config.sodiation_mass_shift, intensity[i]});
    }
  });
  return spectra;
}

double matched_intensity(const Spectrum& spectrum, double mass, double tolerance_ppm) {
  const auto& peaks = spectrum.peaks;
  const auto it = std::lower_bound(peaks.begin(), peaks.end(), mass,
                                   [](const Peak& p, double m) { return p.mass < m; });
  const double window = window_da(mass, tolerance_ppm);
  const Peak* best = nullptr;
  if (it != peaks.end() && it->mass - mass <= window) best = &*it;
  if (it != peaks.begin()) {
    const Peak& prev = *(it - 1);
    if (mass - prev.mass <= window && (best == nullptr || mass - prev.mass < best->mass - mass)) best = &prev;
  }
  return best == nullptr ? 0.0 : best->intensity;
}

std::vector<std::vector<double>> intensity_matrix(std::span<const Spectrum> spectra,
                                                  const CompoundLibrary& library,
                                                  const ChannelConfig& config, std::size_t wells) {
  std::vector<std::vector<double>> out(library.size(), std::vector<double>(wells, 0.0));
  for (const Spectrum& s : spectra) {
    if (s.well_id >= wells) continue;
    for (std::size_t i = 0; i < library.size(); ++i) {
      out[i][s.well_id] =
          matched_intensity(s, library[i].detection_mass + config.sodiation_mass_shift, config.mass_tolerance_ppm);
    }
  }
  return out;
}

double log_intensity(double intensity) { return std::log(std::max(intensity, kIntensityFloor)); }

FisherBoundary fit_fisher_1d(std::span<const double> lower, std::span<const double> upper) {
  if (lower.empty() || upper.empty()) throw ValidationError("Fisher discriminant needs both classes");
  const Moments m0 = moments(lower);
  const Moments m1 = moments(upper);
  if (m0.mean == m1.mean) throw ValidationError("classes have identical means; nothing to separate");
  FisherBoundary b;
  const double pooled = m0.sd * m0.sd + m1.sd * m1.sd;
  // A constant class puts the spread-weighted threshold on its own mean.
  if (negligible_spread(m0) || negligible_spread(m1)) {
    b.weight = pooled > 0.0 ? (m1.mean - m0.mean) / pooled : (m1.mean > m0.mean ? 1.0 : -1.0);
    b.threshold = 0.5 * (m0.mean + m1.mean);
    b.fallback = true;
    return b;
  }
  b.weight = (m1.mean - m0.mean) / pooled;
  // Equal distance from both class means in units of each class's spread.
  b.threshold = m0.mean + (m1.mean - m0.mean) * m0.sd / (m0.sd + m1.sd);
  return b;
}

std::uint8_t IntensityClassifier::predict(std::size_t compound, double intensity) const {
  const double x = log_intensity(intensity);
  std::uint8_t level = 0;
  for (const auto& b : boundaries_[compound]) {
    if (b.above(x)) ++level;
  }
  return level;
}

std::size_t IntensityClassifier::fallback_count() const {
  std::size_t n = 0;
  for (const auto& per : boundaries_) {
    n += static_cast<std::size_t>(std::count_if(per.begin(), per.end(), [](const auto& b) { return b.fallback; }));
  }
  return n;
}

IntensityClassifier fit_classifier(std::span<const Spectrum> calibration_spectra,
                                   const PlateLayout& calibration_truth, const CompoundLibrary& library,
                                   const ChannelConfig& config) {
  calibration_truth.validate();
  check_library_matches(library, calibration_truth.manifest);
  const std::size_t wells = calibration_truth.wells.size();
  const unsigned levels = calibration_truth.manifest.levels;
  const auto matrix = intensity_matrix(calibration_spectra, library, config, wells);
  std::vector<std::vector<FisherBoundary>> boundaries(library.size());
  for (std::size_t i = 0; i < library.size(); ++i) {
    std::vector<std::vector<double>> by_level(levels);
    for (std::size_t w = 0; w < wells; ++w) {
      by_level[calibration_truth.wells[w].levels[i]].push_back(log_intensity(matrix[i][w]));
    }
    for (unsigned k = 0; k < levels; ++k) {
      if (by_level[k].size() < kMinCalibrationExamples) {
        throw ValidationError(fmt::format("calibration has {} examples of level {} for compound {}, need {}",
                                          by_level[k].size(), k, i, kMinCalibrationExamples));
      }
    }
    for (unsigned k = 0; k + 1 < levels; ++k) {
      boundaries[i].push_back(fit_fisher_1d(by_level[k], by_level[k + 1]));
    }
  }
  return IntensityClassifier(std::move(boundaries));
}

SpectraDecode decode_dense_spectra(std::span<const Spectrum> spectra, const IntensityClassifier& classifier,
                                   const CompoundLibrary& library, const Manifest& manifest,
                                   const ChannelConfig& config, unsigned threads) {
  if (manifest.scheme != Scheme::kDense) throw ValidationError("manifest scheme is not dense");
  check_library_matches(library, manifest);
  if (classifier.size() != library.size()) throw ValidationError("classifier does not match library");
  const auto matrix = intensity_matrix(spectra, library, config, manifest.wells);
  SpectraDecode out;
  out.layout.manifest = manifest;
  out.layout.wells.resize(manifest.wells);
  parallel_for(manifest.wells, threads, [&](std::size_t w) {
    auto& levels = out.layout.wells[w].levels;
    levels.resize(library.size());
    for (std::size_t i = 0; i < library.size(); ++i) levels[i] = classifier.predict(i, matrix[i][w]);
  });
  out.bits = decode_dense(out.layout);
  return out;
}

std::vector<double> background_from_calibration(std::span<const Spectrum> calibration_spectra,
                                                const PlateLayout& calibration_truth,
                                                const CompoundLibrary& library, const ChannelConfig& config) {
  calibration_truth.validate();
  check_library_matches(library, calibration_truth.manifest);
  const std::size_t wells = calibration_truth.wells.size();
  const auto matrix = intensity_matrix(calibration_spectra, library, config, wells);
  std::vector<double> bg(library.size(), 0.0);
  for (std::size_t i = 0; i < library.size(); ++i) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t w = 0; w < wells; ++w) {
      if (calibration_truth.wells[w].levels[i] == 0) {
        sum += matrix[i][w];
        ++n;
      }
    }
    bg[i] = n > 0 ? sum / static_cast<double>(n) : 0.0;
  }
  return bg;
}

std::vector<double> background_from_data(std::span<const Spectrum> spectra, const CompoundLibrary& library,
                                         const ChannelConfig& config, std::size_t wells) {
  auto matrix = intensity_matrix(spectra, library, config, wells);
  std::vector<double> bg(library.size(), 0.0);
  for (std::size_t i = 0; i < library.size() && wells > 0; ++i) {
    auto& row = matrix[i];
    const auto mid = row.begin() + static_cast<std::ptrdiff_t>(wells / 2);
    std::nth_element(row.begin(), mid, row.end());
    bg[i] = *mid;
  }
  return bg;
}

SpectraDecode decode_sparse_spectra(std::span<const Spectrum> spectra, const CompoundLibrary& library,
                                    const Manifest& manifest, const ChannelConfig& config,
                                    std::span<const double> background, unsigned threads) {
  if (manifest.scheme != Scheme::kSparse) throw ValidationError("manifest scheme is not sparse");
  check_library_matches(library, manifest);
  std::vector<double> estimated;
  if (background.empty()) {
    estimated = background_from_data(spectra, library, config, manifest.wells);
    background = estimated;
  }
  if (background.size() != library.size()) throw ValidationError("background vector does not match library");
  const auto matrix = intensity_matrix(spectra, library, config, manifest.wells);
  const std::size_t block = manifest.block_size;
  const std::size_t blocks = manifest.library_size / block;

  SpectraDecode out;
  out.layout.manifest = manifest;
  out.layout.wells.resize(manifest.wells);
  std::vector<std::size_t> empty(manifest.wells, 0);
  parallel_for(manifest.wells, threads, [&](std::size_t w) {
    auto& levels = out.layout.wells[w].levels;
    levels.assign(library.size(), 0);
    for (std::size_t b = 0; b < blocks; ++b) {
      std::size_t best = 0;
      double best_score = -1.0;
      bool any_signal = false;
      for (std::size_t j = 0; j < block; ++j) {
        const std::size_t i = b * block + j;
        const double raw = matrix[i][w];
        any_signal = any_signal || raw > 0.0;
        const double score = background[i] > 0.0 ? raw / background[i] : raw;
        if (score > best_score) {
          best_score = score;
          best = j;
        }
      }
      if (!any_signal) {
        best = 0;
        ++empty[w];
      }
      levels[b * block + best] = 1;
    }
  });
  out.empty_blocks = std::accumulate(empty.begin(), empty.end(), std::size_t{0});
  out.bits = decode_sparse(out.layout);
  return out;
}

std::size_t ConfusionEstimate::compounds_below(double rate) const {
  return static_cast<std::size_t>(
      std::count_if(compound_error_rates.begin(), compound_error_rates.end(), [&](double e) { return e < rate; }));
}

ConfusionEstimate estimate_confusion(const PlateLayout& decoded, const PlateLayout& truth) {
  if (decoded.wells.size() != truth.wells.size() ||
      decoded.manifest.library_size != truth.manifest.library_size) {
    throw ValidationError(fmt::format("shape mismatch: decoded {}x{}, truth {}x{}", decoded.wells.size(),
                                      decoded.manifest.library_size, truth.wells.size(),
                                      truth.manifest.library_size));
  }
  const std::size_t m = truth.manifest.library_size;
  ConfusionEstimate out;
  out.wells = truth.wells.size();
  out.compound_errors.assign(m, 0);
  for (std::size_t w = 0; w < out.wells; ++w) {
    const auto& a = decoded.wells[w].levels;
    const auto& b = truth.wells[w].levels;
    if (a.size() != m || b.size() != m) throw ValidationError(fmt::format("shape mismatch in well {}", w));
    bool exact = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (a[i] != b[i]) {
        ++out.compound_errors[i];
        exact = false;
      }
    }
    if (exact) ++out.exact_wells;
  }
  out.compound_error_rates.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.compound_error_rates[i] =
        out.wells ? static_cast<double>(out.compound_errors[i]) / static_cast<double>(out.wells) : 0.0;
    out.independent_pc *= 1.0 - out.compound_error_rates[i];
  }
  out.pc = out.wells ? static_cast<double>(out.exact_wells) / static_cast<double>(out.wells) : 1.0;
  return out;
}

}  // namespace molmix
