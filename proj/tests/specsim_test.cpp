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

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

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

struct Sample {
  double mean, sd;
};

Sample sample(const std::vector<double>& xs) {
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (xs.size() - 1))};
}

std::vector<double> gaussian(std::size_t n, double mean, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(mean, sd);
  std::vector<double> xs(n);
  for (auto& x : xs) x = d(rng);
  return xs;
}

// Dense run at a given on/off gap; returns raw bit errors.
std::size_t dense_errors(double log_gap, std::uint64_t seed, std::size_t bits = 6000) {
  const auto lib = CompoundLibrary::synthetic(5, 1, 2);
  ChannelConfig cfg;
  cfg.intensity_off_mean = 1e4;
  cfg.intensity_off_sigma = cfg.intensity_on_sigma = 0.5;
  cfg.intensity_on_mean = 1e4 * std::exp(log_gap);
  cfg.rng_seed = seed;
  const PlateLayout truth = encode_dense(random_bits(bits, seed), lib);
  const PlateLayout cal = encode_dense(random_bits(1000, seed + 1), lib);
  ChannelConfig cal_cfg = cfg;
  cal_cfg.rng_seed = seed + 1000003;
  const auto classifier = fit_classifier(simulate_readout(cal, lib, cal_cfg), cal, lib, cfg);
  const auto decoded = decode_dense_spectra(simulate_readout(truth, lib, cfg), classifier, lib, truth.manifest, cfg);
  const BitVector original = decode_dense(truth);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < original.size(); ++i) errors += original[i] != decoded.bits[i];
  return errors;
}

TEST(Simulate, ZeroNoiseIntensities) {
  const auto lib = CompoundLibrary::synthetic(5, 1, 2);
  const PlateLayout layout = encode_dense(BitVector{1, 0, 1, 0, 1}, lib);
  const auto spectra = simulate_readout(layout, lib, ChannelConfig::zero_noise());
  ASSERT_EQ(spectra.size(), 1U);
  ASSERT_EQ(spectra[0].peaks.size(), 5U);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(spectra[0].peaks[i].mass, lib[i].detection_mass + 21.981944);
    EXPECT_EQ(spectra[0].peaks[i].intensity, i % 2 == 0 ? 1.0 : 0.0);
  }
}

TEST(Simulate, PeaksSortedByMass) {
  const CompoundLibrary lib({{0, "c", 300.0}, {1, "a", 120.0}, {2, "b", 200.0}}, 1, 2);
  const auto spectra = simulate_readout(encode_dense(BitVector{1, 1, 1}, lib), lib, ChannelConfig::zero_noise());
  EXPECT_LT(spectra[0].peaks[0].mass, spectra[0].peaks[1].mass);
  EXPECT_LT(spectra[0].peaks[1].mass, spectra[0].peaks[2].mass);
}

TEST(Simulate, MassCollision) {
  const CompoundLibrary lib({{0, "a", 500.0}, {1, "b", 500.004}}, 1, 2);
  const PlateLayout layout = encode_dense(BitVector{1, 1}, lib);
  EXPECT_THROW(simulate_readout(layout, lib, ChannelConfig::zero_noise()), ChannelError);
  ChannelConfig tight = ChannelConfig::zero_noise();
  tight.mass_tolerance_ppm = 1.0;
  EXPECT_NO_THROW(simulate_readout(layout, lib, tight));
}

TEST(Simulate, DeterministicAcrossThreads) {
  const auto lib = CompoundLibrary::synthetic(64, 16, 2);
  const PlateLayout layout = encode_sparse(random_bits(5000, 1), lib);
  ChannelConfig cfg = ChannelConfig::sparse_nominal();
  cfg.dropout_probability = 0.05;
  cfg.rng_seed = 99;
  const auto serial = simulate_readout(layout, lib, cfg, 1);
  EXPECT_EQ(format_spectra(simulate_readout(layout, lib, cfg, 4)), format_spectra(serial));
  EXPECT_EQ(simulate_readout(layout, lib, cfg, 1), serial);
  cfg.rng_seed = 100;
  EXPECT_NE(simulate_readout(layout, lib, cfg, 1), serial);
}

TEST(Simulate, DropoutReplacesPresentPeaks) {
  const auto lib = CompoundLibrary::synthetic(8, 1, 2);
  ChannelConfig cfg = ChannelConfig::zero_noise();
  cfg.dropout_probability = 1.0;
  const auto spectra = simulate_readout(encode_dense(BitVector(80, 1), lib), lib, cfg);
  for (const auto& s : spectra) {
    for (const auto& p : s.peaks) EXPECT_EQ(p.intensity, 0.0);
  }
}

TEST(Simulate, MultiLevelScaling) {
  const auto lib = CompoundLibrary::synthetic(2, 1, 4);
  const PlateLayout layout = encode_dense(BitVector{1, 1, 0, 1}, lib, 4);
  const auto spectra = simulate_readout(layout, lib, ChannelConfig::zero_noise());
  EXPECT_DOUBLE_EQ(spectra[0].peaks[0].intensity, 1.0);
  EXPECT_DOUBLE_EQ(spectra[0].peaks[1].intensity, 1.0 / 3.0);
}

TEST(Matching, NearestWithinWindow) {
  Spectrum s{0, {{500.0, 1.0}, {500.0024, 2.0}, {500.01, 3.0}}};
  EXPECT_EQ(matched_intensity(s, 500.002, 5.0), 2.0);
  EXPECT_EQ(matched_intensity(s, 500.0005, 5.0), 1.0);
  EXPECT_EQ(matched_intensity(s, 499.99, 5.0), 0.0);
  EXPECT_EQ(matched_intensity(Spectrum{}, 500.0, 5.0), 0.0);
}

TEST(Fisher, SymmetricClasses) {
  const auto b = fit_fisher_1d(std::vector<double>{-1.0, 1.0}, std::vector<double>{9.0, 11.0});
  EXPECT_NEAR(b.threshold, 5.0, 1e-12);
  EXPECT_GT(b.weight, 0.0);
  EXPECT_TRUE(b.above(5.1));
  EXPECT_FALSE(b.above(4.9));
}

TEST(Fisher, ClosedFormOnSamples) {
  const auto lo = gaussian(4000, 0.0, 1.0, 1);
  const auto hi = gaussian(4000, 10.0, 2.0, 2);
  const auto b = fit_fisher_1d(lo, hi);
  const Sample s0 = sample(lo), s1 = sample(hi);
  EXPECT_NEAR(b.weight, (s1.mean - s0.mean) / (s0.sd * s0.sd + s1.sd * s1.sd), 1e-12);
  EXPECT_NEAR(b.threshold, s0.mean + (s1.mean - s0.mean) * s0.sd / (s0.sd + s1.sd), 1e-9);
  // Wider upper class pulls the boundary toward the tighter lower class.
  EXPECT_LT(b.threshold, 0.5 * (s0.mean + s1.mean));
}

TEST(Fisher, EqualVarianceNearMidpoint) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto b = fit_fisher_1d(gaussian(5000, 2.0, 1.0, seed), gaussian(5000, 8.0, 1.0, seed + 100));
    EXPECT_NEAR(b.threshold, 5.0, 0.02 * 5.0);
  }
}

TEST(Fisher, DegenerateInputs) {
  const std::vector<double> a{1.0, 1.0, 1.0};
  const std::vector<double> c{3.0, 3.0};
  const auto b = fit_fisher_1d(a, c);
  EXPECT_TRUE(b.fallback);
  EXPECT_DOUBLE_EQ(b.threshold, 2.0);
  EXPECT_THROW(fit_fisher_1d(a, a), ValidationError);
  EXPECT_THROW(fit_fisher_1d(a, std::vector<double>{}), ValidationError);
}

TEST(Classifier, NeedsBothClasses) {
  const auto lib = CompoundLibrary::synthetic(5, 1, 2);
  const PlateLayout cal = encode_dense(BitVector(500, 1), lib);
  const auto spectra = simulate_readout(cal, lib, ChannelConfig::dense_nominal());
  EXPECT_THROW(fit_classifier(spectra, cal, lib, ChannelConfig::dense_nominal()), ValidationError);
}

TEST(DenseDecode, ZeroNoiseExact) {
  const auto lib = CompoundLibrary::synthetic(7, 1, 2);
  const PlateLayout cal = encode_dense(random_bits(700, 3), lib);
  const auto cfg = ChannelConfig::zero_noise();
  const auto classifier = fit_classifier(simulate_readout(cal, lib, cfg), cal, lib, cfg);
  EXPECT_EQ(classifier.fallback_count(), 7U);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const BitVector bits = random_bits(1000 + seed * 37, seed);
    const PlateLayout truth = encode_dense(bits, lib);
    const auto out = decode_dense_spectra(simulate_readout(truth, lib, cfg), classifier, lib, truth.manifest, cfg);
    EXPECT_EQ(out.layout, truth);
    EXPECT_EQ(out.bits, bits);
  }
}

TEST(DenseDecode, MultiLevelZeroNoise) {
  const auto lib = CompoundLibrary::synthetic(4, 1, 4);
  const auto cfg = ChannelConfig::zero_noise();
  const PlateLayout cal = encode_dense(random_bits(800, 4), lib, 4);
  const auto classifier = fit_classifier(simulate_readout(cal, lib, cfg), cal, lib, cfg);
  const BitVector bits = random_bits(999, 5);
  const PlateLayout truth = encode_dense(bits, lib, 4);
  const auto out = decode_dense_spectra(simulate_readout(truth, lib, cfg), classifier, lib, truth.manifest, cfg);
  EXPECT_EQ(out.bits, bits);
}

TEST(DenseDecode, MissingSpectraReadAbsent) {
  const auto lib = CompoundLibrary::synthetic(5, 1, 2);
  const auto cfg = ChannelConfig::zero_noise();
  const PlateLayout cal = encode_dense(random_bits(500, 6), lib);
  const auto classifier = fit_classifier(simulate_readout(cal, lib, cfg), cal, lib, cfg);
  const PlateLayout truth = encode_dense(BitVector(10, 1), lib);
  auto spectra = simulate_readout(truth, lib, cfg);
  spectra.pop_back();
  const auto out = decode_dense_spectra(spectra, classifier, lib, truth.manifest, cfg);
  EXPECT_EQ(out.layout.wells[1].levels, std::vector<std::uint8_t>(5, 0));
}

TEST(DenseDecode, ErrorGrowsAsGapShrinks) {
  // Paired seeds across five gaps.
  const std::vector<double> gaps{4.0, 3.0, 2.4, 1.8, 1.2};
  std::vector<std::size_t> totals(gaps.size(), 0);
  for (std::size_t g = 0; g < gaps.size(); ++g) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) totals[g] += dense_errors(gaps[g], seed, 3000);
  }
  for (std::size_t g = 1; g < gaps.size(); ++g) EXPECT_GT(totals[g], totals[g - 1]) << gaps[g];
  // Analytic overlap at each gap, 30000 bits per point.
  for (std::size_t g = 1; g < gaps.size(); ++g) {
    const double p = two_class_overlap_error(gaps[g], 0.5);
    const double expected = p * 30000.0;
    EXPECT_NEAR(static_cast<double>(totals[g]), expected, 5.0 * std::sqrt(expected) + 3.0) << gaps[g];
  }
}

TEST(SparseDecode, ZeroNoiseExactAndOneHot) {
  const auto lib = CompoundLibrary::synthetic(64, 16, 2);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const BitVector bits = random_bits(3000, seed);
    const PlateLayout truth = encode_sparse(bits, lib);
    const auto out =
        decode_sparse_spectra(simulate_readout(truth, lib, ChannelConfig::zero_noise()), lib, truth.manifest,
                              ChannelConfig::zero_noise());
    EXPECT_EQ(out.bits, bits);
    EXPECT_EQ(out.empty_blocks, 0U);
  }
}

TEST(SparseDecode, DominantPeakWins) {
  const auto lib = CompoundLibrary::synthetic(16, 16, 2);
  const PlateLayout truth = encode_sparse(BitVector{1, 0, 0, 0}, lib);
  Spectrum s{0, {}};
  for (std::size_t i = 0; i < 16; ++i) s.peaks.push_back({lib[i].detection_mass + 21.981944, i == 8 ? 50.0 : 1.0});
  const std::vector<Spectrum> spectra{s};
  const auto out = decode_sparse_spectra(spectra, lib, truth.manifest, ChannelConfig::zero_noise(),
                                         std::vector<double>(16, 1.0));
  EXPECT_EQ(out.bits, (BitVector{1, 0, 0, 0}));
}

TEST(SparseDecode, EmptyBlocksAndTies) {
  const auto lib = CompoundLibrary::synthetic(32, 16, 2);
  const PlateLayout truth = encode_sparse(BitVector(8, 1), lib);
  Spectrum s{0, {}};
  for (std::size_t i = 16; i < 32; ++i) s.peaks.push_back({lib[i].detection_mass + 21.981944, 7.0});
  const std::vector<Spectrum> spectra{s};
  const auto out = decode_sparse_spectra(spectra, lib, truth.manifest, ChannelConfig::zero_noise(),
                                         std::vector<double>(32, 1.0));
  EXPECT_EQ(out.empty_blocks, 1U);
  EXPECT_EQ(out.bits, BitVector(8, 0));
  EXPECT_NO_THROW(out.layout.validate());
}

TEST(SparseDecode, NoisyOutputAlwaysOneHot) {
  const auto lib = CompoundLibrary::synthetic(64, 16, 2);
  ChannelConfig cfg = ChannelConfig::sparse_nominal();
  cfg.dropout_probability = 0.3;
  const PlateLayout truth = encode_sparse(random_bits(4000, 2), lib);
  const auto out = decode_sparse_spectra(simulate_readout(truth, lib, cfg), lib, truth.manifest, cfg);
  EXPECT_NO_THROW(out.layout.validate());
  EXPECT_EQ(decode_sparse(out.layout), out.bits);
}

TEST(Confusion, Arithmetic) {
  const auto lib = CompoundLibrary::synthetic(5, 1, 2);
  const PlateLayout truth = encode_dense(random_bits(6142, 1), lib);
  EXPECT_EQ(estimate_confusion(truth, truth).pc, 1.0);
  PlateLayout flipped = truth;
  flipped.wells[17].levels[3] ^= 1U;
  const ConfusionEstimate e = estimate_confusion(flipped, truth);
  EXPECT_DOUBLE_EQ(e.pc, 1228.0 / 1229.0);
  EXPECT_DOUBLE_EQ(e.compound_error_rates[3], 1.0 / 1229.0);
  EXPECT_EQ(e.compound_errors[3], 1U);
  EXPECT_EQ(e.compounds_below(0.01), 5U);
  PlateLayout other = encode_dense(random_bits(100, 1), lib);
  EXPECT_THROW(estimate_confusion(other, truth), ValidationError);
}

TEST(Confusion, IndependentErrorsFactorize) {
  const auto lib = CompoundLibrary::synthetic(5, 1, 2);
  ChannelConfig cfg;
  cfg.intensity_off_mean = 1e4;
  cfg.intensity_off_sigma = cfg.intensity_on_sigma = 0.5;
  cfg.intensity_on_mean = 1e4 * std::exp(1.5);
  const PlateLayout cal = encode_dense(random_bits(2000, 8), lib);
  ChannelConfig cal_cfg = cfg;
  cal_cfg.rng_seed = 77;
  const auto classifier = fit_classifier(simulate_readout(cal, lib, cal_cfg), cal, lib, cfg);
  const PlateLayout truth = encode_dense(random_bits(50000, 9), lib);
  const auto out = decode_dense_spectra(simulate_readout(truth, lib, cfg), classifier, lib, truth.manifest, cfg);
  const ConfusionEstimate e = estimate_confusion(out.layout, truth);
  const double se = std::sqrt(e.pc * (1.0 - e.pc) / e.wells);
  EXPECT_NEAR(e.pc, e.independent_pc, 3.0 * se);
}

TEST(Calibration, OperatingPoints) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(normal_cdf(-1.959963984540054), 0.025, 1e-12);
  const double gap = calibrate_dense_gap(6.5e-4, 0.5);
  EXPECT_NEAR(gap, 2.0 * 0.5 * 3.215979760788107, 1e-9);
  EXPECT_NEAR(two_class_overlap_error(gap, 0.5), 6.5e-4, 1e-12);
  const double sgap = calibrate_sparse_gap(0.054, 0.5, 16);
  EXPECT_NEAR(one_hot_bit_error(sgap, 0.5, 16), 0.054, 1e-9);
  EXPECT_NEAR(one_hot_block_error(sgap, 0.5, 16), 0.10125, 1e-9);
  EXPECT_NEAR(sgap / 0.5, 3.19386, 1e-4);
  // Two-way one-hot is a pairwise comparison with difference sd sigma * sqrt(2).
  EXPECT_NEAR(one_hot_block_error(1.0, 0.5, 2), normal_cdf(-1.0 / (0.5 * std::sqrt(2.0))), 1e-9);
  EXPECT_EQ(ChannelConfig::dense_nominal().intensity_off_mean, 1e4);
}

TEST(Calibration, DenseOperatingPointMonteCarlo) {
  std::size_t errors = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) errors += dense_errors(calibrate_dense_gap(6.5e-4, 0.5), seed);
  // Mean 39 errors over 60000 bits at the analytic rate.
  EXPECT_NEAR(static_cast<double>(errors), 39.0, 25.0);
}

TEST(Config, Validation) {
  ChannelConfig c;
  c.dropout_probability = 1.5;
  EXPECT_THROW(c.validate(), ValidationError);
  c = ChannelConfig{};
  c.mass_tolerance_ppm = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
  ChannelConfig out;
  EXPECT_TRUE(ChannelConfig::preset("dense-nominal", out));
  EXPECT_EQ(out, ChannelConfig::dense_nominal());
  EXPECT_FALSE(ChannelConfig::preset("nope", out));
}

}  // namespace
}  // namespace molmix
