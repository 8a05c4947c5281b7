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

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "molmix/capacity.hpp"
#include "molmix/codec.hpp"
#include "molmix/ecc.hpp"
#include "molmix/errors.hpp"
#include "molmix/io.hpp"
#include "molmix/report.hpp"
#include "molmix/specsim.hpp"

namespace molmix::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kConfigDirEnv = "MOLMIX_CONFIG_DIR";

std::string sig12(double v) { return fmt::format("{:.12g}", v); }

// Output files are collected and written only after every input validated.
class PendingWrites {
 public:
  void add(std::string path, std::string content) { files_.emplace_back(std::move(path), std::move(content)); }
  void commit() const {
    for (const auto& [path, content] : files_) write_text_file(path, content);
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

// A reference stored in a manifest is tried as given, then relative to the
// directory of the file that holds the manifest.
std::string resolve_ref(const std::string& ref, const std::string& holder) {
  if (ref.empty() || fs::exists(ref)) return ref;
  const fs::path alt = fs::path(holder).parent_path() / ref;
  if (fs::exists(alt)) return alt.string();
  return ref;
}

ChannelConfig load_channel_config(const std::string& name) {
  if (fs::is_regular_file(name)) return parse_channel_config(read_text_file(name));
  ChannelConfig preset;
  if (ChannelConfig::preset(name, preset)) return preset;
  if (const char* dir = std::getenv(kConfigDirEnv)) {
    for (const auto& candidate : {fs::path(dir) / name, fs::path(dir) / (name + ".cfg")}) {
      if (fs::is_regular_file(candidate)) return parse_channel_config(read_text_file(candidate.string()));
    }
  }
  throw ValidationError(fmt::format("channel config '{}' is neither a file nor a preset", name));
}

Codebook load_codebook(const std::string& ref) {
  if (ref == "hamming74") return Codebook::hamming74();
  return parse_codebook(read_text_file(ref));
}

CompoundLibrary load_library(const std::string& flag, const Manifest& manifest, const std::string& holder) {
  const std::string path = !flag.empty() ? flag : resolve_ref(manifest.library_ref, holder);
  if (path.empty()) throw ValidationError("no library given and the manifest names none");
  return parse_library(read_text_file(path));
}

// ---------------------------------------------------------------- capacity

struct CapacityArgs {
  bool c1 = false, c2 = false, c3 = false, c4 = false, cprime = false, energy = false, partition = false,
       address = false;
  std::string M = "1", Q = "0", L = "2", S = "1", omega;
  std::optional<double> omega_log2;
  double pc = 1.0;
  double epsilon = 1.0, gamma = 1.0;
  unsigned B = 4, N = 1, A = 0;
  double C = 1.0;
  std::string sweep;
};

struct SweepSpec {
  std::string var;
  BigInt start, stop, step;
  bool geometric = false;
};

SweepSpec parse_sweep(const std::string& text) {
  // VAR=start:stop:step, step "xF" multiplies by F.
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ValidationError("sweep must look like VAR=start:stop:step");
  SweepSpec s;
  s.var = text.substr(0, eq);
  std::vector<std::string> parts;
  std::string rest = text.substr(eq + 1);
  for (std::size_t pos = 0;;) {
    const auto colon = rest.find(':', pos);
    parts.push_back(rest.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos));
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  if (parts.size() != 3) throw ValidationError("sweep must look like VAR=start:stop:step");
  s.start = parse_big(parts[0]);
  s.stop = parse_big(parts[1]);
  s.geometric = !parts[2].empty() && parts[2][0] == 'x';
  s.step = parse_big(s.geometric ? parts[2].substr(1) : parts[2]);
  if (s.step < 1 || (s.geometric && s.step < 2)) throw ValidationError("sweep step must advance");
  if (s.var != "M" && s.var != "Q" && s.var != "S" && s.var != "L") {
    throw ValidationError("sweep variable must be one of M, Q, S, L");
  }
  return s;
}

int run_capacity(const CapacityArgs& a, std::ostream& out, std::ostream& err) {
  const int modes = a.c1 + a.c2 + a.c3 + a.c4 + a.cprime + a.energy + a.partition + a.address;
  if (modes != 1) {
    err << "capacity: choose exactly one of --c1 --c2 --c3 --c4 --cprime --energy --partition --address\n";
    return kUsage;
  }
  const auto level_count = [](const BigInt& L) {
    if (L < 2 || L > 1u << 30U) throw ValidationError("L must be in [2, 2^30]");
    return L.convert_to<unsigned>();
  };
  using Eval = std::function<CapacityValue(const BigInt& M, const BigInt& Q, const BigInt& L, const BigInt& S)>;
  Eval eval;
  std::string label;
  if (a.c1) {
    eval = [](const BigInt& M, const BigInt& Q, const BigInt&, const BigInt&) { return capacity_c1(M, Q); };
    label = "C1";
  } else if (a.c2) {
    eval = [](const BigInt& M, const BigInt& Q, const BigInt&, const BigInt&) { return capacity_c2(M, Q); };
    label = "C2";
  } else if (a.c3) {
    eval = [&](const BigInt& M, const BigInt&, const BigInt& L, const BigInt&) {
      return capacity_c3(M, level_count(L));
    };
    label = "C3";
  } else if (a.c4) {
    eval = [](const BigInt& M, const BigInt&, const BigInt&, const BigInt& S) { return capacity_c4(M, S); };
    label = "C4";
  }

  if (eval) {
    BigInt M = parse_big(a.M), Q = parse_big(a.Q), L = parse_big(a.L), S = parse_big(a.S);
    if (!a.sweep.empty()) {
      const SweepSpec sw = parse_sweep(a.sweep);
      std::string csv = fmt::format("{},bits\n", sw.var);
      std::size_t skipped = 0;
      for (BigInt v = sw.start; v <= sw.stop; v = sw.geometric ? BigInt(v * sw.step) : BigInt(v + sw.step)) {
        BigInt* target = sw.var == "M" ? &M : sw.var == "Q" ? &Q : sw.var == "S" ? &S : &L;
        *target = v;
        try {
          csv += fmt::format("{},{}\n", v.str(), sig12(eval(M, Q, L, S).bits));
        } catch (const ValidationError&) {
          ++skipped;
        }
        if (sw.geometric && v == 0) break;
      }
      out << csv;
      if (skipped > 0) err << "capacity: skipped " << skipped << " points outside the preconditions\n";
      return kOk;
    }
    const CapacityValue v = eval(M, Q, L, S);
    out << label << " bits: " << sig12(v.bits) << "\n";
    if (v.omega && boost::multiprecision::msb(*v.omega) < 200) out << "omega: " << v.omega->str() << "\n";
    if (v.degenerate) {
      out << "degenerate: S = 1 leaves no payload; densest-mixture C2(M, M) bits: "
          << sig12(capacity_c2(M, M).bits) << "\n";
    }
    return kOk;
  }

  if (a.cprime) {
    const ConfusionCapacity c = a.omega_log2 ? confusion_limited_capacity(*a.omega_log2, a.pc)
                                             : confusion_limited_capacity(parse_big(a.omega), a.pc);
    const double log2_omega = a.omega_log2 ? *a.omega_log2 : log2_big(parse_big(a.omega));
    out << "C' bits: " << sig12(c.bits) << "\n";
    out << "approximation bits: " << sig12(confusion_limited_approx(log2_omega, a.pc)) << "\n";
    if (c.clamped) out << "clamped: raw value " << sig12(c.raw) << " is below zero\n";
    return kOk;
  }
  if (a.energy) {
    out << "sparse energy per bit: " << sig12(energy_per_bit_sparse(a.epsilon, a.B)) << "\n";
    out << "dense energy per bit: " << sig12(energy_per_bit_dense(a.epsilon, a.N)) << "\n";
    out << "mixing energy per bit: " << sig12(energy_per_bit_mixing(a.gamma)) << "\n";
    return kOk;
  }
  if (a.partition) {
    const Partition p = optimal_partition(a.C);
    out << "W: " << p.wells << "\nM: " << p.library << "\nsqrt(C): " << sig12(p.continuous) << "\n";
    return kOk;
  }
  const AddressPayload ap = address_payload_equivalence(PolymerSpec{a.B, a.N, a.A});
  out << "addresses: " << ap.num_addresses.str() << "\nsparsity: " << ap.sparsity.str()
      << "\nbits per mixture: " << sig12(ap.bits_per_mixture) << "\n";
  if (ap.degenerate) out << "degenerate: S = 1 leaves no payload\n";
  out << "densest-mixture C2(M, M) bits: " << sig12(ap.dense_bits) << "\n";
  return kOk;
}

// ----------------------------------------------------------------- library

struct LibraryArgs {
  std::size_t M = 5, S = 1;
  unsigned L = 2;
  double base_mass = 150.0, spacing = 2.0;
  std::string out;
};

int run_library(const LibraryArgs& a, std::ostream& out) {
  const CompoundLibrary lib = CompoundLibrary::synthetic(a.M, a.S, a.L, a.base_mass, a.spacing);
  write_text_file(a.out, format_library(lib));
  out << "compounds: " << lib.size() << "\n";
  return kOk;
}

// ------------------------------------------------------------------ encode

struct EncodeArgs {
  std::string image, bits, library, scheme = "dense", ecc, out, calibration_out;
  std::optional<unsigned> L;
  std::size_t ecc_stride = 1;
  std::size_t calibration_wells = 200;
  std::uint64_t seed = 1;
};

PlateLayout random_layout(const CompoundLibrary& library, const Manifest& like, std::size_t wells,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Manifest m = like;
  m.ecc.reset();
  m.image_width = m.image_height = 0;
  BitVector bits(wells * m.bits_per_well());
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1U);
  PlateLayout layout =
      m.scheme == Scheme::kDense ? encode_dense(bits, library, m.levels) : encode_sparse(bits, library);
  layout.manifest.library_ref = m.library_ref;
  return layout;
}

int run_encode(const EncodeArgs& a, std::ostream& out) {
  if (a.image.empty() == a.bits.empty()) throw ValidationError("encode: give exactly one of --image or --bits");
  BitVector data;
  std::size_t width = 0, height = 0;
  if (!a.image.empty()) {
    const BitImage img = parse_pbm(read_text_file(a.image));
    data = image_to_bits(img);
    width = img.width;
    height = img.height;
  } else {
    data = parse_bits(read_text_file(a.bits));
  }
  const CompoundLibrary library = parse_library(read_text_file(a.library));
  const Scheme scheme = parse_scheme(a.scheme);
  const unsigned levels = a.L.value_or(library.levels());
  if (scheme == Scheme::kSparse && levels != 2) throw ValidationError("sparse scheme is binary (L = 2)");

  PlateLayout layout;
  if (!a.ecc.empty()) {
    if (scheme == Scheme::kDense && levels != library.levels()) {
      throw ValidationError("--L with --ecc: set the level count in the library file");
    }
    layout = ecc_encode_layout(data, load_codebook(a.ecc), a.ecc, library, scheme, a.ecc_stride);
  } else {
    layout = scheme == Scheme::kDense ? encode_dense(data, library, levels) : encode_sparse(data, library);
  }
  layout.manifest.library_ref = a.library;
  layout.manifest.image_width = width;
  layout.manifest.image_height = height;

  PendingWrites writes;
  writes.add(a.out, format_layout(layout));
  if (!a.calibration_out.empty()) {
    writes.add(a.calibration_out, format_layout(random_layout(library, layout.manifest, a.calibration_wells, a.seed)));
  }
  writes.commit();
  out << "wells: " << layout.manifest.wells << "\nbits per well: " << layout.manifest.bits_per_well()
      << "\npadding bits: " << layout.manifest.padding_bits << "\n";
  if (layout.manifest.ecc) {
    out << "data bits: " << data.size() << "\ncoded bits: " << layout.manifest.original_bit_length << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string layout, library, channel_config = "zero-noise", out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  const PlateLayout layout = parse_layout(read_text_file(a.layout));
  const CompoundLibrary library = load_library(a.library, layout.manifest, a.layout);
  ChannelConfig config = load_channel_config(a.channel_config);
  if (a.seed) config.rng_seed = *a.seed;
  const auto spectra = simulate_readout(layout, library, config, a.threads);
  write_text_file(a.out, format_spectra(spectra));
  out << format_channel_config(config);
  return kOk;
}

// ------------------------------------------------------------------ decode

struct DecodeArgs {
  std::string spectra, manifest, library, channel_config = "zero-noise", calibration, calibration_spectra, ecc,
      truth, out_layout, out_bits, out_image, report;
  std::optional<std::size_t> guess_weight;
  unsigned threads = 1;
};

int run_decode(const DecodeArgs& a, std::ostream& out) {
  const Manifest manifest = parse_manifest(read_text_file(a.manifest));
  const CompoundLibrary library = load_library(a.library, manifest, a.manifest);
  const ChannelConfig config = load_channel_config(a.channel_config);
  const auto spectra = parse_spectra(read_text_file(a.spectra));

  std::optional<PlateLayout> calibration;
  std::vector<Spectrum> calibration_spectra;
  if (!a.calibration.empty()) {
    if (a.calibration_spectra.empty()) throw ValidationError("--calibration needs --calibration-spectra");
    calibration = parse_layout(read_text_file(a.calibration));
    calibration_spectra = parse_spectra(read_text_file(a.calibration_spectra));
  }

  SpectraDecode decoded;
  std::size_t fallbacks = 0;
  if (manifest.scheme == Scheme::kDense) {
    if (!calibration) throw ValidationError("dense decoding needs calibration wells (--calibration)");
    const IntensityClassifier classifier = fit_classifier(calibration_spectra, *calibration, library, config);
    fallbacks = classifier.fallback_count();
    decoded = decode_dense_spectra(spectra, classifier, library, manifest, config, a.threads);
  } else {
    std::vector<double> background;
    if (calibration) background = background_from_calibration(calibration_spectra, *calibration, library, config);
    decoded = decode_sparse_spectra(spectra, library, manifest, config, background, a.threads);
  }

  std::optional<Codebook> codebook;
  std::optional<NoiseGuessOrder> order;
  BitVector data = decoded.bits;
  std::optional<EccDecode> ecc_result;
  if (manifest.ecc) {
    codebook = load_codebook(!a.ecc.empty() ? a.ecc : resolve_ref(manifest.ecc->codebook_ref, a.manifest));
    order = a.guess_weight ? NoiseGuessOrder::up_to_weight(codebook->length(), *a.guess_weight)
                           : NoiseGuessOrder::default_for(codebook->length());
    ecc_result = ecc_decode_layout(decoded.layout, *codebook, *order);
    data = ecc_result->data;
  }

  PendingWrites writes;
  writes.add(a.out_layout, format_layout(decoded.layout));
  if (!a.out_bits.empty()) writes.add(a.out_bits, format_bits(data));
  if (!a.out_image.empty()) {
    if (manifest.image_width == 0) throw ValidationError("manifest records no image shape; use --out-bits");
    writes.add(a.out_image, format_pbm(bits_to_image(data, manifest.image_width, manifest.image_height)));
  }
  std::optional<RunReport> report;
  if (!a.report.empty() || !a.truth.empty()) {
    if (a.truth.empty()) throw ValidationError("--report needs --truth to score the decode");
    const PlateLayout truth = parse_layout(read_text_file(a.truth));
    ReportInputs in;
    in.codebook = codebook ? &*codebook : nullptr;
    in.order = order ? &*order : nullptr;
    in.spectra = spectra;
    in.library = &library;
    in.config = &config;
    report = build_report(truth, decoded.layout, in);
    if (!a.report.empty()) writes.add(a.report, format_report(*report));
  }
  writes.commit();

  out << "wells: " << manifest.wells << "\n";
  if (manifest.scheme == Scheme::kSparse) out << "empty blocks: " << decoded.empty_blocks << "\n";
  if (fallbacks > 0) out << "zero-variance boundaries: " << fallbacks << "\n";
  if (ecc_result) out << "abandoned codewords: " << ecc_result->abandoned << " of " << ecc_result->codewords << "\n";
  if (report) {
    out << "bit accuracy: " << sig12(report->bit_accuracy) << "\nPc: " << sig12(report->pc)
        << "\ncompounds below 1% raw error: " << report->compounds_below_1pct << " of "
        << report->compound_error_rates.size() << "\n";
  }
  return kOk;
}

// ------------------------------------------------------------------ report

struct ReportArgs {
  std::string truth, decoded, ecc, spectra, library, channel_config = "zero-noise", out;
};

int run_report(const ReportArgs& a, std::ostream& out) {
  const PlateLayout truth = parse_layout(read_text_file(a.truth));
  const PlateLayout decoded = parse_layout(read_text_file(a.decoded));
  std::optional<Codebook> codebook;
  if (truth.manifest.ecc) {
    codebook = load_codebook(!a.ecc.empty() ? a.ecc : resolve_ref(truth.manifest.ecc->codebook_ref, a.truth));
  }
  ReportInputs in;
  in.codebook = codebook ? &*codebook : nullptr;
  std::vector<Spectrum> spectra;
  std::optional<CompoundLibrary> library;
  ChannelConfig config;
  if (!a.spectra.empty()) {
    spectra = parse_spectra(read_text_file(a.spectra));
    library = load_library(a.library, truth.manifest, a.truth);
    config = load_channel_config(a.channel_config);
    in.spectra = spectra;
    in.library = &*library;
    in.config = &config;
  }
  const std::string text = format_report(build_report(truth, decoded, in));
  if (a.out.empty()) {
    out << text;
  } else {
    write_text_file(a.out, text);
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"molmix: data storage in small-molecule mixtures"};
  app.require_subcommand(1);

  CapacityArgs cap;
  auto* capacity = app.add_subcommand("capacity", "Capacity and energy bounds");
  capacity->add_flag("--c1", cap.c1, "Unordered mixture with duplicates, C1(M, Q)");
  capacity->add_flag("--c2", cap.c2, "Unordered mixture without duplicates, C2(M, Q)");
  capacity->add_flag("--c3", cap.c3, "Concentration levels, C3(M, L)");
  capacity->add_flag("--c4", cap.c4, "Sparse one-hot, C4(M, S)");
  capacity->add_flag("--cprime", cap.cprime, "Confusion-limited capacity C'");
  capacity->add_flag("--energy", cap.energy, "Energy per bit");
  capacity->add_flag("--partition", cap.partition, "Minimum W + M with W * M >= C");
  capacity->add_flag("--address", cap.address, "Polymer address-payload equivalence");
  capacity->add_option("--M", cap.M, "Library size (integer or b^e)");
  capacity->add_option("--Q", cap.Q, "Maximum molecules selected");
  capacity->add_option("--L", cap.L, "Concentration levels");
  capacity->add_option("--S", cap.S, "Sparsity");
  capacity->add_option("--omega", cap.omega, "State count");
  capacity->add_option("--omega-log2", cap.omega_log2, "log2 of the state count");
  capacity->add_option("--pc", cap.pc, "Probability of correct identification");
  capacity->add_option("--epsilon", cap.epsilon, "Energy per monomer");
  capacity->add_option("--gamma", cap.gamma, "Energy per mixing action");
  capacity->add_option("--B", cap.B, "Monomer alphabet size");
  capacity->add_option("--N", cap.N, "Polymer length");
  capacity->add_option("--A", cap.A, "Address positions");
  capacity->add_option("--C", cap.C, "Target capacity for --partition");
  capacity->add_option("--sweep", cap.sweep, "CSV sweep VAR=start:stop:step (step xF multiplies)");

  LibraryArgs lib;
  auto* library = app.add_subcommand("library", "Write a synthetic compound library");
  library->add_option("--M", lib.M, "Compounds")->required();
  library->add_option("--S", lib.S, "Block size");
  library->add_option("--L", lib.L, "Levels");
  library->add_option("--base-mass", lib.base_mass, "Mass of compound 0 (Da)");
  library->add_option("--spacing", lib.spacing, "Mass step between compounds (Da)");
  library->add_option("--out", lib.out, "Library file")->required();

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Encode bits or a bitmap into a plate layout");
  encode->add_option("--image", enc.image, "PBM image (P1 or P4)");
  encode->add_option("--bits", enc.bits, "Text file of 0/1 characters");
  encode->add_option("--library", enc.library, "Library file")->required();
  encode->add_option("--scheme", enc.scheme, "dense or sparse");
  encode->add_option("--L", enc.L, "Levels per compound (dense; power of two)");
  encode->add_option("--ecc", enc.ecc, "Codebook file or 'hamming74'");
  encode->add_option("--ecc-stride", enc.ecc_stride, "Codeword interleaving depth");
  encode->add_option("--out", enc.out, "Layout file")->required();
  encode->add_option("--calibration-out", enc.calibration_out, "Also write a random calibration layout");
  encode->add_option("--calibration-wells", enc.calibration_wells, "Calibration wells");
  encode->add_option("--seed", enc.seed, "Seed for the calibration layout");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate mass-spectrometry readout");
  simulate->add_option("--layout", sim.layout, "Layout file")->required();
  simulate->add_option("--library", sim.library, "Library file (default: from manifest)");
  simulate->add_option("--channel-config", sim.channel_config, "Config file or preset");
  simulate->add_option("--seed", sim.seed, "Override the config seed");
  simulate->add_option("--threads", sim.threads, "Worker threads");
  simulate->add_option("--out", sim.out, "Spectra file")->required();

  DecodeArgs dec;
  auto* decode = app.add_subcommand("decode", "Decode spectra back into data");
  decode->add_option("--spectra", dec.spectra, "Spectra file")->required();
  decode->add_option("--manifest", dec.manifest, "Layout file (header is read)")->required();
  decode->add_option("--library", dec.library, "Library file (default: from manifest)");
  decode->add_option("--channel-config", dec.channel_config, "Config file or preset (mass matching)");
  decode->add_option("--calibration", dec.calibration, "Calibration truth layout");
  decode->add_option("--calibration-spectra", dec.calibration_spectra, "Calibration spectra");
  decode->add_option("--ecc", dec.ecc, "Codebook (default: from manifest)");
  decode->add_option("--guess-weight", dec.guess_weight, "GRAND budget: all patterns up to this weight");
  decode->add_option("--truth", dec.truth, "Truth layout for scoring");
  decode->add_option("--out-layout", dec.out_layout, "Decoded layout file")->required();
  decode->add_option("--out-bits", dec.out_bits, "Decoded bits file");
  decode->add_option("--out-image", dec.out_image, "Decoded PBM image");
  decode->add_option("--report", dec.report, "Run report file");
  decode->add_option("--threads", dec.threads, "Worker threads");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Score a decoded layout against its truth");
  report->add_option("--truth", rep.truth, "Truth layout")->required();
  report->add_option("--decoded", rep.decoded, "Decoded layout")->required();
  report->add_option("--ecc", rep.ecc, "Codebook (default: from manifest)");
  report->add_option("--spectra", rep.spectra, "Spectra for intensity histograms");
  report->add_option("--library", rep.library, "Library file (default: from manifest)");
  report->add_option("--channel-config", rep.channel_config, "Config file or preset (mass matching)");
  report->add_option("--out", rep.out, "Report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*capacity) return run_capacity(cap, out, err);
    if (*library) return run_library(lib, out);
    if (*encode) return run_encode(enc, out);
    if (*simulate) return run_simulate(sim, out);
    if (*decode) return run_decode(dec, out);
    if (*report) return run_report(rep, out);
  } catch (const ChannelError& e) {
    err << "error: " << e.what() << "\n";
    return kChannel;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kUsage;
}

}  // namespace molmix::cli
