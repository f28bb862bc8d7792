// annlc command-line harness: fixed-slope lossy coding, sliding-block coding,
// compression-based denoising, trace capture, and rate-distortion sweeps.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "annlc/archive.hpp"
#include "annlc/block_annealer.hpp"
#include "annlc/denoiser.hpp"
#include "annlc/lossless.hpp"
#include "annlc/pbm.hpp"
#include "annlc/sliding_block.hpp"
#include "annlc/sources.hpp"

using namespace annlc;

namespace {

struct InputOptions {
  std::string input_path;
  std::string pbm_path;
  std::string source;  // "bern:p" or "bsms:p"
  std::size_t n = 0;
  std::uint64_t source_seed = 1;
};

struct ModelOptions {
  int k = -1;  // -1 = pick k = max(1, floor(log_A(n)/2) - 1)
  int alphabet = 2;
  std::string context_shape;  // "dr,dc;dr,dc;..." for raster inputs
};

struct AnnealOptions {
  double alpha = 2.0;
  std::string schedule = "geometric";
  double gamma = 0.75;
  double beta0 = 1.0;
  double t0 = 0.0;  // 0 = derive from the per-flip bound
  std::uint64_t sweep = 0;  // 0 = n
  double r_mult = 10.0;
  std::uint64_t iters = 0;  // overrides r_mult when set
  std::uint64_t seed = 1;
};

struct LoadedInput {
  Sequence data;
  bool raster = false;
  std::size_t width = 0;
  std::size_t height = 0;
};

void add_input_options(CLI::App* cmd, InputOptions& in, bool need_n) {
  auto* ipath = cmd->add_option("--input", in.input_path, "raw symbol file (one byte per symbol)");
  auto* ppath = cmd->add_option("--pbm", in.pbm_path, "PBM image input (P1 or P4)");
  auto* src = cmd->add_option("--source", in.source, "synthetic source, bern:P or bsms:P");
  cmd->add_option("--n", in.n, "length for synthetic sources");
  cmd->add_option("--source-seed", in.source_seed, "seed for synthetic sources");
  ipath->excludes(ppath);
  ipath->excludes(src);
  ppath->excludes(src);
  (void)need_n;
}

void add_model_options(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--k", m.k, "context order (default: floor(log_A(n)/2) - 1, at least 1)");
  cmd->add_option("--alphabet", m.alphabet, "alphabet size")->check(CLI::Range(2, 255));
  cmd->add_option("--context-shape", m.context_shape,
                  "raster context offsets 'dr,dc;dr,dc;...' (image inputs only)");
}

void add_anneal_options(CLI::App* cmd, AnnealOptions& a) {
  cmd->add_option("--alpha", a.alpha, "slope (bits per unit distortion)");
  cmd->add_option("--schedule", a.schedule, "cooling law: geometric or logarithmic")
      ->check(CLI::IsMember({"geometric", "logarithmic"}));
  cmd->add_option("--gamma", a.gamma, "geometric cooling factor in (0,1)");
  cmd->add_option("--beta0", a.beta0, "initial inverse temperature (geometric)");
  cmd->add_option("--t0", a.t0, "logarithmic schedule T0 (default: from the per-flip bound)");
  cmd->add_option("--sweep", a.sweep, "sweep length (default: n)");
  cmd->add_option("--r-mult", a.r_mult, "iterations as a multiple of n");
  cmd->add_option("--iters", a.iters, "iteration count (overrides --r-mult)");
  cmd->add_option("--seed", a.seed, "annealer seed");
}

LoadedInput load_input(const InputOptions& in, int alphabet) {
  LoadedInput out;
  if (!in.pbm_path.empty()) {
    const Image2D img = read_pbm_file(in.pbm_path);
    out.data = img.pixels;
    out.raster = true;
    out.width = img.width;
    out.height = img.height;
    return out;
  }
  if (!in.input_path.empty()) {
    std::ifstream f(in.input_path, std::ios::binary);
    if (!f) throw CLI::ValidationError("--input", "cannot open " + in.input_path);
    std::ostringstream ss;
    ss << f.rdbuf();
    const std::string bytes = ss.str();
    out.data.reserve(bytes.size());
    for (char c : bytes) {
      const auto s = static_cast<std::uint8_t>(c);
      if (s >= alphabet)
        throw CLI::ValidationError("--input", "symbol value exceeds the alphabet");
      out.data.push_back(s);
    }
    if (out.data.empty()) throw CLI::ValidationError("--input", "empty input");
    return out;
  }
  if (!in.source.empty()) {
    const auto colon = in.source.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--source", "expected bern:P or bsms:P");
    const std::string kind = in.source.substr(0, colon);
    const double p = std::stod(in.source.substr(colon + 1));
    if (in.n == 0) throw CLI::ValidationError("--n", "synthetic sources need --n");
    SourceSpec spec{kind == "bern" ? SourceSpec::Kind::bernoulli : SourceSpec::Kind::bsms, p,
                    in.n, in.source_seed};
    if (kind != "bern" && kind != "bsms")
      throw CLI::ValidationError("--source", "unknown source kind " + kind);
    out.data = generate(spec);
    return out;
  }
  throw CLI::ValidationError("input", "one of --input, --pbm, --source is required");
}

int default_order(std::size_t n, int alphabet) {
  const double k = std::floor(0.5 * std::log(static_cast<double>(n)) /
                              std::log(static_cast<double>(alphabet))) - 1.0;
  return std::max(1, static_cast<int>(k));
}

std::vector<std::pair<int, int>> parse_shape_cells(const std::string& text) {
  std::vector<std::pair<int, int>> cells;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    if (comma == std::string::npos)
      throw CLI::ValidationError("--context-shape", "expected dr,dc pairs separated by ';'");
    cells.emplace_back(std::stoi(item.substr(0, comma)), std::stoi(item.substr(comma + 1)));
  }
  if (cells.empty()) throw CLI::ValidationError("--context-shape", "no offsets given");
  return cells;
}

ContextShape make_shape(const LoadedInput& input, const ModelOptions& model) {
  if (input.raster) {
    const auto cells = model.context_shape.empty() ? default_raster_context()
                                                   : parse_shape_cells(model.context_shape);
    return ContextShape::raster(std::span<const std::pair<int, int>>(cells),
                                static_cast<std::int64_t>(input.width));
  }
  const int k = model.k >= 0 ? model.k : default_order(input.data.size(), model.alphabet);
  return ContextShape::previous(k);
}

Schedule make_schedule(const AnnealOptions& a, std::size_t n, const EnergySpec& spec) {
  const std::uint64_t sweep = a.sweep ? a.sweep : n;
  if (a.schedule == "geometric") return Schedule::geometric(a.beta0, a.gamma, sweep);
  double t0 = a.t0;
  if (t0 <= 0.0) {
    t0 = 1.5 * static_cast<double>(n) *
         delta_bound(n, spec.shape.order(), spec.alpha, spec.dist.recon_alphabet(),
                     spec.dist.max_entry());
  }
  return Schedule::logarithmic(t0, sweep);
}

std::uint64_t iteration_count(const AnnealOptions& a, std::size_t n) {
  return a.iters ? a.iters : static_cast<std::uint64_t>(a.r_mult * static_cast<double>(n));
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> alphas;
  if (text.find(':') != std::string::npos) {
    // start:step:stop range, step may be negative
    double start, step, stop;
    char c1, c2;
    std::istringstream ss(text);
    if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':')
      throw CLI::ValidationError("--alphas", "expected start:step:stop");
    if (step == 0.0) throw CLI::ValidationError("--alphas", "zero step");
    for (double a = start; step > 0 ? a <= stop + 1e-12 : a >= stop - 1e-12; a += step)
      alphas.push_back(a);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) alphas.push_back(std::stod(item));
  }
  if (alphas.empty()) throw CLI::ValidationError("--alphas", "empty list");
  return alphas;
}

void write_sequence_output(const std::string& path, const Sequence& data, bool raster,
                           std::size_t width, std::size_t height) {
  if (raster) {
    Image2D img;
    img.width = width;
    img.height = height;
    img.pixels = data;
    write_pbm_file(path, img);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
}

struct RateReport {
  double hk;
  double dist;
  double lz_rate;
  double le_rate;
};

RateReport rate_report(const Sequence& x, const Sequence& y, const EnergySpec& spec) {
  CountMatrix cm(y, spec.dist.recon_alphabet(), spec.shape, spec.mode);
  RateReport r{};
  r.hk = cm.conditional_entropy();
  r.dist = distortion(x, y, spec.dist);
  r.lz_rate = static_cast<double>(lz78_length(y, spec.dist.recon_alphabet())) /
              static_cast<double>(y.size());
  r.le_rate = enumerative_length(cm) / static_cast<double>(y.size());
  return r;
}

// ---------------------------------------------------------------- compress

int run_compress(const InputOptions& in, const ModelOptions& model, const AnnealOptions& aopt,
                 bool sliding, int kf, const std::string& out_path, long png_size) {
  const LoadedInput input = load_input(in, model.alphabet);
  const auto& x = input.data;
  const ContextShape shape = make_shape(input, model);
  const auto dist = DistortionMatrix::hamming(model.alphabet);

  Sequence y;
  if (sliding) {
    const std::size_t table = SBCode::table_size_for(kf, model.alphabet);
    Schedule schedule = [&] {
      const std::uint64_t sweep = aopt.sweep ? aopt.sweep : table;
      if (aopt.schedule == "geometric")
        return Schedule::geometric(aopt.beta0, aopt.gamma, sweep);
      double t0 = aopt.t0;
      if (t0 <= 0.0) {
        const LabelIndex index(label_sequence(x, kf, model.alphabet), table);
        t0 = 1.5 * static_cast<double>(table) *
             sb_delta_bound(x.size(), shape.order(), aopt.alpha, model.alphabet,
                            dist.max_entry(), index.largest_class());
      }
      return Schedule::logarithmic(t0, sweep);
    }();
    SBAnnealerConfig cfg{kf,     shape,
                         aopt.alpha, dist,
                         schedule,   iteration_count(aopt, table),
                         aopt.seed};
    y = sb_anneal(x, cfg).output;
  } else {
    EnergySpec spec(aopt.alpha, shape, dist, Boundary::linear);
    AnnealerConfig cfg{spec, make_schedule(aopt, x.size(), spec), iteration_count(aopt, x.size()),
                       aopt.seed};
    y = anneal(x, cfg).output;
  }

  const EnergySpec report_spec(aopt.alpha, shape, dist,
                               sliding ? Boundary::cyclic : Boundary::linear);
  const RateReport rep = rate_report(x, y, report_spec);

  ArchiveHeader header;
  header.alphabet = static_cast<std::uint8_t>(model.alphabet);
  header.raster = input.raster;
  header.context_order = static_cast<std::uint32_t>(shape.order());
  header.n = x.size();
  header.width = static_cast<std::uint32_t>(input.width);
  header.height = static_cast<std::uint32_t>(input.height);
  const Bitstream payload = lz78_encode(y, model.alphabet);
  std::size_t archive_bytes = 0;
  if (!out_path.empty()) {
    write_archive_file(out_path, header, payload);
    std::ifstream f(out_path, std::ios::binary | std::ios::ate);
    archive_bytes = static_cast<std::size_t>(f.tellg());
  }

  std::printf("n=%zu k=%zu alpha=%.6g Hk_bits=%.6f distortion=%.6f "
              "lz_bits_per_symbol=%.6f le_bits_per_symbol=%.6f archive_bytes=%zu\n",
              x.size(), shape.order(), aopt.alpha, rep.hk, rep.dist, rep.lz_rate, rep.le_rate,
              archive_bytes);
  if (png_size > 0 && archive_bytes > 0) {
    std::printf("external_png_bytes=%ld archive_over_png=%.4f\n", png_size,
                static_cast<double>(archive_bytes) / static_cast<double>(png_size));
  }
  return 0;
}

int run_decompress(const std::string& in_path, const std::string& out_path) {
  const auto [header, payload] = read_archive_file(in_path);
  const Sequence y = lz78_decode(payload, header.alphabet);
  if (y.size() != header.n)
    throw std::runtime_error("archive: decoded length disagrees with the header");
  write_sequence_output(out_path, y, header.raster, header.width, header.height);
  std::printf("n=%llu alphabet=%d raster=%d\n", static_cast<unsigned long long>(header.n),
              int{header.alphabet}, header.raster ? 1 : 0);
  return 0;
}

// ----------------------------------------------------------------- denoise

int run_denoise(const InputOptions& in, const ModelOptions& model, const AnnealOptions& aopt,
                double channel_delta, const std::string& noise_pmf, int window_m,
                std::size_t prefix, double tol, double alpha_override,
                const std::string& clean_path, std::uint64_t channel_seed,
                const std::string& out_path) {
  const LoadedInput input = load_input(in, model.alphabet);

  Sequence clean;
  Sequence z = input.data;
  const bool synthetic = !in.source.empty();
  if (synthetic) {
    clean = input.data;
    z = bsc(clean, channel_delta, channel_seed);
  } else if (!clean_path.empty()) {
    if (!input.raster) {
      InputOptions ref;
      ref.input_path = clean_path;
      clean = load_input(ref, model.alphabet).data;
    } else {
      clean = read_pbm_file(clean_path).pixels;
    }
  }

  NoiseModel noise = noise_pmf.empty()
                         ? NoiseModel::bsc(channel_delta)
                         : NoiseModel(model.alphabet, [&] {
                             std::vector<double> pv;
                             std::stringstream ss(noise_pmf);
                             std::string item;
                             while (std::getline(ss, item, ',')) pv.push_back(std::stod(item));
                             return pv;
                           }());

  const ContextShape shape = make_shape(input, model);
  // log schedule with per-iteration sweep matches the reference denoiser runs
  const Schedule schedule = aopt.schedule == "geometric"
                                ? Schedule::geometric(aopt.beta0, aopt.gamma,
                                                       aopt.sweep ? aopt.sweep : z.size())
                                : Schedule::logarithmic(aopt.t0 > 0 ? aopt.t0 : 2.0,
                                                        aopt.sweep ? aopt.sweep : 1);

  DenoiserConfig cfg{noise, shape, schedule, aopt.seed};
  cfg.iteration_multiplier = static_cast<std::uint64_t>(aopt.r_mult);
  cfg.window_m = window_m;
  cfg.loss = DistortionMatrix::hamming(noise.m);
  cfg.slope.prefix = prefix;
  cfg.slope.tol = tol;
  cfg.alpha_override = alpha_override;
  const DenoiseResult result = denoise(z, cfg);

  if (!out_path.empty())
    write_sequence_output(out_path, result.xhat, input.raster, input.width, input.height);

  std::printf("n=%zu alpha=%.6g slope_converged=%d window=%d\n", z.size(), result.alpha,
              result.slope.probes.empty() ? 1 : (result.slope.converged ? 1 : 0),
              2 * window_m + 1);
  if (!clean.empty()) {
    const double ber_in = symbol_error_rate(clean, z);
    const double ber_out = symbol_error_rate(clean, result.xhat);
    std::printf("ber_noisy=%.6f ber_denoised=%.6f\n", ber_in, ber_out);
    if (synthetic && in.source.rfind("bsms:", 0) == 0) {
      const double p = std::stod(in.source.substr(5));
      const double ber_fb = symbol_error_rate(clean, bayes_fb(z, p, channel_delta));
      std::printf("ber_forward_backward=%.6f\n", ber_fb);
    }
  }
  if (input.raster) {
    // published reference points for the standard 252x252 binary image at
    // channel error 0.04: DUDE 0.0081, MCMC coder + de-randomization 0.0128
    std::printf("reference_image_baselines: dude=0.0081 mcmc=0.0128\n");
  }
  return 0;
}

// ------------------------------------------------------------------- trace

int run_trace(const InputOptions& in, const ModelOptions& model, const AnnealOptions& aopt,
              std::uint64_t stride, const std::string& out_path) {
  const LoadedInput input = load_input(in, model.alphabet);
  const auto& x = input.data;
  const ContextShape shape = make_shape(input, model);
  EnergySpec spec(aopt.alpha, shape, DistortionMatrix::hamming(model.alphabet));
  AnnealerConfig cfg{spec, make_schedule(aopt, x.size(), spec), iteration_count(aopt, x.size()),
                     aopt.seed};
  cfg.trace_stride = stride ? stride : x.size();
  const AnnealResult r = anneal(x, cfg);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
  out << "iteration,Hk_bits,distortion,energy\n";
  for (const auto& p : r.trace.points) {
    char line[160];
    std::snprintf(line, sizeof line, "%llu,%.9f,%.9f,%.9f\n",
                  static_cast<unsigned long long>(p.t), p.hk_bits, p.distortion, p.energy);
    out << line;
  }
  std::printf("rows=%zu final_Hk=%.6f final_distortion=%.6f final_energy=%.6f\n",
              r.trace.points.size(), r.hk_bits, r.distortion, r.energy);
  return 0;
}

// ------------------------------------------------------------------- sweep

int run_sweep(const InputOptions& in, const ModelOptions& model, const AnnealOptions& aopt,
              const std::string& alphas_text, unsigned num_seeds, bool warm_start,
              const std::string& out_path) {
  const LoadedInput input = load_input(in, model.alphabet);
  const auto& x = input.data;
  const ContextShape shape = make_shape(input, model);
  const auto dist = DistortionMatrix::hamming(model.alphabet);
  const std::vector<double> alphas = parse_alpha_list(alphas_text);

  struct Row {
    double alpha;
    std::uint64_t seed;
    RateReport rep;
  };
  auto run_chain = [&](std::uint64_t seed) {
    std::vector<Row> rows;
    Sequence warm = x;
    for (double alpha : alphas) {
      EnergySpec spec(alpha, shape, dist);
      AnnealerConfig cfg{spec, make_schedule(aopt, x.size(), spec),
                         iteration_count(aopt, x.size()), seed};
      if (warm_start) cfg.init = &warm;
      AnnealResult r = anneal(x, cfg);
      rows.push_back({alpha, seed, rate_report(x, r.output, spec)});
      if (warm_start) warm = std::move(r.output);
    }
    return rows;
  };

  std::vector<std::future<std::vector<Row>>> jobs;
  for (unsigned s = 0; s < num_seeds; ++s)
    jobs.push_back(std::async(std::launch::async, run_chain, aopt.seed + s));

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
  out << "alpha,seed,distortion,Hk_bits,lz_bits_per_symbol,le_bits_per_symbol\n";
  for (auto& job : jobs) {
    for (const Row& row : job.get()) {
      char line[200];
      std::snprintf(line, sizeof line, "%.6g,%llu,%.9f,%.9f,%.9f,%.9f\n", row.alpha,
                    static_cast<unsigned long long>(row.seed), row.rep.dist, row.rep.hk,
                    row.rep.lz_rate, row.rep.le_rate);
      out << line;
    }
  }
  std::printf("alphas=%zu seeds=%u rows=%zu -> %s\n", alphas.size(), num_seeds,
              alphas.size() * num_seeds, out_path.c_str());
  return 0;
}

// ------------------------------------------------------------------ oracle

int run_oracle(const InputOptions& in, const ModelOptions& model, double alpha) {
  const LoadedInput input = load_input(in, model.alphabet);
  const int k = model.k >= 0 ? model.k : 1;
  const auto spec = EnergySpec::order_k(k, alpha, DistortionMatrix::hamming(model.alphabet));
  const ExhaustiveResult r = exhaustive_search(input.data, spec);
  std::string digits;
  for (Symbol s : r.minimizer) digits += static_cast<char>('0' + s);
  std::printf("minimizer=%s energy=%.9f\n", digits.c_str(), r.min_energy);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal fixed-slope lossy coding and denoising via annealed Gibbs sampling"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a key=value file");

  InputOptions in;
  ModelOptions model;
  AnnealOptions aopt;

  // compress
  auto* compress = app.add_subcommand("compress", "quantize and losslessly pack a sequence");
  add_input_options(compress, in, true);
  add_model_options(compress, model);
  add_anneal_options(compress, aopt);
  bool sliding = false;
  int kf = 2;
  std::string out_path;
  long png_size = 0;
  compress->add_flag("--sb", sliding, "use the sliding-block coder");
  compress->add_option("--kf", kf, "sliding-block half-window");
  compress->add_option("--out", out_path, "archive output path");
  compress->add_option("--png-size", png_size,
                       "externally measured PNG byte size, reported for comparison only");

  // decompress
  auto* decompress = app.add_subcommand("decompress", "decode an archive exactly");
  std::string dec_in, dec_out;
  decompress->add_option("--input", dec_in, "archive path")->required();
  decompress->add_option("--out", dec_out, "output path (raw bytes, or PBM for raster archives)")
      ->required();

  // denoise
  auto* denoise_cmd = app.add_subcommand("denoise", "compression-based universal denoising");
  add_input_options(denoise_cmd, in, true);
  add_model_options(denoise_cmd, model);
  add_anneal_options(denoise_cmd, aopt);
  double channel_delta = 0.1;
  std::string noise_pmf, clean_path, den_out;
  int window_m = 4;
  std::size_t prefix = 10000;
  double tol = 0.05;
  double alpha_override = -1.0;
  std::uint64_t channel_seed = 12345;
  denoise_cmd->add_option("--bsc", channel_delta, "channel error probability");
  denoise_cmd->add_option("--noise-pmf", noise_pmf, "additive noise pmf 'p0,p1,...'");
  denoise_cmd->add_option("--window", window_m, "de-randomization half-window m");
  denoise_cmd->add_option("--prefix", prefix, "slope-search prefix length");
  denoise_cmd->add_option("--tol", tol, "slope-search relative tolerance");
  denoise_cmd->add_option("--fixed-alpha", alpha_override, "skip the slope search");
  denoise_cmd->add_option("--clean", clean_path, "clean reference for BER reporting");
  denoise_cmd->add_option("--channel-seed", channel_seed, "seed for the synthetic channel");
  denoise_cmd->add_option("--out", den_out, "denoised output path");

  // trace
  auto* trace = app.add_subcommand("trace", "per-sweep energy evolution CSV");
  add_input_options(trace, in, true);
  add_model_options(trace, model);
  add_anneal_options(trace, aopt);
  std::uint64_t stride = 0;
  std::string trace_out = "trace.csv";
  trace->add_option("--stride", stride, "sample stride in iterations (default: n)");
  trace->add_option("--out", trace_out, "CSV output path");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "rate-distortion sweep over a slope list");
  add_input_options(sweep, in, true);
  add_model_options(sweep, model);
  add_anneal_options(sweep, aopt);
  std::string alphas_text = "4.0:-0.4:2.0";
  unsigned num_seeds = 1;
  bool no_warm = false;
  std::string sweep_out = "sweep.csv";
  sweep->add_option("--alphas", alphas_text, "slope list: start:step:stop or comma-separated");
  sweep->add_option("--num-seeds", num_seeds, "independent chains, seeds seed..seed+N-1");
  sweep->add_flag("--no-warm-start", no_warm,
                  "restart each slope from the source instead of the previous output");
  sweep->add_option("--out", sweep_out, "CSV output path");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exhaustive minimizer for tiny instances");
  add_input_options(oracle, in, true);
  add_model_options(oracle, model);
  double oracle_alpha = 1.0;
  oracle->add_option("--alpha", oracle_alpha, "slope");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compress->parsed())
      return run_compress(in, model, aopt, sliding, kf, out_path, png_size);
    if (decompress->parsed()) return run_decompress(dec_in, dec_out);
    if (denoise_cmd->parsed())
      return run_denoise(in, model, aopt, channel_delta, noise_pmf, window_m, prefix, tol,
                         alpha_override, clean_path, channel_seed, den_out);
    if (trace->parsed()) return run_trace(in, model, aopt, stride, trace_out);
    if (sweep->parsed())
      return run_sweep(in, model, aopt, alphas_text, num_seeds, !no_warm, sweep_out);
    if (oracle->parsed()) return run_oracle(in, model, oracle_alpha);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
