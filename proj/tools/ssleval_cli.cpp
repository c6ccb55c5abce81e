// tools/ssleval_cli.cpp

// Copyright 2026  ssleval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// ssleval command line front end.

#include <fmt/core.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ssleval/ssleval.hpp"

namespace fs = std::filesystem;
using namespace ssleval;

namespace {


std::string read_text(const fs::path& path) {
  const auto bytes = io::detail::read_file(path);
  return {bytes.begin(), bytes.end()};
}

void write_text(const fs::path& path, const std::string& text) {
  io::detail::write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

// stdout, or the named file when given.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    write_text(out_path, text);
  }
}

std::vector<float> read_logits(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::vector<float> logits;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
      throw FormatError(fmt::format("{}: bad weight '{}'", path.string(), tok));
    logits.push_back(static_cast<float>(v));
  }
  if (logits.empty()) throw FormatError(fmt::format("{}: no weights", path.string()));
  return logits;
}

std::string db(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  const std::string s = fmt::format("{:.3f}", v);
  return s == "-0.000" ? s.substr(1) : s;
}

// ---------------------------------------------------------------------------

struct ResampleArgs {
  std::string input, output;
  int rate = 16000;
  double stopband_db = 80.0;
  double transition = 0.05;
};

int run_resample(const ResampleArgs& a) {
  const AudioBuffer in = io::read_wav(a.input);
  std::optional<FirFilter> filter;
  if (in.sample_rate != a.rate)
    filter = design_kaiser_sinc(in.sample_rate, a.rate, {a.stopband_db, a.transition});
  io::write_wav(resample(in, a.rate, filter), a.output);
  return 0;
}

struct PowersetArgs {
  std::size_t speakers = 3;
  std::string scores, output;
};

std::string subset_text(std::uint64_t mask) {
  std::string s = "{";
  bool first = true;
  for (std::size_t k = 0; k < 64; ++k)
    if (mask >> k & 1u) {
      s += fmt::format("{}{}", first ? "" : ",", k);
      first = false;
    }
  return s + "}";
}

int run_powerset(const PowersetArgs& a) {
  const PowersetSpace space(a.speakers);
  if (a.scores.empty()) {
    std::string out;
    for (std::size_t i = 0; i < space.num_classes(); ++i)
      out += fmt::format("{} {}\n", i, subset_text(space.subset(i)));
    emit(a.output, out);
    return 0;
  }
  const FeatureStack scores = io::read_feature_stack(a.scores);
  std::vector<FeatureMatrix> activity;
  for (std::size_t c = 0; c < scores.n_layers; ++c) {
    const auto decoded = space.decode_frames(layer_matrix(scores, c).values);
    Matrix<float> m(decoded.rows(), decoded.cols(), 0.0f);
    for (std::size_t i = 0; i < decoded.data().size(); ++i) m.data()[i] = decoded.data()[i];
    activity.emplace_back(std::move(m), scores.frame_rate);
  }
  if (a.output.empty() || a.output == "-") {
    std::string out;
    for (std::size_t c = 0; c < activity.size(); ++c)
      for (std::size_t t = 0; t < activity[c].n_frames(); ++t) {
        std::string bits;
        for (float v : activity[c].row(t)) bits += v != 0.0f ? '1' : '0';
        out += fmt::format("{} {} {}\n", c, t, bits);
      }
    emit("", out);
  } else {
    io::write_feature_stack(stack_matrices(activity), a.output);
  }
  return 0;
}

struct FuseArgs {
  std::string stack, weights, output;
  std::size_t target_frames = 0;
};

int run_fuse(const FuseArgs& a) {
  const FeatureStack stack = io::read_feature_stack(a.stack);
  const std::vector<float> logits =
      a.weights.empty() ? std::vector<float>(stack.n_layers, 0.0f) : read_logits(a.weights);
  const auto alpha = normalize_weights(logits);
  FeatureMatrix fused = weighted_sum(stack, alpha);
  if (a.target_frames > 0) fused = align_frames(fused, a.target_frames);
  io::write_feature_stack(stack_matrices(std::span<const FeatureMatrix>(&fused, 1)), a.output);
  std::string out;
  for (std::size_t i = 0; i < alpha.size(); ++i) out += fmt::format("alpha[{}] {:.9f}\n", i, alpha[i]);
  emit("", out);
  return 0;
}

struct SeparateArgs {
  std::string mixture;
  std::vector<std::string> sources;
  std::string masks, basis;
  std::uint64_t seed = 0;
  std::size_t filters = 128, kernel = 16, stride = 8;
  bool linear = false;
  double eps = tasnet::kOracleMaskEpsilon;
  std::string prefix = "separated_";
  std::string ssl, weights, dump_fused;
};

int run_separate(const SeparateArgs& a) {
  const AudioBuffer mixture = io::read_wav(a.mixture);
  const auto g = a.linear ? tasnet::Nonlinearity::kLinear : tasnet::Nonlinearity::kRelu;
  tasnet::EncoderBasis basis;
  if (!a.basis.empty()) {
    const FeatureStack b = io::read_feature_stack(a.basis);
    if (b.n_layers != 2)
      throw InvalidArgument(fmt::format("{}: basis needs 2 layers (analysis, synthesis), found {}",
                                        a.basis, b.n_layers));
    basis = tasnet::EncoderBasis(layer_matrix(b, 0).values, layer_matrix(b, 1).values, a.stride, g);
  } else {
    basis = tasnet::random_basis(a.filters, a.kernel, a.stride, a.seed, g);
  }

  std::optional<tasnet::MaskSet> masks;
  if (!a.masks.empty()) {
    masks = tasnet::MaskSet::from_stack(io::read_feature_stack(a.masks));
  } else {
    std::vector<AudioBuffer> sources;
    for (const auto& p : a.sources) sources.push_back(io::read_wav(p));
    for (const auto& s : sources)
      if (s.size() != mixture.size())
        throw InvalidArgument("sources and mixture must have equal length");
    masks = tasnet::oracle_masks(sources, basis, a.eps);
  }

  const FeatureMatrix latent = tasnet::encode(mixture, basis);
  if (masks->frames() != latent.n_frames() || masks->filters() != latent.dim())
    throw InvalidArgument(fmt::format("masks are {} x {} but the mixture latent is {} x {}",
                                      masks->frames(), masks->filters(), latent.n_frames(),
                                      latent.dim()));
  std::string out;
  std::size_t i = 0;
  for (const auto& masked : tasnet::apply_masks(latent, *masks)) {
    const std::string path = fmt::format("{}{}.wav", a.prefix, ++i);
    const AudioBuffer est = tasnet::decode(masked, basis);
    io::write_wav({est.samples, mixture.sample_rate}, path);
    out += fmt::format("{} {} samples\n", path, est.size());
  }

  if (!a.ssl.empty()) {
    const FeatureStack stack = io::read_feature_stack(a.ssl);
    const std::vector<float> logits =
        a.weights.empty() ? std::vector<float>(stack.n_layers, 0.0f) : read_logits(a.weights);
    const FeatureMatrix ssl = align_frames(weighted_sum(stack, normalize_weights(logits)), latent.n_frames());
    const FeatureMatrix joined = concat_features(latent, ssl);
    if (!a.dump_fused.empty()) {
      io::write_feature_stack(stack_matrices(std::span<const FeatureMatrix>(&joined, 1)), a.dump_fused);
      out += fmt::format("{} {} x {}\n", a.dump_fused, joined.n_frames(), joined.dim());
    }
  }
  emit("", out);
  return 0;
}

struct DiarizeArgs {
  std::string scores, activity, features, embeddings, output, uri;
  std::size_t speakers = 3;
  diar::DiarizationConfig config;
  std::optional<double> duration;
};

int run_diarize(const DiarizeArgs& a) {
  const FeatureStack in = io::read_feature_stack(a.scores.empty() ? a.activity : a.scores);
  std::vector<Matrix<std::uint8_t>> acts;
  if (!a.scores.empty()) {
    const PowersetSpace space(a.speakers);
    if (in.dim != space.num_classes())
      throw InvalidArgument(fmt::format("scores have {} classes, {} speakers need {}", in.dim,
                                        a.speakers, space.num_classes()));
    for (std::size_t c = 0; c < in.n_layers; ++c)
      acts.push_back(diar::activity_from_scores(space, layer_matrix(in, c).values));
  } else {
    for (std::size_t c = 0; c < in.n_layers; ++c) {
      Matrix<std::uint8_t> m(in.n_frames, in.dim, 0);
      for (std::size_t i = 0; i < m.data().size(); ++i)
        m.data()[i] = in.data[c * in.n_frames * in.dim + i] != 0.0f;
      acts.push_back(std::move(m));
    }
  }

  double total = 0.0;
  if (a.duration) {
    total = *a.duration;
  } else if (in.n_layers == 1) {
    total = static_cast<double>(in.n_frames) / in.frame_rate;
  } else {
    throw InvalidArgument("--duration is required when there is more than one chunk");
  }
  // Short trailing chunks are stored zero-padded; drop the padding.
  const auto windows = diar::slide_chunks(total, a.config.window, a.config.hop);
  std::vector<std::size_t> keep(acts.size(), in.n_frames);
  if (windows.size() == acts.size())
    for (std::size_t c = 0; c < acts.size(); ++c) {
      const auto n = static_cast<std::size_t>(std::llround(windows[c].duration * in.frame_rate));
      if (n > in.n_frames)
        throw InvalidArgument(fmt::format("chunk {} spans {} frames but only {} are stored", c, n, in.n_frames));
      keep[c] = n;
      Matrix<std::uint8_t> trimmed(n, acts[c].cols(), 0);
      std::copy_n(acts[c].data().begin(), n * acts[c].cols(), trimmed.data().begin());
      acts[c] = std::move(trimmed);
    }
  const auto chunks = diar::place_chunks(std::move(acts), in.frame_rate, total, a.config);
  const std::string uri = a.uri.empty() ? fs::path(a.scores.empty() ? a.activity : a.scores).stem().string() : a.uri;

  Annotation result;
  if (!a.embeddings.empty()) {
    result = diar::diarize_file(chunks, diar::TableEmbeddings::parse(read_text(a.embeddings)), a.config,
                                total, uri);
  } else {
    const FeatureStack feats = io::read_feature_stack(a.features);
    if (feats.n_layers != chunks.size())
      throw InvalidArgument(fmt::format("{} feature layers for {} chunks", feats.n_layers, chunks.size()));
    std::vector<FeatureMatrix> per_chunk;
    for (std::size_t c = 0; c < chunks.size(); ++c) {
      FeatureMatrix m = layer_matrix(feats, c);
      if (m.n_frames() < keep[c])
        throw InvalidArgument(fmt::format("chunk {} has {} feature frames, needs {}", c, m.n_frames(), keep[c]));
      Matrix<float> rows(keep[c], m.dim(), 0.0f);
      std::copy_n(m.values.data().begin(), keep[c] * m.dim(), rows.data().begin());
      per_chunk.emplace_back(std::move(rows), m.frame_rate);
    }
    result = diar::diarize_file(chunks, std::move(per_chunk), a.config, total, uri);
  }
  emit(a.output, io::emit_rttm(result));
  return 0;
}

struct ScoreDerArgs {
  std::string ref, hyp, uem;
  double collar = 0.0;
  bool per_file = false, aggregate = false;
  std::string format = "text";
  unsigned jobs = 1;
};

std::string der_row(const std::string& name, const der::DerReport& r, bool csv) {
  if (csv)
    return fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", name, r.der_pct,
                       r.fa_pct, r.md_pct, r.sc_pct, r.false_alarm, r.missed, r.confusion,
                       r.total_speech);
  return fmt::format("{} DER {:.3f}% FA {:.3f}% MD {:.3f}% SC {:.3f}% speech {:.3f}s\n", name, r.der_pct,
                     r.fa_pct, r.md_pct, r.sc_pct, r.total_speech);
}

int run_score_der(const ScoreDerArgs& a) {
  const auto refs = io::read_rttm(a.ref);
  const auto hyps = io::read_rttm(a.hyp);
  std::optional<std::map<std::string, std::vector<Interval>>> uem;
  if (!a.uem.empty()) uem = io::parse_uem(read_text(a.uem));

  std::vector<std::string> uris;
  for (const auto& [uri, _] : refs) uris.push_back(uri);
  for (const auto& [uri, _] : hyps)
    if (!refs.count(uri)) uris.push_back(uri);
  std::sort(uris.begin(), uris.end());

  auto score_one = [&](const std::string& uri) {
    const auto r = refs.find(uri);
    const auto h = hyps.find(uri);
    const Annotation ref = r != refs.end() ? r->second : Annotation{uri, {}};
    const Annotation hyp = h != hyps.end() ? h->second : Annotation{uri, {}};
    std::optional<std::vector<Interval>> regions;
    if (uem) regions = uem->count(uri) ? uem->at(uri) : std::vector<Interval>{};
    try {
      return der::compute_der(ref, hyp, a.collar, regions);
    } catch (const Error& e) {
      throw InvalidArgument(fmt::format("{}: {}", uri, e.what()));
    }
  };

  // Files are scored independently; rows keep the sorted uri order.
  std::vector<der::DerReport> reports(uris.size());
  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(a.jobs, uris.size()));
  std::vector<std::future<void>> workers;
  for (std::size_t w = 0; w < jobs; ++w)
    workers.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, [&, w] {
      for (std::size_t i = w; i < uris.size(); i += jobs) reports[i] = score_one(uris[i]);
    }));
  for (auto& f : workers) f.get();

  const bool rows = a.per_file || !a.aggregate;
  const bool total = a.aggregate || !a.per_file;
  std::string out;
  if (a.format == "csv")
    out += "uri,der_pct,fa_pct,md_pct,sc_pct,false_alarm,missed,confusion,total_speech\n";
  if (rows)
    for (std::size_t i = 0; i < uris.size(); ++i) out += der_row(uris[i], reports[i], a.format == "csv");
  if (total) out += der_row("TOTAL", der::aggregate(reports), a.format == "csv");
  emit("", out);
  return 0;
}

struct ScoreSdrArgs {
  std::vector<std::string> refs, ests;
  std::string mixture;
  std::string metric = "sdr";
  bool no_pit = false;
  std::optional<double> cap_db;
  std::string format = "text";
};

int run_score_sdr(const ScoreSdrArgs& a) {
  const sep::Metric metric = a.metric == "si-sdr" ? sep::Metric::kSiSdr : sep::Metric::kSdr;
  std::vector<AudioBuffer> refs, ests;
  for (const auto& p : a.refs) refs.push_back(io::read_wav(p));
  for (const auto& p : a.ests) ests.push_back(io::read_wav(p));
  if (refs.size() != ests.size())
    throw InvalidArgument(fmt::format("{} references but {} estimates", refs.size(), ests.size()));

  std::optional<std::vector<std::size_t>> perm;
  if (a.no_pit) {
    perm.emplace(refs.size());
    std::iota(perm->begin(), perm->end(), std::size_t{0});
  }
  std::vector<std::size_t> chosen;
  std::vector<double> est_db, mix_db;
  if (!a.mixture.empty()) {
    const auto r = sep::sdr_improvement(refs, ests, io::read_wav(a.mixture), metric, perm);
    chosen = r.permutation;
    est_db = r.per_source_sdr;
    mix_db = r.mixture_sdr;
  } else {
    chosen = perm ? *perm : sep::pit(refs, ests, metric).permutation;
    for (std::size_t i = 0; i < refs.size(); ++i) est_db.push_back(sep::score(metric, refs[i], ests[chosen[i]]));
  }
  auto cap = [&](double v) { return a.cap_db ? std::min(v, *a.cap_db) : v; };
  std::vector<double> imp_db;
  for (std::size_t i = 0; i < est_db.size(); ++i) {
    est_db[i] = cap(est_db[i]);
    if (!mix_db.empty()) {
      mix_db[i] = cap(mix_db[i]);
      imp_db.push_back(est_db[i] == mix_db[i] ? 0.0 : est_db[i] - mix_db[i]);
    }
  }

  const std::string name = a.metric;
  std::string out;
  if (a.format == "csv") {
    out += "source,estimate,metric,score_db,mixture_db,improvement_db\n";
    for (std::size_t i = 0; i < est_db.size(); ++i)
      out += fmt::format("{},{},{},{},{},{}\n", i, chosen[i], name, db(est_db[i]),
                         mix_db.empty() ? "" : db(mix_db[i]), imp_db.empty() ? "" : db(imp_db[i]));
    out += fmt::format("mean,,{},{},{},{}\n", name, db(sep::mean_db(est_db)),
                       mix_db.empty() ? "" : db(sep::mean_db(mix_db)),
                       imp_db.empty() ? "" : db(sep::mean_db(imp_db)));
  } else {
    out += "permutation";
    for (auto p : chosen) out += fmt::format(" {}", p);
    out += "\n";
    for (std::size_t i = 0; i < est_db.size(); ++i) {
      out += fmt::format("source {} estimate {} {} {}", i, chosen[i], name, db(est_db[i]));
      if (!imp_db.empty()) out += fmt::format(" mixture {} improvement {}", db(mix_db[i]), db(imp_db[i]));
      out += "\n";
    }
    out += fmt::format("mean {} {}", name, db(sep::mean_db(est_db)));
    if (!imp_db.empty()) out += fmt::format(" improvement {}", db(sep::mean_db(imp_db)));
    out += "\n";
  }
  emit("", out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ssleval: diarization and separation evaluation toolkit"};
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "key=value file of default flag values ([subcommand] sections)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto* version = app.add_subcommand("version", "Print the version");

  ResampleArgs rs;
  auto* resample_cmd = app.add_subcommand("resample", "Kaiser-sinc resampling between 8 and 16 kHz");
  resample_cmd->add_option("input", rs.input, "Input WAV (PCM16 mono)")->required();
  resample_cmd->add_option("output", rs.output, "Output WAV")->required();
  resample_cmd->add_option("--rate", rs.rate, "Target sample rate")->check(CLI::IsMember({8000, 16000}));
  resample_cmd->add_option("--stopband-db", rs.stopband_db, "Stopband attenuation (dB)")->check(CLI::PositiveNumber);
  resample_cmd->add_option("--transition", rs.transition, "Transition width as a fraction of the lower Nyquist band")
      ->check(CLI::Range(1e-4, 0.5));

  PowersetArgs ps;
  auto* powerset_cmd = app.add_subcommand(
      "powerset", "List powerset classes, or decode per-chunk scores (SSLF: layers = chunks, dim = classes)");
  powerset_cmd->add_option("--speakers,-k", ps.speakers, "Maximum local speakers K")->check(CLI::Range(1, 64));
  powerset_cmd->add_option("--scores", ps.scores, "Score tensor to decode");
  powerset_cmd->add_option("--out,-o", ps.output, "Output (class list or activity SSLF; '-' = stdout)");

  FuseArgs fu;
  auto* fuse_cmd = app.add_subcommand("fuse", "Softmax-weighted layer average of an SSLF stack");
  fuse_cmd->add_option("stack", fu.stack, "Layer stack (SSLF)")->required();
  fuse_cmd->add_option("--weights,-w", fu.weights, "Logits, one per line (default: uniform)");
  fuse_cmd->add_option("--out,-o", fu.output, "Fused features (SSLF, 1 layer)")->required();
  fuse_cmd->add_option("--target-frames", fu.target_frames, "Replicate frames to this count (0 = keep)");

  SeparateArgs sa;
  auto* separate_cmd = app.add_subcommand(
      "separate-oracle", "Encode a mixture, apply oracle or given masks, decode each source");
  separate_cmd->add_option("mixture", sa.mixture, "Mixture WAV")->required();
  auto* src_opt = separate_cmd->add_option("--sources", sa.sources, "Source WAVs for oracle masks")
                      ;
  auto* mask_opt = separate_cmd->add_option("--masks", sa.masks, "Mask tensor (SSLF: layers = sources, frames, dim = filters)")
                       ;
  src_opt->excludes(mask_opt);
  separate_cmd->add_option("--basis", sa.basis, "Basis (SSLF: 2 layers analysis/synthesis, frames = filters, dim = kernel)")
      ;
  separate_cmd->add_option("--seed", sa.seed, "Seed of the random basis");
  separate_cmd->add_option("--filters,-N", sa.filters, "Random basis filters")->check(CLI::PositiveNumber);
  separate_cmd->add_option("--kernel,-L", sa.kernel, "Random basis kernel length")->check(CLI::PositiveNumber);
  separate_cmd->add_option("--stride", sa.stride, "Encoder stride")->check(CLI::PositiveNumber);
  separate_cmd->add_flag("--linear", sa.linear, "Linear encoder instead of ReLU");
  separate_cmd->add_option("--eps", sa.eps, "Oracle mask epsilon")->check(CLI::NonNegativeNumber);
  separate_cmd->add_option("--prefix", sa.prefix, "Output path prefix; writes <prefix>1.wav, <prefix>2.wav, ...");
  separate_cmd->add_option("--ssl", sa.ssl, "SSL layer stack to fuse and concatenate (SSLF)");
  separate_cmd->add_option("--weights", sa.weights, "Fusion logits for --ssl");
  separate_cmd->add_option("--dump-fused", sa.dump_fused, "Write [latent | ssl] (SSLF)");

  DiarizeArgs da;
  auto* diarize_cmd = app.add_subcommand("diarize", "Sliding-window diarization with AHC, output RTTM");
  auto* scores_opt = diarize_cmd->add_option("--scores", da.scores, "Powerset scores (SSLF: layers = chunks)")
                         ;
  auto* act_opt = diarize_cmd->add_option("--activity", da.activity, "Binary activity (SSLF: layers = chunks, dim = K)")
                      ;
  scores_opt->excludes(act_opt);
  auto* feat_opt = diarize_cmd->add_option("--features", da.features, "Per-chunk features (SSLF: layers = chunks)")
                       ;
  auto* emb_opt = diarize_cmd->add_option("--embeddings", da.embeddings, "Embedding table: 'chunk local v1 .. vD' rows")
                      ;
  feat_opt->excludes(emb_opt);
  diarize_cmd->add_option("--window", da.config.window, "Chunk length (s)")->check(CLI::PositiveNumber);
  diarize_cmd->add_option("--hop", da.config.hop, "Chunk hop (s)")->check(CLI::PositiveNumber);
  diarize_cmd->add_option("--min-seg", da.config.min_segment, "Minimum single-speaker segment (s)")
      ->check(CLI::NonNegativeNumber);
  diarize_cmd->add_option("--threshold", da.config.ahc_threshold, "AHC cosine-distance threshold")
      ->check(CLI::NonNegativeNumber);
  diarize_cmd->add_option("--speakers,-k", da.speakers, "Local speakers K of the score tensor")->check(CLI::Range(1, 64));
  diarize_cmd->add_option("--duration", da.duration, "File duration (s); default: one chunk's length");
  diarize_cmd->add_option("--uri", da.uri, "Recording id (default: input file stem)");
  diarize_cmd->add_option("--out,-o", da.output, "Output RTTM ('-' = stdout)");

  ScoreDerArgs sd;
  auto* der_cmd = app.add_subcommand("score-der", "Diarization error rate with optimal speaker mapping");
  der_cmd->add_option("reference", sd.ref, "Reference RTTM")->required();
  der_cmd->add_option("hypothesis", sd.hyp, "Hypothesis RTTM")->required();
  der_cmd->add_option("--uem", sd.uem, "Evaluation regions: 'uri channel onset offset' rows");
  der_cmd->add_option("--collar", sd.collar, "No-score collar around reference boundaries (s)")
      ->check(CLI::NonNegativeNumber);
  der_cmd->add_flag("--per-file", sd.per_file, "Print one row per recording");
  der_cmd->add_flag("--aggregate", sd.aggregate, "Print the time-weighted TOTAL row");
  der_cmd->add_option("--format", sd.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
  der_cmd->add_option("--jobs,-j", sd.jobs, "Recordings scored in parallel")->check(CLI::Range(1u, 256u));

  ScoreSdrArgs ss;
  auto* sdr_cmd = app.add_subcommand("score-sdr", "SDR / SI-SDR with permutation-invariant matching");
  sdr_cmd->add_option("--refs", ss.refs, "Reference WAVs")->required();
  sdr_cmd->add_option("--ests", ss.ests, "Estimate WAVs")->required();
  sdr_cmd->add_option("--mixture", ss.mixture, "Mixture WAV (enables improvement columns)");
  sdr_cmd->add_option("--metric", ss.metric, "sdr or si-sdr")->check(CLI::IsMember({"sdr", "si-sdr"}));
  sdr_cmd->add_flag("--no-pit", ss.no_pit, "Pair estimate i with reference i");
  sdr_cmd->add_option("--cap-db", ss.cap_db, "Clamp scores from above (default: none)");
  sdr_cmd->add_option("--format", ss.format, "Output format")->check(CLI::IsMember({"text", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (version->parsed()) {
      fmt::print("ssleval {}\n", SSLEVAL_VERSION);
      return 0;
    }
    if (resample_cmd->parsed()) return run_resample(rs);
    if (powerset_cmd->parsed()) return run_powerset(ps);
    if (fuse_cmd->parsed()) return run_fuse(fu);
    if (separate_cmd->parsed()) {
      if (sa.sources.empty() && sa.masks.empty()) {
        fmt::print(stderr, "separate-oracle: one of --sources or --masks is required\n");
        return 2;
      }
      return run_separate(sa);
    }
    if (diarize_cmd->parsed()) {
      if (da.scores.empty() == da.activity.empty() || da.features.empty() == da.embeddings.empty()) {
        fmt::print(stderr, "diarize: need one of --scores/--activity and one of --features/--embeddings\n");
        return 2;
      }
      return run_diarize(da);
    }
    if (der_cmd->parsed()) return run_score_der(sd);
    if (sdr_cmd->parsed()) return run_score_sdr(ss);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 2;
}
