#include "camvid/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "camvid/binary_io.hpp"
#include "camvid/rng.hpp"
#include "camvid/trainer.hpp"

namespace camvid {

namespace {

std::string step_name(const char* prefix, std::int64_t step,
                      const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%06lld%s", prefix,
                static_cast<long long>(step), suffix);
  return buf;
}

void require_files(const std::vector<fs::path>& files, const std::string& what) {
  std::string missing;
  for (const fs::path& f : files) {
    if (!fs::exists(f)) missing += "\n  " + f.string();
  }
  if (!missing.empty()) {
    throw IoError(what + ": missing prerequisite artifacts:" + missing);
  }
}

struct TokenizedClip {
  CameraTokens camera;
  VideoTokenGrid video;
};

std::optional<Direction> direction_of(const ManifestEntry& e) {
  if (e.lambda >= 1 && e.lambda <= 7) return direction_from_lambda(e.lambda);
  return std::nullopt;
}

}  // namespace

fs::path camera_codebook_path(const PipelineConfig& c) {
  return fs::path(c.codec_dir) / "camera.rvq";
}

fs::path video_codebook_path(const PipelineConfig& c) {
  return fs::path(c.codec_dir) / "video.vvq";
}

fs::path checkpoint_path(const PipelineConfig& c, std::int64_t step) {
  return fs::path(c.checkpoint_dir) / step_name("step_", step, ".ckpt");
}

fs::path train_log_path(const PipelineConfig& c) {
  return fs::path(c.checkpoint_dir) / "train.log";
}

std::vector<Snapshot> list_snapshots(const fs::path& dir) {
  std::vector<Snapshot> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  static const std::regex pattern(R"(step_(\d+)\.ckpt)");
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) {
      out.push_back({std::stoll(m[1].str()), entry.path()});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.step < b.step; });
  return out;
}

CameraSignal camera_signal(const PipelineConfig& c, const CameraPath& path,
                           std::optional<Direction> direction) {
  CameraSignal s = path_to_signal(path);
  if (c.camera_signature) {
    if (direction) {
      const auto sig = sinusoid_signature(*direction, c.camera_window);
      s.values.insert(s.values.end(), sig.begin(), sig.end());
    } else {
      s.values.insert(s.values.end(), c.camera_window, 0.0);
    }
  }
  return s;
}

DataSplit parse_split(std::string_view name) {
  if (name == "train") return DataSplit::kTrain;
  if (name == "generic") return DataSplit::kGeneric;
  if (name == "eval") return DataSplit::kEval;
  throw std::invalid_argument("unknown split '" + std::string(name) +
                              "'; expected train, generic or eval");
}

DatasetOptions dataset_options(const PipelineConfig& c, DataSplit split) {
  DatasetOptions o;
  o.frames = c.frames;
  o.height = c.height;
  o.width = c.width;
  o.render.supersample = c.supersample;
  o.cardinal_speed_min = c.speed_min;
  o.cardinal_speed_max = c.speed_max;
  o.random.speed_min = c.random_speed_min;
  o.random.speed_max = c.random_speed_max;
  o.random.rotation_cap = c.random_rotation_cap;
  o.scenes = c.scenes;
  o.threads = c.worker_threads();
  switch (split) {
    case DataSplit::kTrain:
      o.num_clips = c.clips;
      o.mix = parse_direction_mix(c.mix);
      o.seed = derive_seed(c.seed, "data/train");
      break;
    case DataSplit::kGeneric:
      o.num_clips = c.generic_clips;
      o.mix = DirectionMix::kRandom;
      o.seed = derive_seed(c.seed, "data/generic");
      break;
    case DataSplit::kEval:
      o.num_clips = c.eval_clips;
      o.mix = DirectionMix::kUniform7;
      o.seed = derive_seed(c.seed, "data/eval");
      break;
  }
  return o;
}

Manifest cmd_gen_data(const PipelineConfig& c, const GenDataOptions& options,
                      std::ostream& log) {
  DatasetOptions o = dataset_options(c, options.split);
  if (options.clips) o.num_clips = *options.clips;
  if (options.mix) o.mix = parse_direction_mix(*options.mix);
  if (o.num_clips < 1) {
    throw std::invalid_argument("--clips must be >= 1");
  }
  fs::path out;
  if (options.out) {
    out = *options.out;
  } else {
    switch (options.split) {
      case DataSplit::kTrain: out = c.dataset_dir; break;
      case DataSplit::kGeneric: out = c.generic_dir; break;
      case DataSplit::kEval: out = c.eval_dir; break;
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  Manifest m = generate_dataset(o, out);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::map<std::string, int> counts;
  for (const ManifestEntry& e : m.entries) ++counts[e.label];
  log << "wrote " << m.entries.size() << " clips (" << direction_mix_name(o.mix)
      << ") to " << out.string() << " in " << secs << " s\n";
  for (const auto& [label, n] : counts) log << "  " << label << ' ' << n << '\n';
  char digest[32];
  std::snprintf(digest, sizeof(digest), "%016llx",
                static_cast<unsigned long long>(dataset_digest(out)));
  log << "digest " << digest << '\n';
  return m;
}

void cmd_train_camcodec(const PipelineConfig& c, std::ostream& log) {
  const fs::path data = c.dataset_dir;
  require_files({data / "manifest.txt"}, "train camcodec");
  const Manifest m = read_manifest(data);
  std::vector<CameraSignal> signals;
  signals.reserve(m.entries.size());
  for (const ManifestEntry& e : m.entries) {
    const CameraPath path = read_poses(data / e.path / "poses.txt");
    signals.push_back(camera_signal(c, path, direction_of(e)));
  }
  RvqTrainOptions o;
  o.levels = c.camera_levels;
  o.entries = c.camera_entries;
  o.window = c.camera_window;
  o.iterations = c.camera_iterations;
  o.seed = derive_seed(c.seed, "camcodec");
  const RvqCodebook book = train_rvq(signals, o);

  double err = 0.0;
  double norm = 0.0;
  for (const CameraSignal& s : signals) {
    const CameraSignal r = rvq_decode(rvq_encode(s, book), book);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      err += (s.values[i] - r.values[i]) * (s.values[i] - r.values[i]);
      norm += s.values[i] * s.values[i];
    }
  }
  write_codebook(camera_codebook_path(c), book);
  log << "camera codebook " << book.levels << "x" << book.entries << "x"
      << book.dim << " from " << signals.size() << " signals; relative error "
      << (norm > 0 ? std::sqrt(err / norm) : 0.0) << " -> "
      << camera_codebook_path(c).string() << '\n';
}

void cmd_train_vidcodec(const PipelineConfig& c, std::ostream& log) {
  const fs::path data = c.dataset_dir;
  require_files({data / "manifest.txt"}, "train vidcodec");
  const Manifest m = read_manifest(data);
  const std::size_t n =
      std::min<std::size_t>(m.entries.size(), std::size_t(c.video_train_clips));
  std::vector<Frames> clips;
  clips.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    clips.push_back(read_frames(data / m.entries[i].path / "frames.bin"));
  }
  VqTrainOptions o;
  o.vocab = c.video_vocab;
  o.iterations = c.video_iterations;
  o.seed = derive_seed(c.seed, "vidcodec");
  const auto t0 = std::chrono::steady_clock::now();
  const VqVideoCodebook book = train_vq(clips, o);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  double psnr_sum = 0.0;
  const std::size_t probe = std::min<std::size_t>(n, 20);
  for (std::size_t i = 0; i < probe; ++i) {
    psnr_sum += psnr(clips[i], detokenize(tokenize(clips[i], book), book));
  }
  write_video_codebook(video_codebook_path(c), book);
  log << "video codebook V=" << book.vocab << " from " << n << " clips in "
      << secs << " s; round-trip PSNR " << psnr_sum / double(probe)
      << " dB -> " << video_codebook_path(c).string() << '\n';
}

namespace {

std::vector<TokenizedClip> tokenize_dataset(const PipelineConfig& c,
                                            const fs::path& dir,
                                            const RvqCodebook& cam,
                                            const VqVideoCodebook& vid,
                                            bool with_camera) {
  const Manifest m = read_manifest(dir);
  std::vector<TokenizedClip> out(m.entries.size());
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const ManifestEntry& e = m.entries[i];
    out[i].video = tokenize(read_frames(dir / e.path / "frames.bin"), vid);
    if (with_camera) {
      const CameraPath path = read_poses(dir / e.path / "poses.txt");
      out[i].camera = rvq_encode(camera_signal(c, path, direction_of(e)), cam);
      if (out[i].camera.positions != c.camera_token_positions()) {
        throw std::invalid_argument(
            "camera.positions: clip " + e.path + " yields " +
            std::to_string(out[i].camera.positions) +
            " token positions, config expects " +
            std::to_string(c.camera_token_positions()));
      }
    }
  }
  return out;
}

// Log lines "step loss lr wallclock_ms" keyed by step.
std::map<std::int64_t, double> read_train_log(const fs::path& file) {
  std::map<std::int64_t, double> out;
  std::ifstream in(file);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long step = 0;
    double loss = 0.0;
    if (ls >> step >> loss) out[step] = loss;
  }
  return out;
}

}  // namespace

void cmd_train_model(const PipelineConfig& c, const TrainModelOptions& options,
                     std::ostream& log) {
  std::vector<fs::path> needed = {camera_codebook_path(c),
                                  video_codebook_path(c)};
  if (c.mix_ratio > 0.0) needed.push_back(fs::path(c.dataset_dir) / "manifest.txt");
  if (c.mix_ratio < 1.0) needed.push_back(fs::path(c.generic_dir) / "manifest.txt");
  require_files(needed, "train model");

  const RvqCodebook cam = read_codebook(camera_codebook_path(c));
  const VqVideoCodebook vid = read_video_codebook(video_codebook_path(c));
  if (cam.entries != c.camera_entries || cam.levels != c.camera_levels ||
      vid.vocab != c.video_vocab) {
    throw IoError("codebooks do not match camera.levels/camera.entries/"
                  "video.vocab; retrain the codecs");
  }
  const Vocabulary vocab = c.vocabulary();

  std::vector<TokenSequence> camera_seqs;
  std::vector<TokenSequence> generic_seqs;
  if (c.mix_ratio > 0.0) {
    for (const TokenizedClip& t :
         tokenize_dataset(c, c.dataset_dir, cam, vid, true)) {
      camera_seqs.push_back(build_sequence(t.camera, t.video, vocab));
    }
  }
  if (c.mix_ratio < 1.0) {
    for (const TokenizedClip& t :
         tokenize_dataset(c, c.generic_dir, cam, vid, false)) {
      generic_seqs.push_back(build_generic_sequence(t.video, vocab));
    }
  }
  log << "sequences: " << camera_seqs.size() << " camera, "
      << generic_seqs.size() << " generic; mix_ratio " << c.mix_ratio << '\n';

  const ModelConfig mc = c.model_config();
  fs::create_directories(c.checkpoint_dir);
  Transformer<float> model(mc);
  AdamOptions ao;
  ao.lr = c.lr;
  ao.warmup = c.warmup;
  ao.clip_norm = c.clip_norm;
  Trainer<float> trainer(model, ao);
  const KeyValues run_config = c.to_key_values();

  const auto snapshots = list_snapshots(c.checkpoint_dir);
  if (options.resume && !snapshots.empty()) {
    Checkpoint ck = read_checkpoint(snapshots.back().path);
    const ModelConfig& got = ck.model.config();
    if (got.vocab != mc.vocab || got.context != mc.context ||
        got.width != mc.width || got.layers != mc.layers ||
        got.heads != mc.heads || got.ff != mc.ff) {
      throw IoError(snapshots.back().path.string() +
                    ": model shape differs from the config");
    }
    model.params() = ck.model.params();
    trainer.state() = ck.adam;
    if (trainer.state().m.empty()) {
      trainer.state().m.assign(model.params().size(), 0.0f);
      trainer.state().v.assign(model.params().size(), 0.0f);
    }
    log << "resuming from " << snapshots.back().path.string() << " (step "
        << ck.adam.step << ")\n";
  } else {
    for (const Snapshot& s : snapshots) fs::remove(s.path);
    fs::remove(train_log_path(c));
    write_checkpoint(checkpoint_path(c, 0), model, trainer.state(), run_config);
  }

  // Drop log lines past the resume point so the log matches the snapshots.
  std::int64_t start = trainer.state().step;
  {
    std::string kept;
    std::ifstream in(train_log_path(c));
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      long long s = -1;
      if ((ls >> s) && s < start) kept += line + '\n';
    }
    write_file_atomic(train_log_path(c), kept);
  }
  std::ofstream train_log(train_log_path(c), std::ios::app);
  if (!train_log) throw IoError("cannot open " + train_log_path(c).string());

  const std::uint64_t batch_seed = derive_seed(c.seed, "batches");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<const TokenSequence*> batch(c.batch);
  double window_loss = 0.0;
  int window_count = 0;
  for (std::int64_t step = start; step < c.steps; ++step) {
    const auto refs = mix_batch(int(camera_seqs.size()), int(generic_seqs.size()),
                                c.mix_ratio, c.batch, batch_seed, step);
    for (std::size_t i = 0; i < refs.size(); ++i) {
      batch[i] = refs[i].camera ? &camera_seqs[refs[i].index]
                                : &generic_seqs[refs[i].index];
    }
    const StepResult r = trainer.step(batch);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    char line[128];
    std::snprintf(line, sizeof(line), "%lld %.6f %.6g %.0f\n",
                  static_cast<long long>(step), r.loss, r.lr, ms);
    train_log << line << std::flush;
    window_loss += r.loss;
    ++window_count;
    const std::int64_t done = step + 1;
    if (done % c.snapshot_every == 0 || done == c.steps) {
      write_checkpoint(checkpoint_path(c, done), model, trainer.state(),
                       run_config);
      log << "step " << done << " loss " << window_loss / window_count
          << " (" << ms / 1000.0 << " s)\n";
      window_loss = 0.0;
      window_count = 0;
    }
  }
}

ClipGenerator::ClipGenerator(const PipelineConfig& c, const fs::path& ckpt)
    : config_(c),
      camera_book_((require_files({camera_codebook_path(c),
                                   video_codebook_path(c), ckpt},
                                  "generate"),
                    read_codebook(camera_codebook_path(c)))),
      video_book_(read_video_codebook(video_codebook_path(c))),
      checkpoint_(read_checkpoint(ckpt)) {
  if (checkpoint_.model.config().vocab != c.vocabulary().size()) {
    throw IoError(ckpt.string() + ": model vocabulary " +
                  std::to_string(checkpoint_.model.config().vocab) +
                  " does not match the config (" +
                  std::to_string(c.vocabulary().size()) + ")");
  }
}

ClipGenerator::Result ClipGenerator::generate(
    const Image& first_frame, const CameraPath& path,
    std::optional<Direction> direction, std::uint64_t sample_seed) const {
  if (first_frame.height != config_.height ||
      first_frame.width != config_.width) {
    throw std::invalid_argument(
        "first frame is " + std::to_string(first_frame.height) + "x" +
        std::to_string(first_frame.width) + ", config expects " +
        std::to_string(config_.height) + "x" + std::to_string(config_.width));
  }
  Result r;
  r.camera = rvq_encode(camera_signal(config_, path, direction), camera_book_);
  const std::vector<int> first = tokenize_first_frame(first_frame, video_book_);
  SampleOptions so;
  so.temperature = config_.temperature;
  so.seed = sample_seed;
  r.grid = sample_video(checkpoint_.model, r.camera, first,
                        config_.video_grid(), config_.vocabulary(), so);
  r.frames = detokenize(r.grid, video_book_);
  return r;
}

ClipGenerator::Result cmd_generate(const PipelineConfig& c,
                                   const GenerateOptions& options,
                                   std::ostream& log) {
  fs::path ckpt;
  if (options.checkpoint) {
    ckpt = *options.checkpoint;
  } else {
    const auto snaps = list_snapshots(c.checkpoint_dir);
    if (snaps.empty()) {
      throw IoError("generate: no checkpoints in " + c.checkpoint_dir);
    }
    ckpt = snaps.back().path;
  }
  require_files({options.image}, "generate");
  const Frames input = read_frames(options.image);
  if (input.size() != 1) {
    throw std::invalid_argument(options.image.string() +
                                ": expected a single frame, found " +
                                std::to_string(input.size()));
  }
  const double speed =
      options.speed.value_or(0.5 * (c.speed_min + c.speed_max));
  if (!(speed >= 0.0)) throw std::invalid_argument("--speed must be >= 0");
  const CameraPath path =
      cardinal_path(CameraPose(), options.direction, c.frames, speed);

  const ClipGenerator gen(c, ckpt);
  ClipGenerator::Result r = gen.generate(input[0], path, options.direction,
                                         derive_seed(c.seed, "generate"));
  fs::create_directories(options.out);
  write_frames(options.out / "frames.bin", r.frames);
  write_poses(options.out / "poses.txt", path,
              "requested path from the identity pose");
  write_camera_tokens(options.out / "camera.ctk", r.camera);
  write_video_tokens(options.out / "video.vtk", r.grid);
  log << "generated " << r.frames.size() << " frames ("
      << direction_name(options.direction) << ", speed " << speed << ") with "
      << ckpt.filename().string() << " -> " << options.out.string() << '\n';
  return r;
}

std::vector<EvalClip> load_eval_clips(const PipelineConfig& c,
                                      const fs::path& dataset, int count) {
  require_files({dataset / "manifest.txt"}, "eval");
  const Manifest m = read_manifest(dataset);
  if (m.entries.empty()) {
    throw std::invalid_argument(dataset.string() + ": manifest is empty");
  }
  const int n = std::min<int>(count, static_cast<int>(m.entries.size()));
  std::vector<EvalClip> clips;
  clips.reserve(n);
  for (int i = 0; i < n; ++i) {
    const ManifestEntry& e = m.entries[i];
    const auto d = direction_of(e);
    if (!d) {
      throw std::invalid_argument(dataset.string() + ": clip " + e.path +
                                  " has no cardinal direction label");
    }
    ClipRecord rec = load_clip(dataset, e);
    clips.push_back(make_eval_clip(e.path, *d, std::move(rec.clip.frames),
                                   std::move(rec.clip.path), c.flow_params()));
  }
  return clips;
}

SwapReport left_right_swap(const ClipGenerator& generator,
                           std::span<const EvalClip> clips, int pairs,
                           std::uint64_t sample_seed) {
  const PipelineConfig& c = generator.config();
  const double speed = 0.5 * (c.speed_min + c.speed_max);
  const FlowParams flow = c.flow_params();
  const auto horizontal = [&](const Image& first, Direction d,
                              std::uint64_t seed) {
    const CameraPath path = cardinal_path(CameraPose(), d, c.frames, speed);
    return summarize_flow(generator.generate(first, path, d, seed).frames, flow)
        .aggregate.x();
  };
  SwapReport r;
  const int n = std::min<int>(pairs, static_cast<int>(clips.size()));
  r.pairs.resize(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t seed = derive_seed(sample_seed, std::uint64_t(i));
    const Image& first = clips[i].truth.front();
    SwapPair& p = r.pairs[i];
    p.clip_id = clips[i].id;
    p.left_x = horizontal(first, Direction::kLeft, seed);
    p.right_x = horizontal(first, Direction::kRight, seed);
    p.flipped = p.left_x * p.right_x < 0.0;
  }
  int flipped = 0;
  for (const SwapPair& p : r.pairs) flipped += p.flipped;
  r.flip_rate = n > 0 ? double(flipped) / n : 0.0;
  return r;
}

std::string format_swap(const SwapReport& report) {
  std::ostringstream os;
  os << "# clip_id left_x right_x flipped\n";
  for (const SwapPair& p : report.pairs) {
    os << p.clip_id << ' ' << p.left_x << ' ' << p.right_x << ' '
       << (p.flipped ? 1 : 0) << '\n';
  }
  os << "\n[swap]\npairs=" << report.pairs.size()
     << "\nflip_rate=" << report.flip_rate << '\n';
  return os.str();
}

EvalOutcome cmd_eval(const PipelineConfig& c, const EvalOptions& options,
                     std::ostream& log) {
  std::vector<fs::path> ckpts = options.checkpoints;
  if (ckpts.empty()) {
    for (const Snapshot& s : list_snapshots(c.checkpoint_dir)) {
      ckpts.push_back(s.path);
    }
    if (ckpts.empty()) {
      throw IoError("eval: no checkpoints in " + c.checkpoint_dir);
    }
  }
  require_files(ckpts, "eval");
  const int num = options.num_videos.value_or(c.num_videos);
  if (num < 1) throw std::invalid_argument("--num-videos must be >= 1");
  const fs::path dataset = options.dataset.value_or(fs::path(c.eval_dir));
  const std::vector<EvalClip> clips = load_eval_clips(c, dataset, num);
  if (static_cast<int>(clips.size()) < num) {
    log << "note: " << dataset.string() << " holds only " << clips.size()
        << " clips\n";
  }

  EvalSettings settings;
  settings.flow = c.flow_params();
  settings.classifier = c.classifier();
  settings.threads = c.worker_threads();
  const auto losses = read_train_log(train_log_path(c));
  const std::uint64_t sample_root = derive_seed(c.seed, "eval-sample");

  EvalOutcome out;
  std::map<std::int64_t, fs::path> ckpt_of_step;
  fs::create_directories(c.report_dir);
  for (const fs::path& ckpt : ckpts) {
    const ClipGenerator gen(c, ckpt);
    const EvalReport report = eval_run(
        clips,
        [&](const EvalClip& clip, int index) {
          return gen
              .generate(clip.truth.front(), clip.path, clip.direction,
                        derive_seed(sample_root, std::uint64_t(index)))
              .frames;
        },
        settings);
    SeriesPoint p;
    p.step = gen.step();
    ckpt_of_step[p.step] = ckpt;
    const auto it = losses.find(p.step - 1);
    p.train_loss = it != losses.end() ? it->second
                                      : std::numeric_limits<double>::quiet_NaN();
    p.mean_mse = report.mean_mse;
    p.dir_accuracy = report.dir_accuracy;
    write_file_atomic(fs::path(c.report_dir) /
                          step_name("eval_step_", p.step, ".txt"),
                      format_report(report));
    log << ckpt.filename().string() << ": mean_mse " << report.mean_mse
        << " dir_accuracy " << report.dir_accuracy << '\n';
    out.series.push_back(p);
    out.reports.push_back(report);
  }
  std::sort(out.series.begin(), out.series.end(),
            [](const SeriesPoint& a, const SeriesPoint& b) {
              return a.step < b.step;
            });
  write_file_atomic(fs::path(c.report_dir) / "series.txt",
                    format_series(out.series));
  const SeriesSummary s = summarize_series(out.series);
  log << "best step " << out.series[s.best].step << " mean_mse "
      << out.series[s.best].mean_mse << " (" << s.best_to_first
      << " of the first checkpoint)\n";

  const ClipGenerator best_gen(c, ckpt_of_step.at(out.series[s.best].step));
  out.swap = left_right_swap(best_gen, clips, c.swap_pairs,
                             derive_seed(c.seed, "eval-swap"));
  write_file_atomic(fs::path(c.report_dir) / "swap.txt", format_swap(out.swap));
  log << "left/right swap flips the horizontal flow in "
      << out.swap.flip_rate * 100.0 << "% of " << out.swap.pairs.size()
      << " pairs\n";
  return out;
}

std::string cmd_layout_check(const PipelineConfig& c) {
  const SequenceLayout l = c.layout();
  const VideoGridShape g = c.video_grid();
  std::ostringstream out;
  out << "preset=" << c.preset << '\n'
      << "camera_positions=" << c.camera_token_positions() << '\n'
      << "camera_levels=" << c.camera_levels << '\n'
      << "camera=" << l.camera << '\n'
      << "video_grid=" << g.t << 'x' << g.h << 'x' << g.w << '\n'
      << "video=" << l.video_tokens() << '\n'
      << "first_frame=" << l.first << '\n'
      << "generated=" << l.rest << '\n'
      << "sequence=" << l.length() << '\n'
      << "vocab=" << c.vocabulary().size() << '\n';
  return out.str();
}

}  // namespace camvid
