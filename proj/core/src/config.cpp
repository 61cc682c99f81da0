#include "camvid/config.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <variant>

#include "camvid/binary_io.hpp"
#include "camvid/dataset.hpp"

namespace camvid {

namespace {

using Member =
    std::variant<int PipelineConfig::*, double PipelineConfig::*,
                 std::uint64_t PipelineConfig::*, bool PipelineConfig::*,
                 std::string PipelineConfig::*>;

struct Field {
  const char* key;
  Member member;
};

using C = PipelineConfig;

// Text order of the config file.
const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"preset", &C::preset},
      {"seed", &C::seed},
      {"deterministic", &C::deterministic},
      {"threads", &C::threads},
      {"frames", &C::frames},
      {"height", &C::height},
      {"width", &C::width},
      {"data.clips", &C::clips},
      {"data.generic_clips", &C::generic_clips},
      {"data.eval_clips", &C::eval_clips},
      {"data.mix", &C::mix},
      {"data.speed_min", &C::speed_min},
      {"data.speed_max", &C::speed_max},
      {"data.random_speed_min", &C::random_speed_min},
      {"data.random_speed_max", &C::random_speed_max},
      {"data.random_rotation_cap", &C::random_rotation_cap},
      {"data.supersample", &C::supersample},
      {"data.scenes", &C::scenes},
      {"camera.levels", &C::camera_levels},
      {"camera.entries", &C::camera_entries},
      {"camera.window", &C::camera_window},
      {"camera.positions", &C::camera_positions},
      {"camera.iterations", &C::camera_iterations},
      {"camera.signature", &C::camera_signature},
      {"video.vocab", &C::video_vocab},
      {"video.iterations", &C::video_iterations},
      {"video.train_clips", &C::video_train_clips},
      {"model.layers", &C::model_layers},
      {"model.heads", &C::model_heads},
      {"model.width", &C::model_width},
      {"model.ff", &C::model_ff},
      {"model.context", &C::model_context},
      {"train.steps", &C::steps},
      {"train.lr", &C::lr},
      {"train.warmup", &C::warmup},
      {"train.batch", &C::batch},
      {"train.clip_norm", &C::clip_norm},
      {"train.mix_ratio", &C::mix_ratio},
      {"train.snapshot_every", &C::snapshot_every},
      {"sample.temperature", &C::temperature},
      {"eval.num_videos", &C::num_videos},
      {"eval.swap_pairs", &C::swap_pairs},
      {"eval.stationary_px", &C::stationary_px},
      {"eval.radial_weight", &C::radial_weight},
      {"flow.levels", &C::flow_levels},
      {"flow.iterations", &C::flow_iterations},
      {"flow.alpha", &C::flow_alpha},
      {"flow.warps", &C::flow_warps},
      {"paths.dataset", &C::dataset_dir},
      {"paths.generic", &C::generic_dir},
      {"paths.eval", &C::eval_dir},
      {"paths.codecs", &C::codec_dir},
      {"paths.checkpoints", &C::checkpoint_dir},
      {"paths.reports", &C::report_dir},
  };
  return table;
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T v{};
  const char* b = text.data();
  const char* e = b + text.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) {
    throw std::invalid_argument(key + ": cannot parse '" + text + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

[[noreturn]] void reject(const std::string& key, const std::string& why) {
  throw std::invalid_argument(key + ": " + why);
}

void require_positive(const std::string& key, int v) {
  if (v < 1) reject(key, "must be positive (got " + std::to_string(v) + ")");
}

}  // namespace

void PipelineConfig::validate() const {
  if (preset != "desk" && preset != "paper") {
    reject("preset", "must be desk or paper");
  }
  if (threads < 0) reject("threads", "must be >= 0");
  if (frames < 1 || frames % 4 != 1) {
    reject("frames", "must satisfy frames = 1 (mod 4), got " +
                         std::to_string(frames));
  }
  if (height < 8 || height % 8 != 0) {
    reject("height", "must be a positive multiple of 8");
  }
  if (width < 8 || width % 8 != 0) {
    reject("width", "must be a positive multiple of 8");
  }
  require_positive("data.clips", clips);
  if (generic_clips < 0) reject("data.generic_clips", "must be >= 0");
  require_positive("data.eval_clips", eval_clips);
  try {
    parse_direction_mix(mix);
  } catch (const std::invalid_argument& e) {
    reject("data.mix", e.what());
  }
  if (!(speed_min >= 0.0) || !(speed_max >= speed_min)) {
    reject("data.speed_min", "need 0 <= data.speed_min <= data.speed_max");
  }
  if (!(random_speed_min >= 0.0) || !(random_speed_max >= random_speed_min)) {
    reject("data.random_speed_min",
           "need 0 <= data.random_speed_min <= data.random_speed_max");
  }
  if (!(random_rotation_cap >= 0.0)) {
    reject("data.random_rotation_cap", "must be >= 0");
  }
  require_positive("data.supersample", supersample);
  if (scenes < 0) reject("data.scenes", "must be >= 0");

  require_positive("camera.levels", camera_levels);
  require_positive("camera.entries", camera_entries);
  if (camera_entries > 65536) {
    reject("camera.entries", "must fit the u16 token file (<= 65536)");
  }
  require_positive("camera.window", camera_window);
  if (camera_positions < 0) reject("camera.positions", "must be >= 0");
  if (camera_positions == 0 && (6 * frames) % camera_window != 0) {
    reject("camera.window", "must divide 6 * frames when camera.positions "
                            "is derived");
  }
  require_positive("camera.iterations", camera_iterations);

  if (video_vocab < 2) reject("video.vocab", "must be >= 2");
  require_positive("video.iterations", video_iterations);
  require_positive("video.train_clips", video_train_clips);

  require_positive("model.layers", model_layers);
  require_positive("model.heads", model_heads);
  require_positive("model.width", model_width);
  if (model_width % model_heads != 0) {
    reject("model.heads", "must divide model.width");
  }
  require_positive("model.ff", model_ff);
  if (model_context < layout().length()) {
    reject("model.context", "must hold the full sequence of " +
                                std::to_string(layout().length()) +
                                " tokens");
  }

  if (steps < 0) reject("train.steps", "must be >= 0");
  if (!(lr >= 0.0)) reject("train.lr", "must be >= 0");
  if (warmup < 0) reject("train.warmup", "must be >= 0");
  require_positive("train.batch", batch);
  if (!(clip_norm >= 0.0)) reject("train.clip_norm", "must be >= 0");
  if (!(mix_ratio >= 0.0 && mix_ratio <= 1.0)) {
    reject("train.mix_ratio", "must lie in [0, 1]");
  }
  require_positive("train.snapshot_every", snapshot_every);

  if (!std::isfinite(temperature)) {
    reject("sample.temperature", "must be finite");
  }
  require_positive("eval.num_videos", num_videos);
  require_positive("eval.swap_pairs", swap_pairs);
  if (!(stationary_px >= 0.0)) reject("eval.stationary_px", "must be >= 0");
  if (!(radial_weight >= 0.0)) reject("eval.radial_weight", "must be >= 0");
  require_positive("flow.levels", flow_levels);
  if (flow_iterations < 0) reject("flow.iterations", "must be >= 0");
  if (!(flow_alpha > 0.0)) reject("flow.alpha", "must be positive");
  require_positive("flow.warps", flow_warps);

  for (const auto& [key, value] :
       {std::pair{"paths.dataset", &dataset_dir},
        std::pair{"paths.generic", &generic_dir},
        std::pair{"paths.eval", &eval_dir},
        std::pair{"paths.codecs", &codec_dir},
        std::pair{"paths.checkpoints", &checkpoint_dir},
        std::pair{"paths.reports", &report_dir}}) {
    if (value->empty()) reject(key, "must not be empty");
  }
}

int PipelineConfig::camera_token_positions() const {
  if (camera_positions > 0) return camera_positions;
  return (CameraSignal::kFrameWidth * frames) / camera_window +
         (camera_signature ? 1 : 0);
}

VideoGridShape PipelineConfig::video_grid() const {
  return video_grid_shape(frames, height, width);
}

SequenceLayout PipelineConfig::layout() const {
  return sequence_layout(camera_token_positions(), camera_levels, video_grid());
}

Vocabulary PipelineConfig::vocabulary() const {
  Vocabulary v;
  v.camera = camera_entries;
  v.video = video_vocab;
  return v;
}

ModelConfig PipelineConfig::model_config() const {
  ModelConfig m;
  m.vocab = vocabulary().size();
  m.context = model_context;
  m.width = model_width;
  m.layers = model_layers;
  m.heads = model_heads;
  m.ff = model_ff;
  m.seed = derive_seed(seed, "model");
  return m;
}

FlowParams PipelineConfig::flow_params() const {
  FlowParams f;
  f.levels = flow_levels;
  f.iterations = flow_iterations;
  f.alpha = flow_alpha;
  f.warps = flow_warps;
  return f;
}

MotionClassifier PipelineConfig::classifier() const {
  MotionClassifier c;
  c.stationary_px_per_transition = stationary_px;
  c.radial_weight = radial_weight;
  return c;
}

int PipelineConfig::worker_threads() const {
  if (deterministic) return 1;
  if (threads > 0) return threads;
  return static_cast<int>(
      std::max(1u, std::min(16u, std::thread::hardware_concurrency())));
}

KeyValues PipelineConfig::to_key_values() const {
  KeyValues kv;
  for (const Field& f : fields()) {
    std::string text = std::visit(
        [&](auto member) -> std::string {
          const auto& v = this->*member;
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string>) {
            return v;
          } else if constexpr (std::is_same_v<T, bool>) {
            return v ? "true" : "false";
          } else if constexpr (std::is_same_v<T, double>) {
            return format_double(v);
          } else {
            return std::to_string(v);
          }
        },
        f.member);
    kv.emplace_back(f.key, std::move(text));
  }
  return kv;
}

PipelineConfig preset_config(std::string_view name) {
  PipelineConfig c;
  if (name == "desk") return c;
  if (name == "paper") {
    // Token bookkeeping of the full-scale setup; far too large to train here.
    c.preset = "paper";
    c.height = 128;
    c.width = 128;
    c.camera_entries = 4096;
    c.camera_positions = 106;
    c.video_vocab = 1 << 18;
    c.model_context = 1712;
    return c;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) +
                              "'; expected desk or paper");
}

void apply_overrides(PipelineConfig& config, const KeyValues& overrides) {
  for (const auto& [key, text] : overrides) {
    const Field* field = nullptr;
    for (const Field& f : fields()) {
      if (key == f.key) field = &f;
    }
    if (!field) throw std::invalid_argument(key + ": unknown config key");
    std::visit(
        [&](auto member) {
          auto& v = config.*member;
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string>) {
            v = text;
          } else if constexpr (std::is_same_v<T, bool>) {
            if (text == "true" || text == "1") {
              v = true;
            } else if (text == "false" || text == "0") {
              v = false;
            } else {
              throw std::invalid_argument(key + ": expected true or false");
            }
          } else {
            v = parse_value<T>(key, text);
          }
        },
        field->member);
  }
}

PipelineConfig load_config(const std::filesystem::path& path,
                           std::string_view fallback_preset) {
  const KeyValues kv = parse_key_values(read_text_file(path), path.string());
  const auto preset = find_value(kv, "preset");
  PipelineConfig c = preset_config(preset ? *preset : fallback_preset);
  apply_overrides(c, kv);
  c.validate();
  return c;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.emplace_back(f.key);
  return keys;
}

std::string format_config(const PipelineConfig& config) {
  return format_key_values(config.to_key_values());
}

}  // namespace camvid
