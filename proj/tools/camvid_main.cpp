// camvid: dataset generation, codec and model training, generation and
// evaluation over one flat key=value config.
//
// Exit codes: 0 success, 1 usage or config error, 2 runtime failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "camvid/binary_io.hpp"
#include "camvid/config.hpp"
#include "camvid/pipeline.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kRuntime = 2;

struct GlobalFlags {
  std::string config_file;
  std::string preset;
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
  std::vector<std::string> overrides;
};

camvid::PipelineConfig build_config(const GlobalFlags& g) {
  camvid::KeyValues file_kv;
  if (!g.config_file.empty()) {
    file_kv = camvid::parse_key_values(camvid::read_text_file(g.config_file),
                                       g.config_file);
  }
  std::string preset = "desk";
  if (auto p = camvid::find_value(file_kv, "preset")) preset = *p;
  if (!g.preset.empty()) preset = g.preset;

  camvid::PipelineConfig c = camvid::preset_config(preset);
  camvid::apply_overrides(c, file_kv);
  c.preset = preset;
  camvid::KeyValues cli_kv;
  for (const std::string& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    }
    cli_kv.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  camvid::apply_overrides(c, cli_kv);
  if (g.seed) c.seed = *g.seed;
  if (g.deterministic) c.deterministic = true;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"camera-conditioned video generation pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  app.add_option("--config", g.config_file, "key=value config file")
      ->check(CLI::ExistingFile);
  app.add_option("--preset", g.preset, "base preset")
      ->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--seed", g.seed, "root seed");
  app.add_flag("--deterministic", g.deterministic,
               "single-threaded, fixed reduction order");
  app.add_option("--set", g.overrides, "override a config key (key=value)");

  // gen-data
  auto* gen_data = app.add_subcommand("gen-data", "render a clip dataset");
  std::string split = "train";
  std::optional<int> clips;
  std::optional<std::string> mix;
  std::optional<std::string> data_out;
  gen_data->add_option("--split", split, "train, generic or eval")
      ->check(CLI::IsMember({"train", "generic", "eval"}));
  gen_data->add_option("--clips", clips, "number of clips");
  gen_data->add_option("--mix", mix, "uniform7 or random")
      ->check(CLI::IsMember({"uniform7", "random"}));
  gen_data->add_option("--out", data_out, "output directory");

  // train
  auto* train = app.add_subcommand("train", "train a codec or the model");
  std::string stage;
  std::optional<double> mix_ratio;
  std::optional<int> steps;
  bool resume = false;
  train->add_option("stage", stage, "camcodec, vidcodec or model")
      ->required()
      ->check(CLI::IsMember({"camcodec", "vidcodec", "model"}));
  train->add_option("--mix-ratio", mix_ratio,
                    "fraction of camera-conditioned examples");
  train->add_option("--steps", steps, "total optimizer steps");
  train->add_flag("--resume", resume, "continue from the latest snapshot");

  // generate
  auto* generate = app.add_subcommand("generate", "generate a clip");
  std::string checkpoint;
  std::string image;
  std::string direction;
  std::optional<double> speed;
  std::string gen_out;
  generate->add_option("--checkpoint", checkpoint,
                       "checkpoint (default: latest snapshot)");
  generate->add_option("--image", image, "first frame (frames.bin, n = 1)")
      ->required();
  generate->add_option("--direction", direction,
                       "left, right, up, down, forward, backward, stationary")
      ->required();
  generate->add_option("--speed", speed, "world units per frame");
  generate->add_option("--out", gen_out, "output directory")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "flow-MSE evaluation");
  std::vector<std::string> eval_ckpts;
  std::optional<std::string> eval_data;
  std::optional<int> num_videos;
  eval->add_option("--checkpoint", eval_ckpts,
                   "checkpoint(s) (default: every snapshot)");
  eval->add_option("--dataset", eval_data, "evaluation dataset directory");
  eval->add_option("--num-videos", num_videos, "clips to generate");

  auto* layout = app.add_subcommand("layout-check", "token arithmetic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    camvid::PipelineConfig c = build_config(g);
    if (train->parsed()) {
      if (mix_ratio) c.mix_ratio = *mix_ratio;
      if (steps) c.steps = *steps;
      c.validate();
    }

    if (gen_data->parsed()) {
      camvid::GenDataOptions o;
      o.split = camvid::parse_split(split);
      o.clips = clips;
      o.mix = mix;
      if (data_out) o.out = *data_out;
      camvid::cmd_gen_data(c, o, std::cout);
    } else if (train->parsed()) {
      if (stage == "camcodec") {
        camvid::cmd_train_camcodec(c, std::cout);
      } else if (stage == "vidcodec") {
        camvid::cmd_train_vidcodec(c, std::cout);
      } else {
        camvid::cmd_train_model(c, {resume}, std::cout);
      }
    } else if (generate->parsed()) {
      camvid::GenerateOptions o;
      if (!checkpoint.empty()) o.checkpoint = checkpoint;
      o.image = image;
      o.direction = camvid::parse_direction(direction);
      o.speed = speed;
      o.out = gen_out;
      camvid::cmd_generate(c, o, std::cout);
    } else if (eval->parsed()) {
      camvid::EvalOptions o;
      for (const std::string& p : eval_ckpts) o.checkpoints.emplace_back(p);
      if (eval_data) o.dataset = *eval_data;
      o.num_videos = num_videos;
      camvid::cmd_eval(c, o, std::cout);
    } else if (layout->parsed()) {
      std::cout << camvid::cmd_layout_check(c);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return 0;
}
