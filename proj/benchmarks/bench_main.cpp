// Hot paths of the desk preset: rendering, flow, the two tokenizers and the
// transformer.

#include <benchmark/benchmark.h>

#include "camvid/camcodec.hpp"
#include "camvid/config.hpp"
#include "camvid/flow.hpp"
#include "camvid/rng.hpp"
#include "camvid/scene.hpp"
#include "camvid/trainer.hpp"
#include "camvid/vidcodec.hpp"

namespace camvid {
namespace {

const PipelineConfig& desk() {
  static const PipelineConfig c = preset_config("desk");
  return c;
}

CameraClip desk_clip() {
  const PipelineConfig& c = desk();
  const Scene scene = build_scene(3);
  const CameraPath path = cardinal_path(canonical_start_pose(), Direction::kLeft,
                                        c.frames, 0.1);
  RenderOptions o;
  o.supersample = c.supersample;
  return render_clip(scene, path, c.height, c.width, o);
}

void BM_RenderFrame(benchmark::State& state) {
  const Scene scene = build_scene(3);
  RenderOptions o;
  o.supersample = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        render_frame(scene, canonical_start_pose(), 32, 32, o));
  }
}
BENCHMARK(BM_RenderFrame)->Arg(1)->Arg(2);

void BM_EstimateFlow(benchmark::State& state) {
  const CameraClip clip = desk_clip();
  const FlowParams params = desk().flow_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_flow(clip.frames[0], clip.frames[1], params));
  }
}
BENCHMARK(BM_EstimateFlow);

void BM_SummarizeClipFlow(benchmark::State& state) {
  const CameraClip clip = desk_clip();
  const FlowParams params = desk().flow_params();
  for (auto _ : state) benchmark::DoNotOptimize(summarize_flow(clip.frames, params));
}
BENCHMARK(BM_SummarizeClipFlow)->Unit(benchmark::kMillisecond);

void BM_RvqEncode(benchmark::State& state) {
  const PipelineConfig& c = desk();
  std::vector<CameraSignal> signals;
  for (int i = 0; i < 300; ++i) {
    signals.push_back(path_to_signal(
        random_path(CameraPose(), c.frames, derive_seed(5, i))));
  }
  RvqTrainOptions o;
  o.levels = c.camera_levels;
  o.entries = c.camera_entries;
  o.window = c.camera_window;
  const RvqCodebook book = train_rvq(signals, o);
  for (auto _ : state) benchmark::DoNotOptimize(rvq_encode(signals[7], book));
}
BENCHMARK(BM_RvqEncode);

void BM_VideoTokenize(benchmark::State& state) {
  const CameraClip clip = desk_clip();
  const VqVideoCodebook book = random_video_codebook(desk().video_vocab, 4);
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(clip.frames, book));
}
BENCHMARK(BM_VideoTokenize);

TokenSequence desk_sequence() {
  const PipelineConfig& c = desk();
  Rng rng(6);
  TokenSequence s;
  const int n = c.layout().length();
  for (int i = 0; i < n; ++i) {
    s.ids.push_back(int(rng.below(c.vocabulary().size())));
    s.loss_mask.push_back(i > 0);
  }
  return s;
}

void BM_TransformerForward(benchmark::State& state) {
  const Transformer<float> model(desk().model_config());
  const TokenSequence s = desk_sequence();
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(s.ids));
}
BENCHMARK(BM_TransformerForward)->Unit(benchmark::kMicrosecond);

void BM_TrainerStep(benchmark::State& state) {
  Transformer<float> model(desk().model_config());
  AdamOptions o;
  o.lr = desk().lr;
  Trainer<float> trainer(model, o);
  const TokenSequence s = desk_sequence();
  const std::vector<const TokenSequence*> batch(desk().batch, &s);
  for (auto _ : state) benchmark::DoNotOptimize(trainer.step(batch));
}
BENCHMARK(BM_TrainerStep)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace camvid

BENCHMARK_MAIN();
