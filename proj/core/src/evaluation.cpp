#include "camvid/evaluation.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace camvid {

EvalClip make_eval_clip(std::string id, Direction direction, Frames truth,
                        CameraPath path, const FlowParams& flow) {
  EvalClip c;
  c.id = std::move(id);
  c.direction = direction;
  c.truth_flow = summarize_flow(truth, flow);
  c.truth = std::move(truth);
  c.path = std::move(path);
  return c;
}

EvalReport eval_run(std::span<const EvalClip> clips,
                    const VideoGenerator& generate,
                    const EvalSettings& settings) {
  if (clips.empty()) throw std::invalid_argument("eval_run: no clips");
  EvalReport report;
  report.rows.resize(clips.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < clips.size(); i = next++) {
      try {
        const EvalClip& clip = clips[i];
        const Frames gen = generate(clip, static_cast<int>(i));
        if (gen.size() != clip.truth.size()) {
          throw std::invalid_argument(
              "eval_run: generated clip for " + clip.id + " has " +
              std::to_string(gen.size()) + " frames, expected " +
              std::to_string(clip.truth.size()));
        }
        const FlowSummary s = summarize_flow(gen, settings.flow);
        EvalRow& row = report.rows[i];
        row.clip_id = clip.id;
        row.direction = clip.direction;
        row.mse = flow_mse(s, clip.truth_flow);
        row.call = settings.classifier.classify(s);
        row.match = row.call.direction == clip.direction;
        row.aggregate = s.aggregate;
        row.aggregate_radial = s.aggregate_radial;
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = clips.size();
      }
    }
  };
  const int threads = std::max(1, settings.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::array<int, 7> hits{};
  std::array<int, 7> totals{};
  int matched = 0;
  for (const EvalRow& row : report.rows) {
    report.mean_mse += row.mse;
    matched += row.match;
    const int k = direction_lambda(row.direction) - 1;
    ++totals[k];
    hits[k] += row.match;
  }
  report.mean_mse /= double(report.rows.size());
  report.dir_accuracy = double(matched) / double(report.rows.size());
  for (int k = 0; k < 7; ++k) {
    report.per_direction[k] =
        totals[k] ? double(hits[k]) / totals[k]
                  : std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

std::string format_report(const EvalReport& report) {
  std::string out = "# clip_id direction mse_px2 dominant_axis match\n";
  char buf[256];
  for (const EvalRow& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%s %s %.6f %c %d\n", r.clip_id.c_str(),
                  std::string(direction_name(r.direction)).c_str(), r.mse,
                  flow_axis_code(r.call.axis), r.match ? 1 : 0);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "mean_mse %.6f\ndir_accuracy %.4f\n",
                report.mean_mse, report.dir_accuracy);
  out += buf;
  out += "\n[metrics]\n";
  std::snprintf(buf, sizeof(buf), "videos=%zu\nmean_mse=%.6f\ndir_accuracy=%.4f\n",
                report.rows.size(), report.mean_mse, report.dir_accuracy);
  out += buf;
  for (Direction d : kAllDirections) {
    const double a = report.per_direction[direction_lambda(d) - 1];
    if (std::isnan(a)) continue;
    std::snprintf(buf, sizeof(buf), "accuracy.%s=%.4f\n",
                  std::string(direction_name(d)).c_str(), a);
    out += buf;
  }
  return out;
}

SeriesSummary summarize_series(std::span<const SeriesPoint> series) {
  SeriesSummary s;
  if (series.empty()) return s;
  s.best = 0;
  s.non_increasing = true;
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].mean_mse < series[s.best].mean_mse) s.best = int(i);
    if (series[i].mean_mse > series[i - 1].mean_mse) s.non_increasing = false;
  }
  s.best_to_first = series[0].mean_mse > 0.0
                        ? series[s.best].mean_mse / series[0].mean_mse
                        : (series[s.best].mean_mse > 0.0 ? 1.0 : 0.0);
  return s;
}

std::string format_series(std::span<const SeriesPoint> series) {
  std::string out = "# step train_loss mean_mse dir_accuracy\n";
  char buf[160];
  for (const SeriesPoint& p : series) {
    std::snprintf(buf, sizeof(buf), "%lld %.6f %.6f %.4f\n",
                  static_cast<long long>(p.step), p.train_loss, p.mean_mse,
                  p.dir_accuracy);
    out += buf;
  }
  const SeriesSummary s = summarize_series(series);
  if (s.best >= 0) {
    std::snprintf(buf, sizeof(buf),
                  "\n[series]\npoints=%zu\nbest_step=%lld\nbest_mean_mse=%.6f\n"
                  "first_mean_mse=%.6f\nbest_to_first=%.4f\n"
                  "non_increasing=%d\n",
                  series.size(), static_cast<long long>(series[s.best].step),
                  series[s.best].mean_mse, series[0].mean_mse,
                  s.best_to_first, s.non_increasing ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace camvid
