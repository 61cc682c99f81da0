#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "camvid/transformer.hpp"

namespace camvid {

struct AdamOptions {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 1.0;  // global gradient norm; <= 0 disables clipping
  int warmup = 0;          // linear ramp over the first steps
};

// Learning rate used for the update that takes the optimizer from `step` to
// step + 1.
double scheduled_lr(const AdamOptions& options, std::int64_t step);

template <typename Scalar>
struct AdamState {
  std::int64_t step = 0;
  ParamVector<Scalar> m;
  ParamVector<Scalar> v;
};

struct StepResult {
  double loss = 0.0;       // mean nats per predicted token over the batch
  double grad_norm = 0.0;  // before clipping
  double lr = 0.0;
};

// Adam with global-norm clipping over a flat parameter vector.
template <typename Scalar>
class Trainer {
 public:
  Trainer(Transformer<Scalar>& model, const AdamOptions& options);

  // One update on the token-weighted mean loss of `batch`. Throws
  // std::runtime_error on a non-finite loss or gradient, leaving the
  // parameters untouched.
  StepResult step(std::span<const TokenSequence* const> batch);

  AdamState<Scalar>& state() { return state_; }
  const AdamState<Scalar>& state() const { return state_; }
  const AdamOptions& options() const { return options_; }

 private:
  Transformer<Scalar>& model_;
  AdamOptions options_;
  AdamState<Scalar> state_;
  ParamVector<Scalar> grad_;
};

extern template class Trainer<float>;
extern template class Trainer<double>;

}  // namespace camvid
