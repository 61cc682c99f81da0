#include "camvid/trainer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace camvid {

double scheduled_lr(const AdamOptions& options, std::int64_t step) {
  if (options.warmup > 0 && step < options.warmup) {
    return options.lr * double(step + 1) / double(options.warmup);
  }
  return options.lr;
}

template <typename Scalar>
Trainer<Scalar>::Trainer(Transformer<Scalar>& model, const AdamOptions& options)
    : model_(model), options_(options) {
  if (!(options.lr >= 0.0)) throw std::invalid_argument("lr must be >= 0");
  state_.m.assign(model.params().size(), Scalar(0));
  state_.v.assign(model.params().size(), Scalar(0));
  grad_.assign(model.params().size(), Scalar(0));
}

template <typename Scalar>
StepResult Trainer<Scalar>::step(std::span<const TokenSequence* const> batch) {
  ParamVector<Scalar>& params = model_.params();
  if (state_.m.size() != params.size() || state_.v.size() != params.size()) {
    throw std::invalid_argument("optimizer state does not match the model");
  }
  int total = 0;
  for (const TokenSequence* seq : batch) {
    for (int i = 0; i + 1 < seq->size(); ++i) total += seq->loss_mask[i + 1];
  }
  StepResult res;
  res.lr = scheduled_lr(options_, state_.step);
  std::fill(grad_.begin(), grad_.end(), Scalar(0));
  if (total == 0) {
    ++state_.step;
    return res;
  }

  double loss_sum = 0.0;
  const Scalar weight = Scalar(1) / Scalar(total);
  for (const TokenSequence* seq : batch) {
    loss_sum += model_.accumulate_gradient(*seq, weight, grad_).sum;
  }
  res.loss = loss_sum / total;
  double sq = 0.0;
  for (Scalar g : grad_) sq += double(g) * double(g);
  res.grad_norm = std::sqrt(sq);
  if (!std::isfinite(res.loss) || !std::isfinite(res.grad_norm)) {
    throw std::runtime_error("training step " + std::to_string(state_.step) +
                             ": non-finite loss or gradient (loss " +
                             std::to_string(res.loss) + ", grad norm " +
                             std::to_string(res.grad_norm) + ")");
  }

  const double clip = (options_.clip_norm > 0.0 &&
                       res.grad_norm > options_.clip_norm)
                          ? options_.clip_norm / res.grad_norm
                          : 1.0;
  const std::int64_t t = state_.step + 1;
  const double bc1 = 1.0 - std::pow(options_.beta1, double(t));
  const double bc2 = 1.0 - std::pow(options_.beta2, double(t));
  const Scalar b1 = Scalar(options_.beta1);
  const Scalar b2 = Scalar(options_.beta2);
  const Scalar step_size = Scalar(res.lr / bc1);
  const Scalar inv_bc2 = Scalar(1.0 / bc2);
  const Scalar eps = Scalar(options_.eps);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Scalar g = grad_[i] * Scalar(clip);
    state_.m[i] = b1 * state_.m[i] + (Scalar(1) - b1) * g;
    state_.v[i] = b2 * state_.v[i] + (Scalar(1) - b2) * g * g;
    params[i] -=
        step_size * state_.m[i] / (std::sqrt(state_.v[i] * inv_bc2) + eps);
  }
  state_.step = t;
  return res;
}

template class Trainer<float>;
template class Trainer<double>;

}  // namespace camvid
