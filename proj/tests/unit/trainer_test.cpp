#include <gtest/gtest.h>

#include <cmath>

#include "camvid/rng.hpp"
#include "camvid/trainer.hpp"

namespace camvid {
namespace {

ModelConfig tiny_config() {
  ModelConfig c;
  c.vocab = 10;
  c.context = 10;
  c.width = 8;
  c.layers = 1;
  c.heads = 2;
  c.ff = 16;
  c.seed = 1;
  return c;
}

TokenSequence fixed_sequence() {
  TokenSequence s;
  s.ids = {0, 3, 5, 7, 9, 2, 4, 6, 8, 1};
  s.loss_mask = {0, 0, 0, 1, 1, 1, 1, 1, 1, 1};
  return s;
}

TEST(Schedule, LinearWarmupThenConstant) {
  AdamOptions o;
  o.lr = 1e-3;
  o.warmup = 4;
  EXPECT_DOUBLE_EQ(scheduled_lr(o, 0), 2.5e-4);
  EXPECT_DOUBLE_EQ(scheduled_lr(o, 1), 5e-4);
  EXPECT_DOUBLE_EQ(scheduled_lr(o, 3), 1e-3);
  EXPECT_DOUBLE_EQ(scheduled_lr(o, 1000), 1e-3);
  o.warmup = 0;
  EXPECT_DOUBLE_EQ(scheduled_lr(o, 0), 1e-3);
}

TEST(Trainer, FirstStepMatchesHandWrittenAdam) {
  Transformer<double> model(tiny_config());
  Transformer<double> reference(tiny_config());
  const TokenSequence s = fixed_sequence();
  ParamVector<double> g(model.params().size(), 0.0);
  reference.loss_and_grad(s, g);
  double norm = 0;
  for (double x : g) norm += x * x;
  norm = std::sqrt(norm);

  AdamOptions o;
  o.lr = 0.01;
  o.clip_norm = norm / 2;  // force clipping
  Trainer<double> trainer(model, o);
  const TokenSequence* batch[] = {&s};
  const StepResult r = trainer.step(batch);
  EXPECT_NEAR(r.grad_norm, norm, 1e-12);
  EXPECT_DOUBLE_EQ(r.lr, 0.01);

  // t = 1: m = (1 - b1) g, v = (1 - b2) g^2; bias-corrected update is
  // lr * g / (|g| + eps) with g already scaled by the clip factor.
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double gc = g[i] * 0.5;
    const double expect = reference.params()[i] - 0.01 * gc / (std::abs(gc) + 1e-8);
    EXPECT_NEAR(model.params()[i], expect, 1e-12);
  }
  EXPECT_EQ(trainer.state().step, 1);
}

TEST(Trainer, ZeroLearningRateLeavesParametersAlone) {
  Transformer<float> model(tiny_config());
  const ParamVector<float> before = model.params();
  AdamOptions o;
  o.lr = 0.0;
  Trainer<float> trainer(model, o);
  const TokenSequence s = fixed_sequence();
  const TokenSequence* batch[] = {&s};
  for (int i = 0; i < 3; ++i) trainer.step(batch);
  EXPECT_EQ(model.params(), before);
  EXPECT_EQ(trainer.state().step, 3);
}

TEST(Trainer, BatchLossIsTokenWeighted) {
  Transformer<double> model(tiny_config());
  TokenSequence a = fixed_sequence();
  TokenSequence b = fixed_sequence();
  std::fill(b.loss_mask.begin(), b.loss_mask.begin() + 8, 0);  // 2 tokens
  b.ids[9] = 0;
  const double expect =
      (model.loss(a) * 7 + model.loss(b) * 2) / 9.0;
  AdamOptions o;
  o.lr = 0.0;
  Trainer<double> trainer(model, o);
  const TokenSequence* batch[] = {&a, &b};
  EXPECT_NEAR(trainer.step(batch).loss, expect, 1e-12);
}

TEST(Trainer, OverfitsOneSequence) {
  Transformer<float> model(tiny_config());
  AdamOptions o;
  o.lr = 1e-2;
  Trainer<float> trainer(model, o);
  const TokenSequence s = fixed_sequence();
  const TokenSequence* batch[] = {&s};
  double loss = 0;
  for (int i = 0; i < 400; ++i) loss = trainer.step(batch).loss;
  EXPECT_LT(loss, 0.05);
}

TEST(Trainer, RejectsNegativeLearningRate) {
  Transformer<float> model(tiny_config());
  AdamOptions o;
  o.lr = -1;
  EXPECT_THROW(Trainer<float>(model, o), std::invalid_argument);
}

TEST(Trainer, NonFiniteLossLeavesParametersAlone) {
  Transformer<float> model(tiny_config());
  model.params()[0] = std::numeric_limits<float>::quiet_NaN();
  // Token 0 is the first id, so its embedding row holds the NaN.
  const ParamVector<float> before = model.params();
  Trainer<float> trainer(model, AdamOptions{});
  const TokenSequence s = fixed_sequence();
  const TokenSequence* batch[] = {&s};
  EXPECT_THROW(trainer.step(batch), std::runtime_error);
  for (std::size_t i = 1; i < before.size(); ++i) {
    ASSERT_EQ(model.params()[i], before[i]);
  }
}

}  // namespace
}  // namespace camvid
