#include <gtest/gtest.h>

#include "camvid/binary_io.hpp"
#include "camvid/checkpoint.hpp"
#include "camvid/rng.hpp"
#include "temp_dir.hpp"

namespace camvid {
namespace {

ModelConfig small_config() {
  ModelConfig c;
  c.vocab = 20;
  c.context = 16;
  c.width = 8;
  c.layers = 2;
  c.heads = 2;
  c.ff = 12;
  c.seed = 4;
  return c;
}

TEST(KeyValues, ParseTrimsAndSkipsComments) {
  const KeyValues kv = parse_key_values(
      "# comment\n  a = 1 \n\nb=two words\n# c=3\na=4\n", "mem");
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"a", "1"}));
  EXPECT_EQ(kv[1].second, "two words");
  EXPECT_EQ(find_value(kv, "a"), "4");
  EXPECT_FALSE(find_value(kv, "c"));
  EXPECT_THROW(parse_key_values("novalue\n", "mem"), std::invalid_argument);
}

TEST(KeyValues, FormatParseRoundTrip) {
  const KeyValues kv = {{"x", "1"}, {"path", "runs/a b"}, {"lr", "0.001"}};
  EXPECT_EQ(parse_key_values(format_key_values(kv), "mem"), kv);
}

TEST(Checkpoint, RoundTripsModelOptimizerAndConfig) {
  testing::TempDir tmp;
  Transformer<float> model(small_config());
  AdamState<float> adam;
  adam.step = 37;
  Rng rng(1);
  for (float& p : model.params()) p = float(rng.normal());
  for (std::size_t i = 0; i < model.params().size(); ++i) {
    adam.m.push_back(float(rng.normal()));
    adam.v.push_back(float(rng.uniform()));
  }
  const KeyValues run = {{"train.lr", "0.001"}, {"seed", "9"}};
  write_checkpoint(tmp / "a.ckpt", model, adam, run);

  const Checkpoint c = read_checkpoint(tmp / "a.ckpt");
  EXPECT_EQ(c.model.params(), model.params());
  EXPECT_EQ(c.adam.m, adam.m);
  EXPECT_EQ(c.adam.v, adam.v);
  EXPECT_EQ(c.adam.step, 37);
  EXPECT_EQ(c.model.config().layers, 2);
  EXPECT_EQ(c.model.config().vocab, 20);
  EXPECT_EQ(find_value(c.config, "train.lr"), "0.001");
  EXPECT_EQ(find_value(c.config, "seed"), "9");

  // Same content, same bytes.
  write_checkpoint(tmp / "b.ckpt", c.model, c.adam, run);
  EXPECT_EQ(read_file_bytes(tmp / "a.ckpt"), read_file_bytes(tmp / "b.ckpt"));
}

TEST(Checkpoint, CorruptFilesAreRejected) {
  testing::TempDir tmp;
  Transformer<float> model(small_config());
  AdamState<float> adam;
  adam.m.assign(model.params().size(), 0.f);
  adam.v.assign(model.params().size(), 0.f);
  write_checkpoint(tmp / "ok.ckpt", model, adam, {});
  const auto bytes = read_file_bytes(tmp / "ok.ckpt");

  auto bad = bytes;
  bad[0] = 'X';
  write_file_atomic(tmp / "magic.ckpt", bad);
  EXPECT_THROW(read_checkpoint(tmp / "magic.ckpt"), IoError);

  bad = bytes;
  bad.resize(bytes.size() / 2);
  write_file_atomic(tmp / "short.ckpt", bad);
  try {
    read_checkpoint(tmp / "short.ckpt");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("short.ckpt"), std::string::npos);
  }

  bad = bytes;
  bad.push_back(0);
  write_file_atomic(tmp / "trailing.ckpt", bad);
  EXPECT_THROW(read_checkpoint(tmp / "trailing.ckpt"), IoError);

  EXPECT_THROW(read_checkpoint(tmp / "missing.ckpt"), IoError);
}

}  // namespace
}  // namespace camvid
