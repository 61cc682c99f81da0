#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "camvid/trainer.hpp"
#include "camvid/transformer.hpp"

namespace camvid {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Model, optimizer state and the run configuration at one training step.
struct Checkpoint {
  KeyValues config;  // free-form run settings, stored verbatim
  Transformer<float> model;
  AdamState<float> adam;

  explicit Checkpoint(const ModelConfig& mc) : model(mc) {}
};

// "CKPT", u32 version, u32 byte length + key=value config text (model shape
// and optimizer step included), u32 tensor count, then per tensor: u32 name
// length, name, u32 rank, u32 dims[rank], float32 values. Optimizer moments
// are stored as "adam.m/<name>" and "adam.v/<name>".
void write_checkpoint(const std::filesystem::path& path,
                      const Transformer<float>& model,
                      const AdamState<float>& adam, const KeyValues& config);

// Throws IoError on malformed files, naming the path and the problem.
Checkpoint read_checkpoint(const std::filesystem::path& path);

std::string format_key_values(const KeyValues& kv);
// Throws std::invalid_argument naming source:line on a line without "=".
KeyValues parse_key_values(std::string_view text, const std::string& source);
std::optional<std::string> find_value(const KeyValues& kv,
                                      std::string_view key);

}  // namespace camvid
