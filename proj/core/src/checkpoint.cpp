#include "camvid/checkpoint.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "camvid/binary_io.hpp"

namespace camvid {

namespace {

constexpr std::uint32_t kVersion = 1;

void put_tensor(ByteWriter& out, const std::string& name,
                const std::vector<int>& dims, const float* data,
                std::size_t size) {
  out.u32(static_cast<std::uint32_t>(name.size()));
  out.text(name);
  out.u32(static_cast<std::uint32_t>(dims.size()));
  for (int d : dims) out.u32(static_cast<std::uint32_t>(d));
  for (std::size_t i = 0; i < size; ++i) out.f32(data[i]);
}

template <typename T>
T parse_number(const KeyValues& kv, std::string_view key,
               const std::string& source) {
  const auto s = find_value(kv, key);
  if (!s) throw IoError(source + ": checkpoint config lacks " + std::string(key));
  T v{};
  const auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc() || p != s->data() + s->size()) {
    throw IoError(source + ": bad value for " + std::string(key));
  }
  return v;
}

}  // namespace

std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

KeyValues parse_key_values(std::string_view text, const std::string& source) {
  KeyValues kv;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      line.remove_prefix(1);
    }
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw std::invalid_argument(source + ":" + std::to_string(line_no) +
                                  ": expected key=value");
    }
    std::string_view key = line.substr(0, eq);
    std::string_view val = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) {
      key.remove_suffix(1);
    }
    while (!val.empty() && (val.front() == ' ' || val.front() == '\t')) {
      val.remove_prefix(1);
    }
    kv.emplace_back(std::string(key), std::string(val));
  }
  return kv;
}

std::optional<std::string> find_value(const KeyValues& kv,
                                      std::string_view key) {
  // Later entries override earlier ones.
  for (auto it = kv.rbegin(); it != kv.rend(); ++it) {
    if (it->first == key) return it->second;
  }
  return std::nullopt;
}

void write_checkpoint(const std::filesystem::path& path,
                      const Transformer<float>& model,
                      const AdamState<float>& adam, const KeyValues& config) {
  const ModelConfig& mc = model.config();
  KeyValues header = {
      {"model.vocab", std::to_string(mc.vocab)},
      {"model.context", std::to_string(mc.context)},
      {"model.width", std::to_string(mc.width)},
      {"model.layers", std::to_string(mc.layers)},
      {"model.heads", std::to_string(mc.heads)},
      {"model.ff", std::to_string(mc.ff)},
      {"model.seed", std::to_string(mc.seed)},
      {"optimizer.step", std::to_string(adam.step)},
  };
  for (const auto& entry : config) {
    if (!find_value(header, entry.first)) header.push_back(entry);
  }
  const std::string text = format_key_values(header);
  const auto layout = parameter_layout(mc);
  const bool with_adam = !adam.m.empty();
  if (with_adam && (adam.m.size() != model.params().size() ||
                    adam.v.size() != model.params().size())) {
    throw std::invalid_argument("optimizer state does not match the model");
  }

  ByteWriter out;
  out.magic("CKPT");
  out.u32(kVersion);
  out.u32(static_cast<std::uint32_t>(text.size()));
  out.text(text);
  out.u32(static_cast<std::uint32_t>(layout.size() * (with_adam ? 3 : 1)));
  for (const TensorSpec& t : layout) {
    put_tensor(out, t.name, t.dims, model.params().data() + t.offset,
               t.size());
  }
  if (with_adam) {
    for (const TensorSpec& t : layout) {
      put_tensor(out, "adam.m/" + t.name, t.dims, adam.m.data() + t.offset,
                 t.size());
    }
    for (const TensorSpec& t : layout) {
      put_tensor(out, "adam.v/" + t.name, t.dims, adam.v.data() + t.offset,
                 t.size());
    }
  }
  write_file_atomic(path, out.buffer());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  const std::string src = path.string();
  ByteReader in(read_file_bytes(path), src);
  in.expect_magic("CKPT");
  const std::uint32_t version = in.u32();
  if (version != kVersion) {
    throw IoError(src + ": unsupported checkpoint version " +
                  std::to_string(version));
  }
  const std::uint32_t text_len = in.u32();
  KeyValues config;
  try {
    config = parse_key_values(in.text(text_len), src);
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }

  ModelConfig mc;
  mc.vocab = parse_number<int>(config, "model.vocab", src);
  mc.context = parse_number<int>(config, "model.context", src);
  mc.width = parse_number<int>(config, "model.width", src);
  mc.layers = parse_number<int>(config, "model.layers", src);
  mc.heads = parse_number<int>(config, "model.heads", src);
  mc.ff = parse_number<int>(config, "model.ff", src);
  mc.seed = parse_number<std::uint64_t>(config, "model.seed", src);
  try {
    mc.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(src + ": " + e.what());
  }

  Checkpoint ck(mc);
  ck.adam.step = parse_number<std::int64_t>(config, "optimizer.step", src);
  ck.config = std::move(config);
  const auto layout = parameter_layout(mc);
  std::map<std::string, const TensorSpec*> by_name;
  for (const TensorSpec& t : layout) by_name[t.name] = &t;

  const std::uint32_t count = in.u32();
  std::map<std::string, bool> seen;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string name = in.text(in.u32());
    const std::uint32_t rank = in.u32();
    if (rank > 8) throw IoError(src + ": tensor " + name + " has rank > 8");
    std::vector<int> dims(rank);
    for (int& d : dims) d = static_cast<int>(in.u32());

    std::string base = name;
    ParamVector<float>* dst = &ck.model.params();
    if (name.starts_with("adam.m/") || name.starts_with("adam.v/")) {
      base = name.substr(7);
      ParamVector<float>& moment = name[5] == 'm' ? ck.adam.m : ck.adam.v;
      if (moment.empty()) moment.assign(ck.model.params().size(), 0.0f);
      dst = &moment;
    }
    const auto it = by_name.find(base);
    if (it == by_name.end()) {
      throw IoError(src + ": unknown tensor " + name);
    }
    if (dims != it->second->dims) {
      throw IoError(src + ": tensor " + name + " has the wrong shape");
    }
    if (seen[name]) throw IoError(src + ": duplicate tensor " + name);
    seen[name] = true;
    float* out = dst->data() + it->second->offset;
    for (std::size_t k = 0; k < it->second->size(); ++k) {
      out[k] = in.f32();
      if (!std::isfinite(out[k])) {
        throw IoError(src + ": non-finite value in tensor " + name);
      }
    }
  }
  for (const TensorSpec& t : layout) {
    if (!seen[t.name]) throw IoError(src + ": missing tensor " + t.name);
  }
  if (!in.at_end()) throw IoError(src + ": trailing bytes");
  return ck;
}

}  // namespace camvid
