#include "camvid/camcodec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "camvid/binary_io.hpp"
#include "camvid/kmeans.hpp"
#include "camvid/rng.hpp"

namespace camvid {

namespace {

constexpr double kMinStd = 1e-8;

void check_window(const CameraSignal& s, int window) {
  if (s.values.empty() || s.values.size() % window != 0) {
    throw std::invalid_argument("camera signal length " +
                                std::to_string(s.values.size()) +
                                " is not a positive multiple of window " +
                                std::to_string(window));
  }
}

}  // namespace

std::vector<double> normalize_window(const RvqCodebook& book,
                                     std::span<const double> window) {
  std::vector<double> z(book.dim);
  for (int d = 0; d < book.dim; ++d) {
    z[d] = (window[d] - book.mean[d]) / book.stddev[d];
  }
  return z;
}

RvqCodebook train_rvq(std::span<const CameraSignal> signals,
                      const RvqTrainOptions& options) {
  if (options.levels < 1 || options.entries < 1 || options.window < 1) {
    throw std::invalid_argument("train_rvq: levels, entries and window must "
                                "be positive");
  }
  const int w = options.window;
  std::size_t total = 0;
  for (const CameraSignal& s : signals) {
    check_window(s, w);
    total += s.values.size();
  }
  const std::size_t n = total / w;
  if (n < std::size_t(options.entries)) {
    throw std::invalid_argument("train_rvq: " + std::to_string(n) +
                                " windows is fewer than K = " +
                                std::to_string(options.entries));
  }

  RvqCodebook book;
  book.levels = options.levels;
  book.entries = options.entries;
  book.dim = w;
  book.window = w;
  book.mean.assign(w, 0.0);
  book.stddev.assign(w, 0.0);

  std::vector<double> data;
  data.reserve(total);
  for (const CameraSignal& s : signals) {
    data.insert(data.end(), s.values.begin(), s.values.end());
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < w; ++d) book.mean[d] += data[i * w + d];
  }
  for (int d = 0; d < w; ++d) book.mean[d] /= double(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < w; ++d) {
      const double c = data[i * w + d] - book.mean[d];
      book.stddev[d] += c * c;
    }
  }
  for (int d = 0; d < w; ++d) {
    const double sd = std::sqrt(book.stddev[d] / double(n));
    book.stddev[d] = sd < kMinStd ? 1.0 : sd;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < w; ++d) {
      data[i * w + d] = (data[i * w + d] - book.mean[d]) / book.stddev[d];
    }
  }

  book.vectors.reserve(std::size_t(options.levels) * options.entries * w);
  for (int l = 0; l < options.levels; ++l) {
    KMeansOptions km;
    km.k = options.entries;
    km.iterations = options.iterations;
    km.seed = derive_seed(options.seed, std::uint64_t(l));
    km.pin_zero = l > 0;
    const std::vector<double> centroids = kmeans(data, w, km);
    book.vectors.insert(book.vectors.end(), centroids.begin(),
                        centroids.end());
    // Residuals for the next level, using the exact encoder assignment.
    for (std::size_t i = 0; i < n; ++i) {
      std::span<double> r(data.data() + i * w, w);
      const int k = nearest_centroid(centroids, w, r);
      for (int d = 0; d < w; ++d) r[d] -= centroids[std::size_t(k) * w + d];
    }
  }
  return book;
}

CameraTokens rvq_encode(const CameraSignal& signal, const RvqCodebook& book) {
  check_window(signal, book.window);
  CameraTokens out;
  out.positions = static_cast<int>(signal.values.size() / book.window);
  out.levels = book.levels;
  out.tokens.reserve(std::size_t(out.positions) * out.levels);
  for (int t = 0; t < out.positions; ++t) {
    std::vector<double> r = normalize_window(
        book, std::span<const double>(signal.values)
                  .subspan(std::size_t(t) * book.window, book.window));
    for (int l = 0; l < book.levels; ++l) {
      const int k = nearest_centroid(book.level(l), book.dim, r);
      const auto e = book.entry(l, k);
      for (int d = 0; d < book.dim; ++d) r[d] -= e[d];
      out.tokens.push_back(k);
    }
  }
  return out;
}

namespace {

void check_tokens(const CameraTokens& tokens, const RvqCodebook& book) {
  if (tokens.levels != book.levels ||
      tokens.tokens.size() != std::size_t(tokens.positions) * tokens.levels) {
    throw std::invalid_argument("camera tokens do not match codebook levels");
  }
  for (std::size_t i = 0; i < tokens.tokens.size(); ++i) {
    if (tokens.tokens[i] < 0 || tokens.tokens[i] >= book.entries) {
      throw std::invalid_argument(
          "camera token " + std::to_string(tokens.tokens[i]) +
          " at flat position " + std::to_string(i) + " is outside [0, " +
          std::to_string(book.entries) + ")");
    }
  }
}

}  // namespace

CameraSignal rvq_decode(const CameraTokens& tokens, const RvqCodebook& book,
                        int levels_used) {
  check_tokens(tokens, book);
  const int use = levels_used < 0 ? book.levels : levels_used;
  CameraSignal sig;
  sig.values.assign(std::size_t(tokens.positions) * book.window, 0.0);
  for (int t = 0; t < tokens.positions; ++t) {
    double* out = sig.values.data() + std::size_t(t) * book.window;
    for (int l = 0; l < use; ++l) {
      const auto e = book.entry(l, tokens.at(t, l));
      for (int d = 0; d < book.dim; ++d) out[d] += e[d];
    }
    for (int d = 0; d < book.dim; ++d) {
      out[d] = out[d] * book.stddev[d] + book.mean[d];
    }
  }
  return sig;
}

double rvq_normalized_error(const CameraSignal& signal,
                            const CameraTokens& tokens,
                            const RvqCodebook& book, int levels_used) {
  check_tokens(tokens, book);
  double sum = 0.0;
  for (int t = 0; t < tokens.positions; ++t) {
    std::vector<double> r = normalize_window(
        book, std::span<const double>(signal.values)
                  .subspan(std::size_t(t) * book.window, book.window));
    for (int l = 0; l < levels_used; ++l) {
      const auto e = book.entry(l, tokens.at(t, l));
      for (int d = 0; d < book.dim; ++d) r[d] -= e[d];
    }
    for (double v : r) sum += v * v;
  }
  return std::sqrt(sum);
}

void write_codebook(const std::filesystem::path& path, const RvqCodebook& b) {
  ByteWriter out;
  out.magic("RVQ1");
  out.u32(b.levels);
  out.u32(b.entries);
  out.u32(b.dim);
  out.u32(b.window);
  for (double v : b.mean) out.f64(v);
  for (double v : b.stddev) out.f64(v);
  for (double v : b.vectors) out.f64(v);
  write_file_atomic(path, out.buffer());
}

RvqCodebook read_codebook(const std::filesystem::path& path) {
  ByteReader in(read_file_bytes(path), path.string());
  in.expect_magic("RVQ1");
  RvqCodebook b;
  b.levels = static_cast<int>(in.u32());
  b.entries = static_cast<int>(in.u32());
  b.dim = static_cast<int>(in.u32());
  b.window = static_cast<int>(in.u32());
  if (b.levels < 1 || b.entries < 1 || b.dim < 1 || b.dim != b.window) {
    throw IoError(path.string() + ": invalid RVQ header");
  }
  b.mean.resize(b.dim);
  b.stddev.resize(b.dim);
  for (double& v : b.mean) v = in.f64();
  for (double& v : b.stddev) v = in.f64();
  b.vectors.resize(std::size_t(b.levels) * b.entries * b.dim);
  for (double& v : b.vectors) {
    v = in.f64();
    if (!std::isfinite(v)) throw IoError(path.string() + ": non-finite entry");
  }
  if (!in.at_end()) throw IoError(path.string() + ": trailing bytes");
  return b;
}

void write_camera_tokens(const std::filesystem::path& path,
                         const CameraTokens& tokens) {
  ByteWriter out;
  out.magic("CTK1");
  out.u32(tokens.positions);
  out.u32(tokens.levels);
  for (int t : tokens.tokens) {
    if (t < 0 || t > 0xffff) {
      throw std::invalid_argument("camera token does not fit in u16");
    }
    out.u16(static_cast<std::uint16_t>(t));
  }
  write_file_atomic(path, out.buffer());
}

CameraTokens read_camera_tokens(const std::filesystem::path& path) {
  ByteReader in(read_file_bytes(path), path.string());
  in.expect_magic("CTK1");
  CameraTokens t;
  t.positions = static_cast<int>(in.u32());
  t.levels = static_cast<int>(in.u32());
  t.tokens.resize(std::size_t(t.positions) * t.levels);
  for (int& v : t.tokens) v = in.u16();
  if (!in.at_end()) throw IoError(path.string() + ": trailing bytes");
  return t;
}

}  // namespace camvid
