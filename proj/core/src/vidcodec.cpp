#include "camvid/vidcodec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "camvid/binary_io.hpp"
#include "camvid/kmeans.hpp"
#include "camvid/rng.hpp"

namespace camvid {

namespace {

constexpr int kFirstDim = kPatchSize * kPatchSize * 3;
constexpr int kGroupDim = kFirstDim * kTemporalGroup;

// Copies the patch at (row, col) of frames [f0, f0 + depth) into out.
void gather_patch(const Frames& frames, int f0, int depth, int row, int col,
                  double* out) {
  for (int f = 0; f < depth; ++f) {
    const Image& img = frames[f0 + f];
    for (int y = 0; y < kPatchSize; ++y) {
      for (int x = 0; x < kPatchSize; ++x) {
        for (int c = 0; c < 3; ++c) {
          *out++ = img.at(row * kPatchSize + y, col * kPatchSize + x, c) /
                   255.0;
        }
      }
    }
  }
}

void scatter_patch(Frames& frames, int f0, int depth, int row, int col,
                   const double* code, const double* mean) {
  for (int f = 0; f < depth; ++f) {
    Image& img = frames[f0 + f];
    for (int y = 0; y < kPatchSize; ++y) {
      for (int x = 0; x < kPatchSize; ++x) {
        for (int c = 0; c < 3; ++c) {
          const double v = std::clamp(*code++ + *mean++, 0.0, 1.0);
          img.at(row * kPatchSize + y, col * kPatchSize + x, c) =
              static_cast<std::uint8_t>(std::lround(v * 255.0));
        }
      }
    }
  }
}

std::vector<double> column_mean(const std::vector<double>& data, int dim) {
  std::vector<double> mean(dim, 0.0);
  const std::size_t n = data.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) mean[d] += data[i * dim + d];
  }
  for (double& m : mean) m /= double(n);
  return mean;
}

int nearest_centred(const std::vector<double>& codes, int dim,
                    const double* patch, const std::vector<double>& mean) {
  std::vector<double> centred(dim);
  for (int d = 0; d < dim; ++d) centred[d] = patch[d] - mean[d];
  return nearest_centroid(codes, dim, centred);
}

void check_frames(const Frames& frames) {
  if (frames.empty()) throw std::invalid_argument("patchify: no frames");
  const int h = frames.front().height;
  const int w = frames.front().width;
  for (const Image& f : frames) {
    if (f.height != h || f.width != w) {
      throw std::invalid_argument("patchify: frames differ in shape");
    }
  }
}

}  // namespace

VideoGridShape video_grid_shape(int frames, int height, int width) {
  if (frames < 1 || (frames - 1) % kTemporalGroup != 0) {
    throw std::invalid_argument("frame count " + std::to_string(frames) +
                                " must be 1 mod 4");
  }
  if (height <= 0 || width <= 0 || height % kPatchSize != 0 ||
      width % kPatchSize != 0) {
    throw std::invalid_argument("frame size " + std::to_string(height) + "x" +
                                std::to_string(width) +
                                " must be a positive multiple of 8");
  }
  return {1 + (frames - 1) / kTemporalGroup, height / kPatchSize,
          width / kPatchSize};
}

Patches patchify(const Frames& frames) {
  check_frames(frames);
  Patches p;
  p.shape = video_grid_shape(static_cast<int>(frames.size()),
                             frames.front().height, frames.front().width);
  p.first_dim = kFirstDim;
  p.group_dim = kGroupDim;
  const int slice = p.shape.slice();
  p.first.resize(std::size_t(slice) * kFirstDim);
  p.groups.resize(std::size_t(p.shape.t - 1) * slice * kGroupDim);
  for (int r = 0; r < p.shape.h; ++r) {
    for (int c = 0; c < p.shape.w; ++c) {
      gather_patch(frames, 0, 1, r, c,
                   p.first.data() + std::size_t(r * p.shape.w + c) * kFirstDim);
    }
  }
  for (int t = 1; t < p.shape.t; ++t) {
    const int f0 = 1 + (t - 1) * kTemporalGroup;
    for (int r = 0; r < p.shape.h; ++r) {
      for (int c = 0; c < p.shape.w; ++c) {
        const std::size_t idx = std::size_t(t - 1) * slice + r * p.shape.w + c;
        gather_patch(frames, f0, kTemporalGroup, r, c,
                     p.groups.data() + idx * kGroupDim);
      }
    }
  }
  return p;
}

VqVideoCodebook train_vq(std::span<const Frames> clips,
                         const VqTrainOptions& options) {
  if (options.vocab < 2) throw std::invalid_argument("train_vq: vocab < 2");
  std::vector<double> first;
  std::vector<double> groups;
  for (const Frames& clip : clips) {
    Patches p = patchify(clip);
    first.insert(first.end(), p.first.begin(), p.first.end());
    groups.insert(groups.end(), p.groups.begin(), p.groups.end());
  }
  const std::size_t n_first = first.size() / kFirstDim;
  const std::size_t n_group = groups.size() / kGroupDim;
  if (n_first < std::size_t(options.vocab) ||
      n_group < std::size_t(options.vocab)) {
    throw std::invalid_argument(
        "train_vq: need at least " + std::to_string(options.vocab) +
        " patches per codebook, have " + std::to_string(n_first) +
        " first-frame and " + std::to_string(n_group) + " group patches");
  }

  VqVideoCodebook book;
  book.vocab = options.vocab;
  book.first_dim = kFirstDim;
  book.group_dim = kGroupDim;
  book.first_mean = column_mean(first, kFirstDim);
  book.group_mean = column_mean(groups, kGroupDim);
  for (std::size_t i = 0; i < n_first; ++i) {
    for (int d = 0; d < kFirstDim; ++d) {
      first[i * kFirstDim + d] -= book.first_mean[d];
    }
  }
  for (std::size_t i = 0; i < n_group; ++i) {
    for (int d = 0; d < kGroupDim; ++d) {
      groups[i * kGroupDim + d] -= book.group_mean[d];
    }
  }

  KMeansOptions km;
  km.k = options.vocab;
  km.iterations = options.iterations;
  km.seed = derive_seed(options.seed, "first");
  book.first = kmeans(first, kFirstDim, km);
  km.seed = derive_seed(options.seed, "group");
  book.group = kmeans(groups, kGroupDim, km);
  return book;
}

VideoTokenGrid tokenize(const Frames& frames, const VqVideoCodebook& book) {
  const Patches p = patchify(frames);
  if (p.first_dim != book.first_dim || p.group_dim != book.group_dim) {
    throw std::invalid_argument("tokenize: patch size does not match codebook");
  }
  VideoTokenGrid grid;
  grid.shape = p.shape;
  grid.tokens.reserve(p.shape.count());
  const int slice = p.shape.slice();
  for (int i = 0; i < slice; ++i) {
    grid.tokens.push_back(nearest_centred(
        book.first, book.first_dim, p.first.data() + std::size_t(i) * book.first_dim,
        book.first_mean));
  }
  const std::size_t n_group = p.groups.size() / book.group_dim;
  for (std::size_t i = 0; i < n_group; ++i) {
    grid.tokens.push_back(nearest_centred(book.group, book.group_dim,
                                          p.groups.data() + i * book.group_dim,
                                          book.group_mean));
  }
  return grid;
}

std::vector<int> tokenize_first_frame(const Image& image,
                                      const VqVideoCodebook& book) {
  return tokenize(Frames{image}, book).tokens;
}

Frames detokenize(const VideoTokenGrid& grid, const VqVideoCodebook& book) {
  const VideoGridShape& s = grid.shape;
  if (grid.tokens.size() != std::size_t(s.count())) {
    throw std::invalid_argument("detokenize: grid size does not match shape");
  }
  for (std::size_t i = 0; i < grid.tokens.size(); ++i) {
    if (grid.tokens[i] < 0 || grid.tokens[i] >= book.vocab) {
      throw std::invalid_argument(
          "detokenize: token " + std::to_string(grid.tokens[i]) +
          " at position " + std::to_string(i) + " is outside [0, " +
          std::to_string(book.vocab) + ")");
    }
  }
  const int n = 1 + (s.t - 1) * kTemporalGroup;
  Frames frames(n, Image(s.h * kPatchSize, s.w * kPatchSize));
  for (int t = 0; t < s.t; ++t) {
    const bool is_first = t == 0;
    const int f0 = is_first ? 0 : 1 + (t - 1) * kTemporalGroup;
    const int depth = is_first ? 1 : kTemporalGroup;
    const auto& codes = is_first ? book.first : book.group;
    const auto& mean = is_first ? book.first_mean : book.group_mean;
    const int dim = is_first ? book.first_dim : book.group_dim;
    for (int r = 0; r < s.h; ++r) {
      for (int c = 0; c < s.w; ++c) {
        const int tok = grid.at(t, r, c);
        scatter_patch(frames, f0, depth, r, c,
                      codes.data() + std::size_t(tok) * dim, mean.data());
      }
    }
  }
  return frames;
}

VqVideoCodebook random_video_codebook(int vocab, std::uint64_t seed) {
  Rng rng(seed);
  VqVideoCodebook book;
  book.vocab = vocab;
  book.first_dim = kFirstDim;
  book.group_dim = kGroupDim;
  book.first_mean.assign(kFirstDim, 0.0);
  book.group_mean.assign(kGroupDim, 0.0);
  book.first.resize(std::size_t(vocab) * kFirstDim);
  book.group.resize(std::size_t(vocab) * kGroupDim);
  for (double& v : book.first) v = rng.uniform();
  for (double& v : book.group) v = rng.uniform();
  return book;
}

void write_video_codebook(const std::filesystem::path& path,
                          const VqVideoCodebook& book) {
  ByteWriter out;
  out.magic("VVQ1");
  out.u32(book.vocab);
  out.u32(book.first_dim);
  out.u32(book.group_dim);
  for (double v : book.first_mean) out.f64(v);
  for (double v : book.group_mean) out.f64(v);
  for (double v : book.first) out.f64(v);
  for (double v : book.group) out.f64(v);
  write_file_atomic(path, out.buffer());
}

VqVideoCodebook read_video_codebook(const std::filesystem::path& path) {
  ByteReader in(read_file_bytes(path), path.string());
  in.expect_magic("VVQ1");
  VqVideoCodebook b;
  b.vocab = static_cast<int>(in.u32());
  b.first_dim = static_cast<int>(in.u32());
  b.group_dim = static_cast<int>(in.u32());
  if (b.vocab < 2 || b.first_dim != kFirstDim || b.group_dim != kGroupDim) {
    throw IoError(path.string() + ": unsupported VVQ1 header");
  }
  auto read_block = [&](std::vector<double>& v, std::size_t n) {
    v.resize(n);
    for (double& x : v) {
      x = in.f64();
      if (!std::isfinite(x)) throw IoError(path.string() + ": non-finite value");
    }
  };
  read_block(b.first_mean, b.first_dim);
  read_block(b.group_mean, b.group_dim);
  read_block(b.first, std::size_t(b.vocab) * b.first_dim);
  read_block(b.group, std::size_t(b.vocab) * b.group_dim);
  if (!in.at_end()) throw IoError(path.string() + ": trailing bytes");
  return b;
}

void write_video_tokens(const std::filesystem::path& path,
                        const VideoTokenGrid& grid) {
  ByteWriter out;
  out.magic("VTK1");
  out.u32(grid.shape.t);
  out.u32(grid.shape.h);
  out.u32(grid.shape.w);
  for (int t : grid.tokens) out.u32(static_cast<std::uint32_t>(t));
  write_file_atomic(path, out.buffer());
}

VideoTokenGrid read_video_tokens(const std::filesystem::path& path) {
  ByteReader in(read_file_bytes(path), path.string());
  in.expect_magic("VTK1");
  VideoTokenGrid g;
  g.shape.t = static_cast<int>(in.u32());
  g.shape.h = static_cast<int>(in.u32());
  g.shape.w = static_cast<int>(in.u32());
  g.tokens.resize(std::size_t(g.shape.count()));
  for (int& t : g.tokens) t = static_cast<int>(in.u32());
  if (!in.at_end()) throw IoError(path.string() + ": trailing bytes");
  return g;
}

}  // namespace camvid
