#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "camvid/sequence.hpp"

namespace camvid {

// Flat parameter and gradient storage. The fixed base alignment keeps Eigen's
// vectorized reductions in the same order from run to run.
template <typename Scalar>
using ParamVector = std::vector<Scalar, Eigen::aligned_allocator<Scalar>>;

struct ModelConfig {
  int vocab = 0;
  int context = 160;
  int width = 64;
  int layers = 2;
  int heads = 4;
  int ff = 256;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument naming the bad field.
  void validate() const;
  int head_dim() const { return width / heads; }
};

// Name and shape of one parameter tensor inside the flat parameter vector.
struct TensorSpec {
  std::string name;
  std::vector<int> dims;
  std::size_t offset = 0;
  std::size_t size() const;
};

std::vector<TensorSpec> parameter_layout(const ModelConfig& config);
std::size_t parameter_count(const ModelConfig& config);

template <typename Scalar>
using RowMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Pre-norm decoder-only transformer: learned token and position embeddings,
// causal multi-head attention, GELU MLP, final layer norm and an untied
// output projection. Parameters live in one flat vector so the optimizer and
// checkpoints can treat them uniformly. Scalar is float for training and
// double for gradient checks.
template <typename Scalar>
class Transformer {
 public:
  explicit Transformer(const ModelConfig& config);  // seeded init

  const ModelConfig& config() const { return config_; }
  ParamVector<Scalar>& params() { return params_; }
  const ParamVector<Scalar>& params() const { return params_; }

  // Logits for every position, ids.size() x vocab. Throws on overlength
  // input or out-of-range ids.
  RowMatrix<Scalar> forward(std::span<const int> ids) const;

  // Mean next-token cross-entropy over masked positions (nats). A sequence
  // with an empty mask has loss 0.
  double loss(const TokenSequence& seq) const;

  // Adds d(loss_sum * weight)/d(params) into `grad` and returns the summed
  // cross-entropy and the number of predicted positions.
  struct LossSum {
    double sum = 0.0;
    int count = 0;
  };
  LossSum accumulate_gradient(const TokenSequence& seq, Scalar weight,
                              ParamVector<Scalar>& grad) const;

  // Convenience: mean loss and its gradient for one sequence.
  double loss_and_grad(const TokenSequence& seq,
                       ParamVector<Scalar>& grad) const;

 private:
  template <typename S>
  friend class Decoder;

  ModelConfig config_;
  std::vector<TensorSpec> layout_;
  ParamVector<Scalar> params_;
};

// Incremental decoding with a key/value cache; each push returns the logits
// for the next position and matches forward() row for row.
template <typename Scalar>
class Decoder {
 public:
  explicit Decoder(const Transformer<Scalar>& model);

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> push(int id);
  int length() const { return length_; }

 private:
  const Transformer<Scalar>& model_;
  int length_ = 0;
  std::vector<RowMatrix<Scalar>> keys_;    // per layer, context x width
  std::vector<RowMatrix<Scalar>> values_;  // per layer, context x width
};

struct SampleOptions {
  // <= 0 selects greedy argmax decoding.
  double temperature = 1.0;
  std::uint64_t seed = 0;
};

// Feeds the conditioning prefix (ending in SEP) and samples `count` video
// ids, masking every id outside the video range. Returns video token
// indices (0-based within the video codebook).
template <typename Scalar>
std::vector<int> sample_video_tokens(const Transformer<Scalar>& model,
                                     std::span<const int> prefix, int count,
                                     const Vocabulary& vocab,
                                     const SampleOptions& options);

// Full grid: slice 0 is copied from `first_frame`, the rest is sampled.
template <typename Scalar>
VideoTokenGrid sample_video(const Transformer<Scalar>& model,
                            const CameraTokens& camera,
                            std::span<const int> first_frame,
                            const VideoGridShape& shape,
                            const Vocabulary& vocab,
                            const SampleOptions& options);

extern template class Transformer<float>;
extern template class Transformer<double>;
extern template class Decoder<float>;
extern template class Decoder<double>;

}  // namespace camvid
