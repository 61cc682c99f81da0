#include "camvid/transformer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "camvid/rng.hpp"

namespace camvid {

void ModelConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw std::invalid_argument("model." + key + ": " + why);
  };
  if (vocab < 1) fail("vocab", "must be positive");
  if (context < 1) fail("context", "must be positive");
  if (width < 1) fail("width", "must be positive");
  if (layers < 1) fail("layers", "must be positive");
  if (heads < 1) fail("heads", "must be positive");
  if (width % heads != 0) fail("heads", "must divide model.width");
  if (ff < 1) fail("ff", "must be positive");
}

std::size_t TensorSpec::size() const {
  std::size_t n = 1;
  for (int d : dims) n *= std::size_t(d);
  return n;
}

namespace {

// Tensor order inside one block; the flat layout is
// [tok_emb, pos_emb, block 0 (12 tensors), ..., final_ln (2), head (2)].
enum BlockTensor {
  kLn1Gain,
  kLn1Bias,
  kQkvWeight,
  kQkvBias,
  kAttnOutWeight,
  kAttnOutBias,
  kLn2Gain,
  kLn2Bias,
  kMlpInWeight,
  kMlpInBias,
  kMlpOutWeight,
  kMlpOutBias,
  kBlockTensors,
};

constexpr int kTokEmb = 0;
constexpr int kPosEmb = 1;
constexpr double kLayerNormEps = 1e-5;

int block_index(int layer, int t) { return 2 + kBlockTensors * layer + t; }
int final_index(const ModelConfig& c, int t) {
  return 2 + kBlockTensors * c.layers + t;  // 0 gain, 1 bias, 2 head w, 3 b
}

}  // namespace

std::vector<TensorSpec> parameter_layout(const ModelConfig& c) {
  c.validate();
  std::vector<TensorSpec> out;
  std::size_t offset = 0;
  auto add = [&](std::string name, std::vector<int> dims) {
    TensorSpec t{std::move(name), std::move(dims), offset};
    offset += t.size();
    out.push_back(std::move(t));
  };
  const int w = c.width;
  add("tok_emb", {c.vocab, w});
  add("pos_emb", {c.context, w});
  for (int l = 0; l < c.layers; ++l) {
    const std::string p = "block" + std::to_string(l) + ".";
    add(p + "ln1.gain", {w});
    add(p + "ln1.bias", {w});
    add(p + "attn.qkv.weight", {w, 3 * w});
    add(p + "attn.qkv.bias", {3 * w});
    add(p + "attn.out.weight", {w, w});
    add(p + "attn.out.bias", {w});
    add(p + "ln2.gain", {w});
    add(p + "ln2.bias", {w});
    add(p + "mlp.in.weight", {w, c.ff});
    add(p + "mlp.in.bias", {c.ff});
    add(p + "mlp.out.weight", {c.ff, w});
    add(p + "mlp.out.bias", {w});
  }
  add("final_ln.gain", {w});
  add("final_ln.bias", {w});
  add("head.weight", {w, c.vocab});
  add("head.bias", {c.vocab});
  return out;
}

std::size_t parameter_count(const ModelConfig& config) {
  const auto layout = parameter_layout(config);
  return layout.back().offset + layout.back().size();
}

namespace {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

// Read-only and writable views into a flat parameter buffer.
template <typename Scalar, typename Ptr>
struct Views {
  using Mat = std::conditional_t<
      std::is_const_v<std::remove_pointer_t<Ptr>>,
      Eigen::Map<const RowMatrix<Scalar>>, Eigen::Map<RowMatrix<Scalar>>>;
  using V = std::conditional_t<std::is_const_v<std::remove_pointer_t<Ptr>>,
                               Eigen::Map<const RowVec<Scalar>>,
                               Eigen::Map<RowVec<Scalar>>>;

  const std::vector<TensorSpec>& layout;
  Ptr base;

  Mat mat(int i) const {
    const TensorSpec& t = layout[i];
    return Mat(base + t.offset, t.dims[0], t.dims[1]);
  }
  V vec(int i) const {
    const TensorSpec& t = layout[i];
    return V(base + t.offset, t.dims[0]);
  }
};

template <typename Scalar>
Views<Scalar, const Scalar*> views(const std::vector<TensorSpec>& layout,
                                   const ParamVector<Scalar>& p) {
  return {layout, p.data()};
}

template <typename Scalar>
Views<Scalar, Scalar*> views(const std::vector<TensorSpec>& layout,
                             ParamVector<Scalar>& p) {
  return {layout, p.data()};
}

template <typename Scalar>
struct NormCache {
  RowMatrix<Scalar> xhat;
  Vec<Scalar> rstd;
};

template <typename Scalar, typename G, typename B>
RowMatrix<Scalar> layer_norm(const RowMatrix<Scalar>& x, const G& gain,
                             const B& bias, NormCache<Scalar>& cache) {
  const Eigen::Index n = x.rows();
  const Eigen::Index w = x.cols();
  cache.xhat.resize(n, w);
  cache.rstd.resize(n);
  RowMatrix<Scalar> y(n, w);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar mean = x.row(i).mean();
    const Scalar var = (x.row(i).array() - mean).square().mean();
    const Scalar rstd = Scalar(1) / std::sqrt(var + Scalar(kLayerNormEps));
    cache.rstd(i) = rstd;
    cache.xhat.row(i) = (x.row(i).array() - mean) * rstd;
    y.row(i) = cache.xhat.row(i).cwiseProduct(gain) + bias;
  }
  return y;
}

// Backward of y = xhat * gain + bias; accumulates parameter gradients and
// returns dx.
template <typename Scalar, typename G, typename DG, typename DB>
RowMatrix<Scalar> layer_norm_backward(const RowMatrix<Scalar>& dy,
                                      const NormCache<Scalar>& cache,
                                      const G& gain, DG&& dgain, DB&& dbias) {
  const Eigen::Index n = dy.rows();
  RowMatrix<Scalar> dx(n, dy.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    dgain += dy.row(i).cwiseProduct(cache.xhat.row(i));
    dbias += dy.row(i);
    const RowVec<Scalar> dxhat = dy.row(i).cwiseProduct(gain);
    const Scalar m1 = dxhat.mean();
    const Scalar m2 = dxhat.cwiseProduct(cache.xhat.row(i)).mean();
    dx.row(i) = cache.rstd(i) *
                (dxhat.array() - m1 - cache.xhat.row(i).array() * m2).matrix();
  }
  return dx;
}

template <typename Scalar>
Scalar gelu(Scalar u) {
  const Scalar c = Scalar(0.7978845608028654);  // sqrt(2 / pi)
  return Scalar(0.5) * u *
         (Scalar(1) + std::tanh(c * (u + Scalar(0.044715) * u * u * u)));
}

template <typename Scalar>
Scalar gelu_grad(Scalar u) {
  const Scalar c = Scalar(0.7978845608028654);
  const Scalar t = std::tanh(c * (u + Scalar(0.044715) * u * u * u));
  return Scalar(0.5) * (Scalar(1) + t) +
         Scalar(0.5) * u * (Scalar(1) - t * t) * c *
             (Scalar(1) + Scalar(3 * 0.044715) * u * u);
}

template <typename Scalar>
struct BlockCache {
  NormCache<Scalar> ln1;
  RowMatrix<Scalar> a;    // ln1 output
  RowMatrix<Scalar> qkv;  // n x 3w
  std::vector<RowMatrix<Scalar>> probs;  // per head, n x n
  RowMatrix<Scalar> att;  // n x w, heads concatenated
  NormCache<Scalar> ln2;
  RowMatrix<Scalar> b;  // ln2 output
  RowMatrix<Scalar> u;  // pre-activation, n x ff
  RowMatrix<Scalar> g;  // gelu(u)
};

template <typename Scalar>
struct ForwardCache {
  std::vector<BlockCache<Scalar>> blocks;
  NormCache<Scalar> final_ln;
  RowMatrix<Scalar> f;  // final normalised hidden state, n x w
};

void check_ids(std::span<const int> ids, const ModelConfig& c) {
  if (ids.empty()) throw std::invalid_argument("transformer: empty input");
  if (static_cast<int>(ids.size()) > c.context) {
    throw std::invalid_argument(
        "transformer: sequence length " + std::to_string(ids.size()) +
        " exceeds context " + std::to_string(c.context));
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= c.vocab) {
      throw std::invalid_argument("transformer: id " + std::to_string(ids[i]) +
                                  " at position " + std::to_string(i) +
                                  " is outside the vocabulary");
    }
  }
}

template <typename Scalar>
void run_forward(const ModelConfig& c, const std::vector<TensorSpec>& layout,
                 const ParamVector<Scalar>& params, std::span<const int> ids,
                 ForwardCache<Scalar>& cache) {
  check_ids(ids, c);
  const auto p = views(layout, params);
  const int n = static_cast<int>(ids.size());
  const int w = c.width;
  const int d = c.head_dim();
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(d));

  RowMatrix<Scalar> x(n, w);
  const auto tok = p.mat(kTokEmb);
  const auto pos = p.mat(kPosEmb);
  for (int i = 0; i < n; ++i) x.row(i) = tok.row(ids[i]) + pos.row(i);

  cache.blocks.resize(c.layers);
  for (int l = 0; l < c.layers; ++l) {
    BlockCache<Scalar>& bc = cache.blocks[l];
    bc.a = layer_norm(x, p.vec(block_index(l, kLn1Gain)),
                      p.vec(block_index(l, kLn1Bias)), bc.ln1);
    bc.qkv = bc.a * p.mat(block_index(l, kQkvWeight));
    bc.qkv.rowwise() += p.vec(block_index(l, kQkvBias));
    bc.att.resize(n, w);
    bc.probs.resize(c.heads);
    for (int h = 0; h < c.heads; ++h) {
      const auto q = bc.qkv.middleCols(h * d, d);
      const auto k = bc.qkv.middleCols(w + h * d, d);
      const auto v = bc.qkv.middleCols(2 * w + h * d, d);
      RowMatrix<Scalar>& pr = bc.probs[h];
      pr.noalias() = (q * k.transpose()) * scale;
      for (int i = 0; i < n; ++i) {
        const Scalar mx = pr.row(i).head(i + 1).maxCoeff();
        Scalar sum = 0;
        for (int j = 0; j <= i; ++j) {
          pr(i, j) = std::exp(pr(i, j) - mx);
          sum += pr(i, j);
        }
        pr.row(i).head(i + 1) /= sum;
        pr.row(i).tail(n - i - 1).setZero();
      }
      bc.att.middleCols(h * d, d).noalias() = pr * v;
    }
    RowMatrix<Scalar> proj = bc.att * p.mat(block_index(l, kAttnOutWeight));
    proj.rowwise() += p.vec(block_index(l, kAttnOutBias));
    x += proj;

    bc.b = layer_norm(x, p.vec(block_index(l, kLn2Gain)),
                      p.vec(block_index(l, kLn2Bias)), bc.ln2);
    bc.u = bc.b * p.mat(block_index(l, kMlpInWeight));
    bc.u.rowwise() += p.vec(block_index(l, kMlpInBias));
    bc.g = bc.u.unaryExpr([](Scalar s) { return gelu(s); });
    RowMatrix<Scalar> m = bc.g * p.mat(block_index(l, kMlpOutWeight));
    m.rowwise() += p.vec(block_index(l, kMlpOutBias));
    x += m;
  }
  cache.f = layer_norm(x, p.vec(final_index(c, 0)), p.vec(final_index(c, 1)),
                       cache.final_ln);
}

// Backward from dL/df (n x w) to parameter gradients.
template <typename Scalar>
void run_backward(const ModelConfig& c, const std::vector<TensorSpec>& layout,
                  const ParamVector<Scalar>& params, std::span<const int> ids,
                  const ForwardCache<Scalar>& cache,
                  const RowMatrix<Scalar>& df, ParamVector<Scalar>& grad) {
  const auto p = views(layout, params);
  auto gr = views(layout, grad);
  const int n = static_cast<int>(ids.size());
  const int w = c.width;
  const int d = c.head_dim();
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(d));

  RowMatrix<Scalar> dx = layer_norm_backward(
      df, cache.final_ln, p.vec(final_index(c, 0)),
      gr.vec(final_index(c, 0)), gr.vec(final_index(c, 1)));

  for (int l = c.layers - 1; l >= 0; --l) {
    const BlockCache<Scalar>& bc = cache.blocks[l];
    // MLP.
    gr.mat(block_index(l, kMlpOutWeight)).noalias() += bc.g.transpose() * dx;
    gr.vec(block_index(l, kMlpOutBias)) += dx.colwise().sum();
    RowMatrix<Scalar> du = dx * p.mat(block_index(l, kMlpOutWeight)).transpose();
    du.array() *= bc.u.unaryExpr([](Scalar s) { return gelu_grad(s); }).array();
    gr.mat(block_index(l, kMlpInWeight)).noalias() += bc.b.transpose() * du;
    gr.vec(block_index(l, kMlpInBias)) += du.colwise().sum();
    const RowMatrix<Scalar> db =
        du * p.mat(block_index(l, kMlpInWeight)).transpose();
    dx += layer_norm_backward(db, bc.ln2, p.vec(block_index(l, kLn2Gain)),
                              gr.vec(block_index(l, kLn2Gain)),
                              gr.vec(block_index(l, kLn2Bias)));

    // Attention.
    gr.mat(block_index(l, kAttnOutWeight)).noalias() +=
        bc.att.transpose() * dx;
    gr.vec(block_index(l, kAttnOutBias)) += dx.colwise().sum();
    const RowMatrix<Scalar> datt =
        dx * p.mat(block_index(l, kAttnOutWeight)).transpose();
    RowMatrix<Scalar> dqkv(n, 3 * w);
    for (int h = 0; h < c.heads; ++h) {
      const auto q = bc.qkv.middleCols(h * d, d);
      const auto k = bc.qkv.middleCols(w + h * d, d);
      const auto v = bc.qkv.middleCols(2 * w + h * d, d);
      const RowMatrix<Scalar>& pr = bc.probs[h];
      const auto dout = datt.middleCols(h * d, d);
      dqkv.middleCols(2 * w + h * d, d).noalias() = pr.transpose() * dout;
      RowMatrix<Scalar> ds = dout * v.transpose();  // dP
      for (int i = 0; i < n; ++i) {
        const Scalar dot = ds.row(i).head(i + 1).dot(pr.row(i).head(i + 1));
        for (int j = 0; j <= i; ++j) ds(i, j) = pr(i, j) * (ds(i, j) - dot);
        ds.row(i).tail(n - i - 1).setZero();
      }
      ds *= scale;
      dqkv.middleCols(h * d, d).noalias() = ds * k;
      dqkv.middleCols(w + h * d, d).noalias() = ds.transpose() * q;
    }
    gr.mat(block_index(l, kQkvWeight)).noalias() += bc.a.transpose() * dqkv;
    gr.vec(block_index(l, kQkvBias)) += dqkv.colwise().sum();
    const RowMatrix<Scalar> da =
        dqkv * p.mat(block_index(l, kQkvWeight)).transpose();
    dx += layer_norm_backward(da, bc.ln1, p.vec(block_index(l, kLn1Gain)),
                              gr.vec(block_index(l, kLn1Gain)),
                              gr.vec(block_index(l, kLn1Bias)));
  }

  auto dtok = gr.mat(kTokEmb);
  auto dpos = gr.mat(kPosEmb);
  for (int i = 0; i < n; ++i) {
    dtok.row(ids[i]) += dx.row(i);
    dpos.row(i) += dx.row(i);
  }
}

}  // namespace

template <typename Scalar>
Transformer<Scalar>::Transformer(const ModelConfig& config)
    : config_(config), layout_(parameter_layout(config)) {
  params_.assign(layout_.back().offset + layout_.back().size(), Scalar(0));
  Rng rng(derive_seed(config.seed, "transformer-init"));
  const double std_in = 0.02;
  const double std_res = 0.02 / std::sqrt(2.0 * config.layers);
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    const TensorSpec& t = layout_[i];
    Scalar* dst = params_.data() + t.offset;
    const bool gain = t.name.ends_with(".gain");
    const bool bias = t.name.ends_with(".bias");
    if (gain) {
      std::fill(dst, dst + t.size(), Scalar(1));
    } else if (!bias) {
      const bool residual = t.name.ends_with("attn.out.weight") ||
                            t.name.ends_with("mlp.out.weight");
      const double sd = residual ? std_res : std_in;
      for (std::size_t j = 0; j < t.size(); ++j) {
        dst[j] = static_cast<Scalar>(sd * rng.normal());
      }
    }
  }
}

template <typename Scalar>
RowMatrix<Scalar> Transformer<Scalar>::forward(std::span<const int> ids) const {
  ForwardCache<Scalar> cache;
  run_forward(config_, layout_, params_, ids, cache);
  const auto p = views(layout_, params_);
  RowMatrix<Scalar> logits = cache.f * p.mat(final_index(config_, 2));
  logits.rowwise() += p.vec(final_index(config_, 3));
  return logits;
}

template <typename Scalar>
typename Transformer<Scalar>::LossSum
Transformer<Scalar>::accumulate_gradient(const TokenSequence& seq,
                                         Scalar weight,
                                         ParamVector<Scalar>& grad) const {
  if (seq.loss_mask.size() != seq.ids.size()) {
    throw std::invalid_argument("loss mask and ids differ in length");
  }
  const bool want_grad = !grad.empty();
  if (want_grad && grad.size() != params_.size()) {
    throw std::invalid_argument("gradient buffer has the wrong size");
  }
  // Position i predicts ids[i + 1].
  std::vector<int> rows;
  for (int i = 0; i + 1 < seq.size(); ++i) {
    if (seq.loss_mask[i + 1]) rows.push_back(i);
  }
  LossSum out;
  out.count = static_cast<int>(rows.size());
  if (rows.empty()) return out;

  ForwardCache<Scalar> cache;
  run_forward(config_, layout_, params_, std::span<const int>(seq.ids), cache);
  const auto p = views(layout_, params_);
  const int r = out.count;
  RowMatrix<Scalar> fr(r, config_.width);
  for (int k = 0; k < r; ++k) fr.row(k) = cache.f.row(rows[k]);
  RowMatrix<Scalar> logits = fr * p.mat(final_index(config_, 2));
  logits.rowwise() += p.vec(final_index(config_, 3));

  for (int k = 0; k < r; ++k) {
    auto z = logits.row(k);
    const Scalar mx = z.maxCoeff();
    z.array() = (z.array() - mx).exp();
    const Scalar sum = z.sum();
    const int target = seq.ids[rows[k] + 1];
    const double pt = double(z(target)) / double(sum);
    out.sum += -std::log(std::max(pt, std::numeric_limits<double>::min()));
    z /= sum;              // softmax
    z(target) -= Scalar(1);  // d CE / d logits
    z *= weight;
  }
  if (!std::isfinite(out.sum)) {
    throw std::runtime_error("transformer: non-finite loss");
  }
  if (!want_grad) return out;

  auto gr = views(layout_, grad);
  gr.mat(final_index(config_, 2)).noalias() += fr.transpose() * logits;
  gr.vec(final_index(config_, 3)) += logits.colwise().sum();
  RowMatrix<Scalar> df = RowMatrix<Scalar>::Zero(seq.size(), config_.width);
  const RowMatrix<Scalar> dfr =
      logits * p.mat(final_index(config_, 2)).transpose();
  for (int k = 0; k < r; ++k) df.row(rows[k]) = dfr.row(k);
  run_backward(config_, layout_, params_, std::span<const int>(seq.ids), cache,
               df, grad);
  return out;
}

template <typename Scalar>
double Transformer<Scalar>::loss(const TokenSequence& seq) const {
  ParamVector<Scalar> none;
  const LossSum s = accumulate_gradient(seq, Scalar(0), none);
  return s.count ? s.sum / s.count : 0.0;
}

template <typename Scalar>
double Transformer<Scalar>::loss_and_grad(const TokenSequence& seq,
                                          ParamVector<Scalar>& grad) const {
  grad.assign(params_.size(), Scalar(0));
  int count = 0;
  for (int i = 0; i + 1 < seq.size(); ++i) count += seq.loss_mask[i + 1] != 0;
  if (count == 0) return 0.0;
  const LossSum s = accumulate_gradient(seq, Scalar(1) / Scalar(count), grad);
  return s.sum / s.count;
}

template <typename Scalar>
Decoder<Scalar>::Decoder(const Transformer<Scalar>& model) : model_(model) {
  const ModelConfig& c = model.config();
  keys_.assign(c.layers, RowMatrix<Scalar>(c.context, c.width));
  values_.assign(c.layers, RowMatrix<Scalar>(c.context, c.width));
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> Decoder<Scalar>::push(int id) {
  const ModelConfig& c = model_.config_;
  if (length_ >= c.context) {
    throw std::invalid_argument("decoder: context length exceeded");
  }
  if (id < 0 || id >= c.vocab) {
    throw std::invalid_argument("decoder: id " + std::to_string(id) +
                                " is outside the vocabulary");
  }
  const auto p = views(model_.layout_, model_.params_);
  const int w = c.width;
  const int d = c.head_dim();
  const int t = length_;
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(d));

  RowMatrix<Scalar> x = p.mat(kTokEmb).row(id) + p.mat(kPosEmb).row(t);
  NormCache<Scalar> nc;
  for (int l = 0; l < c.layers; ++l) {
    const RowMatrix<Scalar> a = layer_norm(
        x, p.vec(block_index(l, kLn1Gain)), p.vec(block_index(l, kLn1Bias)), nc);
    RowMatrix<Scalar> qkv = a * p.mat(block_index(l, kQkvWeight));
    qkv += p.vec(block_index(l, kQkvBias));
    keys_[l].row(t) = qkv.middleCols(w, w);
    values_[l].row(t) = qkv.middleCols(2 * w, w);
    RowMatrix<Scalar> att(1, w);
    for (int h = 0; h < c.heads; ++h) {
      const auto q = qkv.middleCols(h * d, d);
      const auto k = keys_[l].block(0, h * d, t + 1, d);
      const auto v = values_[l].block(0, h * d, t + 1, d);
      RowVec<Scalar> s = (q * k.transpose()) * scale;
      const Scalar mx = s.maxCoeff();
      s = (s.array() - mx).exp();
      s /= s.sum();
      att.middleCols(h * d, d).noalias() = s * v;
    }
    x += att * p.mat(block_index(l, kAttnOutWeight));
    x += p.vec(block_index(l, kAttnOutBias));
    const RowMatrix<Scalar> b = layer_norm(
        x, p.vec(block_index(l, kLn2Gain)), p.vec(block_index(l, kLn2Bias)), nc);
    RowMatrix<Scalar> u = b * p.mat(block_index(l, kMlpInWeight));
    u += p.vec(block_index(l, kMlpInBias));
    u = u.unaryExpr([](Scalar s) { return gelu(s); });
    x += u * p.mat(block_index(l, kMlpOutWeight));
    x += p.vec(block_index(l, kMlpOutBias));
  }
  const RowMatrix<Scalar> f = layer_norm(x, p.vec(final_index(c, 0)),
                                         p.vec(final_index(c, 1)), nc);
  RowVec<Scalar> logits = f * p.mat(final_index(c, 2));
  logits += p.vec(final_index(c, 3));
  ++length_;
  return logits.transpose();
}

template <typename Scalar>
std::vector<int> sample_video_tokens(const Transformer<Scalar>& model,
                                     std::span<const int> prefix, int count,
                                     const Vocabulary& vocab,
                                     const SampleOptions& options) {
  if (prefix.empty()) throw std::invalid_argument("sample: empty prefix");
  if (vocab.size() != model.config().vocab) {
    throw std::invalid_argument("sample: vocabulary does not match the model");
  }
  if (static_cast<int>(prefix.size()) + count > model.config().context) {
    throw std::invalid_argument("sample: prefix plus video exceeds context");
  }
  Decoder<Scalar> dec(model);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> logits;
  for (int id : prefix) logits = dec.push(id);

  Rng rng(options.seed);
  const int lo = vocab.video_begin();
  const int v = vocab.video;
  std::vector<int> out;
  out.reserve(count);
  std::vector<double> prob(v);
  for (int n = 0; n < count; ++n) {
    // Only video ids are eligible; everything else is effectively -inf.
    int pick = 0;
    if (options.temperature <= 0.0) {
      for (int k = 1; k < v; ++k) {
        if (logits(lo + k) > logits(lo + pick)) pick = k;
      }
    } else {
      double mx = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < v; ++k) mx = std::max(mx, double(logits(lo + k)));
      double sum = 0.0;
      for (int k = 0; k < v; ++k) {
        prob[k] = std::exp((double(logits(lo + k)) - mx) / options.temperature);
        sum += prob[k];
      }
      double r = rng.uniform() * sum;
      pick = v - 1;
      for (int k = 0; k < v; ++k) {
        r -= prob[k];
        if (r < 0.0) {
          pick = k;
          break;
        }
      }
    }
    out.push_back(pick);
    if (n + 1 < count) logits = dec.push(vocab.video_id(pick));
  }
  return out;
}

template <typename Scalar>
VideoTokenGrid sample_video(const Transformer<Scalar>& model,
                            const CameraTokens& camera,
                            std::span<const int> first_frame,
                            const VideoGridShape& shape,
                            const Vocabulary& vocab,
                            const SampleOptions& options) {
  if (static_cast<int>(first_frame.size()) != shape.slice()) {
    throw std::invalid_argument("sample_video: first-frame token count " +
                                std::to_string(first_frame.size()) +
                                " does not match the grid slice " +
                                std::to_string(shape.slice()));
  }
  const std::vector<int> prefix =
      conditioning_prefix(camera, first_frame, vocab);
  const int rest = (shape.t - 1) * shape.slice();
  VideoTokenGrid grid;
  grid.shape = shape;
  grid.tokens.assign(first_frame.begin(), first_frame.end());
  const std::vector<int> sampled =
      sample_video_tokens(model, prefix, rest, vocab, options);
  grid.tokens.insert(grid.tokens.end(), sampled.begin(), sampled.end());
  return grid;
}

template class Transformer<float>;
template class Transformer<double>;
template class Decoder<float>;
template class Decoder<double>;

template std::vector<int> sample_video_tokens<float>(
    const Transformer<float>&, std::span<const int>, int, const Vocabulary&,
    const SampleOptions&);
template std::vector<int> sample_video_tokens<double>(
    const Transformer<double>&, std::span<const int>, int, const Vocabulary&,
    const SampleOptions&);
template VideoTokenGrid sample_video<float>(const Transformer<float>&,
                                            const CameraTokens&,
                                            std::span<const int>,
                                            const VideoGridShape&,
                                            const Vocabulary&,
                                            const SampleOptions&);
template VideoTokenGrid sample_video<double>(const Transformer<double>&,
                                             const CameraTokens&,
                                             std::span<const int>,
                                             const VideoGridShape&,
                                             const Vocabulary&,
                                             const SampleOptions&);

}  // namespace camvid
