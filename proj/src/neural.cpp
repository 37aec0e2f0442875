#include "fluidctl/neural.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace fluidctl {

namespace {

using nlohmann::json;

Matrix apply_activation(Activation act, const Matrix& z) {
  switch (act) {
    case Activation::Identity:
      return z;
    case Activation::Sigmoid:
      return (1.0 + (-z.array()).exp()).inverse().matrix();
    case Activation::Relu:
      return z.array().max(0.0).matrix();
  }
  return z;
}

// Derivative expressed through the activation output.
Matrix activation_deriv(Activation act, const Matrix& out) {
  switch (act) {
    case Activation::Identity:
      return Matrix::Ones(out.rows(), out.cols());
    case Activation::Sigmoid:
      return (out.array() * (1.0 - out.array())).matrix();
    case Activation::Relu:
      return (out.array() > 0.0).cast<double>().matrix();
  }
  return Matrix::Ones(out.rows(), out.cols());
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  return m;
}

const char* act_name(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Relu: return "relu";
  }
  return "identity";
}

Activation act_from_name(const std::string& s) {
  if (s == "identity") return Activation::Identity;
  if (s == "sigmoid") return Activation::Sigmoid;
  if (s == "relu") return Activation::Relu;
  throw std::invalid_argument("unknown activation: " + s);
}

Matrix glorot(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = dist(rng);
  return m;
}

}  // namespace

Mlp Mlp::make(const std::vector<int>& sizes,
              const std::vector<Activation>& acts, Rng& rng) {
  if (sizes.size() < 2 || acts.size() != sizes.size() - 1)
    throw std::invalid_argument("mlp: sizes/activations mismatch");
  Mlp net;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    Layer layer;
    layer.w = glorot(sizes[i + 1], sizes[i], rng);
    layer.b = Vector::Zero(sizes[i + 1]);
    layer.act = acts[i];
    net.layers.push_back(std::move(layer));
  }
  return net;
}

Vector Mlp::forward(const Vector& x) const { return forward_batch(x); }

Matrix Mlp::forward_batch(const Matrix& x) const {
  if (x.rows() != layers.front().w.cols())
    throw std::invalid_argument("mlp: input size mismatch");
  Matrix h = x;
  for (const auto& layer : layers) {
    Matrix z = (layer.w * h).colwise() + layer.b;
    h = apply_activation(layer.act, z);
  }
  return h;
}

Matrix Mlp::forward_cached(const Matrix& x, Cache& cache) const {
  if (x.rows() != layers.front().w.cols())
    throw std::invalid_argument("mlp: input size mismatch");
  cache.post.clear();
  cache.pre.clear();
  cache.post.push_back(x);
  for (const auto& layer : layers) {
    Matrix z = (layer.w * cache.post.back()).colwise() + layer.b;
    cache.pre.push_back(z);
    cache.post.push_back(apply_activation(layer.act, z));
  }
  return cache.post.back();
}

void Mlp::Grads::init_like(const Mlp& net) {
  w.clear();
  b.clear();
  for (const auto& layer : net.layers) {
    w.push_back(Matrix::Zero(layer.w.rows(), layer.w.cols()));
    b.push_back(Vector::Zero(layer.b.size()));
  }
}

void Mlp::Grads::zero() {
  for (auto& m : w) m.setZero();
  for (auto& v : b) v.setZero();
}

void Mlp::Grads::add_scaled(const Grads& other, double scale) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] += scale * other.w[i];
    b[i] += scale * other.b[i];
  }
}

Matrix Mlp::backward(const Cache& cache, const Matrix& upstream,
                     Grads& g) const {
  if (g.w.size() != layers.size()) g.init_like(*this);
  Matrix delta = upstream;
  for (int i = static_cast<int>(layers.size()) - 1; i >= 0; --i) {
    const auto& layer = layers[i];
    delta = delta.cwiseProduct(activation_deriv(layer.act, cache.post[i + 1]));
    g.w[i] += delta * cache.post[i].transpose();
    g.b[i] += delta.rowwise().sum();
    delta = (layer.w.transpose() * delta).eval();
  }
  return delta;
}

std::size_t Mlp::param_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers)
    n += static_cast<std::size_t>(layer.w.size() + layer.b.size());
  return n;
}

void Mlp::to_json(std::string& out) const {
  json j;
  j["format"] = "fluidctl-mlp-v1";
  j["layers"] = json::array();
  for (const auto& layer : layers) {
    j["layers"].push_back({{"w", matrix_to_json(layer.w)},
                           {"b", matrix_to_json(layer.b)},
                           {"act", act_name(layer.act)}});
  }
  out = j.dump();
}

Mlp Mlp::from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "fluidctl-mlp-v1")
    throw std::invalid_argument("mlp checkpoint: bad format tag");
  Mlp net;
  for (const auto& jl : j.at("layers")) {
    Layer layer;
    layer.w = matrix_from_json(jl.at("w"));
    layer.b = matrix_from_json(jl.at("b"));
    layer.act = act_from_name(jl.at("act").get<std::string>());
    net.layers.push_back(std::move(layer));
  }
  if (net.layers.empty()) throw std::invalid_argument("mlp checkpoint: empty");
  return net;
}

Vector softmax(const Vector& logits) {
  const double m = logits.maxCoeff();
  Vector e = (logits.array() - m).exp();
  return e / e.sum();
}

AttentionBlock AttentionBlock::make(int n_heads, int d_embed, int d_attn,
                                    Rng& rng) {
  AttentionBlock block;
  for (int h = 0; h < n_heads; ++h) {
    Head head;
    head.wq = glorot(d_attn, d_embed, rng);
    head.wk = glorot(d_attn, d_embed, rng);
    head.wv = glorot(d_attn, d_embed, rng);
    block.heads.push_back(std::move(head));
  }
  return block;
}

int AttentionBlock::context_size() const {
  return static_cast<int>(heads.size() * heads.front().wv.rows());
}

AttentionBlock::Result AttentionBlock::forward(
    const Vector& query_src, const std::vector<Vector>& others) const {
  if (others.empty())
    throw std::invalid_argument("attention: need at least one other agent");
  Result res;
  res.context.resize(context_size());
  const double scale = 1.0 / std::sqrt(double(heads.front().wq.rows()));
  Eigen::Index offset = 0;
  for (const auto& head : heads) {
    const Vector q = head.wq * query_src;
    Vector scores(others.size());
    for (std::size_t k = 0; k < others.size(); ++k)
      scores[k] = scale * q.dot(head.wk * others[k]);
    Vector w = softmax(scores);
    Vector ctx = Vector::Zero(head.wv.rows());
    for (std::size_t k = 0; k < others.size(); ++k)
      ctx += w[k] * (head.wv * others[k]);
    res.context.segment(offset, ctx.size()) = ctx;
    offset += ctx.size();
    res.weights.push_back(std::move(w));
  }
  return res;
}

void AttentionBlock::Grads::init_like(const AttentionBlock& block) {
  heads.clear();
  for (const auto& h : block.heads) {
    Head g;
    g.wq = Matrix::Zero(h.wq.rows(), h.wq.cols());
    g.wk = Matrix::Zero(h.wk.rows(), h.wk.cols());
    g.wv = Matrix::Zero(h.wv.rows(), h.wv.cols());
    heads.push_back(std::move(g));
  }
}

void AttentionBlock::Grads::zero() {
  for (auto& h : heads) {
    h.wq.setZero();
    h.wk.setZero();
    h.wv.setZero();
  }
}

void AttentionBlock::Grads::add_scaled(const Grads& other, double scale) {
  for (std::size_t i = 0; i < heads.size(); ++i) {
    heads[i].wq += scale * other.heads[i].wq;
    heads[i].wk += scale * other.heads[i].wk;
    heads[i].wv += scale * other.heads[i].wv;
  }
}

AttentionBlock::Backprop AttentionBlock::backward(
    const Vector& query_src, const std::vector<Vector>& others,
    const Vector& upstream, Grads& g) const {
  if (g.heads.size() != heads.size()) g.init_like(*this);
  Backprop bp;
  bp.d_query_src = Vector::Zero(query_src.size());
  bp.d_others.assign(others.size(), Vector::Zero(query_src.size()));
  const double scale = 1.0 / std::sqrt(double(heads.front().wq.rows()));
  Eigen::Index offset = 0;
  for (std::size_t hi = 0; hi < heads.size(); ++hi) {
    const auto& head = heads[hi];
    auto& gh = g.heads[hi];
    const Eigen::Index d = head.wv.rows();
    const Vector up = upstream.segment(offset, d);
    offset += d;

    const Vector q = head.wq * query_src;
    std::vector<Vector> keys(others.size()), vals(others.size());
    Vector scores(others.size());
    for (std::size_t k = 0; k < others.size(); ++k) {
      keys[k] = head.wk * others[k];
      vals[k] = head.wv * others[k];
      scores[k] = scale * q.dot(keys[k]);
    }
    const Vector w = softmax(scores);

    // d ctx / d w_k = vals[k]; softmax jacobian folds into d scores.
    Vector d_w(others.size());
    for (std::size_t k = 0; k < others.size(); ++k) d_w[k] = up.dot(vals[k]);
    const double wd = w.dot(d_w);
    Vector d_scores = (w.array() * (d_w.array() - wd)).matrix();

    Vector d_q = Vector::Zero(q.size());
    for (std::size_t k = 0; k < others.size(); ++k) {
      const double ds = scale * d_scores[k];
      d_q += ds * keys[k];
      const Vector d_k = ds * q;
      const Vector d_v = w[k] * up;
      gh.wk += d_k * others[k].transpose();
      gh.wv += d_v * others[k].transpose();
      bp.d_others[k] += head.wk.transpose() * d_k + head.wv.transpose() * d_v;
    }
    gh.wq += d_q * query_src.transpose();
    bp.d_query_src += head.wq.transpose() * d_q;
  }
  return bp;
}

Vector AttentionBlock::flatten() const {
  std::vector<double> flat;
  for (const auto& h : heads)
    for (const Matrix* m : {&h.wq, &h.wk, &h.wv})
      flat.insert(flat.end(), m->data(), m->data() + m->size());
  return Eigen::Map<const Vector>(flat.data(), flat.size());
}

void AttentionBlock::set_flat(const Vector& flat) {
  Eigen::Index pos = 0;
  for (auto& h : heads)
    for (Matrix* m : {&h.wq, &h.wk, &h.wv}) {
      std::copy(flat.data() + pos, flat.data() + pos + m->size(), m->data());
      pos += m->size();
    }
  if (pos != flat.size())
    throw std::invalid_argument("attention: flat size mismatch");
}

Vector AttentionBlock::flatten_grads(const Grads& g) {
  std::vector<double> flat;
  for (const auto& h : g.heads)
    for (const Matrix* m : {&h.wq, &h.wk, &h.wv})
      flat.insert(flat.end(), m->data(), m->data() + m->size());
  return Eigen::Map<const Vector>(flat.data(), flat.size());
}

void AttentionBlock::to_json(std::string& out) const {
  json j;
  j["format"] = "fluidctl-attention-v1";
  j["heads"] = json::array();
  for (const auto& h : heads)
    j["heads"].push_back({{"wq", matrix_to_json(h.wq)},
                          {"wk", matrix_to_json(h.wk)},
                          {"wv", matrix_to_json(h.wv)}});
  out = j.dump();
}

AttentionBlock AttentionBlock::from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "fluidctl-attention-v1")
    throw std::invalid_argument("attention checkpoint: bad format tag");
  AttentionBlock block;
  for (const auto& jh : j.at("heads")) {
    Head h;
    h.wq = matrix_from_json(jh.at("wq"));
    h.wk = matrix_from_json(jh.at("wk"));
    h.wv = matrix_from_json(jh.at("wv"));
    block.heads.push_back(std::move(h));
  }
  return block;
}

void AdamState::init_like(const Mlp& net) {
  mw.clear();
  vw.clear();
  mb.clear();
  vb.clear();
  for (const auto& layer : net.layers) {
    mw.push_back(Matrix::Zero(layer.w.rows(), layer.w.cols()));
    vw.push_back(Matrix::Zero(layer.w.rows(), layer.w.cols()));
    mb.push_back(Vector::Zero(layer.b.size()));
    vb.push_back(Vector::Zero(layer.b.size()));
  }
  step_count = 0;
}

void adam_step(Mlp& net, const Mlp::Grads& grads, AdamState& state,
               const AdamConfig& cfg) {
  if (state.mw.size() != net.layers.size()) state.init_like(net);
  ++state.step_count;
  const double bc1 = 1.0 - std::pow(cfg.beta1, double(state.step_count));
  const double bc2 = 1.0 - std::pow(cfg.beta2, double(state.step_count));
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    auto& layer = net.layers[i];
    state.mw[i] = cfg.beta1 * state.mw[i] + (1.0 - cfg.beta1) * grads.w[i];
    state.vw[i] = cfg.beta2 * state.vw[i].array().matrix() +
                  (1.0 - cfg.beta2) * grads.w[i].cwiseProduct(grads.w[i]);
    layer.w.array() -= cfg.lr * (state.mw[i].array() / bc1) /
                       ((state.vw[i].array() / bc2).sqrt() + cfg.eps);
    state.mb[i] = cfg.beta1 * state.mb[i] + (1.0 - cfg.beta1) * grads.b[i];
    state.vb[i] = cfg.beta2 * state.vb[i] +
                  (1.0 - cfg.beta2) * grads.b[i].cwiseProduct(grads.b[i]);
    layer.b.array() -= cfg.lr * (state.mb[i].array() / bc1) /
                       ((state.vb[i].array() / bc2).sqrt() + cfg.eps);
  }
}

void AdamFlat::init(Eigen::Index n) {
  m = Vector::Zero(n);
  v = Vector::Zero(n);
  step_count = 0;
}

void AdamFlat::update(Eigen::Ref<Vector> params, const Vector& grads,
                      const AdamConfig& cfg) {
  if (m.size() != params.size()) init(params.size());
  ++step_count;
  const double bc1 = 1.0 - std::pow(cfg.beta1, double(step_count));
  const double bc2 = 1.0 - std::pow(cfg.beta2, double(step_count));
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * grads;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * grads.cwiseProduct(grads);
  params.array() -=
      cfg.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.eps);
}

}  // namespace fluidctl
