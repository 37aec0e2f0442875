#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fluidctl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

enum class Activation { Identity, Sigmoid, Relu };

struct Layer {
  Matrix w;  // out x in
  Vector b;
  Activation act = Activation::Identity;
};

/// Dense network, f64, samples as matrix columns.
class Mlp {
 public:
  std::vector<Layer> layers;

  static Mlp make(const std::vector<int>& sizes,
                  const std::vector<Activation>& acts, Rng& rng);

  int input_size() const { return static_cast<int>(layers.front().w.cols()); }
  int output_size() const { return static_cast<int>(layers.back().w.rows()); }

  Vector forward(const Vector& x) const;
  Matrix forward_batch(const Matrix& x) const;

  struct Cache {
    std::vector<Matrix> post;  // post[0] = input, post[i] = layer i output
    std::vector<Matrix> pre;   // pre-activation per layer
  };
  struct Grads {
    std::vector<Matrix> w;
    std::vector<Vector> b;

    void init_like(const Mlp& net);
    void zero();
    void add_scaled(const Grads& other, double scale);
  };

  Matrix forward_cached(const Matrix& x, Cache& cache) const;
  /// Accumulates parameter gradients into g, returns gradient w.r.t. input.
  Matrix backward(const Cache& cache, const Matrix& upstream, Grads& g) const;

  std::size_t param_count() const;

  void to_json(std::string& out) const;
  static Mlp from_json(const std::string& text);
};

/// Single-sample softmax attention over other-agent embeddings.
/// context = concat over heads of sum_k softmax(q.k_k / sqrt(d)) v_k.
class AttentionBlock {
 public:
  struct Head {
    Matrix wq;  // d_attn x d_embed
    Matrix wk;
    Matrix wv;
  };
  std::vector<Head> heads;

  static AttentionBlock make(int n_heads, int d_embed, int d_attn, Rng& rng);

  int context_size() const;

  struct Result {
    Vector context;
    std::vector<Vector> weights;  // per head, per other agent, sums to 1
  };
  Result forward(const Vector& query_src,
                 const std::vector<Vector>& others) const;

  struct Grads {
    std::vector<Head> heads;

    void init_like(const AttentionBlock& block);
    void zero();
    void add_scaled(const Grads& other, double scale);
  };
  struct Backprop {
    Vector d_query_src;
    std::vector<Vector> d_others;
  };
  /// Gradient of a scalar loss through forward(); upstream is d loss /
  /// d context.
  Backprop backward(const Vector& query_src, const std::vector<Vector>& others,
                    const Vector& upstream, Grads& g) const;

  Vector flatten() const;
  void set_flat(const Vector& flat);
  static Vector flatten_grads(const Grads& g);

  void to_json(std::string& out) const;
  static AttentionBlock from_json(const std::string& text);
};

Vector softmax(const Vector& logits);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam state mirroring an Mlp's parameters.
struct AdamState {
  std::vector<Matrix> mw, vw;
  std::vector<Vector> mb, vb;
  std::int64_t step_count = 0;

  void init_like(const Mlp& net);
};

void adam_step(Mlp& net, const Mlp::Grads& grads, AdamState& state,
               const AdamConfig& cfg);

/// Adam over a flat parameter vector (used for the attention block and in
/// tests).
struct AdamFlat {
  Vector m, v;
  std::int64_t step_count = 0;

  void init(Eigen::Index n);
  void update(Eigen::Ref<Vector> params, const Vector& grads,
              const AdamConfig& cfg);
};

}  // namespace fluidctl
