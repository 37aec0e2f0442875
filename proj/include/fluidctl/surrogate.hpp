#pragma once

#include <string>
#include <vector>

#include "fluidctl/agents.hpp"
#include "fluidctl/neural.hpp"

namespace fluidctl {

/// Control vectors and matching steady-state outputs (valve flows and pump
/// powers, one column per agent in agent order).
struct Dataset {
  Matrix inputs;   // N x A
  Matrix outputs;  // N x A
  std::vector<int> train_rows;
  std::vector<int> val_rows;

  void write_csv(const std::string& path,
                 const std::vector<Agent>& agents) const;
};

struct SampleOptions {
  double pump_off_probability = 0.1;
  int resample_budget_factor = 10;  // max solver failures per requested row
};

/// Uniform random admissible controls, solved on the plant; non-convergent
/// samples are discarded and resampled. 80/20 split, seed-deterministic.
Dataset sample_dataset(const Network& net, const std::vector<Agent>& agents,
                       int n, std::uint64_t seed,
                       const SampleOptions& opts = {});

struct FitReport {
  double r2_global = 0.0;
  std::vector<double> r2_per_output;
  double validation_rmse = 0.0;
  int epochs = 0;
};

struct FitOptions {
  std::vector<int> hidden = {64, 64};
  int max_epochs = 400;
  int patience = 20;
  int batch_size = 128;
  double lr = 1e-3;
  std::uint64_t seed = 1;
};

class Surrogate {
 public:
  Mlp mlp;
  Vector in_mean, in_std;
  Vector out_mean, out_std;
  FitReport report;
  // Physical clamp bounds per output column.
  Vector out_lo, out_hi;

  Vector predict(const ControlVector& u) const;
  /// Prediction plus gradient of each output w.r.t. each input (A x A
  /// Jacobian), for gradient-based optimization.
  Vector predict_with_jacobian(const ControlVector& u, Matrix& jac) const;

  void save(const std::string& path) const;
  static Surrogate load(const std::string& path);
};

Surrogate fit(const Dataset& data, const Network& net,
              const std::vector<Agent>& agents, const FitOptions& opts = {});

/// R-squared via 1 - SSE/SST; `r_squared_corr` is the independent
/// correlation-based route used to cross-check it.
double r_squared(const Vector& predicted, const Vector& actual);
double r_squared_corr(const Vector& predicted, const Vector& actual);

}  // namespace fluidctl
