#include "fluidctl/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fluidctl {

namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const json& j) {
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

}  // namespace

void Dataset::write_csv(const std::string& path,
                        const std::vector<Agent>& agents) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  for (const auto& a : agents) out << "u_" << a.name << ",";
  for (std::size_t i = 0; i < agents.size(); ++i)
    out << "y_" << agents[i].name << (i + 1 < agents.size() ? "," : "\n");
  out.precision(17);
  for (Eigen::Index r = 0; r < inputs.rows(); ++r) {
    for (Eigen::Index c = 0; c < inputs.cols(); ++c) out << inputs(r, c) << ",";
    for (Eigen::Index c = 0; c < outputs.cols(); ++c)
      out << outputs(r, c) << (c + 1 < outputs.cols() ? "," : "\n");
  }
}

Dataset sample_dataset(const Network& net, const std::vector<Agent>& agents,
                       int n, std::uint64_t seed, const SampleOptions& opts) {
  if (n < 100) throw std::invalid_argument("sample_dataset: need n >= 100");
  const int a_count = static_cast<int>(agents.size());
  Dataset data;
  data.inputs.resize(n, a_count);
  data.outputs.resize(n, a_count);
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failures = 0;
  const int failure_budget = opts.resample_budget_factor * n;
  for (int row = 0; row < n;) {
    ControlVector u(net.num_actives(), 0.0);
    for (const auto& a : agents) {
      const auto& c = net.components[a.component];
      if (a.id.kind == AgentKind::Pump) {
        if (unit(rng) < opts.pump_off_probability)
          u[a.active] = 0.0;
        else
          u[a.active] =
              c.pump.n_min + unit(rng) * (c.pump.n_max - c.pump.n_min);
      } else {
        u[a.active] =
            c.valve.v_min + unit(rng) * (c.valve.v_max - c.valve.v_min);
      }
    }
    try {
      const SystemState s = solve_steady_state(net, u);
      for (const auto& a : agents) {
        data.inputs(row, a.id.index) = u[a.active];
        data.outputs(row, a.id.index) = a.id.kind == AgentKind::Pump
                                            ? s.power[a.component]
                                            : s.flow[a.component];
      }
      ++row;
    } catch (const NonConvergence&) {
      if (++failures > failure_budget)
        throw std::runtime_error("sample_dataset: resample budget exhausted");
    }
  }
  // 80/20 split, seed-shuffled.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const int n_train = (n * 8) / 10;
  data.train_rows.assign(order.begin(), order.begin() + n_train);
  data.val_rows.assign(order.begin() + n_train, order.end());
  return data;
}

double r_squared(const Vector& predicted, const Vector& actual) {
  const double mean = actual.mean();
  const double sse = (actual - predicted).squaredNorm();
  const double sst = (actual.array() - mean).matrix().squaredNorm();
  if (sst <= 0.0) return sse <= 0.0 ? 1.0 : 0.0;
  return 1.0 - sse / sst;
}

double r_squared_corr(const Vector& predicted, const Vector& actual) {
  // Same quantity via raw moment accumulation, as an independent route.
  const double n = static_cast<double>(actual.size());
  double sy = 0.0, syy = 0.0, syhat = 0.0, syhyh = 0.0, cross = 0.0;
  for (Eigen::Index i = 0; i < actual.size(); ++i) {
    sy += actual[i];
    syy += actual[i] * actual[i];
    syhat += predicted[i];
    syhyh += predicted[i] * predicted[i];
    cross += actual[i] * predicted[i];
  }
  const double sst = syy - sy * sy / n;
  const double sse = syy - 2.0 * cross + syhyh;
  if (sst <= 0.0) return sse <= 0.0 ? 1.0 : 0.0;
  return 1.0 - sse / sst;
}

Vector Surrogate::predict(const ControlVector& u) const {
  Vector x(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) x[i] = u[i];
  x = ((x - in_mean).array() / in_std.array()).matrix();
  Vector y = mlp.forward(x);
  y = (y.array() * out_std.array() + out_mean.array()).matrix();
  return y.cwiseMax(out_lo).cwiseMin(out_hi);
}

Vector Surrogate::predict_with_jacobian(const ControlVector& u,
                                        Matrix& jac) const {
  Vector x(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) x[i] = u[i];
  x = ((x - in_mean).array() / in_std.array()).matrix();
  Mlp::Cache cache;
  Vector y_norm = mlp.forward_cached(x, cache);
  Vector y = (y_norm.array() * out_std.array() + out_mean.array()).matrix();
  const Eigen::Index a = y.size();
  jac.resize(a, a);
  Mlp::Grads scratch;
  scratch.init_like(mlp);
  for (Eigen::Index o = 0; o < a; ++o) {
    Matrix upstream = Matrix::Zero(a, 1);
    upstream(o, 0) = 1.0;
    const Matrix dx = mlp.backward(cache, upstream, scratch);
    const bool clamped = y[o] <= out_lo[o] || y[o] >= out_hi[o];
    for (Eigen::Index i = 0; i < a; ++i)
      jac(o, i) = clamped ? 0.0 : dx(i, 0) * out_std[o] / in_std[i];
  }
  return y.cwiseMax(out_lo).cwiseMin(out_hi);
}

Surrogate fit(const Dataset& data, const Network& net,
              const std::vector<Agent>& agents, const FitOptions& opts) {
  const Eigen::Index a_count = data.inputs.cols();
  Surrogate s;

  // Normalization statistics from the training split only.
  const Eigen::Index n_train = static_cast<Eigen::Index>(data.train_rows.size());
  Matrix xt(a_count, n_train), yt(a_count, n_train);
  for (Eigen::Index i = 0; i < n_train; ++i) {
    xt.col(i) = data.inputs.row(data.train_rows[i]).transpose();
    yt.col(i) = data.outputs.row(data.train_rows[i]).transpose();
  }
  s.in_mean = xt.rowwise().mean();
  s.out_mean = yt.rowwise().mean();
  s.in_std.resize(a_count);
  s.out_std.resize(a_count);
  for (Eigen::Index r = 0; r < a_count; ++r) {
    s.in_std[r] = std::sqrt(
        (xt.row(r).array() - s.in_mean[r]).square().mean());
    s.out_std[r] = std::sqrt(
        (yt.row(r).array() - s.out_mean[r]).square().mean());
    if (s.in_std[r] <= 1e-12) s.in_std[r] = 1.0;
    if (s.out_std[r] <= 1e-12) s.out_std[r] = 1.0;
  }
  xt = ((xt.colwise() - s.in_mean).array().colwise() / s.in_std.array())
           .matrix();
  yt = ((yt.colwise() - s.out_mean).array().colwise() / s.out_std.array())
           .matrix();

  // Physical clamp bounds per output.
  s.out_lo.resize(a_count);
  s.out_hi.resize(a_count);
  for (const auto& ag : agents) {
    if (ag.id.kind == AgentKind::Pump) {
      s.out_lo[ag.id.index] = net.components[ag.component].pump.p_el_min;
      s.out_hi[ag.id.index] = net.components[ag.component].pump.p_el_max;
    } else {
      s.out_lo[ag.id.index] = 0.0;
      s.out_hi[ag.id.index] = std::numeric_limits<double>::infinity();
    }
  }

  std::vector<int> sizes{static_cast<int>(a_count)};
  std::vector<Activation> acts;
  for (int h : opts.hidden) {
    sizes.push_back(h);
    acts.push_back(Activation::Sigmoid);
  }
  sizes.push_back(static_cast<int>(a_count));
  acts.push_back(Activation::Identity);
  Rng rng(opts.seed);
  s.mlp = Mlp::make(sizes, acts, rng);

  Matrix xv(a_count, static_cast<Eigen::Index>(data.val_rows.size()));
  Matrix yv_raw(a_count, xv.cols());
  for (Eigen::Index i = 0; i < xv.cols(); ++i) {
    Vector raw = data.inputs.row(data.val_rows[i]).transpose();
    xv.col(i) = ((raw - s.in_mean).array() / s.in_std.array()).matrix();
    yv_raw.col(i) = data.outputs.row(data.val_rows[i]).transpose();
  }

  AdamState adam;
  adam.init_like(s.mlp);
  AdamConfig adam_cfg;
  adam_cfg.lr = opts.lr;
  Mlp::Grads grads;
  grads.init_like(s.mlp);
  std::vector<int> order(n_train);
  std::iota(order.begin(), order.end(), 0);

  double best_val_mse = std::numeric_limits<double>::infinity();
  Mlp best = s.mlp;
  int best_epoch = 0;
  for (int epoch = 0; epoch < opts.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n_train; start += opts.batch_size) {
      const Eigen::Index count =
          std::min<Eigen::Index>(opts.batch_size, n_train - start);
      Matrix xb(a_count, count), yb(a_count, count);
      for (Eigen::Index i = 0; i < count; ++i) {
        xb.col(i) = xt.col(order[start + i]);
        yb.col(i) = yt.col(order[start + i]);
      }
      Mlp::Cache cache;
      const Matrix pred = s.mlp.forward_cached(xb, cache);
      if (!pred.allFinite())
        throw std::runtime_error("surrogate fit diverged (non-finite loss)");
      const Matrix upstream = 2.0 * (pred - yb) / double(count);
      grads.zero();
      s.mlp.backward(cache, upstream, grads);
      adam_step(s.mlp, grads, adam, adam_cfg);
    }
    const Matrix val_pred_n = s.mlp.forward_batch(xv);
    const double val_mse = (val_pred_n - ((yv_raw.colwise() - s.out_mean)
                                              .array()
                                              .colwise() /
                                          s.out_std.array())
                                             .matrix())
                               .squaredNorm() /
                           double(val_pred_n.size());
    if (val_mse < best_val_mse - 1e-12) {
      best_val_mse = val_mse;
      best = s.mlp;
      best_epoch = epoch;
    } else if (epoch - best_epoch >= opts.patience) {
      break;
    }
    s.report.epochs = epoch + 1;
  }
  s.mlp = best;

  // Validation report in physical units.
  Matrix val_pred = ((s.mlp.forward_batch(xv).array().colwise() *
                      s.out_std.array())
                         .colwise() +
                     s.out_mean.array())
                        .matrix();
  s.report.r2_per_output.resize(a_count);
  Vector all_pred(val_pred.size()), all_act(val_pred.size());
  Eigen::Index pos = 0;
  for (Eigen::Index r = 0; r < a_count; ++r) {
    Vector pr = val_pred.row(r).transpose();
    Vector ac = yv_raw.row(r).transpose();
    s.report.r2_per_output[r] = r_squared(pr, ac);
    all_pred.segment(pos, pr.size()) = pr;
    all_act.segment(pos, ac.size()) = ac;
    pos += pr.size();
  }
  s.report.r2_global = r_squared(all_pred, all_act);
  s.report.validation_rmse =
      std::sqrt((all_pred - all_act).squaredNorm() / double(all_act.size()));
  return s;
}

void Surrogate::save(const std::string& path) const {
  std::string mlp_text;
  mlp.to_json(mlp_text);
  json j;
  j["format"] = "fluidctl-surrogate-v1";
  j["mlp"] = json::parse(mlp_text);
  j["in_mean"] = vector_to_json(in_mean);
  j["in_std"] = vector_to_json(in_std);
  j["out_mean"] = vector_to_json(out_mean);
  j["out_std"] = vector_to_json(out_std);
  json lo = json::array(), hi = json::array();
  for (Eigen::Index i = 0; i < out_lo.size(); ++i) {
    lo.push_back(out_lo[i]);
    hi.push_back(std::isinf(out_hi[i]) ? 1e300 : out_hi[i]);
  }
  j["out_lo"] = lo;
  j["out_hi"] = hi;
  j["report"] = {{"r2_global", report.r2_global},
                 {"validation_rmse", report.validation_rmse},
                 {"epochs", report.epochs}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write surrogate: " + path);
  out << j.dump();
}

Surrogate Surrogate::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open surrogate: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j = json::parse(ss.str());
  if (j.value("format", "") != "fluidctl-surrogate-v1")
    throw std::invalid_argument("surrogate checkpoint: bad format tag");
  Surrogate s;
  s.mlp = Mlp::from_json(j.at("mlp").dump());
  s.in_mean = vector_from_json(j.at("in_mean"));
  s.in_std = vector_from_json(j.at("in_std"));
  s.out_mean = vector_from_json(j.at("out_mean"));
  s.out_std = vector_from_json(j.at("out_std"));
  s.out_lo = vector_from_json(j.at("out_lo"));
  s.out_hi = vector_from_json(j.at("out_hi"));
  s.report.r2_global = j.at("report").value("r2_global", 0.0);
  s.report.validation_rmse = j.at("report").value("validation_rmse", 0.0);
  s.report.epochs = j.at("report").value("epochs", 0);
  return s;
}

}  // namespace fluidctl
