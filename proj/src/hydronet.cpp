#include "fluidctl/hydronet.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace fluidctl {

namespace {

constexpr double kGravity = 9.81;
constexpr double kPressureScale = 1e5;  // Pa per scaled unit
// Jacobian-only derivative floor for branch flow entries; keeps the matrix
// regular at zero flow without touching the residuals.
constexpr double kFlowDerivFloor = 1e-6;

}  // namespace

void PumpParams::validate() const {
  if (!(alpha3 > 0.0)) throw std::invalid_argument("pump: alpha3 must be > 0");
  if (!(0.0 < n_min && n_min < n_max && n_max <= 1.0))
    throw std::invalid_argument("pump: require 0 < n_min < n_max <= 1");
  if (!(p_el_max > p_el_min && p_el_min >= 0.0))
    throw std::invalid_argument("pump: require P_max > P_min >= 0");
  if (beta5 < 0.0) throw std::invalid_argument("pump: beta5 must be >= 0");
}

void ValveParams::validate() const {
  if (!(l_min > 0.0)) throw std::invalid_argument("valve: l_min must be > 0");
  if (!(0.0 <= v_min && v_min < v_max && v_max <= 1.0))
    throw std::invalid_argument("valve: require 0 <= v_min < v_max <= 1");
}

void ResistanceParams::validate() const {
  if (l_passive < 0.0)
    throw std::invalid_argument("resistance: l_passive must be >= 0");
}

double pump_pressure_rise(const PumpParams& p, double q, double n) {
  return p.alpha1 * q * std::abs(q) + p.alpha2 * q * n + p.alpha3 * n * n;
}

double pump_power(const PumpParams& p, double q, double n) {
  const double raw = p.beta1 * q * q * q + p.beta2 * q * q * n +
                     p.beta3 * q * n * n + p.beta4 * n * n * n + p.beta5;
  return std::clamp(raw, p.p_el_min, p.p_el_max);
}

LossCoeff valve_loss_coeff(const ValveParams& p, double v) {
  if (v < p.v_min - 1e-12 || v > p.v_max + 1e-12)
    throw std::out_of_range("valve opening outside [v_min, v_max]");
  if (v <= 0.0) return {true, 0.0};
  return {false, p.l_min / (v * v)};
}

int Network::node_index(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return static_cast<int>(i);
  return -1;
}

int Network::component_index(const std::string& id) const {
  for (std::size_t i = 0; i < components.size(); ++i)
    if (components[i].id == id) return static_cast<int>(i);
  return -1;
}

void Network::validate() {
  if (nodes.empty() || components.empty())
    throw std::invalid_argument("network: empty");
  bool has_reference = false;
  for (const auto& n : nodes) has_reference |= n.boundary;
  if (!has_reference)
    throw std::invalid_argument("network: no pressure-reference node");
  actives_.clear();
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    if (c.from < 0 || c.to < 0 || c.from >= static_cast<int>(nodes.size()) ||
        c.to >= static_cast<int>(nodes.size()))
      throw std::invalid_argument("network: bad edge endpoints on " + c.id);
    switch (c.kind) {
      case ComponentKind::Pump:
        c.pump.validate();
        actives_.push_back(static_cast<int>(i));
        break;
      case ComponentKind::Valve:
        c.valve.validate();
        actives_.push_back(static_cast<int>(i));
        break;
      case ComponentKind::Resistance:
        c.resistance.validate();
        break;
    }
  }
  // Connectivity over the undirected edge set.
  std::vector<char> seen(nodes.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const auto& c : components) {
      int other = -1;
      if (c.from == v) other = c.to;
      if (c.to == v) other = c.from;
      if (other >= 0 && !seen[other]) {
        seen[other] = 1;
        stack.push_back(other);
      }
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!seen[i])
      throw std::invalid_argument("network: node " + nodes[i].id +
                                  " unreachable");
}

ControlVector Network::clamp_controls(const ControlVector& u) const {
  if (u.size() != actives_.size())
    throw std::invalid_argument("control vector size mismatch");
  ControlVector out = u;
  for (std::size_t k = 0; k < actives_.size(); ++k) {
    const auto& c = components[actives_[k]];
    if (c.kind == ComponentKind::Pump) {
      const auto& p = c.pump;
      if (out[k] < 0.5 * p.n_min)
        out[k] = 0.0;
      else
        out[k] = std::clamp(out[k], p.n_min, p.n_max);
    } else {
      out[k] = std::clamp(out[k], c.valve.v_min, c.valve.v_max);
    }
  }
  return out;
}

bool Network::controls_admissible(const ControlVector& u, double tol) const {
  if (u.size() != actives_.size()) return false;
  for (std::size_t k = 0; k < actives_.size(); ++k) {
    const auto& c = components[actives_[k]];
    if (c.kind == ComponentKind::Pump) {
      const auto& p = c.pump;
      bool off = std::abs(u[k]) <= tol;
      bool on = u[k] >= p.n_min - tol && u[k] <= p.n_max + tol;
      if (!off && !on) return false;
    } else {
      if (u[k] < c.valve.v_min - tol || u[k] > c.valve.v_max + tol)
        return false;
    }
  }
  return true;
}

namespace {

using nlohmann::json;

ComponentKind kind_from_string(const std::string& s) {
  if (s == "pump") return ComponentKind::Pump;
  if (s == "valve") return ComponentKind::Valve;
  if (s == "resistance") return ComponentKind::Resistance;
  throw std::invalid_argument("unknown component kind: " + s);
}

std::string kind_to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Pump: return "pump";
    case ComponentKind::Valve: return "valve";
    default: return "resistance";
  }
}

}  // namespace

Network Network::from_json_text(const std::string& text) {
  json j = json::parse(text);
  Network net;
  net.fluid_density = j.value("fluid_density", 998.0);
  for (const auto& jn : j.at("nodes")) {
    Node n;
    n.id = jn.at("id").get<std::string>();
    n.elevation = jn.value("elevation", 0.0);
    n.boundary = jn.value("boundary", false);
    n.boundary_pressure = jn.value("pressure", 0.0);
    net.nodes.push_back(n);
  }
  for (const auto& jc : j.at("components")) {
    Component c;
    c.id = jc.at("id").get<std::string>();
    c.kind = kind_from_string(jc.at("kind").get<std::string>());
    c.from = net.node_index(jc.at("from").get<std::string>());
    c.to = net.node_index(jc.at("to").get<std::string>());
    if (c.from < 0 || c.to < 0)
      throw std::invalid_argument("component " + c.id + ": unknown node");
    if (c.kind == ComponentKind::Pump) {
      const auto& jp = jc.at("pump");
      auto& p = c.pump;
      p.alpha1 = jp.at("alpha1");
      p.alpha2 = jp.at("alpha2");
      p.alpha3 = jp.at("alpha3");
      p.beta1 = jp.at("beta1");
      p.beta2 = jp.at("beta2");
      p.beta3 = jp.at("beta3");
      p.beta4 = jp.at("beta4");
      p.beta5 = jp.at("beta5");
      p.n_min = jp.at("n_min");
      p.n_max = jp.at("n_max");
      p.p_el_min = jp.at("p_min");
      p.p_el_max = jp.at("p_max");
      p.q_max = jp.value("q_max", 0.0);
    } else if (c.kind == ComponentKind::Valve) {
      const auto& jv = jc.at("valve");
      auto& v = c.valve;
      v.l_min = jv.at("l_min");
      v.v_min = jv.value("v_min", 0.0);
      v.v_max = jv.value("v_max", 1.0);
      v.q_max = jv.value("q_max", 0.0);
    } else {
      c.resistance.l_passive = jc.at("resistance").at("l_passive");
    }
    net.components.push_back(c);
  }
  net.validate();
  return net;
}

Network Network::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Network::to_json_text() const {
  json j;
  j["fluid_density"] = fluid_density;
  j["nodes"] = json::array();
  for (const auto& n : nodes) {
    json jn{{"id", n.id}, {"elevation", n.elevation}, {"boundary", n.boundary}};
    if (n.boundary) jn["pressure"] = n.boundary_pressure;
    j["nodes"].push_back(jn);
  }
  j["components"] = json::array();
  for (const auto& c : components) {
    json jc{{"id", c.id},
            {"kind", kind_to_string(c.kind)},
            {"from", nodes[c.from].id},
            {"to", nodes[c.to].id}};
    if (c.kind == ComponentKind::Pump) {
      jc["pump"] = {{"alpha1", c.pump.alpha1}, {"alpha2", c.pump.alpha2},
                    {"alpha3", c.pump.alpha3}, {"beta1", c.pump.beta1},
                    {"beta2", c.pump.beta2},   {"beta3", c.pump.beta3},
                    {"beta4", c.pump.beta4},   {"beta5", c.pump.beta5},
                    {"n_min", c.pump.n_min},   {"n_max", c.pump.n_max},
                    {"p_min", c.pump.p_el_min}, {"p_max", c.pump.p_el_max},
                    {"q_max", c.pump.q_max}};
    } else if (c.kind == ComponentKind::Valve) {
      jc["valve"] = {{"l_min", c.valve.l_min},
                     {"v_min", c.valve.v_min},
                     {"v_max", c.valve.v_max},
                     {"q_max", c.valve.q_max}};
    } else {
      jc["resistance"] = {{"l_passive", c.resistance.l_passive}};
    }
    j["components"].push_back(jc);
  }
  return j.dump(2);
}

namespace {

struct BranchLaw {
  bool open = true;
  bool check_valve = false;  // closes against reverse flow
  double loss = 0.0;         // Pa*h^2/m^6
  const PumpParams* pump = nullptr;
  double n = 0.0;
};

// Per-component hydraulic role given the applied controls.
std::vector<BranchLaw> branch_laws(const Network& net, const ControlVector& u) {
  std::vector<BranchLaw> laws(net.components.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < net.components.size(); ++i) {
    const auto& c = net.components[i];
    auto& law = laws[i];
    switch (c.kind) {
      case ComponentKind::Pump: {
        const double n = u[k++];
        law.pump = &c.pump;
        law.n = n;
        // Off pump: no head term, acts as an ideal check valve.
        law.check_valve = (n <= 0.0);
        break;
      }
      case ComponentKind::Valve: {
        const double v = u[k++];
        const auto lc = valve_loss_coeff(c.valve, v);
        law.open = !lc.closed;
        law.loss = lc.l;
        break;
      }
      case ComponentKind::Resistance:
        law.loss = c.resistance.l_passive;
        break;
    }
  }
  return laws;
}

double branch_head(const BranchLaw& law, double q) {
  double dp = -law.loss * q * std::abs(q);
  if (law.pump && law.n > 0.0) dp += pump_pressure_rise(*law.pump, q, law.n);
  return dp;
}

double branch_head_dq(const BranchLaw& law, double q) {
  double d = -2.0 * law.loss * std::abs(q);
  if (law.pump && law.n > 0.0)
    d += 2.0 * law.pump->alpha1 * std::abs(q) + law.pump->alpha2 * law.n;
  return d;
}

struct Assembly {
  std::vector<int> node_unknown;    // node -> unknown index or -1
  std::vector<int> branch_unknown;  // component -> unknown index or -1
  std::vector<int> mass_row_node;   // row -> node
  std::vector<int> branch_row_comp; // row -> component
  std::vector<char> pinned;         // node pinned as local reference
  int n_unknowns = 0;
};

// Builds the square system for the current open set. Connected groups of
// interior nodes with no path to a boundary node get one pinned reference
// node (its mass row is dropped); isolated nodes are excluded entirely.
Assembly assemble(const Network& net, const std::vector<BranchLaw>& laws,
                  const std::vector<char>& open) {
  const int nn = static_cast<int>(net.nodes.size());
  Assembly a;
  a.node_unknown.assign(nn, -1);
  a.branch_unknown.assign(net.components.size(), -1);
  a.pinned.assign(nn, 0);

  // Union components of the open-edge graph to find boundary-reachable nodes.
  std::vector<int> group(nn);
  for (int i = 0; i < nn; ++i) group[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (group[x] != x) x = group[x] = group[group[x]];
    return x;
  };
  for (std::size_t i = 0; i < net.components.size(); ++i) {
    if (!open[i]) continue;
    const auto& c = net.components[i];
    group[find(c.from)] = find(c.to);
  }
  std::vector<char> group_has_boundary(nn, 0);
  for (int i = 0; i < nn; ++i)
    if (net.nodes[i].boundary) group_has_boundary[find(i)] = 1;
  std::vector<char> has_open_edge(nn, 0);
  for (std::size_t i = 0; i < net.components.size(); ++i) {
    if (!open[i]) continue;
    has_open_edge[net.components[i].from] = 1;
    has_open_edge[net.components[i].to] = 1;
  }
  std::vector<int> group_reference(nn, -1);
  for (int i = 0; i < nn; ++i) {
    if (net.nodes[i].boundary || !has_open_edge[i]) continue;
    int g = find(i);
    if (!group_has_boundary[g] && group_reference[g] < 0) {
      group_reference[g] = i;
      a.pinned[i] = 1;
    }
  }

  int idx = 0;
  for (int i = 0; i < nn; ++i) {
    if (net.nodes[i].boundary || !has_open_edge[i] || a.pinned[i]) continue;
    a.node_unknown[i] = idx++;
    a.mass_row_node.push_back(i);
  }
  for (std::size_t i = 0; i < net.components.size(); ++i) {
    if (!open[i]) continue;
    a.branch_unknown[i] = idx++;
    a.branch_row_comp.push_back(static_cast<int>(i));
  }
  a.n_unknowns = idx;
  return a;
}

double node_pressure(const Network& net, const Assembly& a,
                     const Eigen::VectorXd& x, const SystemState* warm,
                     int node) {
  if (net.nodes[node].boundary) return net.nodes[node].boundary_pressure;
  int u = a.node_unknown[node];
  if (u >= 0) return x[u];
  // Pinned or isolated node: hold its warm-start pressure (or zero gauge).
  if (warm && node < static_cast<int>(warm->pressure.size()))
    return warm->pressure[node];
  return 0.0;
}

void residuals(const Network& net, const std::vector<BranchLaw>& laws,
               const Assembly& a, const Eigen::VectorXd& x,
               const SystemState* warm, Eigen::VectorXd& r) {
  const double rho_g = net.fluid_density * kGravity;
  r.setZero(a.n_unknowns);
  int row = 0;
  for (int node : a.mass_row_node) {
    double balance = 0.0;
    for (std::size_t i = 0; i < net.components.size(); ++i) {
      int bu = a.branch_unknown[i];
      if (bu < 0) continue;
      const auto& c = net.components[i];
      if (c.to == node) balance += x[bu];
      if (c.from == node) balance -= x[bu];
    }
    r[row++] = balance;
  }
  for (int ci : a.branch_row_comp) {
    const auto& c = net.components[ci];
    const double q = x[a.branch_unknown[ci]];
    const double p_from = node_pressure(net, a, x, warm, c.from);
    const double p_to = node_pressure(net, a, x, warm, c.to);
    const double dz = net.nodes[c.to].elevation - net.nodes[c.from].elevation;
    r[row++] = (p_from + branch_head(laws[ci], q) - rho_g * dz - p_to) /
               kPressureScale;
  }
}

void jacobian(const Network& net, const std::vector<BranchLaw>& laws,
              const Assembly& a, const Eigen::VectorXd& x,
              Eigen::MatrixXd& jac) {
  jac.setZero(a.n_unknowns, a.n_unknowns);
  int row = 0;
  for (int node : a.mass_row_node) {
    for (std::size_t i = 0; i < net.components.size(); ++i) {
      int bu = a.branch_unknown[i];
      if (bu < 0) continue;
      const auto& c = net.components[i];
      if (c.to == node) jac(row, bu) += 1.0;
      if (c.from == node) jac(row, bu) -= 1.0;
    }
    ++row;
  }
  for (int ci : a.branch_row_comp) {
    const auto& c = net.components[ci];
    const double q = x[a.branch_unknown[ci]];
    if (a.node_unknown[c.from] >= 0)
      jac(row, a.node_unknown[c.from]) += 1.0 / kPressureScale;
    if (a.node_unknown[c.to] >= 0)
      jac(row, a.node_unknown[c.to]) -= 1.0 / kPressureScale;
    double d = branch_head_dq(laws[ci], q) / kPressureScale;
    if (std::abs(d) < kFlowDerivFloor) d = -kFlowDerivFloor;
    jac(row, a.branch_unknown[ci]) = d;
    ++row;
  }
}

bool newton_solve(const Network& net, const std::vector<BranchLaw>& laws,
                  const Assembly& a, Eigen::VectorXd& x,
                  const SystemState* warm, const SolverOptions& opts) {
  if (a.n_unknowns == 0) return true;
  Eigen::VectorXd r(a.n_unknowns), r_try(a.n_unknowns);
  Eigen::MatrixXd jac(a.n_unknowns, a.n_unknowns);
  residuals(net, laws, a, x, warm, r);
  double norm = r.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (norm <= opts.tolerance) return true;
    jacobian(net, laws, a, x, jac);
    Eigen::VectorXd dx = jac.fullPivLu().solve(-r);
    if (!dx.allFinite()) return false;
    double step_scale = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      Eigen::VectorXd x_try = x + step_scale * dx;
      residuals(net, laws, a, x_try, warm, r_try);
      const double norm_try = r_try.lpNorm<Eigen::Infinity>();
      if (norm_try < norm || h == opts.max_halvings) {
        x = x_try;
        r = r_try;
        norm = norm_try;
        accepted = true;
        break;
      }
      step_scale *= 0.5;
    }
    if (!accepted) return false;
  }
  return norm <= opts.tolerance;
}

}  // namespace

SystemState solve_steady_state(const Network& net, const ControlVector& u,
                               const SystemState* warm_start,
                               const SolverOptions& opts) {
  if (u.size() != net.num_actives())
    throw std::invalid_argument("control vector size mismatch");
  if (!net.controls_admissible(u))
    throw std::invalid_argument("control vector outside admissible set");
  const auto laws = branch_laws(net, u);
  const double rho_g = net.fluid_density * kGravity;

  std::vector<char> open(net.components.size());
  for (std::size_t i = 0; i < net.components.size(); ++i)
    open[i] = laws[i].open ? 1 : 0;

  SystemState out;
  out.u = u;
  out.flow.assign(net.components.size(), 0.0);
  out.pressure.assign(net.nodes.size(), 0.0);
  out.power.assign(net.components.size(), 0.0);
  out.t = warm_start ? warm_start->t : 0.0;

  // Check-valve active set around the Newton solve.
  for (int pass = 0; pass < 20; ++pass) {
    Assembly a = assemble(net, laws, open);
    Eigen::VectorXd x(a.n_unknowns);
    for (int node : a.mass_row_node) {
      double p0 = 1e4;
      if (warm_start && node < static_cast<int>(warm_start->pressure.size()))
        p0 = warm_start->pressure[node];
      x[a.node_unknown[node]] = p0;
    }
    for (int ci : a.branch_row_comp) {
      double q0 = 0.5;
      if (warm_start && ci < static_cast<int>(warm_start->flow.size()))
        q0 = warm_start->flow[ci];
      x[a.branch_unknown[ci]] = q0;
    }
    if (!newton_solve(net, laws, a, x, warm_start, opts))
      throw NonConvergence("steady-state solve did not converge");

    for (std::size_t i = 0; i < net.nodes.size(); ++i)
      out.pressure[i] =
          node_pressure(net, a, x, warm_start, static_cast<int>(i));
    for (std::size_t i = 0; i < net.components.size(); ++i)
      out.flow[i] = a.branch_unknown[i] >= 0 ? x[a.branch_unknown[i]] : 0.0;

    // Trip check valves carrying reverse flow; reopen closed ones whose
    // forward pressure difference would drive flow.
    int worst = -1;
    double worst_q = -1e-9;
    for (std::size_t i = 0; i < net.components.size(); ++i) {
      if (!laws[i].check_valve || !open[i]) continue;
      if (out.flow[i] < worst_q) {
        worst_q = out.flow[i];
        worst = static_cast<int>(i);
      }
    }
    if (worst >= 0) {
      open[worst] = 0;
      continue;
    }
    bool reopened = false;
    for (std::size_t i = 0; i < net.components.size(); ++i) {
      if (!laws[i].check_valve || open[i] || !laws[i].open) continue;
      const auto& c = net.components[i];
      const double dz =
          net.nodes[c.to].elevation - net.nodes[c.from].elevation;
      const double drive =
          out.pressure[c.from] - rho_g * dz - out.pressure[c.to];
      if (drive > 1e-6) {
        open[i] = 1;
        reopened = true;
        break;
      }
    }
    if (!reopened) break;
  }

  for (std::size_t i = 0; i < net.components.size(); ++i) {
    if (net.components[i].kind != ComponentKind::Pump) continue;
    const auto& law = laws[i];
    out.power[i] = pump_power(net.components[i].pump,
                              std::max(out.flow[i], 0.0), law.n);
  }
  // Snap check-valve leakage from the active-set tolerance to zero.
  for (auto& q : out.flow)
    if (std::abs(q) < 1e-9) q = 0.0;
  return out;
}

double residual_norm(const Network& net, const SystemState& state) {
  const double rho_g = net.fluid_density * kGravity;
  const auto laws = branch_laws(net, state.u);
  double worst = 0.0;
  for (std::size_t node = 0; node < net.nodes.size(); ++node) {
    if (net.nodes[node].boundary) continue;
    double balance = 0.0;
    bool touched = false;
    for (std::size_t i = 0; i < net.components.size(); ++i) {
      const auto& c = net.components[i];
      if (c.to == static_cast<int>(node)) balance += state.flow[i], touched = true;
      if (c.from == static_cast<int>(node)) balance -= state.flow[i], touched = true;
    }
    if (touched) worst = std::max(worst, std::abs(balance));
  }
  for (std::size_t i = 0; i < net.components.size(); ++i) {
    const auto& law = laws[i];
    if (!law.open) continue;
    if (law.check_valve && state.flow[i] == 0.0) continue;
    const auto& c = net.components[i];
    const double dz = net.nodes[c.to].elevation - net.nodes[c.from].elevation;
    const double r = (state.pressure[c.from] + branch_head(law, state.flow[i]) -
                      rho_g * dz - state.pressure[c.to]) /
                     kPressureScale;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

SystemState step(const Network& net, const SystemState& state,
                 const ControlVector& u_cmd, double dt,
                 const ActuatorLimits& limits, const SolverOptions& opts) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  const auto cmd = net.clamp_controls(u_cmd);
  ControlVector u = state.u;
  const auto& actives = net.actives();
  for (std::size_t k = 0; k < actives.size(); ++k) {
    const auto& c = net.components[actives[k]];
    const double rate = c.kind == ComponentKind::Pump ? limits.pump_rate
                                                      : limits.valve_rate;
    const double max_move = rate * dt;
    const double diff = cmd[k] - u[k];
    u[k] += std::clamp(diff, -max_move, max_move);
  }
  SystemState next = solve_steady_state(net, u, &state, opts);
  next.t = state.t + dt;
  return next;
}

Network default_network() {
  // Two-pump booster plant: pump p1 feeds the lower manifold (valves v1-v3,
  // ground level) and, through a riser pipe, pump p2 boosting the upper
  // manifold (valves v4, v5 at +6 m). Riser loss and elevation are assumed
  // values; only the topology is fixed.
  static const char* kText = R"json(
{
  "fluid_density": 998.0,
  "nodes": [
    {"id": "src",  "elevation": 0.0, "boundary": true, "pressure": 0.0},
    {"id": "n1",   "elevation": 0.0},
    {"id": "m",    "elevation": 6.0},
    {"id": "n2",   "elevation": 6.0},
    {"id": "snk_l", "elevation": 0.0, "boundary": true, "pressure": 0.0},
    {"id": "snk_u", "elevation": 6.0, "boundary": true, "pressure": 0.0}
  ],
  "components": [
    {"id": "p1", "kind": "pump", "from": "src", "to": "n1",
     "pump": {"alpha1": -4.0e3, "alpha2": 0.0, "alpha3": 4.0e5,
              "beta1": 0.1, "beta2": 1.2, "beta3": 80.0, "beta4": 600.0,
              "beta5": 10.0, "n_min": 0.3, "n_max": 1.0,
              "p_min": 10.0, "p_max": 1400.0, "q_max": 8.0}},
    {"id": "v1", "kind": "valve", "from": "n1", "to": "snk_l",
     "valve": {"l_min": 5.0e3, "v_min": 0.0, "v_max": 1.0, "q_max": 2.5}},
    {"id": "v2", "kind": "valve", "from": "n1", "to": "snk_l",
     "valve": {"l_min": 5.0e3, "v_min": 0.0, "v_max": 1.0, "q_max": 2.5}},
    {"id": "v3", "kind": "valve", "from": "n1", "to": "snk_l",
     "valve": {"l_min": 5.0e3, "v_min": 0.0, "v_max": 1.0, "q_max": 2.5}},
    {"id": "riser", "kind": "resistance", "from": "n1", "to": "m",
     "resistance": {"l_passive": 1.0e3}},
    {"id": "p2", "kind": "pump", "from": "m", "to": "n2",
     "pump": {"alpha1": -4.0e3, "alpha2": 0.0, "alpha3": 4.0e5,
              "beta1": 0.1, "beta2": 1.2, "beta3": 80.0, "beta4": 600.0,
              "beta5": 10.0, "n_min": 0.3, "n_max": 1.0,
              "p_min": 10.0, "p_max": 1400.0, "q_max": 8.0}},
    {"id": "v4", "kind": "valve", "from": "n2", "to": "snk_u",
     "valve": {"l_min": 5.0e3, "v_min": 0.0, "v_max": 1.0, "q_max": 2.5}},
    {"id": "v5", "kind": "valve", "from": "n2", "to": "snk_u",
     "valve": {"l_min": 5.0e3, "v_min": 0.0, "v_max": 1.0, "q_max": 2.5}}
  ]
}
)json";
  return Network::from_json_text(kText);
}

}  // namespace fluidctl
