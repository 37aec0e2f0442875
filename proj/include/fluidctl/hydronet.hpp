#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fluidctl {

/// Head curve dp = a1*Q|Q| + a2*Q*n + a3*n^2 and electrical power
/// P = b1*Q^3 + b2*Q^2*n + b3*Q*n^2 + b4*n^3 + b5, clamped to [P_min, P_max].
/// Flow in m^3/h, pressure in Pa, power in W, n relative in {0} u [n_min, n_max].
struct PumpParams {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  double beta4 = 0.0;
  double beta5 = 0.0;
  double n_min = 0.3;
  double n_max = 1.0;
  double p_el_min = 0.0;  // standby power, W
  double p_el_max = 0.0;  // power clamp, W
  double q_max = 0.0;     // rated max flow, m^3/h (used by market offers / design)

  void validate() const;
};

/// Loss law l(v) = l_min / v^2, closed at v = 0.
struct ValveParams {
  double l_min = 0.0;  // Pa*h^2/m^6 at full opening
  double v_min = 0.0;
  double v_max = 1.0;
  double q_max = 0.0;  // rated max demand, m^3/h

  void validate() const;
};

struct ResistanceParams {
  double l_passive = 0.0;  // Pa*h^2/m^6

  void validate() const;
};

enum class ComponentKind { Pump, Valve, Resistance };

struct Node {
  std::string id;
  double elevation = 0.0;       // m
  bool boundary = false;        // fixed-pressure node
  double boundary_pressure = 0.0;  // Pa gauge, only for boundary nodes
};

struct Component {
  std::string id;
  ComponentKind kind = ComponentKind::Resistance;
  int from = -1;  // node indices
  int to = -1;
  PumpParams pump;
  ValveParams valve;
  ResistanceParams resistance;
};

/// Control value per active component, indexed like Network::actives().
using ControlVector = std::vector<double>;

class Network {
 public:
  std::vector<Node> nodes;
  std::vector<Component> components;
  double fluid_density = 998.0;  // kg/m^3

  int node_index(const std::string& id) const;
  int component_index(const std::string& id) const;

  /// Indices of active components (pumps and valves) in declaration order.
  const std::vector<int>& actives() const { return actives_; }
  std::size_t num_actives() const { return actives_.size(); }

  /// Checks connectivity, reference node, and parameter invariants.
  void validate();

  static Network from_json_file(const std::string& path);
  static Network from_json_text(const std::string& text);
  std::string to_json_text() const;

  /// Clamps u into the admissible set of each active component.
  ControlVector clamp_controls(const ControlVector& u) const;
  bool controls_admissible(const ControlVector& u, double tol = 1e-9) const;

 private:
  std::vector<int> actives_;
};

struct SystemState {
  double t = 0.0;                // s
  std::vector<double> flow;      // per component edge, m^3/h
  std::vector<double> pressure;  // per node, Pa gauge
  std::vector<double> power;     // per component (nonzero only for pumps), W
  ControlVector u;               // applied controls, per active component
};

struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// Distinguished result of valve_loss_coeff at v = 0.
struct LossCoeff {
  bool closed = false;
  double l = 0.0;
};

double pump_pressure_rise(const PumpParams& p, double q, double n);
double pump_power(const PumpParams& p, double q, double n);
LossCoeff valve_loss_coeff(const ValveParams& p, double v);

struct SolverOptions {
  int max_iterations = 200;
  int max_halvings = 8;
  double tolerance = 1e-10;  // scaled residual norm target
};

/// Quasi-static solve: junction mass balance and branch pressure balance.
/// Closed valves and tripped check valves are removed from the unknown set.
SystemState solve_steady_state(const Network& net, const ControlVector& u,
                               const SystemState* warm_start = nullptr,
                               const SolverOptions& opts = {});

/// Scaled residual norm of a state (max of mass and pressure residuals);
/// independent of the Newton iteration, usable as an external check.
double residual_norm(const Network& net, const SystemState& state);

struct ActuatorLimits {
  double valve_rate = 2.0;  // opening change per second
  double pump_rate = 1.0;   // relative-speed change per second
};

/// Moves actuators toward u_cmd under rate limits, then re-solves.
SystemState step(const Network& net, const SystemState& state,
                 const ControlVector& u_cmd, double dt,
                 const ActuatorLimits& limits = {},
                 const SolverOptions& opts = {});

/// Ships the two-pump / five-valve default plant.
Network default_network();

}  // namespace fluidctl
