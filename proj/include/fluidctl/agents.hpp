#pragma once

#include <string>
#include <vector>

#include "fluidctl/hydronet.hpp"

namespace fluidctl {

enum class AgentKind { Pump, Valve };

struct AgentId {
  int index = -1;  // position in the scenario's agent list
  AgentKind kind = AgentKind::Valve;

  bool operator==(const AgentId&) const = default;
};

/// Binds an agent to its component edge in the network.
struct Agent {
  AgentId id;
  int component = -1;   // index into Network::components
  int active = -1;      // index into Network::actives() / ControlVector
  std::string name;
  double lambda = 1.0;  // cost weight
};

/// Builds the agent list from a network: valves first, then pumps, with the
/// usual weights (valves 1, pumps 2) unless overridden later.
std::vector<Agent> agents_from_network(const Network& net);

double pump_cost(double lambda, double p_el, double p_min, double p_max);
double valve_cost(double lambda, double q_demand, double q_actual);

struct CostBreakdown {
  std::vector<double> per_agent;
  double total = 0.0;
};

/// Sum of all agent costs for a solved state; demands indexed per agent
/// (pump entries ignored).
CostBreakdown global_cost(const Network& net, const std::vector<Agent>& agents,
                          const SystemState& state,
                          const std::vector<double>& demands);

/// PI controller with clamped output and conditional (anti-windup)
/// integration. For pump agents the output maps into {0} u [n_min, n_max]
/// with an on/off hysteresis band around n_min / 2.
class PiController {
 public:
  PiController(double kp, double ki, double out_min, double out_max)
      : kp_(kp), ki_(ki), out_min_(out_min), out_max_(out_max) {}

  /// Marks the output range as a pump's disjoint set {0} u [n_min, n_max].
  void set_pump_band(double n_min) { n_min_ = n_min; }

  double step(double setpoint, double measured, double dt);
  void reset();
  double integral() const { return integral_; }

 private:
  double kp_;
  double ki_;
  double out_min_;
  double out_max_;
  double n_min_ = -1.0;  // < 0: plain box output
  double integral_ = 0.0;
  bool pump_on_ = false;
};

}  // namespace fluidctl
