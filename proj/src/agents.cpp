#include "fluidctl/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fluidctl {

std::vector<Agent> agents_from_network(const Network& net) {
  std::vector<Agent> agents;
  const auto& actives = net.actives();
  auto add = [&](ComponentKind kind) {
    for (std::size_t k = 0; k < actives.size(); ++k) {
      const auto& c = net.components[actives[k]];
      if (c.kind != kind) continue;
      Agent a;
      a.id.index = static_cast<int>(agents.size());
      a.id.kind = kind == ComponentKind::Pump ? AgentKind::Pump
                                              : AgentKind::Valve;
      a.component = actives[k];
      a.active = static_cast<int>(k);
      a.name = c.id;
      a.lambda = kind == ComponentKind::Pump ? 2.0 : 1.0;
      agents.push_back(a);
    }
  };
  add(ComponentKind::Valve);
  add(ComponentKind::Pump);
  return agents;
}

double pump_cost(double lambda, double p_el, double p_min, double p_max) {
  if (p_max <= 0.0) throw std::invalid_argument("pump_cost: P_max must be > 0");
  const double ratio = (p_el - p_min) / p_max;
  return lambda * ratio * ratio;
}

double valve_cost(double lambda, double q_demand, double q_actual) {
  const double dev = q_demand - q_actual;
  return lambda * dev * dev;
}

CostBreakdown global_cost(const Network& net, const std::vector<Agent>& agents,
                          const SystemState& state,
                          const std::vector<double>& demands) {
  if (demands.size() != agents.size())
    throw std::invalid_argument("global_cost: demand vector size mismatch");
  CostBreakdown out;
  out.per_agent.resize(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    const auto& c = net.components[a.component];
    double cost = 0.0;
    if (a.id.kind == AgentKind::Pump) {
      cost = pump_cost(a.lambda, state.power[a.component], c.pump.p_el_min,
                       c.pump.p_el_max);
    } else {
      cost = valve_cost(a.lambda, demands[i], state.flow[a.component]);
    }
    out.per_agent[i] = cost;
    out.total += cost;
  }
  return out;
}

double PiController::step(double setpoint, double measured, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("PI: dt must be positive");
  const double e = setpoint - measured;
  const double candidate = integral_ + e * dt;
  double raw = kp_ * e + ki_ * candidate;
  const bool saturated = raw > out_max_ || raw < out_min_;
  // Conditional integration: freeze while pushing further into saturation.
  if (!saturated || (raw > out_max_ && e < 0.0) || (raw < out_min_ && e > 0.0))
    integral_ = candidate;
  raw = kp_ * e + ki_ * integral_;
  double u = std::clamp(raw, out_min_, out_max_);
  if (n_min_ > 0.0) {
    // Disjoint pump range with hysteresis around n_min / 2 (band 0.05).
    const double half = 0.5 * n_min_;
    if (pump_on_) {
      if (u < half - 0.025) pump_on_ = false;
    } else {
      if (u >= half + 0.025) pump_on_ = true;
    }
    if (!pump_on_) return 0.0;
    u = std::clamp(u, n_min_, out_max_);
  }
  return u;
}

void PiController::reset() {
  integral_ = 0.0;
  pump_on_ = false;
}

}  // namespace fluidctl
