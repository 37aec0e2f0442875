#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fluidctl/agents.hpp"
#include "fluidctl/surrogate.hpp"

namespace fluidctl {

struct MpcConfig {
  int horizon = 3;           // L
  double delta = 0.2;        // per-step move limit
  std::vector<double> rho;   // per-agent weights; empty = all 1
  int rounds = 3;            // communication rounds after the initial sweep
  int restarts = 5;          // random multistarts per optimization
  double control_period = 0.5;  // s
  int descent_iterations = 60;
  std::uint64_t seed = 1;
};

/// Per-agent plan of absolute control values over the horizon.
struct Proposal {
  AgentId agent;
  std::vector<double> plan;
};

/// rho-weighted predicted cost of joint plans over the horizon; demand held
/// constant. plans[i] has length L for every agent i.
double horizon_cost(const Surrogate& g, const Network& net,
                    const std::vector<Agent>& agents,
                    const std::vector<std::vector<double>>& plans,
                    const std::vector<double>& demands,
                    const std::vector<double>& rho);

/// Minimizes horizon_cost over agent i's delta-tube with all other plans
/// fixed. Pump agents evaluate the off branch and the on branch.
Proposal optimize_agent(int agent_index, const Network& net,
                        const std::vector<Agent>& agents,
                        const std::vector<std::vector<double>>& fixed_plans,
                        const std::vector<double>& u_applied,
                        const std::vector<double>& demands, const Surrogate& g,
                        const MpcConfig& cfg, Rng& rng);

struct PlanLogEntry {
  int round = 0;  // -1 for the central (joint) optimization
  int agent = 0;
  std::vector<double> plan;
  double predicted_cost = 0.0;
};

/// Receding-horizon controller; holds per-agent plans between control steps.
/// Central mode optimizes jointly, distributed mode runs synchronous Jacobi
/// rounds of per-agent optimizations.
class MpcController {
 public:
  enum class Mode { Central, Distributed };

  MpcController(Mode mode, const Network& net, std::vector<Agent> agents,
                const Surrogate& g, MpcConfig cfg);

  /// Restricts optimization scope after a communication partition.
  /// group_of_agent: component id per agent; optimized_groups: groups this
  /// controller still reaches (central: the unit's own component). Agents
  /// outside the scope freeze at their last applied value.
  void set_partition(const std::vector<int>& group_of_agent,
                     const std::vector<int>& optimized_groups);
  void clear_partition();

  ControlVector control_step(const ControlVector& u_applied,
                             const std::vector<double>& demands);

  const std::vector<PlanLogEntry>& log() const { return log_; }
  void clear_log() { log_.clear(); }

 private:
  Mode mode_;
  const Network& net_;
  std::vector<Agent> agents_;
  const Surrogate& g_;
  MpcConfig cfg_;
  Rng rng_;
  std::vector<std::vector<double>> plans_;
  std::vector<char> in_scope_;
  std::vector<int> group_of_agent_;
  bool partitioned_ = false;
  std::vector<PlanLogEntry> log_;

  ControlVector central_step(const ControlVector& u_applied,
                             const std::vector<double>& demands);
  ControlVector distributed_step(const ControlVector& u_applied,
                                 const std::vector<double>& demands);
};

/// Reachable continuous interval of a control value under the delta move
/// limit, and whether the pump off-state is reachable. The off <-> n_min
/// transition is treated as an allowed discrete switch when the continuous
/// value sits within delta of the band edge.
struct ReachableSet {
  double lo = 0.0;
  double hi = 0.0;
  bool off_allowed = false;
  bool on_allowed = true;
};
ReachableSet reachable_set(const Network& net, const Agent& agent, double u,
                           double delta);

}  // namespace fluidctl
