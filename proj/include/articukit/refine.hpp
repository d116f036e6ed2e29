#pragma once

#include "articukit/trajectory.hpp"
#include "articukit/types.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace articukit {

struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // (actual row, planned column)
  double total_cost = 0.0;
};

struct RefineConfig {
  double step_size = 1.0;
  int max_inner_iterations = 40;
  double grad_epsilon = 1e-6;  // central-difference step
  double tolerance = 1e-10;    // stop when an alternation improves less than this
};

// Minimum-cost rectangular assignment (rows <= cols). Ties break toward the
// lexicographically smallest pair list.
Assignment hungarian(const Eigen::MatrixXd& cost);

struct ObjectiveResult {
  double value = 0.0;
  Assignment assignment;
};

// Eq-style matched trajectory error: mean over actual waypoints of the
// Hungarian-matched distance to the plan regenerated from psi.
ObjectiveResult trajectory_objective(const JointParams& psi, const Trajectory& actual,
                                     const PlanTemplate& plan_template);

// Multi-segment variant used by the receding-horizon loop: each template is
// re-planned from its own root and all waypoints enter one matching problem.
ObjectiveResult trajectory_objective(const JointParams& psi,
                                     const std::vector<Trajectory>& actuals,
                                     const std::vector<PlanTemplate>& templates);

// Alternating assignment / finite-difference descent on the matched cost.
// Revolute: axis (2 DOF, tangent space) and origin (2 DOF, plane normal to
// the axis). Prismatic: axis only. The descent runs from psi0 and from a
// circle/line fit of the executed waypoints, keeping whichever lands lower,
// so the result never increases the objective.
JointParams refine_parameters(const JointParams& psi0, const Trajectory& actual,
                              const PlanTemplate& plan_template, const RefineConfig& config);
JointParams refine_parameters(const JointParams& psi0, const std::vector<Trajectory>& actuals,
                              const std::vector<PlanTemplate>& templates,
                              const RefineConfig& config);

}  // namespace articukit
