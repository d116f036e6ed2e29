#pragma once

#include "articukit/grasp.hpp"
#include "articukit/refine.hpp"
#include "articukit/scene.hpp"
#include "articukit/trajectory.hpp"
#include "articukit/types.hpp"

#include <cstdint>
#include <vector>

namespace articukit {

struct PlanConfig {
  int L = 10;                          // planned steps
  int H = 3;                           // executed steps, H < L
  double target_displacement = 0.0;    // absolute joint displacement to reach
  int max_iterations = 10;
  double execution_noise_sigma = 0.0;  // meters, on recorded waypoints
  std::uint64_t rng_seed = 0;
  double objective_tol = 1e-6;         // meters
  // Stop once refinement moves the axis less than this between iterations.
  // Off by default: with noisy executions a frozen estimate usually means the
  // early blocks are too short to work with, not that the model is right.
  double axis_update_tol_deg = 0.0;
  double target_tol = 1e-9;            // displacement units
  RefineConfig refine;
};

struct RunIteration {
  JointParams psi_estimate;
  Trajectory planned;
  Trajectory actual;
  double objective = 0.0;
  double axis_error_deg = 0.0;
  double origin_error_m = 0.0;
};

struct RunLog {
  std::vector<RunIteration> iterations;
  JointParams final_psi;
  bool converged = false;
};

// L waypoints of the grasp point under psi, evenly spaced in displacement
// from current (exclusive) to target (inclusive).
Trajectory plan_trajectory(const JointParams& psi, const Vec3& grasp_point, double current,
                           double target, int L);

// Drives the simulator through the first H planned waypoints. Each waypoint
// is projected onto the part's true motion manifold (closed form, clamped to
// the joint limits); the object advances and the true contact position is
// recorded with isotropic Gaussian noise. Throws ContactLostError when
// grasp_point does not lie on the part at the current state.
Trajectory execute_steps(ArticulatedObject& sim, int part_id, const Vec3& grasp_point,
                         const Trajectory& planned, int H, double noise_sigma,
                         std::uint64_t rng_seed);

// Plan L / execute H / refine on all actual waypoints so far, until the
// target displacement is reached, the objective or axis update drops below
// tolerance, or max_iterations. The scene's joint state advances in place.
RunLog receding_horizon_run(ArticulatedObject& scene, int part_id, const JointParams& initial_psi,
                            const GraspCandidate& grasp, const PlanConfig& config);

void validate_config(const PlanConfig& config);

}  // namespace articukit
