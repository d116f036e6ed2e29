#include "articukit/planner.hpp"

#include "articukit/kinematics.hpp"
#include "articukit/rng.hpp"

#include <algorithm>
#include <cmath>

namespace articukit {

namespace {

// Signed rotation angle about u that carries a onto b (both projected off u).
double signed_angle_about(const Vec3& u, const Vec3& a, const Vec3& b) {
  Vec3 ap = a - u * u.dot(a);
  Vec3 bp = b - u * u.dot(b);
  if (ap.norm() < 1e-12 || bp.norm() < 1e-12) return 0.0;
  return std::atan2(u.dot(ap.cross(bp)), ap.dot(bp));
}

// Displacement in [lo, hi] whose contact position is nearest the waypoint.
double project_to_manifold(const JointParams& joint, const Vec3& local_grasp, const Vec3& target,
                           double lo, double hi, double current) {
  if (joint.type == JointType::Prismatic) {
    return std::clamp(joint.axis_dir.dot(target - local_grasp), lo, hi);
  }
  Vec3 a = local_grasp - joint.origin;
  Vec3 b = target - joint.origin;
  Vec3 ap = a - joint.axis_dir * joint.axis_dir.dot(a);
  Vec3 bp = b - joint.axis_dir * joint.axis_dir.dot(b);
  if (ap.norm() < 1e-12 || bp.norm() < 1e-12) return current;  // on-axis grasp: no leverage
  double base = std::atan2(joint.axis_dir.dot(ap.cross(bp)), ap.dot(bp));

  bool found = false;
  double best = lo;
  for (int k = -1; k <= 1; ++k) {
    double cand = base + 2.0 * M_PI * k;
    if (cand < lo || cand > hi) continue;
    if (!found || std::abs(cand - current) < std::abs(best - current)) {
      best = cand;
      found = true;
    }
  }
  if (found) return best;
  double at_lo = (apply_joint_displacement(local_grasp, joint, lo) - target).norm();
  double at_hi = (apply_joint_displacement(local_grasp, joint, hi) - target).norm();
  return at_lo <= at_hi ? lo : hi;
}

}  // namespace

void validate_config(const PlanConfig& config) {
  if (config.H < 1 || config.H >= config.L) {
    throw ValidationError("plan config: need 1 <= H < L");
  }
  if (config.max_iterations < 1) throw ValidationError("plan config: max_iterations >= 1");
  if (config.execution_noise_sigma < 0.0) {
    throw ValidationError("plan config: noise sigma must be nonnegative");
  }
  if (config.objective_tol < 0.0 || config.axis_update_tol_deg < 0.0 ||
      config.target_tol < 0.0) {
    throw ValidationError("plan config: tolerances must be nonnegative");
  }
}

Trajectory plan_trajectory(const JointParams& psi, const Vec3& grasp_point, double current,
                           double target, int L) {
  if (L < 1) throw ValidationError("plan_trajectory: L must be >= 1");
  JointParams joint = make_joint(psi.axis_dir, psi.origin, psi.type);

  Trajectory out;
  out.displacements.resize(L);
  out.waypoints.resize(L);
  const double span = target - current;
  for (int i = 0; i < L; ++i) {
    double d = current + span * static_cast<double>(i + 1) / static_cast<double>(L);
    if (i == L - 1) d = target;
    out.displacements[static_cast<std::size_t>(i)] = d;
    out.waypoints[static_cast<std::size_t>(i)] =
        apply_joint_displacement(grasp_point, joint, d - current);
  }
  return out;
}

Trajectory execute_steps(ArticulatedObject& sim, int part_id, const Vec3& grasp_point,
                         const Trajectory& planned, int H, double noise_sigma,
                         std::uint64_t rng_seed) {
  if (H < 1 || H > static_cast<int>(planned.size())) {
    throw ValidationError("execute_steps: need 1 <= H <= planned length");
  }
  if (noise_sigma < 0.0) throw ValidationError("execute_steps: negative noise sigma");
  if (!sim.on_part_surface(part_id, grasp_point, 1e-6)) {
    throw ContactLostError("execute_steps: grasp point is not on part " +
                           std::to_string(part_id));
  }

  const PartSpec& part = sim.part(part_id);
  const Vec3 local_grasp = sim.to_local(part_id, grasp_point);
  std::mt19937_64 gen(rng_seed);

  Trajectory actual;
  actual.waypoints.reserve(H);
  actual.displacements.reserve(H);
  for (int k = 0; k < H; ++k) {
    double d = project_to_manifold(part.joint, local_grasp, planned.waypoints[k], part.state_lo,
                                   part.state_hi, sim.state(part_id));
    sim.set_joint_state(part_id, d);
    Vec3 pos = sim.to_world(part_id, local_grasp);
    if (noise_sigma > 0.0) pos += rng::gaussian3(gen, noise_sigma);
    actual.waypoints.push_back(pos);
    actual.displacements.push_back(d);
  }
  return actual;
}

RunLog receding_horizon_run(ArticulatedObject& scene, int part_id, const JointParams& initial_psi,
                            const GraspCandidate& grasp, const PlanConfig& config) {
  validate_config(config);
  JointParams psi = make_joint(initial_psi.axis_dir, initial_psi.origin, initial_psi.type);
  const JointParams true_psi = scene.joint(part_id);

  if (!scene.on_part_surface(part_id, grasp.point, 1e-6)) {
    throw ContactLostError("receding_horizon_run: grasp point is not on part " +
                           std::to_string(part_id));
  }
  // The gripper follows this material point for the whole run.
  const Vec3 local_grasp = scene.to_local(part_id, grasp.point);

  double cur_est = scene.state(part_id);
  const Vec3 run_root = scene.to_world(part_id, local_grasp);
  const double run_state0 = scene.state(part_id);
  std::vector<Trajectory> actual_blocks;
  std::vector<PlanTemplate> templates;

  RunLog log;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const Vec3 root = scene.to_world(part_id, local_grasp);
    Trajectory planned =
        plan_trajectory(psi, root, cur_est, config.target_displacement, config.L);
    Trajectory actual = execute_steps(scene, part_id, root, planned, config.H,
                                      config.execution_noise_sigma,
                                      rng::child_seed(config.rng_seed, iter));

    // Re-plan columns are anchored at the run's first contact position with
    // the displacements the executor reports, cumulative from the starting
    // state, never the commanded ones. Commanded deltas pin the origin away
    // from the true axis line, and anchoring each block at its own root lets
    // a tilted axis fit every short local arc to within the noise while
    // drifting freely; one shared anchor makes the whole traveled arc vote.
    PlanTemplate tpl;
    tpl.grasp_point = run_root;
    tpl.displacements.reserve(actual.size());
    for (double d : actual.displacements) tpl.displacements.push_back(d - run_state0);
    templates.push_back(std::move(tpl));
    actual_blocks.push_back(actual);

    JointParams next = refine_parameters(psi, actual_blocks, templates, config.refine);
    double axis_update_deg = axis_angular_error_deg(psi.axis_dir, next.axis_dir);
    psi = next;

    RunIteration rec;
    rec.psi_estimate = psi;
    rec.planned = std::move(planned);
    rec.actual = actual;
    rec.objective = trajectory_objective(psi, actual_blocks, templates).value;
    rec.axis_error_deg = axis_angular_error_deg(psi.axis_dir, true_psi.axis_dir);
    rec.origin_error_m =
        (psi.type == JointType::Revolute && true_psi.type == JointType::Revolute)
            ? axis_origin_error_m(psi, true_psi)
            : 0.0;
    log.iterations.push_back(std::move(rec));

    // Proprioceptive displacement update: how far the (exactly known) gripper
    // moved, measured in the current model's coordinate.
    const Vec3 root_after = scene.to_world(part_id, local_grasp);
    if (psi.type == JointType::Revolute) {
      cur_est += signed_angle_about(psi.axis_dir, root - psi.origin, root_after - psi.origin);
    } else {
      cur_est += psi.axis_dir.dot(root_after - root);
    }

    bool reached = std::abs(cur_est - config.target_displacement) <= config.target_tol;
    bool settled = log.iterations.back().objective < config.objective_tol ||
                   axis_update_deg < config.axis_update_tol_deg;
    if (reached || settled) {
      log.converged = true;
      break;
    }
  }
  log.final_psi = psi;
  return log;
}

}  // namespace articukit
