#include "articukit/kinematics.hpp"
#include "articukit/planner.hpp"
#include "articukit/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace articukit;

namespace {

constexpr double kRoot2 = 1.4142135623730951;

ObjectSpec door_spec() {
  ObjectSpec spec;
  spec.static_shape = {Vec3(0, 0, 0), Vec3(0.4, 0.3, 0.5)};
  PartSpec part;
  part.part_id = 1;
  part.joint = make_joint(Vec3(0, 0, 1), Vec3(0.4, 0.3, 0.0), JointType::Revolute);
  part.shape = {Vec3(0.0, 0.33, 0.0), Vec3(0.36, 0.015, 0.22)};
  part.state_lo = 0.0;
  part.state_hi = M_PI / 2.0;
  spec.parts.push_back(part);
  return spec;
}

// A grasp on the panel's outer face, far from the hinge.
const Vec3 kDoorGrasp(-0.3, 0.345, 0.05);

JointParams tilted(const JointParams& psi, double axis_deg, const Vec3& origin_shift) {
  Vec3 e1, e2;
  rng::perpendicular_basis(psi.axis_dir, e1, e2);
  Vec3 u = rodrigues(psi.axis_dir, e1, axis_deg * M_PI / 180.0);
  return make_joint(u, psi.origin + origin_shift, psi.type);
}

}  // namespace

TEST_SUITE("planner") {

TEST_CASE("revolute plan hand values") {
  JointParams psi = make_joint(Vec3(0, 0, 1), Vec3::Zero(), JointType::Revolute);
  Trajectory plan = plan_trajectory(psi, Vec3(1, 0, 0), 0.0, M_PI / 2.0, 2);
  REQUIRE(plan.size() == 2);
  CHECK(plan.displacements[0] == doctest::Approx(M_PI / 4.0).epsilon(1e-12));
  CHECK(plan.displacements[1] == M_PI / 2.0);
  CHECK((plan.waypoints[0] - Vec3(kRoot2 / 2.0, kRoot2 / 2.0, 0)).norm() <= 1e-12);
  CHECK((plan.waypoints[1] - Vec3(0, 1, 0)).norm() <= 1e-12);
}

TEST_CASE("prismatic plan hand values") {
  JointParams psi = make_joint(Vec3(0, 1, 0), Vec3::Zero(), JointType::Prismatic);
  Vec3 g(0.2, 0.0, -0.1);
  Trajectory plan = plan_trajectory(psi, g, 0.0, 0.4, 4);
  REQUIRE(plan.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(plan.displacements[i] == doctest::Approx(0.1 * (i + 1)).epsilon(1e-12));
    CHECK((plan.waypoints[i] - (g + plan.displacements[i] * Vec3(0, 1, 0))).norm() <= 1e-12);
  }
  CHECK(plan.displacements.back() == 0.4);  // endpoint is exact, not accumulated
}

TEST_CASE("plan edge cases") {
  JointParams psi = make_joint(Vec3(0, 0, 1), Vec3::Zero(), JointType::Revolute);
  Trajectory single = plan_trajectory(psi, Vec3(1, 0, 0), 0.2, 0.9, 1);
  REQUIRE(single.size() == 1);
  CHECK(single.displacements[0] == 0.9);

  Trajectory still = plan_trajectory(psi, Vec3(1, 0, 0), 0.7, 0.7, 3);
  for (const Vec3& w : still.waypoints) CHECK((w - Vec3(1, 0, 0)).norm() <= 1e-12);
  for (double d : still.displacements) CHECK(d == 0.7);

  CHECK_THROWS_AS(plan_trajectory(psi, Vec3(1, 0, 0), 0.0, 1.0, 0), ValidationError);
  JointParams bad{Vec3(1, 1, 0), Vec3::Zero(), JointType::Revolute};
  CHECK_THROWS_AS(plan_trajectory(bad, Vec3(1, 0, 0), 0.0, 1.0, 3), ValidationError);
}

TEST_CASE("revolute waypoints stay on the grasp circle") {
  JointParams psi = make_joint(Vec3(1, 2, 2).normalized(), Vec3(0.3, -0.1, 0.2),
                               JointType::Revolute);
  Vec3 g(1.0, 0.5, -0.4);
  Trajectory plan = plan_trajectory(psi, g, 0.1, 1.3, 8);
  double r0 = project_point_to_axis(g, psi).projection_vec.norm();
  double h0 = psi.axis_dir.dot(g - psi.origin);
  for (const Vec3& w : plan.waypoints) {
    CHECK(project_point_to_axis(w, psi).projection_vec.norm() ==
          doctest::Approx(r0).epsilon(1e-9));
    CHECK(psi.axis_dir.dot(w - psi.origin) == doctest::Approx(h0).epsilon(1e-9));
  }
}

TEST_CASE("executing the true plan reproduces it") {
  ArticulatedObject sim = build_object(door_spec());
  Trajectory plan = plan_trajectory(sim.joint(1), kDoorGrasp, 0.0, 1.0, 6);
  Trajectory actual = execute_steps(sim, 1, kDoorGrasp, plan, 6, 0.0, 0);
  REQUIRE(actual.size() == 6);
  for (std::size_t i = 0; i < actual.size(); ++i) {
    CHECK((actual.waypoints[i] - plan.waypoints[i]).norm() <= 1e-9);
    CHECK(actual.displacements[i] == doctest::Approx(plan.displacements[i]).epsilon(1e-12));
  }
  CHECK(sim.state(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("wrong-axis plans drift further at each step") {
  ArticulatedObject sim = build_object(door_spec());
  JointParams wrong = tilted(sim.joint(1), 10.0, Vec3::Zero());
  Trajectory plan = plan_trajectory(wrong, kDoorGrasp, 0.0, 1.2, 6);
  Trajectory actual = execute_steps(sim, 1, kDoorGrasp, plan, 6, 0.0, 0);
  double first = (actual.waypoints.front() - plan.waypoints.front()).norm();
  double last = (actual.waypoints.back() - plan.waypoints.back()).norm();
  CHECK(first > 0.0);
  CHECK(last > first);
  CHECK(last > 1e-3);
}

TEST_CASE("execution clamps to the joint limits") {
  ArticulatedObject sim = build_object(door_spec());
  const double hi = M_PI / 2.0;
  Trajectory plan = plan_trajectory(sim.joint(1), kDoorGrasp, 0.0, 2.0, 5);
  Trajectory actual = execute_steps(sim, 1, kDoorGrasp, plan, 5, 0.0, 0);
  for (double d : actual.displacements) CHECK(d <= hi + 1e-12);
  CHECK(actual.displacements[3] == doctest::Approx(hi).epsilon(1e-12));
  CHECK(actual.displacements[4] == doctest::Approx(hi).epsilon(1e-12));
  CHECK((actual.waypoints[3] - actual.waypoints[4]).norm() <= 1e-12);
  CHECK(sim.state(1) == doctest::Approx(hi).epsilon(1e-12));
}

TEST_CASE("execution rejects grasps off the part") {
  ArticulatedObject sim = build_object(door_spec());
  Trajectory plan = plan_trajectory(sim.joint(1), Vec3(5, 5, 5), 0.0, 1.0, 4);
  CHECK_THROWS_AS(execute_steps(sim, 1, Vec3(5, 5, 5), plan, 2, 0.0, 0), ContactLostError);
  Trajectory good = plan_trajectory(sim.joint(1), kDoorGrasp, 0.0, 1.0, 4);
  CHECK_THROWS_AS(execute_steps(sim, 1, kDoorGrasp, good, 0, 0.0, 0), ValidationError);
  CHECK_THROWS_AS(execute_steps(sim, 1, kDoorGrasp, good, 5, 0.0, 0), ValidationError);
  CHECK_THROWS_AS(execute_steps(sim, 1, kDoorGrasp, good, 2, -0.1, 0), ValidationError);
}

TEST_CASE("plan config validation") {
  PlanConfig config;
  config.L = 5;
  config.H = 5;
  CHECK_THROWS_AS(validate_config(config), ValidationError);
  config.H = 0;
  CHECK_THROWS_AS(validate_config(config), ValidationError);
  config.H = 2;
  config.max_iterations = 0;
  CHECK_THROWS_AS(validate_config(config), ValidationError);
  config.max_iterations = 5;
  config.execution_noise_sigma = -1.0;
  CHECK_THROWS_AS(validate_config(config), ValidationError);
}

TEST_CASE("receding horizon with the true model converges immediately") {
  ArticulatedObject scene = build_object(door_spec());
  GraspCandidate grasp;
  grasp.point = kDoorGrasp;
  PlanConfig config;
  config.L = 10;
  config.H = 3;
  config.target_displacement = 1.2;
  config.rng_seed = 5;

  RunLog log = receding_horizon_run(scene, 1, scene.joint(1), grasp, config);
  CHECK(log.converged);
  REQUIRE(log.iterations.size() == 1);
  CHECK(log.iterations[0].objective < 1e-9);
  CHECK(log.iterations[0].axis_error_deg <= 1e-9);
  CHECK(log.iterations[0].origin_error_m <= 1e-9);
}

TEST_CASE("receding horizon repairs a perturbed model") {
  ArticulatedObject scene = build_object(door_spec());
  JointParams psi0 = tilted(scene.joint(1), 5.0, Vec3(0.02, 0.0, 0.0));
  GraspCandidate grasp;
  grasp.point = kDoorGrasp;
  PlanConfig config;
  config.L = 10;
  config.H = 3;
  config.target_displacement = 1.2;
  config.rng_seed = 11;

  RunLog log = receding_horizon_run(scene, 1, psi0, grasp, config);
  REQUIRE(!log.iterations.empty());
  CHECK(log.converged);
  for (std::size_t t = 1; t < log.iterations.size(); ++t) {
    CHECK(log.iterations[t].objective <= log.iterations[t - 1].objective + 1e-12);
  }
  CHECK(log.iterations.back().axis_error_deg < 1.0);
  CHECK(log.iterations.back().origin_error_m < 0.005);
  CHECK(axis_angular_error_deg(log.final_psi.axis_dir, scene.joint(1).axis_dir) < 1.0);
  // The scene actually moved, inside its limits.
  CHECK(scene.state(1) > 0.0);
  CHECK(scene.state(1) <= M_PI / 2.0 + 1e-12);
  for (const RunIteration& it : log.iterations) {
    for (double d : it.actual.displacements) {
      CHECK(d >= 0.0);
      CHECK(d <= M_PI / 2.0 + 1e-12);
    }
  }
}

TEST_CASE("iteration budget of one leaves the run unconverged") {
  ArticulatedObject scene = build_object(door_spec());
  JointParams psi0 = tilted(scene.joint(1), 12.0, Vec3(0.04, 0.0, 0.0));
  GraspCandidate grasp;
  grasp.point = kDoorGrasp;
  PlanConfig config;
  config.L = 10;
  config.H = 3;
  config.target_displacement = 1.2;
  config.max_iterations = 1;
  config.execution_noise_sigma = 0.01;
  config.rng_seed = 7;
  config.objective_tol = 1e-12;
  config.axis_update_tol_deg = 1e-12;

  RunLog log = receding_horizon_run(scene, 1, psi0, grasp, config);
  CHECK(log.iterations.size() == 1);
  CHECK_FALSE(log.converged);
}

TEST_CASE("receding horizon rejects a floating grasp") {
  ArticulatedObject scene = build_object(door_spec());
  GraspCandidate grasp;
  grasp.point = Vec3(3, 3, 3);
  PlanConfig config;
  config.L = 4;
  config.H = 2;
  config.target_displacement = 0.5;
  CHECK_THROWS_AS(receding_horizon_run(scene, 1, scene.joint(1), grasp, config),
                  ContactLostError);
}

}  // TEST_SUITE
