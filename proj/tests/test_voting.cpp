#include "articukit/kinematics.hpp"
#include "articukit/rng.hpp"
#include "articukit/voting.hpp"

#include <doctest.h>

#include <cmath>

using namespace articukit;

namespace {

ObjectSpec hinge_spec() {
  ObjectSpec spec;
  spec.static_shape = {Vec3(0, 0, 0), Vec3(0.4, 0.3, 0.5)};
  PartSpec part;
  part.part_id = 1;
  part.joint = make_joint(Vec3(0, 0, 1), Vec3(0.4, 0.0, 0.0), JointType::Revolute);
  part.shape = {Vec3(0.0, 0.33, 0.0), Vec3(0.36, 0.015, 0.22)};
  part.state_hi = M_PI / 2.0;
  spec.parts.push_back(part);
  return spec;
}

ObjectSpec slide_spec() {
  ObjectSpec spec;
  spec.static_shape = {Vec3(0, 0, 0), Vec3(0.3, 0.25, 0.3)};
  PartSpec part;
  part.part_id = 1;
  part.joint = make_joint(Vec3(0, 1, 0), Vec3(0, 0.25, 0.0), JointType::Prismatic);
  part.shape = {Vec3(0.0, 0.1, 0.0), Vec3(0.25, 0.2, 0.08)};
  part.state_hi = 0.25;
  spec.parts.push_back(part);
  return spec;
}

struct PartRows {
  std::vector<Vec3> points;
  PerPointFields fields;
};

PartRows part_rows(const PerPointFields& fields, const LabeledCloud& cloud, int part_id) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (cloud.part_id[i] == part_id) idx.push_back(i);
  }
  PartRows out;
  out.fields = subset_fields(fields, idx);
  for (std::size_t i : idx) out.points.push_back(cloud.points[i]);
  return out;
}

}  // namespace

TEST_SUITE("voting") {

TEST_CASE("unanimous direction votes pass through") {
  Vec3 u = Vec3(1, 2, -1).normalized();
  std::vector<Vec3> votes(10, u);
  CHECK((vote_axis_direction(votes) - u).norm() <= 1e-12);
  CHECK_THROWS_AS(vote_axis_direction({}), ValidationError);
}

TEST_CASE("mixed-sign votes recover the oriented axis") {
  Vec3 u(0, 0, 1);
  CHECK((vote_axis_direction({u, -u, u}) - u).norm() <= 1e-12);
  // The orientation follows the first vote.
  CHECK((vote_axis_direction({-u, u, u}) + u).norm() <= 1e-12);
}

TEST_CASE("noisy direction votes average out") {
  Vec3 u = Vec3(0.2, -0.4, 1.0).normalized();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 gen(seed);
    std::vector<Vec3> votes;
    Vec3 e1, e2;
    rng::perpendicular_basis(u, e1, e2);
    for (int i = 0; i < 1000; ++i) {
      double az = rng::uniform(gen, 0.0, 2.0 * M_PI);
      Vec3 tilt_axis = std::cos(az) * e1 + std::sin(az) * e2;
      Vec3 v = rodrigues(u, tilt_axis, 0.05 * rng::normal(gen));
      votes.push_back(rng::uniform01(gen) < 0.3 ? Vec3(-v) : v);
    }
    Vec3 got = vote_axis_direction(votes);
    CHECK(axis_angular_error_deg(got, u) < 0.5);
  }
}

TEST_CASE("line fit through exactly collinear points") {
  Vec3 d = Vec3(1, -2, 0.5).normalized();
  Vec3 p0(0.3, 0.1, -0.7);
  std::vector<Vec3> points;
  for (double t : {0.0, 0.5, 1.0, 2.0}) points.push_back(p0 + t * d);
  AxisLineFit fit = fit_axis_line(points);
  CHECK(axis_angular_error_deg(fit.dir, d) <= 1e-6);
  CHECK(fit.residual_rms <= 1e-9);
  // p0 lies on the fitted line.
  Vec3 rel = p0 - fit.point;
  CHECK((rel - fit.dir * fit.dir.dot(rel)).norm() <= 1e-9);
}

TEST_CASE("line fit edge cases") {
  std::vector<Vec3> two = {Vec3(0, 0, 0), Vec3(0, 4, 0)};
  AxisLineFit fit = fit_axis_line(two);
  CHECK(axis_angular_error_deg(fit.dir, Vec3(0, 1, 0)) <= 1e-9);
  CHECK((fit.point - Vec3(0, 2, 0)).norm() <= 1e-12);

  CHECK_THROWS_AS(fit_axis_line({Vec3(1, 1, 1)}), ValidationError);
  CHECK_THROWS_AS(fit_axis_line(std::vector<Vec3>(5, Vec3(1, 1, 1))), ValidationError);
}

TEST_CASE("joint type by majority, ties to revolute") {
  std::vector<Semantic> votes(90, Semantic::Revolute);
  votes.insert(votes.end(), 10, Semantic::Prismatic);
  CHECK(classify_joint_type(votes) == JointType::Revolute);

  votes.assign(50, Semantic::Revolute);
  votes.insert(votes.end(), 50, Semantic::Prismatic);
  CHECK(classify_joint_type(votes) == JointType::Revolute);

  votes.assign(30, Semantic::Prismatic);
  CHECK(classify_joint_type(votes) == JointType::Prismatic);

  // Static votes are ignored, not counted for either side.
  votes.assign(5, Semantic::Static);
  votes.insert(votes.end(), 2, Semantic::Prismatic);
  votes.insert(votes.end(), 1, Semantic::Revolute);
  CHECK(classify_joint_type(votes) == JointType::Prismatic);

  CHECK_THROWS_AS(classify_joint_type(std::vector<Semantic>(4, Semantic::Static)),
                  ValidationError);
  CHECK_THROWS_AS(classify_joint_type({}), ValidationError);
}

TEST_CASE("noiseless votes recover the hinge exactly") {
  ArticulatedObject obj = build_object(hinge_spec());
  obj.set_joint_state(1, 0.8);
  LabeledCloud cloud = sample_cloud(obj, 2000, 41);
  PerPointFields fields = ground_truth_fields(cloud, obj);
  PartRows rows = part_rows(fields, cloud, 1);
  REQUIRE(rows.points.size() >= 100);

  JointEstimate est = vote_joint(rows.points, rows.fields);
  CHECK(est.params.type == JointType::Revolute);
  CHECK(est.support == static_cast<int>(rows.points.size()));
  CHECK(axis_angular_error_deg(est.params.axis_dir, Vec3(0, 0, 1)) <= 1e-9);
  CHECK(axis_origin_error_m(est.params, obj.joint(1)) <= 1e-9);
  CHECK(est.direction_dispersion <= 1e-9);
  CHECK(est.origin_rms <= 1e-9);
}

TEST_CASE("noiseless prismatic votes") {
  ArticulatedObject obj = build_object(slide_spec());
  LabeledCloud cloud = sample_cloud(obj, 1500, 23);
  PerPointFields fields = ground_truth_fields(cloud, obj);
  PartRows rows = part_rows(fields, cloud, 1);
  JointEstimate est = vote_joint(rows.points, rows.fields);
  CHECK(est.params.type == JointType::Prismatic);
  CHECK(axis_angular_error_deg(est.params.axis_dir, Vec3(0, 1, 0)) <= 1e-9);
  // Prismatic origin is the part centroid (any point works for the model).
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : rows.points) centroid += p;
  centroid /= static_cast<double>(rows.points.size());
  CHECK((est.params.origin - centroid).norm() <= 1e-9);
}

TEST_CASE("corrupted votes stay inside the accuracy budget") {
  ArticulatedObject obj = build_object(hinge_spec());
  obj.set_joint_state(1, 0.6);
  LabeledCloud cloud = sample_cloud(obj, 4000, 3);
  PerPointFields fields = ground_truth_fields(cloud, obj);
  PartRows rows = part_rows(fields, cloud, 1);
  REQUIRE(rows.points.size() >= 500);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    NoiseModel noise;
    noise.projection_sigma = 0.01;
    noise.axis_dir_sigma = 0.05;
    noise.rng_seed = seed;
    CorruptedFields corrupted = corrupt_fields(rows.fields, noise);
    JointEstimate est = vote_joint(rows.points, corrupted.fields);
    CHECK(axis_angular_error_deg(est.params.axis_dir, Vec3(0, 0, 1)) < 1.0);
    CHECK(axis_origin_error_m(est.params, obj.joint(1)) < 0.01);
    CHECK(est.direction_dispersion > 0.0);
  }
}

TEST_CASE("support gate and alignment checks") {
  ArticulatedObject obj = build_object(hinge_spec());
  LabeledCloud cloud = sample_cloud(obj, 400, 6);
  PerPointFields fields = ground_truth_fields(cloud, obj);
  PartRows rows = part_rows(fields, cloud, 1);

  std::vector<Vec3> five(rows.points.begin(), rows.points.begin() + 5);
  std::vector<std::size_t> idx = {0, 1, 2, 3, 4};
  PerPointFields five_fields = subset_fields(rows.fields, idx);
  CHECK_THROWS_AS(vote_joint(five, five_fields, 10), ValidationError);
  CHECK_THROWS_AS(vote_joint(five, rows.fields, 3), ValidationError);
}

TEST_CASE("voting is translation equivariant") {
  ArticulatedObject obj = build_object(hinge_spec());
  obj.set_joint_state(1, 0.4);
  LabeledCloud cloud = sample_cloud(obj, 1200, 14);
  PerPointFields fields = ground_truth_fields(cloud, obj);
  PartRows rows = part_rows(fields, cloud, 1);

  JointEstimate base = vote_joint(rows.points, rows.fields);
  Vec3 t(0.7, -1.3, 2.1);
  std::vector<Vec3> shifted = rows.points;
  for (Vec3& p : shifted) p += t;
  JointEstimate moved = vote_joint(shifted, rows.fields);

  CHECK((moved.params.axis_dir - base.params.axis_dir).norm() <= 1e-12);
  CHECK((moved.params.origin - (base.params.origin + t)).norm() <= 1e-9);
  CHECK(moved.origin_rms == doctest::Approx(base.origin_rms).epsilon(1e-9));
}

}  // TEST_SUITE
