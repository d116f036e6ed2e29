#include "articukit/voting.hpp"

#include "articukit/kinematics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace articukit {

namespace {

// A couple of power-iteration steps sharpen the eigensolver result; when the
// scatter matrix is (numerically) rank one this lands on the exact direction.
Vec3 polish_principal(const Eigen::Matrix3d& scatter, Vec3 v) {
  for (int k = 0; k < 2; ++k) {
    Vec3 w = scatter * v;
    double n = w.norm();
    if (n < 1e-30) break;
    v = w / n;
  }
  return v;
}

Vec3 principal_direction(const Eigen::Matrix3d& scatter) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(scatter);
  Vec3 v = solver.eigenvectors().col(2);  // eigenvalues ascending
  return polish_principal(scatter, v).normalized();
}

}  // namespace

Vec3 vote_axis_direction(const std::vector<Vec3>& dirs) {
  if (dirs.empty()) throw ValidationError("vote_axis_direction: no votes");
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const Vec3& d : dirs) scatter += d * d.transpose();
  Vec3 u = principal_direction(scatter);
  if (u.dot(dirs.front()) < 0.0) u = -u;
  return u;
}

AxisLineFit fit_axis_line(const std::vector<Vec3>& points) {
  if (points.size() < 2) throw ValidationError("fit_axis_line: need >= 2 points");
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  double spread_sq = 0.0;
  for (const Vec3& p : points) {
    Vec3 d = p - centroid;
    scatter += d * d.transpose();
    spread_sq += d.squaredNorm();
  }
  if (spread_sq < 1e-24) throw ValidationError("fit_axis_line: points are coincident");

  AxisLineFit fit;
  fit.dir = principal_direction(scatter);
  fit.point = centroid;
  double residual_sq = 0.0;
  for (const Vec3& p : points) {
    Vec3 d = p - centroid;
    residual_sq += (d - fit.dir * fit.dir.dot(d)).squaredNorm();
  }
  fit.residual_rms = std::sqrt(residual_sq / static_cast<double>(points.size()));
  return fit;
}

JointType classify_joint_type(const std::vector<Semantic>& semantics) {
  std::size_t revolute = 0, prismatic = 0;
  for (Semantic s : semantics) {
    if (s == Semantic::Revolute) ++revolute;
    if (s == Semantic::Prismatic) ++prismatic;
  }
  if (revolute + prismatic == 0) throw ValidationError("classify_joint_type: no movable votes");
  return revolute >= prismatic ? JointType::Revolute : JointType::Prismatic;
}

JointEstimate vote_joint(const std::vector<Vec3>& part_points, const PerPointFields& fields,
                         int min_support) {
  const std::size_t n = part_points.size();
  if (fields.size() != n) throw ValidationError("vote_joint: fields misaligned with points");
  if (static_cast<int>(n) < min_support) {
    throw ValidationError("vote_joint: insufficient support (" + std::to_string(n) + " < " +
                          std::to_string(min_support) + ")");
  }

  std::vector<Semantic> semantics(n);
  for (std::size_t i = 0; i < n; ++i) semantics[i] = fields.predicted_class(i);
  JointType type = classify_joint_type(semantics);

  std::vector<Vec3> dirs(n);
  for (std::size_t i = 0; i < n; ++i) dirs[i] = fields.axis_dir[i].normalized();
  Vec3 axis = vote_axis_direction(dirs);

  double disp_sq = 0.0;
  for (const Vec3& d : dirs) {
    double c = std::clamp(std::abs(d.dot(axis)), 0.0, 1.0);
    double ang = std::acos(c);
    disp_sq += ang * ang;
  }

  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : part_points) centroid += p;
  centroid /= static_cast<double>(n);

  JointEstimate est;
  est.support = static_cast<int>(n);
  est.direction_dispersion = std::sqrt(disp_sq / static_cast<double>(n));

  if (type == JointType::Prismatic) {
    est.params = make_joint(axis, centroid, JointType::Prismatic);
    est.origin_rms = 0.0;
    return est;
  }

  // Points shifted onto the axis line; keep the TLS point, use the voted
  // direction, then take the line point closest to the part centroid.
  std::vector<Vec3> on_axis(n);
  for (std::size_t i = 0; i < n; ++i) on_axis[i] = part_points[i] + fields.projection[i];
  Vec3 line_point = Vec3::Zero();
  for (const Vec3& p : on_axis) line_point += p;
  line_point /= static_cast<double>(n);

  Vec3 origin = line_point + axis * axis.dot(centroid - line_point);
  est.params = make_joint(axis, origin, JointType::Revolute);

  double res_sq = 0.0;
  for (const Vec3& p : on_axis) {
    Vec3 d = p - line_point;
    res_sq += (d - axis * axis.dot(d)).squaredNorm();
  }
  est.origin_rms = std::sqrt(res_sq / static_cast<double>(n));
  return est;
}

}  // namespace articukit
