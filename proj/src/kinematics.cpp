#include "articukit/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace articukit {

namespace detail {

void require_unit_axis(const Vec3& axis, const char* who) {
  if (std::abs(axis.norm() - 1.0) > kUnitAxisTol) {
    throw ValidationError(std::string(who) + ": axis_dir must be unit length");
  }
}

}  // namespace detail

JointParams make_joint(const Vec3& axis_dir, const Vec3& origin, JointType type) {
  const double norm = axis_dir.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw ValidationError("make_joint: axis_dir length " + std::to_string(norm) +
                          " is not within 1e-6 of unit");
  }
  JointParams joint;
  joint.axis_dir = axis_dir / norm;
  joint.origin = origin;
  joint.type = type;
  return joint;
}

const char* joint_type_name(JointType type) {
  return type == JointType::Revolute ? "revolute" : "prismatic";
}

JointType joint_type_from_name(const std::string& name) {
  if (name == "revolute") return JointType::Revolute;
  if (name == "prismatic") return JointType::Prismatic;
  throw ValidationError("unknown joint type \"" + name + "\"");
}

Vec3 rodrigues(const Vec3& v, const Vec3& unit_axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return v * c + unit_axis.cross(v) * s + unit_axis * (unit_axis.dot(v)) * (1.0 - c);
}

Vec3 rotate_about_axis(const Vec3& p, const JointParams& joint, double theta) {
  detail::require_unit_axis(joint.axis_dir, "rotate_about_axis");
  if (joint.type != JointType::Revolute) {
    throw ValidationError("rotate_about_axis: joint must be revolute");
  }
  return joint.origin + rodrigues(p - joint.origin, joint.axis_dir, theta);
}

Vec3 translate_along_axis(const Vec3& p, const JointParams& joint, double delta) {
  detail::require_unit_axis(joint.axis_dir, "translate_along_axis");
  if (joint.type != JointType::Prismatic) {
    throw ValidationError("translate_along_axis: joint must be prismatic");
  }
  return p + delta * joint.axis_dir;
}

Vec3 apply_joint_displacement(const Vec3& p, const JointParams& joint, double displacement) {
  return joint.type == JointType::Revolute ? rotate_about_axis(p, joint, displacement)
                                           : translate_along_axis(p, joint, displacement);
}

AxisProjection project_point_to_axis(const Vec3& p, const JointParams& joint) {
  detail::require_unit_axis(joint.axis_dir, "project_point_to_axis");
  const Vec3 foot = joint.origin + joint.axis_dir.dot(p - joint.origin) * joint.axis_dir;
  return AxisProjection{foot, foot - p};
}

double axis_angular_error_deg(const Vec3& u_est, const Vec3& u_gt) {
  const double ne = u_est.norm();
  const double ng = u_gt.norm();
  if (ne < kUnitAxisTol || ng < kUnitAxisTol) {
    throw ValidationError("axis_angular_error: zero-length direction");
  }
  const double cosine = std::clamp(std::abs(u_est.dot(u_gt)) / (ne * ng), 0.0, 1.0);
  return std::acos(cosine) * 180.0 / M_PI;
}

double axis_origin_error_m(const JointParams& est, const JointParams& gt) {
  if (est.type != JointType::Revolute || gt.type != JointType::Revolute) {
    throw ValidationError("axis_origin_error: origin is only identifiable for revolute joints");
  }
  detail::require_unit_axis(gt.axis_dir, "axis_origin_error");
  return (est.origin - gt.origin).cross(gt.axis_dir).norm();
}

}  // namespace articukit
