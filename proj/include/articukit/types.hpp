#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>

namespace articukit {

using Vec3 = Eigen::Vector3d;

// Contract violations (bad parameters, malformed documents, mismatched
// inputs). The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem and parse failures. The CLI maps these to exit code 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// The executor was asked to drive a grasp point that is not on the part.
class ContactLostError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class JointType { Revolute = 1, Prismatic = 2 };

// Per-point segmentation class. Values are the on-disk class ids.
enum class Semantic : int { Static = 0, Revolute = 1, Prismatic = 2 };

inline Semantic to_semantic(JointType type) {
  return type == JointType::Revolute ? Semantic::Revolute : Semantic::Prismatic;
}

// One-DOF joint: axis line (unit direction through origin) plus type.
// axis_dir is kept exactly unit length; build instances with make_joint.
struct JointParams {
  Vec3 axis_dir{0.0, 0.0, 1.0};
  Vec3 origin{0.0, 0.0, 0.0};
  JointType type{JointType::Revolute};
};

// Renormalizes axis_dir when its length is within 1e-6 of 1 and rejects
// anything further off.
JointParams make_joint(const Vec3& axis_dir, const Vec3& origin, JointType type);

const char* joint_type_name(JointType type);
JointType joint_type_from_name(const std::string& name);

}  // namespace articukit
