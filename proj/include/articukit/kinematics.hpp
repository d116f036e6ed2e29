#pragma once

#include "articukit/types.hpp"

namespace articukit {

// Operations below require axis directions unit to this tolerance.
inline constexpr double kUnitAxisTol = 1e-9;

// Rotates v by angle about a unit direction through the coordinate origin
// (Rodrigues formula). No axis validation; callers pass normalized axes.
Vec3 rodrigues(const Vec3& v, const Vec3& unit_axis, double angle);

// Rotates p about the joint's axis line by theta (radians). Points on the
// axis line are fixed for every theta.
Vec3 rotate_about_axis(const Vec3& p, const JointParams& joint, double theta);

// Shifts p by delta (meters) along the joint axis direction.
Vec3 translate_along_axis(const Vec3& p, const JointParams& joint, double delta);

// rotate_about_axis or translate_along_axis depending on joint type.
Vec3 apply_joint_displacement(const Vec3& p, const JointParams& joint, double displacement);

struct AxisProjection {
  Vec3 foot;            // closest point on the axis line
  Vec3 projection_vec;  // foot - p, perpendicular to the axis
};

AxisProjection project_point_to_axis(const Vec3& p, const JointParams& joint);

// Unoriented angle between two axis directions, in degrees, in [0, 90].
double axis_angular_error_deg(const Vec3& u_est, const Vec3& u_gt);

// Distance from est.origin to the ground-truth axis line, in meters.
// Both joints must be revolute; a prismatic origin is not identifiable.
double axis_origin_error_m(const JointParams& est, const JointParams& gt);

namespace detail {
void require_unit_axis(const Vec3& axis, const char* who);
}

}  // namespace articukit
