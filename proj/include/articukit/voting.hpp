#pragma once

#include "articukit/scene.hpp"
#include "articukit/types.hpp"

#include <vector>

namespace articukit {

inline constexpr int kDefaultMinSupport = 10;

struct JointEstimate {
  JointParams params;
  int support = 0;                    // points that voted
  double direction_dispersion = 0.0;  // RMS angular deviation of votes, radians
  double origin_rms = 0.0;            // RMS distance of projected points to the fitted line
};

struct AxisLineFit {
  Vec3 dir{0.0, 0.0, 1.0};  // unit
  Vec3 point{0.0, 0.0, 0.0};
  double residual_rms = 0.0;
};

// Principal eigenvector of the vote outer-product sum; sign fixed to agree
// with the first vote. Robust to mixed-sign votes.
Vec3 vote_axis_direction(const std::vector<Vec3>& dirs);

// Total-least-squares line through >= 2 distinct points.
AxisLineFit fit_axis_line(const std::vector<Vec3>& points);

// Aggregates one part's per-point votes into a joint estimate.
JointEstimate vote_joint(const std::vector<Vec3>& part_points, const PerPointFields& fields,
                         int min_support = kDefaultMinSupport);

// Majority vote among movable classes; ties resolve to Revolute.
JointType classify_joint_type(const std::vector<Semantic>& semantics);

}  // namespace articukit
