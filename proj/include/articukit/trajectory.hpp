#pragma once

#include "articukit/types.hpp"

#include <vector>

namespace articukit {

// Contact-point path: waypoint i corresponds to joint displacement i.
struct Trajectory {
  std::vector<Vec3> waypoints;
  std::vector<double> displacements;

  std::size_t size() const { return waypoints.size(); }
};

// Everything needed to regenerate a plan under a candidate psi: the contact
// point the plan was rooted at, and the displacement deltas relative to it.
struct PlanTemplate {
  Vec3 grasp_point{0.0, 0.0, 0.0};
  std::vector<double> displacements;
};

}  // namespace articukit
