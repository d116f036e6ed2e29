#pragma once

#include "articukit/types.hpp"
#include "articukit/voting.hpp"

#include <vector>

namespace articukit {

struct GraspCandidate {
  Vec3 point{0.0, 0.0, 0.0};
  Vec3 approach_dir{0.0, 0.0, 1.0};  // unit
  double score = 0.0;                // in [0, 1]
};

// Moment-arm heuristic: revolute parts favor points far from the axis line
// (r / r_max over the part); prismatic parts score 1 everywhere.
double actionability_score(const Vec3& point, const JointEstimate& estimate, double r_max);

// Top-k part points by score (ties by index). approach_dir comes from
// `normals` when provided, else points outward from the part centroid.
std::vector<GraspCandidate> propose_candidates(const std::vector<Vec3>& part_points,
                                               const JointEstimate& estimate, int k,
                                               const std::vector<Vec3>& normals = {});

}  // namespace articukit
