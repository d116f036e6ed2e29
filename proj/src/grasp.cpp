#include "articukit/grasp.hpp"

#include "articukit/kinematics.hpp"

#include <algorithm>
#include <numeric>

namespace articukit {

double actionability_score(const Vec3& point, const JointEstimate& estimate, double r_max) {
  if (estimate.params.type == JointType::Prismatic) return 1.0;
  if (r_max < 1e-12) return 0.0;
  double r = project_point_to_axis(point, estimate.params).projection_vec.norm();
  return std::clamp(r / r_max, 0.0, 1.0);
}

std::vector<GraspCandidate> propose_candidates(const std::vector<Vec3>& part_points,
                                               const JointEstimate& estimate, int k,
                                               const std::vector<Vec3>& normals) {
  if (part_points.empty()) throw ValidationError("propose_candidates: empty part");
  if (k < 1) throw ValidationError("propose_candidates: k must be >= 1");
  if (!normals.empty() && normals.size() != part_points.size()) {
    throw ValidationError("propose_candidates: normals misaligned with points");
  }
  const std::size_t n = part_points.size();

  double r_max = 0.0;
  if (estimate.params.type == JointType::Revolute) {
    for (const Vec3& p : part_points) {
      r_max = std::max(r_max, project_point_to_axis(p, estimate.params).projection_vec.norm());
    }
  }

  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : part_points) centroid += p;
  centroid /= static_cast<double>(n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) {
    score[i] = actionability_score(part_points[i], estimate, r_max);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

  std::vector<GraspCandidate> out;
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), n);
  out.reserve(take);
  for (std::size_t r = 0; r < take; ++r) {
    const std::size_t i = order[r];
    GraspCandidate cand;
    cand.point = part_points[i];
    cand.score = score[i];
    if (!normals.empty()) {
      cand.approach_dir = normals[i].normalized();
    } else {
      Vec3 d = part_points[i] - centroid;
      cand.approach_dir = d.norm() > 1e-12 ? Vec3(d.normalized()) : Vec3(0.0, 0.0, 1.0);
    }
    out.push_back(cand);
  }
  return out;
}

}  // namespace articukit
