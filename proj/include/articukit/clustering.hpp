#pragma once

#include "articukit/scene.hpp"
#include "articukit/types.hpp"

#include <vector>

namespace articukit {

enum class FeatureMode { OffsetOnly, ProjectionOnly, Concat };

struct ClusterParams {
  double eps = 0.05;       // meters
  int min_pts = 10;
  FeatureMode feature_mode = FeatureMode::Concat;
};

struct PartSegmentation {
  std::vector<int> cluster_id;     // -1 = noise / static
  std::vector<Semantic> semantic;  // predicted class per point
  int n_clusters = 0;

  std::vector<std::size_t> cluster_members(int id) const;
};

// Classic DBSCAN over rows of `features`. Closed neighborhoods (<= eps),
// ascending-index scan, border points join the first cluster that reaches
// them; noise is -1. Cluster ids are contiguous from 0 in creation order.
std::vector<int> dbscan(const Eigen::MatrixXd& features, double eps, int min_pts);

// Gates points by predicted class, clusters each movable class separately on
// the shifted features (p+offset and/or p+projection), then renumbers
// clusters globally by descending size (ties: smallest member index).
PartSegmentation segment_parts(const std::vector<Vec3>& points, const PerPointFields& fields,
                               const ClusterParams& params);

// Greedy IoU matching of predicted clusters against ground-truth parts.
struct ClusterMatch {
  int pred = -1;     // predicted cluster id
  int gt = 0;        // ground-truth part id
  double iou = 0.0;
};
std::vector<ClusterMatch> match_clusters(const PartSegmentation& pred,
                                         const std::vector<int>& gt_part_id,
                                         double iou_threshold);

// Per-scene surrogate: TP / (predictions + unmatched gt parts); 1.0 iff the
// partition is perfect at the threshold.
double segmentation_ap(const PartSegmentation& pred, const std::vector<int>& gt_part_id,
                       double iou_threshold);

const char* feature_mode_name(FeatureMode mode);
FeatureMode feature_mode_from_name(const std::string& name);

}  // namespace articukit
