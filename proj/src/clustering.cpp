#include "articukit/clustering.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace articukit {

namespace {

constexpr int kUnvisited = -2;
constexpr int kNoise = -1;

std::vector<int> region_query(const Eigen::MatrixXd& features, int i, double eps_sq) {
  // Vectorized row sweep; includes the query point itself.
  Eigen::VectorXd d2 =
      (features.rowwise() - features.row(i)).rowwise().squaredNorm();
  std::vector<int> out;
  for (int j = 0; j < d2.size(); ++j) {
    if (d2[j] <= eps_sq) out.push_back(j);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> PartSegmentation::cluster_members(int id) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cluster_id.size(); ++i) {
    if (cluster_id[i] == id) out.push_back(i);
  }
  return out;
}

std::vector<int> dbscan(const Eigen::MatrixXd& features, double eps, int min_pts) {
  if (eps <= 0.0) throw ValidationError("dbscan: eps must be positive");
  if (min_pts < 1) throw ValidationError("dbscan: min_pts must be >= 1");
  const int n = static_cast<int>(features.rows());
  std::vector<int> labels(n, kUnvisited);
  const double eps_sq = eps * eps;

  int next_cluster = 0;
  for (int i = 0; i < n; ++i) {
    if (labels[i] != kUnvisited) continue;
    std::vector<int> neighbors = region_query(features, i, eps_sq);
    if (static_cast<int>(neighbors.size()) < min_pts) {
      labels[i] = kNoise;
      continue;
    }
    const int cluster = next_cluster++;
    labels[i] = cluster;
    std::deque<int> frontier(neighbors.begin(), neighbors.end());
    while (!frontier.empty()) {
      int q = frontier.front();
      frontier.pop_front();
      if (labels[q] == kNoise) labels[q] = cluster;  // border point
      if (labels[q] != kUnvisited) continue;
      labels[q] = cluster;
      std::vector<int> reach = region_query(features, q, eps_sq);
      if (static_cast<int>(reach.size()) >= min_pts) {
        frontier.insert(frontier.end(), reach.begin(), reach.end());
      }
    }
  }
  return labels;
}

PartSegmentation segment_parts(const std::vector<Vec3>& points, const PerPointFields& fields,
                               const ClusterParams& params) {
  if (params.eps <= 0.0) throw ValidationError("segment_parts: eps must be positive");
  if (params.min_pts < 1) throw ValidationError("segment_parts: min_pts must be >= 1");
  const std::size_t n = points.size();
  if (fields.size() != n) throw ValidationError("segment_parts: fields misaligned with cloud");

  PartSegmentation seg;
  seg.cluster_id.assign(n, kNoise);
  seg.semantic.resize(n);
  for (std::size_t i = 0; i < n; ++i) seg.semantic[i] = fields.predicted_class(i);

  struct RawCluster {
    std::vector<std::size_t> members;
    std::size_t min_index = 0;
  };
  std::vector<RawCluster> clusters;

  for (Semantic cls : {Semantic::Revolute, Semantic::Prismatic}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (seg.semantic[i] == cls) idx.push_back(i);
    }
    if (idx.empty()) continue;

    const int dim = params.feature_mode == FeatureMode::Concat ? 6 : 3;
    Eigen::MatrixXd feats(static_cast<int>(idx.size()), dim);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const std::size_t i = idx[r];
      Vec3 by_offset = points[i] + fields.offset[i];
      Vec3 by_projection = points[i] + fields.projection[i];
      switch (params.feature_mode) {
        case FeatureMode::OffsetOnly:
          feats.row(static_cast<int>(r)) = by_offset.transpose();
          break;
        case FeatureMode::ProjectionOnly:
          feats.row(static_cast<int>(r)) = by_projection.transpose();
          break;
        case FeatureMode::Concat:
          feats.row(static_cast<int>(r)) << by_offset.transpose(), by_projection.transpose();
          break;
      }
    }

    std::vector<int> local = dbscan(feats, params.eps, params.min_pts);
    std::map<int, RawCluster> by_label;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      if (local[r] < 0) continue;
      auto& rc = by_label[local[r]];
      if (rc.members.empty()) rc.min_index = idx[r];
      rc.members.push_back(idx[r]);
      rc.min_index = std::min(rc.min_index, idx[r]);
    }
    for (auto& [label, rc] : by_label) {
      if (static_cast<int>(rc.members.size()) >= params.min_pts) {
        clusters.push_back(std::move(rc));
      }
    }
  }

  std::sort(clusters.begin(), clusters.end(), [](const RawCluster& a, const RawCluster& b) {
    if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
    return a.min_index < b.min_index;
  });
  seg.n_clusters = static_cast<int>(clusters.size());
  for (int c = 0; c < seg.n_clusters; ++c) {
    for (std::size_t i : clusters[c].members) seg.cluster_id[i] = c;
  }
  return seg;
}

std::vector<ClusterMatch> match_clusters(const PartSegmentation& pred,
                                         const std::vector<int>& gt_part_id,
                                         double iou_threshold) {
  if (pred.cluster_id.size() != gt_part_id.size()) {
    throw ValidationError("match_clusters: length mismatch");
  }
  if (iou_threshold <= 0.0 || iou_threshold > 1.0) {
    throw ValidationError("match_clusters: iou_threshold outside (0,1]");
  }

  std::map<int, std::vector<std::size_t>> gt_members;
  for (std::size_t i = 0; i < gt_part_id.size(); ++i) {
    if (gt_part_id[i] > 0) gt_members[gt_part_id[i]].push_back(i);
  }

  struct Pair {
    double iou;
    int pred;
    int gt;
  };
  std::vector<Pair> pairs;
  for (int c = 0; c < pred.n_clusters; ++c) {
    std::vector<std::size_t> members = pred.cluster_members(c);
    for (const auto& [gid, gmem] : gt_members) {
      std::size_t inter = 0;
      for (std::size_t i : members) {
        if (gt_part_id[i] == gid) ++inter;
      }
      if (inter == 0) continue;
      double uni = static_cast<double>(members.size() + gmem.size() - inter);
      pairs.push_back({static_cast<double>(inter) / uni, c, gid});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gt < b.gt;
  });

  std::vector<ClusterMatch> matches;
  std::set<int> used_pred, used_gt;
  for (const Pair& p : pairs) {
    if (p.iou < iou_threshold) break;
    if (used_pred.count(p.pred) || used_gt.count(p.gt)) continue;
    used_pred.insert(p.pred);
    used_gt.insert(p.gt);
    matches.push_back({p.pred, p.gt, p.iou});
  }
  return matches;
}

double segmentation_ap(const PartSegmentation& pred, const std::vector<int>& gt_part_id,
                       double iou_threshold) {
  std::vector<ClusterMatch> matches = match_clusters(pred, gt_part_id, iou_threshold);
  std::set<int> gt_parts;
  for (int id : gt_part_id) {
    if (id > 0) gt_parts.insert(id);
  }
  const std::size_t tp = matches.size();
  const std::size_t unmatched_gt = gt_parts.size() - tp;
  const std::size_t denom = static_cast<std::size_t>(pred.n_clusters) + unmatched_gt;
  if (denom == 0) return 1.0;  // empty prediction on an empty scene
  return static_cast<double>(tp) / static_cast<double>(denom);
}

const char* feature_mode_name(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::OffsetOnly:
      return "offset_only";
    case FeatureMode::ProjectionOnly:
      return "projection_only";
    case FeatureMode::Concat:
      return "concat";
  }
  throw ValidationError("unknown feature mode");
}

FeatureMode feature_mode_from_name(const std::string& name) {
  if (name == "offset_only") return FeatureMode::OffsetOnly;
  if (name == "projection_only") return FeatureMode::ProjectionOnly;
  if (name == "concat") return FeatureMode::Concat;
  throw ValidationError("unknown feature mode: " + name);
}

}  // namespace articukit
