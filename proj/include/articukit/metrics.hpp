#pragma once

#include "articukit/clustering.hpp"
#include "articukit/types.hpp"
#include "articukit/voting.hpp"

#include <map>
#include <utility>
#include <vector>

namespace articukit {

struct SceneEvaluation {
  double ap75 = 0.0;
  double type_accuracy = 0.0;       // defined iff n_matched > 0
  double mean_axis_error_deg = 0.0; // over matched parts
  double mean_origin_error_m = 0.0; // over matched revolute/revolute pairs
  int n_matched = 0;
  int n_origin_pairs = 0;
};

// Table-style batch metrics. Aggregates are plain means over the scenes
// where the metric is defined.
struct ModelingReport {
  int n_scenes = 0;
  double ap75 = 0.0;
  double type_accuracy = 0.0;
  double mean_axis_error_deg = 0.0;
  double mean_origin_error_m = 0.0;
  std::vector<SceneEvaluation> per_scene;
};

struct SceneEstimates {
  PartSegmentation segmentation;
  std::vector<std::pair<int, JointEstimate>> estimates;  // cluster id -> estimate
};

struct SceneGroundTruth {
  std::vector<int> part_id;           // per point, 0 = static
  std::map<int, JointParams> joints;  // part id -> true parameters
};

// Matches predicted clusters to ground-truth parts at the IoU threshold,
// then scores joint type / axis / origin over the matched pairs only.
ModelingReport evaluate_modeling(const std::vector<SceneEstimates>& estimates,
                                 const std::vector<SceneGroundTruth>& gt,
                                 double iou_threshold = 0.75);

}  // namespace articukit
