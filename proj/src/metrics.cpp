#include "articukit/metrics.hpp"

#include "articukit/kinematics.hpp"

#include <algorithm>

namespace articukit {

ModelingReport evaluate_modeling(const std::vector<SceneEstimates>& estimates,
                                 const std::vector<SceneGroundTruth>& gt,
                                 double iou_threshold) {
  if (estimates.empty() || estimates.size() != gt.size()) {
    throw ValidationError("evaluate_modeling: empty batch or misaligned inputs");
  }

  ModelingReport report;
  report.n_scenes = static_cast<int>(estimates.size());
  double ap_sum = 0.0, type_sum = 0.0, axis_sum = 0.0, origin_sum = 0.0;
  int type_scenes = 0, axis_scenes = 0, origin_scenes = 0;

  for (std::size_t s = 0; s < estimates.size(); ++s) {
    const SceneEstimates& est = estimates[s];
    const SceneGroundTruth& truth = gt[s];

    SceneEvaluation eval;
    eval.ap75 = segmentation_ap(est.segmentation, truth.part_id, iou_threshold);
    std::vector<ClusterMatch> matches =
        match_clusters(est.segmentation, truth.part_id, iou_threshold);

    int correct_type = 0;
    double axis_err = 0.0, origin_err = 0.0;
    int n_axis = 0, n_origin = 0;
    for (const ClusterMatch& match : matches) {
      auto it = std::find_if(est.estimates.begin(), est.estimates.end(),
                             [&](const auto& e) { return e.first == match.pred; });
      if (it == est.estimates.end()) continue;  // cluster below voting support
      const JointEstimate& joint_est = it->second;
      auto gt_it = truth.joints.find(match.gt);
      if (gt_it == truth.joints.end()) {
        throw ValidationError("evaluate_modeling: ground truth missing part " +
                              std::to_string(match.gt));
      }
      const JointParams& gt_joint = gt_it->second;

      ++eval.n_matched;
      if (joint_est.params.type == gt_joint.type) ++correct_type;
      axis_err += axis_angular_error_deg(joint_est.params.axis_dir, gt_joint.axis_dir);
      ++n_axis;
      if (joint_est.params.type == JointType::Revolute &&
          gt_joint.type == JointType::Revolute) {
        origin_err += axis_origin_error_m(joint_est.params, gt_joint);
        ++n_origin;
      }
    }

    if (eval.n_matched > 0) {
      eval.type_accuracy = static_cast<double>(correct_type) / eval.n_matched;
      type_sum += eval.type_accuracy;
      ++type_scenes;
    }
    if (n_axis > 0) {
      eval.mean_axis_error_deg = axis_err / n_axis;
      axis_sum += eval.mean_axis_error_deg;
      ++axis_scenes;
    }
    if (n_origin > 0) {
      eval.n_origin_pairs = n_origin;
      eval.mean_origin_error_m = origin_err / n_origin;
      origin_sum += eval.mean_origin_error_m;
      ++origin_scenes;
    }
    ap_sum += eval.ap75;
    report.per_scene.push_back(eval);
  }

  report.ap75 = ap_sum / report.n_scenes;
  report.type_accuracy = type_scenes > 0 ? type_sum / type_scenes : 0.0;
  report.mean_axis_error_deg = axis_scenes > 0 ? axis_sum / axis_scenes : 0.0;
  report.mean_origin_error_m = origin_scenes > 0 ? origin_sum / origin_scenes : 0.0;
  return report;
}

}  // namespace articukit
