#pragma once

#include "articukit/scene.hpp"
#include "articukit/types.hpp"

namespace articukit {

struct LossBreakdown {
  double seg = 0.0;
  double offset = 0.0;
  double projection = 0.0;
  double direction = 0.0;
  double total = 0.0;
};

inline constexpr double kDefaultFocalGamma = 2.0;
inline constexpr double kDefaultFocalAlpha = 1.0;

// -alpha * (1 - p_t)^gamma * log(p_t), log clamped at p_t >= 1e-12.
double focal_loss(const Eigen::Vector3d& class_probs, Semantic true_class, double gamma,
                  double alpha);

// ||pred - gt|| - cos(pred, gt); the cosine term is 0 when either norm < 1e-12.
// Shared by the offset and projection terms.
double vector_loss(const Vec3& pred, const Vec3& gt);

// 1 - pred . gt on oriented unit vectors; range [0, 2].
double direction_loss(const Vec3& pred_dir, const Vec3& gt_dir);

// Per-term means over all N points. Static ground-truth points contribute
// only to the segmentation term; their other terms are masked to zero.
LossBreakdown total_loss(const PerPointFields& pred, const PerPointFields& gt,
                         double gamma = kDefaultFocalGamma, double alpha = kDefaultFocalAlpha);

}  // namespace articukit
