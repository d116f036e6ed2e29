#include "articukit/losses.hpp"

#include <cmath>

namespace articukit {

namespace {
constexpr double kProbTol = 1e-6;
constexpr double kLogFloor = 1e-12;
constexpr double kZeroNorm = 1e-12;
constexpr double kUnitTol = 1e-6;
}  // namespace

double focal_loss(const Eigen::Vector3d& class_probs, Semantic true_class, double gamma,
                  double alpha) {
  if (gamma < 0.0 || alpha <= 0.0) throw ValidationError("focal_loss: gamma >= 0, alpha > 0");
  if ((class_probs.array() < -kProbTol).any() ||
      std::abs(class_probs.sum() - 1.0) > kProbTol) {
    throw ValidationError("focal_loss: class_probs is not a probability simplex");
  }
  double p_t = std::max(class_probs[static_cast<int>(true_class)], kLogFloor);
  return -alpha * std::pow(1.0 - p_t, gamma) * std::log(p_t);
}

double vector_loss(const Vec3& pred, const Vec3& gt) {
  double dist = (pred - gt).norm();
  double np = pred.norm();
  double ng = gt.norm();
  double cosine = (np < kZeroNorm || ng < kZeroNorm) ? 0.0 : pred.dot(gt) / (np * ng);
  return dist - cosine;
}

double direction_loss(const Vec3& pred_dir, const Vec3& gt_dir) {
  if (std::abs(pred_dir.norm() - 1.0) > kUnitTol || std::abs(gt_dir.norm() - 1.0) > kUnitTol) {
    throw ValidationError("direction_loss: inputs must be unit vectors");
  }
  return 1.0 - pred_dir.dot(gt_dir);
}

LossBreakdown total_loss(const PerPointFields& pred, const PerPointFields& gt, double gamma,
                         double alpha) {
  const std::size_t n = gt.size();
  if (pred.size() != n) throw ValidationError("total_loss: field lengths differ");
  if (n == 0) throw ValidationError("total_loss: empty fields");

  LossBreakdown out;
  for (std::size_t i = 0; i < n; ++i) {
    Semantic truth = gt.predicted_class(i);
    out.seg += focal_loss(pred.class_probs[i], truth, gamma, alpha);
    if (truth == Semantic::Static) continue;
    out.offset += vector_loss(pred.offset[i], gt.offset[i]);
    out.projection += vector_loss(pred.projection[i], gt.projection[i]);
    out.direction += direction_loss(pred.axis_dir[i].normalized(), gt.axis_dir[i]);
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  out.seg *= inv_n;
  out.offset *= inv_n;
  out.projection *= inv_n;
  out.direction *= inv_n;
  out.total = out.seg + out.offset + out.projection + out.direction;
  return out;
}

}  // namespace articukit
