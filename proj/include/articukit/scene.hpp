#pragma once

#include "articukit/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace articukit {

// Axis-aligned box in its authored (zero-displacement) pose.
struct Box {
  Vec3 center{0.0, 0.0, 0.0};
  Vec3 half_extents{0.1, 0.1, 0.1};
};

struct PartSpec {
  int part_id = 1;  // must be >= 1; 0 is reserved for static points
  JointParams joint;
  Box shape;
  double state_lo = 0.0;
  double state_hi = 0.0;  // radians (revolute) or meters (prismatic)
};

struct ObjectSpec {
  Box static_shape;
  std::vector<PartSpec> parts;
  std::uint64_t rng_seed = 0;
};

struct LabeledCloud {
  std::vector<Vec3> points;
  std::vector<int> part_id;        // 0 = static
  std::vector<Semantic> semantic;  // consistent with the owning joint type

  std::size_t size() const { return points.size(); }
};

// Per-point predictions (oracle or corrupted). Row i describes cloud point i.
struct PerPointFields {
  std::vector<Eigen::Vector3d> class_probs;  // simplex over {static, revolute, prismatic}
  std::vector<Vec3> offset;                  // toward the part's sampled centroid
  std::vector<Vec3> projection;              // toward the joint axis line
  std::vector<Vec3> axis_dir;                // unit; (0,0,1) sentinel for static points

  std::size_t size() const { return class_probs.size(); }
  Semantic predicted_class(std::size_t i) const;
};

// Corruption magnitudes standing in for backbone prediction error.
struct NoiseModel {
  double class_flip_prob = 0.0;   // in [0, 1]
  double offset_sigma = 0.0;      // meters
  double projection_sigma = 0.0;  // meters
  double axis_dir_sigma = 0.0;    // radians
  double dropout_frac = 0.0;      // in [0, 1)
  std::uint64_t rng_seed = 0;
};

// Parametric articulated object with one mutable displacement per part.
// Displacements start at each part's state_lo.
class ArticulatedObject {
 public:
  explicit ArticulatedObject(ObjectSpec spec);

  const ObjectSpec& spec() const { return spec_; }
  std::size_t part_count() const { return spec_.parts.size(); }
  const std::vector<PartSpec>& parts() const { return spec_.parts; }

  const PartSpec& part(int part_id) const;
  const JointParams& joint(int part_id) const { return part(part_id).joint; }
  bool has_part(int part_id) const;

  double state(int part_id) const;
  // Throws ValidationError when displacement is outside [state_lo, state_hi].
  void set_joint_state(int part_id, double displacement);

  // Maps between a part's authored frame and the world at the current state.
  Vec3 to_world(int part_id, const Vec3& local) const;
  Vec3 to_local(int part_id, const Vec3& world) const;

  // True when world lies on the part's box surface (current pose) within tol.
  bool on_part_surface(int part_id, const Vec3& world, double tol) const;

 private:
  std::size_t index_of(int part_id) const;

  ObjectSpec spec_;
  std::vector<double> state_;
};

inline ArticulatedObject build_object(ObjectSpec spec) { return ArticulatedObject(std::move(spec)); }

struct SurfaceSample {
  LabeledCloud cloud;
  std::vector<Vec3> normals;  // outward face normal at each point, current pose
};

// Uniform-by-area sampling over every box face at the object's current
// state. Deterministic for a fixed seed.
SurfaceSample sample_surface(const ArticulatedObject& obj, std::size_t n_points,
                             std::uint64_t rng_seed);
LabeledCloud sample_cloud(const ArticulatedObject& obj, std::size_t n_points,
                          std::uint64_t rng_seed);

// Cheap partial-view stand-in: keeps points whose outward normal faces the
// viewpoint.
SurfaceSample cull_backfacing(const SurfaceSample& sample, const Vec3& viewpoint);

// Exact per-point fields. Static points carry one-hot static probabilities,
// zero offset/projection and the (0,0,1) sentinel direction.
PerPointFields ground_truth_fields(const LabeledCloud& cloud, const ArticulatedObject& obj);

struct CorruptedFields {
  PerPointFields fields;
  std::vector<std::size_t> kept;  // ascending indices into the input rows
};

// Applies the noise model; dropout removes rows, so `kept` tells the caller
// which cloud points still align with the result.
CorruptedFields corrupt_fields(const PerPointFields& fields, const NoiseModel& noise);

LabeledCloud subset_cloud(const LabeledCloud& cloud, const std::vector<std::size_t>& indices);
PerPointFields subset_fields(const PerPointFields& fields, const std::vector<std::size_t>& indices);

void validate_spec(const ObjectSpec& spec);
void validate_noise(const NoiseModel& noise);

}  // namespace articukit
