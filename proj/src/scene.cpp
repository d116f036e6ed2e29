#include "articukit/scene.hpp"

#include "articukit/kinematics.hpp"
#include "articukit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace articukit {

namespace {

void require_positive_extents(const Box& box, const char* what) {
  if (!(box.half_extents.array() > 0.0).all()) {
    throw ValidationError(std::string(what) + ": half-extents must be positive");
  }
}

// Signed distance to the box surface in its own frame (< 0 inside).
double box_sdf(const Box& box, const Vec3& local) {
  Vec3 d = (local - box.center).cwiseAbs() - box.half_extents;
  double outside = d.cwiseMax(0.0).norm();
  double inside = std::min(d.maxCoeff(), 0.0);
  return outside + inside;
}

struct FaceRef {
  int part_id;   // 0 = static body
  int axis;      // face normal axis
  double sign;   // +1 or -1
  double area;
};

const Box& shape_of(const ArticulatedObject& obj, int part_id) {
  return part_id == 0 ? obj.spec().static_shape : obj.part(part_id).shape;
}

}  // namespace

Semantic PerPointFields::predicted_class(std::size_t i) const {
  const Eigen::Vector3d& p = class_probs[i];
  int best = 0;
  for (int c = 1; c < 3; ++c) {
    if (p[c] > p[best]) best = c;
  }
  return static_cast<Semantic>(best);
}

void validate_spec(const ObjectSpec& spec) {
  require_positive_extents(spec.static_shape, "static_shape");
  if (spec.parts.empty()) throw ValidationError("object spec needs at least one part");
  std::set<int> ids;
  for (const PartSpec& part : spec.parts) {
    if (part.part_id <= 0) throw ValidationError("part_id must be >= 1");
    if (!ids.insert(part.part_id).second) {
      throw ValidationError("duplicate part_id " + std::to_string(part.part_id));
    }
    require_positive_extents(part.shape, "part shape");
    if (!(part.state_lo <= part.state_hi)) {
      throw ValidationError("state range lo > hi for part " + std::to_string(part.part_id));
    }
  }
}

void validate_noise(const NoiseModel& noise) {
  if (noise.class_flip_prob < 0.0 || noise.class_flip_prob > 1.0) {
    throw ValidationError("class_flip_prob outside [0,1]");
  }
  if (noise.offset_sigma < 0.0 || noise.projection_sigma < 0.0 || noise.axis_dir_sigma < 0.0) {
    throw ValidationError("noise sigmas must be nonnegative");
  }
  if (noise.dropout_frac < 0.0 || noise.dropout_frac >= 1.0) {
    throw ValidationError("dropout_frac outside [0,1)");
  }
}

ArticulatedObject::ArticulatedObject(ObjectSpec spec) : spec_(std::move(spec)) {
  for (PartSpec& part : spec_.parts) {
    part.joint = make_joint(part.joint.axis_dir, part.joint.origin, part.joint.type);
  }
  validate_spec(spec_);
  state_.reserve(spec_.parts.size());
  for (const PartSpec& part : spec_.parts) state_.push_back(part.state_lo);
}

std::size_t ArticulatedObject::index_of(int part_id) const {
  for (std::size_t i = 0; i < spec_.parts.size(); ++i) {
    if (spec_.parts[i].part_id == part_id) return i;
  }
  throw ValidationError("unknown part_id " + std::to_string(part_id));
}

bool ArticulatedObject::has_part(int part_id) const {
  for (const PartSpec& part : spec_.parts) {
    if (part.part_id == part_id) return true;
  }
  return false;
}

const PartSpec& ArticulatedObject::part(int part_id) const { return spec_.parts[index_of(part_id)]; }

double ArticulatedObject::state(int part_id) const { return state_[index_of(part_id)]; }

void ArticulatedObject::set_joint_state(int part_id, double displacement) {
  std::size_t i = index_of(part_id);
  const PartSpec& part = spec_.parts[i];
  if (displacement < part.state_lo || displacement > part.state_hi) {
    throw ValidationError("displacement outside joint limits for part " +
                          std::to_string(part_id));
  }
  state_[i] = displacement;
}

Vec3 ArticulatedObject::to_world(int part_id, const Vec3& local) const {
  if (part_id == 0) return local;
  std::size_t i = index_of(part_id);
  return apply_joint_displacement(local, spec_.parts[i].joint, state_[i]);
}

Vec3 ArticulatedObject::to_local(int part_id, const Vec3& world) const {
  if (part_id == 0) return world;
  std::size_t i = index_of(part_id);
  return apply_joint_displacement(world, spec_.parts[i].joint, -state_[i]);
}

bool ArticulatedObject::on_part_surface(int part_id, const Vec3& world, double tol) const {
  const Box& box = shape_of(*this, part_id);
  return std::abs(box_sdf(box, to_local(part_id, world))) <= tol;
}

SurfaceSample sample_surface(const ArticulatedObject& obj, std::size_t n_points,
                             std::uint64_t rng_seed) {
  if (n_points < 1) throw ValidationError("n_points must be >= 1");

  std::vector<FaceRef> faces;
  std::vector<int> body_ids{0};
  for (const PartSpec& part : obj.parts()) body_ids.push_back(part.part_id);
  for (int id : body_ids) {
    const Vec3& he = shape_of(obj, id).half_extents;
    for (int axis = 0; axis < 3; ++axis) {
      double area = 4.0 * he[(axis + 1) % 3] * he[(axis + 2) % 3];
      faces.push_back({id, axis, +1.0, area});
      faces.push_back({id, axis, -1.0, area});
    }
  }
  std::vector<double> cum(faces.size());
  double total = 0.0;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    total += faces[i].area;
    cum[i] = total;
  }

  std::mt19937_64 gen(rng_seed);
  SurfaceSample out;
  out.cloud.points.reserve(n_points);
  out.cloud.part_id.reserve(n_points);
  out.cloud.semantic.reserve(n_points);
  out.normals.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    double pick = rng::uniform01(gen) * total;
    std::size_t f = std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin();
    if (f >= faces.size()) f = faces.size() - 1;
    const FaceRef& face = faces[f];
    const Box& box = shape_of(obj, face.part_id);
    int b = (face.axis + 1) % 3;
    int c = (face.axis + 2) % 3;
    Vec3 local = box.center;
    local[face.axis] += face.sign * box.half_extents[face.axis];
    local[b] += rng::uniform(gen, -1.0, 1.0) * box.half_extents[b];
    local[c] += rng::uniform(gen, -1.0, 1.0) * box.half_extents[c];

    Vec3 normal = Vec3::Zero();
    normal[face.axis] = face.sign;
    Semantic sem = Semantic::Static;
    if (face.part_id != 0) {
      const PartSpec& part = obj.part(face.part_id);
      sem = to_semantic(part.joint.type);
      if (part.joint.type == JointType::Revolute) {
        normal = rodrigues(normal, part.joint.axis_dir, obj.state(face.part_id));
      }
    }
    out.cloud.points.push_back(obj.to_world(face.part_id, local));
    out.cloud.part_id.push_back(face.part_id);
    out.cloud.semantic.push_back(sem);
    out.normals.push_back(normal);
  }
  return out;
}

LabeledCloud sample_cloud(const ArticulatedObject& obj, std::size_t n_points,
                          std::uint64_t rng_seed) {
  return sample_surface(obj, n_points, rng_seed).cloud;
}

SurfaceSample cull_backfacing(const SurfaceSample& sample, const Vec3& viewpoint) {
  SurfaceSample out;
  for (std::size_t i = 0; i < sample.cloud.size(); ++i) {
    if (sample.normals[i].dot(viewpoint - sample.cloud.points[i]) > 0.0) {
      out.cloud.points.push_back(sample.cloud.points[i]);
      out.cloud.part_id.push_back(sample.cloud.part_id[i]);
      out.cloud.semantic.push_back(sample.cloud.semantic[i]);
      out.normals.push_back(sample.normals[i]);
    }
  }
  return out;
}

PerPointFields ground_truth_fields(const LabeledCloud& cloud, const ArticulatedObject& obj) {
  const std::size_t n = cloud.size();
  if (cloud.part_id.size() != n || cloud.semantic.size() != n) {
    throw ValidationError("cloud arrays have mismatched lengths");
  }

  std::map<int, Vec3> centroid_sum;
  std::map<int, std::size_t> centroid_count;
  for (std::size_t i = 0; i < n; ++i) {
    int id = cloud.part_id[i];
    if (id == 0) continue;
    if (!obj.has_part(id)) throw ValidationError("cloud references unknown part_id");
    if (cloud.semantic[i] != to_semantic(obj.joint(id).type)) {
      throw ValidationError("cloud semantic inconsistent with joint type");
    }
    centroid_sum.try_emplace(id, Vec3::Zero()).first->second += cloud.points[i];
    ++centroid_count[id];
  }
  std::map<int, Vec3> centroid;
  for (const auto& [id, sum] : centroid_sum) {
    centroid[id] = sum / static_cast<double>(centroid_count[id]);
  }

  PerPointFields fields;
  fields.class_probs.assign(n, Eigen::Vector3d(1.0, 0.0, 0.0));
  fields.offset.assign(n, Vec3::Zero());
  fields.projection.assign(n, Vec3::Zero());
  fields.axis_dir.assign(n, Vec3(0.0, 0.0, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    int id = cloud.part_id[i];
    if (id == 0) continue;
    const JointParams& joint = obj.joint(id);
    Eigen::Vector3d probs = Eigen::Vector3d::Zero();
    probs[static_cast<int>(cloud.semantic[i])] = 1.0;
    fields.class_probs[i] = probs;
    fields.offset[i] = centroid[id] - cloud.points[i];
    fields.projection[i] = project_point_to_axis(cloud.points[i], joint).projection_vec;
    fields.axis_dir[i] = joint.axis_dir;
  }
  return fields;
}

CorruptedFields corrupt_fields(const PerPointFields& fields, const NoiseModel& noise) {
  validate_noise(noise);
  const std::size_t n = fields.size();
  CorruptedFields out;
  out.fields = fields;
  std::mt19937_64 gen(noise.rng_seed);

  for (std::size_t i = 0; i < n; ++i) {
    if (noise.class_flip_prob > 0.0 && rng::uniform01(gen) < noise.class_flip_prob) {
      int truth = static_cast<int>(fields.predicted_class(i));
      int other = static_cast<int>(rng::index(gen, 2));       // 0 or 1
      int flipped = (truth + 1 + other) % 3;                  // uniform over the other two
      Eigen::Vector3d probs = Eigen::Vector3d::Zero();
      probs[flipped] = 1.0;
      out.fields.class_probs[i] = probs;
    }
    if (noise.offset_sigma > 0.0) {
      out.fields.offset[i] += rng::gaussian3(gen, noise.offset_sigma);
    }
    if (noise.projection_sigma > 0.0) {
      out.fields.projection[i] += rng::gaussian3(gen, noise.projection_sigma);
    }
    if (noise.axis_dir_sigma > 0.0) {
      Vec3 d = out.fields.axis_dir[i].normalized();
      Vec3 e1, e2;
      rng::perpendicular_basis(d, e1, e2);
      double az = rng::uniform(gen, 0.0, 2.0 * M_PI);
      Vec3 tilt_axis = std::cos(az) * e1 + std::sin(az) * e2;
      double angle = std::abs(noise.axis_dir_sigma * rng::normal(gen));
      out.fields.axis_dir[i] = rodrigues(d, tilt_axis, angle).normalized();
    }
  }

  out.kept.resize(n);
  std::iota(out.kept.begin(), out.kept.end(), std::size_t{0});
  if (noise.dropout_frac > 0.0) {
    const std::size_t n_drop =
        static_cast<std::size_t>(std::llround(noise.dropout_frac * static_cast<double>(n)));
    for (std::size_t j = 0; j < n_drop && j < n; ++j) {
      std::size_t k = j + rng::index(gen, n - j);
      std::swap(out.kept[j], out.kept[k]);
    }
    out.kept.erase(out.kept.begin(), out.kept.begin() + std::min(n_drop, n));
    std::sort(out.kept.begin(), out.kept.end());
    out.fields = subset_fields(out.fields, out.kept);
  }
  return out;
}

LabeledCloud subset_cloud(const LabeledCloud& cloud, const std::vector<std::size_t>& indices) {
  LabeledCloud out;
  out.points.reserve(indices.size());
  out.part_id.reserve(indices.size());
  out.semantic.reserve(indices.size());
  for (std::size_t i : indices) {
    out.points.push_back(cloud.points.at(i));
    out.part_id.push_back(cloud.part_id.at(i));
    out.semantic.push_back(cloud.semantic.at(i));
  }
  return out;
}

PerPointFields subset_fields(const PerPointFields& fields, const std::vector<std::size_t>& indices) {
  PerPointFields out;
  out.class_probs.reserve(indices.size());
  out.offset.reserve(indices.size());
  out.projection.reserve(indices.size());
  out.axis_dir.reserve(indices.size());
  for (std::size_t i : indices) {
    out.class_probs.push_back(fields.class_probs.at(i));
    out.offset.push_back(fields.offset.at(i));
    out.projection.push_back(fields.projection.at(i));
    out.axis_dir.push_back(fields.axis_dir.at(i));
  }
  return out;
}

}  // namespace articukit
