#include "articukit/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace articukit::io {

double round9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

json vec3_to_json(const Vec3& v) {
  return json::array({round9(v.x()), round9(v.y()), round9(v.z())});
}

Vec3 vec3_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number()) {
    throw ValidationError(field + ": expected an array of 3 numbers");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw IoError("cannot parse JSON in " + path);
  return j;
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path);
}

const json& require_field(const json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError("missing field \"" + key + "\"");
  return *it;
}

double number_field(const json& j, const std::string& key) {
  const json& v = require_field(j, key);
  if (!v.is_number()) throw ValidationError("field \"" + key + "\" must be a number");
  return v.get<double>();
}

double number_field_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? number_field(j, key) : fallback;
}

int int_field(const json& j, const std::string& key) {
  const json& v = require_field(j, key);
  if (!v.is_number_integer()) throw ValidationError("field \"" + key + "\" must be an integer");
  return v.get<int>();
}

int int_field_or(const json& j, const std::string& key, int fallback) {
  return j.contains(key) ? int_field(j, key) : fallback;
}

namespace {

void check_version(const json& j, const char* what) {
  if (int_field_or(j, "format_version", -1) != 1) {
    throw ValidationError(std::string(what) + ": unsupported or missing format_version");
  }
}

json box_to_json(const Box& box) {
  return json{{"center", vec3_to_json(box.center)},
              {"half_extents", vec3_to_json(box.half_extents)}};
}

Box box_from_json(const json& j, const std::string& field) {
  Box box;
  box.center = vec3_from_json(require_field(j, "center"), field + ".center");
  box.half_extents = vec3_from_json(require_field(j, "half_extents"), field + ".half_extents");
  return box;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

}  // namespace

json scene_to_json(const ObjectSpec& spec) {
  json parts = json::array();
  for (const PartSpec& part : spec.parts) {
    parts.push_back(json{{"part_id", part.part_id},
                         {"joint_type", joint_type_name(part.joint.type)},
                         {"axis_dir", vec3_to_json(part.joint.axis_dir)},
                         {"origin", vec3_to_json(part.joint.origin)},
                         {"shape", box_to_json(part.shape)},
                         {"state_range", json::array({round9(part.state_lo), round9(part.state_hi)})}});
  }
  return json{{"format_version", 1},
              {"rng_seed", spec.rng_seed},
              {"static_shape", box_to_json(spec.static_shape)},
              {"parts", parts}};
}

ObjectSpec scene_from_json(const json& j) {
  check_version(j, "scene");
  ObjectSpec spec;
  spec.rng_seed = require_field(j, "rng_seed").get<std::uint64_t>();
  spec.static_shape = box_from_json(require_field(j, "static_shape"), "static_shape");
  const json& parts = require_field(j, "parts");
  if (!parts.is_array()) throw ValidationError("parts: expected an array");
  for (const json& p : parts) {
    PartSpec part;
    part.part_id = int_field(p, "part_id");
    JointType type = joint_type_from_name(require_field(p, "joint_type").get<std::string>());
    Vec3 axis = vec3_from_json(require_field(p, "axis_dir"), "axis_dir");
    Vec3 origin = vec3_from_json(require_field(p, "origin"), "origin");
    part.joint = make_joint(axis, origin, type);
    part.shape = box_from_json(require_field(p, "shape"), "shape");
    const json& range = require_field(p, "state_range");
    if (!range.is_array() || range.size() != 2) {
      throw ValidationError("state_range: expected [lo, hi]");
    }
    part.state_lo = range[0].get<double>();
    part.state_hi = range[1].get<double>();
    spec.parts.push_back(part);
  }
  validate_spec(spec);
  return spec;
}

void write_scene(const std::string& path, const ObjectSpec& spec) {
  save_json(path, scene_to_json(spec));
}

ObjectSpec read_scene(const std::string& path) { return scene_from_json(load_json(path)); }

void write_cloud(const std::string& path, const LabeledCloud& cloud) {
  std::ofstream out = open_out(path);
  out << "# articukit-cloud v1 N=" << cloud.size() << '\n';
  char line[128];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    std::snprintf(line, sizeof line, "%.17g %.17g %.17g %d %d\n", p.x(), p.y(), p.z(),
                  cloud.part_id[i], static_cast<int>(cloud.semantic[i]));
    out << line;
  }
  if (!out) throw IoError("write failed for " + path);
}

LabeledCloud read_cloud(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string header;
  std::getline(in, header);
  std::size_t n = 0;
  if (std::sscanf(header.c_str(), "# articukit-cloud v1 N=%zu", &n) != 1) {
    throw ValidationError(path + ": bad cloud header");
  }
  LabeledCloud cloud;
  cloud.points.reserve(n);
  cloud.part_id.reserve(n);
  cloud.semantic.reserve(n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, y, z;
    int part, sem;
    if (std::sscanf(line.c_str(), "%lg %lg %lg %d %d", &x, &y, &z, &part, &sem) != 5) {
      throw ValidationError(path + ": bad cloud record: " + line);
    }
    if (sem < 0 || sem > 2) throw ValidationError(path + ": semantic out of range");
    cloud.points.emplace_back(x, y, z);
    cloud.part_id.push_back(part);
    cloud.semantic.push_back(static_cast<Semantic>(sem));
  }
  if (cloud.size() != n) {
    throw ValidationError(path + ": record count does not match header");
  }
  return cloud;
}

void write_segmentation(const std::string& path, const PartSegmentation& seg) {
  std::ofstream out = open_out(path);
  out << "# articukit-seg v1\n";
  for (std::size_t i = 0; i < seg.cluster_id.size(); ++i) {
    out << i << ' ' << seg.cluster_id[i] << ' ' << static_cast<int>(seg.semantic[i]) << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

PartSegmentation read_segmentation(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string header;
  std::getline(in, header);
  if (header.rfind("# articukit-seg v1", 0) != 0) {
    throw ValidationError(path + ": bad segmentation header");
  }
  PartSegmentation seg;
  std::string line;
  std::size_t expect = 0;
  int max_cluster = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t index;
    int cluster, sem;
    if (std::sscanf(line.c_str(), "%zu %d %d", &index, &cluster, &sem) != 3 || index != expect ||
        sem < 0 || sem > 2) {
      throw ValidationError(path + ": bad segmentation record: " + line);
    }
    seg.cluster_id.push_back(cluster);
    seg.semantic.push_back(static_cast<Semantic>(sem));
    max_cluster = std::max(max_cluster, cluster);
    ++expect;
  }
  seg.n_clusters = max_cluster + 1;
  return seg;
}

void write_fields(const std::string& path, const PerPointFields& fields) {
  std::ofstream out = open_out(path);
  out << "# articukit-fields v1 N=" << fields.size() << '\n';
  char line[512];
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const Eigen::Vector3d& c = fields.class_probs[i];
    const Vec3& o = fields.offset[i];
    const Vec3& v = fields.projection[i];
    const Vec3& d = fields.axis_dir[i];
    std::snprintf(line, sizeof line,
                  "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                  c[0], c[1], c[2], o.x(), o.y(), o.z(), v.x(), v.y(), v.z(), d.x(), d.y(),
                  d.z());
    out << line;
  }
  if (!out) throw IoError("write failed for " + path);
}

PerPointFields read_fields(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string header;
  std::getline(in, header);
  std::size_t n = 0;
  if (std::sscanf(header.c_str(), "# articukit-fields v1 N=%zu", &n) != 1) {
    throw ValidationError(path + ": bad fields header");
  }
  PerPointFields fields;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double a[12];
    if (std::sscanf(line.c_str(), "%lg %lg %lg %lg %lg %lg %lg %lg %lg %lg %lg %lg", &a[0],
                    &a[1], &a[2], &a[3], &a[4], &a[5], &a[6], &a[7], &a[8], &a[9], &a[10],
                    &a[11]) != 12) {
      throw ValidationError(path + ": bad fields record: " + line);
    }
    fields.class_probs.emplace_back(a[0], a[1], a[2]);
    fields.offset.emplace_back(a[3], a[4], a[5]);
    fields.projection.emplace_back(a[6], a[7], a[8]);
    fields.axis_dir.emplace_back(a[9], a[10], a[11]);
  }
  if (fields.size() != n) {
    throw ValidationError(path + ": record count does not match header");
  }
  return fields;
}

json psi_to_json(const JointParams& psi) {
  return json{{"joint_type", joint_type_name(psi.type)},
              {"axis_dir", vec3_to_json(psi.axis_dir)},
              {"origin", vec3_to_json(psi.origin)}};
}

JointParams psi_from_json(const json& j) {
  JointType type = joint_type_from_name(require_field(j, "joint_type").get<std::string>());
  Vec3 axis = vec3_from_json(require_field(j, "axis_dir"), "axis_dir");
  Vec3 origin = vec3_from_json(require_field(j, "origin"), "origin");
  return make_joint(axis, origin, type);
}

void write_psi(const std::string& path, const JointParams& psi) {
  save_json(path, psi_to_json(psi));
}

JointParams read_psi(const std::string& path) { return psi_from_json(load_json(path)); }

json estimate_to_json(int part_id, const JointEstimate& est) {
  json j = psi_to_json(est.params);
  j["part_id"] = part_id;
  j["support"] = est.support;
  j["dispersion"] = round9(est.direction_dispersion);
  j["origin_rms"] = round9(est.origin_rms);
  return j;
}

json trajectory_to_json(const Trajectory& traj) {
  json displacements = json::array();
  json waypoints = json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    displacements.push_back(round9(traj.displacements[i]));
    waypoints.push_back(vec3_to_json(traj.waypoints[i]));
  }
  return json{{"displacements", displacements}, {"waypoints", waypoints}};
}

Trajectory trajectory_from_json(const json& j) {
  const json& displacements = require_field(j, "displacements");
  const json& waypoints = require_field(j, "waypoints");
  if (!displacements.is_array() || !waypoints.is_array() ||
      displacements.size() != waypoints.size()) {
    throw ValidationError("trajectory: displacement/waypoint arrays must align");
  }
  Trajectory traj;
  for (std::size_t i = 0; i < displacements.size(); ++i) {
    traj.displacements.push_back(displacements[i].get<double>());
    traj.waypoints.push_back(vec3_from_json(waypoints[i], "waypoints"));
  }
  return traj;
}

NoiseModel noise_from_json(const json& j) {
  NoiseModel noise;
  noise.class_flip_prob = number_field_or(j, "class_flip_prob", 0.0);
  noise.offset_sigma = number_field_or(j, "offset_sigma", 0.0);
  noise.projection_sigma = number_field_or(j, "projection_sigma", 0.0);
  noise.axis_dir_sigma = number_field_or(j, "axis_dir_sigma", 0.0);
  noise.dropout_frac = number_field_or(j, "dropout_frac", 0.0);
  if (j.contains("rng_seed")) noise.rng_seed = j["rng_seed"].get<std::uint64_t>();
  validate_noise(noise);
  return noise;
}

NoiseModel read_noise(const std::string& path) { return noise_from_json(load_json(path)); }

json runlog_to_json(const RunLogFile& file) {
  json iterations = json::array();
  for (const RunIteration& it : file.log.iterations) {
    iterations.push_back(json{{"psi_estimate", psi_to_json(it.psi_estimate)},
                              {"planned", trajectory_to_json(it.planned)},
                              {"actual", trajectory_to_json(it.actual)},
                              {"objective", round9(it.objective)},
                              {"axis_error_deg", round9(it.axis_error_deg)},
                              {"origin_error_m", round9(it.origin_error_m)}});
  }
  return json{{"format_version", 1},
              {"scene", file.scene},
              {"part_id", file.part_id},
              {"grasp",
               json{{"point", vec3_to_json(file.grasp.point)},
                    {"approach_dir", vec3_to_json(file.grasp.approach_dir)},
                    {"score", round9(file.grasp.score)}}},
              {"iterations", iterations},
              {"final_psi", psi_to_json(file.log.final_psi)},
              {"converged", file.log.converged}};
}

RunLogFile runlog_from_json(const json& j) {
  check_version(j, "runlog");
  RunLogFile file;
  file.scene = require_field(j, "scene").get<std::string>();
  file.part_id = int_field(j, "part_id");
  const json& grasp = require_field(j, "grasp");
  file.grasp.point = vec3_from_json(require_field(grasp, "point"), "grasp.point");
  file.grasp.approach_dir =
      vec3_from_json(require_field(grasp, "approach_dir"), "grasp.approach_dir");
  file.grasp.score = number_field(grasp, "score");
  file.log.final_psi = psi_from_json(require_field(j, "final_psi"));
  file.log.converged = require_field(j, "converged").get<bool>();
  for (const json& it : require_field(j, "iterations")) {
    RunIteration rec;
    rec.psi_estimate = psi_from_json(require_field(it, "psi_estimate"));
    rec.planned = trajectory_from_json(require_field(it, "planned"));
    rec.actual = trajectory_from_json(require_field(it, "actual"));
    rec.objective = number_field(it, "objective");
    rec.axis_error_deg = number_field(it, "axis_error_deg");
    rec.origin_error_m = number_field(it, "origin_error_m");
    file.log.iterations.push_back(std::move(rec));
  }
  return file;
}

void write_runlog(const std::string& path, const RunLogFile& file) {
  save_json(path, runlog_to_json(file));
}

RunLogFile read_runlog(const std::string& path) { return runlog_from_json(load_json(path)); }

}  // namespace articukit::io
