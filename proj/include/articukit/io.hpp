#pragma once

#include "articukit/clustering.hpp"
#include "articukit/grasp.hpp"
#include "articukit/planner.hpp"
#include "articukit/scene.hpp"
#include "articukit/types.hpp"
#include "articukit/voting.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace articukit::io {

using json = nlohmann::json;

// All emitted JSON numbers go through this: 9 significant digits, so a fixed
// seed yields byte-identical documents.
double round9(double x);
json vec3_to_json(const Vec3& v);
Vec3 vec3_from_json(const json& j, const std::string& field);

json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);

// Scene documents ("format_version": 1).
json scene_to_json(const ObjectSpec& spec);
ObjectSpec scene_from_json(const json& j);
void write_scene(const std::string& path, const ObjectSpec& spec);
ObjectSpec read_scene(const std::string& path);

// "# articukit-cloud v1 N=<count>" header, then "x y z part_id semantic".
void write_cloud(const std::string& path, const LabeledCloud& cloud);
LabeledCloud read_cloud(const std::string& path);

// "# articukit-seg v1" header, then "index cluster_id semantic".
void write_segmentation(const std::string& path, const PartSegmentation& seg);
PartSegmentation read_segmentation(const std::string& path);

// "# articukit-fields v1 N=<count>" header, then 12 reals per line:
// class probabilities, offset, projection, axis direction.
void write_fields(const std::string& path, const PerPointFields& fields);
PerPointFields read_fields(const std::string& path);

// Joint parameter documents {joint_type, axis_dir, origin}.
json psi_to_json(const JointParams& psi);
JointParams psi_from_json(const json& j);
void write_psi(const std::string& path, const JointParams& psi);
JointParams read_psi(const std::string& path);

json estimate_to_json(int part_id, const JointEstimate& est);
json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const json& j);

NoiseModel noise_from_json(const json& j);
NoiseModel read_noise(const std::string& path);

// Run logs carry enough context for later evaluation against the scene.
struct RunLogFile {
  RunLog log;
  std::string scene;  // scene file name (basename)
  int part_id = 0;
  GraspCandidate grasp;
};
json runlog_to_json(const RunLogFile& file);
RunLogFile runlog_from_json(const json& j);
void write_runlog(const std::string& path, const RunLogFile& file);
RunLogFile read_runlog(const std::string& path);

// Field accessors that name the offending key in the error message.
const json& require_field(const json& j, const std::string& key);
double number_field(const json& j, const std::string& key);
double number_field_or(const json& j, const std::string& key, double fallback);
int int_field(const json& j, const std::string& key);
int int_field_or(const json& j, const std::string& key, int fallback);

}  // namespace articukit::io
