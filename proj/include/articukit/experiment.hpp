#pragma once

#include "articukit/clustering.hpp"
#include "articukit/io.hpp"
#include "articukit/metrics.hpp"
#include "articukit/planner.hpp"
#include "articukit/scene.hpp"
#include "articukit/voting.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace articukit {

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int n_scenes = 1;
  std::size_t n_points = 4096;
  int parts_min = 1;
  int parts_max = 3;
  NoiseModel noise;       // per-scene rng seeds are derived from `seed`
  ClusterParams cluster;
  int min_support = kDefaultMinSupport;

  bool refine_enabled = false;
  PlanConfig plan;                      // target filled per run
  double target_fraction = 0.9;         // how far toward the joint limit to drive
  double initial_axis_perturb_deg = 0.0;
  double initial_origin_perturb_m = 0.0;
};

ExperimentConfig experiment_config_from_json(const io::json& j);

// Cabinet-style object: a static body plus doors (revolute) and drawers
// (prismatic) in well-separated vertical bands.
ObjectSpec random_object_spec(std::uint64_t seed, int parts_min, int parts_max);

struct RefinementRunSummary {
  int scene_index = 0;
  int part_id = 0;
  JointType type = JointType::Revolute;
  double initial_axis_error_deg = 0.0;
  double final_axis_error_deg = 0.0;
  double final_origin_error_m = 0.0;
  bool converged = false;
  int n_iterations = 0;
};

struct ExperimentOutput {
  ModelingReport report;
  std::vector<RefinementRunSummary> refinement_runs;
  std::vector<io::RunLogFile> runlogs;
};

// The full seeded pipeline: generate scenes, corrupt oracle fields, segment,
// vote, optionally refine. Byte-identical output for a fixed config.
ExperimentOutput run_experiment(const ExperimentConfig& config);

io::json experiment_report_json(const ExperimentConfig& config, const ExperimentOutput& output);

// Writes the report (and run logs when a directory is given); returns the
// report document.
io::json write_experiment_outputs(const ExperimentConfig& config, const ExperimentOutput& output,
                                  const std::string& report_path, const std::string& runlog_dir);

}  // namespace articukit
