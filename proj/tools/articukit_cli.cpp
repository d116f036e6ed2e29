// Command-line front end: scene generation, modeling, planning, refinement
// runs, and batch evaluation. Exit codes: 0 ok, 1 bad input, 2 I/O trouble.

#include "articukit/experiment.hpp"
#include "articukit/grasp.hpp"
#include "articukit/io.hpp"
#include "articukit/kinematics.hpp"
#include "articukit/rng.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace articukit;

namespace {

std::string scene_basename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scene_%03d", index);
  return buf;
}

Vec3 parse_xyz(const std::string& text, const char* flag) {
  Vec3 v;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &v.x(), &v.y(), &v.z()) != 3) {
    throw ValidationError(std::string(flag) + " expects \"x,y,z\", got \"" + text + "\"");
  }
  return v;
}

int run_generate(const std::string& spec_path, std::uint64_t seed, const std::string& out_dir) {
  io::json j = io::load_json(spec_path);
  int n_scenes = io::int_field_or(j, "n_scenes", 1);
  int n_points = io::int_field_or(j, "n_points", 4096);
  int parts_min = io::int_field_or(j, "parts_min", 1);
  int parts_max = io::int_field_or(j, "parts_max", 3);
  if (n_scenes < 1) throw ValidationError("spec field \"n_scenes\" must be >= 1");
  if (n_points < 1) throw ValidationError("spec field \"n_points\" must be >= 1");

  fs::create_directories(out_dir);
  for (int s = 0; s < n_scenes; ++s) {
    ObjectSpec spec = random_object_spec(rng::child_seed(seed, 2 * s), parts_min, parts_max);
    ArticulatedObject object(spec);
    LabeledCloud cloud =
        sample_cloud(object, static_cast<std::size_t>(n_points), rng::child_seed(seed, 2 * s + 1));
    PerPointFields fields = ground_truth_fields(cloud, object);

    fs::path base = fs::path(out_dir) / scene_basename(s);
    io::write_scene(base.string() + ".json", spec);
    io::write_cloud(base.string() + "_cloud.txt", cloud);
    io::write_fields(base.string() + "_fields.txt", fields);
  }
  std::cout << "wrote " << n_scenes << " scene(s) to " << out_dir << "\n";
  return 0;
}

int run_model(const std::string& cloud_path, const std::string& fields_arg,
              const std::string& scene_path, const std::string& noise_path, std::uint64_t seed,
              bool seed_given, const ClusterParams& params, int min_support,
              const std::string& out_path, const std::string& seg_out) {
  LabeledCloud cloud = io::read_cloud(cloud_path);

  PerPointFields fields;
  if (fields_arg == "oracle") {
    if (scene_path.empty()) {
      throw ValidationError("--fields oracle needs --scene to recover ground truth");
    }
    ArticulatedObject object(io::read_scene(scene_path));
    fields = ground_truth_fields(cloud, object);
  } else {
    fields = io::read_fields(fields_arg);
    if (fields.class_probs.size() != cloud.points.size()) {
      throw ValidationError("fields file does not match the cloud point count");
    }
  }

  if (!noise_path.empty()) {
    NoiseModel noise = io::read_noise(noise_path);
    if (seed_given) noise.rng_seed = seed;
    CorruptedFields corrupted = corrupt_fields(fields, noise);
    cloud = subset_cloud(cloud, corrupted.kept);
    fields = std::move(corrupted.fields);
  }

  PartSegmentation seg = segment_parts(cloud.points, fields, params);
  io::json estimates = io::json::array();
  for (int c = 0; c < seg.n_clusters; ++c) {
    std::vector<std::size_t> members = seg.cluster_members(c);
    if (static_cast<int>(members.size()) < min_support) continue;
    std::vector<Vec3> points;
    points.reserve(members.size());
    for (std::size_t i : members) points.push_back(cloud.points[i]);
    JointEstimate est = vote_joint(points, subset_fields(fields, members), min_support);
    estimates.push_back(io::estimate_to_json(c, est));
  }

  io::json doc{{"format_version", 1},
               {"n_points", cloud.points.size()},
               {"n_clusters", seg.n_clusters},
               {"estimates", estimates}};
  io::save_json(out_path, doc);
  if (!seg_out.empty()) io::write_segmentation(seg_out, seg);
  std::cout << seg.n_clusters << " cluster(s), " << estimates.size() << " joint estimate(s)\n";
  return 0;
}

int run_plan(const std::string& psi_path, const std::string& grasp_text, double current,
             double target, int L, const std::string& out_path) {
  JointParams psi = io::read_psi(psi_path);
  Vec3 grasp = parse_xyz(grasp_text, "--grasp");
  Trajectory traj = plan_trajectory(psi, grasp, current, target, L);
  io::save_json(out_path, io::trajectory_to_json(traj));
  std::cout << "planned " << traj.size() << " waypoint(s)\n";
  return 0;
}

int run_refine(const std::string& scene_path, const std::string& psi0_path,
               const std::string& config_path, const std::string& out_path) {
  ObjectSpec spec = io::read_scene(scene_path);
  ArticulatedObject object(spec);
  JointParams psi0 = io::read_psi(psi0_path);
  io::json j = io::load_json(config_path);

  int part_id = io::int_field_or(j, "part_id", spec.parts.front().part_id);
  const PartSpec& part = object.part(part_id);

  PlanConfig config;
  config.L = io::int_field_or(j, "L", config.L);
  config.H = io::int_field_or(j, "H", config.H);
  config.max_iterations = io::int_field_or(j, "max_iterations", config.max_iterations);
  config.execution_noise_sigma =
      io::number_field_or(j, "execution_noise_sigma", config.execution_noise_sigma);
  config.objective_tol = io::number_field_or(j, "objective_tol", config.objective_tol);
  config.axis_update_tol_deg =
      io::number_field_or(j, "axis_update_tol_deg", config.axis_update_tol_deg);
  if (j.contains("seed")) config.rng_seed = j["seed"].get<std::uint64_t>();
  if (j.contains("target_displacement")) {
    config.target_displacement = io::number_field(j, "target_displacement");
  } else {
    double frac = io::number_field_or(j, "target_fraction", 0.9);
    config.target_displacement =
        part.state_lo + frac * (part.state_hi - part.state_lo);
  }

  GraspCandidate grasp;
  if (j.contains("grasp")) {
    grasp.point = io::vec3_from_json(j["grasp"], "grasp");
    grasp.approach_dir = Vec3(0, 0, 1);
    grasp.score = 1.0;
  } else {
    // No grasp given: sample the part surface and take the most actionable point.
    LabeledCloud cloud =
        sample_cloud(object, 2048, rng::child_seed(config.rng_seed, 0x67726173));
    std::vector<Vec3> part_points;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
      if (cloud.part_id[i] == part_id) part_points.push_back(cloud.points[i]);
    }
    JointEstimate seed_est;
    seed_est.params = psi0;
    seed_est.support = static_cast<int>(part_points.size());
    grasp = propose_candidates(part_points, seed_est, 1).front();
  }

  RunLog log = receding_horizon_run(object, part_id, psi0, grasp, config);

  io::RunLogFile file;
  file.log = std::move(log);
  file.scene = fs::path(scene_path).stem().string();
  file.part_id = part_id;
  file.grasp = grasp;
  io::write_runlog(out_path, file);
  std::cout << file.log.iterations.size() << " iteration(s), converged="
            << (file.log.converged ? "true" : "false") << "\n";
  return 0;
}

int run_eval(const std::string& runs_dir, const std::string& gt_dir, const std::string& out_path) {
  std::vector<fs::path> run_files;
  if (!fs::is_directory(runs_dir)) throw IoError("not a directory: " + runs_dir);
  for (const auto& entry : fs::directory_iterator(runs_dir)) {
    if (entry.path().extension() == ".json") run_files.push_back(entry.path());
  }
  std::sort(run_files.begin(), run_files.end());
  if (run_files.empty()) throw ValidationError("no .json run logs in " + runs_dir);

  std::map<std::string, ObjectSpec> scenes;
  io::json per_run = io::json::array();
  double axis_sum = 0.0, origin_sum = 0.0;
  int n_origin = 0, n_converged = 0;
  for (const fs::path& path : run_files) {
    io::RunLogFile file = io::read_runlog(path.string());
    auto it = scenes.find(file.scene);
    if (it == scenes.end()) {
      fs::path scene_path = fs::path(gt_dir) / (file.scene + ".json");
      it = scenes.emplace(file.scene, io::read_scene(scene_path.string())).first;
    }
    ArticulatedObject object(it->second);
    const JointParams& truth = object.joint(file.part_id);

    double axis_err = axis_angular_error_deg(file.log.final_psi.axis_dir, truth.axis_dir);
    double origin_err = 0.0;
    if (truth.type == JointType::Revolute && file.log.final_psi.type == JointType::Revolute) {
      origin_err = axis_origin_error_m(file.log.final_psi, truth);
      origin_sum += origin_err;
      ++n_origin;
    }
    axis_sum += axis_err;
    if (file.log.converged) ++n_converged;

    per_run.push_back(io::json{{"run", path.filename().string()},
                               {"scene", file.scene},
                               {"part_id", file.part_id},
                               {"joint_type", joint_type_name(file.log.final_psi.type)},
                               {"type_correct", file.log.final_psi.type == truth.type},
                               {"axis_error_deg", io::round9(axis_err)},
                               {"origin_error_m", io::round9(origin_err)},
                               {"converged", file.log.converged},
                               {"n_iterations", file.log.iterations.size()}});
  }

  const double n = static_cast<double>(run_files.size());
  io::json doc{{"format_version", 1},
               {"n_runs", run_files.size()},
               {"mean_axis_error_deg", io::round9(axis_sum / n)},
               {"mean_origin_error_m", io::round9(n_origin > 0 ? origin_sum / n_origin : 0.0)},
               {"converged_fraction", io::round9(n_converged / n)},
               {"per_run", per_run}};
  io::save_json(out_path, doc);
  std::cout << "evaluated " << run_files.size() << " run(s)\n";
  return 0;
}

int run_experiment_cmd(const std::string& config_path, std::uint64_t seed, bool seed_given,
                       const std::string& out_path, const std::string& runlog_dir) {
  ExperimentConfig config = experiment_config_from_json(io::load_json(config_path));
  if (seed_given) config.seed = seed;
  ExperimentOutput output = run_experiment(config);
  write_experiment_outputs(config, output, out_path, runlog_dir);
  std::cout << "report for " << config.n_scenes << " scene(s) -> " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"articulated-object modeling toolkit"};
  app.require_subcommand(1);

  std::string spec_path, cloud_path, fields_arg = "oracle", scene_path, noise_path;
  std::string psi_path, grasp_text, config_path, runs_dir, gt_dir;
  std::string out_path, out_dir, seg_out, runlog_dir, feature_mode = "concat";
  std::uint64_t seed = 0;
  double current = 0.0, target = 0.0;
  int L = 10, min_support = kDefaultMinSupport;
  ClusterParams cluster;

  CLI::App* generate = app.add_subcommand("generate", "sample synthetic scenes and clouds");
  generate->add_option("--spec", spec_path, "generator config JSON")->required();
  generate->add_option("--seed", seed, "master RNG seed")->required();
  generate->add_option("--out", out_dir, "output directory")->required();

  CLI::App* model = app.add_subcommand("model", "segment a cloud and vote joint parameters");
  model->add_option("--cloud", cloud_path, "labeled cloud file")->required();
  model->add_option("--fields", fields_arg, "per-point fields file, or \"oracle\"");
  model->add_option("--scene", scene_path, "scene JSON (needed with --fields oracle)");
  model->add_option("--noise", noise_path, "noise model JSON to corrupt the fields");
  CLI::Option* model_seed = model->add_option("--seed", seed, "overrides the noise file seed");
  model->add_option("--eps", cluster.eps, "DBSCAN radius");
  model->add_option("--min-pts", cluster.min_pts, "DBSCAN density threshold");
  model->add_option("--feature-mode", feature_mode, "offset_only | projection_only | concat");
  model->add_option("--min-support", min_support, "minimum votes per joint estimate");
  model->add_option("--out", out_path, "estimates JSON")->required();
  model->add_option("--seg-out", seg_out, "also write the segmentation table");

  CLI::App* plan = app.add_subcommand("plan", "waypoints toward a target displacement");
  plan->add_option("--psi", psi_path, "joint parameters JSON")->required();
  plan->add_option("--grasp", grasp_text, "grasp point \"x,y,z\"")->required();
  plan->add_option("--current", current, "current displacement");
  plan->add_option("--target", target, "target displacement")->required();
  plan->add_option("--L", L, "waypoint count");
  plan->add_option("--out", out_path, "trajectory JSON")->required();

  CLI::App* refine = app.add_subcommand("refine", "receding-horizon refinement run");
  refine->add_option("--scene", scene_path, "scene JSON")->required();
  refine->add_option("--psi0", psi_path, "initial joint parameters JSON")->required();
  refine->add_option("--config", config_path, "run config JSON")->required();
  refine->add_option("--out", out_path, "run log JSON")->required();

  CLI::App* eval = app.add_subcommand("eval", "score run logs against ground-truth scenes");
  eval->add_option("--runs", runs_dir, "directory of run logs")->required();
  eval->add_option("--gt", gt_dir, "directory of scene JSON files")->required();
  eval->add_option("--out", out_path, "report JSON")->required();

  CLI::App* experiment = app.add_subcommand("experiment", "seeded end-to-end batch");
  experiment->add_option("--config", config_path, "experiment config JSON")->required();
  CLI::Option* exp_seed = experiment->add_option("--seed", seed, "overrides the config seed");
  experiment->add_option("--out", out_path, "report JSON")->required();
  experiment->add_option("--runlog-dir", runlog_dir, "also write per-run logs here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) return run_generate(spec_path, seed, out_dir);
    if (model->parsed()) {
      cluster.feature_mode = feature_mode_from_name(feature_mode);
      return run_model(cloud_path, fields_arg, scene_path, noise_path, seed,
                       model_seed->count() > 0, cluster, min_support, out_path, seg_out);
    }
    if (plan->parsed()) return run_plan(psi_path, grasp_text, current, target, L, out_path);
    if (refine->parsed()) return run_refine(scene_path, psi_path, config_path, out_path);
    if (eval->parsed()) return run_eval(runs_dir, gt_dir, out_path);
    if (experiment->parsed()) {
      return run_experiment_cmd(config_path, seed, exp_seed->count() > 0, out_path, runlog_dir);
    }
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
