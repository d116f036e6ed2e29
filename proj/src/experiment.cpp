#include "articukit/experiment.hpp"

#include "articukit/grasp.hpp"
#include "articukit/kinematics.hpp"
#include "articukit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace articukit {

namespace {

// Seed streams per scene; keep the multipliers stable so reports reproduce.
enum Stream : std::uint64_t { kSpec = 0, kSample = 1, kNoise = 2, kRefine = 3, kStreams = 4 };

std::uint64_t stream_seed(std::uint64_t root, int scene, Stream s) {
  return rng::child_seed(root, static_cast<std::uint64_t>(scene) * kStreams + s);
}

double jitter(std::mt19937_64& gen, double value, double rel) {
  return value * rng::uniform(gen, 1.0 - rel, 1.0 + rel);
}

JointParams perturb_joint(const JointParams& psi, double axis_deg, double origin_m,
                          std::mt19937_64& gen) {
  Vec3 e1, e2;
  rng::perpendicular_basis(psi.axis_dir, e1, e2);
  double az = rng::uniform(gen, 0.0, 2.0 * M_PI);
  Vec3 tilt_axis = std::cos(az) * e1 + std::sin(az) * e2;
  Vec3 axis = rodrigues(psi.axis_dir, tilt_axis, axis_deg * M_PI / 180.0).normalized();

  Vec3 origin = psi.origin;
  if (psi.type == JointType::Revolute && origin_m > 0.0) {
    double az2 = rng::uniform(gen, 0.0, 2.0 * M_PI);
    rng::perpendicular_basis(axis, e1, e2);
    origin += origin_m * (std::cos(az2) * e1 + std::sin(az2) * e2);
  }
  return make_joint(axis, origin, psi.type);
}

}  // namespace

ObjectSpec random_object_spec(std::uint64_t seed, int parts_min, int parts_max) {
  if (parts_min < 1 || parts_max < parts_min) {
    throw ValidationError("random_object_spec: need 1 <= parts_min <= parts_max");
  }
  std::mt19937_64 gen(seed);

  ObjectSpec spec;
  spec.rng_seed = seed;
  double hx = jitter(gen, 0.30, 0.15);
  double hy = jitter(gen, 0.22, 0.1);
  double hz = jitter(gen, 0.34, 0.1);
  spec.static_shape.center = Vec3(0.0, 0.0, 0.0);
  spec.static_shape.half_extents = Vec3(hx, hy, hz);

  int k = parts_min + static_cast<int>(rng::index(
                          gen, static_cast<std::size_t>(parts_max - parts_min + 1)));
  const double band = 2.0 * hz / k;
  for (int p = 0; p < k; ++p) {
    double z = (p - (k - 1) * 0.5) * band;
    double zh = std::min(0.09, band * 0.5 - 0.06);
    PartSpec part;
    part.part_id = p + 1;

    bool revolute = rng::uniform01(gen) < 0.5;
    if (revolute) {
      double panel_x = hx * 0.9;
      double y = hy + 0.05 + 0.015;
      part.shape.center = Vec3(0.0, y, z);
      part.shape.half_extents = Vec3(panel_x, 0.015, zh);
      bool side_hinge = rng::uniform01(gen) < 0.5;
      double s = rng::uniform01(gen) < 0.5 ? 1.0 : -1.0;
      if (side_hinge) {
        part.joint = make_joint(Vec3(0.0, 0.0, 1.0), Vec3(s * panel_x, y, z),
                                JointType::Revolute);
      } else {
        part.joint =
            make_joint(Vec3(1.0, 0.0, 0.0), Vec3(0.0, y, z + s * zh), JointType::Revolute);
      }
      part.state_lo = 0.0;
      part.state_hi = jitter(gen, M_PI / 2.0, 0.2);
    } else {
      part.shape.center = Vec3(0.0, 0.08, z);
      part.shape.half_extents = Vec3(hx * 0.85, hy * 0.8, zh);
      part.joint = make_joint(Vec3(0.0, 1.0, 0.0), part.shape.center, JointType::Prismatic);
      part.state_lo = 0.0;
      part.state_hi = jitter(gen, 0.25, 0.2);
    }
    spec.parts.push_back(part);
  }
  return spec;
}

ExperimentConfig experiment_config_from_json(const io::json& j) {
  using io::int_field_or;
  using io::number_field_or;
  ExperimentConfig config;
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  config.n_scenes = int_field_or(j, "n_scenes", 1);
  if (config.n_scenes < 1) throw ValidationError("config field \"n_scenes\" must be >= 1");
  int n_points = int_field_or(j, "n_points", 4096);
  if (n_points < 1) throw ValidationError("config field \"n_points\" must be >= 1");
  config.n_points = static_cast<std::size_t>(n_points);
  config.parts_min = int_field_or(j, "parts_min", 1);
  config.parts_max = int_field_or(j, "parts_max", 3);
  if (config.parts_min < 1 || config.parts_max < config.parts_min) {
    throw ValidationError("config fields \"parts_min\"/\"parts_max\" are inconsistent");
  }
  if (j.contains("noise")) config.noise = io::noise_from_json(j["noise"]);
  if (j.contains("cluster")) {
    const io::json& c = j["cluster"];
    config.cluster.eps = number_field_or(c, "eps", config.cluster.eps);
    config.cluster.min_pts = int_field_or(c, "min_pts", config.cluster.min_pts);
    if (c.contains("feature_mode")) {
      config.cluster.feature_mode = feature_mode_from_name(c["feature_mode"].get<std::string>());
    }
    if (config.cluster.eps <= 0.0) throw ValidationError("config field \"cluster.eps\" must be > 0");
    if (config.cluster.min_pts < 1) {
      throw ValidationError("config field \"cluster.min_pts\" must be >= 1");
    }
  }
  config.min_support = int_field_or(j, "min_support", kDefaultMinSupport);

  if (j.contains("refine")) {
    const io::json& r = j["refine"];
    config.refine_enabled = r.value("enabled", true);
    config.plan.L = int_field_or(r, "L", config.plan.L);
    config.plan.H = int_field_or(r, "H", config.plan.H);
    config.plan.max_iterations = int_field_or(r, "max_iterations", config.plan.max_iterations);
    config.plan.execution_noise_sigma =
        number_field_or(r, "execution_noise_sigma", config.plan.execution_noise_sigma);
    config.plan.objective_tol = number_field_or(r, "objective_tol", config.plan.objective_tol);
    config.plan.axis_update_tol_deg =
        number_field_or(r, "axis_update_tol_deg", config.plan.axis_update_tol_deg);
    config.target_fraction = number_field_or(r, "target_fraction", config.target_fraction);
    config.initial_axis_perturb_deg =
        number_field_or(r, "initial_axis_perturb_deg", config.initial_axis_perturb_deg);
    config.initial_origin_perturb_m =
        number_field_or(r, "initial_origin_perturb_m", config.initial_origin_perturb_m);
    if (r.contains("optimizer")) {
      const io::json& o = r["optimizer"];
      config.plan.refine.step_size = number_field_or(o, "step_size", config.plan.refine.step_size);
      config.plan.refine.max_inner_iterations =
          int_field_or(o, "max_inner_iterations", config.plan.refine.max_inner_iterations);
      config.plan.refine.grad_epsilon =
          number_field_or(o, "grad_epsilon", config.plan.refine.grad_epsilon);
      config.plan.refine.tolerance = number_field_or(o, "tolerance", config.plan.refine.tolerance);
    }
    if (config.refine_enabled) validate_config(config.plan);
    if (config.target_fraction <= 0.0 || config.target_fraction > 1.0) {
      throw ValidationError("config field \"refine.target_fraction\" must be in (0,1]");
    }
  }
  return config;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  ExperimentOutput output;
  std::vector<SceneEstimates> estimates;
  std::vector<SceneGroundTruth> ground_truth;

  for (int s = 0; s < config.n_scenes; ++s) {
    ObjectSpec spec =
        random_object_spec(stream_seed(config.seed, s, kSpec), config.parts_min, config.parts_max);
    ArticulatedObject object(spec);
    LabeledCloud cloud = sample_cloud(object, config.n_points, stream_seed(config.seed, s, kSample));
    PerPointFields oracle = ground_truth_fields(cloud, object);

    NoiseModel noise = config.noise;
    noise.rng_seed = stream_seed(config.seed, s, kNoise);
    CorruptedFields corrupted = corrupt_fields(oracle, noise);
    LabeledCloud kept_cloud = subset_cloud(cloud, corrupted.kept);

    SceneEstimates scene_est;
    scene_est.segmentation =
        segment_parts(kept_cloud.points, corrupted.fields, config.cluster);
    for (int c = 0; c < scene_est.segmentation.n_clusters; ++c) {
      std::vector<std::size_t> members = scene_est.segmentation.cluster_members(c);
      if (static_cast<int>(members.size()) < config.min_support) continue;
      std::vector<Vec3> points;
      points.reserve(members.size());
      for (std::size_t i : members) points.push_back(kept_cloud.points[i]);
      PerPointFields part_fields = subset_fields(corrupted.fields, members);
      scene_est.estimates.emplace_back(c, vote_joint(points, part_fields, config.min_support));
    }

    SceneGroundTruth scene_gt;
    scene_gt.part_id = kept_cloud.part_id;
    for (const PartSpec& part : spec.parts) scene_gt.joints[part.part_id] = part.joint;

    if (config.refine_enabled) {
      std::mt19937_64 perturb_gen(stream_seed(config.seed, s, kRefine));
      std::vector<ClusterMatch> matches =
          match_clusters(scene_est.segmentation, scene_gt.part_id, 0.75);
      std::sort(matches.begin(), matches.end(),
                [](const ClusterMatch& a, const ClusterMatch& b) { return a.gt < b.gt; });
      for (const ClusterMatch& match : matches) {
        auto it = std::find_if(scene_est.estimates.begin(), scene_est.estimates.end(),
                               [&](const auto& e) { return e.first == match.pred; });
        if (it == scene_est.estimates.end()) continue;
        const JointEstimate& voted = it->second;
        const PartSpec& gt_part = object.part(match.gt);

        JointParams initial = perturb_joint(voted.params, config.initial_axis_perturb_deg,
                                            config.initial_origin_perturb_m, perturb_gen);

        std::vector<std::size_t> members = scene_est.segmentation.cluster_members(match.pred);
        std::vector<Vec3> points;
        for (std::size_t i : members) points.push_back(kept_cloud.points[i]);
        GraspCandidate grasp = propose_candidates(points, voted, 1).front();

        PlanConfig plan = config.plan;
        plan.rng_seed = rng::child_seed(stream_seed(config.seed, s, kRefine),
                                        static_cast<std::uint64_t>(match.gt));
        double cur = 0.0;  // generated scenes start at state_lo = 0
        plan.target_displacement = cur + config.target_fraction * (gt_part.state_hi - cur);

        ArticulatedObject sim(spec);
        RunLog log = receding_horizon_run(sim, match.gt, initial, grasp, plan);

        RefinementRunSummary run;
        run.scene_index = s;
        run.part_id = match.gt;
        run.type = gt_part.joint.type;
        run.initial_axis_error_deg =
            axis_angular_error_deg(initial.axis_dir, gt_part.joint.axis_dir);
        run.final_axis_error_deg =
            axis_angular_error_deg(log.final_psi.axis_dir, gt_part.joint.axis_dir);
        run.final_origin_error_m = (log.final_psi.type == JointType::Revolute &&
                                    gt_part.joint.type == JointType::Revolute)
                                       ? axis_origin_error_m(log.final_psi, gt_part.joint)
                                       : 0.0;
        run.converged = log.converged;
        run.n_iterations = static_cast<int>(log.iterations.size());
        output.refinement_runs.push_back(run);

        io::RunLogFile file;
        file.log = std::move(log);
        file.scene = "scene_" + std::to_string(s);
        file.part_id = match.gt;
        file.grasp = grasp;
        output.runlogs.push_back(std::move(file));
      }
    }

    estimates.push_back(std::move(scene_est));
    ground_truth.push_back(std::move(scene_gt));
  }

  output.report = evaluate_modeling(estimates, ground_truth, 0.75);
  return output;
}

io::json experiment_report_json(const ExperimentConfig& config, const ExperimentOutput& output) {
  using io::round9;
  const ModelingReport& report = output.report;
  io::json per_scene = io::json::array();
  for (std::size_t s = 0; s < report.per_scene.size(); ++s) {
    const SceneEvaluation& eval = report.per_scene[s];
    per_scene.push_back(io::json{{"scene", s},
                                 {"ap75", round9(eval.ap75)},
                                 {"type_accuracy", round9(eval.type_accuracy)},
                                 {"mean_axis_error_deg", round9(eval.mean_axis_error_deg)},
                                 {"mean_origin_error_m", round9(eval.mean_origin_error_m)},
                                 {"n_matched", eval.n_matched},
                                 {"n_origin_pairs", eval.n_origin_pairs}});
  }
  io::json doc{{"format_version", 1},
               {"seed", config.seed},
               {"n_scenes", report.n_scenes},
               {"aggregate",
                io::json{{"ap75", round9(report.ap75)},
                         {"type_accuracy", round9(report.type_accuracy)},
                         {"mean_axis_error_deg", round9(report.mean_axis_error_deg)},
                         {"mean_origin_error_m", round9(report.mean_origin_error_m)}}},
               {"per_scene", per_scene}};

  if (!output.refinement_runs.empty()) {
    io::json runs = io::json::array();
    double final_axis = 0.0, final_origin = 0.0;
    int improved = 0, converged = 0, origin_runs = 0;
    for (const RefinementRunSummary& run : output.refinement_runs) {
      runs.push_back(io::json{{"scene", run.scene_index},
                              {"part_id", run.part_id},
                              {"joint_type", joint_type_name(run.type)},
                              {"initial_axis_error_deg", round9(run.initial_axis_error_deg)},
                              {"final_axis_error_deg", round9(run.final_axis_error_deg)},
                              {"final_origin_error_m", round9(run.final_origin_error_m)},
                              {"converged", run.converged},
                              {"n_iterations", run.n_iterations}});
      final_axis += run.final_axis_error_deg;
      if (run.type == JointType::Revolute) {
        final_origin += run.final_origin_error_m;
        ++origin_runs;
      }
      if (run.final_axis_error_deg < run.initial_axis_error_deg) ++improved;
      if (run.converged) ++converged;
    }
    const double n = static_cast<double>(output.refinement_runs.size());
    doc["refinement"] =
        io::json{{"n_runs", output.refinement_runs.size()},
                 {"mean_final_axis_error_deg", round9(final_axis / n)},
                 {"mean_final_origin_error_m",
                  round9(origin_runs > 0 ? final_origin / origin_runs : 0.0)},
                 {"improved_fraction", round9(improved / n)},
                 {"converged_fraction", round9(converged / n)},
                 {"per_run", runs}};
  }
  return doc;
}

io::json write_experiment_outputs(const ExperimentConfig& config, const ExperimentOutput& output,
                                  const std::string& report_path, const std::string& runlog_dir) {
  io::json doc = experiment_report_json(config, output);
  io::save_json(report_path, doc);
  if (!runlog_dir.empty()) {
    std::filesystem::create_directories(runlog_dir);
    for (std::size_t i = 0; i < output.runlogs.size(); ++i) {
      const io::RunLogFile& file = output.runlogs[i];
      std::string name = file.scene + "_part" + std::to_string(file.part_id) + ".json";
      io::write_runlog((std::filesystem::path(runlog_dir) / name).string(), file);
    }
  }
  return doc;
}

}  // namespace articukit
