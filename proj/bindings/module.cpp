#include "articukit/experiment.hpp"
#include "articukit/grasp.hpp"
#include "articukit/kinematics.hpp"
#include "articukit/losses.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>

namespace py = pybind11;
using namespace articukit;

namespace {

std::string joint_repr(const JointParams& j) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "JointParams(type=%s, axis=(%.6g, %.6g, %.6g), origin=(%.6g, %.6g, %.6g))",
                joint_type_name(j.type), j.axis_dir.x(), j.axis_dir.y(), j.axis_dir.z(),
                j.origin.x(), j.origin.y(), j.origin.z());
  return buf;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "articulated-scene toolkit: generation, clustering, voting, planning, refinement";

  auto& validation_exc =
      py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ContactLostError>(m, "ContactLostError", validation_exc);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::enum_<JointType>(m, "JointType")
      .value("Revolute", JointType::Revolute)
      .value("Prismatic", JointType::Prismatic);

  py::enum_<Semantic>(m, "Semantic")
      .value("Static", Semantic::Static)
      .value("Revolute", Semantic::Revolute)
      .value("Prismatic", Semantic::Prismatic);

  py::enum_<FeatureMode>(m, "FeatureMode")
      .value("OffsetOnly", FeatureMode::OffsetOnly)
      .value("ProjectionOnly", FeatureMode::ProjectionOnly)
      .value("Concat", FeatureMode::Concat);

  py::class_<JointParams>(m, "JointParams")
      .def(py::init([](const Vec3& axis, const Vec3& origin, JointType type) {
             return make_joint(axis, origin, type);
           }),
           py::arg("axis_dir"), py::arg("origin"), py::arg("type"))
      .def_readonly("axis_dir", &JointParams::axis_dir)
      .def_readonly("origin", &JointParams::origin)
      .def_readonly("type", &JointParams::type)
      .def("__repr__", &joint_repr);

  py::class_<Box>(m, "Box")
      .def(py::init<>())
      .def_readwrite("center", &Box::center)
      .def_readwrite("half_extents", &Box::half_extents);

  py::class_<PartSpec>(m, "PartSpec")
      .def(py::init<>())
      .def_readwrite("part_id", &PartSpec::part_id)
      .def_readwrite("joint", &PartSpec::joint)
      .def_readwrite("shape", &PartSpec::shape)
      .def_readwrite("state_lo", &PartSpec::state_lo)
      .def_readwrite("state_hi", &PartSpec::state_hi);

  py::class_<ObjectSpec>(m, "ObjectSpec")
      .def(py::init<>())
      .def_readwrite("static_shape", &ObjectSpec::static_shape)
      .def_readwrite("parts", &ObjectSpec::parts)
      .def_readwrite("rng_seed", &ObjectSpec::rng_seed);

  py::class_<ArticulatedObject>(m, "ArticulatedObject")
      .def(py::init<ObjectSpec>())
      .def_property_readonly("spec", &ArticulatedObject::spec)
      .def("part_count", &ArticulatedObject::part_count)
      .def("state", &ArticulatedObject::state)
      .def("set_joint_state", &ArticulatedObject::set_joint_state)
      .def("to_world", &ArticulatedObject::to_world)
      .def("to_local", &ArticulatedObject::to_local)
      .def("on_part_surface", &ArticulatedObject::on_part_surface);

  py::class_<LabeledCloud>(m, "LabeledCloud")
      .def(py::init<>())
      .def_readwrite("points", &LabeledCloud::points)
      .def_readwrite("part_id", &LabeledCloud::part_id)
      .def_readwrite("semantic", &LabeledCloud::semantic)
      .def("__len__", &LabeledCloud::size);

  py::class_<PerPointFields>(m, "PerPointFields")
      .def(py::init<>())
      .def_readwrite("class_probs", &PerPointFields::class_probs)
      .def_readwrite("offset", &PerPointFields::offset)
      .def_readwrite("projection", &PerPointFields::projection)
      .def_readwrite("axis_dir", &PerPointFields::axis_dir)
      .def("__len__", &PerPointFields::size)
      .def("predicted_class", &PerPointFields::predicted_class);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init<>())
      .def_readwrite("class_flip_prob", &NoiseModel::class_flip_prob)
      .def_readwrite("offset_sigma", &NoiseModel::offset_sigma)
      .def_readwrite("projection_sigma", &NoiseModel::projection_sigma)
      .def_readwrite("axis_dir_sigma", &NoiseModel::axis_dir_sigma)
      .def_readwrite("dropout_frac", &NoiseModel::dropout_frac)
      .def_readwrite("rng_seed", &NoiseModel::rng_seed);

  py::class_<ClusterParams>(m, "ClusterParams")
      .def(py::init<>())
      .def_readwrite("eps", &ClusterParams::eps)
      .def_readwrite("min_pts", &ClusterParams::min_pts)
      .def_readwrite("feature_mode", &ClusterParams::feature_mode);

  py::class_<PartSegmentation>(m, "PartSegmentation")
      .def_readonly("cluster_id", &PartSegmentation::cluster_id)
      .def_readonly("semantic", &PartSegmentation::semantic)
      .def_readonly("n_clusters", &PartSegmentation::n_clusters)
      .def("cluster_members", &PartSegmentation::cluster_members);

  py::class_<JointEstimate>(m, "JointEstimate")
      .def(py::init<>())
      .def_readwrite("params", &JointEstimate::params)
      .def_readwrite("support", &JointEstimate::support)
      .def_readwrite("direction_dispersion", &JointEstimate::direction_dispersion)
      .def_readwrite("origin_rms", &JointEstimate::origin_rms);

  py::class_<GraspCandidate>(m, "GraspCandidate")
      .def(py::init<>())
      .def_readwrite("point", &GraspCandidate::point)
      .def_readwrite("approach_dir", &GraspCandidate::approach_dir)
      .def_readwrite("score", &GraspCandidate::score);

  py::class_<Trajectory>(m, "Trajectory")
      .def(py::init<>())
      .def_readwrite("waypoints", &Trajectory::waypoints)
      .def_readwrite("displacements", &Trajectory::displacements)
      .def("__len__", &Trajectory::size);

  py::class_<PlanTemplate>(m, "PlanTemplate")
      .def(py::init<>())
      .def_readwrite("grasp_point", &PlanTemplate::grasp_point)
      .def_readwrite("displacements", &PlanTemplate::displacements);

  py::class_<RefineConfig>(m, "RefineConfig")
      .def(py::init<>())
      .def_readwrite("step_size", &RefineConfig::step_size)
      .def_readwrite("max_inner_iterations", &RefineConfig::max_inner_iterations)
      .def_readwrite("grad_epsilon", &RefineConfig::grad_epsilon)
      .def_readwrite("tolerance", &RefineConfig::tolerance);

  py::class_<PlanConfig>(m, "PlanConfig")
      .def(py::init<>())
      .def_readwrite("L", &PlanConfig::L)
      .def_readwrite("H", &PlanConfig::H)
      .def_readwrite("target_displacement", &PlanConfig::target_displacement)
      .def_readwrite("max_iterations", &PlanConfig::max_iterations)
      .def_readwrite("execution_noise_sigma", &PlanConfig::execution_noise_sigma)
      .def_readwrite("rng_seed", &PlanConfig::rng_seed)
      .def_readwrite("objective_tol", &PlanConfig::objective_tol)
      .def_readwrite("axis_update_tol_deg", &PlanConfig::axis_update_tol_deg)
      .def_readwrite("target_tol", &PlanConfig::target_tol)
      .def_readwrite("refine", &PlanConfig::refine);

  py::class_<RunIteration>(m, "RunIteration")
      .def_readonly("psi_estimate", &RunIteration::psi_estimate)
      .def_readonly("planned", &RunIteration::planned)
      .def_readonly("actual", &RunIteration::actual)
      .def_readonly("objective", &RunIteration::objective)
      .def_readonly("axis_error_deg", &RunIteration::axis_error_deg)
      .def_readonly("origin_error_m", &RunIteration::origin_error_m);

  py::class_<RunLog>(m, "RunLog")
      .def_readonly("iterations", &RunLog::iterations)
      .def_readonly("final_psi", &RunLog::final_psi)
      .def_readonly("converged", &RunLog::converged);

  // kinematics
  m.def("rodrigues", &rodrigues, py::arg("v"), py::arg("unit_axis"), py::arg("angle"));
  m.def("apply_joint_displacement", &apply_joint_displacement, py::arg("p"), py::arg("joint"),
        py::arg("displacement"));
  m.def("axis_angular_error_deg", &axis_angular_error_deg, py::arg("u_est"), py::arg("u_gt"));
  m.def("axis_origin_error_m", &axis_origin_error_m, py::arg("est"), py::arg("gt"));

  // losses
  m.def("focal_loss", &focal_loss, py::arg("class_probs"), py::arg("true_class"),
        py::arg("gamma") = kDefaultFocalGamma, py::arg("alpha") = kDefaultFocalAlpha);
  m.def("vector_loss", &vector_loss, py::arg("pred"), py::arg("gt"));
  m.def("direction_loss", &direction_loss, py::arg("pred_dir"), py::arg("gt_dir"));

  // scene generation
  m.def("random_object_spec", &random_object_spec, py::arg("seed"), py::arg("parts_min") = 1,
        py::arg("parts_max") = 3);
  m.def("sample_cloud", &sample_cloud, py::arg("obj"), py::arg("n_points"), py::arg("seed"));
  m.def("ground_truth_fields", &ground_truth_fields, py::arg("cloud"), py::arg("obj"));
  m.def(
      "corrupt_fields",
      [](const PerPointFields& fields, const NoiseModel& noise) {
        CorruptedFields out = corrupt_fields(fields, noise);
        return py::make_tuple(out.fields, out.kept);
      },
      py::arg("fields"), py::arg("noise"));
  m.def("subset_fields", &subset_fields, py::arg("fields"), py::arg("indices"));

  // clustering and voting
  m.def("dbscan", &dbscan, py::arg("features"), py::arg("eps"), py::arg("min_pts"));
  m.def("segment_parts", &segment_parts, py::arg("points"), py::arg("fields"),
        py::arg("params"));
  m.def("segmentation_ap", &segmentation_ap, py::arg("pred"), py::arg("gt_part_id"),
        py::arg("iou_threshold") = 0.75);
  m.def("vote_joint", &vote_joint, py::arg("part_points"), py::arg("fields"),
        py::arg("min_support") = kDefaultMinSupport);

  // grasping and planning
  m.def("propose_candidates", &propose_candidates, py::arg("part_points"), py::arg("estimate"),
        py::arg("k"), py::arg("normals") = std::vector<Vec3>{});
  m.def("plan_trajectory", &plan_trajectory, py::arg("psi"), py::arg("grasp_point"),
        py::arg("current"), py::arg("target"), py::arg("L"));
  m.def("receding_horizon_run", &receding_horizon_run, py::arg("scene"), py::arg("part_id"),
        py::arg("initial_psi"), py::arg("grasp"), py::arg("config"));

  // refinement
  m.def(
      "hungarian",
      [](const Eigen::MatrixXd& cost) {
        Assignment a = hungarian(cost);
        return py::make_tuple(a.pairs, a.total_cost);
      },
      py::arg("cost"));
  m.def(
      "trajectory_objective",
      [](const JointParams& psi, const std::vector<Trajectory>& actuals,
         const std::vector<PlanTemplate>& templates) {
        ObjectiveResult r = trajectory_objective(psi, actuals, templates);
        return py::make_tuple(r.value, r.assignment.pairs);
      },
      py::arg("psi"), py::arg("actuals"), py::arg("templates"));
  m.def(
      "refine_parameters",
      [](const JointParams& psi0, const std::vector<Trajectory>& actuals,
         const std::vector<PlanTemplate>& templates, const RefineConfig& config) {
        return refine_parameters(psi0, actuals, templates, config);
      },
      py::arg("psi0"), py::arg("actuals"), py::arg("templates"),
      py::arg("config") = RefineConfig{});

  // experiment pipeline, JSON config in / JSON report out
  m.def(
      "run_experiment_json",
      [](const std::string& config_json) {
        io::json doc;
        try {
          doc = io::json::parse(config_json);
        } catch (const io::json::parse_error& e) {
          throw IoError(e.what());
        }
        ExperimentConfig config = experiment_config_from_json(doc);
        return experiment_report_json(config, run_experiment(config)).dump(2);
      },
      py::arg("config_json"));
}
