"""Articulated-scene toolkit: synthetic scenes, part clustering, joint voting,
trajectory planning and matched-cost refinement."""

from articukit._core import (
    ArticulatedObject,
    Box,
    ClusterParams,
    ContactLostError,
    FeatureMode,
    GraspCandidate,
    IoError,
    JointEstimate,
    JointParams,
    JointType,
    LabeledCloud,
    NoiseModel,
    ObjectSpec,
    PartSegmentation,
    PartSpec,
    PerPointFields,
    PlanConfig,
    PlanTemplate,
    RefineConfig,
    RunIteration,
    RunLog,
    Semantic,
    Trajectory,
    ValidationError,
    apply_joint_displacement,
    axis_angular_error_deg,
    axis_origin_error_m,
    corrupt_fields,
    dbscan,
    direction_loss,
    focal_loss,
    ground_truth_fields,
    hungarian,
    plan_trajectory,
    propose_candidates,
    random_object_spec,
    receding_horizon_run,
    refine_parameters,
    rodrigues,
    run_experiment_json,
    sample_cloud,
    segment_parts,
    segmentation_ap,
    subset_fields,
    trajectory_objective,
    vector_loss,
    vote_joint,
)

__all__ = [
    "ArticulatedObject",
    "Box",
    "ClusterParams",
    "ContactLostError",
    "FeatureMode",
    "GraspCandidate",
    "IoError",
    "JointEstimate",
    "JointParams",
    "JointType",
    "LabeledCloud",
    "NoiseModel",
    "ObjectSpec",
    "PartSegmentation",
    "PartSpec",
    "PerPointFields",
    "PlanConfig",
    "PlanTemplate",
    "RefineConfig",
    "RunIteration",
    "RunLog",
    "Semantic",
    "Trajectory",
    "ValidationError",
    "apply_joint_displacement",
    "axis_angular_error_deg",
    "axis_origin_error_m",
    "corrupt_fields",
    "dbscan",
    "direction_loss",
    "focal_loss",
    "ground_truth_fields",
    "hungarian",
    "plan_trajectory",
    "propose_candidates",
    "random_object_spec",
    "receding_horizon_run",
    "refine_parameters",
    "rodrigues",
    "run_experiment_json",
    "sample_cloud",
    "segment_parts",
    "segmentation_ap",
    "subset_fields",
    "trajectory_objective",
    "vector_loss",
    "vote_joint",
]
