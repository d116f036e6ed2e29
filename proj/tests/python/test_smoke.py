import json
import math

import numpy as np
import pytest

import articukit as ak


def door_spec():
    spec = ak.ObjectSpec()
    spec.static_shape.center = np.zeros(3)
    spec.static_shape.half_extents = np.array([0.4, 0.3, 0.5])
    part = ak.PartSpec()
    part.part_id = 1
    part.joint = ak.JointParams(
        np.array([0.0, 0.0, 1.0]), np.array([0.4, 0.3, 0.0]), ak.JointType.Revolute
    )
    part.shape.center = np.array([0.0, 0.33, 0.0])
    part.shape.half_extents = np.array([0.36, 0.015, 0.22])
    part.state_lo = 0.0
    part.state_hi = math.pi / 2
    spec.parts = [part]
    return spec


def test_kinematics_roundtrip():
    joint = ak.JointParams(
        np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]), ak.JointType.Revolute
    )
    p = np.array([2.0, 0.0, 0.3])
    q = ak.apply_joint_displacement(p, joint, math.pi / 2)
    assert np.allclose(q, [1.0, 1.0, 0.3], atol=1e-12)
    back = ak.apply_joint_displacement(q, joint, -math.pi / 2)
    assert np.allclose(back, p, atol=1e-12)


def test_loss_pins():
    assert ak.vector_loss(np.array([1.0, 0, 0]), np.array([1.0, 0, 0])) == pytest.approx(-1.0)
    assert ak.vector_loss(np.array([0.0, 1, 0]), np.array([1.0, 0, 0])) == pytest.approx(
        math.sqrt(2.0)
    )
    assert ak.focal_loss(np.array([0.5, 0.5, 0.0]), ak.Semantic.Static, 0.0, 1.0) == pytest.approx(
        math.log(2.0)
    )


def test_pipeline_noiseless_round_trip():
    obj = ak.ArticulatedObject(door_spec())
    cloud = ak.sample_cloud(obj, 2048, 7)
    fields = ak.ground_truth_fields(cloud, obj)

    params = ak.ClusterParams()
    params.eps = 0.08
    params.min_pts = 8
    seg = ak.segment_parts(cloud.points, fields, params)
    assert seg.n_clusters == 1
    assert ak.segmentation_ap(seg, cloud.part_id, 0.75) == 1.0

    members = seg.cluster_members(0)
    part_points = [cloud.points[i] for i in members]
    est = ak.vote_joint(part_points, ak.subset_fields(fields, members))
    truth = obj.spec.parts[0].joint
    assert ak.axis_angular_error_deg(est.params.axis_dir, truth.axis_dir) < 1e-6
    assert ak.axis_origin_error_m(est.params, truth) < 1e-9
    assert est.params.type == ak.JointType.Revolute


def test_corrupt_fields_deterministic():
    obj = ak.ArticulatedObject(door_spec())
    cloud = ak.sample_cloud(obj, 512, 3)
    fields = ak.ground_truth_fields(cloud, obj)
    noise = ak.NoiseModel()
    noise.offset_sigma = 0.01
    noise.dropout_frac = 0.25
    noise.rng_seed = 11
    a_fields, a_kept = ak.corrupt_fields(fields, noise)
    b_fields, b_kept = ak.corrupt_fields(fields, noise)
    assert a_kept == b_kept
    assert len(a_kept) == len(cloud) - round(0.25 * len(cloud))
    assert all(np.array_equal(x, y) for x, y in zip(a_fields.offset, b_fields.offset))


def test_dbscan_and_hungarian():
    feats = np.array([[0.0], [0.1], [0.2], [5.0], [5.1], [5.2]])
    assert ak.dbscan(feats, 0.15, 2) == [0, 0, 0, 1, 1, 1]

    cost = np.array([[1.0, 2.0], [2.0, 1.0]])
    pairs, total = ak.hungarian(cost)
    assert pairs == [(0, 0), (1, 1)]
    assert total == 2.0
    with pytest.raises(ValueError):
        ak.hungarian(np.array([[1.0], [2.0]]))  # more rows than columns


def test_receding_horizon_recovers_perturbed_axis():
    obj = ak.ArticulatedObject(door_spec())
    truth = obj.spec.parts[0].joint
    tilted = ak.rodrigues(truth.axis_dir, np.array([1.0, 0.0, 0.0]), math.radians(10.0))
    psi0 = ak.JointParams(tilted, truth.origin + np.array([0.02, 0.0, 0.0]),
                          ak.JointType.Revolute)

    grasp = ak.GraspCandidate()
    grasp.point = np.array([-0.3, 0.345, 0.05])
    config = ak.PlanConfig()
    config.L = 10
    config.H = 3
    config.max_iterations = 10
    config.target_displacement = 1.2
    log = ak.receding_horizon_run(obj, 1, psi0, grasp, config)
    assert log.converged
    assert ak.axis_angular_error_deg(log.final_psi.axis_dir, truth.axis_dir) < 1.0
    assert ak.axis_origin_error_m(log.final_psi, truth) < 0.005
    objectives = [it.objective for it in log.iterations]
    assert all(b <= a + 1e-12 for a, b in zip(objectives, objectives[1:]))


def test_contact_error_maps_to_python():
    obj = ak.ArticulatedObject(door_spec())
    psi = obj.spec.parts[0].joint
    grasp = ak.GraspCandidate()
    grasp.point = np.array([5.0, 5.0, 5.0])
    config = ak.PlanConfig()
    config.target_displacement = 1.0
    with pytest.raises(ak.ContactLostError):
        ak.receding_horizon_run(obj, 1, psi, grasp, config)
    assert issubclass(ak.ContactLostError, ak.ValidationError)
    assert issubclass(ak.ValidationError, ValueError)


def test_experiment_json_deterministic():
    config = {
        "seed": 21,
        "n_scenes": 2,
        "n_points": 512,
        "cluster": {"eps": 0.08, "min_pts": 8},
        "noise": {"offset_sigma": 0.005, "class_flip_prob": 0.01},
    }
    a = ak.run_experiment_json(json.dumps(config))
    b = ak.run_experiment_json(json.dumps(config))
    assert a == b
    report = json.loads(a)
    assert report["n_scenes"] == 2
    assert 0.0 <= report["aggregate"]["ap75"] <= 1.0
    with pytest.raises(OSError):
        ak.run_experiment_json("{not json")
