import numpy as np
import pytest

from armpilot.session import SessionConfig
from armpilot.tasks import MARKERS, SimCube, TaskSpec, run_task
from armpilot.kinematics import Pose
from armpilot.traces import TraceSample, bundled_trace


def test_markers_within_reach(chain6):
    from armpilot.kinematics import reach_check

    for p in MARKERS.values():
        assert reach_check(chain6, p)


def test_taskspec_validation():
    with pytest.raises(ValueError):
        TaskSpec("juggle", "A", "B")
    with pytest.raises(ValueError):
        TaskSpec("translate", "A", "E")
    with pytest.raises(ValueError):
        TaskSpec("translate", "B", "B")


def test_marker_outside_reach_rejected(session_config):
    far = {k: v.copy() for k, v in MARKERS.items()}
    far["B"] = np.array([2.0, 0.0, 0.05])
    task = TaskSpec("translate", "B", "C", markers=far)
    with pytest.raises(ValueError):
        run_task(task, [], session_config)


def test_translate_b_to_c_succeeds(session_config):
    report, log = run_task(
        TaskSpec("translate", "B", "C"), bundled_trace("translate_b_to_c"), session_config
    )
    assert report.success
    assert report.reason == "ok"
    assert report.grasped and report.released
    assert report.final_distance_to_end <= 0.02
    assert report.motion_time_s > 0
    assert len(log) == report.frames


def test_rotate_succeeds(session_config):
    report, _ = run_task(
        TaskSpec("rotate", "B", "C"), bundled_trace("rotate_quarter_turn"), session_config
    )
    assert report.success
    assert 80.0 <= report.yaw_delta_deg <= 100.0


def test_never_grasped_reason(session_config):
    # keep the aperture open: the gripper never closes below the attach width
    trace = [
        it if not isinstance(it, TraceSample)
        else TraceSample(it.t, it.pos, it.quat, max(it.aperture, 0.9))
        for it in bundled_trace("translate_b_to_c")
    ]
    report, _ = run_task(TaskSpec("translate", "B", "C"), trace, session_config)
    assert not report.success
    assert report.reason == "never grasped"


def test_rotate_without_yaw_fails(session_config):
    # run the translate motion against the rotate judge: yaw delta ~0
    trace = bundled_trace("translate_b_to_c")
    report, _ = run_task(TaskSpec("rotate", "B", "C"), trace, session_config)
    assert not report.success


def test_task_deterministic(session_config):
    trace = bundled_trace("rotate_quarter_turn")
    r1, _ = run_task(TaskSpec("rotate", "B", "C"), trace, session_config)
    r2, _ = run_task(TaskSpec("rotate", "B", "C"), trace, session_config)
    assert r1.to_dict() == r2.to_dict()


def test_simcube_rigid_follow():
    cube = SimCube(position=np.array([0.4, 0.0, 0.08]))
    tcp0 = Pose((0.4, 0.0, 0.10))
    cube.attach(tcp0)
    assert cube.attached
    cube.follow(Pose((0.45, 0.1, 0.2)))
    assert np.allclose(cube.position, [0.45, 0.1, 0.18], atol=1e-12)
    cube.release(rest_z=0.08)
    assert not cube.attached
    assert cube.position[2] == 0.08
