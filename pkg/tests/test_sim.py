import json

import numpy as np
import pytest

from armpilot.kinematics import forward_kinematics, load_chain
from armpilot.sim import RobotLimits, RobotSim

DT = 1.0 / 35.0


def one_joint_chain(link=1.0):
    doc = {
        "base": {"t": [0, 0, 0], "q": [1, 0, 0, 0]},
        "tool": {"t": [link, 0, 0], "q": [1, 0, 0, 0]},
        "reach_radius_m": link,
        "joints": [
            {"axis": [0, 0, 1], "origin_t": [0, 0, 0], "origin_q": [1, 0, 0, 0],
             "limits": [-3.2, 3.2], "max_vel": 50.0}
        ],
    }
    return load_chain(json.dumps(doc))


# independent oracle: closed-form trapezoidal / triangular profile times
def profile_time(distance, v_max, a_max):
    d_ramps = v_max * v_max / a_max  # accel + decel distance at full cruise
    if distance <= d_ramps:
        return 2.0 * np.sqrt(distance / a_max)
    return 2.0 * v_max / a_max + (distance - d_ramps) / v_max


def tcp_speed_trace(sim, chain, n_steps, dt=DT):
    prev = sim.sample().tcp_pose.position
    speeds = []
    for _ in range(n_steps):
        st = sim.step(dt)
        speeds.append(np.linalg.norm(st.tcp_pose.position - prev) / dt)
        prev = st.tcp_pose.position
    return np.array(speeds)


def test_one_meter_move_matches_triangular_oracle():
    # unit link, 1 rad command = exactly 1.0 m of TCP arc
    chain = one_joint_chain()
    sim = RobotSim(chain, RobotLimits(command_latency=0.0))
    sim.enqueue_command(np.array([1.0]), 0.0, now=0.0)
    expected = profile_time(1.0, 2.0, 0.2)
    assert expected == pytest.approx(2.0 * np.sqrt(5.0), abs=1e-12)
    t_arrive = None
    for _ in range(300):
        st = sim.step(DT)
        if t_arrive is None and abs(st.q[0] - 1.0) <= 1e-9:
            t_arrive = st.time
            break
    assert t_arrive is not None
    assert abs(t_arrive - expected) <= 0.02 * expected


def test_long_move_cruises_at_cap():
    chain = one_joint_chain(link=45.0)
    sim = RobotSim(chain, RobotLimits(command_latency=0.0))
    sim.enqueue_command(np.array([40.0 / 45.0]), 0.0, now=0.0)  # 40 m of arc
    expected = profile_time(40.0, 2.0, 0.2)
    speeds = tcp_speed_trace(sim, chain, int(expected / DT) + 40)
    assert speeds.max() <= 2.0 * 1.01
    cruise = speeds[(speeds > 1.99)]
    assert len(cruise) * DT > 5.0  # long cruise phase at the cap


def test_speed_and_accel_caps_one_joint():
    chain = one_joint_chain()
    sim = RobotSim(chain, RobotLimits(command_latency=0.0))
    sim.enqueue_command(np.array([1.0]), 0.0, now=0.0)
    speeds = tcp_speed_trace(sim, chain, 200)
    accels = np.abs(np.diff(speeds)) / DT
    assert speeds.max() <= 2.0 * 1.01
    assert accels.max() <= 0.2 * 1.05


def test_caps_random_trajectories_6dof(chain6, rng):
    # one command per trajectory, measured from rest to rest
    limits = RobotLimits(command_latency=0.0)
    for _ in range(15):
        sim = RobotSim(chain6, limits)
        q_cmd = rng.uniform(chain6.limits_lo, chain6.limits_hi)
        sim.enqueue_command(q_cmd, 0.0, now=0.0)
        speeds = []
        prev = sim.sample().tcp_pose.position
        for _step in range(2000):
            st = sim.step(DT)
            speeds.append(np.linalg.norm(st.tcp_pose.position - prev) / DT)
            prev = st.tcp_pose.position
            vel_ok = np.abs(st.joint_velocities) <= chain6.max_velocities + 1e-9
            assert vel_ok.all()
            if np.max(np.abs(st.q - q_cmd)) < 1e-12 and speeds[-1] == 0.0:
                break
        speeds = np.array(speeds)
        accels = np.abs(np.diff(speeds)) / DT
        assert speeds.max() <= 2.0 * 1.01
        assert accels.max() <= 0.2 * 1.05
        assert np.max(np.abs(st.q - q_cmd)) < 1e-9


def test_convergence_monotone_after_release(chain6):
    sim = RobotSim(chain6, RobotLimits(command_latency=0.1))
    cmd = chain6.home_config() + 0.3
    sim.enqueue_command(cmd, 50.0, now=0.0)
    errs = []
    for _ in range(600):
        st = sim.step(DT)
        if st.time > 0.1 + DT:
            errs.append(np.max(np.abs(st.q - cmd)))
    d = np.diff(errs)
    assert np.all(d <= 1e-12)
    assert errs[-1] < 1e-9


def test_latency_first_response_tick():
    chain = one_joint_chain()
    for latency in (0.0, 0.1, 0.5, 1.0):
        sim = RobotSim(chain, RobotLimits(command_latency=latency))
        sim.enqueue_command(np.array([1.0]), 0.0, now=0.0)
        first_move = None
        for _ in range(200):
            st = sim.step(DT)
            if first_move is None and abs(st.q[0]) > 0.0:
                first_move = st.time
                break
        starts = np.arange(0, 6, DT)
        first_eligible_start = starts[starts >= latency - 1e-12][0]
        assert first_move == pytest.approx(first_eligible_start + DT, abs=1e-9)


def test_no_response_before_release():
    chain = one_joint_chain()
    sim = RobotSim(chain, RobotLimits(command_latency=0.2))
    sim.enqueue_command(np.array([1.0]), 20.0, now=0.0)
    while sim.sample().time < 0.19:
        st = sim.step(DT)
        assert st.q[0] == 0.0
        assert st.gripper_openness == 0.0


def test_latest_wins_supersession():
    chain = one_joint_chain()
    sim = RobotSim(chain, RobotLimits(command_latency=0.05))
    sim.enqueue_command(np.array([1.0]), 0.0, now=0.0)
    sim.enqueue_command(np.array([0.25]), 0.0, now=0.001)
    for _ in range(700):
        st = sim.step(DT)
    assert st.q[0] == pytest.approx(0.25, abs=1e-9)


def test_gripper_rate_limit_and_bounds():
    chain = one_joint_chain()
    sim = RobotSim(chain, RobotLimits(command_latency=0.0, gripper_speed=100.0))
    sim.enqueue_command(np.array([0.0]), 145.0, now=0.0)
    t_full = None
    prev = 0.0
    for _ in range(200):
        st = sim.step(DT)
        assert 0.0 <= st.gripper_openness <= 145.0
        assert abs(st.gripper_openness - prev) <= 100.0 * DT + 1e-12
        prev = st.gripper_openness
        if t_full is None and st.gripper_openness >= 145.0:
            t_full = st.time
    assert t_full == pytest.approx(1.45, abs=DT + 1e-9)


def test_enqueue_rejects_bad_commands(chain6):
    sim = RobotSim(chain6)
    with pytest.raises(ValueError):
        sim.enqueue_command(chain6.limits_hi + 1.0, 0.0, now=0.0)
    with pytest.raises(ValueError):
        sim.enqueue_command(chain6.home_config(), 200.0, now=0.0)


def test_sample_side_effect_free(chain6):
    sim = RobotSim(chain6)
    a = sim.sample()
    b = sim.sample()
    assert a.time == b.time == 0.0
    assert np.array_equal(a.q, b.q)
    assert a.gripper_openness == 0.0
    assert np.array_equal(a.q, chain6.home_config())


def test_tcp_pose_is_cached_fk(chain6, rng):
    sim = RobotSim(chain6, RobotLimits(command_latency=0.0))
    sim.enqueue_command(rng.uniform(chain6.limits_lo / 2, chain6.limits_hi / 2), 30.0, now=0.0)
    for _ in range(50):
        st = sim.step(DT)
        expected = forward_kinematics(chain6, st.q)
        assert np.allclose(st.tcp_pose.position, expected.position, atol=1e-9)


def test_determinism_bit_identical(chain6, rng):
    cmds = [rng.uniform(chain6.limits_lo / 2, chain6.limits_hi / 2) for _ in range(5)]

    def run():
        sim = RobotSim(chain6, RobotLimits(command_latency=0.07))
        trace = []
        for k in range(300):
            if k % 60 == 0 and k // 60 < len(cmds):
                sim.enqueue_command(cmds[k // 60], 10.0 * (k // 60), now=sim.sample().time)
            st = sim.step(DT)
            trace.append((st.q.tobytes(), st.gripper_openness, st.time))
        return trace

    assert run() == run()


def test_pure_rotation_command_slews_joints():
    # same TCP position, wrist flip: zero-arc path must still converge
    chain = one_joint_chain()
    sim = RobotSim(chain, RobotLimits(command_latency=0.0))
    # command equal to current q: finishes immediately, stays put
    sim.enqueue_command(np.array([0.0]), 0.0, now=0.0)
    st = sim.step(DT)
    assert st.q[0] == 0.0


def test_limits_validation():
    with pytest.raises(ValueError):
        RobotLimits(max_line_velocity=0.0)
    with pytest.raises(ValueError):
        RobotLimits(command_latency=-0.1)
    RobotLimits(command_latency=0.0)  # zero latency is allowed
