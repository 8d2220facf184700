import cmath

import numpy as np
import pytest

from braidlab.angles import Angle
from braidlab.ball import ElementTable, align_phase, bfs_ball
from braidlab.errors import BallTooLarge
from braidlab.reps import build_character, build_eta, build_jones_b3, direct_sum


def test_align_phase_removes_global_phase():
    m = np.array([[0, 2j], [1, 0]])
    assert np.allclose(align_phase(m), [[0, 2], [-1j, 0]])
    assert np.allclose(align_phase(cmath.exp(0.4j) * m), align_phase(m))


def test_table_dedup_modulo_phase():
    t = ElementTable(2, projective=True)
    m = np.diag([1, 1j])
    t.add(m)
    assert t.find(cmath.exp(1.1j) * m) == 0
    assert t.find(m + 1e-3) is None
    plain = ElementTable(2, projective=False)
    plain.add(m)
    assert plain.find(-m) is None


def test_character_ball_cyclic():
    c = build_character(Angle.pi(1, 3), 3)
    b = bfs_ball(c, 10, projective=False)
    assert len(b) == 6 and b.saturated
    assert len(bfs_ball(c, 10, projective=True)) == 1


def test_ball_words_are_shortest():
    b = bfs_ball(build_eta(Angle.pi(1, 4)), 8)
    assert b.saturated and len(b) == 24
    assert list(b.radii) == sorted(b.radii)
    assert all(len(w) == r for w, r in zip(b.words, b.radii))


def test_abelian_diagonal_group_size():
    r = direct_sum(build_character(Angle.pi(1, 2), 3), build_character(Angle.pi(1, 3), 3))
    # generators equal diag(i, e^{i pi/3}); order 12 cyclic group, projectively order 12/gcd stuff
    ball = bfs_ball(r, 20, projective=False)
    assert len(ball) == 12


def test_ball_cap():
    with pytest.raises(BallTooLarge):
        bfs_ball(build_jones_b3(7), 12, max_size=500)
