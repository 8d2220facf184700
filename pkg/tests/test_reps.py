import cmath
import math

import numpy as np
import pytest

from braidlab.angles import Angle
from braidlab.errors import (
    DegenerateQ,
    EighthRootRequired,
    InadmissibleTheta,
    NoProperInvariantSubspace,
    NotUnitarizable,
    OddStrandCount,
)
from braidlab.reps import (
    Rep,
    Tau3Choice,
    build_burau_unreduced,
    build_character,
    build_eta,
    build_ising_majorana,
    build_jones_b3,
    build_standard_type,
    commutant_dimension,
    composition_factor,
    composition_factor_detail,
    direct_sum,
    eta_admissible,
    evaluate,
    load_rep,
    parity_operator,
    projectively_equivalent,
    quantum_integer,
    rep_from_text,
    rep_to_text,
    save_rep,
    unitarize,
    verify_relations,
)
from braidlab.words import BraidWord


def test_character_examples():
    r = build_character(Angle.pi(0), 4)
    assert all(np.allclose(g, [[1]]) for g in r.generators)
    r = build_character(Angle.pi(1), 3)
    assert all(np.allclose(g, [[-1]]) for g in r.generators)
    r = build_character(Angle.pi(1, 4), 6)
    assert verify_relations(r).max_residual == 0
    assert np.allclose(r.generators[0], [[cmath.exp(1j * math.pi / 4)]])


def test_eta_admissibility_examples():
    adm = eta_admissible(Angle.pi(1, 4))
    assert adm and math.isclose(adm.b_squared, 0.5, abs_tol=1e-15)
    adm = eta_admissible(Angle.pi(1, 12))
    assert not adm and adm.b_squared == pytest.approx(1 - 1 / (2 - 2 * math.cos(math.pi / 6)))
    assert not eta_admissible(Angle.pi(0))
    with pytest.raises(InadmissibleTheta):
        build_eta(Angle.pi(1, 12))


def _eta_oracle(theta):
    a = cmath.exp(1j * theta)
    b = math.sqrt(1 - 1 / (2 - 2 * math.cos(2 * theta)))
    return np.diag([a, a.conjugate()]), np.array([[1 / (a - a**3), b], [-b, 1 / (a.conjugate() - a.conjugate() ** 3)]])


def test_eta_pi_over_4_matrices():
    r = build_eta(Angle.pi(1, 4))
    s = 1 / math.sqrt(2)
    assert np.allclose(r.generators[0], np.diag([cmath.exp(1j * math.pi / 4), cmath.exp(-1j * math.pi / 4)]))
    assert np.allclose(r.generators[1], [[s, s], [-s, s]], atol=1e-12)
    assert abs(np.linalg.det(r.generators[1]) - 1) < 1e-12


def test_eta_pi_over_3_matrices():
    r = build_eta(Angle.pi(1, 3))
    assert np.allclose(r.generators[1], [[0.5 - 0.288675j, 0.816497], [-0.816497, 0.5 + 0.288675j]], atol=1e-6)
    t1, t2 = _eta_oracle(math.pi / 3)
    assert np.allclose(r.generators[1], t2)


def test_eta_b4_choices():
    r = build_eta(Angle.pi(1, 4), 4, Tau3Choice.CONJUGATE_OF_TAU1)
    assert np.allclose(r.generators[2], r.generators[0].conj())
    with pytest.raises(EighthRootRequired):
        build_eta(Angle.pi(1, 3), 4, Tau3Choice.CONJUGATE_OF_TAU1)
    r = build_eta(Angle.pi(1, 3), 4)
    assert verify_relations(r).passed


def test_quantum_integer_golden_ratio():
    assert quantum_integer(3, 5) == pytest.approx((1 + math.sqrt(5)) / 2)


def test_jones_examples():
    r = build_jones_b3(5)
    assert r.generators[1][0, 0] == pytest.approx(-0.5 + 0.363271j, abs=1e-6)
    r3 = build_jones_b3(3)
    assert abs(r3.generators[1][0, 1]) < 1e-12 and abs(r3.generators[1][1, 0]) < 1e-12
    r4 = build_jones_b3(4)
    assert np.allclose(r4.generators[0], np.diag([1j, -1]))
    with pytest.raises(DegenerateQ):
        build_jones_b3(2)


def _jones_without_q_factor(r):
    q = cmath.exp(2j * math.pi / r)
    off = math.sqrt(quantum_integer(3, r)) / (q + 1)
    return [np.diag([q, -1]), np.array([[-1 / (q + 1), off], [off, q * q / (q + 1)]])]


@pytest.mark.parametrize("r", [4, 5, 7, 8])
def test_jones_needs_q_on_off_diagonal(r):
    t1, t2 = _jones_without_q_factor(r)
    residual = np.abs(t1 @ t2 @ t1 - t2 @ t1 @ t2).max()
    assert residual > 1e-3
    assert verify_relations(build_jones_b3(r)).max_residual < 1e-12


def test_burau_examples():
    r = build_burau_unreduced(-1, 2)
    assert np.allclose(r.generators[0], [[2, -1], [1, 0]])
    for k in range(8):
        assert verify_relations(build_burau_unreduced(Angle.pi(2 * k + 1, 8), 3)).max_residual < 1e-12
    perm = build_burau_unreduced(1, 4)
    for g in perm.generators:
        assert set(np.round(g.real, 12).ravel()) <= {0.0, 1.0} and np.allclose(g.sum(axis=0), 1)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_burau_rows_sum_to_one(n):
    r = build_burau_unreduced(Angle.pi(2, 7), n)
    for g in r.generators:
        assert np.allclose(g.sum(axis=1), 1, atol=0)


def test_standard_type_examples():
    z = 1j
    r = build_standard_type(3, Angle.pi(1, 2))
    t1, t2 = r.generators
    expected = np.array([[0, 0, z * z], [0, z, 0], [1, 0, 0]])
    assert np.allclose(t1 @ t2 @ t1, expected) and np.allclose(t2 @ t1 @ t2, expected)
    r = build_standard_type(4, -1)
    assert r.unitary and verify_relations(r).max_residual < 1e-12
    with pytest.raises(ValueError):
        build_standard_type(3, 1)


def test_composition_factor_burau_generic():
    f = composition_factor(build_burau_unreduced(Angle.pi(2, 7), 3))
    assert f.dimension == 2 and verify_relations(f).passed


def test_composition_factor_burau_root_of_unity():
    f = composition_factor(build_burau_unreduced(Angle.pi(2, 5), 5))
    assert f.dimension == 4
    g = composition_factor(f)
    assert g.dimension == 3 and verify_relations(g).passed
    with pytest.raises(NoProperInvariantSubspace):
        composition_factor(g)


def test_composition_factor_generic_burau_n5_stops_at_four():
    f = composition_factor(build_burau_unreduced(Angle.pi(2, 7), 5))
    assert f.dimension == 4
    with pytest.raises(NoProperInvariantSubspace):
        composition_factor(f)


def test_eta_irreducible():
    with pytest.raises(NoProperInvariantSubspace):
        composition_factor(build_eta(Angle.pi(1, 4)))
    assert commutant_dimension(build_eta(Angle.pi(1, 4))) == 1


def test_ising_examples():
    r = build_ising_majorana(4)
    assert r.dimension == 4
    par = parity_operator(4)
    for g in r.generators:
        ev = np.linalg.eigvals(g)
        assert np.allclose(np.abs(ev), 1)
        assert all(min(abs(e - cmath.exp(1j * math.pi * k / 4)) for k in (1, -1)) < 1e-10 for e in ev)
        assert np.abs(g @ par - par @ g).max() < 1e-10
        assert all(abs(np.trace((np.eye(4) + s * par) / 2)) == pytest.approx(2) for s in (1, -1))
    assert build_ising_majorana(6).dimension == 8
    with pytest.raises(OddStrandCount):
        build_ising_majorana(3)


def test_verify_detects_perturbation():
    r = build_eta(Angle.pi(1, 4))
    g = [np.array(x) for x in r.generators]
    g[1][0, 1] += 1e-3
    bad = Rep(3, g, "perturbed", False)
    rep = verify_relations(bad)
    assert not rep.passed and 1e-4 < rep.max_residual < 1e-2


def test_direct_sum_of_characters_passes():
    r = direct_sum(build_character(Angle.pi(1, 3), 5), build_character(Angle.pi(1, 7), 5))
    assert verify_relations(r).passed and r.dimension == 2


def test_evaluate_examples():
    r = build_eta(Angle.pi(1, 4))
    assert np.allclose(evaluate(r, BraidWord((), 3)), np.eye(2))
    assert np.allclose(evaluate(r, BraidWord((1, 1), 3)), np.diag([1j, -1j]))
    c = build_character(Angle.pi(2, 7), 3)
    assert np.allclose(evaluate(c, BraidWord((1, -2), 3)), [[1]])


@pytest.mark.parametrize("theta,r,sign", [(Angle.pi(3, 10), 5, -1), (Angle.pi(7, 10), 5, 1)])
def test_eta_jones_correspondence(theta, r, sign):
    w = projectively_equivalent(build_eta(theta), build_jones_b3(r, sign))
    assert w and w.residual < 1e-8
    a = theta.unit()
    assert w.scalar == pytest.approx(-a, abs=1e-9) or w.scalar == pytest.approx(-a.conjugate(), abs=1e-9)


def test_equivalence_reflexive_and_negative():
    e = build_eta(Angle.pi(1, 4))
    w = projectively_equivalent(e, e)
    assert w and w.scalar == pytest.approx(1) and w.residual < 1e-12
    cc = direct_sum(build_character(Angle.pi(1, 4), 3), build_character(Angle.pi(-1, 4), 3))
    assert not projectively_equivalent(e, cc)


def test_equivalence_recovers_random_similarity():
    rng = np.random.default_rng(3)
    e = build_burau_unreduced(Angle.pi(1, 3), 4)
    s = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    c = cmath.exp(0.7j)
    other = e.with_generators([c * s @ g @ np.linalg.inv(s) for g in e.generators], "conjugated", False)
    w = projectively_equivalent(e, other)
    assert w and w.scalar == pytest.approx(c, abs=1e-8)
    back = projectively_equivalent(other, e)
    assert back and back.scalar == pytest.approx(1 / c, abs=1e-8)


@pytest.mark.parametrize("z", [Angle.pi(1, 5), Angle.pi(1, 3), Angle.pi(2, 5)])
def test_unitarize_reduced_burau(z):
    f = composition_factor(build_burau_unreduced(z, 4))
    u, s = unitarize(f)
    assert u.unitary and u.unitarity_defect() < 1e-9
    for a, b in zip(f.generators, u.generators):
        assert np.allclose(s @ a @ np.linalg.inv(s), b)


def test_unitarize_fails_outside_window():
    f = composition_factor(build_burau_unreduced(Angle.pi(2, 3), 4))
    with pytest.raises(NotUnitarizable):
        unitarize(f)


def test_factor_detail_kind():
    det = composition_factor_detail(build_burau_unreduced(Angle.pi(2, 7), 3))
    assert det.kind == "quotient" and det.basis.shape == (3, 2)


def test_rep_text_round_trip(tmp_path):
    r = build_jones_b3(7, -1)
    again = rep_from_text(rep_to_text(r))
    assert again.label == r.label and again.unitary == r.unitary
    assert all(np.array_equal(a, b) for a, b in zip(r.generators, again.generators))
    path = tmp_path / "r.json"
    save_rep(r, path)
    assert path.read_text() == rep_to_text(r)
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".tmp-")]
    assert load_rep(path).dimension == 2
