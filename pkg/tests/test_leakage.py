import math

import numpy as np
import pytest

from braidlab.angles import Angle
from braidlab.errors import DimensionMismatch, InvalidParameter, NotAQubitLayout
from braidlab.leakage import (
    NUMERICAL_EVIDENCE,
    BestEffort,
    BridgeSolution,
    NoSolution,
    Subspace,
    admissible_theta_grid,
    bridge_residual,
    charge_counterexample,
    embed_pair,
    enumerate_leakage_free,
    eta_pair_layout,
    leakage_both,
    leakage_of,
    mirror,
    parity_subspace,
    periodic_theta_grid,
    qubit_ansatz,
    solve_bridge_numeric,
    solve_bridge_qubit_closed_form,
    theta_grid,
    theta_scan,
)
from braidlab.reps import (
    build_character,
    build_eta,
    build_ising_majorana,
    build_standard_type,
    direct_sum,
    majorana_operators,
    restrict,
    verify_relations,
)
from braidlab.words import BraidWord


def test_embed_eta_pair_matches_block_display():
    th = Angle.pi(1, 4)
    lay = eta_pair_layout(th)
    a = th.unit()
    ab = a.conjugate()
    b = math.sqrt(0.5)
    assert lay.n == 6 and lay.d == 4 and lay.bridge_index == 3
    assert np.allclose(lay.generator(1), np.diag([a, a, ab, ab]))
    p, pp = 1 / (a - a**3), 1 / (ab - ab**3)
    assert np.allclose(lay.generator(2), [[p, 0, b, 0], [0, p, 0, b], [-b, 0, pp, 0], [0, -b, 0, pp]])
    assert np.allclose(lay.generator(4), [[p, b, 0, 0], [-b, pp, 0, 0], [0, 0, p, b], [0, 0, -b, pp]])
    assert np.allclose(lay.generator(5), np.diag([a, ab, a, ab]))
    assert lay.generator(3) is None


def test_embedded_far_generators_commute():
    lay = embed_pair(build_standard_type(3, Angle.pi(2, 5)), build_eta(Angle.pi(1, 3), 4))
    gens = {i: lay.generator(i) for i in range(1, lay.n) if lay.generator(i) is not None}
    for i in gens:
        for j in gens:
            if abs(i - j) >= 2:
                assert np.abs(gens[i] @ gens[j] - gens[j] @ gens[i]).max() <= 1e-15


def test_mirror_is_a_representation():
    m = mirror(build_eta(Angle.pi(2, 5), 4))
    assert verify_relations(m).passed


def test_character_layout_trivially_solvable():
    c = build_character(Angle.pi(1, 3), 3)
    lay = embed_pair(c, build_character(Angle.pi(1, 3), 2))
    assert lay.d == 1
    sol = solve_bridge_numeric(lay)
    assert sol and sol.residual == 0 and sol.abelian
    assert sol.matrix[0, 0] == pytest.approx(Angle.pi(1, 3).unit())


@pytest.mark.parametrize("th", [Angle.pi(1, 4), Angle.pi(3, 4), Angle.pi(-1, 4), Angle.pi(-3, 4)])
def test_closed_form_eighth_roots(th):
    sol = solve_bridge_qubit_closed_form(eta_pair_layout(th))
    assert isinstance(sol, BridgeSolution) and sol.residual < 1e-10
    assert not sol.abelian
    full = eta_pair_layout(th).complete(sol.matrix)
    assert verify_relations(full).passed


@pytest.mark.parametrize("th,floor", [(Angle.pi(1, 3), 0.1), (Angle.rad(0.7), 1e-3)])
def test_closed_form_fails_elsewhere(th, floor):
    sol = solve_bridge_qubit_closed_form(eta_pair_layout(th))
    assert isinstance(sol, NoSolution) and sol.residual >= floor


def test_closed_form_scalar_equations_agree_with_residual():
    for th in (Angle.pi(1, 4), Angle.pi(1, 3), Angle.rad(0.7)):
        a, trials = qubit_ansatz(eta_pair_layout(th))
        on_root = abs(math.cos(2 * float(th))) < 1e-12
        for t in trials:
            assert (max(t.eq_left, t.eq_right) < 1e-12) == on_root
            assert (t.residual < 1e-12) == on_root


def test_closed_form_rejects_non_qubit_layouts():
    with pytest.raises(NotAQubitLayout):
        solve_bridge_qubit_closed_form(embed_pair(build_standard_type(3, Angle.pi(1, 2)), build_eta(Angle.pi(1, 4))))


def test_numeric_matches_closed_form_up_to_x_choice():
    lay = eta_pair_layout(Angle.pi(1, 4))
    num = solve_bridge_numeric(lay, attempts=5, seed=1)
    closed = solve_bridge_qubit_closed_form(lay)
    assert num and num.residual < 1e-9
    options = [closed.matrix, *closed.alternatives]
    assert min(np.abs(num.matrix - m).max() for m in options) < 1e-8


def test_numeric_best_effort_on_qutrits():
    s = build_standard_type(3, Angle.pi(2, 5))
    res = solve_bridge_numeric(embed_pair(s, s), attempts=5, seed=0)
    assert isinstance(res, BestEffort) and res.residual >= 1e-2
    assert "not a proof" in res.evidence and res.evidence == NUMERICAL_EVIDENCE


def test_numeric_is_deterministic():
    s = build_standard_type(3, Angle.pi(2, 5))
    a = solve_bridge_numeric(embed_pair(s, s), attempts=3, seed=7)
    b = solve_bridge_numeric(embed_pair(s, s), attempts=3, seed=7)
    assert a.residual == b.residual and np.array_equal(a.matrix, b.matrix)


def test_bridge_residual_zero_for_completed_ising_block():
    lay = eta_pair_layout(Angle.pi(1, 4))
    sol = solve_bridge_qubit_closed_form(lay)
    assert bridge_residual(lay, sol.matrix) < 1e-12


def test_theta_grids():
    g = theta_grid(5)
    assert [t.text() for t in g] == ["-1pi", "-1/2pi", "0pi", "1/2pi", "1pi"]
    assert [t.text() for t in periodic_theta_grid(4)] == ["-1/2pi", "0pi", "1/2pi", "1pi"]
    adm = admissible_theta_grid(181)
    assert len(adm) >= 181 and len(adm) % 2 == 0
    assert {t.text() for t in adm} >= {"1/4pi", "-1/4pi", "3/4pi", "-3/4pi"}


def test_theta_scan_single_points():
    rows = theta_scan([Angle.pi(1, 4)])
    assert rows[0].passed and rows[0].residual < 1e-10
    rows = theta_scan([Angle.rad(0.7)])
    assert not rows[0].passed and rows[0].residual > 1e-3
    assert theta_scan([Angle.pi(0)]) == []


def test_subspace_validation():
    with pytest.raises(InvalidParameter):
        Subspace(np.array([[1, 1], [0, 0]]))
    s = Subspace.from_basis(np.array([[1], [1]]))
    assert s.rank == 1


def test_leakage_identity_and_parity():
    rep = build_ising_majorana(6)
    p = parity_subspace(6)
    assert leakage_of(rep, p, BraidWord((), 6)) == 0
    for g in range(1, 6):
        assert leakage_of(rep, p, BraidWord((g,), 6)) < 1e-12


def test_leakage_block_counterexample():
    # direct sum of two inequivalent eta blocks, rotated by a fixed unitary that mixes them
    e1 = build_eta(Angle.pi(1, 4))
    e2 = build_eta(Angle.pi(-1, 4))
    rep = direct_sum(e1, e2)
    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    rot = rep.with_generators([q @ g @ q.conj().T for g in rep.generators])
    p = Subspace.coordinates(4, [0, 1])
    assert leakage_of(rot, p, BraidWord((1,), 3)) > 1e-3


def test_charge_counterexample_structure():
    rep, p = charge_counterexample()
    g = majorana_operators(6)
    c = 1j * g[0] @ g[1] @ g[2]
    assert np.allclose(c @ c, np.eye(8)) and p.rank == 4
    for i in (1, 2, 4, 5):
        assert leakage_of(rep, p, BraidWord((i,), 6)) < 1e-12
    assert leakage_of(rep, p, BraidWord((3,), 6)) == pytest.approx(math.sqrt(0.5))
    assert leakage_of(rep, p, BraidWord((3, 3), 6)) == pytest.approx(1.0)


def test_leakage_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        leakage_of(build_eta(Angle.pi(1, 4)), parity_subspace(4), BraidWord((1,), 3))


def test_leakage_both_directions():
    rep, p = charge_counterexample()
    fwd, back = leakage_both(rep, p, BraidWord((3, 1), 6))
    assert fwd == pytest.approx(back)


def test_enumerate_diagonal_rep():
    rep = direct_sum(build_character(Angle.pi(1, 3), 4), build_character(Angle.pi(1, 5), 4))
    rep_u = rep.with_generators(rep.generators, unitary=True)
    report = enumerate_leakage_free(rep_u, Subspace.coordinates(2, [0]), 4)
    assert report.leaking == [] and report.closure_ok and report.inverse_closed


def test_enumerate_counterexample_small():
    rep, p = charge_counterexample()
    report = enumerate_leakage_free(rep, p, 3)
    for e in report.entries:
        assert e.leaks == e.word.uses(3)
    assert report.closure_ok and report.inverse_closed
    assert {w.letters for w in report.generating_set} == {(1,), (-1,), (2,), (-2,), (4,), (-4,), (5,), (-5,)}


def test_enumerate_cap():
    rep, p = charge_counterexample()
    with pytest.raises(InvalidParameter):
        enumerate_leakage_free(rep, p, 11)


def test_ising_even_block_matches_completed_b6():
    lay = eta_pair_layout(Angle.pi(1, 4))
    sol = solve_bridge_qubit_closed_form(lay)
    from braidlab.reps import parity_operator, projectively_equivalent

    w, v = np.linalg.eigh(parity_operator(6))
    block = restrict(build_ising_majorana(6), v[:, w > 0])
    found = [projectively_equivalent(lay.complete(m), block) for m in (sol.matrix, *sol.alternatives)]
    assert any(f and f.residual <= 1e-8 for f in found)
