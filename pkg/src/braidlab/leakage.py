"""Two-qudit embeddings, bridge-generator solving, and leakage measurement.

Two qudits made of n1 and n2 anyons give B_n with n = n1 + n2.  Exchanges
inside the left qudit act as rho1(tau_i) (x) I, exchanges inside the right one
as I (x) rho2(tau_i); the single remaining generator tau_{n1} (the bridge) is
what decides whether all braiding can stay inside the computational space.
"""

from __future__ import annotations

import itertools
import math
import os
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.linalg import expm

from .angles import Angle, as_angle
from .ball import DEFAULT_MAX_BALL, bfs_ball
from .errors import DimensionMismatch, InvalidParameter, NotAQubitLayout
from .reps import (
    Rep,
    _checked,
    build_eta,
    build_ising_majorana,
    build_burau_unreduced,
    build_standard_type,
    commutant_basis,
    composition_factor,
    eta_admissible,
    evaluate,
    majorana_operators,
    parity_operator,
    unitarize,
)
from .words import BraidWord, relations_involving

NUMERICAL_EVIDENCE = (
    "numerical evidence consistent with the classification result "
    "(no leakage-free non-abelian extension); not a proof"
)


def worker_count(requested: int | None = None) -> int:
    cap = os.environ.get("BRAIDLAB_THREADS")
    n = requested or (int(cap) if cap else 1)
    if cap:
        n = min(n, int(cap))
    return max(1, n)


# ---------------------------------------------------------------------------
# Layouts


@dataclass(frozen=True, eq=False)
class TwoQuditLayout:
    rep1: Rep
    rep2: Rep
    embedded: tuple[np.ndarray | None, ...]

    @property
    def n1(self) -> int:
        return self.rep1.strand_count

    @property
    def n2(self) -> int:
        return self.rep2.strand_count

    @property
    def d1(self) -> int:
        return self.rep1.dimension

    @property
    def d2(self) -> int:
        return self.rep2.dimension

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def d(self) -> int:
        return self.d1 * self.d2

    @property
    def bridge_index(self) -> int:
        return self.n1

    @property
    def label(self) -> str:
        return f"[{self.rep1.label}] x [{self.rep2.label}]"

    def generator(self, i: int) -> np.ndarray | None:
        return self.embedded[i - 1]

    def far_generators(self) -> list[np.ndarray]:
        b = self.bridge_index
        return [g for i, g in enumerate(self.embedded, 1) if g is not None and abs(i - b) >= 2]

    def neighbours(self) -> list[np.ndarray]:
        b = self.bridge_index
        return [g for i, g in enumerate(self.embedded, 1) if g is not None and abs(i - b) == 1]

    def generators_with(self, bridge: np.ndarray) -> list[np.ndarray]:
        return [bridge if g is None else g for g in self.embedded]

    def complete(self, bridge: np.ndarray, label: str | None = None) -> Rep:
        gens = self.generators_with(np.asarray(bridge, dtype=complex))
        unitary = self.rep1.unitary and self.rep2.unitary
        rep = Rep(self.n, gens, label or f"{self.label} + bridge", unitary, self.rep1.tol)
        return _checked(rep, claim_unitary=True)


def embed_pair(rep1: Rep, rep2: Rep) -> TwoQuditLayout:
    i1, i2 = np.eye(rep1.dimension), np.eye(rep2.dimension)
    left = [np.kron(g, i2) for g in rep1.generators]
    right = [np.kron(i1, g) for g in rep2.generators]
    return TwoQuditLayout(rep1, rep2, tuple(left) + (None,) + tuple(right))


def mirror(rep: Rep) -> Rep:
    """Compose with the flip automorphism tau_i -> tau_{n-i} of B_n."""
    gens = list(reversed(rep.generators))
    return Rep(rep.strand_count, gens, f"mirror({rep.label})", rep.unitary, rep.tol)


def bridge_residual(layout: TwoQuditLayout, bridge: np.ndarray) -> float:
    """Max-norm violation over every defining relation that involves the bridge."""
    gens = layout.generators_with(np.asarray(bridge, dtype=complex))
    worst = 0.0
    for rel in relations_involving(layout.n, layout.bridge_index):
        lhs = np.eye(layout.d, dtype=complex)
        rhs = np.eye(layout.d, dtype=complex)
        for x in rel.lhs.letters:
            lhs = lhs @ gens[x - 1]
        for x in rel.rhs.letters:
            rhs = rhs @ gens[x - 1]
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def is_abelian_gens(gens: Sequence[np.ndarray], tol: float = 1e-9) -> bool:
    return all(
        np.abs(a @ b - b @ a).max() <= tol for a, b in itertools.combinations(gens, 2)
    )


# ---------------------------------------------------------------------------
# Results


@dataclass(frozen=True)
class BridgeSolution:
    matrix: np.ndarray
    residual: float
    spectrum_arrangement: tuple[int, ...]
    abelian: bool
    method: str
    alternatives: tuple[np.ndarray, ...] = ()

    found = True

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NoSolution:
    residual: float
    candidates: tuple[np.ndarray, ...]
    details: str = ""

    found = False

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class BestEffort:
    residual: float
    matrix: np.ndarray | None
    spectrum_arrangement: tuple[int, ...]
    restarts: int
    arrangements: int
    method: str
    evidence: str = NUMERICAL_EVIDENCE

    found = False

    def __bool__(self) -> bool:
        return False


# ---------------------------------------------------------------------------
# Closed form for two qubits


@dataclass(frozen=True)
class QubitAnsatz:
    x: complex
    matrix: np.ndarray
    residual: float
    eq_left: float
    eq_right: float


def qubit_ansatz(layout: TwoQuditLayout) -> tuple[complex, list[QubitAnsatz]]:
    """Evaluate the diagonal bridge diag(x, x*, x*, x) for x in {a, a*}.

    ``eq_left``/``eq_right`` are the mismatches of the two scalar conditions
    p x + p' x* = |x|^2 and p x* + p' x = |x|^2 (p, p' the diagonal of the left
    qudit's tau_2) obtained from the off-diagonal entries of
    tau_2 tau_3 tau_2 = tau_3 tau_2 tau_3.
    """
    if layout.d1 != 2 or layout.d2 != 2 or layout.n1 != 3 or layout.n2 != 3:
        raise NotAQubitLayout("closed form needs two 3-anyon qubits (d1 = d2 = 2)")
    t1 = np.asarray(layout.rep1.generators[0])
    t5 = np.asarray(layout.rep2.generators[-1])
    for t in (t1, t5):
        if abs(t[0, 1]) > 1e-12 or abs(t[1, 0]) > 1e-12:
            raise NotAQubitLayout("outer qudit generators must be diagonal (eta form)")
    a = complex(t1[0, 0])
    if abs(a - t1[1, 1].conjugate()) > 1e-9 or abs(a - a.conjugate()) < 1e-12:
        raise NotAQubitLayout("eigenvalues must be a distinct conjugate pair {a, a*}")
    t2 = np.asarray(layout.rep1.generators[1])
    p, pp = complex(t2[0, 0]), complex(t2[1, 1])
    out = []
    for x in (a, a.conjugate()):
        xb = x.conjugate()
        m = np.diag([x, xb, xb, x])
        out.append(
            QubitAnsatz(
                x,
                m,
                bridge_residual(layout, m),
                abs(p * x + pp * xb - abs(x) ** 2),
                abs(p * xb + pp * x - abs(x) ** 2),
            )
        )
    return a, out


def solve_bridge_qubit_closed_form(layout: TwoQuditLayout, cos_tol: float = 1e-8):
    """Bridge for two eta-type qubits: exists iff cos(2 theta) = 0 (a a primitive 8th root)."""
    a, trials = qubit_ansatz(layout)
    theta = math.atan2(a.imag, a.real)
    ok = abs(math.cos(2 * theta)) <= cos_tol
    good = [t for t in trials if t.residual <= 1e-6]
    if ok and good:
        best = min(good, key=lambda t: t.residual)
        completed = layout.generators_with(best.matrix)
        arrangement = tuple(0 if abs(v - a) < 1e-9 else 1 for v in np.diag(best.matrix))
        return BridgeSolution(
            best.matrix,
            best.residual,
            arrangement,
            is_abelian_gens(completed),
            "closed-form",
            tuple(t.matrix for t in good if t is not best),
        )
    best = min(trials, key=lambda t: t.residual)
    return NoSolution(
        best.residual,
        tuple(t.matrix for t in trials),
        f"|cos 2theta| = {abs(math.cos(2 * theta)):.3e}",
    )


# ---------------------------------------------------------------------------
# Numerical bridge search


def _cluster(values: Iterable[complex], tol: float = 1e-6) -> list[tuple[complex, int]]:
    out: list[list] = []
    for v in values:
        for c in out:
            if abs(c[0] - v) <= tol:
                c[1] += 1
                break
        else:
            out.append([complex(v), 1])
    out.sort(key=lambda c: (round(math.atan2(c[0].imag, c[0].real), 9), -c[1]))
    return [(c[0], c[1]) for c in out]


@dataclass
class CommutantStructure:
    """Block structure of the *-algebra commuting with the far generators.

    ``spaces`` are eigenspaces of a generic Hermitian element of the algebra;
    spaces in the same block are exchanged by the algebra's unitary group.
    """

    spaces: list[np.ndarray]
    blocks: list[list[int]]
    lie: np.ndarray  # (k, d, d) real-orthonormal basis of the anti-Hermitian part


def commutant_structure(mats: Sequence[np.ndarray], d: int, seed: int = 0) -> CommutantStructure:
    rng = np.random.default_rng(seed)
    if mats:
        basis = commutant_basis(list(mats))
    else:
        basis = np.array([np.eye(d)[:, [j]] @ np.eye(d)[[k], :] for j in range(d) for k in range(d)],
                         dtype=complex)
    x = np.tensordot(rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis)), basis, 1)
    h = x + x.conj().T
    w, v = np.linalg.eigh(h)
    spaces, start = [], 0
    scale = max(1.0, float(np.abs(w).max()))
    for j in range(1, d + 1):
        if j == d or w[j] - w[j - 1] > 1e-7 * scale:
            spaces.append(v[:, start:j])
            start = j
    parent = list(range(len(spaces)))

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for s, t in itertools.combinations(range(len(spaces)), 2):
        link = max(float(np.abs(spaces[s].conj().T @ b @ spaces[t]).max()) for b in basis)
        if link > 1e-7:
            parent[root(s)] = root(t)
    groups: dict[int, list[int]] = {}
    for i in range(len(spaces)):
        groups.setdefault(root(i), []).append(i)
    blocks = sorted(groups.values())

    real_vecs = []
    for b in basis:
        for g in ((b - b.conj().T) / 2, 1j * (b + b.conj().T) / 2):
            real_vecs.append(np.concatenate([g.real.ravel(), g.imag.ravel()]))
    mat = np.array(real_vecs)
    _, s, vh = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(s > 1e-9 * max(1.0, s[0])))
    lie = np.array([(r[: d * d] + 1j * r[d * d :]).reshape(d, d) for r in vh[:rank]])
    return CommutantStructure(spaces, blocks, lie)


def spectrum_arrangements(structure: CommutantStructure, spectrum: list[tuple[complex, int]]):
    """Yield per-space eigenvalue indices realizing the spectrum, one per conjugacy class."""
    blocks = structure.blocks
    p = len(spectrum)
    dims = [structure.spaces[b[0]].shape[1] for b in blocks]

    def multisets(size):
        for combo in itertools.combinations_with_replacement(range(p), size):
            counts = [0] * p
            for c in combo:
                counts[c] += 1
            yield combo, counts

    remaining = [m for _, m in spectrum]

    def rec(j, acc):
        if j == len(blocks):
            if all(r == 0 for r in remaining):
                yield list(acc)
            return
        for combo, counts in multisets(len(blocks[j])):
            if all(dims[j] * counts[i] <= remaining[i] for i in range(p)):
                for i in range(p):
                    remaining[i] -= dims[j] * counts[i]
                acc.append(combo)
                yield from rec(j + 1, acc)
                acc.pop()
                for i in range(p):
                    remaining[i] += dims[j] * counts[i]

    for choice in rec(0, []):
        labels = [0] * len(structure.spaces)
        for block, combo in zip(blocks, choice):
            for space, value in zip(block, combo):
                labels[space] = value
        yield tuple(labels)


def _diag_from_labels(structure, spectrum, labels, d):
    m = np.zeros((d, d), dtype=complex)
    for space, lab in zip(structure.spaces, labels):
        m += spectrum[lab][0] * (space @ space.conj().T)
    return m


class _Objective:
    """Sum of squared Yang-Baxter residuals (plus optional commutators) of M = W D W^*."""

    def __init__(self, d_mat, lie, neighbours, commute_with=()):
        self.d_mat = d_mat
        self.lie = lie
        self.nb = list(neighbours)
        self.cw = list(commute_with)
        self.dir_comm = np.einsum("kij,jl->kil", lie, d_mat) - np.einsum("ij,kjl->kil", d_mat, lie)

    def value_grad(self, w, need_grad=True):
        wh = w.conj().T
        m = w @ self.d_mat @ wh
        f = 0.0
        resids = []
        for nmat in self.nb:
            r = m @ nmat @ m - nmat @ m @ nmat
            resids.append(("yb", nmat, r))
            f += float(np.vdot(r, r).real)
        for fmat in self.cw:
            r = m @ fmat - fmat @ m
            resids.append(("c", fmat, r))
            f += float(np.vdot(r, r).real)
        if not need_grad:
            return f, None, m
        dm = np.einsum("ij,kjl,lm->kim", w, self.dir_comm, wh)
        g = np.zeros(len(self.lie))
        for kind, mat, r in resids:
            if kind == "yb":
                dr = dm @ (mat @ m) + (m @ mat) @ dm - mat @ dm @ mat
            else:
                dr = dm @ mat - mat @ dm
            g += 2 * np.einsum("ij,kij->k", r.conj(), dr).real
        return f, g, m


def _descend(obj: _Objective, w, iters=600, ftol=1e-26):
    f, g, m = obj.value_grad(w)
    step = 0.1
    for _ in range(iters):
        gn = float(g @ g)
        if f < ftol or gn < 1e-28:
            break
        direction = np.tensordot(g, obj.lie, 1)
        while True:
            w_new = w @ expm(-step * direction)
            f_new, _, _ = obj.value_grad(w_new, need_grad=False)
            if f_new <= f - 1e-4 * step * gn or step < 1e-14:
                break
            step *= 0.5
        if f_new > f:
            break
        w = w_new
        f, g, m = obj.value_grad(w)
        step *= 2.0
    return f, w, m


def _random_unitary_in(lie, rng, spread=math.pi):
    if len(lie) == 0:
        return np.eye(lie.shape[1] if lie.ndim == 3 else 1, dtype=complex)
    return expm(np.tensordot(rng.normal(scale=spread, size=len(lie)), lie, 1))


def layout_spectra(layout: TwoQuditLayout) -> list[list[tuple[complex, int]]]:
    sources = []
    if layout.n1 >= 2:
        sources.append(np.linalg.eigvals(layout.generator(1)))
    if layout.n2 >= 2:
        sources.append(np.linalg.eigvals(layout.generator(layout.n - 1)))
    spectra: list[list[tuple[complex, int]]] = []
    for ev in sources:
        s = _cluster(ev)
        if not any(len(s) == len(t) and all(abs(a[0] - b[0]) < 1e-6 and a[1] == b[1]
                                            for a, b in zip(s, t)) for t in spectra):
            spectra.append(s)
    return spectra


def solve_bridge_numeric(
    layout: TwoQuditLayout,
    attempts: int = 50,
    seed: int = 0,
    tol: float = 1e-9,
    max_arrangements: int = 5000,
    workers: int | None = None,
):
    """Search for a unitary bridge with the common generator spectrum.

    The bridge is written M = W D W^* with D a fixed eigenvalue arrangement inside
    the commutant of the far generators and W in that commutant's unitary group,
    so far commutation and conjugacy hold by construction; only the Yang-Baxter
    residual with the two neighbours is minimized.  Arrangements with no
    continuous freedom are evaluated directly.  If no arrangement fits the
    commutant, a relaxed search over all of U(d) also penalizes the far
    commutators.
    """
    for r in (layout.rep1, layout.rep2):
        if not r.unitary:
            raise InvalidParameter(f"{r.label} is not unitary; unitarize it first")
    d = layout.d
    far = layout.far_generators()
    nbrs = layout.neighbours()
    structure = commutant_structure(far, d, seed)
    spectra = layout_spectra(layout)
    ss = np.random.SeedSequence(seed)
    jobs = []
    for spec_idx, spectrum in enumerate(spectra):
        for labels in itertools.islice(spectrum_arrangements(structure, spectrum), max_arrangements):
            jobs.append((spec_idx, labels))
    child_seeds = ss.spawn(max(1, len(jobs)))

    def run(job_and_seed):
        (spec_idx, labels), child = job_and_seed
        spectrum = spectra[spec_idx]
        dmat = _diag_from_labels(structure, spectrum, labels, d)
        moving = [g for g in structure.lie if np.abs(g @ dmat - dmat @ g).max() > 1e-10]
        lie = np.array(moving) if moving else np.zeros((0, d, d), dtype=complex)
        if len(lie) == 0:
            return bridge_residual(layout, dmat), dmat, labels, 1
        rng = np.random.default_rng(child)
        obj = _Objective(dmat, lie, nbrs)
        best = (math.inf, None)
        for _ in range(attempts):
            _, _, m = _descend(obj, _random_unitary_in(lie, rng))
            res = bridge_residual(layout, m)
            if res < best[0]:
                best = (res, m)
            if res <= tol:
                break
        return best[0], best[1], labels, attempts

    results = []
    if jobs:
        nw = worker_count(workers)
        if nw > 1:
            with ThreadPoolExecutor(nw) as ex:
                results = list(ex.map(run, zip(jobs, child_seeds)))
        else:
            results = [run(j) for j in zip(jobs, child_seeds)]
        method = "commutant"
    else:
        results = _relaxed_search(layout, spectra, attempts, ss, tol)
        method = "relaxed"

    solutions = [r for r in results if r[0] <= tol]
    if solutions:
        best = min(solutions, key=lambda r: r[0])
        completed = layout.generators_with(best[1])
        return BridgeSolution(
            best[1],
            best[0],
            best[2],
            is_abelian_gens(completed),
            f"numeric-{method}",
            tuple(r[1] for r in solutions if r is not best),
        )
    best = min(results, key=lambda r: r[0])
    return BestEffort(best[0], best[1], best[2], attempts, len(jobs), f"numeric-{method}")


def _relaxed_search(layout, spectra, attempts, ss, tol):
    d = layout.d
    full = commutant_structure([], d)
    out = []
    rng = np.random.default_rng(ss.spawn(1)[0])
    for spectrum in spectra:
        values = [v for v, m in spectrum for _ in range(m)]
        dmat = np.diag(values)
        obj = _Objective(dmat, full.lie, layout.neighbours(), layout.far_generators())
        best = (math.inf, None)
        for _ in range(attempts):
            _, _, m = _descend(obj, _random_unitary_in(full.lie, rng), iters=300)
            res = bridge_residual(layout, m)
            if res < best[0]:
                best = (res, m)
        out.append((best[0], best[1], tuple(range(len(values))), attempts))
    return out


# ---------------------------------------------------------------------------
# Theta scans for two eta qubits


def eta_pair_layout(theta) -> TwoQuditLayout:
    """Two 3-anyon eta qubits; the right one mirrored so tau_{n-1} is diagonal."""
    r = build_eta(theta, 3)
    return embed_pair(r, mirror(r))


def theta_grid(points: int) -> list[Angle]:
    """``points`` equally spaced exact angles from -pi to pi inclusive."""
    if points < 2:
        raise InvalidParameter("need at least two grid points")
    return [Angle.pi(-1 + Fraction(2 * k, points - 1)) for k in range(points)]


def periodic_theta_grid(points: int) -> list[Angle]:
    """``points`` equally spaced exact angles covering (-pi, pi]."""
    if points < 1:
        raise InvalidParameter("need at least one grid point")
    return [Angle.pi(-1 + Fraction(2 * k, points)) for k in range(1, points + 1)]


def admissible_theta_grid(min_points: int) -> list[Angle]:
    """Admissible points of the coarsest periodic grid that contains the eighth
    roots and has at least ``min_points`` admissible angles.

    Such a grid is symmetric under theta -> -theta with no admissible fixed
    point, so the count it returns is always even.
    """
    size = 8
    while True:
        pts = [t for t in periodic_theta_grid(size) if eta_admissible(t)]
        if len(pts) >= min_points:
            return pts
        size += 8


@dataclass(frozen=True)
class ScanRow:
    theta: Angle
    residual: float
    passed: bool


def theta_scan(
    thetas: Iterable,
    layout_builder: Callable = eta_pair_layout,
    tol: float = 1e-9,
    workers: int | None = None,
) -> list[ScanRow]:
    """Closed-form ansatz residual per admissible theta (inadmissible points are skipped)."""
    pts = [as_angle(t) for t in thetas]
    pts = [t for t in pts if eta_admissible(t)]

    def one(t):
        _, trials = qubit_ansatz(layout_builder(t))
        res = min(tr.residual for tr in trials)
        return ScanRow(t, res, res <= tol)

    nw = worker_count(workers)
    if nw > 1:
        with ThreadPoolExecutor(nw) as ex:
            return list(ex.map(one, pts))
    return [one(t) for t in pts]


# ---------------------------------------------------------------------------
# Leakage


@dataclass(frozen=True, eq=False)
class Subspace:
    projector: np.ndarray
    label: str = ""

    def __post_init__(self):
        p = np.array(self.projector, dtype=complex)
        if np.abs(p @ p - p).max() > 1e-10 or np.abs(p - p.conj().T).max() > 1e-10:
            raise InvalidParameter("projector must be Hermitian and idempotent")
        p.setflags(write=False)
        object.__setattr__(self, "projector", p)

    @property
    def dimension(self) -> int:
        return self.projector.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.projector).real))

    @classmethod
    def from_basis(cls, basis: np.ndarray, label: str = "") -> Subspace:
        q, _ = np.linalg.qr(np.asarray(basis, dtype=complex))
        return cls(q @ q.conj().T, label)

    @classmethod
    def coordinates(cls, d: int, indices: Iterable[int], label: str = "") -> Subspace:
        p = np.zeros((d, d), dtype=complex)
        for i in indices:
            p[i, i] = 1
        return cls(p, label or f"coords{sorted(indices)}")


def parity_subspace(n: int, even: bool = True) -> Subspace:
    par = parity_operator(n)
    sign = 1 if even else -1
    return Subspace((np.eye(par.shape[0]) + sign * par) / 2, "parity-even" if even else "parity-odd")


def leakage_norm(u: np.ndarray, p: np.ndarray) -> float:
    """Largest singular value of (I - P) U P."""
    off = (np.eye(p.shape[0]) - p) @ u @ p
    return float(np.linalg.norm(off, 2))


def leakage_of(rep: Rep, subspace: Subspace, w: BraidWord) -> float:
    if subspace.dimension != rep.dimension:
        raise DimensionMismatch("projector and representation dimensions differ")
    return leakage_norm(evaluate(rep, w), subspace.projector)


def leakage_both(rep: Rep, subspace: Subspace, w: BraidWord) -> tuple[float, float]:
    """Leakage of the word and of its inverse."""
    if subspace.dimension != rep.dimension:
        raise DimensionMismatch("projector and representation dimensions differ")
    u = evaluate(rep, w)
    return leakage_norm(u, subspace.projector), leakage_norm(np.linalg.inv(u), subspace.projector)


@dataclass(frozen=True)
class LeakageEntry:
    word: BraidWord
    leakage: float
    inverse_leakage: float
    leaks: bool


@dataclass
class LeakageReport:
    rep_label: str
    subspace_label: str
    max_len: int
    leak_tol: float
    entries: list[LeakageEntry]
    generating_set: list[BraidWord]
    closure_pairs_checked: int
    closure_ok: bool
    inverse_closed: bool

    @property
    def total(self) -> int:
        return len(self.entries)

    @property
    def leakage_free(self) -> list[LeakageEntry]:
        return [e for e in self.entries if not e.leaks]

    @property
    def leaking(self) -> list[LeakageEntry]:
        return [e for e in self.entries if e.leaks]

    def summary(self) -> dict:
        return {
            "elements": self.total,
            "leakage_free": len(self.leakage_free),
            "leaking": len(self.leaking),
            "generating_set_size": len(self.generating_set),
            "closure_pairs_checked": self.closure_pairs_checked,
            "closure_ok": self.closure_ok,
            "inverse_closed": self.inverse_closed,
        }


MAX_ENUM_LEN = 10


def enumerate_leakage_free(
    rep: Rep,
    subspace: Subspace,
    max_len: int,
    leak_tol: float = 1e-10,
    eps: float = 1e-6,
    max_ball: int = DEFAULT_MAX_BALL,
    max_pairs: int = 400_000,
    seed: int = 0,
) -> LeakageReport:
    """Classify every distinct element of the radius-max_len ball as leakage-free or leaking.

    Elements are deduplicated up to global phase.  The leakage-free set is
    checked for closure under products (all pairs, or a seeded sample of
    ``max_pairs`` pairs) and under inverses.
    """
    if max_len > MAX_ENUM_LEN:
        raise InvalidParameter(f"max_len is capped at {MAX_ENUM_LEN}")
    if subspace.dimension != rep.dimension:
        raise DimensionMismatch("projector and representation dimensions differ")
    ball = bfs_ball(rep, max_len, eps, True, max_ball)
    p = subspace.projector
    comp = np.eye(p.shape[0]) - p
    mats = np.array(ball.matrices)
    fwd = np.linalg.norm(comp @ mats @ p, ord=2, axis=(1, 2))
    inv = np.linalg.norm(comp @ np.conj(np.transpose(mats, (0, 2, 1))) @ p, ord=2, axis=(1, 2)) \
        if rep.unitary else np.array([leakage_norm(np.linalg.inv(m), p) for m in mats])
    entries = [
        LeakageEntry(w, float(a), float(b), bool(a > leak_tol))
        for w, a, b in zip(ball.words, fwd, inv)
    ]
    free_idx = [i for i, e in enumerate(entries) if not e.leaks]
    inverse_closed = all(entries[i].inverse_leakage <= leak_tol for i in free_idx)

    # closure under products
    rng = np.random.default_rng(seed)
    k = len(free_idx)
    if k * k <= max_pairs:
        pairs = np.array([(i, j) for i in free_idx for j in free_idx])
    else:
        pairs = np.array(free_idx)[rng.integers(0, k, size=(max_pairs, 2))]
    closure_ok = True
    for chunk in np.array_split(pairs, max(1, len(pairs) // 20000)) if len(pairs) else []:
        prod = mats[chunk[:, 0]] @ mats[chunk[:, 1]]
        leak = np.linalg.norm(comp @ prod @ p, ord=2, axis=(1, 2))
        if np.any(leak > max(leak_tol, 1e-9)):
            closure_ok = False
            break

    gens = _generating_words(ball, entries, rep)
    return LeakageReport(
        rep.label, subspace.label, max_len, leak_tol, entries, gens, len(pairs), closure_ok, inverse_closed
    )


def _generating_words(ball, entries, rep) -> list[BraidWord]:
    """Leakage-free elements whose shortest word is not a product of two shorter
    leakage-free elements of the ball."""
    table = ball.table
    free = {i for i, e in enumerate(entries) if not e.leaks}
    out = []
    for i in sorted(free):
        w = ball.words[i]
        if not w.letters:
            continue
        split = False
        for cut in range(1, len(w)):
            left = BraidWord(w.letters[:cut], w.strand_count)
            right = BraidWord(w.letters[cut:], w.strand_count)
            li = table.find(evaluate(rep, left))
            ri = table.find(evaluate(rep, right))
            if li in free and ri in free:
                split = True
                break
        if not split:
            out.append(w)
    return out


# ---------------------------------------------------------------------------
# Example layouts and representations used by scans and the CLI


def charge_counterexample() -> tuple[Rep, Subspace]:
    """Ising B_6 on eight states with the computational space fixed by iG1G2G3.

    The operator i*Gamma_1 Gamma_2 Gamma_3 commutes with every exchange inside
    the two 3-anyon groups but anticommutes with Gamma_4 Gamma_3, so the bridge
    exchange tau_3 moves amplitude out of its +1 eigenspace.
    """
    rep = build_ising_majorana(6)
    g = majorana_operators(6)
    c = 1j * g[0] @ g[1] @ g[2]
    return rep, Subspace((np.eye(8) + c) / 2, "left-charge")


def _qutrit_reps(z_std=Angle.pi(2, 5), z_burau=Angle.pi(1, 3), z_hat=Angle.pi(2, 5)) -> dict[str, Rep]:
    return {
        "standard3": build_standard_type(3, z_std),
        "standard3b": build_standard_type(3, Angle.pi(1, 2)),
        "burau4": unitarize(composition_factor(build_burau_unreduced(z_burau, 4)))[0],
        "burau5hat": unitarize(composition_factor(composition_factor(build_burau_unreduced(z_hat, 5))))[0],
    }


def no_go_families() -> dict[str, Callable[[], TwoQuditLayout]]:
    """Qutrit x qutrit and qubit x qutrit layouts built from the catalog."""
    q = _qutrit_reps
    eta3 = lambda: build_eta(Angle.pi(3, 10), 3)  # noqa: E731
    eta4 = lambda: build_eta(Angle.pi(1, 4), 4)  # noqa: E731
    return {
        "qutrit:standard3(2/5pi)+standard3(2/5pi)": lambda: embed_pair(q()["standard3"], q()["standard3"]),
        "qutrit:standard3(1/2pi)+standard3(1/2pi)": lambda: embed_pair(q()["standard3b"], q()["standard3b"]),
        "qutrit:standard3+burau4": lambda: embed_pair(q()["standard3"], q()["burau4"]),
        "qutrit:burau4+burau4": lambda: embed_pair(q()["burau4"], q()["burau4"]),
        "qutrit:burau4+burau5hat": lambda: embed_pair(q()["burau4"], q()["burau5hat"]),
        "qutrit:burau5hat+burau5hat": lambda: embed_pair(q()["burau5hat"], q()["burau5hat"]),
        "qubit-qutrit:eta3(3/10pi)+standard3": lambda: embed_pair(eta3(), q()["standard3"]),
        "qubit-qutrit:eta3(3/10pi)+burau4": lambda: embed_pair(eta3(), q()["burau4"]),
        "qubit-qutrit:eta4(1/4pi)+burau4": lambda: embed_pair(eta4(), q()["burau4"]),
    }
