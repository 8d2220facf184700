"""Explicit matrix representations of braid groups.

Every builder returns a :class:`Rep` that has already been checked against the
defining relations of B_n; a builder never hands out matrices that fail them.
Matrices are complex numpy arrays and are marked read-only.
"""

from __future__ import annotations

import enum
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .angles import Angle, as_angle
from .errors import (
    DegenerateQ,
    DimensionMismatch,
    EighthRootRequired,
    InadmissibleTheta,
    InvalidParameter,
    NoProperInvariantSubspace,
    NotUnitarizable,
    OddStrandCount,
    RelationCheckFailed,
    StrandMismatch,
)
from .words import BraidWord, RelationInstance, relation_instances


@dataclass(frozen=True)
class Tolerances:
    relation: float = 1e-9
    unitarity: float = 1e-9
    rank: float = 1e-8


DEFAULT_TOL = Tolerances()


def _frozen(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Rep:
    """A matrix representation of B_n: one d x d matrix per generator tau_1..tau_{n-1}."""

    strand_count: int
    generators: tuple[np.ndarray, ...]
    label: str = ""
    unitary: bool = False
    tol: Tolerances = field(default=DEFAULT_TOL)

    def __post_init__(self):
        gens = tuple(_frozen(g) for g in self.generators)
        if self.strand_count < 2:
            raise InvalidParameter("strand_count must be at least 2")
        if len(gens) != self.strand_count - 1:
            raise InvalidParameter(
                f"B_{self.strand_count} needs {self.strand_count - 1} generators, got {len(gens)}"
            )
        d = gens[0].shape[0]
        for g in gens:
            if g.shape != (d, d):
                raise DimensionMismatch("generator matrices must all be d x d")
        object.__setattr__(self, "generators", gens)

    @property
    def dimension(self) -> int:
        return self.generators[0].shape[0]

    @property
    def n(self) -> int:
        return self.strand_count

    @cached_property
    def inverses(self) -> tuple[np.ndarray, ...]:
        if self.unitary:
            return tuple(_frozen(g.conj().T) for g in self.generators)
        return tuple(_frozen(np.linalg.inv(g)) for g in self.generators)

    def letter(self, x: int) -> np.ndarray:
        return self.generators[x - 1] if x > 0 else self.inverses[-x - 1]

    def evaluate(self, w: BraidWord) -> np.ndarray:
        return evaluate(self, w)

    def unitarity_defect(self) -> float:
        eye = np.eye(self.dimension)
        return max(float(np.abs(g.conj().T @ g - eye).max()) for g in self.generators)

    def with_generators(self, gens, label=None, unitary=None) -> Rep:
        return Rep(
            self.strand_count,
            tuple(gens),
            self.label if label is None else label,
            self.unitary if unitary is None else unitary,
            self.tol,
        )

    def __repr__(self) -> str:
        return f"Rep({self.label!r}, n={self.strand_count}, d={self.dimension})"


@dataclass(frozen=True)
class RelationReport:
    entries: tuple[tuple[RelationInstance, float], ...]
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    @property
    def worst(self) -> RelationInstance | None:
        if not self.entries:
            return None
        return max(self.entries, key=lambda e: e[1])[0]


def evaluate(rep: Rep, w: BraidWord) -> np.ndarray:
    if w.strand_count != rep.strand_count:
        raise StrandMismatch(
            f"word lives in B_{w.strand_count} but representation is of B_{rep.strand_count}"
        )
    out = np.eye(rep.dimension, dtype=complex)
    for x in w.letters:
        out = out @ rep.letter(x)
    return out


def relation_residual(gens: Sequence[np.ndarray], rel: RelationInstance) -> float:
    def prod(word):
        out = np.eye(gens[0].shape[0], dtype=complex)
        for x in word.letters:
            out = out @ gens[x - 1]
        return out

    return float(np.abs(prod(rel.lhs) - prod(rel.rhs)).max())


def verify_relations(rep: Rep, tol: float | None = None) -> RelationReport:
    tol = rep.tol.relation if tol is None else tol
    entries = tuple(
        (rel, relation_residual(rep.generators, rel)) for rel in relation_instances(rep.strand_count)
    )
    worst = max((r for _, r in entries), default=0.0)
    return RelationReport(entries, worst, tol)


def _checked(rep: Rep, claim_unitary: bool = False) -> Rep:
    report = verify_relations(rep)
    if not report.passed:
        raise RelationCheckFailed(rep.label, report.max_residual)
    if claim_unitary:
        unitary = rep.unitarity_defect() <= rep.tol.unitarity
        if unitary != rep.unitary:
            rep = rep.with_generators(rep.generators, unitary=unitary)
    return rep


def _unit(z) -> complex:
    if isinstance(z, (Angle, str)):
        return as_angle(z).unit()
    return complex(z)


def _block_rep(n: int, block: np.ndarray) -> list[np.ndarray]:
    gens = []
    for i in range(n - 1):
        g = np.eye(n, dtype=complex)
        g[i : i + 2, i : i + 2] = block
        gens.append(g)
    return gens


# ---------------------------------------------------------------------------
# Families


def build_character(phi, n: int) -> Rep:
    """One-dimensional representation sending every generator to exp(i*phi)."""
    phi = as_angle(phi)
    u = phi.unit()
    return _checked(Rep(n, [[[u]]] * (n - 1), f"character({phi})", True))


class Tau3Choice(enum.Enum):
    SAME_AS_TAU1 = "same"
    CONJUGATE_OF_TAU1 = "conj"


@dataclass(frozen=True)
class EtaAdmissibility:
    admissible: bool
    b_squared: float

    def __bool__(self) -> bool:
        return self.admissible


def _is_multiple_of_pi(theta: Angle) -> bool:
    if theta.pi_fraction is not None:
        return theta.pi_fraction.denominator == 1
    return abs(math.sin(theta.radians)) <= 1e-12


def eta_admissible(theta) -> EtaAdmissibility:
    """Whether b^2 = 1 - 1/(2 - a^2 - conj(a)^2) is non-negative for a = exp(i*theta)."""
    theta = as_angle(theta)
    if _is_multiple_of_pi(theta):
        return EtaAdmissibility(False, -math.inf)
    c = math.cos(2 * theta.radians)
    b2 = 1.0 - 1.0 / (2.0 - 2.0 * c)
    if theta.pi_fraction is not None:
        # cos(2 theta) <= 1/2  <=>  2*theta mod 2pi lies in [pi/3, 5pi/3]
        f = (2 * theta.pi_fraction) % 2
        ok = Fraction(1, 3) <= f <= Fraction(5, 3)
    else:
        ok = b2 >= -1e-12
    return EtaAdmissibility(ok, b2)


def is_primitive_eighth_root_angle(theta, tol: float = 1e-8) -> bool:
    theta = as_angle(theta)
    if theta.pi_fraction is not None:
        return (2 * theta.pi_fraction) % 1 == Fraction(1, 2)
    return abs(math.cos(2 * theta.radians)) <= tol


def eta_matrices(theta) -> tuple[np.ndarray, np.ndarray]:
    theta = as_angle(theta)
    a = theta.unit()
    ab = a.conjugate()
    b = math.sqrt(max(eta_admissible(theta).b_squared, 0.0))
    t1 = np.diag([a, ab])
    t2 = np.array([[1 / (a - a**3), b], [-b, 1 / (ab - ab**3)]])
    return t1, t2


def build_eta(theta, n: int = 3, tau3: Tau3Choice = Tau3Choice.SAME_AS_TAU1) -> Rep:
    """The general two-dimensional SU(2) representation of B_3 (and its B_4 extensions)."""
    theta = as_angle(theta)
    tau3 = Tau3Choice(tau3)
    if n not in (3, 4):
        raise InvalidParameter("eta is defined for n = 3 or 4 only")
    adm = eta_admissible(theta)
    if not adm:
        raise InadmissibleTheta(f"theta={theta}: b^2 = {adm.b_squared:.6g} < 0 or theta = 0 mod pi")
    t1, t2 = eta_matrices(theta)
    gens = [t1, t2]
    suffix = ""
    if n == 4:
        if tau3 is Tau3Choice.CONJUGATE_OF_TAU1:
            if not is_primitive_eighth_root_angle(theta):
                raise EighthRootRequired(
                    f"theta={theta}: conjugate tau_3 needs a primitive 8th root of unity"
                )
            gens.append(t1.conj())
            suffix = ",conj"
        else:
            gens.append(t1)
    return _checked(Rep(n, gens, f"eta({theta},n={n}{suffix})", True), claim_unitary=True)


def quantum_integer(k: int, r: int) -> float:
    """[k]_q for q = exp(+-2 pi i / r), computed as sin(k pi/r)/sin(pi/r)."""
    if k % r == 0:
        return 0.0
    return math.sin(k * math.pi / r) / math.sin(math.pi / r)


def jones_q(r: int, sign: int = 1) -> complex:
    return Angle.pi(2 * (1 if sign >= 0 else -1), r).unit()


def build_jones_b3(r: int, sign: int = 1) -> Rep:
    """Two-dimensional Jones representation rho_r of B_3 at q = exp(+-2 pi i/r).

    tau_1 -> diag(q, -1); tau_2 has diagonal -1/(q+1), q^2/(q+1) and both
    off-diagonal entries q*sqrt([3]_q)/(q+1).  With the factor q on the
    off-diagonal the matrices come out unitary; the flag is set by checking.
    """
    if r == 2:
        raise DegenerateQ("q = -1: 1/(q+1) is singular")
    if r < 3:
        raise InvalidParameter("r must be at least 3")
    q = jones_q(r, sign)
    if abs(q + 1) < 1e-12:
        raise DegenerateQ("q = -1")
    three = quantum_integer(3, r)
    if three < -1e-12:
        raise InvalidParameter(f"[3]_q = {three} < 0")
    off = q * math.sqrt(max(three, 0.0)) / (q + 1)
    t1 = np.diag([q, -1.0])
    t2 = np.array([[-1 / (q + 1), off], [off, q * q / (q + 1)]])
    sgn = "+" if sign >= 0 else "-"
    return _checked(Rep(3, [t1, t2], f"jones(r={r},{sgn})", False), claim_unitary=True)


def build_burau_unreduced(z, n: int) -> Rep:
    """Unreduced Burau: tau_i acts by [[1-z, z], [1, 0]] on coordinates i, i+1."""
    zc = _unit(z)
    block = np.array([[1 - zc, zc], [1, 0]])
    label = f"burau(n={n},z={as_angle(z) if isinstance(z, (Angle, str)) else zc})"
    return _checked(Rep(n, _block_rep(n, block), label, False), claim_unitary=True)


def build_standard_type(n: int, z) -> Rep:
    """Standard-type representation: tau_i acts by [[0, z], [1, 0]] on coordinates i, i+1."""
    zc = _unit(z)
    if abs(zc - 1) <= 1e-12:
        raise InvalidParameter("standard type requires z != 1")
    if abs(abs(zc) - 1) > 1e-12:
        raise InvalidParameter("standard type requires |z| = 1")
    block = np.array([[0, zc], [1, 0]])
    label = f"standard(n={n},z={as_angle(z) if isinstance(z, (Angle, str)) else zc})"
    return _checked(Rep(n, _block_rep(n, block), label, True), claim_unitary=True)


_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PAULI_Z = np.diag([1.0, -1.0]).astype(complex)


def _kron_all(mats) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def majorana_operators(n: int) -> list[np.ndarray]:
    """Jordan-Wigner Clifford generators Gamma_1..Gamma_n on (C^2)^(n/2)."""
    m = n // 2
    eye = np.eye(2, dtype=complex)
    out = []
    for k in range(m):
        pre, post = [_PAULI_Z] * k, [eye] * (m - k - 1)
        out.append(_kron_all(pre + [_PAULI_X] + post))
        out.append(_kron_all(pre + [_PAULI_Y] + post))
    return out


def parity_operator(n: int) -> np.ndarray:
    return _kron_all([_PAULI_Z] * (n // 2))


def build_ising_majorana(n: int) -> Rep:
    """Ising braiding from Majorana modes: tau_i = exp(-(pi/4) Gamma_{i+1} Gamma_i)."""
    if n % 2:
        raise OddStrandCount(f"n={n} must be even")
    if not 2 <= n <= 12:
        raise InvalidParameter("Majorana construction supports 2 <= n <= 12")
    gam = majorana_operators(n)
    c = math.cos(math.pi / 4)
    eye = np.eye(2 ** (n // 2))
    # (Gamma_{i+1} Gamma_i)^2 = -1, so the exponential is exactly cos - sin * G
    gens = [c * eye - c * (gam[i + 1] @ gam[i]) for i in range(n - 1)]
    return _checked(Rep(n, gens, f"ising(n={n})", True), claim_unitary=True)


def direct_sum(*reps: Rep) -> Rep:
    n = reps[0].strand_count
    if any(r.strand_count != n for r in reps):
        raise StrandMismatch("direct sum needs a common strand count")
    d = sum(r.dimension for r in reps)
    gens = []
    for i in range(n - 1):
        g = np.zeros((d, d), dtype=complex)
        k = 0
        for r in reps:
            e = r.dimension
            g[k : k + e, k : k + e] = r.generators[i]
            k += e
        gens.append(g)
    label = " + ".join(r.label for r in reps)
    return _checked(Rep(n, gens, label, all(r.unitary for r in reps)))


def restrict(rep: Rep, basis: np.ndarray, label: str | None = None) -> Rep:
    """Restriction to the invariant subspace spanned by the orthonormal columns of basis."""
    gens = [basis.conj().T @ g @ basis for g in rep.generators]
    return _checked(
        Rep(rep.strand_count, gens, label or f"{rep.label}|sub{basis.shape[1]}", rep.unitary),
        claim_unitary=True,
    )


# ---------------------------------------------------------------------------
# Invariant subspaces


def _orth_complement(q: np.ndarray) -> np.ndarray:
    d, k = q.shape
    u, _, _ = np.linalg.svd(q, full_matrices=True)
    return u[:, k:]


def spin(gens: Sequence[np.ndarray], vectors: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the smallest subspace containing ``vectors`` and stable under gens."""
    d = gens[0].shape[0]
    basis: list[np.ndarray] = []

    def add(w):
        for _ in range(2):
            for b in basis:
                w = w - b * (b.conj() @ w)
        nrm = np.linalg.norm(w)
        if nrm > tol:
            basis.append(w / nrm)
            return True
        return False

    for v in np.atleast_2d(vectors.T):
        add(np.array(v, dtype=complex))
    i = 0
    while i < len(basis) and len(basis) < d:
        for g in gens:
            add(g @ basis[i])
        i += 1
    if not basis:
        return np.zeros((d, 0), dtype=complex)
    return np.column_stack(basis)


def _nullspace(m: np.ndarray, tol: float) -> np.ndarray:
    _, s, vh = np.linalg.svd(m)
    scale = max(1.0, s[0]) if len(s) else 1.0
    rank = int(np.sum(s > tol * scale))
    return vh[rank:].conj().T


def _algebra_samples(gens, rng, count=4):
    d = gens[0].shape[0]
    for _ in range(count):
        x = np.zeros((d, d), dtype=complex)
        for g in gens:
            x += (rng.normal() + 1j * rng.normal()) * g
        for g in gens:
            for h in gens:
                x += 0.5 * (rng.normal() + 1j * rng.normal()) * (g @ h)
        yield x


def _clustered_eigenvalues(x: np.ndarray, radius: float = 1e-5) -> list[complex]:
    """Eigenvalues with near-coincident ones merged; the mean of a cluster is accurate
    even when the individual values of a defective eigenvalue are not."""
    out: list[list[complex]] = []
    for lam in np.linalg.eigvals(x):
        for c in out:
            if abs(np.mean(c) - lam) < radius * max(1.0, abs(lam)):
                c.append(lam)
                break
        else:
            out.append([lam])
    return [complex(np.mean(c)) for c in out]


def _polish(gens, q: np.ndarray, steps: int = 3) -> np.ndarray:
    """Snap an approximately invariant subspace onto the dominant span of its images."""
    k = q.shape[1]
    if k == 0:
        return q
    for _ in range(steps):
        u, _, _ = np.linalg.svd(np.hstack([q] + [g @ q for g in gens]), full_matrices=False)
        q = u[:, :k]
    return q


def _is_invariant(gens, q, tol) -> bool:
    if q.shape[1] == 0:
        return True
    proj = q @ q.conj().T
    return all(np.abs(g @ q - proj @ (g @ q)).max() <= tol for g in gens)


def invariant_subspaces(rep: Rep, seed: int = 0) -> list[np.ndarray]:
    """Proper common invariant subspaces found by spinning eigenvectors of random algebra elements.

    Runs on both the representation and its transpose; a submodule of the
    transpose gives an invariant subspace of the original through its
    annihilator.  Each result is an orthonormal basis (columns).
    """
    gens = [np.asarray(g) for g in rep.generators]
    d = rep.dimension
    tol = rep.tol.rank
    scale = max(1.0, max(np.abs(g).max() for g in gens))
    rng = np.random.default_rng(seed)
    found: dict[tuple, np.ndarray] = {}

    def record(q):
        k = q.shape[1]
        if 0 < k < d and _is_invariant(gens, q, 1e3 * tol * scale):
            proj = q @ q.conj().T
            key = (k, tuple(np.round(np.abs(proj).ravel(), 5)))
            found.setdefault(key, q)

    for transposed in (False, True):
        hs = [g.T for g in gens] if transposed else gens
        for x in _algebra_samples(hs, rng):
            for lam in _clustered_eigenvalues(x):
                ns = _nullspace(x - lam * np.eye(d), 1e-7)
                if ns.shape[1] == 0:
                    continue
                cands = [ns[:, j] for j in range(ns.shape[1])]
                if ns.shape[1] > 1:
                    cands.append(ns @ (rng.normal(size=ns.shape[1]) + 0j))
                for v in cands:
                    w = spin(hs, v[:, None], tol * scale)
                    if w.shape[1] >= d:
                        continue
                    if transposed:
                        # annihilator {x : w^T x = 0}
                        w = _nullspace(w.T, tol)
                    record(_polish(gens, w))
    return list(found.values())


@dataclass(frozen=True)
class Factor:
    rep: Rep
    kind: str  # "sub" or "quotient"
    basis: np.ndarray


def composition_factor(rep: Rep, seed: int = 0) -> Rep:
    """Largest proper factor (sub or quotient) cut out by a common invariant subspace."""
    return composition_factor_detail(rep, seed).rep


def composition_factor_detail(rep: Rep, seed: int = 0) -> Factor:
    subs = invariant_subspaces(rep, seed)
    if not subs:
        raise NoProperInvariantSubspace(f"{rep.label} is irreducible within tolerance")
    d = rep.dimension
    options = []
    for q in subs:
        k = q.shape[1]
        options.append((d - k, 1, "quotient", q))
        options.append((k, 0, "sub", q))
    options.sort(key=lambda o: (o[0], o[1]), reverse=True)
    dim, _, kind, q = options[0]
    if kind == "sub":
        basis = q
    else:
        basis = _orth_complement(q)
    gens = [basis.conj().T @ g @ basis for g in rep.generators]
    label = f"{rep.label}/{kind}{dim}"
    factor = Rep(rep.strand_count, gens, label, False, rep.tol)
    return Factor(_checked(factor, claim_unitary=True), kind, basis)


def commutant_dimension(rep: Rep) -> int:
    return commutant_basis([np.asarray(g) for g in rep.generators]).shape[0]


def commutant_basis(mats: Sequence[np.ndarray], tol: float = 1e-9) -> np.ndarray:
    """Basis (k, d, d) of all matrices commuting with every matrix in ``mats``."""
    d = mats[0].shape[0]
    eye = np.eye(d)
    # vec(A X - X A) = (I kron A - A^T kron I) vec(X), column-major vec
    rows = [np.kron(eye, a) - np.kron(a.T, eye) for a in mats]
    ns = _nullspace(np.vstack(rows), tol)
    return np.array([ns[:, j].reshape(d, d, order="F") for j in range(ns.shape[1])])


# ---------------------------------------------------------------------------
# Unitarization


def invariant_hermitian_forms(rep: Rep, tol: float = 1e-9) -> list[np.ndarray]:
    d = rep.dimension
    basis = []
    for j in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[j, j] = 1
        basis.append(e)
        for k in range(j + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = e[k, j] = 1
            basis.append(e)
            e = np.zeros((d, d), dtype=complex)
            e[j, k], e[k, j] = 1j, -1j
            basis.append(e)
    cols = []
    for h in basis:
        parts = [g.conj().T @ h @ g - h for g in rep.generators]
        v = np.concatenate([p.ravel() for p in parts])
        cols.append(np.concatenate([v.real, v.imag]))
    ns = _nullspace(np.array(cols).T, tol)
    return [sum(c * h for c, h in zip(ns[:, j], basis)) for j in range(ns.shape[1])]


def unitarize(rep: Rep, seed: int = 0) -> tuple[Rep, np.ndarray]:
    """Conjugate rep into U(d) using a positive definite invariant Hermitian form.

    Returns the unitary representation and the similarity S with
    new_generator = S @ old_generator @ inv(S).
    """
    if rep.unitary:
        return rep, np.eye(rep.dimension, dtype=complex)
    forms = invariant_hermitian_forms(rep)
    if not forms:
        raise NotUnitarizable(f"{rep.label}: no invariant Hermitian form")
    rng = np.random.default_rng(seed)
    d = rep.dimension
    stack = np.array([f.ravel() for f in forms]).T
    coef, *_ = np.linalg.lstsq(stack, np.eye(d).ravel(), rcond=None)
    trials = [coef.real] + [rng.normal(size=len(forms)) for _ in range(20)]
    for c in trials:
        h = sum(ci * f for ci, f in zip(c, forms))
        h = (h + h.conj().T) / 2
        w, v = np.linalg.eigh(h)
        if w[0] < 0 < -w[-1]:
            w, h = -w, -h
        if w[0] > 1e-8 * abs(w[-1]):
            s = v @ np.diag(np.sqrt(w)) @ v.conj().T
            s_inv = v @ np.diag(1 / np.sqrt(w)) @ v.conj().T
            gens = [s @ g @ s_inv for g in rep.generators]
            out = Rep(rep.strand_count, gens, f"{rep.label}|unitarized", True, rep.tol)
            if out.unitarity_defect() > 1e3 * rep.tol.unitarity:
                continue
            return _checked(out, claim_unitary=True), s
    raise NotUnitarizable(f"{rep.label}: invariant forms are indefinite")


# ---------------------------------------------------------------------------
# Projective equivalence


@dataclass(frozen=True)
class EquivalenceWitness:
    """rep_b(tau_i) ~= scalar * similarity @ rep_a(tau_i) @ inv(similarity)."""

    scalar: complex
    similarity: np.ndarray
    residual: float
    diagonal: bool

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NotEquivalent:
    best_residual: float

    def __bool__(self) -> bool:
        return False


def _intertwiners(a_gens, b_gens, c, diagonal, tol):
    d = a_gens[0].shape[0]
    eye = np.eye(d)
    if diagonal:
        rows = []
        for a, b in zip(a_gens, b_gens):
            for j in range(d):
                for k in range(d):
                    row = np.zeros(d, dtype=complex)
                    row[k] += b[j, k]
                    row[j] -= c * a[j, k]
                    rows.append(row)
        m = np.array(rows)
    else:
        m = np.vstack([np.kron(eye, b) - c * np.kron(a.T, eye) for a, b in zip(a_gens, b_gens)])
    _, s, vh = np.linalg.svd(m)
    scale = max(1.0, s[0])
    null = vh[s <= tol * scale].conj().T if np.any(s <= tol * scale) else vh[-1:].conj().T
    if diagonal:
        return [np.diag(null[:, j]) for j in range(null.shape[1])], null
    return [null[:, j].reshape(d, d, order="F") for j in range(null.shape[1])], null


def _normalize_similarity(s: np.ndarray) -> np.ndarray:
    flat = s.ravel()
    k = int(np.argmax(np.abs(flat) > 1e-8 * np.abs(flat).max()))
    return s / flat[k]


def projectively_equivalent(rep_a: Rep, rep_b: Rep, tol: float = 1e-8, seed: int = 0):
    """Search for a scalar and a similarity carrying rep_a onto rep_b.

    Diagonal similarities are tried first, then general ones.  Returns an
    :class:`EquivalenceWitness` or :class:`NotEquivalent` with the best residual.
    """
    if rep_a.strand_count != rep_b.strand_count or rep_a.dimension != rep_b.dimension:
        raise DimensionMismatch(
            f"cannot compare n={rep_a.strand_count},d={rep_a.dimension} "
            f"with n={rep_b.strand_count},d={rep_b.dimension}"
        )
    a_gens = [np.asarray(g) for g in rep_a.generators]
    b_gens = [np.asarray(g) for g in rep_b.generators]
    rng = np.random.default_rng(seed)
    ea = np.linalg.eigvals(a_gens[0])
    eb = np.linalg.eigvals(b_gens[0])
    scalars: list[complex] = []
    for x in eb:
        for y in ea:
            c = complex(x / y)
            if all(abs(c - s) > 1e-6 for s in scalars):
                scalars.append(c)
    best = math.inf
    for diagonal in (True, False):
        for c in scalars:
            cands, null = _intertwiners(a_gens, b_gens, c, diagonal, 1e-9)
            trials = list(cands)
            if null.shape[1] > 1:
                for _ in range(3):
                    coef = rng.normal(size=null.shape[1]) + 1j * rng.normal(size=null.shape[1])
                    v = null @ coef
                    trials.append(np.diag(v) if diagonal else v.reshape(a_gens[0].shape, order="F"))
            for s in trials:
                if np.linalg.cond(s) > 1e10:
                    continue
                s = _normalize_similarity(s)
                s_inv = np.linalg.inv(s)
                res = max(float(np.abs(c * s @ a @ s_inv - b).max()) for a, b in zip(a_gens, b_gens))
                best = min(best, res)
                if res <= tol:
                    return EquivalenceWitness(c, s, res, diagonal)
    return NotEquivalent(best)


# ---------------------------------------------------------------------------
# Rep files


def rep_to_text(rep: Rep) -> str:
    def num(x: float) -> str:
        return format(float(x), ".17g")

    gens = []
    for g in rep.generators:
        pairs = ", ".join(f"[{num(z.real)}, {num(z.imag)}]" for z in g.ravel())
        gens.append(f"    [{pairs}]")
    return (
        "{\n"
        f'  "n": {rep.strand_count},\n'
        f'  "d": {rep.dimension},\n'
        f'  "label": {json.dumps(rep.label)},\n'
        f'  "unitary": {json.dumps(bool(rep.unitary))},\n'
        f'  "tolerances": {{"relation": {num(rep.tol.relation)}, '
        f'"unitarity": {num(rep.tol.unitarity)}, "rank": {num(rep.tol.rank)}}},\n'
        '  "generators": [\n' + ",\n".join(gens) + "\n  ]\n}\n"
    )


def rep_from_text(text: str) -> Rep:
    """Parse a Rep file. Relations are not checked; use verify_relations."""
    data = json.loads(text)
    n, d = int(data["n"]), int(data["d"])
    gens = []
    for flat in data["generators"]:
        if len(flat) != d * d:
            raise DimensionMismatch(f"generator has {len(flat)} entries, expected {d * d}")
        gens.append(np.array([complex(re, im) for re, im in flat]).reshape(d, d))
    tol = Tolerances(**data.get("tolerances", {}))
    return Rep(n, gens, data.get("label", ""), bool(data.get("unitary", False)), tol)


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_rep(rep: Rep, path) -> None:
    atomic_write(path, rep_to_text(rep))


def load_rep(path) -> Rep:
    with open(path, encoding="utf-8") as fh:
        return rep_from_text(fh.read())
