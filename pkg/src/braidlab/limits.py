"""Abelianness forcing, eigenvalue-arrangement counting, N(d) values and
universality classification of the qubit representations."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .angles import Angle, as_angle
from .ball import DEFAULT_MAX_BALL, bfs_ball
from .errors import AbelianForced, InadmissibleTheta, InvalidParameter
from .reps import Rep, eta_admissible
from .words import relation_instances

# ---------------------------------------------------------------------------
# Abelianness


@dataclass(frozen=True)
class AbelianCheck:
    abelian: bool
    max_commutator: float
    pair: tuple[int, int] | None

    def __bool__(self) -> bool:
        return self.abelian


def check_abelian(rep: Rep, tol: float | None = None) -> AbelianCheck:
    """Do all generator matrices commute?  Witness: largest commutator norm and its pair."""
    tol = rep.tol.relation if tol is None else tol
    worst, pair = 0.0, None
    gens = rep.generators
    for i, j in itertools.combinations(range(len(gens)), 2):
        c = float(np.linalg.norm(gens[i] @ gens[j] - gens[j] @ gens[i], 2))
        if c > worst:
            worst, pair = c, (i + 1, j + 1)
    return AbelianCheck(worst <= tol, worst, pair if worst > tol else None)


def forced_abelian_2d(n: int) -> bool:
    """True iff every two-dimensional representation of B_n is abelian.

    With tau_1 diagonal with distinct eigenvalues, tau_3 and tau_4 commute with
    it once n >= 5, so both are diagonal, they commute with each other, and the
    braid relation between them collapses the whole representation.
    """
    if n < 2:
        raise InvalidParameter("n must be at least 2")
    return n >= 5


def _relation_residuals(g: np.ndarray, n: int) -> np.ndarray:
    """Stacked relation residuals for a batch g of shape (S, n-1, d, d)."""
    out = []
    for rel in relation_instances(n):
        lhs = rhs = None
        for x in rel.lhs.letters:
            lhs = g[:, x - 1] if lhs is None else lhs @ g[:, x - 1]
        for x in rel.rhs.letters:
            rhs = g[:, x - 1] if rhs is None else rhs @ g[:, x - 1]
        out.append((lhs - rhs).reshape(len(g), -1))
    return np.concatenate(out, axis=1)


def _relation_jacobian(g: np.ndarray, n: int) -> np.ndarray:
    """Holomorphic Jacobian of the residuals with respect to every matrix entry."""
    s, k, d, _ = g.shape
    cols = []
    for idx in range(k * d * d):
        gi, r, c = idx // (d * d), (idx // d) % d, idx % d
        blocks = []
        for rel in relation_instances(n):
            parts = []
            for word in (rel.lhs.letters, rel.rhs.letters):
                total = np.zeros((s, d, d), dtype=complex)
                for pos, x in enumerate(word):
                    if x - 1 != gi:
                        continue
                    left = np.broadcast_to(np.eye(d, dtype=complex), (s, d, d))
                    for y in word[:pos]:
                        left = left @ g[:, y - 1]
                    right = np.broadcast_to(np.eye(d, dtype=complex), (s, d, d))
                    for y in word[pos + 1 :]:
                        right = right @ g[:, y - 1]
                    total = total + left[:, :, [r]] @ right[:, [c], :]
                parts.append(total)
            blocks.append((parts[0] - parts[1]).reshape(s, -1))
        cols.append(np.concatenate(blocks, axis=1))
    return np.stack(cols, axis=2)


@dataclass(frozen=True)
class EmpiricalAbelianReport:
    samples: int
    converged: int
    abelian: int
    max_residual: float
    max_commutator: float

    @property
    def passed(self) -> bool:
        return self.converged > 0 and self.abelian == self.converged


def empirical_forced_abelian(
    n: int = 5,
    samples: int = 10_000,
    seed: int = 0,
    noise: float = 0.05,
    steps: int = 30,
    residual_tol: float = 1e-10,
    commutator_tol: float = 1e-6,
    batch: int = 2000,
) -> EmpiricalAbelianReport:
    """Perturb diagonal 2-dim solutions, project back onto the relation variety
    with Gauss-Newton, and check that every converged tuple is abelian."""
    rng = np.random.default_rng(seed)
    converged = abelian = 0
    max_res = max_comm = 0.0
    done = 0
    while done < samples:
        s = min(batch, samples - done)
        lam = np.exp(1j * rng.uniform(-np.pi, np.pi, size=(s, 2)))
        base = np.zeros((s, n - 1, 2, 2), dtype=complex)
        base[:, :, 0, 0] = lam[:, [0]]
        base[:, :, 1, 1] = lam[:, [1]]
        g = base + noise * (rng.normal(size=base.shape) + 1j * rng.normal(size=base.shape))
        for _ in range(steps):
            f = _relation_residuals(g, n)
            if np.abs(f).max() <= residual_tol * 1e-2:
                break
            jac = _relation_jacobian(g, n)
            delta = np.linalg.pinv(jac, rcond=1e-12) @ f[:, :, None]
            g = g - delta[:, :, 0].reshape(g.shape)
        res = np.abs(_relation_residuals(g, n)).max(axis=1)
        ok = res <= residual_tol
        comm = np.zeros(s)
        for i, j in itertools.combinations(range(n - 1), 2):
            c = g[:, i] @ g[:, j] - g[:, j] @ g[:, i]
            comm = np.maximum(comm, np.abs(c).max(axis=(1, 2)))
        converged += int(ok.sum())
        abelian += int((ok & (comm <= commutator_tol)).sum())
        if ok.any():
            max_res = max(max_res, float(res[ok].max()))
            max_comm = max(max_comm, float(comm[ok].max()))
        done += s
    return EmpiricalAbelianReport(samples, converged, abelian, max_res, max_comm)


# ---------------------------------------------------------------------------
# Eigenvalue arrangements and N(d)


@dataclass(frozen=True)
class EigenSpec:
    values: tuple[complex, ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        mult = tuple(int(m) for m in self.multiplicities)
        if len(vals) != len(mult):
            raise InvalidParameter("values and multiplicities differ in length")
        if any(m < 1 for m in mult):
            raise InvalidParameter("multiplicities must be positive")
        for a, b in itertools.combinations(vals, 2):
            if abs(a - b) <= 1e-9:
                raise InvalidParameter("eigenvalues must be distinct")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "multiplicities", mult)

    @classmethod
    def from_multiplicities(cls, mults: Sequence[int]) -> EigenSpec:
        """Spec with the given partition and equally spaced placeholder eigenvalues."""
        p = len(mults)
        return cls(tuple(np.exp(2j * np.pi * k / (p + 1)) for k in range(p)), tuple(mults))

    @property
    def d(self) -> int:
        return sum(self.multiplicities)

    @property
    def p(self) -> int:
        return len(self.values)


def arrangement_count(spec: EigenSpec) -> int:
    """Distinct diagonal placements of the eigenvalue multiset: d! / prod(m_i!)."""
    out = math.factorial(spec.d)
    for m in spec.multiplicities:
        out //= math.factorial(m)
    return out


@dataclass(frozen=True)
class LimitResult:
    query: str
    value: int | None
    provenance: str
    bound: int | None = None
    refined: int | None = None

    def text(self) -> str:
        if self.value is not None:
            return f"{self.query}={self.value}"
        return f"{self.query}<={self.bound}"


def _partition_key(mults: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted((int(m) for m in mults), reverse=True))


def _partition_text(mults: Sequence[int]) -> str:
    return "(" + ",".join(str(m) for m in _partition_key(mults)) + ")"


def _known_refined(mults: Sequence[int]) -> int | None:
    key = _partition_key(mults)
    d = sum(key)
    if len(key) == d and d >= 2:
        return 4
    if key == (2, 1):
        return 5
    return None


def crude_anyon_bound(spec: EigenSpec) -> LimitResult:
    """Largest n whose ceil((n-1)/2) odd generators fit into distinct arrangements."""
    if spec.p < 2:
        raise AbelianForced("a single eigenvalue makes every generator scalar")
    count = arrangement_count(spec)
    return LimitResult(
        f"N({spec.d},{_partition_text(spec.multiplicities)})",
        None,
        "arrangement-count",
        bound=2 * count + 1,
        refined=_known_refined(spec.multiplicities),
    )


def formanek_N(d: int, p: int | None = None, multiplicities: Sequence[int] | None = None) -> LimitResult:
    """N(d) = d + 2, with the small refinements N(d,d) = 4, N(d,2) = d + 2, N(3,(2,1)) = 5.

    Other N(d,p) and N(d,m) values are not determined; they come back as upper bounds.
    """
    if d < 2:
        raise InvalidParameter("d must be at least 2")
    if multiplicities is not None:
        key = _partition_key(multiplicities)
        if sum(key) != d:
            raise InvalidParameter("multiplicities must sum to d")
        if len(key) == 1:
            raise AbelianForced("a single eigenvalue makes every generator scalar")
        refined = _known_refined(key)
        label = f"N({d},{_partition_text(key)})"
        if refined is not None:
            return LimitResult(label, refined, "theorem")
        crude = crude_anyon_bound(EigenSpec.from_multiplicities(key))
        return LimitResult(label, None, "arrangement-count and N(d)", bound=min(crude.bound, d + 2))
    if p is not None:
        if p < 1 or p > d:
            raise InvalidParameter("p must lie in 1..d")
        if p == 1:
            raise AbelianForced("a single eigenvalue makes every generator scalar")
        label = f"N({d},{p})"
        if p == d:
            return LimitResult(label, 4, "theorem")
        if p == 2:
            return LimitResult(label, d + 2, "theorem")
        return LimitResult(label, None, "N(d)", bound=d + 2)
    return LimitResult(f"N({d})", d + 2, "theorem")


def limit_table(max_d: int = 10) -> list[LimitResult]:
    rows = []
    for d in range(2, max_d + 1):
        rows.append(formanek_N(d))
        rows.append(formanek_N(d, p=d))
        rows.append(formanek_N(d, p=2))
    rows.append(formanek_N(3, multiplicities=(2, 1)))
    return rows


# ---------------------------------------------------------------------------
# Roots of unity


@dataclass(frozen=True)
class RootOrder:
    value: complex
    order: int | None

    @property
    def is_root_of_unity(self) -> bool:
        return self.order is not None

    def text(self) -> str:
        return f"order {self.order}" if self.order else "NotRootOfUnity"


def _root_order(value, max_order: int, tol: float) -> int | None:
    if isinstance(value, Angle) and value.pi_fraction is not None:
        k = (value.pi_fraction / 2).denominator
        return k if k <= max_order else None
    z = value.unit() if isinstance(value, Angle) else complex(value)
    if abs(abs(z) - 1) > 1e-9:
        return None
    t = math.atan2(z.imag, z.real) / (2 * math.pi)
    for k in range(1, max_order + 1):
        x = k * t
        if abs(x - round(x)) * 2 * math.pi <= tol:
            return k
    return None


def vafa_check(eigs, max_order: int = 1024, tol: float = 1e-9) -> list[RootOrder]:
    """Smallest k <= max_order with lambda^k = 1 for each eigenvalue (None if none).

    Angles given as exact fractions of pi are decided exactly.
    """
    if max_order < 1:
        raise InvalidParameter("max_order must be positive")
    out = []
    for v in eigs:
        z = v.unit() if isinstance(v, Angle) else complex(v)
        out.append(RootOrder(z, _root_order(v, max_order, tol)))
    return out


# ---------------------------------------------------------------------------
# Universality


class Classification(enum.Enum):
    DENSE = "DenseInSU2"
    EXCEPTIONAL = "ExceptionalAngle"
    ORDER_TEN = "OrderTenRoot"
    DEGENERATE = "DegenerateAbelian"


@dataclass(frozen=True)
class UniversalityVerdict:
    classification: Classification
    phi: Angle
    exceptional_n: int | None = None
    q_order: int | None = None
    details: str = ""

    @property
    def finite_expected(self) -> bool:
        return self.classification in (Classification.EXCEPTIONAL, Classification.ORDER_TEN,
                                       Classification.DEGENERATE)

    def text(self) -> str:
        if self.classification is Classification.EXCEPTIONAL:
            return f"ExceptionalAngle({self.exceptional_n})"
        return self.classification.value


MAX_EXCEPTIONAL_N = 10**6


def q_angle(theta) -> Angle:
    """Angle phi of q = -a^2 = exp(i(2 theta - pi)), in (-pi, pi]."""
    return as_angle(theta).scaled(2).shifted_pi(-1).principal()


def theta_for_jones(r: int, sign: int = 1) -> Angle:
    """theta with exp(i(2 theta - pi)) = exp(2 pi i sign / r)."""
    return Angle.pi(Fraction(1, 2) + Fraction(sign, r))


def jones_dense(r: int) -> bool:
    return r >= 5 and r not in (6, 10)


def _exceptional_n(phi: Angle, tol: float) -> int | None:
    if phi.pi_fraction is not None:
        f = abs(phi.pi_fraction)
        if f == 1:
            return None
        n = Fraction(2) / (1 - f)
        return int(n) if n.denominator == 1 and n >= 2 else None
    x = abs(phi.radians)
    if math.pi - x <= tol:
        return None
    n = round(2 * math.pi / (math.pi - x))
    if 2 <= n <= MAX_EXCEPTIONAL_N and abs(x - (math.pi - 2 * math.pi / n)) <= tol:
        return n
    return None


def universality_classify(theta, tol: float = 1e-9) -> UniversalityVerdict:
    """Classify the closure of the eta(theta) image from q = -a^2 = e^{i phi}.

    ExceptionalAngle(n) when |phi| = pi - 2pi/n, OrderTenRoot when q has order
    ten, DegenerateAbelian when the off-diagonal coupling vanishes (image
    abelian), DenseInSU2 otherwise.
    """
    theta = as_angle(theta)
    adm = eta_admissible(theta)
    if not adm:
        raise InadmissibleTheta(f"theta={theta} outside cos 2theta <= 1/2 or a multiple of pi")
    phi = q_angle(theta)
    order = _root_order(phi, 1024, tol)
    if adm.b_squared <= tol:
        return UniversalityVerdict(Classification.DEGENERATE, phi, None, order, "off-diagonal coupling vanishes")
    n = _exceptional_n(phi, tol)
    if n is not None:
        return UniversalityVerdict(Classification.EXCEPTIONAL, phi, n, order, f"|phi| = pi - 2pi/{n}")
    if order == 10:
        return UniversalityVerdict(Classification.ORDER_TEN, phi, None, order, "q has order 10")
    details = f"q order {order}" if order else "q not a root of unity"
    if order and order >= 3:
        details += f"; consistent with density for r={order}: {jones_dense(order)}"
    return UniversalityVerdict(Classification.DENSE, phi, None, order, details)


def classify_jones(r: int, sign: int = 1) -> UniversalityVerdict:
    return universality_classify(theta_for_jones(r, sign))


# ---------------------------------------------------------------------------
# Image growth


@dataclass(frozen=True)
class GrowthReport:
    label: str
    sizes: tuple[int, ...]
    new_per_radius: tuple[int, ...]
    saturated: bool
    projective: bool

    @property
    def size(self) -> int:
        return self.sizes[-1]

    def text(self) -> str:
        return f"SaturatedFinite({self.size})" if self.saturated else "Growing"


def image_growth(
    rep: Rep,
    max_len: int,
    eps: float = 1e-6,
    projective: bool = True,
    max_size: int = DEFAULT_MAX_BALL,
) -> GrowthReport:
    """Cumulative ball sizes per radius; saturated when two radii in a row add nothing."""
    if not rep.unitary:
        raise InvalidParameter(f"{rep.label} is not unitary")
    ball = bfs_ball(rep, max_len, eps, projective, max_size)
    sizes = tuple(int(x) for x in np.cumsum(ball.new_per_radius))
    return GrowthReport(rep.label, sizes, tuple(ball.new_per_radius), ball.saturated, projective)
