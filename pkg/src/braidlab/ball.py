"""Breadth-first enumeration of group elements with matrix-level deduplication."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BallTooLarge
from .reps import Rep
from .words import BraidWord

DEFAULT_MAX_BALL = 250_000


def align_phase(m: np.ndarray, threshold: float = 1e-6) -> np.ndarray:
    """Divide by the phase of the first entry (row-major) whose modulus exceeds threshold."""
    flat = m.ravel()
    idx = np.flatnonzero(np.abs(flat) > threshold)
    if idx.size == 0:
        return m
    z = flat[idx[0]]
    return m * (abs(z) / z)


class ElementTable:
    """Set of matrices up to max-norm eps, optionally modulo a global phase.

    Lookup hashes a fixed random linear functional of the matrix into buckets
    wider than the functional can move under an eps perturbation, and then
    compares candidates entrywise.
    """

    def __init__(self, d: int, eps: float = 1e-6, projective: bool = True, seed: int = 12345):
        rng = np.random.default_rng(seed)
        v = rng.normal(size=d * d) + 1j * rng.normal(size=d * d)
        self._probe = v / np.abs(v).sum()
        self.eps = eps
        self.projective = projective
        self._width = max(100 * eps, 1e-5)
        self._buckets: dict[int, list[int]] = {}
        self.matrices: list[np.ndarray] = []

    def __len__(self) -> int:
        return len(self.matrices)

    def canonical(self, m: np.ndarray) -> np.ndarray:
        return align_phase(m) if self.projective else m

    def _bucket(self, c: np.ndarray) -> float:
        return float((self._probe @ c.ravel()).real) / self._width

    def find(self, m: np.ndarray, canonical: bool = False) -> int | None:
        c = m if canonical else self.canonical(m)
        b = self._bucket(c)
        for key in (int(np.floor(b)) - 1, int(np.floor(b)), int(np.floor(b)) + 1):
            for idx in self._buckets.get(key, ()):
                if np.abs(self.matrices[idx] - c).max() <= self.eps:
                    return idx
        return None

    def add(self, m: np.ndarray, canonical: bool = False) -> int:
        c = m if canonical else self.canonical(m)
        idx = len(self.matrices)
        self.matrices.append(c)
        self._buckets.setdefault(int(np.floor(self._bucket(c))), []).append(idx)
        return idx


@dataclass
class Ball:
    """Distinct elements reached within ``max_len`` letters, in BFS order."""

    rep: Rep
    words: list[BraidWord] = field(default_factory=list)
    matrices: list[np.ndarray] = field(default_factory=list)
    radii: list[int] = field(default_factory=list)
    new_per_radius: list[int] = field(default_factory=list)
    table: ElementTable | None = None

    def __len__(self) -> int:
        return len(self.words)

    @property
    def saturated(self) -> bool:
        return len(self.new_per_radius) >= 3 and self.new_per_radius[-1] == self.new_per_radius[-2] == 0


def bfs_ball(
    rep: Rep,
    max_len: int,
    eps: float = 1e-6,
    projective: bool = True,
    max_size: int = DEFAULT_MAX_BALL,
    alphabet: list[int] | None = None,
) -> Ball:
    """Enumerate the ball of radius max_len in the image of rep.

    Stops early once two consecutive radii add nothing.  Each element keeps the
    first (hence shortest) word that reached it.
    """
    n = rep.strand_count
    letters = alphabet or [s * i for i in range(1, n) for s in (1, -1)]
    mats = {x: np.asarray(rep.letter(x)) for x in letters}
    table = ElementTable(rep.dimension, eps, projective)
    ball = Ball(rep, table=table)
    ident = np.eye(rep.dimension, dtype=complex)
    table.add(ident)
    ball.words.append(BraidWord((), n))
    ball.matrices.append(ident)
    ball.radii.append(0)
    ball.new_per_radius.append(1)
    frontier = [0]
    for radius in range(1, max_len + 1):
        nxt = []
        for idx in frontier:
            w = ball.words[idx].letters
            m = ball.matrices[idx]
            for x in letters:
                if w and w[-1] == -x:
                    continue
                c = table.canonical(m @ mats[x])
                if table.find(c, canonical=True) is not None:
                    continue
                if len(table) >= max_size:
                    raise BallTooLarge(f"more than {max_size} distinct elements by radius {radius}")
                table.add(c, canonical=True)
                ball.words.append(BraidWord(w + (x,), n))
                ball.matrices.append(c)
                ball.radii.append(radius)
                nxt.append(len(ball.words) - 1)
        ball.new_per_radius.append(len(nxt))
        frontier = nxt
        if ball.saturated:
            break
    return ball
