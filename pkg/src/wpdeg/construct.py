"""Synthetic polarized limiting mixed Hodge structures.

Every structure built here is split over Q: a direct sum of pieces
``H_0 (x) V_j`` where ``H_0`` is a small polarized Hodge structure of weight
``n + j`` and ``V_j`` is the ``(j+1)``-dimensional Jordan block.  On ``V_j`` we
use the basis ``f_a = N^a e_0 / a!`` so that ``exp(N)`` is an integer Pascal
matrix.  The generator line ``alpha`` sits in one distinguished piece; it is
finite-distance data exactly when that piece has ``j = 0``.

The split data can then be twisted by ``exp(zN)`` (which shifts the orbit
polynomial by ``Im z``) and conjugated by a rational change of basis.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactla import Gauss, I, Matrix, to_scalar
from .hodge import HodgeFiltration, Polarization
from .monodromy import MonodromyOperator, exp_nilpotent


@dataclass(frozen=True)
class Piece:
    """``H_0 (x) V_j`` with ``H_0`` of type ``(p, q) + (q, p)`` (or ``(p, p)``)."""

    p: int
    q: int
    j: int
    scale: int = 1

    def __post_init__(self):
        if self.q > self.p:
            raise ValueError("expected p >= q")
        if self.j < 0 or self.q < self.j:
            raise ValueError("need 0 <= j <= q")
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    @property
    def weight(self) -> int:
        return self.p + self.q

    @property
    def h0_dim(self) -> int:
        return 1 if self.p == self.q else 2

    @property
    def dim(self) -> int:
        return self.h0_dim * (self.j + 1)

    def h0_form(self) -> list[list[int]]:
        """Polarization ``S`` of ``H_0`` with the positive sign built in."""
        s = self.scale
        if self.p == self.q:
            return [[s]]
        d = self.p - self.q
        if d % 2:
            sigma = 1 if d % 4 == 1 else -1
            return [[0, sigma * s], [-sigma * s, 0]]
        sigma = 1 if (d // 2) % 2 == 0 else -1
        return [[sigma * s, 0], [0, sigma * s]]

    def h0_filtration(self, t: int) -> list[tuple]:
        """Basis of ``F^t(H_0)``; the ``(p, q)`` line is spanned by ``(1, i)``."""
        if t <= self.q:
            return [tuple(int(a == b) for b in range(self.h0_dim)) for a in range(self.h0_dim)]
        if t <= self.p:
            return [(Fraction(1), I)]
        return []


def _block_diag(blocks: Sequence[Matrix]) -> Matrix:
    d = sum(b.nrows for b in blocks)
    rows = []
    off = 0
    for b in blocks:
        for r in b.rows:
            rows.append([0] * off + list(r) + [0] * (d - off - b.ncols))
        off += b.ncols
    return Matrix(rows, d)


def _piece_data(pc: Piece, n: int, alpha_piece: bool):
    j = pc.j
    m = j + 1
    h = pc.h0_dim
    # N f_a = (a+1) f_{a+1}
    Nj = [[0] * m for _ in range(m)]
    for a in range(j):
        Nj[a + 1][a] = a + 1
    # j! * c(f_a, f_b) = (-1)^a binom(j, a) when a + b = j
    cj = [[0] * m for _ in range(m)]
    for a in range(m):
        cj[a][j - a] = (-1) ** a * math.comb(j, a)
    S = pc.h0_form()
    d = h * m
    N = [[0] * d for _ in range(d)]
    Q = [[0] * d for _ in range(d)]
    for s in range(h):
        for t in range(h):
            for a in range(m):
                for b in range(m):
                    if s == t:
                        N[s * m + a][t * m + b] = Nj[a][b]
                    Q[s * m + a][t * m + b] = S[s][t] * cj[a][b]
    F = {}
    for r in range(1, n + 1):
        vecs = []
        for a in range(m):
            for hv in pc.h0_filtration(r + a):
                v = [Fraction(0)] * d
                for s in range(h):
                    v[s * m + a] = to_scalar(hv[s])
                vecs.append(tuple(v))
        F[r] = vecs
    alpha = None
    if alpha_piece:
        alpha = [Fraction(0)] * d
        if h == 1:
            alpha[0] = Fraction(1)
        else:
            alpha[0], alpha[m] = Fraction(1), I
    return Matrix(N, d), Matrix(Q, d), F, alpha


@dataclass(frozen=True)
class SyntheticLimit:
    """Polarized limit data together with how it was built."""

    weight_n: int
    op: MonodromyOperator
    Q: Polarization
    alpha: tuple
    F: HodgeFiltration
    pieces: tuple[Piece, ...]
    alpha_j: int
    shift: object = 0

    @property
    def expected_finite(self) -> bool:
        return self.alpha_j == 0

    def problem(self):
        from .orbit import OrbitProblem

        return OrbitProblem(self.weight_n, self.op, self.Q, self.alpha, self.F)


def assemble(n: int, pieces: Sequence[Piece], shift=0, g: Matrix | None = None) -> SyntheticLimit:
    """Direct sum of ``pieces``; the first one carries ``alpha``."""
    if not pieces:
        raise ValueError("need at least one piece")
    first = pieces[0]
    if first.p != n:
        raise ValueError("the alpha piece must have p = n")
    for pc in pieces:
        if pc.weight != n + pc.j or pc.p > n:
            raise ValueError(f"piece {pc} is not allowed for a weight-{n} limit")
    for pc in pieces[1:]:
        if pc.p >= n:
            raise ValueError("only the alpha piece may reach F^n")
    data = [_piece_data(pc, n, k == 0) for k, pc in enumerate(pieces)]
    N = _block_diag([x[0] for x in data])
    Q = _block_diag([x[1] for x in data])
    d = N.nrows
    F = {r: [] for r in range(1, n + 1)}
    alpha = []
    off = 0
    for k, (Nk, _, Fk, ak) in enumerate(data):
        dk = Nk.nrows
        for r in range(1, n + 1):
            F[r].extend(tuple([Fraction(0)] * off + list(v) + [Fraction(0)] * (d - off - dk)) for v in Fk[r])
        if k == 0:
            alpha = list(ak)
        off += dk
    alpha = tuple(alpha + [Fraction(0)] * (d - len(alpha)))
    if shift:
        E = exp_nilpotent(N.scale(to_scalar(shift)))
        alpha = E.apply(alpha)
        F = {r: [E.apply(v) for v in vs] for r, vs in F.items()}
    if g is not None:
        from .exactla import inverse

        gi = inverse(g)
        N = g @ N @ gi
        Q = gi.T @ Q @ gi
        alpha = g.apply(alpha)
        F = {r: [g.apply(v) for v in vs] for r, vs in F.items()}
    op = MonodromyOperator.from_log(N, n)
    return SyntheticLimit(
        n, op, Polarization(n, Q), tuple(alpha), HodgeFiltration.from_bases(n, d, F, top=n),
        tuple(pieces), first.j, shift,
    )


def allowed_pieces(n: int, j: int | None = None) -> list[tuple[int, int, int]]:
    """``(p, q, j)`` triples that may appear next to the alpha piece."""
    out = []
    for jj in range(0, n - 1) if j is None else [j]:
        for p in range(jj, n):
            q = n + jj - p
            if jj <= q <= p <= n - 1:
                out.append((p, q, jj))
    return out


def random_unimodular(d: int, rng: random.Random, steps: int | None = None) -> Matrix:
    """Product of random elementary integer matrices (determinant +-1)."""
    rows = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(steps if steps is not None else 2 * d):
        if d < 2:
            break
        a, b = rng.sample(range(d), 2)
        c = rng.choice([-2, -1, 1, 2])
        for k in range(d):
            rows[a][k] += c * rows[b][k]
    perm = list(range(d))
    rng.shuffle(perm)
    return Matrix([rows[i] for i in perm], d)


def random_rational_gl(d: int, rng: random.Random) -> Matrix:
    """Random invertible rational matrix with small entries."""
    from .exactla import rank

    while True:
        m = Matrix(
            [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(d)] for _ in range(d)], d
        )
        if rank(m) == d:
            return m


def random_limit(
    rng: random.Random,
    n: int | None = None,
    max_dim: int = 10,
    finite: bool | None = None,
    twist: bool = True,
    conjugate: str | None = "rational",
) -> SyntheticLimit:
    """Random valid polarized limit with ``n <= 4`` and ambient dim ``<= max_dim``.

    Args:
        finite: force the alpha piece to have ``j = 0`` (True) or ``j > 0``
            (False); ``None`` picks either.
        conjugate: ``"rational"``, ``"unimodular"`` (keeps ``T`` integral) or
            ``None``.
    """
    if n is None:
        n = rng.randint(1, 4)
    if finite is None:
        finite = rng.random() < 0.5
    if n == 0:
        finite = True
    choices = [0] if finite else list(range(1, n + 1))
    choices = [j for j in choices if 2 * (j + 1) <= max_dim or j == n]
    j0 = rng.choice(choices)
    first = Piece(n, j0, j0, rng.randint(1, 3))
    pieces = [first]
    room = max_dim - first.dim
    extra = allowed_pieces(n)
    for _ in range(rng.randint(0, 4)):
        fits = [t for t in extra if (1 if t[0] == t[1] else 2) * (t[2] + 1) <= room]
        if not fits:
            break
        p, q, j = rng.choice(fits)
        pc = Piece(p, q, j, rng.randint(1, 3))
        pieces.append(pc)
        room -= pc.dim
    shift = 0
    if twist and rng.random() < 0.7:
        shift = Gauss(Fraction(rng.randint(-4, 4), rng.randint(1, 3)), Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        shift = to_scalar(shift)
    d = sum(pc.dim for pc in pieces)
    g = None
    if conjugate == "rational":
        g = random_rational_gl(d, rng)
    elif conjugate == "unimodular":
        g = random_unimodular(d, rng)
    return assemble(n, pieces, shift, g)
