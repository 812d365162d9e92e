"""Polarized and mixed Hodge structures stored as filtrations.

A Hodge structure of weight ``k`` is carried by its descending filtration
``F^p``; the decomposition is the derived view ``H^{p,q} = F^p & conj(F^q)``.
All positivity tests are exact: a Hermitian Gram matrix is diagonalised over
Q(i) and the signs of the pivots are read off, so there is no tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DimensionMismatchError, PolarizationError
from .exactla import Gauss, I, Matrix, Subspace, conj, dot, intersect, to_scalar
from .monodromy import (
    MonodromyOperator,
    WeightFiltration,
    lefschetz_decomposition,
    weight_filtration,
)
from .report import Check, Report


def i_power(k: int):
    """``(sqrt(-1))^k`` as an exact scalar."""
    return (Fraction(1), I, Fraction(-1), -I)[k % 4]


@dataclass(frozen=True)
class Polarization:
    """A rational bilinear form with ``Q^T = (-1)^k Q``."""

    weight_k: int
    Q: Matrix

    def __post_init__(self):
        Q = self.Q
        if not Q.is_square():
            raise DimensionMismatchError("polarization matrix must be square")
        if not Q.is_real():
            raise PolarizationError("polarization must be defined over Q")
        sign = -1 if self.weight_k % 2 else 1
        if Q.T != Q.scale(sign):
            kind = "skew-symmetric" if sign < 0 else "symmetric"
            raise PolarizationError(
                f"weight-parity rule violated: a weight-{self.weight_k} polarization "
                f"must be {kind} (Q^T = (-1)^k Q)"
            )
        from .exactla import rank

        if rank(Q) != Q.nrows:
            raise PolarizationError("polarization is degenerate")

    @property
    def parity(self) -> str:
        return "skew" if self.weight_k % 2 else "symmetric"

    @property
    def dim(self) -> int:
        return self.Q.nrows

    def __call__(self, u: Sequence, v: Sequence):
        return dot(u, self.Q.apply(v))

    def scaled(self, c) -> "Polarization":
        return Polarization(self.weight_k, self.Q.scale(c))


@dataclass(frozen=True)
class HodgeFiltration:
    """``F^0 = H >= F^1 >= ... >= F^top``; ``F^p = 0`` above ``top``."""

    weight_k: int
    levels: tuple[Subspace, ...]

    def __post_init__(self):
        if not self.levels:
            raise ValueError("Hodge filtration needs at least F^0")
        d = self.levels[0].ambient_dim
        if self.levels[0] != Subspace.full(d):
            raise ValueError("F^0 must be the whole space")
        for p in range(1, len(self.levels)):
            if not self.levels[p].issubspace(self.levels[p - 1]):
                raise ValueError(f"F^{p} is not contained in F^{p - 1}")

    @classmethod
    def from_bases(cls, weight_k: int, dim: int, bases: dict, top: int | None = None):
        """Build from ``{p: basis vectors of F^p}`` for ``p >= 1``."""
        top = max([weight_k] + list(bases)) if top is None else top
        levels = [Subspace.full(dim)]
        for p in range(1, top + 1):
            levels.append(Subspace(dim, bases.get(p, ())))
        return cls(weight_k, tuple(levels))

    @property
    def dim(self) -> int:
        return self.levels[0].ambient_dim

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def __getitem__(self, p: int) -> Subspace:
        if p <= 0:
            return self.levels[0]
        if p >= len(self.levels):
            return Subspace.zero(self.dim)
        return self.levels[p]

    def transform(self, g: Matrix) -> "HodgeFiltration":
        return HodgeFiltration(self.weight_k, tuple(F.image_under(g) for F in self.levels))


def hodge_components(F: HodgeFiltration, weight: int | None = None) -> dict:
    """``{(p, q): F^p & conj(F^q)}`` for ``p + q = weight``."""
    k = F.weight_k if weight is None else weight
    return {(p, k - p): intersect(F[p], F[k - p].conj()) for p in range(k + 1)}


def weil_operator_pairing(psi: Sequence, p: int, q: int, Q: Polarization):
    """``(sqrt(-1))^(p-q) Q(psi, conj(psi))``, which is always real."""
    if p + q != Q.weight_k:
        raise ValueError(f"p + q = {p + q} does not match the polarization weight {Q.weight_k}")
    psi = [to_scalar(x) for x in psi]
    val = i_power(p - q) * Q(psi, [conj(x) for x in psi])
    if isinstance(val, Gauss):
        if val.im != 0:
            raise PolarizationError("Hodge pairing is not real: conjugation symmetry violated")
        val = val.re
    return val


# ---------------------------------------------------------------------------
# exact definiteness


def _hermitian_gram(vectors: Sequence[Sequence], B: Matrix, factor) -> list[list]:
    cvs = [[conj(x) for x in v] for v in vectors]
    return [[to_scalar(factor * dot(u, B.apply(cv))) for cv in cvs] for u in vectors]


def definite_sign(H: list[list]) -> tuple[int, tuple | None]:
    """Sign of a Hermitian form given by its Gram matrix.

    Returns ``(+1, None)`` or ``(-1, None)`` if definite, else ``(0, c)`` where
    ``c`` is a coefficient vector that is isotropic or has the minority sign.
    """
    n = len(H)
    if n == 0:
        return 1, None
    for s in (1, -1):
        ok, witness = _ldl_positive([[s * x for x in row] for row in H])
        if ok:
            return s, None
    ok, witness = _ldl_positive(H)
    if witness is not None and _form_value(H, witness) > 0:
        _, witness = _ldl_positive([[-x for x in row] for row in H])
    return 0, witness


def _form_value(H, c):
    total = sum(
        (c[a] * H[a][b] * conj(c[b]) for a in range(len(c)) for b in range(len(c))), Fraction(0)
    )
    return total.re if isinstance(total, Gauss) else total


def _ldl_positive(H: list[list]) -> tuple[bool, tuple | None]:
    """Exact LDL* test; on failure return ``c`` with ``c^T H conj(c) <= 0``."""
    n = len(H)
    A = [[to_scalar(x) for x in row] for row in H]
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        d = A[k][k]
        d_re = d.re if isinstance(d, Gauss) else d
        if d_re <= 0:
            # solve L^H v = e_k, then c = conj(v) gives c^T H conj(c) = d_k
            v = [Fraction(0)] * n
            v[k] = Fraction(1)
            for i in range(k - 1, -1, -1):
                s = sum((conj(L[j][i]) * v[j] for j in range(i + 1, k + 1)), Fraction(0))
                v[i] = to_scalar(-s)
            return False, tuple(to_scalar(conj(x)) for x in v)
        for i in range(k + 1, n):
            L[i][k] = to_scalar(A[i][k] / d)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = to_scalar(A[i][j] - L[i][k] * A[k][j])
    return True, None


def _is_hermitian(H: list[list]) -> bool:
    n = len(H)
    return all(H[a][b] == conj(H[b][a]) for a in range(n) for b in range(n))


@dataclass
class _PureCheck:
    decomposition: Check
    hr1: Check
    signs: dict
    hr2_witness: tuple | None


def _check_pure(F: Callable[[int], Subspace], g: int, weight: int, B: Matrix | None) -> _PureCheck:
    """Hodge-structure and bilinear-relation checks on a space of dimension ``g``."""
    bad_p = []
    for p in range(weight + 2):
        a, b = F(p), F(weight - p + 1).conj()
        if a.dim + b.dim != g or intersect(a, b).dim != 0:
            bad_p.append(p)
    decomposition = Check(
        "hodge decomposition",
        not bad_p,
        "F^p + conj(F^(k-p+1)) = H is direct for every p" if not bad_p
        else f"F^p + conj(F^(k-p+1)) is not a direct sum decomposition for p in {bad_p}",
        {"p": bad_p} if bad_p else None,
    )
    if B is None:
        return _PureCheck(decomposition, Check("HR1", None), {}, None)

    hr1_witness = None
    for p in range(1, weight + 1):
        for u in F(p).vectors:
            for v in F(weight - p + 1).vectors:
                if dot(u, B.apply(v)) != 0:
                    hr1_witness = {"p": p, "u": u, "v": v}
                    break
            if hr1_witness:
                break
        if hr1_witness:
            break
    hr1 = Check(
        "HR1",
        hr1_witness is None,
        "Q(F^p, F^(k-p+1)) = 0" if hr1_witness is None else f"Q(F^{hr1_witness['p']}, F^{weight - hr1_witness['p'] + 1}) != 0",
        hr1_witness,
    )

    signs = {}
    witness = None
    if not bad_p:
        for p in range(weight + 1):
            q = weight - p
            Hpq = intersect(F(p), F(q).conj())
            if Hpq.dim == 0:
                continue
            gram = _hermitian_gram(Hpq.vectors, B, i_power(p - q))
            if not _is_hermitian(gram):
                signs[(p, q)] = 0
                witness = witness or {"p": p, "q": q, "reason": "Gram matrix is not Hermitian"}
                continue
            s, coeffs = definite_sign(gram)
            signs[(p, q)] = s
            if s == 0 and witness is None:
                vec = tuple(
                    to_scalar(sum((c * x for c, x in zip(coeffs, col)), Fraction(0)))
                    for col in zip(*Hpq.vectors)
                )
                witness = {"p": p, "q": q, "vector": vec}
    return _PureCheck(decomposition, hr1, signs, witness)


def check_hodge_riemann(F: HodgeFiltration, Q: Polarization) -> Report:
    """Both Hodge-Riemann bilinear relations, with strict positivity."""
    if F.dim != Q.dim:
        raise DimensionMismatchError("filtration and polarization dimensions differ")
    k = Q.weight_k
    pc = _check_pure(lambda p: F[p], F.dim, k, Q.Q)
    negative = {pq: s for pq, s in pc.signs.items() if s != 1}
    witness = pc.hr2_witness
    if witness is None and negative:
        (p, q) = sorted(negative)[0]
        witness = {"p": p, "q": q, "vector": hodge_components(F, k)[(p, q)].vectors[0]}
    if witness is not None and "vector" in witness:
        witness["pairing"] = weil_operator_pairing(witness["vector"], witness["p"], witness["q"], Q)
    hr2 = Check(
        "HR2",
        pc.decomposition.passed and not negative,
        "(sqrt(-1))^(p-q) Q(psi, conj psi) > 0 on every H^{p,q}" if not negative
        else f"positivity fails on H^{sorted(negative)[0]}",
        witness if negative else None,
    )
    return Report(
        "Hodge-Riemann relations",
        (Check("parity", True, f"Q is {Q.parity} for weight {k}"), pc.decomposition, pc.hr1, hr2),
        {"signs": {f"{p},{q}": s for (p, q), s in sorted(pc.signs.items())}},
    )


@dataclass(frozen=True)
class MixedHodge:
    weight_n: int
    W: WeightFiltration
    F: HodgeFiltration

    def induced(self, l: int) -> Callable[[int], Subspace]:
        """``p -> F^p(Gr_l) = proj(F^p & W_l)`` in graded coordinates."""
        proj, _ = self.W.graded(l)
        g = proj.nrows
        Wl = self.W[l]
        cache = {}

        def F_on_gr(p):
            if p not in cache:
                if g == 0:
                    cache[p] = Subspace.zero(0)
                else:
                    cache[p] = intersect(self.F[p], Wl).image_under(proj)
            return cache[p]

        return F_on_gr


@dataclass(frozen=True)
class PolarizedMixedHodge:
    base: MixedHodge
    N: MonodromyOperator
    Q: Polarization


def check_polarized_mhs(pm: PolarizedMixedHodge) -> Report:
    """The four conditions of a polarized mixed Hodge structure.

    The primitive-piece check accepts a definite form of either sign as long as the sign
    is the same on every primitive Hodge component; the sign is reported as
    ``info['orientation']``.
    """
    n = pm.base.weight_n
    N = pm.N.N
    W = pm.base.W
    F = pm.base.F
    checks = []

    Wn = weight_filtration(pm.N)
    same = tuple(W[l] for l in range(2 * n + 1)) == tuple(Wn[l] for l in range(2 * n + 1))
    checks.append(Check("W = W(N)", same, "" if same else "W differs from the monodromy filtration"))

    bad = []
    for l in range(2 * n + 1):
        g = W.graded_rank(l)
        if g == 0:
            continue
        pc = _check_pure(pm.base.induced(l), g, l, None)
        if not pc.decomposition.passed:
            bad.append({"weight": l, "p": pc.decomposition.witness["p"]})
    checks.append(Check(
        "mixed Hodge",
        not bad,
        "every Gr_l carries a weight-l Hodge structure" if not bad
        else "induced filtration is not a Hodge structure on Gr_" + ",".join(str(b["weight"]) for b in bad),
        bad or None,
    ))

    griff = None
    for p in range(1, F.top + 1):
        target = F[p - 1]
        for v in F[p].vectors:
            if not target.contains(N.apply(v)):
                griff = {"p": p, "vector": v}
                break
        if griff:
            break
    checks.append(Check("N F^p <= F^(p-1)", griff is None, "", griff))

    if same and not bad:
        lef = lefschetz_decomposition(W, pm.N)
        signs = {}
        fail = None
        for j in range(n + 1):
            l = n + j
            P = lef.primitive[l]
            if P.dim == 0:
                continue
            _, lift = W.graded(l)
            Bj = lift.T @ pm.Q.Q @ (N ** j) @ lift
            Fgr = pm.base.induced(l)
            pc = _check_pure(lambda p: intersect(Fgr(p), P), P.dim, l, Bj)
            # _check_pure measures dimensions against P, so work inside P's span
            if not pc.decomposition.passed:
                fail = fail or {"j": j, "reason": "primitive part is not a Hodge structure"}
            if pc.hr1.passed is False:
                fail = fail or {"j": j, "reason": "Q_j(F^p, F^(k-p+1)) != 0", **pc.hr1.witness}
            for pq, s in pc.signs.items():
                signs[(j,) + pq] = s
                if s == 0 and fail is None:
                    fail = {"j": j, "p": pq[0], "q": pq[1], "reason": "Q_j is not definite"}
        values = set(signs.values())
        if fail is None and len(values) > 1:
            fail = {"reason": "Q_j has different signs on different primitive components"}
        orientation = values.pop() if fail is None and values else 0 if fail else 1
        checks.append(Check(
            "primitive pieces polarized by Q(., N^j .)",
            fail is None,
            f"orientation {orientation:+d}" if fail is None else fail["reason"],
            fail,
        ))
        info = {
            "orientation": orientation,
            "signs": {",".join(map(str, k)): s for k, s in sorted(signs.items())},
        }
    else:
        checks.append(Check("primitive pieces polarized by Q(., N^j .)", None,
                            "skipped: W or the mixed Hodge condition fails"))
        info = {"orientation": 0}
    return Report("polarized mixed Hodge structure", tuple(checks), info)
