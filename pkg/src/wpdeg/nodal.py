"""Canonical-bundle bookkeeping for the full blow-up of simple nodes.

Divisor classes live in free abelian groups on the symbols

* ``L_X0`` (the proper transform) and ``L_D{i}`` on the blown-up total space,
* ``H{i}`` (hyperplane class) on the exceptional ``D_i = P^n``,
* ``L_E{i}`` on the proper transform, where ``E_i`` is its intersection with ``D_i``.

The relations used are

    L_Di|Di = -H_i,   K_Di = -(n+1) H_i,   L_Dj|Di = 0 (j != i),
    L_X0 + 2 sum L_Di = 0   (each D_i has multiplicity 2 in the fibre),
    L_Di|X0 = L_Ei,

and adjunction ``K_V = (K + L_V)|_V``.  Coefficients are affine in the unknown
``k_i`` so the equation that fixes it is solved, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .centralfibre import CentralFibreModel, Stratum, smooth_hodge
from .errors import InternalConsistencyError, OutOfHypothesisError
from .report import Classification, Verdict


@dataclass(frozen=True)
class Lin:
    """``const + ki * k_i`` with exact coefficients."""

    const: Fraction = Fraction(0)
    ki: Fraction = Fraction(0)

    def __add__(self, o: "Lin") -> "Lin":
        return Lin(self.const + o.const, self.ki + o.ki)

    def __sub__(self, o: "Lin") -> "Lin":
        return Lin(self.const - o.const, self.ki - o.ki)

    def scale(self, c) -> "Lin":
        return Lin(self.const * c, self.ki * c)

    def at(self, ki) -> Fraction:
        return self.const + self.ki * ki

    def __str__(self) -> str:
        if self.ki == 0:
            return str(self.const)
        parts = [] if self.const == 0 else [str(self.const)]
        parts.append(("" if self.ki == 1 else "-" if self.ki == -1 else f"{self.ki}*") + "k_i")
        return " + ".join(parts).replace("+ -", "- ")


def _lin(c) -> Lin:
    return c if isinstance(c, Lin) else Lin(Fraction(c))


@dataclass(frozen=True)
class Divisor:
    """Element of a free abelian group on named classes of the variety ``on``."""

    on: str
    terms: tuple = ()

    @classmethod
    def of(cls, on: str, **coeffs) -> "Divisor":
        return cls(on, tuple(sorted((k, _lin(v)) for k, v in coeffs.items())))._clean()

    def _clean(self) -> "Divisor":
        merged: dict = {}
        for k, v in self.terms:
            merged[k] = merged.get(k, Lin()) + v
        return Divisor(self.on, tuple(sorted((k, v) for k, v in merged.items() if v != Lin())))

    def coeff(self, sym: str) -> Lin:
        return dict(self.terms).get(sym, Lin())

    def symbols(self) -> list:
        return [k for k, _ in self.terms]

    def __add__(self, o: "Divisor") -> "Divisor":
        if o.on != self.on:
            raise ValueError(f"cannot add classes on {self.on} and {o.on}")
        return Divisor(self.on, self.terms + o.terms)._clean()

    def __sub__(self, o: "Divisor") -> "Divisor":
        return self + o.scale(-1)

    def scale(self, c) -> "Divisor":
        return Divisor(self.on, tuple((k, v.scale(c)) for k, v in self.terms))._clean()

    def scale_lin(self, c: Lin) -> "Divisor":
        """Multiply by an affine coefficient (the result must stay affine)."""
        out = []
        for k, v in self.terms:
            if v.ki != 0 and c.ki != 0:
                raise ValueError("coefficient would be quadratic in k_i")
            out.append((k, Lin(v.const * c.const, v.const * c.ki + v.ki * c.const)))
        return Divisor(self.on, tuple(out))._clean()

    def substitute(self, ki) -> "Divisor":
        return Divisor(self.on, tuple((k, Lin(v.at(ki))) for k, v in self.terms))._clean()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({v})*{k}" for k, v in self.terms)


@dataclass(frozen=True)
class NodalConfiguration:
    """``m`` simple nodes on the special fibre of a family of ``n``-folds.

    ``k`` is the coefficient of the proper transform in ``K`` of the blow-up.
    """

    dim_n: int
    num_nodes: int
    k: int = 0

    def __post_init__(self):
        if self.dim_n < 1:
            raise ValueError("dimension must be at least 1")
        if self.num_nodes < 1:
            raise ValueError("need at least one node")


class _Blowup:
    """The rewrite rules for a given configuration."""

    def __init__(self, cfg: NodalConfiguration):
        self.n = cfg.dim_n
        self.m = cfg.num_nodes
        self.idx = range(1, self.m + 1)

    def sum_D(self, c=1) -> Divisor:
        return Divisor.of("X'", **{f"L_D{i}": c for i in self.idx})

    def claim(self) -> Divisor:
        """``L_X0`` rewritten through ``L_X0 + 2 sum L_Di = 0``."""
        return self.sum_D(-2)

    def restrict_to_D(self, div: Divisor, i: int) -> Divisor:
        out = Divisor("D%d" % i)
        for sym, c in div.terms:
            if sym == "L_X0":
                out = out + self.restrict_to_D(self.claim(), i).scale_lin(c)
            elif sym == f"L_D{i}":
                out = out + Divisor("D%d" % i, ((f"H{i}", c.scale(-1)),))
            elif sym.startswith("L_D"):
                continue  # disjoint exceptional divisors
            else:
                raise ValueError(f"cannot restrict {sym} to D_{i}")
        return out._clean()

    def restrict_to_X0(self, div: Divisor) -> Divisor:
        out = Divisor("X0")
        for sym, c in div.terms:
            if sym == "L_X0":
                out = out + Divisor("X0", tuple((f"L_E{i}", c.scale(-2)) for i in self.idx))
            elif sym.startswith("L_D"):
                out = out + Divisor("X0", ((f"L_E{sym[3:]}", c),))
            else:
                raise ValueError(f"cannot restrict {sym} to the proper transform")
        return out._clean()

    def canonical_D(self, i: int) -> Divisor:
        return Divisor("D%d" % i, ((f"H{i}", Lin(Fraction(-(self.n + 1)))),))


@dataclass(frozen=True)
class AdjunctionResult:
    k_i: int
    K_Xprime_coeffs: dict
    K_proper_transform_coeff: int
    section_exists: bool
    K_Xprime: Divisor
    K_proper_transform: Divisor
    transcript: tuple = field(default=(), compare=False)


def adjunction(config: NodalConfiguration) -> AdjunctionResult:
    """Solve for ``k_i`` and derive ``K`` of the blow-up and of the proper transform."""
    bl = _Blowup(config)
    k = config.k
    log = []
    K = Divisor("X'", (("L_X0", Lin(Fraction(k))),) + tuple((f"L_D{i}", Lin(ki=Fraction(1))) for i in bl.idx))._clean()
    log.append(f"K_X' = {K}")
    log.append(f"claim: L_X0 = {bl.claim()}")

    # L_X0|D_i both through the claim and as the stated 2 H_i
    for i in bl.idx:
        via_claim = bl.restrict_to_D(Divisor.of("X'", L_X0=1), i)
        if via_claim != Divisor.of("D%d" % i, **{f"H{i}": 2}):
            raise InternalConsistencyError(f"L_X0|D_{i} != 2 H_{i}")
    log.append("L_X0|D_i = 2 H_i")

    solved = set()
    for i in bl.idx:
        K_on_D = bl.restrict_to_D(K, i)
        lhs = K_on_D + bl.restrict_to_D(Divisor.of("X'", **{f"L_D{i}": 1}), i)
        rhs = bl.canonical_D(i)
        a, b = lhs.coeff(f"H{i}"), rhs.coeff(f"H{i}")
        # a.const + a.ki * k_i = b.const, by c_1: Pic(P^n) ~= Z
        if a.ki == 0:
            raise InternalConsistencyError("adjunction on D_i does not involve k_i")
        ki = (b.const - a.const) / a.ki
        if ki.denominator != 1:
            raise InternalConsistencyError("k_i is not an integer")
        solved.add(int(ki))
        if i == 1:
            log.append(f"K_X'|D_1 = {K_on_D}")
            log.append(f"adjunction on D_1: {rhs} = {lhs}  =>  k_i = {ki}")
    if len(solved) != 1:
        raise InternalConsistencyError("nodes give different k_i")
    ki = solved.pop()

    K_num = K.substitute(ki)
    L_X0 = bl.claim().scale(k)
    K_rewritten = Divisor("X'", tuple((s, c) for s, c in K_num.terms if s != "L_X0"))._clean() + L_X0
    log.append(f"K_X' = {K_rewritten}")
    coeffs = {f"L_D{i}": K_rewritten.coeff(f"L_D{i}").const for i in bl.idx}
    if set(K_rewritten.symbols()) - set(coeffs) or len(set(coeffs.values())) != 1:
        raise InternalConsistencyError("K_X' is not a uniform combination of the L_Di")

    # adjunction on the proper transform: K_X0 = (K_X' + L_X0)|X0
    K_X0 = bl.restrict_to_X0(K_rewritten) + bl.restrict_to_X0(Divisor.of("X'", L_X0=1))
    log.append(f"K_X0 = {K_X0}")
    ccoef = {K_X0.coeff(f"L_E{i}") for i in bl.idx}
    if len(ccoef) != 1 or set(K_X0.symbols()) - {f"L_E{i}" for i in bl.idx}:
        raise InternalConsistencyError("K of the proper transform is not uniform in the E_i")
    c_X0 = int(ccoef.pop().const)
    return AdjunctionResult(
        k_i=ki,
        K_Xprime_coeffs={s: int(v) for s, v in coeffs.items()},
        K_proper_transform_coeff=c_X0,
        section_exists=c_X0 >= 0,
        K_Xprime=K_rewritten,
        K_proper_transform=K_X0,
        transcript=tuple(log),
    )


def quadric_hodge(dim: int) -> tuple:
    """Hodge grid of a smooth quadric of dimension ``dim``."""
    extra = {(dim // 2, dim // 2): 2} if dim % 2 == 0 and dim > 0 else None
    return smooth_hodge(dim, extra)


def blowup_model(config: NodalConfiguration) -> CentralFibreModel:
    """Central fibre of the blow-up: the proper transform and ``m`` copies of ``P^n``.

    Only ``h^{n,0}`` of the proper transform is asserted (it is 1); its other
    Hodge numbers are filled with the classes forced by a Kaehler form.
    """
    n, m = config.dim_n, config.num_nodes
    X0 = Stratum(0, "X0", smooth_hodge(n, {(n, 0): 1}))
    Ds = [Stratum(0, f"D{i}", smooth_hodge(n)) for i in range(1, m + 1)]
    Es = [Stratum(1, f"E{i}", quadric_hodge(n - 1), ("X0", f"D{i}")) for i in range(1, m + 1)]
    return CentralFibreModel(n, (X0, *Ds), tuple(Es))


def classify_nodal(config: NodalConfiguration) -> tuple[Classification, CentralFibreModel]:
    """Finite distance for ``n >= 3``; also returns the blown-up central fibre.

    Raises:
        OutOfHypothesisError: ``n < 3``.
    """
    n = config.dim_n
    if n < 3:
        raise OutOfHypothesisError(
            f"the nodal criterion needs n >= 3 (got n = {n}): for n <= 2 the proper transform "
            "need not carry a nonzero holomorphic n-form"
        )
    adj = adjunction(config)
    if adj.K_proper_transform_coeff <= 0 or not adj.section_exists:
        raise InternalConsistencyError("canonical class of the proper transform is not effective")
    witness = {
        "component": "X0",
        "canonical_class": f"{adj.K_proper_transform_coeff} * sum L_E",
        "k_i": adj.k_i,
        "h^n,0": 1,
    }
    return Classification(Verdict.FINITE, witness, "nodal"), blowup_model(config)
