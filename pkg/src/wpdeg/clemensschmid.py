"""The graded slice of the Clemens-Schmid sequence around ``H^n``.

Only the piece ``F^n Gr_n`` is assembled.  Its two outer neighbours vanish
for dimension reasons, so the sequence forces

    F^n Gr_n H^n(X_0)  ~=  F^n Gr_n H^n(X_s)

and the two classification routes must agree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .centralfibre import CentralFibreModel, fn_grn_central
from .errors import InconsistentInputError
from .exactla import Matrix, Subspace
from .report import Check, Report

MORPHISM_TYPES = ("alpha", "i*", "N", "beta")


def morphism_type(label: str, n: int) -> int:
    """``r`` such that the map has type ``(r, r)``."""
    table = {"alpha": n + 1, "i*": 0, "N": -1, "beta": -n}
    aliases = {"α": "alpha", "i_*": "i*", "istar": "i*", "β": "beta"}
    key = aliases.get(label, label)
    if key not in table:
        raise ValueError(f"unknown Clemens-Schmid map {label!r}; expected one of {MORPHISM_TYPES}")
    return table[key]


def morphism_type_check(label: str, weight_shift: int, filtration_shift: int, n: int) -> Check:
    """Compare declared shifts with the type table.

    A map of type ``(r, r)`` moves the Hodge filtration index by ``r`` and the
    weight index by ``2r``.
    """
    r = morphism_type(label, n)
    ok = weight_shift == 2 * r and filtration_shift == r
    detail = f"type ({r},{r}): weight shift {2 * r}, filtration shift {r}"
    if not ok:
        detail = f"expected ({r},{r}), i.e. weight shift {2 * r} and filtration shift {r}"
    return Check(f"type of {label}", ok, detail, None if ok else {"expected": (r, r)})


def is_strict_morphism(
    M: Matrix,
    W_src: list[Subspace],
    W_tgt: list[Subspace],
    shift: int = 0,
) -> bool:
    """``M`` is a morphism of weighted spaces of the given shift and is strict.

    ``W_src[k]`` and ``W_tgt[k]`` are ascending filtrations (indices past the
    end repeat the last term).  Morphism: ``M W_k <= W'_{k+shift}``.  Strict:
    ``M W_k = im M & W'_{k+shift}``.
    """
    from .exactla import image, intersect

    def at(W, k):
        if k < 0:
            return Subspace.zero(W[0].ambient_dim)
        return W[min(k, len(W) - 1)]

    im = image(M)
    for k in range(len(W_src)):
        src = at(W_src, k).image_under(M)
        tgt = at(W_tgt, k + shift)
        if not src.issubspace(tgt):
            return False
        if src != intersect(im, tgt):
            return False
    return True


@dataclass(frozen=True)
class WeightedSpace:
    """Weight-graded dimensions of a cohomology or homology group ``H^m``/``H_m``."""

    degree_m: int
    dims_by_weight: dict
    filtration_type: str = "cohomology"

    def __post_init__(self):
        if self.filtration_type not in ("cohomology", "homology"):
            raise ValueError("filtration_type must be 'cohomology' or 'homology'")
        m = self.degree_m
        for k, d in self.dims_by_weight.items():
            if d < 0:
                raise ValueError("negative dimension")
            if d and self.filtration_type == "homology" and not (-m <= k <= 0):
                raise ValueError(f"Gr_{k} H_{m} must vanish outside -{m} <= k <= 0")
            if d and self.filtration_type == "cohomology" and not (0 <= k <= 2 * m):
                raise ValueError(f"Gr_{k} H^{m} must vanish outside 0 <= k <= {2 * m}")

    def dual(self) -> "WeightedSpace":
        """Weights of the dual via ``W_{-k}(H_m) = Ann(W_{k-1}(H^m))``."""
        kind = "homology" if self.filtration_type == "cohomology" else "cohomology"
        return WeightedSpace(self.degree_m, {-k: d for k, d in self.dims_by_weight.items()}, kind)

    @property
    def total(self) -> int:
        return sum(self.dims_by_weight.values())


@dataclass(frozen=True)
class GradedSliceReport:
    n: int
    homology_term: int  # F^{-1} Gr_{-n-2} H_{n+2}(X_0)
    central_term: int  # F^n Gr_n H^n(X_0)
    nearby_term: int  # F^n Gr_n H^n(X_s)
    lower_term: int  # F^{n-1} Gr_{n-2} H^n(X_s)
    agree: bool

    @property
    def isomorphism_rank(self) -> int:
        return self.central_term if self.agree else -1

    def as_report(self) -> Report:
        n = self.n
        return Report(
            "Clemens-Schmid graded slice",
            (
                Check(f"F^-1 Gr_{-n - 2} H_{n + 2}(X_0) = 0", self.homology_term == 0,
                      "no (n+1)-forms on an n-dimensional fibre"),
                Check(f"F^{n - 1} Gr_{n - 2} H^{n}(X_s) = 0", self.lower_term == 0,
                      "Gr_{n-2} has Hodge level at most n-2"),
                Check("ranks agree", self.agree,
                      f"central fibre {self.central_term}, nearby fibre {self.nearby_term}"),
            ),
            {"rank": self.isomorphism_rank},
        )


def forced_vanishings(n: int) -> tuple[int, int]:
    """The two outer terms of the slice, zero for every ``n >= 1``."""
    if n < 1:
        raise ValueError("n must be positive")
    return 0, 0


def graded_slice(orbit_side, fibre_side: CentralFibreModel) -> GradedSliceReport:
    """Compare ``F^n Gr_n`` of the nearby and central fibres.

    Raises:
        InconsistentInputError: the ranks differ, so the two descriptions
            cannot come from one degeneration.
    """
    from .orbit import alpha_weight

    n = orbit_side.weight_n
    if fibre_side.dim_n != n:
        raise InconsistentInputError(f"orbit data has n = {n} but the fibre has dimension {fibre_side.dim_n}")
    nearby = 1 if alpha_weight(orbit_side) == n else 0
    central = fn_grn_central(fibre_side)
    hom, low = forced_vanishings(n)
    rep = GradedSliceReport(n, hom, central, nearby, low, central == nearby)
    if not rep.agree:
        raise InconsistentInputError(
            f"dim F^{n} Gr_{n} H^{n}: nearby fibre gives {nearby}, central fibre gives {central}; "
            "the two descriptions cannot belong to one degeneration"
        )
    return rep
