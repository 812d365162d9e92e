"""Normal-crossing central fibres and their weight spectral sequence.

A model lists the components and every connected stratum of the multiple
intersections together with its Hodge numbers.  ``E_1^{p,q} = H^q(X^[p])``;
the ``q = 0`` row has the combinatorial coboundary of the dual complex, the
other rows only have differentials when the caller supplies them (or when a
neighbouring term vanishes).  ``Gr_k H^m(X_0) = E_2^{m-k,k}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatchError, ModelError
from .exactla import Matrix, Subspace, image, kernel, rank
from .report import Classification, Verdict


@dataclass(frozen=True)
class Stratum:
    """A connected stratum lying in the components ``members``.

    ``hodge_numbers[a][b] = h^{a,b}`` for ``0 <= a, b <= n - level_p``.
    ``faces`` optionally names the containing strata one level down; it is
    only needed when several strata share a member set.
    """

    level_p: int
    component_id: str
    hodge_numbers: tuple
    members: tuple = ()
    faces: tuple | None = None

    def __post_init__(self):
        h = tuple(tuple(int(x) for x in row) for row in self.hodge_numbers)
        object.__setattr__(self, "hodge_numbers", h)
        if not self.members:
            object.__setattr__(self, "members", (self.component_id,))
        object.__setattr__(self, "members", tuple(self.members))
        if self.faces is not None:
            object.__setattr__(self, "faces", tuple(self.faces))
        if len(self.members) != self.level_p + 1:
            raise ModelError(f"stratum {self.component_id!r} at level {self.level_p} needs {self.level_p + 1} components")
        if len(set(self.members)) != len(self.members):
            raise ModelError(
                f"stratum {self.component_id!r} repeats a component: self-intersection is not normal crossings"
            )
        size = len(h)
        if any(len(r) != size for r in h):
            raise ModelError(f"Hodge grid of {self.component_id!r} is not square")
        for a in range(size):
            for b in range(size):
                if h[a][b] < 0:
                    raise ModelError(f"negative Hodge number in {self.component_id!r}")
                if h[a][b] != h[b][a]:
                    raise ModelError(f"h^{{{a},{b}}} != h^{{{b},{a}}} in {self.component_id!r}")
        if size == 0 or h[0][0] != 1:
            raise ModelError(f"stratum {self.component_id!r} must be connected (h^{{0,0}} = 1)")

    @property
    def complex_dim(self) -> int:
        return len(self.hodge_numbers) - 1

    def h(self, a: int, b: int) -> int:
        size = len(self.hodge_numbers)
        if 0 <= a < size and 0 <= b < size:
            return self.hodge_numbers[a][b]
        return 0

    def betti(self, q: int) -> int:
        return sum(self.h(a, q - a) for a in range(q + 1))


def smooth_hodge(dim: int, extra: Mapping | None = None) -> tuple:
    """Hodge grid with ``h^{p,p} = 1`` (a projective space) plus ``extra``."""
    h = [[int(a == b) for b in range(dim + 1)] for a in range(dim + 1)]
    for (a, b), v in (extra or {}).items():
        h[a][b] = v
        h[b][a] = v
    return tuple(tuple(r) for r in h)


@dataclass(frozen=True)
class CentralFibreModel:
    dim_n: int
    components: tuple
    incidence: tuple = ()
    restriction_maps: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "incidence", tuple(self.incidence))
        n = self.dim_n
        if n < 1:
            raise ModelError("fibre dimension must be at least 1")
        if not self.components:
            raise ModelError("a central fibre needs at least one component")
        ids = [c.component_id for c in self.components]
        all_ids = ids + [s.component_id for s in self.incidence]
        if len(set(all_ids)) != len(all_ids):
            raise ModelError("stratum identifiers must be unique")
        for c in self.components:
            if c.level_p != 0:
                raise ModelError(f"component {c.component_id!r} must have level 0")
        for s in self.incidence:
            if s.level_p == 0:
                raise ModelError("level-0 entries must be exactly the components")
        known = set(ids)
        for s in self.components + self.incidence:
            if s.level_p > n:
                raise ModelError(f"stratum {s.component_id!r} is deeper than the fibre dimension")
            if s.complex_dim != n - s.level_p:
                raise ModelError(
                    f"stratum {s.component_id!r} at level {s.level_p} must have dimension {n - s.level_p}"
                )
            for m in s.members:
                if m not in known:
                    raise ModelError(f"stratum {s.component_id!r} refers to unknown component {m!r}")
        order = {cid: k for k, cid in enumerate(ids)}
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_faces", self._resolve_faces())
        maps = {}
        for key, m in dict(self.restriction_maps).items():
            p, q = key
            m = m if isinstance(m, Matrix) else Matrix(m)
            want = (self.e1_dim(p + 1, q), self.e1_dim(p, q))
            if m.shape != want:
                raise DimensionMismatchError(f"restriction map d1^({p},{q}) must be {want[0]}x{want[1]}")
            maps[(p, q)] = m
        object.__setattr__(self, "restriction_maps", maps)

    # ------------------------------------------------------------------
    def strata(self, p: int) -> list:
        """Level-``p`` strata in a fixed order."""
        if p == 0:
            return list(self.components)
        out = [s for s in self.incidence if s.level_p == p]
        return sorted(out, key=lambda s: (sorted(self._order[m] for m in s.members), s.component_id))

    @property
    def depth(self) -> int:
        return max([0] + [s.level_p for s in self.incidence])

    def sorted_members(self, s: Stratum) -> tuple:
        return tuple(sorted(s.members, key=self._order.__getitem__))

    def _resolve_faces(self) -> dict:
        """``{stratum id: [face stratum for each omitted index]}``."""
        by_id = {s.component_id: s for s in self.components + self.incidence}
        by_members: dict = {}
        for s in self.components + self.incidence:
            by_members.setdefault(frozenset(s.members), []).append(s)
        out = {}
        for s in self.incidence:
            mem = self.sorted_members(s)
            faces = []
            for alpha in range(len(mem)):
                sub = frozenset(mem[:alpha] + mem[alpha + 1:])
                cands = by_members.get(sub, [])
                if not cands:
                    raise ModelError(
                        f"incidence is not downward closed: stratum {s.component_id!r} lies in "
                        f"{sorted(sub)} but no such stratum is listed"
                    )
                if s.faces is not None:
                    named = [c for c in cands if c.component_id in s.faces]
                    if len(named) != 1:
                        raise ModelError(f"faces of {s.component_id!r} do not pick one stratum over {sorted(sub)}")
                    faces.append(named[0])
                elif len(cands) == 1:
                    faces.append(cands[0])
                else:
                    raise ModelError(
                        f"stratum {s.component_id!r}: several strata over {sorted(sub)}; list its faces"
                    )
            if s.faces is not None:
                for f in s.faces:
                    if f not in by_id:
                        raise ModelError(f"unknown face {f!r} of {s.component_id!r}")
            out[s.component_id] = faces
        return out

    def e1_dim(self, p: int, q: int) -> int:
        if p < 0 or q < 0:
            return 0
        return sum(s.betti(q) for s in self.strata(p))

    def row0_differential(self, p: int) -> Matrix:
        """Signed incidence ``d_1: E_1^{p,0} -> E_1^{p+1,0}``."""
        src = self.strata(p)
        tgt = self.strata(p + 1)
        index = {s.component_id: k for k, s in enumerate(src)}
        rows = []
        for t in tgt:
            row = [0] * len(src)
            for alpha, f in enumerate(self._faces[t.component_id]):
                row[index[f.component_id]] += (-1) ** alpha
            rows.append(row)
        return Matrix(rows, len(src))

    def differential(self, p: int, q: int) -> Matrix | None:
        """``d_1^{p,q}`` if it is known, else ``None``."""
        a, b = self.e1_dim(p, q), self.e1_dim(p + 1, q)
        if p < 0:
            return Matrix.zeros(a, 0)
        if q == 0:
            return self.row0_differential(p)
        if a == 0 or b == 0:
            return Matrix.zeros(b, a)
        return self.restriction_maps.get((p, q))

    def with_component(self, comp: Stratum) -> "CentralFibreModel":
        return CentralFibreModel(self.dim_n, self.components + (comp,), self.incidence, self.restriction_maps)


@dataclass(frozen=True)
class SpectralPage:
    """Dimensions of ``E_r^{p,q}``; ``None`` marks a term that needs missing data."""

    page_r: int
    dim_n: int
    terms: dict
    differentials: dict = field(default_factory=dict)
    row0: dict = field(default_factory=dict)

    def term(self, p: int, q: int) -> int | None:
        return self.terms.get((p, q), 0)

    @property
    def unavailable(self) -> list:
        return sorted(k for k, v in self.terms.items() if v is None)

    def graded_cohomology(self) -> dict:
        """``{m: {k: dim Gr_k H^m}}`` read from ``E_2^{m-k,k}`` (page 2 only)."""
        if self.page_r != 2:
            raise ValueError("graded pieces are read from E_2")
        out = {}
        for m in range(2 * self.dim_n + 1):
            out[m] = {k: self.terms.get((m - k, k), 0) for k in range(m + 1) if (m - k, k) in self.terms}
        return out

    def betti(self) -> tuple:
        """Total ``dim H^m(X_0)``; ``None`` where a graded piece is unknown."""
        out = []
        for m, parts in self.graded_cohomology().items():
            vals = list(parts.values())
            out.append(None if any(v is None for v in vals) else sum(vals))
        return tuple(out)


def e1_page(model: CentralFibreModel) -> SpectralPage:
    """``E_1^{p,q} = H^q(X^[p])`` with every differential that is known.

    Raises:
        ModelError: two supplied consecutive differentials do not compose to 0.
    """
    n = model.dim_n
    terms = {}
    diffs = {}
    for p in range(model.depth + 1):
        for q in range(2 * (n - p) + 1):
            terms[(p, q)] = model.e1_dim(p, q)
    for (p, q) in terms:
        diffs[(p, q)] = model.differential(p, q)
    for (p, q), d in diffs.items():
        nxt = diffs.get((p + 1, q))
        if d is not None and nxt is not None and d.ncols and nxt.nrows:
            if not (nxt @ d).is_zero():
                raise ModelError(f"d1 o d1 != 0 at E_1^{{{p},{q}}}")
    row0 = {}
    for p in range(model.depth + 1):
        d = diffs[(p, 0)]
        row0[p] = {"kernel": kernel(d), "image": image(d)}
    return SpectralPage(1, n, terms, diffs, row0)


def e2_page(e1: SpectralPage) -> SpectralPage:
    """``E_2 = ker d_1 / im d_1``; terms needing unknown maps become ``None``."""
    if e1.page_r != 1:
        raise ValueError("e2_page expects the E_1 page")
    terms = {}
    row0 = {}
    for (p, q), dim in e1.terms.items():
        out_map = e1.differentials.get((p, q))
        in_map = e1.differentials.get((p - 1, q)) if p > 0 else Matrix.zeros(dim, 0)
        if (p - 1, q) not in e1.terms and p > 0:
            in_map = Matrix.zeros(dim, 0)
        if out_map is None or in_map is None:
            terms[(p, q)] = None
            continue
        ker = dim - rank(out_map) if out_map.nrows and out_map.ncols else dim
        im = rank(in_map) if in_map.nrows and in_map.ncols else 0
        terms[(p, q)] = ker - im
        if q == 0:
            row0[p] = {"kernel": kernel(out_map) if dim else Subspace.zero(0),
                       "image": image(in_map) if in_map.ncols else Subspace.zero(dim)}
    return SpectralPage(2, e1.dim_n, terms, {}, row0)


def fn_grn_central(model: CentralFibreModel) -> int:
    """``dim F^n Gr_n H^n(X_0) = sum of h^{n,0}`` over the components.

    Deeper strata have dimension below ``n`` and carry no ``(n, 0)``-classes,
    so no differential is involved.
    """
    n = model.dim_n
    return sum(c.h(n, 0) for c in model.components)


def classify_central(model: CentralFibreModel) -> Classification:
    """Finite distance iff some component carries a holomorphic ``n``-form."""
    n = model.dim_n
    rank_fn = fn_grn_central(model)
    carriers = [c.component_id for c in model.components if c.h(n, 0) > 0]
    if rank_fn > 0:
        return Classification(Verdict.FINITE, {"fn_grn": rank_fn, "components": carriers}, "central_fibre")
    return Classification(
        Verdict.INFINITE, {"fn_grn": 0, "components": f"all components have h^{{{n},0}} = 0"}, "central_fibre"
    )


def dual_complex(model: CentralFibreModel) -> dict:
    """``{p: [member tuples]}`` for each level (one entry per connected stratum)."""
    return {p: [model.sorted_members(s) for s in model.strata(p)] for p in range(model.depth + 1)}


def build_model(dim_n: int, components: Iterable[tuple], strata: Sequence = (), maps=None) -> CentralFibreModel:
    """Convenience constructor from ``(id, hodge)`` and ``(id, members, hodge[, faces])`` tuples."""
    comps = [Stratum(0, cid, h) for cid, h in components]
    inc = []
    for entry in strata:
        sid, members, h = entry[:3]
        faces = entry[3] if len(entry) > 3 else None
        inc.append(Stratum(len(members) - 1, sid, h, tuple(members), faces))
    return CentralFibreModel(dim_n, tuple(comps), tuple(inc), maps or {})
