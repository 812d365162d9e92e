"""Built-in degenerations with known verdicts.

Each entry is a problem document.  Orbit data for the surface and threefold
cases is the smallest split polarized limit carrying the right ``N`` on the
transcendental part; the fibre data lists the components of the standard
semistable models.  Rational and elliptic ruled components have
``h^{2,0} = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .centralfibre import smooth_hodge
from .construct import Piece, assemble
from .documents import document, orbit_payload, parse_document
from .report import Verdict


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    expected_verdict: Verdict
    problem: dict  # a JSON problem document

    def parsed(self):
        return parse_document(self.problem)


def _grid(g) -> list:
    return [list(r) for r in g]


def _curve(genus: int) -> list:
    return [[1, genus], [genus, 1]]


def _simplex_fibre(n: int, prefix: str = "P") -> dict:
    """``n + 2`` copies of ``P^n`` meeting like the facets of a simplex."""
    ids = [f"{prefix}{i}" for i in range(n + 2)]
    comps = [{"id": c, "hodge": _grid(smooth_hodge(n))} for c in ids]
    strata = []
    for size in range(2, n + 2):
        for sub in combinations(ids, size):
            strata.append({"id": "-".join(sub), "components": list(sub), "hodge": _grid(smooth_hodge(n + 1 - size))})
    return {"components": comps, "strata": strata}


def _elliptic(k: int = 3) -> dict:
    orbit = {
        "T": [[1, k], [0, 1]],
        "Q": [[0, -1], [1, 0]],
        "alpha": [{"re": 0, "im": 1}, 1],
        "F": {"1": [[{"re": 0, "im": 1}, 1]]},
    }
    ids = [f"C{i}" for i in range(k)]
    fibre = {
        "components": [{"id": c, "hodge": _curve(0)} for c in ids],
        "strata": [
            {"id": f"x{i}", "components": [ids[i], ids[(i + 1) % k]], "hodge": [[1]]} for i in range(k)
        ],
    }
    return document("paired", 1, {
        "description": f"I_{k}: cycle of {k} rational curves, T = [[1,{k}],[0,1]]",
        "orbit": orbit,
        "fibre": fibre,
    })


def _kulikov_I() -> dict:
    orbit = {
        "N": [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
        "Q": [[-1, 0, 0], [0, -1, 0], [0, 0, 1]],
        "alpha": [1, {"re": 0, "im": 1}, 0],
        "F": {"1": [[1, {"re": 0, "im": 1}, 0], [0, 0, 1]], "2": [[1, {"re": 0, "im": 1}, 0]]},
    }
    k3 = [[1, 0, 1], [0, 20, 0], [1, 0, 1]]
    return document("paired", 2, {
        "description": "type I: smooth K3 central fibre, trivial monodromy",
        "orbit": orbit,
        "fibre": {"components": [{"id": "X", "hodge": k3}]},
    })


def _orbit_doc(n: int, pieces) -> dict:
    return orbit_payload(assemble(n, pieces).problem())


def _kulikov_II() -> dict:
    rational = [[1, 0, 0], [0, 10, 0], [0, 0, 1]]
    ruled = [[1, 1, 0], [1, 2, 1], [0, 1, 1]]
    fibre = {
        "components": [
            {"id": "V0", "hodge": rational},
            {"id": "V1", "hodge": ruled},
            {"id": "V2", "hodge": rational},
        ],
        "strata": [
            {"id": "E01", "components": ["V0", "V1"], "hodge": _curve(1)},
            {"id": "E12", "components": ["V1", "V2"], "hodge": _curve(1)},
        ],
    }
    return document("paired", 2, {
        "description": "type II: chain rational - elliptic ruled - rational, elliptic double curves",
        "orbit": _orbit_doc(2, [Piece(2, 1, 1)]),
        "fibre": fibre,
    })


def _kulikov_III() -> dict:
    return document("paired", 2, {
        "description": "type III: four planes meeting like a tetrahedron, dual complex a 2-sphere",
        "orbit": _orbit_doc(2, [Piece(2, 2, 2)]),
        "fibre": _simplex_fibre(2),
    })


def _nodal(n: int, m: int) -> dict:
    return document("nodal", n, {"description": f"{m} simple nodes on the special fibre, n = {n}", "nodes": m})


def _nodal_paired() -> dict:
    return document("paired", 3, {
        "description": "conifold: one vanishing cycle, alpha of weight 3",
        "orbit": _orbit_doc(3, [Piece(3, 0, 0), Piece(2, 2, 1)]),
        "nodal": {"nodes": 1},
    })


def _mum() -> dict:
    return document("paired", 3, {
        "description": "maximal unipotent monodromy: quintic degenerating to five hyperplanes",
        "orbit": _orbit_doc(3, [Piece(3, 3, 3)]),
        "fibre": _simplex_fibre(3, "H"),
    })


@lru_cache(maxsize=None)
def entries() -> tuple[CatalogEntry, ...]:
    F, Inf = Verdict.FINITE, Verdict.INFINITE
    raw = [
        ("elliptic_Ik", "elliptic curve acquiring an I_k fibre", Inf, _elliptic(3)),
        ("kulikov_I", "Kulikov type I degeneration of K3 surfaces", F, _kulikov_I()),
        ("kulikov_II", "Kulikov type II degeneration of K3 surfaces", Inf, _kulikov_II()),
        ("kulikov_III", "Kulikov type III degeneration of K3 surfaces", Inf, _kulikov_III()),
        ("nodal_n3", "threefold fibre with one simple node", F, _nodal(3, 1)),
        ("nodal_n5", "fivefold fibre with sixteen simple nodes", F, _nodal(5, 16)),
        ("nodal_n3_paired", "conifold limit paired with its blown-up fibre", F, _nodal_paired()),
        ("mum_weight3", "large complex structure limit of quintic threefolds", Inf, _mum()),
    ]
    return tuple(CatalogEntry(*r) for r in raw)


def get(name: str) -> CatalogEntry:
    for e in entries():
        if e.name == name:
            return e
    raise KeyError(f"no catalog entry {name!r}; known: {', '.join(e.name for e in entries())}")
