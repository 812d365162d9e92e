"""Monodromy logarithm, weight filtration and Lefschetz decomposition."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DimensionMismatchError, InternalConsistencyError, NotSemistableError
from .exactla import Matrix, Subspace, image, intersect, kernel, quotient_section, rank


def exp_nilpotent(N: Matrix) -> Matrix:
    """``exp(N)`` for nilpotent ``N``; the series terminates."""
    d = N.nrows
    out = Matrix.identity(d)
    term = Matrix.identity(d)
    for k in range(1, d + 1):
        term = (term @ N).scale(Fraction(1, k))
        if term.is_zero():
            break
        out = out + term
    else:
        if not (term @ N).is_zero():
            raise ValueError("matrix is not nilpotent")
    return out


def nilpotency_index(N: Matrix) -> int:
    """Smallest ``k`` with ``N^k = 0``."""
    P = Matrix.identity(N.nrows)
    for k in range(N.nrows + 1):
        if P.is_zero():
            return k
        P = P @ N
    raise ValueError("matrix is not nilpotent")


@dataclass(frozen=True)
class MonodromyOperator:
    weight_n: int
    T: Matrix
    N: Matrix

    def __post_init__(self):
        if self.weight_n < 0:
            raise ValueError("weight must be non-negative")
        if not self.N.is_square() or self.N.shape != self.T.shape:
            raise DimensionMismatchError("T and N must be square of equal size")
        if not self.N.is_real():
            raise ValueError("N must be rational")
        if not (self.N ** (self.weight_n + 1)).is_zero():
            raise NotSemistableError(
                f"N^{self.weight_n + 1} != 0; the monodromy index exceeds the weight"
            )

    @property
    def dim(self) -> int:
        return self.N.nrows

    @classmethod
    def from_log(cls, N: Matrix, weight_n: int) -> "MonodromyOperator":
        """Build the operator from a rational nilpotent logarithm."""
        return cls(weight_n, exp_nilpotent(N), N)

    def power(self, k: int) -> Matrix:
        return self.N ** k


def _quasi_unipotent_order(T: Matrix, weight_n: int, max_order: int = 12) -> int | None:
    ident = Matrix.identity(T.nrows)
    P = ident
    for k in range(1, max_order + 1):
        P = P @ T
        if ((P - ident) ** (weight_n + 1)).is_zero():
            return k
    return None


def log_unipotent(T: Matrix, weight_n: int) -> MonodromyOperator:
    """``N = log T`` as the terminating alternating series in ``T - I``.

    Raises:
        NotSemistableError: ``(T - I)^(n+1) != 0``.  Quasi-unipotent input
            needs a base change first, which is not done here.
    """
    if not T.is_square():
        raise DimensionMismatchError("monodromy matrix must be square")
    if not T.is_integral():
        raise ValueError("monodromy matrix must have integer entries")
    d = T.nrows
    U = T - Matrix.identity(d)
    if not (U ** (weight_n + 1)).is_zero():
        k = _quasi_unipotent_order(T, weight_n)
        if k is not None and k > 1:
            raise NotSemistableError(
                f"T is quasi-unipotent but not unipotent ((T^{k} - I)^{weight_n + 1} = 0); "
                f"perform a base change of order {k} to reach a semistable model first"
            )
        raise NotSemistableError(
            f"(T - I)^{weight_n + 1} != 0: T is not unipotent of index <= {weight_n}; "
            "the degeneration is not semistable (base change is not performed here)"
        )
    N = Matrix.zeros(d, d)
    P = Matrix.identity(d)
    for k in range(1, weight_n + 1):
        P = P @ U
        if P.is_zero():
            break
        sign = 1 if k % 2 else -1
        N = N + P.scale(Fraction(sign, k))
    if exp_nilpotent(N) != T:
        raise InternalConsistencyError("exp(log T) != T")
    return MonodromyOperator(weight_n, T, N)


@dataclass(frozen=True)
class WeightFiltration:
    """Ascending filtration ``W_0 <= ... <= W_2n`` of Q^d."""

    weight_n: int
    W: tuple[Subspace, ...]
    _graded_cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def dim(self) -> int:
        return self.W[-1].ambient_dim

    def __getitem__(self, l: int) -> Subspace:
        if l < 0:
            return Subspace.zero(self.dim)
        if l >= len(self.W):
            return self.W[-1]
        return self.W[l]

    def graded_rank(self, l: int) -> int:
        return self[l].dim - self[l - 1].dim

    @property
    def graded_ranks(self) -> tuple[int, ...]:
        return tuple(self.graded_rank(l) for l in range(2 * self.weight_n + 1))

    def graded(self, l: int) -> tuple[Matrix, Matrix]:
        """``(proj, lift)`` for ``Gr_l = W_l / W_{l-1}``."""
        if l not in self._graded_cache:
            self._graded_cache[l] = quotient_section(self[l], self[l - 1])
        return self._graded_cache[l]

    def position(self, v) -> int | None:
        """Smallest ``l`` with ``v`` in ``W_l`` (complexified); ``None`` for ``v = 0``."""
        if all(x == 0 for x in v):
            return None
        for l in range(2 * self.weight_n + 1):
            if self[l].contains(v):
                return l
        raise InternalConsistencyError("vector lies outside W_2n")

    def induced_map(self, M: Matrix, source: int, target: int) -> Matrix:
        """Matrix of ``Gr_source -> Gr_target`` induced by ``M``."""
        _, lift = self.graded(source)
        proj, _ = self.graded(target)
        if lift.ncols == 0 or proj.nrows == 0:
            return Matrix.zeros(proj.nrows, lift.ncols)
        return proj @ M @ lift


def weight_filtration_defects(W: WeightFiltration, N: Matrix) -> list[str]:
    """Defining properties of the monodromy filtration that ``W`` violates."""
    n = W.weight_n
    d = N.nrows
    problems = []
    if W[2 * n] != Subspace.full(d):
        problems.append(f"W_{2 * n} is not the whole space")
    for l in range(1, 2 * n + 1):
        if not W[l - 1].issubspace(W[l]):
            problems.append(f"W_{l - 1} is not contained in W_{l}")
    for l in range(2 * n + 1):
        if not W[l].image_under(N).issubspace(W[l - 2]):
            problems.append(f"N W_{l} is not contained in W_{l - 2}")
    if problems:
        return problems
    for k in range(1, n + 1):
        hi, lo = W.graded_rank(n + k), W.graded_rank(n - k)
        if hi != lo:
            problems.append(f"rank Gr_{n + k} = {hi} but rank Gr_{n - k} = {lo}")
            continue
        if hi == 0:
            continue
        M = W.induced_map(N ** k, n + k, n - k)
        if rank(M) != hi:
            problems.append(f"N^{k}: Gr_{n + k} -> Gr_{n - k} is not an isomorphism")
    return problems


def weight_filtration(op: MonodromyOperator) -> WeightFiltration:
    """The monodromy weight filtration ``W(N)`` centred at ``op.weight_n``.

    Built as ``W_{n+k} = sum_{j >= max(0,-k)} ker N^(k+j+1) & im N^j`` and then
    checked against both defining properties before it is returned.
    """
    N = op.N
    n = op.weight_n
    d = op.dim
    powers = [Matrix.identity(d)]
    for _ in range(n + 1):
        powers.append(powers[-1] @ N)
    kers = [kernel(P) for P in powers]
    ims = [image(P) for P in powers]
    levels = []
    for k in range(-n, n + 1):
        acc = Subspace.zero(d)
        for j in range(max(0, -k), n + 1):
            if ims[j].dim == 0:
                break
            piece = intersect(kers[min(k + j + 1, n + 1)], ims[j])
            acc = acc + piece
        levels.append(acc)
    wf = WeightFiltration(n, tuple(levels))
    defects = weight_filtration_defects(wf, N)
    if defects:
        raise InternalConsistencyError("weight filtration failed self-check: " + "; ".join(defects))
    return wf


@dataclass(frozen=True)
class LefschetzDecomposition:
    """Primitive pieces ``P_l`` as subspaces of the graded coordinates of ``Gr_l``."""

    weight_n: int
    primitive: dict
    graded_ranks: tuple[int, ...]

    def primitive_rank(self, l: int) -> int:
        p = self.primitive.get(l)
        return 0 if p is None else p.dim


def lefschetz_decomposition(wf: WeightFiltration, op: MonodromyOperator) -> LefschetzDecomposition:
    """Compute ``P_{n+j} = ker N^(j+1): Gr_{n+j} -> Gr_{n-j-2}`` and verify
    ``Gr_l = sum_j N^j P_{l+2j}`` dimension-wise."""
    n = op.weight_n
    N = op.N
    primitive = {}
    for l in range(2 * n + 1):
        g = wf.graded_rank(l)
        if l < n:
            primitive[l] = Subspace.zero(g)
            continue
        j = l - n
        target = n - j - 2
        if target < 0 or wf.graded_rank(target) == 0:
            primitive[l] = Subspace.full(g)
        else:
            primitive[l] = kernel(wf.induced_map(N ** (j + 1), l, target))

    for l in range(2 * n + 1):
        g = wf.graded_rank(l)
        total = Subspace.zero(g)
        expected = 0
        for j in range((max(n, l) - l + 1) // 2, n + 1):
            src = l + 2 * j
            if src > 2 * n:
                break
            if j > src - n:
                continue
            P = primitive[src]
            if P.dim == 0:
                continue
            M = wf.induced_map(N ** j, src, l)
            piece = Subspace(g, [M.apply(v) for v in P.vectors])
            if piece.dim != P.dim:
                raise InternalConsistencyError(f"N^{j} is not injective on P_{src}")
            expected += piece.dim
            total = total + piece
        if expected != g or total.dim != g:
            raise InternalConsistencyError(f"Lefschetz decomposition of Gr_{l} does not add up")
    return LefschetzDecomposition(n, primitive, wf.graded_ranks)
