"""Integer Gram matrices of line configurations and their span invariants.

Lines on a smooth quartic (a K3 surface) are (-2)-classes meeting pairwise
in 0 or 1 points, so an intersection graph determines an integer Gram
matrix.  The classes may be dependent; the span discriminant is the
determinant of a Gram basis of the abstract lattice they generate,
corrected by the squared index of the chosen basis sublattice.  All
arithmetic is exact (integers and fractions); no floating point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import InconsistencyError, UsageError
from .geometry import IntersectionGraph


Matrix = List[List[Fraction]]


def _rank(mat: Matrix) -> int:
    """Rank over the rationals by Gaussian elimination."""
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0]) if m else 0
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(rows):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def _det(mat: Matrix) -> Fraction:
    """Determinant over the rationals by elimination with pivoting."""
    m = [row[:] for row in mat]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def _solve(mat: Matrix, rhs: List[Fraction]) -> List[Fraction]:
    """Solve a nonsingular square system exactly."""
    n = len(mat)
    m = [mat[r][:] + [rhs[r]] for r in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:  # pragma: no cover - caller guarantees nonsingular
            raise InconsistencyError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _hnf_determinant(rows: List[List[int]], r: int) -> int:
    """Absolute determinant of the full-rank integer lattice generated by
    the given vectors in Z^r (product of the Hermite-form pivots)."""
    work = [row[:] for row in rows if any(row)]
    det = 1
    for col in range(r):
        idx = [i for i in range(len(work)) if work[i][col]]
        if not idx:  # pragma: no cover - caller guarantees full rank
            raise InconsistencyError("integer lattice not of full rank")
        # euclidean reduction within the column
        while len(idx) > 1:
            idx.sort(key=lambda i: abs(work[i][col]))
            base = work[idx[0]]
            for i in idx[1:]:
                q = work[i][col] // base[col]
                work[i] = [a - q * b for a, b in zip(work[i], base)]
            idx = [i for i in idx if work[i][col]]
        pivot_row = work[idx[0]]
        det *= abs(pivot_row[col])
        work = [work[i] for i in range(len(work))
                if i != idx[0] and any(work[i])]
    return det


@dataclass
class GramLattice:
    """n generators with a symmetric integer pairing matrix."""
    gram: Tuple[Tuple[int, ...], ...]
    _rank_cache: Optional[int] = field(default=None, repr=False)
    _disc_cache: Optional[Tuple[int, int, Tuple[int, ...]]] = field(
        default=None, repr=False)

    def __post_init__(self):
        n = len(self.gram)
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        if any(len(row) != n for row in g):
            raise UsageError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise UsageError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)
        if n > 22 and self.rank() > 22:
            raise InconsistencyError(
                "rank exceeds 22, impossible inside the K3 Picard lattice")

    @property
    def n(self) -> int:
        return len(self.gram)

    def _fractions(self) -> Matrix:
        return [[Fraction(x) for x in row] for row in self.gram]

    def rank(self) -> int:
        if self._rank_cache is None:
            object.__setattr__(self, "_rank_cache", _rank(self._fractions()))
        return self._rank_cache

    def _span_data(self, subset: Optional[Sequence[int]] = None
                   ) -> Tuple[int, int, Tuple[int, ...]]:
        r = self.rank()
        if r == 0:
            return 0, 1, ()
        g = self._fractions()
        basis = self._find_basis(subset)
        sub = [[g[i][j] for j in basis] for i in basis]
        d0 = _det(sub)
        if d0 == 0:  # pragma: no cover - _find_basis guarantees nonsingular
            raise InconsistencyError("singular basis Gram")
        # coordinates of every generator in the chosen basis: solve
        # G[basis, basis] * c = G[basis, gen]
        coords: List[List[Fraction]] = []
        for gen in range(self.n):
            rhs = [g[i][gen] for i in basis]
            c = _solve(sub, rhs)
            # consistency: the generator must actually lie in the span
            for other in range(self.n):
                lhs = sum(ci * g[bi][other] for ci, bi in zip(c, basis))
                if lhs != g[gen][other]:
                    raise InconsistencyError(
                        "generator outside the span of the chosen basis; "
                        "rank computation inconsistent")
            coords.append(c)
        denom = 1
        for row in coords:
            for x in row:
                denom = denom * x.denominator // _gcd(denom, x.denominator)
        scaled = [[int(x * denom) for x in row] for row in coords]
        lattice_det = _hnf_determinant(scaled, r)
        index, rem = divmod(denom ** r, lattice_det)
        if rem:  # pragma: no cover - basis rows give index | denom^r
            raise InconsistencyError("index is not integral")
        disc_num, disc_rem = divmod(int(d0), index * index)
        if disc_rem:
            raise InconsistencyError("discriminant not divisible by index^2")
        return disc_num, index, tuple(basis)

    def _find_basis(self, subset: Optional[Sequence[int]] = None
                    ) -> List[int]:
        """Greedy r-subset of generators with nonsingular Gram, optionally
        seeded with a caller-chosen preference order."""
        r = self.rank()
        g = self._fractions()
        order = list(subset) if subset is not None else []
        order += [i for i in range(self.n) if i not in set(order)]
        # generators whose Gram rows are linearly independent: for a
        # symmetric matrix the principal submatrix on such an index set is
        # automatically nonsingular once the set reaches full rank
        basis: List[int] = []
        echelon: List[List[Fraction]] = []
        for i in order:
            row = g[i][:]
            for piv in echelon:
                lead = next(c for c in range(self.n) if piv[c])
                if row[lead]:
                    f = row[lead] / piv[lead]
                    row = [a - f * b for a, b in zip(row, piv)]
            if any(row):
                basis.append(i)
                echelon.append(row)
                if len(basis) == r:
                    sub = [[g[a][b] for b in basis] for a in basis]
                    if _rank(sub) != r:  # pragma: no cover - see above
                        raise InconsistencyError(
                            "independent rows gave a singular principal "
                            "submatrix")
                    return basis
        raise InconsistencyError(
            "no nonsingular generator subset of the computed rank")

    def span_discriminant(self, subset: Optional[Sequence[int]] = None
                          ) -> int:
        """Discriminant of the abstract lattice the generators span."""
        if subset is not None:
            return self._span_data(subset)[0]
        if self._disc_cache is None:
            object.__setattr__(self, "_disc_cache", self._span_data())
        return self._disc_cache[0]

    def span_index(self) -> int:
        """Index of the chosen basis sublattice inside the full span."""
        self.span_discriminant()
        return self._disc_cache[1]

    def basis_ids(self) -> Tuple[int, ...]:
        """Generator indices of the chosen nonsingular basis."""
        self.span_discriminant()
        return self._disc_cache[2]

    def random_subset_check(self, trials: int = 5, seed: int = 0) -> bool:
        """The discriminant must not depend on the basis choice."""
        ref = self.span_discriminant()
        rng = random.Random(seed)
        order = list(range(self.n))
        for _ in range(trials):
            rng.shuffle(order)
            if self.span_discriminant(order) != ref:
                raise InconsistencyError(
                    "span discriminant depends on the basis choice")
        return True

    def hyperbolicity_sign_check(self) -> bool:
        """For a spanning set inside the K3 Picard lattice the signature is
        (1, r-1), so the discriminant sign must be (-1)^(r-1)."""
        r = self.rank()
        if r < 2:
            return True
        disc = self.span_discriminant()
        expected = 1 if (r - 1) % 2 == 0 else -1
        if (1 if disc > 0 else -1) != expected:
            raise InconsistencyError(
                f"discriminant sign {disc} incompatible with signature "
                f"(1, {r - 1})")
        return True

    def to_json(self) -> dict:
        return {"generators": self.n, "rank": self.rank(),
                "discriminant": self.span_discriminant(),
                "index": self.span_index(),
                "basis-line-ids": list(self.basis_ids())}


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def gram_from_graph(graph: IntersectionGraph) -> GramLattice:
    """Diagonal -2 (K3 adjunction for a line), off-diagonal 0/1 adjacency."""
    n = len(graph)
    gram = tuple(tuple(-2 if i == j else int(graph.adj[i][j])
                       for j in range(n)) for i in range(n))
    return GramLattice(gram)
