"""Pairwise deleted r-fold products of simplicial complexes.

Cells are ordered r-tuples of nonempty, pairwise disjoint faces; a cell's
dimension is the sum of the face dimensions.  Simplices are oriented by
ascending vertex order and product cells get the graded Leibniz sign, so
boundary matrices are reproducible.  Homology is computed over the integers
with a Smith normal form.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations

from .exact_linalg import InputError

Simplex = tuple[int, ...]
Cell = tuple[Simplex, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    """Abstract simplicial complex given by its facets."""

    vertex_count: int
    facets: tuple[frozenset[int], ...]

    def __post_init__(self):
        facets = tuple(frozenset(f) for f in self.facets)
        for f in facets:
            if not f or any(not 0 <= v < self.vertex_count for v in f):
                raise InputError(f"facet {sorted(f)} is empty or uses unknown vertices")
        for a, b in combinations(facets, 2):
            if a <= b or b <= a:
                raise InputError(f"facets {sorted(a)} and {sorted(b)} are not inclusion-incomparable")
        object.__setattr__(self, "facets", facets)

    @classmethod
    def simplex(cls, N: int) -> "SimplicialComplex":
        return cls(N + 1, (frozenset(range(N + 1)),))

    @classmethod
    def simplex_skeleton(cls, N: int, m: int) -> "SimplicialComplex":
        """The m-skeleton of the N-simplex."""
        m = min(m, N)
        return cls(N + 1, tuple(frozenset(c) for c in combinations(range(N + 1), m + 1)))

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        try:
            return cls(int(data["vertices"]), tuple(frozenset(int(v) for v in f) for f in data["facets"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed complex JSON: {exc}") from exc

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "facets": sorted(sorted(f) for f in self.facets)}

    def is_face(self, s) -> bool:
        s = frozenset(s)
        return any(s <= f for f in self.facets)

    @cached_property
    def faces(self) -> tuple[Simplex, ...]:
        """All nonempty faces, sorted by (dimension, vertices)."""
        out = set()
        for f in self.facets:
            verts = sorted(f)
            for size in range(1, len(verts) + 1):
                out.update(combinations(verts, size))
        return tuple(sorted(out, key=lambda s: (len(s), s)))

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.facets) - 1


@dataclass(frozen=True)
class CellComplex:
    r: int
    cells: tuple[tuple[Cell, ...], ...]  # cells[n] = n-cells in a fixed order

    @cached_property
    def index(self) -> list[dict[Cell, int]]:
        return [{c: i for i, c in enumerate(cs)} for cs in self.cells]

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(cs) for cs in self.cells)

    def boundary(self, cell: Cell) -> dict[Cell, int]:
        """Signed boundary of one cell (graded Leibniz rule)."""
        out: dict[Cell, int] = defaultdict(int)
        shift = 0
        for i, s in enumerate(cell):
            if len(s) > 1:
                for t in range(len(s)):
                    face = s[:t] + s[t + 1:]
                    out[cell[:i] + (face,) + cell[i + 1:]] += (-1) ** (shift + t)
            shift += len(s) - 1
        return {c: v for c, v in out.items() if v}

    def boundary_matrix(self, n: int) -> list[list[int]]:
        """Matrix of the boundary map from n-cells (columns) to (n-1)-cells (rows)."""
        if n <= 0 or n >= len(self.cells):
            rows = len(self.cells[n - 1]) if 0 < n <= len(self.cells) else 0
            cols = len(self.cells[n]) if 0 <= n < len(self.cells) else 0
            return [[0] * cols for _ in range(rows)]
        idx = self.index[n - 1]
        M = [[0] * len(self.cells[n]) for _ in range(len(self.cells[n - 1]))]
        for j, cell in enumerate(self.cells[n]):
            for face, sign in self.boundary(cell).items():
                M[idx[face]][j] = sign
        return M

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * c for n, c in enumerate(self.f_vector()))


def deleted_product(K: SimplicialComplex, r: int) -> CellComplex:
    if r < 2:
        raise InputError(f"deleted product needs r >= 2, got {r}")
    faces = K.faces
    graded: dict[int, list[Cell]] = defaultdict(list)

    def rec(prefix: list[Simplex], used: frozenset[int]):
        if len(prefix) == r:
            cell = tuple(prefix)
            graded[sum(len(s) - 1 for s in cell)].append(cell)
            return
        for s in faces:
            if used.isdisjoint(s):
                prefix.append(s)
                rec(prefix, used | frozenset(s))
                prefix.pop()

    rec([], frozenset())
    top = max(graded) if graded else -1
    cells = tuple(tuple(sorted(graded[n])) for n in range(top + 1))
    return CellComplex(r, cells)


def complex_dim(C: CellComplex) -> int:
    """Largest cell dimension (-1 for the empty complex)."""
    return max((n for n, cs in enumerate(C.cells) if cs), default=-1)


# ---------------------------------------------------------------------------
# Smith normal form


def smith_diagonal(M: list[list[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix.

    Entries equal to +-1 are eliminated first on a sparse copy (each one
    contributes a factor 1); the remainder goes through dense reduction.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = defaultdict(set)
    for i, row in enumerate(M):
        entries = {j: v for j, v in enumerate(row) if v}
        if entries:
            rows[i] = entries
            for j in entries:
                cols[j].add(i)
    units = 0
    while True:
        best = None
        for i, row in rows.items():
            if best is not None and len(row) >= best[0]:
                continue
            j = next((c for c, v in row.items() if v in (1, -1)), None)
            if j is not None:
                best = (len(row), i, j)
                if len(row) == 1:
                    break
        if best is None:
            break
        _, i, j = best
        prow = rows.pop(i)
        p = prow[j]
        for c in prow:
            cols[c].discard(i)
        for k in list(cols[j]):
            row = rows[k]
            f = row[j] * p  # p is +-1, so row[j] / p == row[j] * p
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    if c not in row:
                        cols[c].add(k)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    cols[c].discard(k)
            if not row:
                del rows[k]
        del cols[j]
        units += 1
    if not rows:
        return [1] * units
    col_ids = sorted({c for row in rows.values() for c in row})
    pos = {c: n for n, c in enumerate(col_ids)}
    dense = []
    for row in rows.values():
        line = [0] * len(col_ids)
        for c, v in row.items():
            line[pos[c]] = v
        dense.append(line)
    return [1] * units + sorted(_dense_smith(dense))


def _dense_smith(A: list[list[int]]) -> list[int]:
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = A[t][t]
            changed = False
            for i in range(t + 1, rows):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    A[t], A[i] = A[i], A[t]
                    changed = True
                    break
            if changed:
                continue
            for j in range(t + 1, cols):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    for row in A:
                        row[t], row[j] = row[j], row[t]
                    changed = True
                    break
            if changed:
                continue
            # row and column t are clear; enforce divisibility on the rest
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = ["Z"] * self.betti + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def homology(C: CellComplex) -> list[HomologyGroup]:
    """Integral homology H_0..H_dim of the cellular chain complex."""
    top = complex_dim(C)
    diags = [[]] + [smith_diagonal(C.boundary_matrix(n)) for n in range(1, top + 1)] + [[]]
    out = []
    for n in range(top + 1):
        rank_out = len(diags[n])  # rank of the boundary leaving C_n
        rank_in = diags[n + 1]
        betti = len(C.cells[n]) - rank_out - len(rank_in)
        out.append(HomologyGroup(betti, tuple(d for d in rank_in if d > 1)))
    return out


# ---------------------------------------------------------------------------
# symmetric group action


@dataclass(frozen=True)
class SymActionReport:
    is_free: bool
    orbit_counts: tuple[int, ...]
    fixed_examples: tuple[tuple[Cell, tuple[int, ...]], ...] = ()


def sym_action_check(C: CellComplex, r: int | None = None) -> SymActionReport:
    """Check that permuting tuple components fixes no cell, and count orbits."""
    r = C.r if r is None else r
    perms = [p for p in permutations(range(r)) if p != tuple(range(r))]
    fixed = []
    counts = []
    for cs in C.cells:
        seen: set[Cell] = set()
        orbits = 0
        for cell in cs:
            if len(cell) != r:
                raise InputError(f"cell {cell} is not an {r}-tuple")
            for p in perms:
                if tuple(cell[i] for i in p) == cell:
                    fixed.append((cell, p))
            if cell not in seen:
                orbits += 1
                seen.update(tuple(cell[i] for i in p) for p in permutations(range(r)))
        counts.append(orbits)
    return SymActionReport(not fixed, tuple(counts), tuple(fixed[:5]))


def report(K: SimplicialComplex, r: int) -> dict:
    C = deleted_product(K, r)
    H = homology(C)
    sym = sym_action_check(C, r)
    return {
        "r": r,
        "f_vector": list(C.f_vector()),
        "dimension": complex_dim(C),
        "betti": [h.betti for h in H],
        "torsion": [list(h.torsion) for h in H],
        "euler_characteristic": C.euler_characteristic(),
        "sym_free": sym.is_free,
        "orbit_counts": list(sym.orbit_counts),
    }
