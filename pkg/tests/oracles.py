"""Slow, independent reference implementations used only by the tests.

None of these share code with the package: Fourier-Motzkin elimination for
linear feasibility, exhaustive family enumeration for Tverberg problems,
exhaustive face multisets for barycenters, determinantal divisors for Smith
normal forms and trial division for prime powers.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations
from math import gcd


def fm_feasible(A, b, nonneg=None) -> bool:
    """Is {A x = b, x_i >= 0 for i in nonneg} feasible?  (nonneg=None: all.)"""
    n = len(A[0]) if A else 0
    nonneg = set(range(n)) if nonneg is None else set(nonneg)
    eqs = [([Fraction(v) for v in row], Fraction(r)) for row, r in zip(A, b)]
    ineqs = []  # a.x <= c
    for i in sorted(nonneg):
        a = [Fraction(0)] * n
        a[i] = Fraction(-1)
        ineqs.append((a, Fraction(0)))
    for j in range(n):
        piv = next((e for e in eqs if e[0][j] != 0), None)
        if piv is not None:
            eqs.remove(piv)
            pa, pc = piv

            def sub(row):
                a, c = row
                f = a[j] / pa[j]
                if f == 0:
                    return row
                return [x - f * y for x, y in zip(a, pa)], c - f * pc

            eqs = [sub(e) for e in eqs]
            ineqs = [sub(e) for e in ineqs]
            continue
        pos = [e for e in ineqs if e[0][j] > 0]
        neg = [e for e in ineqs if e[0][j] < 0]
        rest = [e for e in ineqs if e[0][j] == 0]
        for pa, pc in pos:
            for na, nc in neg:
                s, t = -na[j], pa[j]
                rest.append(([s * x + t * y for x, y in zip(pa, na)], s * pc + t * nc))
        ineqs = _dedup(rest)
    return all(c == 0 for _, c in eqs) and all(c >= 0 for _, c in ineqs)


def _dedup(rows):
    seen = {}
    for a, c in rows:
        scale = max((abs(x) for x in a), default=Fraction(0))
        if scale == 0:
            key = (tuple(a), c >= 0)
            seen.setdefault(key, (a, Fraction(0) if c >= 0 else Fraction(-1)))
            continue
        key = (tuple(x / scale for x in a),)
        c = c / scale
        a = [x / scale for x in a]
        if key not in seen or seen[key][1] > c:
            seen[key] = (a, c)
    return list(seen.values())


def hulls_meet(points, faces) -> bool:
    """Do the convex hulls of the given vertex sets share a point?  (FM)"""
    d = len(points[0])
    cols = [(b, v) for b, f in enumerate(faces) for v in f]
    A, rhs = [], []
    for b in range(len(faces)):
        A.append([1 if cb == b else 0 for cb, _ in cols])
        rhs.append(1)
    for b in range(1, len(faces)):
        for c in range(d):
            A.append([
                points[v][c] if cb == b else (-points[v][c] if cb == 0 else 0) for cb, v in cols
            ])
            rhs.append(0)
    return fm_feasible(A, rhs)


def disjoint_families(n, r, allowed=lambda face: True):
    """All unordered families of r pairwise disjoint nonempty subsets of range(n)."""
    subsets = [frozenset(c) for size in range(1, n + 1) for c in combinations(range(n), size)]
    subsets = [s for s in subsets if allowed(s)]

    def rec(start, used, fam):
        if len(fam) == r:
            yield list(fam)
            return
        for i in range(start, len(subsets)):
            s = subsets[i]
            if used.isdisjoint(s):
                fam.append(s)
                yield from rec(i + 1, used | s, fam)
                fam.pop()

    yield from rec(0, frozenset(), [])


def brute_tverberg(points, r, max_size=None, colors=None) -> bool:
    def allowed(s):
        if max_size is not None and len(s) > max_size:
            return False
        if colors is not None and len({colors[v] for v in s}) != len(s):
            return False
        return True

    return any(hulls_meet(points, [sorted(f) for f in fam]) for fam in disjoint_families(len(points), r, allowed))


def brute_barycenter(vertices, faces, p, r) -> bool:
    """Is r*p a sum of r points, one from each face of some multiset of ``faces``?"""
    d = len(p)
    for combo in combinations_with_replacement(range(len(faces)), r):
        cols = [(b, v) for b, fi in enumerate(combo) for v in faces[fi]]
        A, rhs = [], []
        for b in range(r):
            A.append([1 if cb == b else 0 for cb, _ in cols])
            rhs.append(1)
        for c in range(d):
            A.append([vertices[v][c] for _, v in cols])
            rhs.append(r * p[c])
        if fm_feasible(A, rhs):
            return True
    return False


def det(M) -> Fraction:
    M = [[Fraction(x) for x in row] for row in M]
    n = len(M)
    out = Fraction(1)
    for i in range(n):
        piv = next((j for j in range(i, n) if M[j][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            M[i], M[piv] = M[piv], M[i]
            out = -out
        out *= M[i][i]
        for j in range(i + 1, n):
            f = M[j][i] / M[i][i]
            M[j] = [a - f * b for a, b in zip(M[j], M[i])]
    return out


def invariant_factors(M) -> list[int]:
    """Smith invariants from determinantal divisors: d_k = D_k / D_{k-1}."""
    rows, cols = len(M), len(M[0]) if M else 0
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, int(det([[M[i][j] for j in cs] for i in rs])))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def is_prime_power_naive(n: int) -> bool:
    primes = [p for p in range(2, n + 1) if all(p % q for q in range(2, p))]
    return any(p ** e == n for p in primes for e in range(1, n.bit_length() + 1))


def free_orbits(cells, r):
    """Orbit count of the coordinate-permuting action, by explicit orbits."""
    seen, count = set(), 0
    for c in cells:
        if c not in seen:
            count += 1
            seen.update(tuple(c[i] for i in p) for p in permutations(range(r)))
    return count
