"""Arithmetic of the topological Tverberg number N_r(d).

N_r(d) is the least N such that every continuous map from the N-simplex to
R^d has r pairwise disjoint faces whose images share a point.  For prime
powers it equals (r-1)(d+1).  Upper bounds come from embedding the problem
into the next prime power q >= r; lower bounds come from the counterexample
family at d = rk+1 (k >= 3, r not a prime power) pushed up through the join
inequality beta_r(k(d+1)-1) >= k*beta_r(d).

Provenance strings travel with every number so reports say which rule
produced it.  The eps-form bound N_r(d) <= (1+eps) r (d+1) for large r has no
effective constant and is deliberately not computed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact_linalg import InputError

#: propagation searches divisors only below this dimension
MAX_PROPAGATION_DIM = 10**6


class InconsistencyError(RuntimeError):
    """A combination of rules produced an impossible state (e.g. lower > upper)."""


def smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise InputError(f"no prime factor for {n}")
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial division; [(prime, exponent), ...] in increasing order."""
    out = []
    while n > 1:
        p = smallest_prime_factor(n)
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def is_prime_power(r: int) -> bool:
    if r < 2:
        raise InputError(f"is_prime_power needs r >= 2, got {r}")
    return len(factorize(r)) == 1


def next_prime_power_geq(r: int) -> int:
    if r < 2:
        raise InputError(f"need r >= 2, got {r}")
    q = r
    while not is_prime_power(q):
        q += 1
    return q


def _check_rd(r: int, d: int) -> None:
    if r < 2 or d < 1:
        raise InputError(f"need r >= 2 and d >= 1, got r={r}, d={d}")


def tverberg_value(r: int, d: int) -> int:
    """(r-1)(d+1): exact for prime powers, a floor for every r."""
    return (r - 1) * (d + 1)


def upper_bound(r: int, d: int) -> tuple[int, str]:
    _check_rd(r, d)
    if is_prime_power(r):
        return tverberg_value(r, d), "prime power exact"
    q = next_prime_power_geq(r)
    best = ((q - 1) * d + r - 1, f"prime-power shift q={q}")
    if r >= 6:
        bertrand = (2 * r - 6) * (d + 1)
        if bertrand < best[0]:
            best = (bertrand, "Bertrand (2r-6)(d+1)")
    return best


def counterexample_parameters(r: int, k: int) -> tuple[int, int]:
    """(N, d) = ((r-1)(rk+2), rk+1): no r disjoint faces of the N-simplex meet
    under the constructed map to R^d."""
    if r < 6 or is_prime_power(r):
        raise InputError(f"counterexamples need r >= 6 not a prime power, got r={r}")
    if k < 3:
        raise InputError(f"the equivariant-map criterion behind the construction needs k >= 3, got k={k}")
    return (r - 1) * (r * k + 2), r * k + 1


def seed_dimensions(r: int, dmax: int) -> list[int]:
    """Dimensions rk+1 (k >= 3) up to dmax where beta_r >= 1 is known directly."""
    if r < 6 or is_prime_power(r):
        return []
    return [r * k + 1 for k in range(3, (dmax - 1) // r + 1)]


def beta_lower(r: int, d: int) -> tuple[int, str]:
    """Best lower bound on beta_r(d) = N_r(d) - (r-1)(d+1) from seeds and joins."""
    _check_rd(r, d)
    if is_prime_power(r):
        return 0, "prime power exact"
    if d > MAX_PROPAGATION_DIM:
        return 0, "baseline (r-1)(d+1); propagation search bound exceeded"
    best, why = 0, "baseline (r-1)(d+1)"
    for d0 in seed_dimensions(r, d):
        if (d + 1) % (d0 + 1):
            continue
        mult = (d + 1) // (d0 + 1)
        if mult > best:
            k = (d0 - 1) // r
            if mult == 1:
                why = f"counterexample seed k={k}"
            else:
                why = f"join propagation x{mult} from seed d0={d0} (k={k})"
            best = mult
    return best, why


def lower_bound(r: int, d: int) -> tuple[int, str]:
    _check_rd(r, d)
    if is_prime_power(r):
        return tverberg_value(r, d), "prime power exact"
    beta, why = beta_lower(r, d)
    return tverberg_value(r, d) + beta, why


def conjecture_value(r: int, d: int) -> int:
    _check_rd(r, d)
    if is_prime_power(r) or d <= r:
        return (r - 1) * (d + 1)
    return r * (d + 1) - 1


@dataclass(frozen=True)
class BoundsReport:
    r: int
    d: int
    lower: int
    lower_provenance: str
    upper: int
    upper_provenance: str
    exact: int | None
    conjecture: int
    conjecture_provenance: str

    def __post_init__(self):
        if self.lower > self.upper:
            raise InconsistencyError(
                f"N_{self.r}({self.d}): lower bound {self.lower} ({self.lower_provenance}) "
                f"exceeds upper bound {self.upper} ({self.upper_provenance})"
            )
        if self.exact is not None and not self.lower <= self.exact <= self.upper:
            raise InconsistencyError(f"exact value {self.exact} outside [{self.lower}, {self.upper}]")
        if not self.lower <= self.conjecture <= self.upper:
            raise InconsistencyError(
                f"conjectured value {self.conjecture} outside [{self.lower}, {self.upper}]"
            )

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "d": self.d,
            "lower": {"value": self.lower, "provenance": self.lower_provenance},
            "upper": {"value": self.upper, "provenance": self.upper_provenance},
            "exact": self.exact,
            "conjecture": {"value": self.conjecture, "provenance": self.conjecture_provenance},
        }


def report(r: int, d: int) -> BoundsReport:
    lo, lo_why = lower_bound(r, d)
    hi, hi_why = upper_bound(r, d)
    exact = lo if lo == hi else None
    if is_prime_power(r):
        conj_why = "prime power: (r-1)(d+1) (proved)"
    elif d <= r:
        conj_why = "conjectural: (r-1)(d+1) branch, d <= r"
    else:
        conj_why = "conjectural: r(d+1)-1 branch"
    return BoundsReport(r, d, lo, lo_why, hi, hi_why, exact, conjecture_value(r, d), conj_why)


def table(r: int, dmax: int) -> str:
    """Markdown table of report(r, d) for d = 1..dmax."""
    lines = [
        "| d | lower | upper | exact | conjecture |",
        "|---|---|---|---|---|",
    ]
    for d in range(1, dmax + 1):
        rep = report(r, d)
        exact = "" if rep.exact is None else str(rep.exact)
        lines.append(f"| {d} | {rep.lower} | {rep.upper} | {exact} | {rep.conjecture} |")
    return "\n".join(lines) + "\n"
