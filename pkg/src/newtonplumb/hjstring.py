"""Hirzebruch-Jung strings: the decorated chains replacing graph edges.

Str(a; b, c | n1; n2, n3) carries the resolution data of the normalisation
of {x^a = y^b z^c} together with the multiplicities of the pullback of
x^n1 y^n2 z^n3.  Only the decorated chain is produced; self-intersections
are recomputed downstream from the balance equation and kept here solely
for cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import List, Tuple

from .errors import InvariantError


def negative_cf(p: int, q: int) -> List[int]:
    """The expansion p/q = k1 - 1/(k2 - 1/(... - 1/kl)) with every k >= 2.

    q = 0 encodes the empty string (delta = 1 convention).
    """
    if q == 0:
        return []
    if not (p > q > 0):
        raise ValueError(f"need p > q >= 0, got {p}/{q}")
    if gcd(p, q) != 1:
        raise ValueError(f"{p}/{q} is not in lowest terms")
    ks = []
    while q:
        k = -(-p // q)  # ceil
        ks.append(k)
        p, q = q, k * q - p
    return ks


def cf_value(ks: List[int]) -> Tuple[int, int]:
    """Back-substitute an expansion to a fraction (p, q); ([] -> (1, 0))."""
    p, q = 1, 0
    for k in reversed(ks):
        p, q = k * p - q, p
    return p, q


@dataclass(frozen=True)
class HJString:
    a: int
    b: int
    c: int
    n1: int
    n2: int
    n3: int
    sign: str  # "+" or "-", decorating every edge of the chain
    delta: int
    alpha: int
    ks: Tuple[int, ...]
    mus: Tuple[int, ...]  # mu_0 .. mu_{l+1}; interior vertices carry mu_1..mu_l

    @property
    def interior_multiplicities(self) -> Tuple[int, ...]:
        return self.mus[1:-1]

    @property
    def mu_start(self) -> int:
        """Multiplicity at the (c, n3)-side endpoint (mu_0)."""
        return self.mus[0]

    @property
    def mu_end(self) -> int:
        """Multiplicity at the (b, n2)-side endpoint (mu_{l+1})."""
        return self.mus[-1]

    def check_closure(self) -> None:
        """Recurrence mu_{i+1} = k_i mu_i - mu_{i-1} must close on both ends."""
        mus = self.mus
        for i, k in enumerate(self.ks, start=1):
            if mus[i + 1] != k * mus[i] - mus[i - 1]:
                raise InvariantError(f"string recurrence fails at position {i}")


def build_string(a: int, b: int, c: int, n1: int, n2: int, n3: int,
                 sign: str) -> HJString:
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if a <= 0 or b < 0 or c < 0 or min(n1, n2, n3) < 0:
        raise ValueError("string parameters out of range")
    if gcd(gcd(a, b), c) != 1:
        raise ValueError("gcd(a, b, c) must be 1; divide by it first")
    ab, ac = gcd(a, b), gcd(a, c)
    if a % (ab * ac):
        raise InvariantError(f"delta = a/((a,b)(a,c)) is not integral for {(a, b, c)}")
    delta = a // (ab * ac)
    alpha = _find_alpha(a, b, c, ab, ac, delta)
    ks = tuple(negative_cf(delta, alpha))

    num_end = b * n1 + a * n2
    num_start = c * n1 + a * n3
    if num_end % ab or num_start % ac:
        raise InvariantError("endpoint multiplicity is not integral")
    mu_end = num_end // ab  # mu_{l+1}
    mu_start = num_start // ac  # mu_0
    if (alpha * mu_start + mu_end) % delta:
        raise InvariantError("mu_1 is not integral")
    mu1 = (alpha * mu_start + mu_end) // delta

    mus = [mu_start, mu1]
    for k in ks[:-1] if ks else []:
        mus.append(k * mus[-1] - mus[-2])
    if ks:
        closing = ks[-1] * mus[-1] - mus[-2]
        if closing != mu_end:
            raise InvariantError("string recurrence does not close on mu_{l+1}")
        mus.append(mu_end)
    else:
        # delta = 1: no interior vertices; mus collapses to the two endpoints
        mus = [mu_start, mu_end]
    if any(m < 0 for m in mus):
        raise InvariantError("negative multiplicity in a string")
    s = HJString(a, b, c, n1, n2, n3, sign, delta, alpha, ks, tuple(mus))
    if ks:
        s.check_closure()
    return s


def _find_alpha(a: int, b: int, c: int, ab: int, ac: int, delta: int) -> int:
    found = [x for x in range(delta) if (x * c * ab + b * ac) % a == 0]
    if len(found) != 1:
        raise InvariantError(
            f"alpha is not unique in [0, delta) for {(a, b, c)}: {found}")
    return found[0]
