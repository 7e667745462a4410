"""Exact arithmetic on the rank-3 weight lattice N and its dual M.

Everything here runs on arbitrary-precision integers; no floating point is
used anywhere in the kernel.  Vectors are plain integer 3-tuples at the
working level, with :class:`LatticeVector` as the tagged value type used at
API boundaries (the pairing is only defined between one N-side and one
M-side vector).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence, Tuple

Coords = Tuple[int, int, int]

N_SIDE = "N"
M_SIDE = "M"
_SIDES = (N_SIDE, M_SIDE)


def as_coords(v) -> Coords:
    """Coerce a LatticeVector or any length-3 iterable of ints to a tuple."""
    if isinstance(v, LatticeVector):
        return v.coords
    t = tuple(v)
    if len(t) != 3 or not all(isinstance(c, int) for c in t):
        raise ValueError(f"expected an integer triple, got {v!r}")
    return t  # type: ignore[return-value]


@dataclass(frozen=True)
class LatticeVector:
    """A lattice point, tagged with the side it lives on (``N`` or ``M``)."""

    coords: Coords
    side: str = N_SIDE

    def __post_init__(self):
        if self.side not in _SIDES:
            raise ValueError(f"unknown lattice side {self.side!r}")
        object.__setattr__(self, "coords", as_coords(self.coords))

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        if other.side != self.side:
            raise ValueError("cannot add vectors from different lattices")
        return LatticeVector(vadd(self.coords, other.coords), self.side)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        if other.side != self.side:
            raise ValueError("cannot subtract vectors from different lattices")
        return LatticeVector(vsub(self.coords, other.coords), self.side)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(vneg(self.coords), self.side)

    def __rmul__(self, k: int) -> "LatticeVector":
        return LatticeVector(vscale(k, self.coords), self.side)


def pair(a: LatticeVector, b: LatticeVector) -> int:
    """The canonical pairing <m, n>; defined only across the two lattices."""
    if a.side == b.side:
        raise ValueError("pairing needs one N-side and one M-side vector")
    return vdot(a.coords, b.coords)


# -- raw tuple arithmetic ----------------------------------------------------

def vadd(u: Coords, v: Coords) -> Coords:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def vsub(u: Coords, v: Coords) -> Coords:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def vneg(u: Coords) -> Coords:
    return (-u[0], -u[1], -u[2])


def vscale(k: int, u: Coords) -> Coords:
    return (k * u[0], k * u[1], k * u[2])


def vdot(u: Coords, v: Coords) -> int:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def vcross(u: Coords, v: Coords) -> Coords:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def det3(a: Coords, b: Coords, c: Coords) -> int:
    return vdot(a, vcross(b, c))


def vsum(vs: Iterable[Coords]) -> Coords:
    x = y = z = 0
    for v in vs:
        x += v[0]
        y += v[1]
        z += v[2]
    return (x, y, z)


ZERO: Coords = (0, 0, 0)


def integral_length(u) -> int:
    """max{n : u = n*v for lattice v}; gcd of the coordinates, 0 for the zero vector."""
    c = as_coords(u)
    return gcd(gcd(abs(c[0]), abs(c[1])), abs(c[2]))


def primitive(u):
    """u divided by its integral length; rejects the zero vector."""
    if isinstance(u, LatticeVector):
        return LatticeVector(primitive(u.coords), u.side)
    c = as_coords(u)
    n = integral_length(c)
    if n == 0:
        raise ValueError("the zero vector spans no ray")
    return (c[0] // n, c[1] // n, c[2] // n)


def vec_rank(vs: Sequence[Coords]) -> int:
    """Rank of a family of integer 3-vectors, exactly."""
    nz = [v for v in vs if v != ZERO]
    if not nz:
        return 0
    v1 = nz[0]
    v2 = None
    for v in nz[1:]:
        if vcross(v1, v) != ZERO:
            v2 = v
            break
    if v2 is None:
        return 1
    n = vcross(v1, v2)
    for v in nz:
        if vdot(n, v) != 0:
            return 3
    return 2


def egcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def kernel_basis(a: Coords) -> Tuple[Coords, Coords]:
    """Basis of the saturated rank-2 sublattice orthogonal to a nonzero a.

    Found from a unimodular column reduction bringing a to (g, 0, 0): the
    last two columns of the transformation span the kernel, and every
    lattice point of the orthogonal plane is an integer combination of them.
    """
    if a == ZERO:
        raise ValueError("kernel basis needs a nonzero vector")
    cols = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]  # cols[r][i] = row r of column i
    w = list(a)

    def fold(i: int, j: int) -> None:
        g, x, y = egcd(w[i], w[j])
        if g == 0:
            return
        p, q = w[i] // g, w[j] // g
        for r in range(3):
            ci, cj = cols[r][i], cols[r][j]
            cols[r][i] = x * ci + y * cj
            cols[r][j] = -q * ci + p * cj
        w[i], w[j] = g, 0

    fold(0, 1)
    fold(0, 2)
    b1 = (cols[0][1], cols[1][1], cols[2][1])
    b2 = (cols[0][2], cols[1][2], cols[2][2])
    return hnf2(b1, b2)


def hnf2(b1: Coords, b2: Coords) -> Tuple[Coords, Coords]:
    """Canonical (Hermite-style) basis of the lattice spanned by two independent rows."""
    rows = [list(b1), list(b2)]

    def reduce_col(col: int, top: int) -> bool:
        # gcd-combine rows top, top+1 so rows[top][col] = g >= 0, rows[top+1][col] = 0
        if top + 1 < 2:
            a, b = rows[top][col], rows[top + 1][col]
            g, x, y = egcd(a, b)
            if g == 0:
                return False
            p, q = a // g, b // g
            r0 = [x * rows[top][k] + y * rows[top + 1][k] for k in range(3)]
            r1 = [-q * rows[top][k] + p * rows[top + 1][k] for k in range(3)]
            rows[top], rows[top + 1] = r0, r1
            return True
        if rows[top][col] == 0:
            return False
        if rows[top][col] < 0:
            rows[top] = [-v for v in rows[top]]
        return True

    pivots = []
    top = 0
    for col in range(3):
        if top < 2 and reduce_col(col, top):
            pivots.append(col)
            top += 1
        if top == 2:
            break
    if len(pivots) != 2:
        raise ValueError("rows are not independent")
    # reduce the entry of row 0 above the second pivot into [0, pivot)
    p2 = pivots[1]
    piv = rows[1][p2]
    q = rows[0][p2] // piv
    rows[0] = [rows[0][k] - q * rows[1][k] for k in range(3)]
    return (tuple(rows[0]), tuple(rows[1]))  # type: ignore[return-value]


@dataclass(frozen=True)
class UnimodularChart2D:
    """Integer coordinates on the saturated lattice of an affine plane in M.

    The basis spans the saturated direction sublattice, so chart -> ambient
    -> chart round-trips are the identity on every lattice point of the
    plane.
    """

    origin: Coords
    basis: Tuple[Coords, Coords]

    def to_chart(self, p) -> Tuple[int, int]:
        d = vsub(as_coords(p), self.origin)
        b1, b2 = self.basis
        for i, j in ((0, 1), (0, 2), (1, 2)):
            det = b1[i] * b2[j] - b1[j] * b2[i]
            if det != 0:
                xn = d[i] * b2[j] - d[j] * b2[i]
                yn = b1[i] * d[j] - b1[j] * d[i]
                if xn % det or yn % det:
                    raise ValueError(f"{p!r} is not a lattice point of the chart plane")
                x, y = xn // det, yn // det
                if vadd(vscale(x, b1), vscale(y, b2)) != d:
                    raise ValueError(f"{p!r} is not on the chart plane")
                return (x, y)
        raise ValueError("degenerate chart basis")

    def from_chart(self, xy: Tuple[int, int]) -> Coords:
        x, y = xy
        b1, b2 = self.basis
        return vadd(self.origin, vadd(vscale(x, b1), vscale(y, b2)))


def face_chart(points: Sequence) -> UnimodularChart2D:
    """Chart for the affine plane spanned by coplanar lattice points.

    The input must affinely span a plane; rank != 2 is rejected.  The basis
    is the canonical saturated one, so all plane lattice points get integer
    coordinates, independent of which points were supplied.
    """
    pts = [as_coords(p) for p in points]
    if not pts:
        raise ValueError("no points")
    origin = pts[0]
    dirs = [vsub(p, origin) for p in pts[1:] if p != origin]
    if vec_rank(dirs) != 2:
        raise ValueError("points do not affinely span a plane")
    d1 = next(d for d in dirs if d != ZERO)
    d2 = next(d for d in dirs if vcross(d1, d) != ZERO)
    normal = primitive(vcross(d1, d2))
    basis = kernel_basis(normal)
    return UnimodularChart2D(origin, basis)


def direction_chart(v: Coords) -> UnimodularChart2D:
    """Chart (based at 0) for the saturated rank-2 lattice orthogonal to v."""
    return UnimodularChart2D(ZERO, kernel_basis(as_coords(v)))
