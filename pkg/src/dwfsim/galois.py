"""Finite fields of order 2, 3, and 4 and the line geometry of the N x N
discrete phase-space grid built over them.

Field elements are encoded as integers 0..N-1. For N = 4 the encoding is the
coefficient pair of the polynomial basis {1, w}: 0 -> 0, 1 -> 1, 2 -> w,
3 -> w + 1, with multiplication reduced by w^2 = w + 1 (the irreducible
polynomial w^2 + w + 1 over GF(2)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

SUPPORTED_ORDERS = (2, 3, 4)

GF4_LABELS = ("0", "1", "w", "w+1")


def _gf4_mul(a: int, b: int) -> int:
    a0, a1 = a & 1, a >> 1
    b0, b1 = b & 1, b >> 1
    c0 = a0 * b0
    c1 = a0 * b1 + a1 * b0
    c2 = a1 * b1
    # reduce w^2 -> w + 1
    return ((c0 + c2) % 2) | (((c1 + c2) % 2) << 1)


@dataclass(frozen=True, eq=False)
class GaloisField:
    """Arithmetic tables for GF(p^m), p in {2, 3}, m in {1, 2}."""

    characteristic: int
    degree: int
    order: int
    add: np.ndarray
    mul: np.ndarray
    labels: tuple

    def neg(self, a: int) -> int:
        row = self.add[a]
        return int(np.where(row == 0)[0][0])

    def trace(self, x: int) -> int:
        """Field trace Tr(x) = x + x^p + ... + x^(p^(m-1)), valued in GF(p)."""
        acc = 0
        term = x
        for _ in range(self.degree):
            acc = int(self.add[acc, term])
            # term -> term^p
            powered = term
            for _ in range(self.characteristic - 1):
                powered = int(self.mul[powered, term])
            term = powered
        return acc

    def check_axioms(self) -> None:
        """Exhaustively verify the field axioms on the stored tables."""
        n = self.order
        for a, b in itertools.product(range(n), repeat=2):
            if self.add[a, b] != self.add[b, a] or self.mul[a, b] != self.mul[b, a]:
                raise AssertionError("commutativity fails")
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.add[self.add[a, b], c] != self.add[a, self.add[b, c]]:
                raise AssertionError("additive associativity fails")
            if self.mul[self.mul[a, b], c] != self.mul[a, self.mul[b, c]]:
                raise AssertionError("multiplicative associativity fails")
            if self.mul[a, self.add[b, c]] != self.add[self.mul[a, b], self.mul[a, c]]:
                raise AssertionError("distributivity fails")
        if any(self.add[a, 0] != a for a in range(n)):
            raise AssertionError("0 is not the additive identity")
        if any(self.mul[a, 1] != a for a in range(n)):
            raise AssertionError("1 is not the multiplicative identity")
        for a in range(n):
            if 0 not in self.add[a]:
                raise AssertionError("missing additive inverse")
        for a in range(1, n):
            if 1 not in self.mul[a]:
                raise AssertionError("missing multiplicative inverse")


def build_field(order: int) -> GaloisField:
    if order not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported field order {order}; supported: {SUPPORTED_ORDERS}")
    if order in (2, 3):
        add = np.array([[(a + b) % order for b in range(order)] for a in range(order)])
        mul = np.array([[(a * b) % order for b in range(order)] for a in range(order)])
        f = GaloisField(order, 1, order, add, mul, tuple(str(k) for k in range(order)))
    else:
        add = np.array([[a ^ b for b in range(4)] for a in range(4)])
        mul = np.array([[_gf4_mul(a, b) for b in range(4)] for a in range(4)])
        f = GaloisField(2, 2, 4, add, mul, GF4_LABELS)
    f.check_axioms()
    return f


def field_trace(f: GaloisField, x: int) -> int:
    return f.trace(x)


@dataclass(frozen=True)
class PhaseSpaceLine:
    """Solution set of a*q + b*p = c: exactly N grid points (q, p)."""

    striation: int
    index: int
    points: tuple  # of (q, p) pairs


def build_striations(f: GaloisField) -> list:
    """Partition the N x N grid into N+1 striations of N parallel lines.

    Striation s < N holds the lines p = s*q + c (one per intercept c);
    striation N holds the vertical lines q = c. Lines within a striation are
    indexed by c.
    """
    n = f.order
    striations = []
    for s in range(n):
        lines = []
        for c in range(n):
            pts = tuple((q, int(f.add[f.mul[s, q], c])) for q in range(n))
            lines.append(PhaseSpaceLine(s, c, pts))
        striations.append(lines)
    striations.append([PhaseSpaceLine(n, c, tuple((c, p) for p in range(n))) for c in range(n)])
    return striations


def line_through(striations, s: int, point) -> PhaseSpaceLine:
    for line in striations[s]:
        if tuple(point) in line.points:
            return line
    raise ValueError(f"point {point} not on any line of striation {s}")


def check_geometry(striations) -> None:
    """Verify the affine-plane properties of a striation family.

    (i) every point pair lies on exactly one line, (ii) non-parallel lines
    meet in exactly one point, (iii) parallel lines partition the grid.
    """
    n = len(striations[0])
    pts = [(q, p) for q in range(n) for p in range(n)]
    all_lines = [ln for s in striations for ln in s]
    for a, b in itertools.combinations(pts, 2):
        hits = sum(1 for ln in all_lines if a in ln.points and b in ln.points)
        if hits != 1:
            raise AssertionError(f"points {a},{b} lie on {hits} lines")
    for la, lb in itertools.combinations(all_lines, 2):
        common = set(la.points) & set(lb.points)
        if la.striation == lb.striation:
            if common:
                raise AssertionError("parallel lines intersect")
        elif len(common) != 1:
            raise AssertionError("non-parallel lines do not meet in one point")
    for s in striations:
        covered = set()
        for ln in s:
            covered.update(ln.points)
        if covered != set(pts):
            raise AssertionError("striation does not partition the grid")
