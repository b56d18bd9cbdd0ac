"""Fraction-free sparse row echelon form over the integers, with provenance.

Rows are sparse ``{column: int}`` maps.  Each stored row carries a
certificate ``{key: Fraction}`` which records the row as a combination of
the input rows that were fed to :meth:`RowEchelon.add`; the invariant

    row == sum(coef * coords(key) for key, coef in certificate.items())

holds exactly after every operation.  Pivots are the least column index of
each row, so the result depends only on the input order.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Hashable, Mapping


def integer_row(coords: Mapping[int, Fraction]) -> tuple[dict[int, int], int]:
    """Clear denominators: returns (row, scale) with row == scale * coords."""
    scale = 1
    for q in coords.values():
        d = Fraction(q).denominator
        scale = scale * d // gcd(scale, d)
    row = {}
    for j, q in coords.items():
        q = Fraction(q) * scale
        if q:
            row[j] = q.numerator
    return row, scale


def _content(row: dict[int, int]) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


class RowEchelon:
    def __init__(self, ncols: int, track: bool = True):
        self.ncols = ncols
        self.track = track
        self.rows: dict[int, tuple[dict[int, int], dict[Hashable, Fraction]]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def is_full(self) -> bool:
        return len(self.rows) == self.ncols

    def copy(self) -> "RowEchelon":
        other = RowEchelon(self.ncols, self.track)
        other.rows = dict(self.rows)
        return other

    def reduce(
        self, row: dict[int, int], cert: dict[Hashable, Fraction] | None = None
    ) -> tuple[dict[int, int], dict[Hashable, Fraction]]:
        row = dict(row)
        cert = dict(cert or {})
        while row:
            p = min(row)
            if p not in self.rows:
                break
            prow, pcert = self.rows[p]
            a, b = prow[p], row[p]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {}
            for j, v in row.items():
                v *= a
                if v:
                    new[j] = v
            for j, v in prow.items():
                s = new.get(j, 0) - b * v
                if s:
                    new[j] = s
                else:
                    new.pop(j, None)
            if self.track:
                nc = {k: c * a for k, c in cert.items()}
                for k, c in pcert.items():
                    s = nc.get(k, 0) - b * c
                    if s:
                        nc[k] = s
                    else:
                        nc.pop(k, None)
                cert = nc
            row = new
            g = _content(row)
            if g > 1:
                row = {j: v // g for j, v in row.items()}
                if self.track:
                    cert = {k: c / g for k, c in cert.items()}
        return row, cert

    def add(self, row: dict[int, int], cert: dict[Hashable, Fraction] | None = None) -> bool:
        """Insert a row; returns True when it was independent of the stored rows."""
        row, cert = self.reduce(row, cert)
        if not row:
            return False
        p = min(row)
        if row[p] < 0:
            row = {j: -v for j, v in row.items()}
            cert = {k: -c for k, c in cert.items()}
        self.rows[p] = (row, cert if self.track else {})
        return True

    def basis(self) -> list[dict[int, int]]:
        return [self.rows[p][0] for p in sorted(self.rows)]
