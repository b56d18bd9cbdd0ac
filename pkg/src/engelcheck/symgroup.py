"""Permutations, the rational group algebra QSym(N), Young tableaux and idempotents.

Permutations act on the right: ``i * (s * t) == (i * s) * t``, so the
product ``s * t`` means "s first, then t".  The same convention drives the
action on double-indexed generators, x_(i,j) s = x_(i s, j).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Iterator, Mapping, Sequence

from .config import DEFAULT_CAPS, Caps, PreconditionError, ResourceError
from .lie import Gen, LieElement, relabel


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise PreconditionError(f"{list(images)} is not a permutation of 1..{len(images)}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        im = list(range(1, n + 1))
        im[a - 1], im[b - 1] = b, a
        return cls(im)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int | None = None) -> "Permutation":
        cycles = [tuple(c) for c in cycles]
        top = max([x for c in cycles for x in c] + [n or 0, 0])
        result = cls.identity(top)
        for c in cycles:
            if len(set(c)) != len(c):
                raise PreconditionError(f"repeated point in cycle {c}")
            im = list(range(1, top + 1))
            for a, b in zip(c, c[1:] + c[:1]):
                im[a - 1] = b
            result = result * cls(im)
        return result

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Permutation":
        return parse_permutation(text, n)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1] if i <= len(self.images) else i

    def extend(self, n: int) -> "Permutation":
        if n < self.degree:
            raise PreconditionError("cannot shrink a permutation")
        return Permutation(self.images + tuple(range(self.degree + 1, n + 1)))

    def __mul__(self, other: "Permutation") -> "Permutation":
        n = max(self.degree, other.degree)
        return Permutation(tuple(other(self(i)) for i in range(1, n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Permutation(inv)

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(1, self.degree + 1):
            if i in seen:
                continue
            c = [i]
            seen.add(i)
            j = self(i)
            while j != i:
                c.append(j)
                seen.add(j)
                j = self(j)
            if len(c) > 1:
                out.append(tuple(c))
        return out

    @property
    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, 1))

    def _key(self) -> tuple[int, ...]:
        # trailing fixed points do not change the permutation
        im = self.images
        n = len(im)
        while n and im[n - 1] == n:
            n -= 1
        return im[:n]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self._key() == other._key()

    def __lt__(self, other: "Permutation") -> bool:
        n = max(self.degree, other.degree)
        return self.extend(n).images < other.extend(n).images

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def __str__(self) -> str:
        cs = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cs) if cs else "()"

    def one_line(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"


def parse_permutation(text: str, n: int | None = None) -> Permutation:
    s = text.strip()
    if s.startswith("["):
        if not s.endswith("]"):
            raise PreconditionError(f"bad one-line permutation {text!r}")
        body = s[1:-1].strip()
        p = Permutation([int(x) for x in re.split(r"[,\s]+", body) if x]) if body else Permutation(())
        return p.extend(n) if n and n > p.degree else p
    cycles = []
    pos = 0
    for m in re.finditer(r"\(([^()]*)\)", s):
        if s[pos:m.start()].strip():
            raise PreconditionError(f"bad cycle notation {text!r}")
        pos = m.end()
        pts = [int(x) for x in re.split(r"[,\s]+", m.group(1).strip()) if x]
        if pts:
            cycles.append(pts)
    if s[pos:].strip() or (not cycles and "(" not in s):
        raise PreconditionError(f"bad cycle notation {text!r}")
    return Permutation.from_cycles(cycles, n)


def symmetric_group(n: int) -> list[Permutation]:
    return [Permutation(p) for p in permutations(range(1, n + 1))]


def generated_subgroup(generators: Iterable[Permutation], n: int) -> set[Permutation]:
    gens_ = [g.extend(n) for g in generators]
    group = {Permutation.identity(n)}
    frontier = list(group)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens_:
                q = p * g
                if q not in group:
                    group.add(q)
                    nxt.append(q)
        frontier = nxt
    return group


# ---------------------------------------------------------------------------
# Group algebra


class GroupAlgebraElement:
    """An element of QSym(degree); terms are keyed by one-line image tuples."""

    __slots__ = ("degree", "_terms")

    def __init__(self, degree: int, terms: Mapping[Permutation, object] | None = None):
        self.degree = degree
        acc: dict[tuple[int, ...], Fraction] = {}
        for p, c in (terms or {}).items():
            if p.degree > degree:
                raise PreconditionError(f"{p} has degree above {degree}")
            key = p.extend(degree).images
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
        self._terms = {p: c for p, c in acc.items() if c}

    @classmethod
    def _raw(cls, degree: int, terms: dict[tuple[int, ...], Fraction]) -> "GroupAlgebraElement":
        e = cls.__new__(cls)
        e.degree = degree
        e._terms = terms
        return e

    @classmethod
    def one(cls, degree: int) -> "GroupAlgebraElement":
        return cls._raw(degree, {tuple(range(1, degree + 1)): Fraction(1)})

    @classmethod
    def of(cls, p: Permutation, degree: int | None = None) -> "GroupAlgebraElement":
        return cls(degree or p.degree, {p: 1})

    @classmethod
    def zero(cls, degree: int) -> "GroupAlgebraElement":
        return cls._raw(degree, {})

    def items(self) -> list[tuple[Permutation, Fraction]]:
        return [(Permutation(p), c) for p, c in sorted(self._terms.items())]

    def coefficient(self, p: Permutation) -> Fraction:
        im = p.images
        if len(im) > self.degree:
            if any(im[i - 1] != i for i in range(self.degree + 1, len(im) + 1)):
                return Fraction(0)
            im = im[: self.degree]
        return self._terms.get(im + tuple(range(len(im) + 1, self.degree + 1)), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def extend(self, n: int) -> "GroupAlgebraElement":
        if n == self.degree:
            return self
        tail = tuple(range(self.degree + 1, n + 1))
        return GroupAlgebraElement._raw(n, {p + tail: c for p, c in self._terms.items()})

    def _align(self, other: "GroupAlgebraElement"):
        n = max(self.degree, other.degree)
        return self.extend(n), other.extend(n), n

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        a, b, n = self._align(other)
        acc = dict(a._terms)
        for p, c in b._terms.items():
            s = acc.get(p, 0) + c
            if s:
                acc[p] = s
            else:
                acc.pop(p, None)
        return GroupAlgebraElement._raw(n, acc)

    def __neg__(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement._raw(self.degree, {p: -c for p, c in self._terms.items()})

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + (-other)

    def scale(self, q) -> "GroupAlgebraElement":
        q = Fraction(q)
        if not q:
            return GroupAlgebraElement.zero(self.degree)
        return GroupAlgebraElement._raw(self.degree, {p: c * q for p, c in self._terms.items()})

    def __mul__(self, other) -> "GroupAlgebraElement":
        if not isinstance(other, GroupAlgebraElement):
            return self.scale(other)
        a, b, n = self._align(other)
        acc: dict[tuple[int, ...], Fraction] = {}
        for p, c in a._terms.items():
            for q, d in b._terms.items():
                r = tuple([q[i - 1] for i in p])  # p first, then q
                s = acc.get(r, 0) + c * d
                if s:
                    acc[r] = s
                else:
                    del acc[r]
        return GroupAlgebraElement._raw(n, acc)

    def __rmul__(self, q) -> "GroupAlgebraElement":
        return self.scale(q)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GroupAlgebraElement):
            a, b, _ = self._align(other)
            return a._terms == b._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"GroupAlgebraElement({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for p, c in self.items():
            coef = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            parts.append(f"{coef}*{p}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Diagrams and tableaux


class YoungDiagram:
    __slots__ = ("parts",)

    def __init__(self, parts: Sequence[int]):
        parts = tuple(parts)
        if not parts or any(p <= 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise PreconditionError(f"{parts} is not a partition (positive, weakly decreasing)")
        self.parts = parts

    @property
    def size(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "YoungDiagram":
        return YoungDiagram([sum(1 for p in self.parts if p > j) for j in range(self.parts[0])])

    def boxes(self) -> list[tuple[int, int]]:
        return [(r, c) for r, m in enumerate(self.parts) for c in range(m)]

    def hook_lengths(self) -> list[int]:
        conj = self.conjugate().parts
        return [self.parts[r] - c - 1 + conj[c] - r for r, c in self.boxes()]

    def num_standard(self) -> int:
        """f^lambda by the hook-length formula."""
        return math.factorial(self.size) // math.prod(self.hook_lengths())

    def addable_contents(self) -> list[int]:
        out = [-len(self.parts)]  # a new row below the last one
        for r, m in enumerate(self.parts):
            if r == 0 or self.parts[r - 1] > m:
                out.append(m - r)
        return sorted(set(out))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, YoungDiagram) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"YoungDiagram({self.parts})"


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n in reverse lexicographic order, (n) first."""
    if n == 0:
        yield ()
        return
    top = n if max_part is None else min(n, max_part)
    for first in range(top, 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


class YoungTableau:
    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(r) for r in rows)
        YoungDiagram([len(r) for r in rows])
        entries = sorted(x for r in rows for x in r)
        if entries != list(range(1, len(entries) + 1)):
            raise PreconditionError("tableau filling must be a bijection onto 1..N")
        self.rows = rows

    @classmethod
    def parse(cls, text: str) -> "YoungTableau":
        rows = [[int(x) for x in re.split(r"[,\s]+", line.strip()) if x] for line in text.strip().splitlines()]
        return cls([r for r in rows if r])

    @property
    def shape(self) -> YoungDiagram:
        return YoungDiagram([len(r) for r in self.rows])

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[j] for r in self.rows if len(r) > j) for j in range(len(self.rows[0]))]

    def is_standard(self) -> bool:
        rows_ok = all(a < b for r in self.rows for a, b in zip(r, r[1:]))
        cols_ok = all(a < b for c in self.columns() for a, b in zip(c, c[1:]))
        return rows_ok and cols_ok

    def content_of(self, x: int) -> int:
        for r, row in enumerate(self.rows):
            if x in row:
                return row.index(x) - r
        raise PreconditionError(f"{x} is not in the tableau")

    def remove_largest(self) -> "YoungTableau | None":
        n = self.size
        rows = [tuple(x for x in r if x != n) for r in self.rows]
        rows = [r for r in rows if r]
        return YoungTableau(rows) if rows else None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, YoungTableau) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"YoungTableau({[list(r) for r in self.rows]})"

    def __str__(self) -> str:
        return "\n".join(" ".join(map(str, r)) for r in self.rows)


def all_fillings(shape: Sequence[int]) -> Iterator[YoungTableau]:
    d = YoungDiagram(shape)
    for perm in permutations(range(1, d.size + 1)):
        rows, i = [], 0
        for m in d.parts:
            rows.append(perm[i:i + m])
            i += m
        yield YoungTableau(rows)


def standard_tableaux(shape: Sequence[int]) -> list[YoungTableau]:
    d = YoungDiagram(shape)
    n = d.size
    out: list[YoungTableau] = []

    def rec(rows: list[list[int]], k: int):
        if k > n:
            out.append(YoungTableau(rows))
            return
        for r in range(len(d.parts)):
            if len(rows[r]) < d.parts[r] and (r == 0 or len(rows[r - 1]) > len(rows[r])):
                rows[r].append(k)
                rec(rows, k + 1)
                rows[r].pop()

    rec([[] for _ in d.parts], 1)
    return out


def _adjacent_swaps(blocks: Iterable[Sequence[int]], n: int) -> list[Permutation]:
    return [Permutation.transposition(n, b[i], b[i + 1]) for b in blocks for i in range(len(b) - 1)]


def row_group(t: YoungTableau) -> list[Permutation]:
    """Generators of H, the permutations preserving every row."""
    return _adjacent_swaps(t.rows, t.size)


def column_group(t: YoungTableau) -> list[Permutation]:
    """Generators of V, the permutations preserving every column."""
    return _adjacent_swaps(t.columns(), t.size)


def _block_group(blocks: Sequence[Sequence[int]], n: int) -> list[Permutation]:
    out = []
    for images in product(*(permutations(b) for b in blocks)):
        im = list(range(1, n + 1))
        for b, img in zip(blocks, images):
            for a, c in zip(b, img):
                im[a - 1] = c
        out.append(Permutation(im))
    return out


def row_group_elements(t: YoungTableau) -> list[Permutation]:
    return _block_group(t.rows, t.size)


def column_group_elements(t: YoungTableau) -> list[Permutation]:
    return _block_group(t.columns(), t.size)


def young_symmetrizer(t: YoungTableau) -> GroupAlgebraElement:
    """sum over pi in V, rho in H of sign(pi) pi rho."""
    n = t.size
    acc: dict[Permutation, Fraction] = {}
    for pi in column_group_elements(t):
        s = pi.sign
        for rho in row_group_elements(t):
            p = pi * rho
            acc[p] = acc.get(p, 0) + s
    return GroupAlgebraElement(n, acc)


def essential_scalar(t: YoungTableau) -> Fraction:
    """The k with e*e == k*e; checks that k divides N!."""
    e = young_symmetrizer(t)
    sq = e * e
    k = sq.coefficient(Permutation.identity(t.size))
    if sq != e.scale(k) or k == 0:
        raise AssertionError(f"symmetrizer of {t.rows} is not quasi-idempotent")
    if k.denominator != 1 or math.factorial(t.size) % int(k):
        raise AssertionError(f"k = {k} does not divide {t.size}!")
    return k


def jucys_murphy(k: int, n: int) -> GroupAlgebraElement:
    """J_k = sum over i < k of the transposition (i k)."""
    return GroupAlgebraElement(n, {Permutation.transposition(n, i, k): 1 for i in range(1, k)})


@lru_cache(maxsize=None)
def _seminormal(rows: tuple[tuple[int, ...], ...]) -> GroupAlgebraElement:
    t = YoungTableau(rows)
    n = t.size
    if n == 1:
        return GroupAlgebraElement.one(1)
    smaller = t.remove_largest()
    prev = _seminormal(smaller.rows).extend(n)
    c0 = t.content_of(n)
    j = jucys_murphy(n, n)
    acc = prev
    for c in smaller.shape.addable_contents():
        if c == c0:
            continue
        acc = (acc * (j - GroupAlgebraElement.one(n).scale(c))).scale(Fraction(1, c0 - c))
    return acc


def seminormal_idempotent(t: YoungTableau) -> GroupAlgebraElement:
    """The primitive idempotent of the Jucys-Murphy eigenbasis indexed by a standard tableau."""
    if not t.is_standard():
        raise PreconditionError("seminormal idempotents are indexed by standard tableaux")
    return _seminormal(t.rows)


def decompose_identity(n: int, caps: Caps = DEFAULT_CAPS) -> list[tuple[YoungTableau, GroupAlgebraElement]]:
    """Orthogonal primitive idempotents summing to 1, one per standard tableau."""
    if n < 1:
        raise PreconditionError("N must be >= 1")
    if n > caps.symmetric_degree:
        raise ResourceError("symmetric_degree", caps.symmetric_degree, n, "decompose_identity")
    out = []
    for shape in partitions(n):
        for t in standard_tableaux(shape):
            out.append((t, seminormal_idempotent(t)))
    return out


def same_isotypic(a: GroupAlgebraElement, b: GroupAlgebraElement) -> bool:
    """For primitive idempotents: QS a ~ QS b iff b g a != 0 for some group element g."""
    n = max(a.degree, b.degree)
    return any(b * GroupAlgebraElement.of(g, n) * a for g in symmetric_group(n))


def left_ideal_dimension(a: GroupAlgebraElement) -> int:
    """dim of QSym(N) a, by exact rank of the vectors g a."""
    from .linalg import RowEchelon, integer_row

    n = a.degree
    group = symmetric_group(n)
    index = {p: i for i, p in enumerate(group)}
    ech = RowEchelon(len(group), track=False)
    for g in group:
        v = GroupAlgebraElement.of(g, n) * a
        row, _ = integer_row({index[p]: c for p, c in v.items()})
        ech.add(row)
    return ech.rank


def row_column_bound(d: YoungDiagram) -> int:
    return max(d.parts[0], len(d.parts))


# ---------------------------------------------------------------------------
# Action on double-indexed generators


def act(sigma: Permutation, e: LieElement, column: int) -> LieElement:
    """x_(i,column) sigma = x_(i sigma, column); every other generator is fixed."""
    for g in e.generators():
        if g.is_double and g.col == column and g.row > sigma.degree:
            raise PreconditionError(f"row index {g.row} of {g} is outside the degree {sigma.degree} of {sigma}")

    def fn(g: Gen) -> Gen:
        if g.is_double and g.col == column:
            return Gen(sigma(g.row), column)
        return g

    return relabel(e, fn)


def apply_algebra_element(a: GroupAlgebraElement, e: LieElement, column: int) -> LieElement:
    acc = LieElement.zero()
    for p, c in a.items():
        acc = acc + act(p, e, column) * c
    return acc


def check_decomposition(pairs: Sequence[tuple[YoungTableau, GroupAlgebraElement]], n: int) -> dict[str, bool]:
    """Sum is 1, each element idempotent, distinct elements orthogonal."""
    ids = [e for _, e in pairs]
    total = GroupAlgebraElement.zero(n)
    for e in ids:
        total = total + e
    idem = all(e * e == e for e in ids)
    orth = all(not (a * b) for i, a in enumerate(ids) for j, b in enumerate(ids) if i != j)
    count = sum(YoungDiagram(s).num_standard() for s in partitions(n))
    return {
        "sums_to_one": total == GroupAlgebraElement.one(n),
        "idempotent": idem,
        "orthogonal": orth,
        "count_matches_standard_tableaux": len(ids) == count,
    }
