"""Exact free Lie algebra arithmetic over the rationals in the Lyndon basis.

Generators are :class:`Gen` values, words are tuples of generators and a
:class:`LieElement` is a finite map from Lyndon words to nonzero
:class:`~fractions.Fraction` coefficients.  The bracket of two Lyndon basis
elements is rewritten into the basis by the classical triangular rule::

    [u, v] (u < v, u = u1 u2 standard, u2 < v)
        = [u1, [u2, v]] - [u2, [u1, v]]

which terminates and yields the unique canonical form.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .config import DEFAULT_CAPS, Caps, PreconditionError, ResourceError

Rational = Union[int, Fraction]


class Gen(tuple):
    """A free generator: ``Gen(i)`` is x_i, ``Gen(i, j)`` is x_(i,j).

    Stored as the tuple sort key, so plain tuple comparison gives the
    generator order: single-indexed by i, then double-indexed by (j, i).
    """

    __slots__ = ()

    def __new__(cls, i: int, j: int | None = None):
        if i < 1 or (j is not None and j < 1):
            raise PreconditionError(f"generator indices must be >= 1, got {(i, j)}")
        if j is None:
            return tuple.__new__(cls, (0, i))
        return tuple.__new__(cls, (1, j, i))

    def __reduce__(self):
        return (Gen, (self.row, self.col) if self.is_double else (self.row,))

    @property
    def is_double(self) -> bool:
        return self[0] == 1

    @property
    def row(self) -> int:
        """The first index: i for x_i and for x_(i,j)."""
        return self[2] if self[0] == 1 else self[1]

    @property
    def col(self) -> int | None:
        return self[1] if self[0] == 1 else None

    def __repr__(self) -> str:
        if self[0] == 1:
            return f"x({self[2]},{self[1]})"
        return f"x{self[1]}"

    __str__ = __repr__


Word = tuple  # tuple[Gen, ...]


def gens(*indices: int) -> list[Gen]:
    return [Gen(i) for i in indices]


# ---------------------------------------------------------------------------
# Multiweights


class Multiweight:
    """Degrees per generator; zero entries are never stored."""

    __slots__ = ("_items", "_hash")

    def __init__(self, counts: Mapping[Gen, int] | Iterable[tuple[Gen, int]] = ()):
        if isinstance(counts, Mapping):
            counts = counts.items()
        acc: dict[Gen, int] = {}
        for g, d in counts:
            if d < 0:
                raise PreconditionError(f"negative degree {d} for {g}")
            if d:
                acc[g] = acc.get(g, 0) + d
        self._items = tuple(sorted(acc.items()))
        self._hash = hash(self._items)

    @classmethod
    def of_word(cls, word: Sequence[Gen]) -> "Multiweight":
        return _word_multiweight(tuple(word))

    @classmethod
    def multilinear(cls, generators: Iterable[Gen]) -> "Multiweight":
        gs = list(generators)
        if len(set(gs)) != len(gs):
            raise PreconditionError("multilinear multiweight needs distinct generators")
        return cls((g, 1) for g in gs)

    @property
    def items(self) -> tuple[tuple[Gen, int], ...]:
        return self._items

    def degree(self, g: Gen) -> int:
        for h, d in self._items:
            if h == g:
                return d
        return 0

    @property
    def total(self) -> int:
        return sum(d for _, d in self._items)

    @property
    def support(self) -> tuple[Gen, ...]:
        return tuple(g for g, _ in self._items)

    def is_multilinear(self) -> bool:
        return all(d == 1 for _, d in self._items)

    def __add__(self, other: "Multiweight") -> "Multiweight":
        acc = dict(self._items)
        for g, d in other._items:
            acc[g] = acc.get(g, 0) + d
        return Multiweight(acc)

    def __sub__(self, other: "Multiweight") -> "Multiweight":
        acc = dict(self._items)
        for g, d in other._items:
            acc[g] = acc.get(g, 0) - d
        return Multiweight(acc)

    def fits_in(self, other: "Multiweight") -> bool:
        """Componentwise self <= other."""
        return all(d <= other.degree(g) for g, d in self._items)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Multiweight) and self._items == other._items

    def __lt__(self, other: "Multiweight") -> bool:
        # a total order for deterministic iteration, not the dominance order
        return (self.total, self._items) < (other.total, other._items)

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._items)

    def __repr__(self) -> str:
        if not self._items:
            return "1"
        return "*".join(str(g) if d == 1 else f"{g}^{d}" for g, d in self._items)


@lru_cache(maxsize=1 << 16)
def _word_multiweight(word: Word) -> Multiweight:
    acc: dict[Gen, int] = {}
    for g in word:
        acc[g] = acc.get(g, 0) + 1
    return Multiweight(acc)


def sub_multiweights(w: Multiweight) -> Iterator[Multiweight]:
    """All u with 0 < u <= w componentwise (u = w included)."""
    support = w.support
    for degs in product(*(range(w.degree(g) + 1) for g in support)):
        if any(degs):
            yield Multiweight(zip(support, degs))


def ordered_splits(w: Multiweight, parts: int) -> Iterator[tuple[Multiweight, ...]]:
    """Ordered tuples of `parts` nonzero multiweights summing to w."""
    support = w.support
    per_gen = []
    for g in support:
        d = w.degree(g)
        per_gen.append([c for c in _compositions(d, parts)])
    for choice in product(*per_gen):
        split = []
        ok = True
        for p in range(parts):
            mw = Multiweight((g, choice[s][p]) for s, g in enumerate(support))
            if not mw:
                ok = False
                break
            split.append(mw)
        if ok:
            yield tuple(split)


def _compositions(d: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _compositions(d - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# Lyndon words


def is_lyndon(word: Sequence[Gen]) -> bool:
    w = tuple(word)
    return len(w) > 0 and all(w < w[i:] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def standard_factorization(word: Word) -> tuple[Word, Word]:
    """Split a Lyndon word of length >= 2 as u v, v its longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise PreconditionError(f"{word!r} has no standard factorization")


BracketTree = Union[Gen, tuple]


@lru_cache(maxsize=None)
def standard_bracketing(word: Word) -> BracketTree:
    if len(word) == 1:
        return word[0]
    u, v = standard_factorization(word)
    return (standard_bracketing(u), standard_bracketing(v))


def lyndon_words(alphabet: Sequence[Gen], max_length: int) -> Iterator[Word]:
    """Duval's algorithm: all Lyndon words of length <= max_length, in lex order."""
    letters = sorted(set(alphabet))
    k = len(letters)
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(letters[i] for i in w)
        m = len(w)
        while len(w) < max_length:
            w.append(w[-m])
        while w and w[-1] == k - 1:
            w.pop()


def lyndon_words_of(w: Multiweight) -> list[Word]:
    """Lyndon words with content exactly w, sorted."""
    items = list(w.items)
    if not items:
        return []
    n = w.total
    counts = [d for _, d in items]
    letters = [g for g, _ in items]
    out: list[Word] = []
    # every Lyndon word starts with its least letter
    counts[0] -= 1
    prefix = [0]

    def rec() -> None:
        if len(prefix) == n:
            word = tuple(letters[i] for i in prefix)
            if is_lyndon(word):
                out.append(word)
            return
        for i in range(len(letters)):
            if counts[i]:
                counts[i] -= 1
                prefix.append(i)
                rec()
                prefix.pop()
                counts[i] += 1

    rec()
    return out


def mobius(n: int) -> int:
    result, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def witt_dimension(k: int, n: int) -> int:
    """Necklace count (1/n) sum_{d|n} mu(d) k^(n/d): Lyndon words of length n on k letters."""
    total = sum(mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


def layer_dimension(w: Multiweight) -> int:
    """Witt's multigraded formula for dim L_w of the free Lie algebra."""
    degs = [d for _, d in w.items]
    if not degs:
        return 0
    n = sum(degs)
    g = math.gcd(*degs)
    total = 0
    for d in range(1, g + 1):
        if g % d == 0:
            multinom = math.factorial(n // d)
            for e in degs:
                multinom //= math.factorial(e // d)
            total += mobius(d) * multinom
    return total // n


class BasisMonomial:
    """A Lyndon word with its standard bracketing."""

    __slots__ = ("word",)

    def __init__(self, word: Sequence[Gen]):
        word = tuple(word)
        if not is_lyndon(word):
            raise PreconditionError(f"{word!r} is not a Lyndon word")
        self.word = word

    @property
    def bracketing(self) -> BracketTree:
        return standard_bracketing(self.word)

    @property
    def weight(self) -> int:
        return len(self.word)

    @property
    def multiweight(self) -> Multiweight:
        return _word_multiweight(self.word)

    def element(self) -> "LieElement":
        return LieElement._raw({self.word: Fraction(1)})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BasisMonomial) and self.word == other.word

    def __lt__(self, other: "BasisMonomial") -> bool:
        return (len(self.word), self.word) < (len(other.word), other.word)

    def __hash__(self) -> int:
        return hash(self.word)

    def __repr__(self) -> str:
        return format_tree(self.bracketing)


def lyndon_basis(generators: Iterable[Gen], max_weight: int) -> dict[int, list[BasisMonomial]]:
    gs = sorted(set(generators))
    if not gs:
        raise PreconditionError("lyndon_basis needs at least one generator")
    if max_weight < 1:
        raise PreconditionError("max_weight must be >= 1")
    layers: dict[int, list[BasisMonomial]] = {n: [] for n in range(1, max_weight + 1)}
    for word in lyndon_words(gs, max_weight):
        layers[len(word)].append(BasisMonomial(word))
    for n in layers:
        layers[n].sort()
    return layers


def layer_basis(w: Multiweight, caps: Caps = DEFAULT_CAPS) -> list[Word]:
    """Sorted Lyndon words of multiweight w, after checking the dimension cap."""
    dim = layer_dimension(w)
    if dim > caps.dim:
        raise ResourceError("dim", caps.dim, dim, f"layer {w!r}")
    return lyndon_words_of(w)


# ---------------------------------------------------------------------------
# Bracket normalization


@lru_cache(maxsize=1 << 20)
def _bracket_words(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    if u == v:
        return ()
    if u > v:
        return tuple((w, -c) for w, c in _bracket_words(v, u))
    if len(u) == 1 or standard_factorization(u)[1] >= v:
        return ((u + v, 1),)
    u1, u2 = standard_factorization(u)
    acc: dict[Word, int] = {}
    for w, c in _bracket_words(u2, v):
        for w2, c2 in _bracket_words(u1, w):
            acc[w2] = acc.get(w2, 0) + c * c2
    for w, c in _bracket_words(u1, v):
        for w2, c2 in _bracket_words(u2, w):
            acc[w2] = acc.get(w2, 0) - c * c2
    return tuple((w, c) for w, c in sorted(acc.items()) if c)


class LieElement:
    """An element of the free Lie algebra over Q, in Lyndon-basis coordinates."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Sequence[Gen], Rational] | None = None):
        acc: dict[Word, Fraction] = {}
        for word, c in (terms or {}).items():
            word = tuple(word)
            if not is_lyndon(word):
                raise PreconditionError(f"{word!r} is not a Lyndon word")
            c = Fraction(c)
            if c:
                acc[word] = acc.get(word, Fraction(0)) + c
        self._terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def _raw(cls, terms: dict[Word, Fraction]) -> "LieElement":
        e = cls.__new__(cls)
        e._terms = terms
        return e

    @classmethod
    def gen(cls, g: Gen) -> "LieElement":
        return cls._raw({(g,): Fraction(1)})

    @classmethod
    def monomial(cls, word: Sequence[Gen]) -> "LieElement":
        return BasisMonomial(word).element()

    @classmethod
    def zero(cls) -> "LieElement":
        return cls._raw({})

    @classmethod
    def parse(cls, text: str) -> "LieElement":
        return parse_element(text)

    @property
    def terms(self) -> Mapping[Word, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LieElement):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "LieElement") -> "LieElement":
        if not isinstance(other, LieElement):
            return NotImplemented
        acc = dict(self._terms)
        for w, c in other._terms.items():
            s = acc.get(w, 0) + c
            if s:
                acc[w] = s
            else:
                acc.pop(w, None)
        return LieElement._raw(acc)

    def __neg__(self) -> "LieElement":
        return LieElement._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def __mul__(self, q: Rational) -> "LieElement":
        if isinstance(q, LieElement):
            return NotImplemented
        q = Fraction(q)
        if not q:
            return LieElement.zero()
        return LieElement._raw({w: c * q for w, c in self._terms.items()})

    __rmul__ = __mul__

    def multiweights(self) -> list[Multiweight]:
        return sorted({_word_multiweight(w) for w in self._terms})

    def is_homogeneous(self) -> bool:
        return len({_word_multiweight(w) for w in self._terms}) <= 1

    @property
    def multiweight(self) -> Multiweight:
        mws = self.multiweights()
        if len(mws) != 1:
            raise PreconditionError("element is not homogeneous (or is zero)")
        return mws[0]

    def generators(self) -> list[Gen]:
        return sorted({g for w in self._terms for g in w})

    def sorted_terms(self) -> list[tuple[Word, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: (len(t[0]), t[0]))

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"LieElement({format_element(self)!r})"


def as_element(x: Union[LieElement, Gen]) -> LieElement:
    return LieElement.gen(x) if isinstance(x, Gen) else x


def bracket(a: Union[LieElement, Gen], b: Union[LieElement, Gen]) -> LieElement:
    a, b = as_element(a), as_element(b)
    acc: dict[Word, Fraction] = {}
    for u, cu in a._terms.items():
        for v, cv in b._terms.items():
            if u == v:
                continue
            coef = cu * cv
            for w, c in _bracket_words(u, v):
                s = acc.get(w, 0) + coef * c
                if s:
                    acc[w] = s
                else:
                    acc.pop(w, None)
    return LieElement._raw(acc)


def left_normed(entries: Sequence[Union[LieElement, Gen]]) -> LieElement:
    """[e1, e2, ..., er] = [[...[e1, e2], ...], er]."""
    if not entries:
        raise PreconditionError("left_normed needs a nonempty sequence")
    acc = as_element(entries[0])
    for e in entries[1:]:
        acc = bracket(acc, e)
    return acc


def component(e: LieElement, w: Multiweight) -> LieElement:
    return LieElement._raw({u: c for u, c in e._terms.items() if _word_multiweight(u) == w})


def homogeneous_components(e: LieElement) -> dict[Multiweight, LieElement]:
    parts: dict[Multiweight, dict[Word, Fraction]] = {}
    for u, c in e._terms.items():
        parts.setdefault(_word_multiweight(u), {})[u] = c
    return {w: LieElement._raw(t) for w, t in sorted(parts.items())}


def evaluate_tree(tree: BracketTree, leaf: Callable[[Gen], LieElement]) -> LieElement:
    if isinstance(tree, Gen):
        return leaf(tree)
    return bracket(evaluate_tree(tree[0], leaf), evaluate_tree(tree[1], leaf))


def substitute(e: LieElement, images: Mapping[Gen, LieElement]) -> LieElement:
    """Apply the endomorphism sending each generator g to images.get(g, g)."""

    def leaf(g: Gen) -> LieElement:
        img = images.get(g)
        return LieElement.gen(g) if img is None else as_element(img)

    acc = LieElement.zero()
    for word, c in e._terms.items():
        acc = acc + evaluate_tree(standard_bracketing(word), leaf) * c
    return acc


def relabel(e: LieElement, fn: Callable[[Gen], Gen]) -> LieElement:
    """Apply the endomorphism induced by the generator map fn."""
    acc: dict[Word, Fraction] = {}
    for word, c in e._terms.items():
        letters = sorted(set(word))
        images = [fn(g) for g in letters]
        if all(images[i] < images[i + 1] for i in range(len(images) - 1)):
            # order-isomorphic relabelings preserve Lyndon words and their bracketing
            table = dict(zip(letters, images))
            new = tuple(table[g] for g in word)
            s = acc.get(new, 0) + c
            if s:
                acc[new] = s
            else:
                acc.pop(new, None)
        else:
            table = dict(zip(letters, images))
            val = evaluate_tree(standard_bracketing(word), lambda g: LieElement.gen(table[g]))
            for w2, c2 in val._terms.items():
                s = acc.get(w2, 0) + c * c2
                if s:
                    acc[w2] = s
                else:
                    acc.pop(w2, None)
    return LieElement._raw(acc)


# ---------------------------------------------------------------------------
# Free associative embedding (the oracle used by tests and the CLI)


def expand_tree(tree: BracketTree) -> dict[Word, int]:
    """Commutator expansion [a, b] = ab - ba of a bracket tree."""
    if isinstance(tree, Gen):
        return {(tree,): 1}
    left, right = expand_tree(tree[0]), expand_tree(tree[1])
    out: dict[Word, int] = {}
    for a, ca in left.items():
        for b, cb in right.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
            out[b + a] = out.get(b + a, 0) - ca * cb
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=1 << 16)
def _expand_word(word: Word) -> tuple[tuple[Word, int], ...]:
    return tuple(sorted(expand_tree(standard_bracketing(word)).items()))


def associative_expansion(e: LieElement) -> dict[Word, Fraction]:
    out: dict[Word, Fraction] = {}
    for word, c in e._terms.items():
        for a, ca in _expand_word(word):
            out[a] = out.get(a, 0) + c * ca
    return {w: c for w, c in out.items() if c}


# ---------------------------------------------------------------------------
# Text format


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_tree(tree: BracketTree) -> str:
    if isinstance(tree, Gen):
        return str(tree)
    entries = [tree[1]]
    left = tree[0]
    while not isinstance(left, Gen):
        entries.append(left[1])
        left = left[0]
    entries.append(left)
    return "[" + ",".join(format_tree(t) for t in reversed(entries)) + "]"


def format_element(e: LieElement) -> str:
    terms = e.sorted_terms()
    if not terms:
        return "0"
    parts = []
    for i, (word, c) in enumerate(terms):
        body = f"{format_rational(abs(c))}*{format_tree(standard_bracketing(word))}"
        if i == 0:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    return "".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<dgen>x\s*\(\s*(?P<r>\d+)\s*,\s*(?P<c>\d+)\s*\))"
    r"|(?P<sgen>x\s*(?P<i>\d+))"
    r"|(?P<num>\d+)"
    r"|(?P<op>[\[\],+\-*/()]))"
)


class ParseError(PreconditionError):
    pass


def _tokenize(text: str) -> list[tuple[str, object]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at column {pos}: {text[pos:pos + 12]!r}")
        pos = m.end()
        if m.group("dgen"):
            out.append(("gen", Gen(int(m.group("r")), int(m.group("c")))))
        elif m.group("sgen"):
            out.append(("gen", Gen(int(m.group("i")))))
        elif m.group("num"):
            out.append(("num", int(m.group("num"))))
        else:
            out.append(("op", m.group("op")))
    out.append(("eof", None))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str, value: object = None):
        tok = self.toks[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or kind}, found {tok[1]!r}")
        self.i += 1
        return tok[1]

    def expr(self) -> LieElement:
        acc = LieElement.zero()
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take("op") == "-" else 1
        acc = acc + self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take("op") == "-" else 1
            acc = acc + self.term() * sign
        return acc

    def number(self) -> Fraction:
        q = Fraction(self.take("num"))
        if self.peek() == ("op", "/"):
            self.take("op", "/")
            q /= self.take("num")
        return q

    def term(self) -> LieElement:
        if self.peek()[0] == "num":
            q = self.number()
            if self.peek() == ("op", "*"):
                self.take("op", "*")
                return self.atom() * q
            if q == 0:
                return LieElement.zero()
            raise ParseError("a nonzero scalar is not a Lie element")
        return self.atom()

    def atom(self) -> LieElement:
        kind, val = self.peek()
        if kind == "gen":
            self.take("gen")
            return LieElement.gen(val)
        if (kind, val) == ("op", "("):
            self.take("op", "(")
            e = self.expr()
            self.take("op", ")")
            return e
        self.take("op", "[")
        entries = [self.expr()]
        while self.peek() == ("op", ","):
            self.take("op", ",")
            entries.append(self.expr())
        self.take("op", "]")
        return left_normed(entries)


def parse_element(text: str) -> LieElement:
    p = _Parser(text)
    e = p.expr()
    p.take("eof")
    return e


def parse_generator(text: str) -> Gen:
    toks = _tokenize(text)
    if len(toks) != 2 or toks[0][0] != "gen":
        raise ParseError(f"not a generator: {text!r}")
    return toks[0][1]
