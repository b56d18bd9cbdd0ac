"""Identities, linearization and consequence checking in relatively free algebras.

The consequence space of a multiweight layer w is built recursively::

    C(w) = span( instances landing exactly in w )
         + sum over generators a in w of [C(w - a), a]

The second term is the ideal closure (an ideal generated by a set is
spanned by left-normed products with generators); the first enumerates
substitutions of Lyndon monomials into fully linearized identities, which in
characteristic zero spans the verbal part of the layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Hashable, Iterable, Iterator, Protocol, Sequence, Union

from .config import DEFAULT_CAPS, Caps, PreconditionError, ResourceError
from .lie import (
    Gen,
    LieElement,
    Multiweight,
    Word,
    as_element,
    bracket,
    component,
    homogeneous_components,
    layer_basis,
    left_normed,
    lyndon_words_of,
    ordered_splits,
    parse_element,
    parse_generator,
    standard_bracketing,
    sub_multiweights,
    substitute,
)
from .linalg import RowEchelon, integer_row


@dataclass(frozen=True)
class Identity:
    body: LieElement
    variables: tuple[Gen, ...] = ()
    name: str = ""

    def __post_init__(self):
        if not self.body:
            raise PreconditionError("the zero identity is rejected")
        occurring = self.body.generators()
        declared = tuple(dict.fromkeys(self.variables)) or tuple(occurring)
        missing = [g for g in occurring if g not in declared]
        if missing:
            raise PreconditionError(f"generators {missing} occur in the body but are not variables")
        object.__setattr__(self, "variables", declared)

    def degree(self, g: Gen) -> set[int]:
        return {mw.degree(g) for mw in self.body.multiweights()}

    def linearized(self) -> list[tuple[LieElement, tuple[Gen, ...]]]:
        """Full linearizations of the multihomogeneous components."""
        return _linearize(self)

    def __str__(self) -> str:
        return str(self.body)


def engel_identity(n: int) -> Identity:
    """[y, x, ..., x] with n copies of x; y = x1 and x = x2."""
    if n < 1:
        raise PreconditionError("Engel degree must be >= 1")
    y, x = Gen(1), Gen(2)
    return Identity(left_normed([y] + [x] * n), (y, x), name=f"{n}-Engel")


# ---------------------------------------------------------------------------
# Polarization


def _positional_tree(word: Word, offset: int = 0):
    if len(word) == 1:
        return offset
    from .lie import standard_factorization

    u, v = standard_factorization(word)
    return (_positional_tree(u, offset), _positional_tree(v, offset + len(u)))


def _eval_positional(tree, leaves: Sequence[LieElement]) -> LieElement:
    if isinstance(tree, int):
        return leaves[tree]
    return bracket(_eval_positional(tree[0], leaves), _eval_positional(tree[1], leaves))


def _distinct_arrangements(labels: list[int]) -> Iterator[tuple[int, ...]]:
    labels = sorted(labels)
    n = len(labels)
    counts: dict[int, int] = {}
    for x in labels:
        counts[x] = counts.get(x, 0) + 1
    keys = sorted(counts)
    cur: list[int] = []

    def rec():
        if len(cur) == n:
            yield tuple(cur)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                cur.append(k)
                yield from rec()
                cur.pop()
                counts[k] += 1

    yield from rec()


def _polarize_element(body: LieElement, variable: Gen, degrees: Sequence[int], fresh: Sequence[Gen]) -> LieElement:
    labels = [i for i, d in enumerate(degrees) for _ in range(d)]
    acc = LieElement.zero()
    for word, c in body.items():
        positions = [p for p, g in enumerate(word) if g == variable]
        if len(positions) != len(labels):
            continue
        tree = _positional_tree(word)
        base = [LieElement.gen(g) for g in word]
        for arrangement in _distinct_arrangements(labels):
            leaves = list(base)
            for p, lab in zip(positions, arrangement):
                leaves[p] = LieElement.gen(fresh[lab])
            acc = acc + _eval_positional(tree, leaves) * c
    return acc


def polarize(identity: Identity, variable: Gen, parts: int, fresh: Sequence[Gen]) -> Identity:
    """Substitute sum(fresh) for variable and keep the part linear in each fresh generator.

    When parts is below the degree d the last fresh generator absorbs the
    remaining degree d - parts + 1, so parts == d is the usual multilinear step.
    """
    fresh = tuple(fresh)
    if variable not in identity.variables:
        raise PreconditionError(f"{variable} is not a variable of the identity")
    if len(fresh) != parts or len(set(fresh)) != parts:
        raise PreconditionError("need exactly `parts` distinct fresh generators")
    if set(fresh) & set(identity.variables):
        raise PreconditionError("fresh generators must be unused in the identity")
    degs = identity.degree(variable)
    if len(degs) != 1:
        raise PreconditionError(f"identity is not homogeneous in {variable}")
    d = degs.pop()
    if d < parts:
        raise PreconditionError(f"cannot polarize below degree: degree {d} < parts {parts}")
    degrees = [1] * (parts - 1) + [d - parts + 1]
    body = _polarize_element(identity.body, variable, degrees, fresh)
    variables = tuple(g for g in identity.variables if g != variable) + fresh
    return Identity(body, variables, name=identity.name)


def _fresh_generators(avoid: Iterable[Gen], count: int) -> list[Gen]:
    top = max([g.row for g in avoid if not g.is_double] + [0])
    return [Gen(top + 1 + i) for i in range(count)]


def _linearize(identity: Identity) -> list[tuple[LieElement, tuple[Gen, ...]]]:
    out = []
    for mw, part in homogeneous_components(identity.body).items():
        body = part
        variables = [g for g in identity.variables if mw.degree(g)]
        used = set(identity.variables)
        for g in list(variables):
            d = mw.degree(g)
            if d > 1:
                fresh = _fresh_generators(used, d)
                used |= set(fresh)
                body = _polarize_element(body, g, [1] * d, fresh)
                variables.remove(g)
                variables.extend(fresh)
        if body:
            out.append((body, tuple(variables)))
    return out


# ---------------------------------------------------------------------------
# Relation (1): k repeated commutators polarized over column-indexed generators


class _Moving:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "MOVING"


MOVING = _Moving()

Slot = Union[_Moving, LieElement, Gen]


def default_skeleton(k: int) -> tuple[Slot, ...]:
    return (MOVING,) * k


def skeleton_with_gaps(k: int, gaps_after: Sequence[Sequence[Slot]]) -> tuple[Slot, ...]:
    """Moving slots with gaps_after[r] inserted after the r-th moving slot."""
    slots: list[Slot] = []
    for r in range(k):
        slots.append(MOVING)
        if r < len(gaps_after):
            slots.extend(gaps_after[r])
    return tuple(slots)


@dataclass(frozen=True)
class ExpandedRelation:
    """The raw expansion of relation (1) before and after normalization."""

    m: int
    k: int
    skeleton: tuple[Slot, ...]
    terms: tuple[tuple[LieElement, ...], ...]  # unnormalized left-normed entry lists
    body: LieElement

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def identity(self) -> Identity:
        return Identity(self.body, tuple(self.body.generators()), name=f"relation1(m={self.m},k={self.k})")


def expand_relation_one(m: int, k: int, skeleton: Sequence[Slot] | None = None) -> ExpandedRelation:
    if m < 1 or k < 2:
        raise PreconditionError("relation (1) needs m >= 1 and k >= 2")
    skeleton = tuple(skeleton) if skeleton is not None else default_skeleton(k)
    if sum(1 for s in skeleton if s is MOVING) != k:
        raise PreconditionError(f"skeleton must contain exactly {k} moving slots")
    moving_gens = {Gen(j, i) for j in range(1, k + 1) for i in range(1, m + 1)}
    for s in skeleton:
        if s is not MOVING and set(as_element(s).generators()) & moving_gens:
            raise PreconditionError("skeleton entries must avoid the moving generators")
    perms = list(permutations(range(1, k + 1)))
    terms = []
    body = LieElement.zero()
    for sigmas in product(perms, repeat=m):
        entries = []
        r = 0
        for s in skeleton:
            if s is MOVING:
                r += 1
                entries.append(left_normed([Gen(sigmas[i][r - 1], i + 1) for i in range(m)]))
            else:
                entries.append(as_element(s))
        terms.append(tuple(entries))
        body = body + left_normed(entries)
    return ExpandedRelation(m, k, skeleton, tuple(terms), body)


# ---------------------------------------------------------------------------
# Instance providers and the consequence engine


class InstanceProvider(Protocol):
    name: str

    def seeds(self, w: Multiweight) -> Iterable[Hashable]: ...

    def evaluate(self, args: Hashable) -> LieElement: ...


def _monomial_tuples(parts: Sequence[Multiweight]) -> Iterator[tuple[Word, ...]]:
    yield from product(*(lyndon_words_of(p) for p in parts))


class LinearizedIdentity:
    """Substitutions of Lyndon monomials into one multilinear identity body."""

    def __init__(self, body: LieElement, variables: Sequence[Gen], name: str = ""):
        self.body = body
        self.variables = tuple(variables)
        self.name = name or str(body)

    def seeds(self, w: Multiweight) -> Iterator[tuple[Word, ...]]:
        for split in ordered_splits(w, len(self.variables)):
            yield from _monomial_tuples(split)

    def evaluate(self, args: tuple[Word, ...]) -> LieElement:
        images = {v: LieElement.monomial(u) for v, u in zip(self.variables, args)}
        return substitute(self.body, images)


def identity_providers(identities: Iterable[Identity]) -> list[LinearizedIdentity]:
    out = []
    for ident in identities:
        for body, variables in ident.linearized():
            out.append(LinearizedIdentity(body, variables, ident.name or str(ident)))
    return out


@dataclass(frozen=True)
class Instance:
    provider: int
    args: Hashable
    padding: tuple[Gen, ...] = ()


class _Target:
    def __repr__(self) -> str:
        return "TARGET"


_TARGET = _Target()


@dataclass(frozen=True)
class Certificate:
    target: LieElement
    terms: tuple[tuple[Instance, Fraction], ...]
    providers: tuple = field(repr=False, compare=False, default=())

    def value(self, inst: Instance) -> LieElement:
        base = self.providers[inst.provider].evaluate(inst.args)
        return left_normed([base, *inst.padding]) if inst.padding else base

    def evaluate(self) -> LieElement:
        acc = LieElement.zero()
        for inst, c in self.terms:
            acc = acc + self.value(inst) * c
        return acc

    def verify(self) -> bool:
        return self.evaluate() == self.target

    def count_by_provider(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for inst, _ in self.terms:
            out[inst.provider] = out.get(inst.provider, 0) + 1
        return out

    def __len__(self) -> int:
        return len(self.terms)


class ConsequenceSpace:
    def __init__(self, w: Multiweight, ambient: list[Word], echelon: RowEchelon, providers: tuple):
        self.target_multiweight = w
        self.ambient = ambient
        self.index = {u: i for i, u in enumerate(ambient)}
        self.echelon = echelon
        self.providers = providers

    @property
    def ambient_dim(self) -> int:
        return len(self.ambient)

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def quotient_dim(self) -> int:
        return self.ambient_dim - self.rank

    @property
    def basis(self) -> list[dict[int, int]]:
        return self.echelon.basis()

    def coordinates(self, e: LieElement) -> dict[int, Fraction]:
        coords = {}
        for u, c in e.items():
            j = self.index.get(u)
            if j is None:
                raise PreconditionError(f"element has a term outside layer {self.target_multiweight!r}")
            coords[j] = c
        return coords

    def element(self, row: dict[int, int]) -> LieElement:
        return LieElement({self.ambient[j]: v for j, v in row.items()})

    def reduce(self, e: LieElement) -> LieElement:
        row, _ = integer_row(self.coordinates(e))
        red, _ = self.echelon.reduce(row)
        return self.element(red)

    def contains(self, e: LieElement) -> bool:
        if not e:
            return True
        row, _ = integer_row(self.coordinates(e))
        red, _ = self.echelon.reduce(row)
        return not red

    def certificate(self, e: LieElement) -> Certificate | None:
        if not e:
            return Certificate(e, (), self.providers)
        row, scale = integer_row(self.coordinates(e))
        red, cert = self.echelon.reduce(row, {_TARGET: Fraction(scale)})
        if red:
            return None
        t = cert.pop(_TARGET)
        terms = tuple(sorted(((k, -c / t) for k, c in cert.items() if c), key=_instance_key))
        return Certificate(e, terms, self.providers)


def _instance_key(item):
    inst = item[0]
    return (inst.provider, repr(inst.args), inst.padding)


class ConsequenceEngine:
    """Memoized consequence spaces for a fixed tuple of instance providers."""

    def __init__(self, providers: Sequence[InstanceProvider], caps: Caps = DEFAULT_CAPS, track: bool = True):
        self.providers = tuple(providers)
        self.caps = caps
        self.track = track
        self._spaces: dict[Multiweight, ConsequenceSpace] = {}

    @classmethod
    def from_identities(cls, identities: Iterable[Identity], caps: Caps = DEFAULT_CAPS, **kw) -> "ConsequenceEngine":
        return cls(identity_providers(identities), caps, **kw)

    def space(self, w: Multiweight) -> ConsequenceSpace:
        cached = self._spaces.get(w)
        if cached is not None:
            return cached
        ambient = layer_basis(w, self.caps)
        sp = ConsequenceSpace(w, ambient, RowEchelon(len(ambient), self.track), self.providers)
        ech = sp.echelon
        if ambient and self.providers:
            for a in w.support:
                sub = w - Multiweight({a: 1})
                if not sub or ech.is_full():
                    continue
                lower = self.space(sub)
                for p in sorted(lower.echelon.rows):
                    if ech.is_full():
                        break
                    lrow, lcert = lower.echelon.rows[p]
                    v = bracket(lower.element(lrow), a)
                    if not v:
                        continue
                    row, scale = integer_row(sp.coordinates(v))
                    cert = {Instance(k.provider, k.args, k.padding + (a,)): c * scale for k, c in lcert.items()}
                    ech.add(row, cert)
            for pi, prov in enumerate(self.providers):
                if ech.is_full():
                    break
                for args in prov.seeds(w):
                    if ech.is_full():
                        break
                    v = prov.evaluate(args)
                    if not v:
                        continue
                    row, scale = integer_row(sp.coordinates(v))
                    ech.add(row, {Instance(pi, args): Fraction(scale)})
        self._spaces[w] = sp
        return sp

    def contains(self, e: LieElement) -> bool:
        if not e:
            return True
        return self.space(_homogeneous_weight(e)).contains(e)

    def certificate(self, e: LieElement) -> Certificate | None:
        if not e:
            return Certificate(e, (), self.providers)
        return self.space(_homogeneous_weight(e)).certificate(e)


def _homogeneous_weight(e: LieElement) -> Multiweight:
    if not e.is_homogeneous():
        raise PreconditionError("target must be homogeneous in one multiweight")
    return e.multiweight


def consequence_space(identities: Iterable[Identity], w: Multiweight, caps: Caps = DEFAULT_CAPS) -> ConsequenceSpace:
    return ConsequenceEngine.from_identities(identities, caps).space(w)


def is_consequence(
    target: LieElement, identities: Iterable[Identity], caps: Caps = DEFAULT_CAPS
) -> tuple[bool, Certificate | None]:
    engine = ConsequenceEngine.from_identities(identities, caps)
    cert = engine.certificate(target)
    return cert is not None, cert


def _padding_orders(w: Multiweight) -> Iterator[tuple[Gen, ...]]:
    letters = [g for g, d in w.items for _ in range(d)]
    index = {g: i for i, g in enumerate(w.support)}
    for arr in _distinct_arrangements([index[g] for g in letters]):
        yield tuple(w.support[i] for i in arr)


def substitution_instances(
    identity: Identity, w: Multiweight, max_entries: int = 200_000, caps: Caps = DEFAULT_CAPS
) -> set[LieElement]:
    """Brute-force enumeration of every padded substitution instance in layer w.

    This is the direct route; ConsequenceEngine is the recursive one and the
    two are cross-checked by the tests.
    """
    layer_basis(w, caps)  # dimension cap
    out: set[LieElement] = set()
    count = 0
    for prov in identity_providers([identity]):
        for core in sub_multiweights(w):
            rest = w - core
            pads = list(_padding_orders(rest)) if rest else [()]
            for args in prov.seeds(core):
                base = prov.evaluate(args)
                if not base:
                    continue
                for pad in pads:
                    count += 1
                    if count > max_entries:
                        raise ResourceError("instances", max_entries, count, f"layer {w!r}")
                    v = left_normed([base, *pad]) if pad else base
                    if v:
                        out.add(v)
    return out


# ---------------------------------------------------------------------------
# Identity files and consequence reports


def read_identities(text: str) -> list[Identity]:
    """One identity per line; a ``vars:`` line declares variables for the following lines."""
    out = []
    variables: tuple[Gen, ...] = ()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vars:"):
            names = [s for s in line[5:].replace(",", " ").split() if s]
            variables = tuple(parse_generator(s) for s in names)
            continue
        try:
            body = parse_element(line)
        except PreconditionError as exc:
            raise PreconditionError(f"line {lineno}: {exc}") from exc
        out.append(Identity(body, variables, name=line))
    return out


def write_identities(identities: Iterable[Identity]) -> str:
    lines = []
    for ident in identities:
        lines.append("vars: " + ", ".join(str(g) for g in ident.variables))
        lines.append(str(ident.body))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ConsequenceReport:
    name: str
    multiweight: Multiweight
    ambient_dim: int
    rank: int
    quotient_dim: int
    certificate_present: bool
    is_consequence: bool | None = None
    certificate_terms: int | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "multiweight": repr(self.multiweight),
            "ambient_dim": self.ambient_dim,
            "rank": self.rank,
            "quotient_dim": self.quotient_dim,
            "certificate_present": self.certificate_present,
            "is_consequence": self.is_consequence,
            "certificate_terms": self.certificate_terms,
        }


def consequence_report(
    name: str, target: LieElement, identities: Sequence[Identity], caps: Caps = DEFAULT_CAPS
) -> tuple[ConsequenceReport, Certificate | None]:
    engine = ConsequenceEngine.from_identities(identities, caps)
    w = _homogeneous_weight(target)
    sp = engine.space(w)
    cert = sp.certificate(target)
    ok = cert is not None and cert.verify()
    rep = ConsequenceReport(
        name, w, sp.ambient_dim, sp.rank, sp.quotient_dim, cert is not None, ok, len(cert) if cert else None
    )
    return rep, cert


def describe_instance(cert: Certificate, inst: Instance) -> str:
    prov = cert.providers[inst.provider]
    subs = ", ".join(
        f"{v}->{_format_word(u)}" for v, u in zip(getattr(prov, "variables", ()), inst.args)
    ) if isinstance(prov, LinearizedIdentity) else repr(inst.args)
    pad = "".join(f", {g}" for g in inst.padding)
    return f"[{prov.name} | {subs}{pad}]" if pad else f"{prov.name} | {subs}"


def _format_word(u: Word) -> str:
    from .lie import format_tree

    return format_tree(standard_bracketing(u))
