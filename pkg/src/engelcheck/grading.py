"""Z2-gradings by generator parity, the explicit nilpotency bounds, and
truncated checks of the collection lemma for graded Engel algebras.

Every "verified at weight cap W" statement produced here is a truncated
verification inside the finitely many layers of weight <= W.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

from .config import DEFAULT_CAPS, Caps, PreconditionError, ResourceError
from .identities import ConsequenceEngine, Identity, engel_identity, identity_providers
from .lie import (
    BasisMonomial,
    Gen,
    LieElement,
    Multiweight,
    Word,
    bracket,
    layer_basis,
    left_normed,
    lyndon_words_of,
    ordered_splits,
)
from .linalg import integer_row
from .report import FAIL, PASS, SKIPPED, CheckOutcome

EVEN, ODD = 0, 1


@dataclass(frozen=True)
class GradingAssignment:
    generators: tuple[Gen, ...]
    odd: frozenset[Gen] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(sorted(set(self.generators))))
        object.__setattr__(self, "odd", frozenset(self.odd))
        if not self.odd <= set(self.generators):
            raise PreconditionError("odd generators must be among the working generators")

    @classmethod
    def from_signs(cls, signs: str, generators: Sequence[Gen] | None = None) -> "GradingAssignment":
        """'+' marks an even generator, '-' an odd one: '+-' makes x2 odd."""
        gs = list(generators) if generators is not None else [Gen(i + 1) for i in range(len(signs))]
        if len(gs) != len(signs) or set(signs) - {"+", "-"}:
            raise PreconditionError(f"bad sign vector {signs!r}")
        return cls(tuple(gs), frozenset(g for g, s in zip(gs, signs) if s == "-"))

    def signs(self) -> str:
        return "".join("-" if g in self.odd else "+" for g in self.generators)

    def parity_of(self, g: Gen) -> int:
        if g not in self.generators:
            raise PreconditionError(f"generator {g} has no assigned parity")
        return ODD if g in self.odd else EVEN

    def __str__(self) -> str:
        return ",".join(f"{g}:{'odd' if g in self.odd else 'even'}" for g in self.generators)


def all_gradings(generators: Sequence[Gen]) -> Iterator[GradingAssignment]:
    gs = sorted(generators)
    for signs in product("+-", repeat=len(gs)):
        yield GradingAssignment.from_signs("".join(signs), gs)


def parity(w: Multiweight, g: GradingAssignment) -> int:
    """Parity of the total degree in the odd generators."""
    return sum(d * g.parity_of(x) for x, d in w.items) % 2


def parity_class(c: BasisMonomial | Word, g: GradingAssignment) -> str:
    word = c.word if isinstance(c, BasisMonomial) else tuple(c)
    return "C1" if parity(Multiweight.of_word(word), g) else "C0"


# ---------------------------------------------------------------------------
# Explicit bounds


def _need_n(n: int) -> None:
    if n < 2:
        raise PreconditionError(f"bounds need n >= 2, got n = {n}")


def higgins_bound(n: int, r: int) -> int:
    """Class bound (n^r - 1)/(n - 1) for solvable n-Engel algebras of derived length r."""
    _need_n(n)
    if r < 1:
        raise PreconditionError("derived length must be >= 1")
    return (n**r - 1) // (n - 1)


def lemma1_exponent(n: int, m: int) -> int:
    """Derived length bound (n-1)(m-1) + 1 + m."""
    return (n - 1) * (m - 1) + 1 + m


def lemma1_bound(n: int, m: int) -> tuple[Fraction, int]:
    """The class bound of the graded lemma and K, the least integer above it."""
    _need_n(n)
    if m < 1:
        raise PreconditionError("m must be >= 1")
    bound = Fraction(n ** lemma1_exponent(n, m) - 1, n - 1)
    return bound, math.floor(bound) + 1


@dataclass(frozen=True)
class BoundReport:
    n: int
    m: int
    K: int
    derived_length_bound: int
    higgins_class_bound: int
    lemma1_bound: Fraction

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "K": self.K,
            "derived_length_bound": self.derived_length_bound,
            "higgins_class_bound": self.higgins_class_bound,
            "lemma1_bound": self.lemma1_bound,
        }


def bound_report(n: int, m: int) -> BoundReport:
    bound, K = lemma1_bound(n, m)
    r = lemma1_exponent(n, m)
    rep = BoundReport(n, m, K, r, higgins_bound(n, r), bound)
    assert K > bound >= K - 1
    return rep


def _power_digits(base: int, exponent: int) -> float:
    if base <= 1:
        return 1.0
    return exponent * math.log10(base)


def adjan_razborov_F(n: int, r: int, i: int, caps: Caps = DEFAULT_CAPS) -> int:
    """F(n,r,0) = 1 and F(n,r,i+1) = n * r^(3 F(n,r,i))."""
    if i < 0:
        raise PreconditionError("level i must be >= 0")
    f = 1
    level = 0
    while level < i:
        # estimate before building r^(3f); huge f always exceeds the cap
        if f.bit_length() > 64 or _power_digits(r, 3 * f) + math.log10(max(n, 1)) > caps.digits:
            raise ResourceError("digits", caps.digits, f"~{_estimate(r, f)} digits", f"F({n},{r},{level + 1})")
        nxt = n * r ** (3 * f)
        level += 1
        if nxt == f:
            break  # fixed point (r <= 1): the rest of the tower is constant
        f = nxt
    return f


def _estimate(r: int, f: int) -> str:
    if f.bit_length() > 64:
        return f"3*{f.bit_length()}-bit*log10({r})"
    return str(int(_power_digits(r, 3 * f)) + 1)


@dataclass(frozen=True)
class ARResult:
    value: int
    rounded_exponent: bool


def adjan_razborov_N(n: int, r: int, caps: Caps = DEFAULT_CAPS, round_up: bool = False) -> ARResult:
    """N(n,4) = 6 and N(n,r+1) = F(n, r+1, N(n,r)^2 * 3^((n+6)/2)).

    For odd n the exponent (n+6)/2 is not an integer; that is refused unless
    round_up is set, which uses ceil((n+6)/2) (an upper bound).
    """
    if r < 4:
        raise PreconditionError("N(n, r) is defined for r >= 4")
    rounded = False
    value = 6
    for level in range(4, r):
        if (n + 6) % 2:
            if not round_up:
                raise PreconditionError(f"3^((n+6)/2) is not an integer for odd n = {n}; pass round_up")
            rounded = True
        e = -(-(n + 6) // 2)
        if value.bit_length() > 64:
            raise ResourceError("digits", caps.digits, "tower", f"N({n},{level + 1})")
        index = value**2 * 3**e
        value = adjan_razborov_F(n, level + 1, index, caps)
    return ARResult(value, rounded)


# ---------------------------------------------------------------------------
# Truncated relatively free algebras


def multiweights_upto(generators: Sequence[Gen], max_weight: int) -> list[Multiweight]:
    gs = sorted(generators)
    out = []
    for degs in product(range(max_weight + 1), repeat=len(gs)):
        t = sum(degs)
        if 1 <= t <= max_weight:
            out.append(Multiweight(zip(gs, degs)))
    return sorted(out)


@dataclass
class DerivedSeries:
    tables: list[dict[Multiweight, int]]
    max_weight: int
    derived_length: int | None  # least r with L^(r) = 0 in every layer <= W
    nilpotency_class: int | None  # None when no weight <= W is entirely zero

    def to_dict(self) -> dict:
        return {
            "max_weight": self.max_weight,
            "derived_length": self.derived_length,
            "nilpotency_class": self.nilpotency_class,
            # zero layers are omitted
            "tables": [{repr(w): d for w, d in sorted(t.items()) if d} for t in self.tables],
        }


def derived_series(engine: ConsequenceEngine, generators: Sequence[Gen], max_weight: int) -> DerivedSeries:
    """Layer dimensions of L^(i) in L = free / consequences, for weights <= max_weight."""
    layers = multiweights_upto(generators, max_weight)
    reps: dict[Multiweight, list[LieElement]] = {}
    table0: dict[Multiweight, int] = {}
    for w in layers:
        sp = engine.space(w)
        ech = sp.echelon.copy()
        kept = []
        for u in sp.ambient:
            e = LieElement.monomial(u)
            row, _ = integer_row(sp.coordinates(e))
            if ech.add(row):
                kept.append(e)
        reps[w] = kept
        table0[w] = len(kept)
    tables = [table0]
    while any(tables[-1].values()) and len(tables) <= max_weight.bit_length() + 1:
        nxt_reps: dict[Multiweight, list[LieElement]] = {}
        table: dict[Multiweight, int] = {}
        occupied = [w for w in layers if reps[w]]
        for w in layers:
            sp = engine.space(w)
            ech = sp.echelon.copy()
            kept = []
            for i, w1 in enumerate(occupied):
                for w2 in occupied[i:]:
                    if w1 + w2 != w:
                        continue
                    for a_i, a in enumerate(reps[w1]):
                        for b in reps[w2][a_i + 1 if w1 == w2 else 0:]:
                            v = bracket(a, b)
                            if not v:
                                continue
                            row, _ = integer_row(sp.coordinates(v))
                            if ech.add(row):
                                kept.append(v)
            nxt_reps[w] = kept
            table[w] = len(kept)
        reps = nxt_reps
        tables.append(table)
    derived_length = len(tables) - 1 if not any(tables[-1].values()) else None
    nil_class = None
    for c in range(1, max_weight + 1):
        if all(d == 0 for w, d in table0.items() if w.total == c):
            nil_class = c - 1
            break
    return DerivedSeries(tables, max_weight, derived_length, nil_class)


def derived_series_in_quotient(
    identities: Iterable[Identity], generators: Sequence[Gen], max_weight: int, caps: Caps = DEFAULT_CAPS
) -> DerivedSeries:
    return derived_series(ConsequenceEngine.from_identities(identities, caps), generators, max_weight)


class EvenIdealSeeds:
    """Generators [c1, ..., cm] (c_i even Lyndon monomials) of the ideal I."""

    def __init__(self, m: int, grading: GradingAssignment):
        self.m = m
        self.grading = grading
        self.name = f"I[m={m}; {grading.signs()}]"

    def seeds(self, w: Multiweight) -> Iterator[tuple[Word, ...]]:
        for split in ordered_splits(w, self.m):
            if all(parity(p, self.grading) == EVEN for p in split):
                yield from product(*(lyndon_words_of(p) for p in split))

    def evaluate(self, args: tuple[Word, ...]) -> LieElement:
        return left_normed([LieElement.monomial(u) for u in args])


def graded_engine(n: int, m: int, grading: GradingAssignment, caps: Caps = DEFAULT_CAPS) -> ConsequenceEngine:
    """Consequences of the n-Engel identity plus the ideal generated by m-fold even products."""
    providers = identity_providers([engel_identity(n)]) + [EvenIdealSeeds(m, grading)]
    return ConsequenceEngine(providers, caps)


def _graded_tuples(w: Multiweight, k: int, grading: GradingAssignment) -> Iterator[tuple[Word, ...]]:
    """(b, a1..ak) with b odd and the a_i even Lyndon monomials, multiweights summing to w."""
    for split in ordered_splits(w, k + 1):
        if parity(split[0], grading) != ODD or any(parity(p, grading) != EVEN for p in split[1:]):
            continue
        yield from product(*(lyndon_words_of(p) for p in split))


@dataclass
class Lemma1Report:
    n: int
    m: int
    grading: str
    max_weight: int
    K: int
    collection_threshold: int  # (n-1)(m-1): the collapse holds for k above it
    checks: list[CheckOutcome] = field(default_factory=list)
    first_failing_layer: str | None = None
    derived: DerivedSeries | None = None

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "grading": self.grading,
            "max_weight": self.max_weight,
            "K": self.K,
            "collection_threshold": self.collection_threshold,
            "passed": self.passed,
            "first_failing_layer": self.first_failing_layer,
            "checks": [c.to_dict() for c in self.checks],
            "derived_series": self.derived.to_dict() if self.derived else None,
            "truncated": True,
        }


def verify_lemma1_collection(
    n: int,
    m: int,
    grading: GradingAssignment,
    max_weight: int,
    caps: Caps = DEFAULT_CAPS,
    reduced_k: int | None = None,
) -> Lemma1Report:
    bound, K = lemma1_bound(n, m)
    threshold = (n - 1) * (m - 1)
    rep = Lemma1Report(n, m, str(grading), max_weight, K, threshold)
    engine = graded_engine(n, m, grading, caps)
    layers = multiweights_upto(grading.generators, max_weight)

    # [L1, L0, ..., L0] with k > (n-1)(m-1) entries from L0 dies modulo I
    checked, failures = 0, []
    if not grading.odd:
        rep.checks.append(CheckOutcome("collection", SKIPPED, {}, "no odd generator: L1 = 0, vacuous"))
    else:
        for w in layers:
            for k in range(threshold + 1, w.total):
                for args in _graded_tuples(w, k, grading):
                    e = left_normed([LieElement.monomial(u) for u in args])
                    checked += 1
                    if e and not engine.contains(e):
                        failures.append((w, args))
                        if rep.first_failing_layer is None:
                            rep.first_failing_layer = repr(w)
        rep.checks.append(
            CheckOutcome(
                "collection",
                FAIL if failures else PASS,
                {"elements_checked": checked, "failures": len(failures), "min_entries": threshold + 1},
            )
        )

    # left-normed products of K generators lie in I; beyond the cap a reduced
    # length min(K, W) is tried, where survival is recorded but implies nothing
    length = reduced_k if reduced_k is not None else min(K, max_weight)
    reduced = length < K
    if length > max_weight:
        rep.checks.append(
            CheckOutcome("class_bound", SKIPPED, {"K": K}, f"length {length} lies beyond the weight cap {max_weight}")
        )
    else:
        checked, bad, first_bad = 0, 0, None
        for ell in range(length, max_weight + 1):
            for seq in product(grading.generators, repeat=ell):
                e = left_normed(list(seq))
                checked += 1
                if e and not engine.contains(e):
                    bad += 1
                    first_bad = first_bad or repr(e.multiweight)
        detail = {"K": K, "length": length, "reduced": reduced, "products_checked": checked, "failures": bad}
        if not bad:
            rep.checks.append(CheckOutcome("class_bound", PASS, detail))
        elif reduced:
            why = f"products of length {length} < K = {K} survive; only length K is claimed"
            rep.checks.append(CheckOutcome("class_bound", SKIPPED, detail, why))
        else:
            rep.first_failing_layer = rep.first_failing_layer or first_bad
            rep.checks.append(CheckOutcome("class_bound", FAIL, detail))

    # observed derived length / class against the lemma's and Higgins's bounds
    ds = derived_series(engine, grading.generators, max_weight)
    rep.derived = ds
    r_bound = lemma1_exponent(n, m)
    if ds.derived_length is None:
        rep.checks.append(CheckOutcome("derived_length", SKIPPED, {}, "derived series does not vanish below the cap"))
    else:
        ok = ds.derived_length <= r_bound
        rep.checks.append(
            CheckOutcome("derived_length", PASS if ok else FAIL, {"observed": ds.derived_length, "bound": r_bound})
        )
    rep.checks.append(higgins_consistency(n, ds))
    return rep


def higgins_consistency(n: int, ds: DerivedSeries) -> CheckOutcome:
    """Observed class never exceeds the Higgins bound for the observed derived length."""
    if ds.nilpotency_class is None or ds.derived_length is None:
        return CheckOutcome("higgins", SKIPPED, {}, "class or derived length not determined below the cap")
    if ds.derived_length == 0:
        return CheckOutcome("higgins", PASS, {"class": ds.nilpotency_class, "derived_length": 0, "bound": 0})
    hb = higgins_bound(n, ds.derived_length)
    return CheckOutcome(
        "higgins",
        PASS if ds.nilpotency_class <= hb else FAIL,
        {"class": ds.nilpotency_class, "derived_length": ds.derived_length, "bound": hb},
    )


@dataclass
class TMeasurement:
    n: int
    m: int
    reduced_k: int
    per_grading: dict[str, int | None]

    @property
    def T(self) -> int | None:
        vals = [v for v in self.per_grading.values() if v is not None]
        return max(vals) if vals else None

    @property
    def all_expressible(self) -> bool:
        return all(v is not None for v in self.per_grading.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "reduced_k": self.reduced_k,
            "T": self.T,
            "all_expressible": self.all_expressible,
            "per_grading": dict(sorted(self.per_grading.items())),
        }


def measure_T(n: int, m: int, reduced_k: int, caps: Caps = DEFAULT_CAPS) -> TMeasurement:
    """Number of ideal generators used by the certificate of [x1, ..., xK], per grading.

    None marks a grading for which [x1..xK] is not in the ideal at this
    reduced K (the lemma only promises it at the true K).
    """
    gs = [Gen(i) for i in range(1, reduced_k + 1)]
    target = left_normed(gs)
    out: dict[str, int | None] = {}
    for g in all_gradings(gs):
        engine = graded_engine(n, m, g, caps)
        seed_index = len(engine.providers) - 1
        cert = engine.certificate(target)
        if cert is None:
            out[g.signs()] = None
        else:
            if not cert.verify():
                raise AssertionError("certificate does not re-evaluate to its target")
            out[g.signs()] = cert.count_by_provider().get(seed_index, 0)
    return TMeasurement(n, m, reduced_k, out)
