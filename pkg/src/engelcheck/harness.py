"""The symmetrized-sum pipeline at toy parameters.

Moving entries are t_i = [x_(i,1), ..., x_(i,K)] (or the theta_i image of
another core element); Sym(R) acts on column j by x_(i,j) -> x_(i sigma, j),
and a '-' column weights each term by the sign of its permutation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Iterator, Sequence

from .config import DEFAULT_CAPS, Caps, PreconditionError, ResourceError
from .grading import GradingAssignment, bound_report, graded_engine, measure_T, parity
from .identities import (
    MOVING,
    ConsequenceEngine,
    Identity,
    Slot,
    engel_identity,
    expand_relation_one,
    identity_providers,
    skeleton_with_gaps,
)
from .lie import Gen, LieElement, Multiweight, as_element, left_normed, relabel
from .report import FAIL, PASS, SKIPPED, CheckOutcome
from .symgroup import Permutation

PLUS, MINUS = "+", "-"


@dataclass(frozen=True)
class SymmetrizedSumSpec:
    R: int
    K: int
    epsilons: tuple[str, ...]
    skeleton: tuple[Slot, ...] | None = None  # None: R moving slots, no gaps
    core: LieElement | None = None  # None: [x1, ..., xK]

    def __post_init__(self):
        object.__setattr__(self, "epsilons", tuple(self.epsilons))
        if self.R < 1 or self.K < 1:
            raise PreconditionError("R and K must be >= 1")
        if len(self.epsilons) != self.K or set(self.epsilons) - {PLUS, MINUS}:
            raise PreconditionError(f"need {self.K} signs from '+-', got {self.epsilons}")
        skel = self.slots
        if sum(1 for s in skel if s is MOVING) != self.R:
            raise PreconditionError(f"skeleton must contain exactly {self.R} moving slots")
        moving = self.moving_generators()
        for s in skel:
            if s is not MOVING:
                shared = set(as_element(s).generators()) & moving
                if shared:
                    raise PreconditionError(f"gap entry {s} uses moving generators {sorted(shared)}")
        for g in self.core_element.generators():
            if g.is_double or g.row > self.K:
                raise PreconditionError(f"core element must live in x1..x{self.K}, found {g}")

    @property
    def slots(self) -> tuple[Slot, ...]:
        return self.skeleton if self.skeleton is not None else (MOVING,) * self.R

    @property
    def core_element(self) -> LieElement:
        return self.core if self.core is not None else left_normed([Gen(j) for j in range(1, self.K + 1)])

    def moving_generators(self) -> set[Gen]:
        return {Gen(i, j) for i in range(1, self.R + 1) for j in range(1, self.K + 1)}

    def entry(self, i: int) -> LieElement:
        return endomorphism_theta(i, self.K)(self.core_element)


def endomorphism_theta(i: int, K: int):
    """x_j -> x_(i,j) for j <= K."""
    if i < 1 or K < 1:
        raise PreconditionError("theta needs i, K >= 1")

    def fn(g: Gen) -> Gen:
        if not g.is_double and g.row <= K:
            return Gen(i, g.row)
        return g

    def theta(e: LieElement | Gen) -> LieElement:
        return relabel(as_element(e), fn)

    return theta


def act_columns(sigmas: Sequence[Permutation], e: LieElement) -> LieElement:
    """Apply sigma_1 ... sigma_K at once; sigma_j moves the rows of column j."""

    def fn(g: Gen) -> Gen:
        if g.is_double and g.col <= len(sigmas):
            return Gen(sigmas[g.col - 1](g.row), g.col)
        return g

    return relabel(e, fn)


def column_sign(sigmas: Sequence[Permutation], epsilons: Sequence[str]) -> int:
    s = 1
    for p, eps in zip(sigmas, epsilons):
        if eps == MINUS:
            s *= p.sign
    return s


def _all_sigmas(R: int, K: int) -> Iterator[tuple[Permutation, ...]]:
    group = [Permutation(p) for p in permutations(range(1, R + 1))]
    return product(group, repeat=K)


def term_entries(spec: SymmetrizedSumSpec, sigmas: Sequence[Permutation]) -> tuple[LieElement, ...]:
    """Entries of the single term indexed by sigmas, gap entries untouched."""
    out = []
    r = 0
    for s in spec.slots:
        if s is MOVING:
            r += 1
            out.append(act_columns(sigmas, spec.entry(r)))
        else:
            out.append(as_element(s))
    return tuple(out)


def _factorial(n: int) -> int:
    f = 1
    for i in range(2, n + 1):
        f *= i
    return f


def build_symmetrized_sum(spec: SymmetrizedSumSpec, caps: Caps = DEFAULT_CAPS) -> tuple[LieElement, int]:
    """The expanded sum and its raw number of terms (R!)^K before normalization."""
    count = _factorial(spec.R) ** spec.K
    if count > caps.instances:
        raise ResourceError("instances", caps.instances, count, f"(R!)^K with R={spec.R}, K={spec.K}")
    total = LieElement.zero()
    for sigmas in _all_sigmas(spec.R, spec.K):
        total = total + left_normed(term_entries(spec, sigmas)) * column_sign(sigmas, spec.epsilons)
    return total, count


# ---------------------------------------------------------------------------
# The tau swap


@dataclass
class TauSwapResult:
    ok: bool
    pairs_checked: int
    terms_checked: int
    failure: str | None = None
    symmetric: bool | None = None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "pairs_checked": self.pairs_checked,
            "terms_checked": self.terms_checked,
            "failure": self.failure,
            "sum_symmetric": self.symmetric,
        }


def _moving_positions(spec: SymmetrizedSumSpec) -> list[int]:
    return [p for p, s in enumerate(spec.slots) if s is MOVING]


def check_tau_swap(spec: SymmetrizedSumSpec, positions: Sequence[int], c1_weight: int) -> TauSwapResult:
    """Swap argument for c1 = [x1, ..., xq] inside t_i = [c1, x_{q+1}, ..., x_K].

    positions are 1-based moving-slot numbers.  For every sigma and i < j
    among them, tau = tau_1 ... tau_q (tau_s swaps rows i sigma_s and
    j sigma_s of column s) must exchange the c1 parts of slots i and j, fix
    every other generator occurrence, and carry sign +.
    """
    q = c1_weight
    if not 1 <= q <= spec.K:
        raise PreconditionError(f"c1 weight must lie in 1..{spec.K}")
    if spec.core is not None:
        raise PreconditionError("the swap check uses the default entries t_i")
    odd = sum(1 for s in spec.epsilons[:q] if s == MINUS)
    if odd % 2:
        raise PreconditionError(f"c1 = [x1..x{q}] is odd under {''.join(spec.epsilons)}")
    positions = sorted(set(positions))
    if len(positions) < 2 or positions[0] < 1 or positions[-1] > spec.R:
        raise PreconditionError(f"need at least two slot numbers in 1..{spec.R}")
    R, K = spec.R, spec.K
    pairs, terms = 0, 0
    for sigmas in _all_sigmas(R, K):
        terms += 1
        # generator rows per slot: slot i column s holds x_(i sigma_s, s)
        rows = {i: [sigmas[s](i) for s in range(K)] for i in range(1, R + 1)}
        for i, j in combinations(positions, 2):
            pairs += 1
            taus = [Permutation.transposition(R, rows[i][s], rows[j][s]) for s in range(q)]
            swapped = [sigmas[s] * taus[s] for s in range(q)] + list(sigmas[q:])
            new_rows = {l: [swapped[s](l) for s in range(K)] for l in range(1, R + 1)}
            expect = {l: list(r) for l, r in rows.items()}
            expect[i][:q], expect[j][:q] = rows[j][:q], rows[i][:q]
            where = f"sigma=({', '.join(str(p) for p in sigmas)}), i={i}, j={j}"
            if new_rows != expect:
                return TauSwapResult(False, pairs, terms, f"entries not swapped as claimed at {where}")
            if column_sign(swapped, spec.epsilons) != column_sign(sigmas, spec.epsilons):
                return TauSwapResult(False, pairs, terms, f"sign of tau is - at {where}")
    symmetric = _sum_symmetric(spec, positions, q)
    return TauSwapResult(symmetric, pairs, terms, None if symmetric else "sum not symmetric", symmetric)


def _sum_symmetric(spec: SymmetrizedSumSpec, positions: Sequence[int], q: int) -> bool:
    """The whole sum is unchanged when the c1 parts of two chosen slots are exchanged."""
    total, _ = build_symmetrized_sum(spec)
    slot_index = _moving_positions(spec)
    for i, j in combinations(positions, 2):
        other = LieElement.zero()
        for sigmas in _all_sigmas(spec.R, spec.K):
            entries = list(term_entries(spec, sigmas))
            gi = [Gen(sigmas[s](i), s + 1) for s in range(spec.K)]
            gj = [Gen(sigmas[s](j), s + 1) for s in range(spec.K)]
            entries[slot_index[i - 1]] = left_normed(gj[:q] + gi[q:])
            entries[slot_index[j - 1]] = left_normed(gi[:q] + gj[q:])
            other = other + left_normed(entries) * column_sign(sigmas, spec.epsilons)
        if other != total:
            return False
    return True


# ---------------------------------------------------------------------------
# Relation (1) implies the symmetrized sums built from even commutators


def even_commutators(subset: Sequence[int], grading: GradingAssignment) -> list[LieElement]:
    """Left-normed commutators on the generators x_s (s in subset), up to sign, if even."""
    gs = [Gen(s) for s in subset]
    if parity(Multiweight.multilinear(gs), grading):
        return []
    seen: set[LieElement] = set()
    out = []
    for perm in permutations(gs):
        e = left_normed(list(perm))
        if not e or e in seen or -e in seen:
            continue
        seen.add(e)
        out.append(e)
    return out


def _disjoint_subset_tuples(K: int, m: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    universe = list(range(1, K + 1))

    def rec(used: frozenset, left: int):
        if left == 0:
            yield ()
            return
        free = [s for s in universe if s not in used]
        for size in range(1, len(free) + 1):
            for sub in combinations(free, size):
                for tail in rec(used | set(sub), left - 1):
                    yield (sub,) + tail

    yield from rec(frozenset(), m)


def ideal_cores(K: int, m: int, grading: GradingAssignment) -> list[tuple[tuple[LieElement, ...], LieElement]]:
    """(c_1..c_m, [c_1..c_m]) for even multilinear c_i on disjoint subsets of x1..xK.

    Duplicates up to sign are dropped; a zero product is dropped too.
    """
    out = []
    seen: set[LieElement] = set()
    for subs in _disjoint_subset_tuples(K, m):
        choices = [even_commutators(s, grading) for s in subs]
        for cs in product(*choices):
            u = left_normed(list(cs))
            if not u or u in seen or -u in seen:
                continue
            seen.add(u)
            out.append((cs, u))
    return out


def gap_generator(r: int, K: int) -> Gen:
    """The fixed generator placed after moving slot r; column K+1 is never permuted."""
    return Gen(r, K + 1)


def gap_family(k: int, K: int) -> list[tuple[str, tuple[Slot, ...]]]:
    """No gaps, one gap after a single slot, and one gap after every slot."""
    out = [("none", skeleton_with_gaps(k, []))]
    for r in range(1, k + 1):
        gaps = [[] for _ in range(k)]
        gaps[r - 1] = [gap_generator(r, K)]
        out.append((f"after{r}", skeleton_with_gaps(k, gaps)))
    if k > 1:
        out.append(("all", skeleton_with_gaps(k, [[gap_generator(r, K)] for r in range(1, k + 1)])))
    return out


def _skeleton_weight(skeleton: Sequence[Slot]) -> int:
    return sum(as_element(s).multiweight.total for s in skeleton if s is not MOVING)


@dataclass
class HarnessReport:
    params: dict
    checks: list[CheckOutcome] = field(default_factory=list)
    term_counts: dict = field(default_factory=dict)
    measured_T: dict = field(default_factory=dict)
    reference_bounds: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    timings: dict | None = None

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        d = {
            "params": self.params,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "term_counts": self.term_counts,
            "measured_T": self.measured_T,
            "reference_bounds": self.reference_bounds,
            "notes": self.notes,
            "truncated": True,
        }
        if self.timings is not None:
            d["timings"] = self.timings
        return d


def verify_eq1_implies_vanishing(
    n: int,
    k: int,
    m: int,
    reduced_K: int,
    max_weight: int,
    caps: Caps = DEFAULT_CAPS,
    timings: bool = False,
) -> HarnessReport:
    """For every sign vector and every even core [c1..cm], the symmetrized sum
    with R = k moving slots is a consequence of relation (1) (same skeleton)
    together with the n-Engel identity."""
    if k < 2:
        raise PreconditionError("k must be > 1")
    if m < 1 or reduced_K < 1 or n < 1:
        raise PreconditionError("n, m and K must be >= 1")
    t0 = time.perf_counter()
    rep = HarnessReport({"n": n, "k": k, "m": m, "K": reduced_K, "R": k, "W": max_weight})
    if n >= 2:
        b = bound_report(n, m)
        rep.reference_bounds = {"K": b.K, "derived_length_bound": b.derived_length_bound, "R": "T*k", "N": "(T*k)^(2^K)"}
    rep.notes.append("R = k: exactly the k repeated entries move; gap entries are fixed generators in column K+1")
    rep.notes.append("only integer toy values are instantiated; non-integer intermediate roots do not arise")
    engel = engel_identity(n)
    families = [(name, sk) for name, sk in gap_family(k, reduced_K)]

    relations: dict[str, object] = {}
    for name, sk in families:
        rel = expand_relation_one(m, k, sk)
        relations[name] = rel
        rep.term_counts[f"relation1[{name}]"] = rel.term_count
    rep.term_counts["symmetrized_sum"] = _factorial(k) ** reduced_K

    engines: dict[tuple[str, bool], ConsequenceEngine] = {}

    def engine_for(name: str, with_engel: bool) -> ConsequenceEngine:
        key = (name, with_engel)
        if key not in engines:
            rel = relations[name]
            ids: list[Identity] = [rel.identity()] if rel.body else []
            if with_engel:
                ids.append(engel)
            engines[key] = ConsequenceEngine(identity_providers(ids), caps)
        return engines[key]

    gens = [Gen(j) for j in range(1, reduced_K + 1)]
    for signs in product(PLUS + MINUS, repeat=reduced_K):
        grading = GradingAssignment.from_signs("".join(signs), gens)
        cores = ideal_cores(reduced_K, m, grading)
        tested = skipped_weight = relation_only = nonzero = 0
        failure = None
        for cs, u in cores:
            for name, sk in families:
                weight = k * u.multiweight.total + _skeleton_weight(sk)
                if weight > max_weight:
                    skipped_weight += 1
                    continue
                spec = SymmetrizedSumSpec(k, reduced_K, signs, sk, u)
                target, _ = build_symmetrized_sum(spec, caps)
                tested += 1
                if not target:
                    relation_only += 1
                    continue
                nonzero += 1
                if engine_for(name, False).contains(target):
                    relation_only += 1
                    continue
                if not engine_for(name, True).contains(target) and failure is None:
                    failure = f"core {u} with skeleton {name}"
        detail = {
            "cores": len(cores),
            "sums_tested": tested,
            "nonzero_sums": nonzero,
            "beyond_weight_cap": skipped_weight,
            "from_relation_alone": relation_only,
        }
        label = f"eq1_implies_sum[{''.join(signs)}]"
        if failure:
            detail["failure"] = failure
            rep.checks.append(CheckOutcome(label, FAIL, detail))
        elif tested == 0:
            why = "no even core fits" if not cores else f"every sum exceeds weight {max_weight}"
            rep.checks.append(CheckOutcome(label, SKIPPED, detail, f"vacuous: {why}"))
        else:
            rep.checks.append(CheckOutcome(label, PASS, detail))

    try:
        tm = measure_T(n, m, reduced_K, caps) if n >= 2 else None
    except ResourceError as exc:
        rep.notes.append(f"T not measured: {exc}")
        tm = None
    if tm is not None:
        rep.measured_T = tm.to_dict()
    if timings:
        rep.timings = {"seconds": round(time.perf_counter() - t0, 3)}
    return rep
