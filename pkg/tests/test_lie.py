import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from engelcheck.lie import (
    BasisMonomial,
    Gen,
    LieElement,
    Multiweight,
    ParseError,
    bracket,
    component,
    homogeneous_components,
    is_lyndon,
    layer_dimension,
    left_normed,
    lyndon_basis,
    lyndon_words_of,
    mobius,
    ordered_splits,
    parse_element,
    parse_generator,
    relabel,
    standard_factorization,
    witt_dimension,
)

x1, x2, x3, x4 = (Gen(i) for i in range(1, 5))


# oracles written independently of the package


def brute_lyndon(alphabet, n):
    out = []
    for w in product(sorted(alphabet), repeat=n):
        if all(w < w[i:] for i in range(1, n)):
            out.append(w)
    return out


def naive_mobius(n):
    if n == 1:
        return 1
    f, k, m = [], 2, n
    while k * k <= m:
        while m % k == 0:
            f.append(k)
            m //= k
        k += 1
    if m > 1:
        f.append(m)
    return 0 if len(set(f)) != len(f) else (-1) ** len(f)


def necklace(k, n):
    return sum(naive_mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def assoc(tree):
    """Free associative expansion of a nested-tuple bracket tree."""
    if isinstance(tree, Gen):
        return {(tree,): 1}
    a, b = assoc(tree[0]), assoc(tree[1])
    out = {}
    for u, cu in a.items():
        for v, cv in b.items():
            out[u + v] = out.get(u + v, 0) + cu * cv
            out[v + u] = out.get(v + u, 0) - cu * cv
    return {w: c for w, c in out.items() if c}


def assoc_of(e):
    out = {}
    for word, c in e.items():
        for w, d in assoc(BasisMonomial(word).bracketing).items():
            out[w] = out.get(w, 0) + c * d
    return {w: c for w, c in out.items() if c}


def eval_tree(tree):
    if isinstance(tree, Gen):
        return LieElement.gen(tree)
    return bracket(eval_tree(tree[0]), eval_tree(tree[1]))


def random_tree(rng, weight, letters):
    if weight == 1:
        return rng.choice(letters)
    k = rng.randint(1, weight - 1)
    return (random_tree(rng, k, letters), random_tree(rng, weight - k, letters))


# ---------------------------------------------------------------------------


def test_generator_order():
    assert Gen(1) < Gen(2) < Gen(1, 1)
    assert Gen(2, 1) < Gen(1, 2)  # double indices ordered by (j, i)
    assert Gen(1) != Gen(1, 1)
    assert sorted([Gen(1, 2), Gen(3), Gen(2, 1)]) == [Gen(3), Gen(2, 1), Gen(1, 2)]
    assert repr(Gen(2, 5)) == "x(2,5)"


def test_bad_generator():
    with pytest.raises(ValueError):
        Gen(0)


def test_weight_one_and_two():
    b = lyndon_basis([x1, x2], 2)
    assert [m.word for m in b[1]] == [(x1,), (x2,)]
    assert [m.word for m in b[2]] == [(x1, x2)]
    assert [m.word for m in b[2]] == brute_lyndon([x1, x2], 2)


def test_weight_three_layer():
    b = lyndon_basis([x1, x2], 3)
    assert [m.word for m in b[3]] == [(x1, x1, x2), (x1, x2, x2)]


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", range(1, 7))
def test_witt_counts(k, n):
    alphabet = [Gen(i) for i in range(1, k + 1)]
    layer = lyndon_basis(alphabet, n).get(n, [])
    assert [m.word for m in layer] == brute_lyndon(alphabet, n)
    assert len(layer) == witt_dimension(k, n) == necklace(k, n)


def test_mobius():
    assert [mobius(i) for i in range(1, 13)] == [naive_mobius(i) for i in range(1, 13)]


def test_empty_generators_rejected():
    with pytest.raises(ValueError):
        lyndon_basis([], 3)
    with pytest.raises(ValueError):
        lyndon_basis([x1], 0)


def test_layer_dimension_multigraded():
    for w in [Multiweight.multilinear([x1, x2, x3]), Multiweight({x1: 2, x2: 2}), Multiweight({x1: 3, x2: 1})]:
        assert layer_dimension(w) == len(lyndon_words_of(w))
    assert layer_dimension(Multiweight.multilinear([x1, x2, x3, x4])) == 6


def test_standard_factorization():
    u, v = standard_factorization((x1, x1, x2))
    assert u == (x1,) and v == (x1, x2)
    assert is_lyndon(u) and is_lyndon(v)


def test_bracket_basics():
    X1, X2 = LieElement.gen(x1), LieElement.gen(x2)
    assert bracket(X1, X1) == 0
    assert bracket(X2, X1) == -bracket(X1, X2)
    assert str(bracket(X2, X1)) == "-1*[x1,x2]"


def test_bracket_weight_four_oracle():
    a = bracket(x1, x2)
    b = bracket(x1, x3)
    e = bracket(a, b)
    assert assoc_of(e) == assoc(((x1, x2), (x1, x3)))


def test_left_normed():
    assert left_normed([x1]) == LieElement.gen(x1)
    assert left_normed([x1, x1, x2]) == 0
    e = left_normed([x1, x2, x3])
    assert len(e) == 2
    assert assoc_of(e) == assoc(((x1, x2), x3))


def test_component():
    X1 = LieElement.gen(x1)
    e = X1 + bracket(x1, x2)
    assert component(e, Multiweight.of_word((x1,))) == X1
    assert component(LieElement.zero(), Multiweight.of_word((x1,))) == 0
    u, v = bracket(x1, x2), LieElement.gen(x3)
    w = u.multiweight + v.multiweight
    assert component(bracket(u, v), w) == bracket(u, v)
    parts = homogeneous_components(e)
    assert sum(parts.values(), LieElement.zero()) == e


def test_random_normalization_oracle():
    rng = random.Random(7)
    for _ in range(200):
        wt = rng.randint(1, 6)
        tree = random_tree(rng, wt, [x1, x2, x3])
        e = eval_tree(tree)
        assert assoc_of(e) == assoc(tree)


homogeneous_pool = [
    LieElement.gen(x1),
    LieElement.gen(x2),
    bracket(x1, x2),
    bracket(x2, x3),
    left_normed([x1, x2, x2]),
    left_normed([x3, x1, x2]) * Fraction(1, 2),
]


@given(st.sampled_from(homogeneous_pool), st.sampled_from(homogeneous_pool), st.sampled_from(homogeneous_pool))
@settings(max_examples=60, deadline=None)
def test_jacobi(a, b, c):
    if a.multiweight.total + b.multiweight.total + c.multiweight.total > 6:
        return
    assert bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b)) == 0


@given(st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(-5, 5)), min_size=1, max_size=5))
@settings(max_examples=80, deadline=None)
def test_parse_print_roundtrip(spec):
    e = LieElement.zero()
    for i, j, c in spec:
        e = e + bracket(Gen(i), left_normed([Gen(j), Gen(i % 3 + 1)])) * Fraction(c, 3)
    assert parse_element(str(e)) == e


def test_parse_formats():
    assert parse_element("  [x1 , x2]") == bracket(x1, x2)
    assert parse_element("1/2*[x1,x2,x3] - 1/2*[x1,x2,x3]") == 0
    assert parse_element("[x(1,2),x(2,1)]") == bracket(Gen(1, 2), Gen(2, 1))
    assert parse_element("0") == 0
    assert parse_generator("x(3,4)") == Gen(3, 4)
    with pytest.raises(ParseError):
        parse_element("[x1,")
    with pytest.raises(ParseError):
        parse_element("y1")


def test_canonical_text_order():
    e = bracket(x1, x2) + LieElement.gen(x3) + left_normed([x1, x2, x2]) * 2
    assert str(e) == "1*x3 + 1*[x1,x2] + 2*[x1,x2,x2]"


def test_relabel():
    e = left_normed([x1, x2, x3])
    swapped = relabel(e, lambda g: {x1: x2, x2: x1}.get(g, g))
    assert swapped == left_normed([x2, x1, x3])
    shifted = relabel(e, lambda g: Gen(g.row + 1))
    assert shifted == left_normed([x2, x3, x4])


def test_ordered_splits():
    w = Multiweight.multilinear([x1, x2, x3])
    splits = list(ordered_splits(w, 2))
    assert len(splits) == 6
    assert all(a + b == w for a, b in splits)
