import math
import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from engelcheck.config import Caps, PreconditionError, ResourceError
from engelcheck.lie import Gen, LieElement, bracket, left_normed
from engelcheck.symgroup import (
    GroupAlgebraElement,
    Permutation,
    YoungDiagram,
    YoungTableau,
    act,
    all_fillings,
    apply_algebra_element,
    check_decomposition,
    column_group,
    column_group_elements,
    decompose_identity,
    essential_scalar,
    generated_subgroup,
    left_ideal_dimension,
    partitions,
    row_column_bound,
    row_group,
    row_group_elements,
    same_isotypic,
    seminormal_idempotent,
    standard_tableaux,
    symmetric_group,
    young_symmetrizer,
)


def hook_count(shape):
    """f^lambda by the hook-length formula, computed here from scratch."""
    conj = [sum(1 for p in shape if p > j) for j in range(shape[0])]
    prod = 1
    for i, row in enumerate(shape):
        for j in range(row):
            prod *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(sum(shape)) // prod


def involutions(n):
    return sum(1 for p in permutations(range(n)) if all(p[p[i]] == i for i in range(n)))


def test_permutation_parse_and_print():
    p = Permutation.parse("(1 2)(3 4 5)")
    assert p.images == (2, 1, 4, 5, 3)
    assert str(p) == "(1 2)(3 4 5)"
    assert Permutation.parse("[2,1,3]") == Permutation((2, 1, 3))
    assert str(Permutation.identity(3)) == "()"
    assert p.one_line() == "[2,1,4,5,3]"
    with pytest.raises(PreconditionError):
        Permutation((1, 1, 2))


def test_right_action_convention():
    s = Permutation.parse("(1 2)", 3)
    t = Permutation.parse("(2 3)", 3)
    st_ = s * t  # s first
    assert st_(1) == t(s(1)) == 3


@given(st.permutations(range(1, 6)), st.permutations(range(1, 6)))
def test_sign_multiplicative(a, b):
    p, q = Permutation(a), Permutation(b)
    assert (p * q).sign == p.sign * q.sign
    assert (p * p.inverse()).is_identity()


def test_group_algebra_associative():
    rng = random.Random(3)
    g = symmetric_group(3)

    def rand():
        return GroupAlgebraElement(3, {p: rng.randint(-2, 2) for p in rng.sample(g, 3)})

    for _ in range(10):
        a, b, c = rand(), rand(), rand()
        assert (a * b) * c == a * (b * c)


def test_young_diagram():
    d = YoungDiagram((3, 2))
    assert d.size == 5
    assert d.conjugate().parts == (2, 2, 1)
    assert d.conjugate().conjugate() == d
    with pytest.raises(PreconditionError):
        YoungDiagram((1, 2))


def test_row_and_column_groups():
    t = YoungTableau([[1, 2]])
    assert len(generated_subgroup(row_group(t), 2)) == 2
    assert len(generated_subgroup(column_group(t), 2)) == 1
    t = YoungTableau([[1], [2]])
    assert len(generated_subgroup(row_group(t), 2)) == 1
    assert len(generated_subgroup(column_group(t), 2)) == 2
    t = YoungTableau([[1, 2], [3]])
    assert len(row_group_elements(t)) == 2 and len(column_group_elements(t)) == 2
    assert set(row_group_elements(t)) & set(column_group_elements(t)) == {Permutation.identity(3)}


def test_symmetrizer_small():
    assert young_symmetrizer(YoungTableau([[1]])) == GroupAlgebraElement.one(1)
    s = Permutation.parse("(1 2)", 2)
    one = GroupAlgebraElement.one(2)
    assert young_symmetrizer(YoungTableau([[1, 2]])) == one + GroupAlgebraElement.of(s)
    assert young_symmetrizer(YoungTableau([[1], [2]])) == one - GroupAlgebraElement.of(s)


def test_essential_scalar_examples():
    assert essential_scalar(YoungTableau([[1, 2]])) == 2
    assert essential_scalar(YoungTableau([[1]])) == 1
    assert essential_scalar(YoungTableau([[1, 2], [3]])) == 3


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_essential_scalar_all_fillings(n):
    for shape in partitions(n):
        f = hook_count(shape)
        assert YoungDiagram(shape).num_standard() == f == len(standard_tableaux(shape))
        for t in all_fillings(shape):
            k = essential_scalar(t)
            assert k == Fraction(math.factorial(n), f)


def test_decompose_small():
    [(t, e)] = decompose_identity(1)
    assert e == GroupAlgebraElement.one(1)
    pairs = decompose_identity(2)
    s = GroupAlgebraElement.of(Permutation.parse("(1 2)", 2))
    one = GroupAlgebraElement.one(2)
    assert {e for _, e in pairs} == {(one + s).scale(Fraction(1, 2)), (one - s).scale(Fraction(1, 2))}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_decompose_properties(n):
    pairs = decompose_identity(n)
    assert len(pairs) == involutions(n)
    checks = check_decomposition(pairs, n)
    assert all(checks.values()), checks
    assert sum(hook_count(s) ** 2 for s in partitions(n)) == math.factorial(n)


def test_decompose_primitive_and_isotypic():
    n = 3
    for t, e in decompose_identity(n):
        assert left_ideal_dimension(e) == t.shape.num_standard()
        assert same_isotypic(e, young_symmetrizer(t))
    a = seminormal_idempotent(YoungTableau([[1, 2, 3]]))
    b = seminormal_idempotent(YoungTableau([[1], [2], [3]]))
    assert not same_isotypic(a, b)


def test_decompose_cap():
    with pytest.raises(ResourceError):
        decompose_identity(7)
    with pytest.raises(ResourceError):
        decompose_identity(3, Caps(symmetric_degree=2))


def test_row_column_bound():
    assert row_column_bound(YoungDiagram((3, 2))) == 3
    assert row_column_bound(YoungDiagram((1,) * 5)) == 5
    assert row_column_bound(YoungDiagram((1,))) == 1
    for n in range(1, 13):
        for p in partitions(n):
            assert p[0] * len(p) >= n
            assert row_column_bound(YoungDiagram(p)) ** 2 >= n


def test_partition_counts():
    # Euler pentagonal recurrence
    p = [1]
    for n in range(1, 13):
        total, k = 0, 1
        while True:
            g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p.append(total)
    assert [sum(1 for _ in partitions(n)) for n in range(13)][1:] == p[1:]


def test_tableau_text():
    t = YoungTableau.parse("1 2\n3")
    assert t.rows == ((1, 2), (3,))
    assert str(t) == "1 2\n3"
    assert YoungTableau.parse(str(t)) == t
    with pytest.raises(PreconditionError):
        YoungTableau([[1, 1]])


# action on double-indexed generators


def X(i, j):
    return Gen(i, j)


def test_act_example():
    e = bracket(X(1, 1), X(1, 2))
    s = Permutation.parse("(1 2)", 2)
    assert act(s, e, 1) == bracket(X(2, 1), X(1, 2))
    assert act(Permutation.identity(3), e, 1) == e
    with pytest.raises(PreconditionError):
        act(s, bracket(X(3, 1), X(1, 2)), 1)


def test_action_axioms_exhaustive():
    e = left_normed([X(1, 1), X(2, 2), X(3, 1), X(2, 1), X(1, 2)])
    g = symmetric_group(3)
    for s in g:
        for t in g:
            assert act(t, act(s, e, 1), 1) == act(s * t, e, 1)
            assert act(t, act(s, e, 2), 1) == act(s, act(t, e, 1), 2)


def test_apply_algebra_element():
    s = GroupAlgebraElement.of(Permutation.parse("(1 2)", 2))
    e = bracket(X(1, 1), X(2, 1))
    assert apply_algebra_element(GroupAlgebraElement.one(2) + s, e, 1) == 0
    assert apply_algebra_element(GroupAlgebraElement.zero(2), e, 1) == 0
    anti = young_symmetrizer(YoungTableau([[1], [2]]))
    t1 = bracket(X(1, 1), X(1, 2))
    t2 = bracket(X(2, 1), X(2, 2))
    form = bracket(t1, t2)
    swapped = bracket(bracket(X(2, 1), X(1, 2)), bracket(X(1, 1), X(2, 2)))
    assert apply_algebra_element(anti, form, 1) == form - swapped
