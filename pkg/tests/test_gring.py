import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shadowtrace import (
    BaseMismatch,
    DimensionMismatch,
    FreeAbelian,
    RingElement,
    RingMatrix,
    cyclic,
    symmetric3,
)

Z = FreeAbelian(1)


def t(k, coeff=1):
    return RingElement.group(Z, (k,), coeff)


def test_laurent_identity():
    # (1 + t)(1 - t) = 1 - t^2
    lhs = (t(0) + t(1)) * (t(0) - t(1))
    assert lhs == t(0) - t(2)


def test_s3_group_algebra():
    s3 = symmetric3()
    e = RingElement.one(s3)
    i12 = s3.element_names.index("(12)")
    x = e + RingElement.group(s3, i12)
    y = RingElement.group(s3, i12)
    # (e + (12)) * (12) = (12) + e
    assert x * y == y + e


def test_identity_matrix_acts_trivially():
    s3 = symmetric3()
    m = RingMatrix(s3, 2, 2, {
        (0, 0): RingElement.group(s3, 3),
        (1, 0): RingElement.one(s3) - RingElement.group(s3, 2),
    })
    assert RingMatrix.identity(s3, 2) @ m == m
    assert m @ RingMatrix.identity(s3, 2) == m


def test_base_and_shape_mismatches():
    a = RingElement.one(cyclic(2))
    b = RingElement.one(cyclic(3))
    with pytest.raises(BaseMismatch):
        a + b
    m = RingMatrix.identity(cyclic(2), 2)
    n = RingMatrix.identity(cyclic(2), 3)
    with pytest.raises(DimensionMismatch):
        m @ RingMatrix.zero(cyclic(2), 2, 1) + n


def test_no_zero_terms_stored():
    x = t(1) - t(1)
    assert x.is_zero() and x.terms == {}
    m = RingMatrix(Z, 1, 1, {(0, 0): x})
    assert m.is_zero()


elements = st.integers(min_value=-3, max_value=3)


def ring_elements(draw):
    terms = draw(st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4))
    return RingElement(Z, {(k,): v for k, v in terms.items()})


ring_element_strategy = st.builds(
    lambda d: RingElement(Z, {(k,): v for k, v in d.items()}),
    st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4),
)


@settings(max_examples=60, deadline=None)
@given(ring_element_strategy, ring_element_strategy, ring_element_strategy)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@settings(max_examples=40, deadline=None)
@given(ring_element_strategy, ring_element_strategy)
def test_augmentation_is_a_ring_map(a, b):
    assert (a * b).augmentation() == a.augmentation() * b.augmentation()
    assert (a + b).augmentation() == a.augmentation() + b.augmentation()


def test_noncommutative_matrix_product():
    s3 = symmetric3()
    rng = random.Random(0)
    elems = list(s3.elements())

    def rand_matrix(r, c):
        return RingMatrix(s3, r, c, {
            (i, j): RingElement.group(s3, rng.choice(elems), rng.randint(-2, 2))
            for i in range(r) for j in range(c) if rng.random() < 0.7
        })

    for _ in range(20):
        a, b, c = rand_matrix(2, 3), rand_matrix(3, 2), rand_matrix(2, 2)
        assert (a @ b) @ c == a @ (b @ c)
        assert (a @ b).shape == (2, 2)
