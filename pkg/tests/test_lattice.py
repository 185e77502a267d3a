import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foldedtoric.lattice import (
    IDENTITY,
    AffineMapZ,
    LatticeError,
    apply_affine,
    det,
    format_rational,
    integral,
    inverse_transpose,
    is_unimodular_pair,
    mat_vec,
    parse_rational,
    primitive,
    random_gl2z,
)

ints = st.integers(-50, 50)
vectors = st.tuples(ints, ints).filter(lambda v: v != (0, 0))


def test_det_examples():
    assert det(((1, 0), (0, 1))) == 1
    assert det(((1, 1), (0, 1))) == 1
    assert det(((2, 0), (0, 1))) == 2


def test_det_agrees_with_numpy():
    rng = random.Random(3)
    for _ in range(50):
        m = tuple(tuple(rng.randint(-9, 9) for _ in range(2)) for _ in range(2))
        assert det(m) == round(np.linalg.det(np.array(m, float)))


def test_unimodular_pair_examples():
    assert is_unimodular_pair((1, 0), (0, 1))
    assert is_unimodular_pair((1, 0), (1, 1))
    assert not is_unimodular_pair((1, 0), (0, 2))


def test_primitive_examples():
    assert primitive((2, 4)) == (1, 2)
    assert primitive((1, 0)) == (1, 0)
    assert primitive((0, -3)) == (0, -1)


def test_primitive_of_zero_vector():
    with pytest.raises(LatticeError, match="degenerate edge"):
        primitive((0, 0))


def test_primitive_accepts_rational_directions():
    assert primitive((Fraction(1, 2), Fraction(-3, 4))) == (2, -3)


def test_apply_affine_examples():
    half = Fraction(1, 2)
    assert apply_affine(AffineMapZ(), (half, 3)) == (half, 3)
    rot = AffineMapZ(((0, -1), (1, 0)), (0, half))
    assert apply_affine(rot, (0, 0)) == (0, half)
    assert apply_affine(AffineMapZ(((1, 1), (0, 1))), (1, 1)) == (2, 1)


def test_inverse_transpose_examples():
    assert inverse_transpose(IDENTITY) == IDENTITY
    assert inverse_transpose(((1, 1), (0, 1))) == ((1, 0), (-1, 1))
    assert inverse_transpose(((2, 0), (0, 1))) == ((Fraction(1, 2), 0), (0, 1))


def test_inverse_transpose_of_singular_matrix():
    with pytest.raises(LatticeError):
        inverse_transpose(((1, 2), (2, 4)))


def test_affine_map_rejects_non_unimodular_part():
    with pytest.raises(LatticeError):
        AffineMapZ(((2, 0), (0, 1)))


def test_rational_grammar_round_trip():
    for text in ("0", "-7", "3/4", "-22/7"):
        assert format_rational(parse_rational(text)) == text
    assert parse_rational("6/8") == Fraction(3, 4)
    for bad in ("1.5", "1/0", "--1", "1/-2", "", "a"):
        with pytest.raises(LatticeError):
            parse_rational(bad)


def test_compose_is_function_composition():
    rng = random.Random(0)
    for _ in range(20):
        f = AffineMapZ(random_gl2z(rng), (Fraction(rng.randint(-5, 5), 3), 1))
        g = AffineMapZ(random_gl2z(rng), (2, Fraction(rng.randint(-5, 5), 7)))
        p = (Fraction(rng.randint(-9, 9), 5), Fraction(rng.randint(-9, 9), 2))
        assert f.compose(g)(p) == f(g(p))


@st.composite
def unimodular(draw):
    return random_gl2z(random.Random(draw(st.integers(0, 10**6))))


@given(unimodular())
def test_inverse_transpose_is_an_involution(m):
    it = inverse_transpose(m)
    assert abs(det(it) * det(m)) == 1
    assert integral(inverse_transpose(integral(it))) == m


@given(vectors)
def test_primitive_is_idempotent_and_divides(v):
    p = primitive(v)
    assert primitive(p) == p
    k = v[0] // p[0] if p[0] else v[1] // p[1]
    assert k > 0 and (k * p[0], k * p[1]) == v


@settings(max_examples=200)
@given(vectors, vectors, unimodular())
def test_unimodularity_is_gl2z_invariant(u, v, m):
    assert is_unimodular_pair(u, v) == is_unimodular_pair(mat_vec(m, u), mat_vec(m, v))
