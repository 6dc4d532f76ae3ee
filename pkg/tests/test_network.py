import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import abcd_source_gamma, naive_source_gamma
from lnaswarm.errors import SingularTransformError
from lnaswarm.network import (
    DesignVector,
    canonicalize,
    line_transform,
    load_reflection,
    reflection_from_impedance,
    source_reflection,
    stub_parallel_impedance,
)

lengths = st.floats(0, 0.5, exclude_max=True)
anylen = st.floats(-50, 50, allow_nan=False)


@pytest.mark.parametrize("raw,want", [(0.1, 0.1), (0.6, 0.1), (-0.05, 0.45), (0.5, 0.0), (-1e-18, 0.0)])
def test_canonicalize(raw, want):
    assert canonicalize(raw) == pytest.approx(want, abs=1e-15)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_canonicalize_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        canonicalize(bad)


@given(anylen)
def test_canonicalize_range(x):
    c = canonicalize(x)
    assert 0 <= c < 0.5


@pytest.mark.parametrize("l,want", [(0, 0), (0.125, 0.5 + 0.5j), (0.25, 1 + 0j)])
def test_stub(l, want):
    assert stub_parallel_impedance(l) == pytest.approx(want, abs=1e-15)


def test_stub_quarter_wave_is_exact():
    assert stub_parallel_impedance(0.25) == 1 + 0j


@given(st.floats(0.001, 0.499).filter(lambda l: abs(l - 0.25) > 1e-3))
def test_stub_matches_tan_form(l):
    t = math.tan(2 * math.pi * l)
    assert stub_parallel_impedance(l) == pytest.approx(1j * t / (1 + 1j * t), rel=1e-10, abs=1e-12)


def test_open_stub_is_shorted_stub_a_quarter_wave_off():
    for l in (0.03, 0.11, 0.2, 0.37):
        assert stub_parallel_impedance(l, "open") == pytest.approx(
            stub_parallel_impedance(l + 0.25), abs=1e-14
        )
    with pytest.raises(ValueError):
        stub_parallel_impedance(0.1, "bent")


@pytest.mark.parametrize("z", [0.3 - 2j, 5 + 1j, 1, 0.01j])
def test_line_zero_length_is_identity(z):
    assert line_transform(z, 0.0) == pytest.approx(z, abs=1e-15)


@pytest.mark.parametrize("d", [0.03, 0.1, 0.2, 0.4])
def test_shorted_line_is_pure_reactance(d):
    assert line_transform(0, d) == pytest.approx(1j * math.tan(2 * math.pi * d), rel=1e-12)


def test_quarter_wave_inverts():
    assert line_transform(0.5 + 0.5j, 0.25) == pytest.approx(1 - 1j, abs=1e-15)


def test_quarter_wave_short_becomes_open():
    with pytest.raises(SingularTransformError):
        line_transform(0, 0.25)


@settings(max_examples=300)
@given(st.floats(0, 10), st.floats(-10, 10), lengths)
def test_homogeneous_agrees_with_naive(r, x, d):
    t = math.tan(2 * math.pi * d)
    den = 1 - x * t + 1j * r * t
    assume(abs(t) < 1e6 and abs(den) > 1e-6)
    naive = (r + 1j * (t + x)) / den
    got = line_transform(complex(r, x), d)
    assert abs(got - naive) <= 1e-10 * max(abs(naive), 1.0)


@pytest.mark.parametrize(
    "z,want", [(1, 0), (0, -1), (0.5 + 0.5j, -0.2 + 0.4j)]
)
def test_reflection_from_impedance(z, want):
    assert reflection_from_impedance(z) == pytest.approx(want, abs=1e-15)


def test_reflection_pole():
    with pytest.raises(SingularTransformError):
        reflection_from_impedance(-1)


def test_zero_stub_fully_reflects():
    for d in (0.0, 0.07, 0.25, 0.33):
        assert abs(source_reflection(d, 0.0)) == pytest.approx(1.0, abs=1e-15)
        assert abs(load_reflection(d, 0.0)) == pytest.approx(1.0, abs=1e-15)


def test_load_side_example():
    assert load_reflection(0.0, 0.125) == pytest.approx(-0.2 + 0.4j, abs=1e-15)


@given(lengths, lengths)
def test_load_and_source_share_formula(d, l):
    assert load_reflection(d, l) == source_reflection(d, l)


@settings(max_examples=300)
@given(st.floats(0.001, 0.499), st.floats(0.001, 0.499))
def test_source_reflection_matches_two_independent_routes(d, l):
    g = source_reflection(d, l)
    if abs(math.tan(2 * math.pi * d)) < 1e6 and abs(math.tan(2 * math.pi * l)) < 1e6:
        assert abs(g - naive_source_gamma(d, l)) < 1e-9
    assert abs(g - abcd_source_gamma(d, l)) < 1e-9


@settings(max_examples=300)
@given(anylen, anylen, st.integers(-5, 5), st.integers(-5, 5))
def test_periodicity(d, l, kd, kl):
    a = source_reflection(d, l)
    b = source_reflection(d + 0.5 * kd, l + 0.5 * kl)
    assert abs(a - b) < 1e-12


@settings(max_examples=500)
@given(lengths, lengths)
def test_passive(d, l):
    assert abs(source_reflection(d, l)) <= 1 + 1e-9


def test_design_vector_canonical_and_degrees():
    v = DesignVector.from_degrees(200, 23.8961, -10, 50.9232)
    assert v.d1 == pytest.approx(20 / 360)
    assert v.d2 == pytest.approx(170 / 360)
    assert v.degrees()[1] == pytest.approx(23.8961)
    assert v.scaled(2).l1 == pytest.approx(2 * 23.8961 / 360)
    assert DesignVector.from_array(np.array([0.6, 0.1, 0.2, 0.3])).d1 == pytest.approx(0.1)
