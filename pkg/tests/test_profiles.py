import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alpha2dynamo.errors import DomainError
from alpha2dynamo.profiles import (
    Constant,
    Polynomial,
    Stefani,
    evaluate,
    evaluate_derivative,
    load_profile,
    norms,
    parse_profile,
    profile_from_dict,
    profile_to_dict,
    scale,
)

coeff_lists = st.lists(st.floats(-50, 50), min_size=1, max_size=8)


def brute_sup(coeffs, n=2_000_001):
    r = np.linspace(0, 1, n)
    return float(np.abs(np.polynomial.polynomial.polyval(r, coeffs)).max())


def test_eval_examples():
    assert evaluate(Constant(1.5), 0.3) == 1.5
    assert evaluate(Stefani(1), 0.0) == pytest.approx(-21.46, abs=1e-14)
    assert evaluate(Stefani(1), 1.0) == pytest.approx(-9.50, abs=1e-12)


def test_derivative_examples():
    assert evaluate_derivative(Constant(4.0), 0.7) == 0.0
    assert evaluate_derivative(Stefani(1), 0.0) == 0.0
    assert evaluate_derivative(Stefani(1), 1.0) == pytest.approx(1.75, abs=1e-10)


def test_domain_errors():
    with pytest.raises(DomainError):
        evaluate(Stefani(1), 1.5)
    with pytest.raises(DomainError):
        evaluate_derivative(Constant(1.0), -0.1)
    with pytest.raises(DomainError):
        Polynomial(tuple(range(34)))
    with pytest.raises(DomainError):
        Stefani(-1.0)


def test_norm_examples():
    assert norms(Constant(-3.0)) == norms(Constant(3.0))
    n = norms(Constant(-3.0))
    assert (n.alpha_norm, n.alpha_prime_norm) == (3.0, 0.0)
    s = norms(Stefani(0.818))
    assert s.alpha_norm == pytest.approx(17.55, abs=0.01)
    assert s.alpha_prime_norm == pytest.approx(71.36, abs=0.01)
    s2 = norms(Stefani(2 * 0.818))
    assert s2.alpha_norm == 2 * s.alpha_norm
    assert s2.alpha_prime_norm == 2 * s.alpha_prime_norm


def test_stefani_norms_against_brute_force():
    s = norms(Stefani(1.0))
    base = (-21.46, 0.0, 426.41, -806.73, 392.28)
    deriv = np.polynomial.polynomial.polyder(base)
    assert s.alpha_norm == pytest.approx(brute_sup(base), abs=1e-9)
    assert s.alpha_prime_norm == pytest.approx(brute_sup(deriv), abs=1e-7)


@settings(max_examples=30, deadline=None)
@given(coeffs=coeff_lists)
def test_norm_matches_dense_sampling(coeffs):
    n = norms(Polynomial(tuple(coeffs)))
    ref = brute_sup(coeffs, 200_001)
    scale_ = max(1.0, sum(abs(c) for c in coeffs))
    # dense sampling can only underestimate the maximum
    assert n.alpha_norm >= ref - 1e-12 * scale_
    assert n.alpha_norm <= ref + 1e-6 * scale_


@settings(max_examples=30, deadline=None)
@given(coeffs=coeff_lists, c=st.floats(0.0, 10.0))
def test_homogeneity(coeffs, c):
    p = Polynomial(tuple(coeffs))
    n, m = norms(p), norms(scale(p, c))
    assert m.alpha_norm == pytest.approx(c * n.alpha_norm, rel=1e-13, abs=1e-300)
    assert m.alpha_prime_norm == pytest.approx(c * n.alpha_prime_norm, rel=1e-13, abs=1e-300)


@settings(max_examples=20, deadline=None)
@given(coeffs=coeff_lists, seed=st.integers(0, 2**32 - 1))
def test_norm_dominates_samples(coeffs, seed):
    p = Polynomial(tuple(coeffs))
    r = np.random.default_rng(seed).random(10_000)
    assert np.all(np.abs(evaluate(p, r)) <= norms(p).alpha_norm + 1e-12 * max(1.0, norms(p).alpha_norm))


@settings(max_examples=30, deadline=None)
@given(coeffs=coeff_lists)
def test_derivative_matches_central_difference(coeffs):
    p = Polynomial(tuple(coeffs))
    r = np.linspace(0.01, 0.99, 100)
    h = 1e-6
    fd = (evaluate(p, r + h) - evaluate(p, r - h)) / (2 * h)
    d = evaluate_derivative(p, r)
    tol = 1e-6 * max(1.0, norms(p).alpha_prime_norm)
    assert np.all(np.abs(d - fd) <= tol)


def test_parse_and_roundtrip(tmp_path):
    assert parse_profile("const:2.5") == Constant(2.5)
    assert parse_profile("poly:1,0,-2") == Polynomial((1.0, 0.0, -2.0))
    assert parse_profile("stefani:0.818") == Stefani(0.818)
    for p in (Constant(-1.0), Polynomial((0.5, 2.0)), Stefani(1.1)):
        assert profile_from_dict(profile_to_dict(p)) == p
        f = tmp_path / "p.json"
        f.write_text(json.dumps(profile_to_dict(p)))
        assert load_profile(f) == p
        assert parse_profile(f"@{f}") == p
        assert parse_profile(p.label()) == p


@pytest.mark.parametrize("bad", ["const", "const:x", "foo:1", "poly:", "stefani:-2"])
def test_parse_rejects(bad):
    with pytest.raises(DomainError):
        parse_profile(bad)


def test_profile_file_rejects(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"kind": "poly"}')
    with pytest.raises(DomainError):
        load_profile(f)
    with pytest.raises(DomainError):
        load_profile(tmp_path / "missing.json")
