import itertools
import math
import random
from fractions import Fraction as F

import pytest

from vantage.bounds import (
    ComponentCount,
    RadicalComboSpec,
    component_spec_from_scales,
    count_components_radical,
    cyclotomic_polynomial,
    find_component_ladder,
    galois_numeric_check,
    galois_product_expand,
    good_tideman_bound,
    main_theorem_exponent,
    sign_family_eval,
    sign_family_patterns,
    radical_warren_bound,
    stirling_first_unsigned,
    verify_sign_family,
    warren_bound,
)
from vantage.scalar import RadicalSum


def test_stirling_values():
    assert stirling_first_unsigned(3, 2) == 3
    assert stirling_first_unsigned(4, 2) == 11
    assert stirling_first_unsigned(5, 5) == 1
    assert stirling_first_unsigned(6, 0) == 0
    with pytest.raises(ValueError):
        stirling_first_unsigned(3, 4)


def test_stirling_row_sums_factorial():
    for n in range(1, 8):
        assert sum(stirling_first_unsigned(n, r) for r in range(n + 1)) == math.factorial(n)


def test_good_tideman_values():
    assert good_tideman_bound(3, 2) == 6
    assert good_tideman_bound(4, 2) == 18
    assert good_tideman_bound(5, 2) == 46
    assert good_tideman_bound(1, 3) == 1


def test_warren_examples():
    assert warren_bound(1, 1, 1) == 12
    assert warren_bound(2, 3, 2) == 608
    for delta in (1, 2, 5):
        assert warren_bound(1, 1, delta) == 12 * delta


def test_radical_warren_examples():
    assert radical_warren_bound(1, 1, 2, 3, 2) == 48
    assert radical_warren_bound(1, 2, 1, 2, 5) == 20


def test_radical_warren_r2_equals_warren():
    rng = random.Random(5)
    for _ in range(20):
        N, m, delta = rng.randrange(1, 4), rng.randrange(1, 7), rng.randrange(1, 5)
        for s in (1, 2, 3, 7):
            assert radical_warren_bound(N, m, delta, 2, s) == warren_bound(N, m, delta)


def test_warren_hand_expansion():
    # independent evaluation: explicit Pascal-triangle binomials
    rng = random.Random(6)
    for _ in range(25):
        N, m, delta = rng.randrange(1, 4), rng.randrange(1, 6), rng.randrange(1, 4)
        pascal = [[1]]
        for i in range(1, m + 1):
            row = [1] + [pascal[-1][j - 1] + pascal[-1][j]
                         for j in range(1, i)] + [1]
            pascal.append(row)
        total = 0
        for l in range(N + 1):
            comb = pascal[m][l] if l <= m else 0
            total += 2 ** l * comb
        assert warren_bound(N, m, delta) == 2 * (2 * delta) ** N * total


def test_main_theorem_exponent():
    assert main_theorem_exponent(2, 3) == 12
    assert main_theorem_exponent(1, 1) == 2
    assert main_theorem_exponent(1, 2) == 2
    assert main_theorem_exponent(1, 3) == 6
    assert main_theorem_exponent(1, 4) == 6
    assert main_theorem_exponent(3, 2) == 12


def test_sign_family_eval_examples():
    assert sign_family_eval([1], F(1, 3), 1) == RadicalSum.from_rational(F(1, 3))
    assert sign_family_eval([1, -1], F(1, 2), 1).sign() == 1
    assert sign_family_eval([1, -1], F(1, 2), 2).sign() == -1
    with pytest.raises(ValueError):
        sign_family_eval([1, 1], F(2), 1)


def test_verify_sign_family_small():
    assert verify_sign_family(1, F(1, 2))
    assert verify_sign_family(4, F(1, 3))


def test_sign_family_patterns_small():
    for m in (1, 2, 3):
        assert len(sign_family_patterns(m)) == 2 ** m


def test_cyclotomic_polynomials_vs_sympy():
    import sympy

    x = sympy.symbols("x")
    for s in range(1, 13):
        ours = cyclotomic_polynomial(s)
        theirs = sympy.Poly(sympy.cyclotomic_poly(s, x), x).all_coeffs()[::-1]
        assert list(ours) == [int(c) for c in theirs]


def test_galois_expansions():
    e = galois_product_expand(2, 2)
    assert e.poly == {(2, 0): 1, (0, 2): -1}
    assert e.exponents_divisible and e.coeffs_integral

    e = galois_product_expand(2, 3)
    assert e.poly == {(3, 0): 1, (0, 3): 1}

    e = galois_product_expand(3, 2)
    assert e.exponents_divisible and e.coeffs_integral
    assert max(sum(exp) for exp in e.poly) == 4


def test_galois_guard():
    with pytest.raises(ValueError):
        galois_product_expand(6, 7)
    with pytest.raises(ValueError):
        galois_product_expand(1, 2)


def test_galois_numeric_agreement():
    rng = random.Random(8)
    for r, s in ((2, 2), (2, 3), (3, 2)):
        e = galois_product_expand(r, s)
        pts = [[F(rng.randrange(1, 9), rng.randrange(1, 6)) for _ in range(r)]
               for _ in range(10)]
        assert galois_numeric_check(e, pts) < 1e-30


def test_components_constant_function():
    spec = RadicalComboSpec(F(1), ())
    assert count_components_radical(spec).components == 1


def test_components_ladder_r2_r3():
    for r in (2, 3):
        a = find_component_ladder(r)
        spec = component_spec_from_scales(a)
        got = count_components_radical(spec)
        assert got.components == 2 * r - 1
        assert got.components <= 2 ** (r - 1) + 1


def test_components_never_exceed_conjugate_bound():
    rng = random.Random(12)
    for _ in range(6):
        r = rng.randrange(2, 4)
        scales = sorted({F(rng.randrange(1, 50)) for _ in range(r - 1)})
        if len(scales) != r - 1:
            continue
        spec = component_spec_from_scales(scales)
        got = count_components_radical(spec, refine_rounds=3)
        assert got.components <= 2 ** (r - 1) + 1


def test_component_spec_rejects_bad_scale():
    with pytest.raises(ValueError):
        RadicalComboSpec(F(1), ((F(1), F(0), F(0)),))
