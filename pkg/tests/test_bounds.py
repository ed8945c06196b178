import math
from fractions import Fraction

import mpmath as mp
import pytest

from sunflowers.bounds import (
    BOUND_NAMES,
    bound_report,
    certified_compare,
    crossover_report,
    d_intersecting_bound,
    erdos_rado_bound,
    falling_factorial_bound,
    l_intersecting_bound,
    l_multinomial_bound,
    pigeonhole_limit,
    rlogn_bound,
    three_sunflower_bound,
)


def as_mpf(decimal_str, dps=120):
    with mp.workdps(dps):
        return mp.mpf(decimal_str)


def rel_close(a, b, tol):
    with mp.workdps(150):
        a, b = mp.mpf(a), mp.mpf(b)
        return abs(a - b) <= tol * max(abs(a), abs(b))


# -- exact bounds -------------------------------------------------------------

def test_erdos_rado_values():
    assert erdos_rado_bound(1, 5) == 4
    assert erdos_rado_bound(3, 3) == 48
    assert erdos_rado_bound(10, 3) == 3715891200


def test_pigeonhole_limit_values():
    assert pigeonhole_limit(3, 3) == 7
    assert pigeonhole_limit(1, 100) == 99
    assert pigeonhole_limit(2, 3) == 3


def test_l_intersecting_bound_values():
    # s = 1 collapses to 2^n * m
    for n, r in [(2, 3), (4, 5), (6, 2)]:
        assert l_intersecting_bound(n, 1, r) == 2**n * pigeonhole_limit(n, r)
    assert l_intersecting_bound(3, 1, 3) == 56
    assert l_intersecting_bound(4, 2, 3) == 13689


def test_l_multinomial_bound_values():
    assert l_multinomial_bound(2, [0], 3) == 6
    assert l_multinomial_bound(3, [0], 3) == 21
    assert l_multinomial_bound(3, [0, 1], 3) == 294


def test_l_multinomial_at_most_power_form_exhaustively():
    # every nonempty L inside {0..n-1}, n <= 8, several r
    for n in range(1, 9):
        for bits in range(1, 1 << n):
            L = [i for i in range(n) if bits >> i & 1]
            for r in (3, 4, 5):
                assert l_multinomial_bound(n, L, r) <= l_intersecting_bound(n, len(L), r)


def test_falling_factorial_bound_values():
    assert falling_factorial_bound(5, 0, 4) == 3
    assert falling_factorial_bound(3, 1, 3) == 12
    assert falling_factorial_bound(100, 5, 3) == 2**6 * 100 * 99 * 98 * 97 * 96


def test_falling_factorial_full_depth_matches_factorial_bound():
    for n in range(1, 13):
        for r in range(2, 13):
            assert falling_factorial_bound(n, n, r) == erdos_rado_bound(n, r) * (r - 1)


def test_exact_bounds_reproducible():
    assert erdos_rado_bound(7, 4) == erdos_rado_bound(7, 4)
    assert l_multinomial_bound(6, [1, 3], 5) == l_multinomial_bound(6, [1, 3], 5)


def test_parameter_validation():
    with pytest.raises(ValueError):
        erdos_rado_bound(0, 3)
    with pytest.raises(ValueError):
        erdos_rado_bound(3, 1)
    with pytest.raises(ValueError):
        l_intersecting_bound(3, 0, 3)
    with pytest.raises(ValueError):
        l_multinomial_bound(3, [3], 3)  # largest size must be < n
    with pytest.raises(ValueError):
        l_multinomial_bound(3, [], 3)
    with pytest.raises(ValueError):
        falling_factorial_bound(3, 4, 3)
    with pytest.raises(ValueError):
        rlogn_bound(1, 3)
    d_intersecting_bound(3, 1, 2, 1)  # r*d = 2: smallest allowed product
    with pytest.raises(ValueError):
        d_intersecting_bound(3, 1, 2, 0)  # C must be positive
    with pytest.raises(ValueError):
        d_intersecting_bound(3, 0, 3, 1)


# -- real bounds ----------------------------------------------------------------

def test_three_sunflower_collapses_at_s1():
    for n in (1, 2, 5):
        rb = three_sunflower_bound(n, 1)
        assert as_mpf(rb.decimal) == n * n - n + 1
        assert as_mpf(rb.lower) == as_mpf(rb.upper) == n * n - n + 1


def test_three_sunflower_value():
    rb = three_sunflower_bound(3, 2)
    with mp.workdps(80):
        truth = 7 * 8 * mp.mpf(2) ** ((1 + mp.sqrt(5) / 5) * 3)
        assert rel_close(rb.decimal, mp.nstr(truth, 70), mp.mpf("1e-45"))
    assert float(rb) == pytest.approx(1135.408, rel=1e-6)


def test_rlogn_value_and_two_precision_agreement():
    rb50 = rlogn_bound(2, 3, 1, digits=50)
    assert float(rb50) == pytest.approx((3 * math.log(2)) ** 2, rel=1e-12)
    rb120 = rlogn_bound(10, 3, 1, digits=120)
    rb50b = rlogn_bound(10, 3, 1, digits=50)
    assert rel_close(rb50b.decimal, rb120.decimal, mp.mpf("1e-45"))


def test_rlogn_homogeneity_in_C():
    a = rlogn_bound(7, 3, 1, digits=60)
    b = rlogn_bound(7, 3, 2, digits=60)
    with mp.workdps(80):
        ratio = mp.mpf(b.decimal) / mp.mpf(a.decimal)
        assert abs(ratio - 2**7) <= mp.mpf("1e-50") * 2**7


def test_d_intersecting_value():
    rb = d_intersecting_bound(3, 1, 3, 1)
    assert float(rb) == pytest.approx(1728 * 3 * math.log(3), rel=1e-12)
    big = d_intersecting_bound(100, 5, 3, 1, digits=60)
    again = d_intersecting_bound(100, 5, 3, 1, digits=140)
    assert rel_close(big.decimal, again.decimal, mp.mpf("1e-50"))
    assert float(big) > 0


def test_d_intersecting_shift_in_n_multiplies_by_4r():
    a = d_intersecting_bound(6, 2, 3, 1, digits=60)
    b = d_intersecting_bound(7, 2, 3, 1, digits=60)
    with mp.workdps(90):
        ratio = mp.mpf(b.decimal) / mp.mpf(a.decimal)
        assert abs(ratio - 12) <= mp.mpf("1e-50") * 12


def test_log_base_configurable():
    nat = rlogn_bound(4, 3, 1)
    base2 = rlogn_bound(4, 3, 1, log_base=2)
    with mp.workdps(80):
        expected = (3 * mp.log(4) / mp.log(2)) ** 4
        assert rel_close(base2.decimal, mp.nstr(expected, 70), mp.mpf("1e-40"))
        assert mp.mpf(base2.decimal) > mp.mpf(nat.decimal)


def test_error_bounds_are_tiny_and_enclosing():
    rb = d_intersecting_bound(9, 4, 5, "1/3", digits=50)
    with mp.workdps(90):
        lo, hi, mid = mp.mpf(rb.lower), mp.mpf(rb.upper), mp.mpf(rb.decimal)
        assert lo <= mid <= hi
        assert (hi - lo) / mid < mp.mpf("1e-49")


# -- certified comparison and crossover -------------------------------------------

def test_certified_compare_decides():
    a = lambda dps: (Fraction(1), Fraction(1))
    b = lambda dps: (Fraction(2), Fraction(2))
    assert certified_compare(a, b) == "<"
    assert certified_compare(b, a) == ">"
    assert certified_compare(a, a) == "="


def test_crossover_rows_match_direct_calls():
    rep = crossover_report(8, 3, 1)
    assert len(rep.rows) == 8
    for row in rep.rows:
        assert row.d_intersecting == d_intersecting_bound(8, row.d, 3, 1).decimal
        assert row.falling_factorial == str(falling_factorial_bound(8, row.d, 3))
        assert row.smaller in ("d-intersecting", "falling-factorial", "equal")


def test_crossover_columns_monotone():
    rep = crossover_report(12, 3, 1, digits=50)
    trivials = [int(r.falling_factorial) for r in rep.rows]
    assert trivials == sorted(trivials) and len(set(trivials)) == len(trivials)
    with mp.workdps(80):
        reals = [mp.mpf(r.d_intersecting) for r in rep.rows]
        assert all(a < b for a, b in zip(reals, reals[1:]))


def test_crossover_first_improvement_consistent():
    rep = crossover_report(10, 3, 1)
    smaller_ds = [r.d for r in rep.rows if r.smaller == "d-intersecting"]
    assert rep.first_improvement == (min(smaller_ds) if smaller_ds else None)


# -- reports ------------------------------------------------------------------------

def test_bound_report_exact_and_real():
    rep = bound_report("erdos-rado", n=3, r=3)
    assert rep.value == "48" and rep.exact
    rep = bound_report("rlogn", n=2, r=3, C=1)
    assert not rep.exact and rep.digits == 50
    assert rep.params["C"] == "1"
    with pytest.raises(ValueError, match="needs parameters"):
        bound_report("erdos-rado", n=3)
    with pytest.raises(ValueError, match="unknown bound"):
        bound_report("nope", n=1, r=2)


def test_bound_report_all_names_resolvable():
    for name in BOUND_NAMES:
        rep = bound_report(name, n=4, r=3, s=2, L=[0, 2], d=2, C=1)
        assert rep.name == name and rep.value
