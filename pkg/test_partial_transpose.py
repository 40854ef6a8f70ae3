#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
任意子部分转置与 ALN 测试
"""

import sys
import os

import numpy as np
from numpy.testing import assert_allclose

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from modules.builtin_categories import GOLDEN_RATIO, fibonacci, ising, su2_k, su3_3_subtheory
from modules.dimer_state import new_dimer, random_dimer, separable_state
from modules.errors import InvalidInputError, UnsupportedInputError
from modules.linalg import singular_values
from modules.partial_transpose import (
    additive_aln, aln, aln_abelian_channel, aln_multiplicity_free, full_transpose_norm,
    partial_transpose, werner_ln
)
from modules.zero_locus import simplex_grid
from testing_utils import run_suite

# (范畴构造, a, b)，均无融合重数
MULTIPLICITY_FREE_FAMILIES = [
    (ising, 'sigma', 'sigma'),
    (fibonacci, 'tau', 'tau'),
    (lambda: su2_k(4), '1/2', '1/2'),
    (lambda: su2_k(4), '1', '1'),
    (lambda: su2_k(5), '1/2', '3/2'),
    (lambda: su2_k(6), '1', '1'),
]


def _ising_closed_form(p_i):
    return 0.5 * np.log(2 * (p_i ** 2 + (1 - p_i) ** 2))


def _su2_half_closed_form(k, p0):
    """两个自旋 ½ 的 ALN，p1 = 1 − p0"""
    x = np.pi / (k + 2)
    d = 2 * np.cos(x)
    q3 = d * d - 1
    phase = np.exp(-2j * x)
    p1 = 1 - p0
    return float(np.log((abs(p0 - phase * p1) + abs(q3 * p0 + phase * p1)) / d))


def _octet(p, qr, qi):
    q = complex(qr, qi)
    return np.array([[p, q], [np.conj(q), 1 - p]])


def _su3_closed_form(p, qr):
    x = 2 * p - 1
    return float(np.log(1 + abs(x) / 3
                        + sum(abs(x + 2 * np.sqrt(3) * s * qr) for s in (1, -1)) / 6))


def _random_octet(rng):
    p = rng.uniform(0, 1)
    r = np.sqrt(p * (1 - p)) * rng.uniform(0, 1)
    angle = rng.uniform(0, 2 * np.pi)
    return p, r * np.cos(angle), r * np.sin(angle)


def test_ising_closed_form():
    for nu in (1, 3, 5, 7, 9, 15):
        cat = ising(nu)
        for p_i in np.linspace(0, 1, 101):
            state = new_dimer(cat, 'sigma', 'sigma', {'I': p_i, 'psi': 1 - p_i})
            assert abs(aln(state) - _ising_closed_form(p_i)) < 1e-10
    assert aln(new_dimer(ising(), 'sigma', 'sigma', {'I': 0.5, 'psi': 0.5})) < 1e-12


def test_fibonacci_values():
    cat = fibonacci()
    assert_allclose(aln(new_dimer(cat, 'tau', 'tau', {'I': 1.0})), np.log(GOLDEN_RATIO), atol=1e-10)
    assert_allclose(aln(new_dimer(cat, 'tau', 'tau', {'tau': 1.0})), np.log(2 / GOLDEN_RATIO), atol=1e-10)
    omega = np.exp(3j * np.pi / 5)
    for p_i in np.linspace(0, 1, 41):
        p_t = 1 - p_i
        expected = np.log(abs(p_i + p_t * omega) / GOLDEN_RATIO + abs(p_i - p_t * omega / GOLDEN_RATIO))
        state = new_dimer(cat, 'tau', 'tau', {'I': p_i, 'tau': p_t})
        assert abs(aln(state) - expected) < 1e-10
        assert abs(aln_multiplicity_free(state) - expected) < 1e-10
    star = new_dimer(cat, 'tau', 'tau', {'I': 1 / GOLDEN_RATIO ** 2, 'tau': 1 / GOLDEN_RATIO})
    assert aln(star) < 1e-9


def test_su2_spin_half_curves():
    for k in (2, 3, 4, 10, 100):
        cat = su2_k(k)
        for p0 in np.linspace(0, 1, 51):
            state = new_dimer(cat, '1/2', '1/2', {'0': p0, '1': 1 - p0})
            assert abs(aln(state) - _su2_half_closed_form(k, p0)) < 1e-10, (k, p0)


def test_su2_spin_half_zero_point():
    for k in (2, 3, 4, 10):
        cat = su2_k(k)
        p_star = 1 / (2 * np.cos(np.pi / (k + 2))) ** 2
        at_star = new_dimer(cat, '1/2', '1/2', {'0': p_star, '1': 1 - p_star})
        assert aln(at_star) < 1e-9
        for p0 in (p_star - 0.05, p_star + 0.05):
            assert aln(new_dimer(cat, '1/2', '1/2', {'0': p0, '1': 1 - p0})) > 1e-6


def test_su2_level_two_matches_ising():
    su2, ising3 = su2_k(2), ising(3)
    for p0 in np.linspace(0, 1, 21):
        x = aln(new_dimer(su2, '1/2', '1/2', {'0': p0, '1': 1 - p0}))
        y = aln(new_dimer(ising3, 'sigma', 'sigma', {'I': p0, 'psi': 1 - p0}))
        assert abs(x - y) < 1e-9


def test_su2_large_level_near_werner():
    cat = su2_k(100)
    for p0 in np.linspace(0, 1, 41):
        state = new_dimer(cat, '1/2', '1/2', {'0': p0, '1': 1 - p0})
        assert abs(aln(state) - werner_ln(p0)) < 0.05


def test_su2_spin_one_level_four():
    cat = su2_k(4)
    phase = np.exp(-1j * np.pi / 3)
    for p0, p1, p2 in simplex_grid(3, 50):
        expected = np.log(0.5 * sum(abs(p0 - p2 + s * phase * p1) for s in (1, -1)) + abs(p0 + p2))
        state = new_dimer(cat, '1', '1', {'0': p0, '1': p1, '2': p2})
        assert abs(aln(state) - expected) < 1e-9


def test_su3_channel_matrices():
    cat = su3_3_subtheory()
    rng = np.random.default_rng(21)
    for _ in range(20):
        p, qr, qi = _random_octet(rng)
        state = new_dimer(cat, '8', '8', {'8': _octet(p, qr, qi)})
        m = partial_transpose(state).m
        assert_allclose(m[2][0, 0], 0.5j * (2 * p - 1) + 1j * np.sqrt(3) * qr, atol=1e-10)
        assert_allclose(m[3][0, 0], 0.5j * (2 * p - 1) - 1j * np.sqrt(3) * qr, atol=1e-10)
        assert_allclose(abs(m[0][0, 0]), abs(2 * p - 1), atol=1e-10)
        assert_allclose(np.sort(singular_values(m[1])), [0.5 - abs(qi), 0.5 + abs(qi)], atol=1e-10)
        assert abs(aln(state) - _su3_closed_form(p, qr)) < 1e-10


def test_su3_qi_independence_and_zero_line():
    cat = su3_3_subtheory()
    base = aln(new_dimer(cat, '8', '8', {'8': _octet(0.3, 0.2, 0.0)}))
    for qi in (-0.3, 0.1, 0.35):
        state = new_dimer(cat, '8', '8', {'8': _octet(0.3, 0.2, qi)})
        assert abs(aln(state) - base) < 1e-10
    for qi in (0.0, 0.2, 0.5):
        state = new_dimer(cat, '8', '8', {'8': _octet(0.5, 0.0, qi)})
        assert aln(state) < 1e-10
    state = new_dimer(cat, '8', '8', {'8': _octet(0.5, 0.1, 0.2)})
    try:
        aln_multiplicity_free(state)
    except UnsupportedInputError:
        return
    raise AssertionError("multiplicity shortcut accepted an su(3)_3 octet dimer")


def test_quantum_trace_identity():
    rng = np.random.default_rng(22)
    for make, a, b in MULTIPLICITY_FREE_FAMILIES:
        cat = make()
        for _ in range(20):
            state = random_dimer(cat, a, b, rng)
            assert abs(partial_transpose(state, 'A').quantum_trace() - cat.twist(state.a)) < 1e-10
            assert abs(partial_transpose(state, 'B').quantum_trace() - cat.twist(state.b)) < 1e-10
    cat = su3_3_subtheory()
    for _ in range(20):
        state = new_dimer(cat, '8', '8', {'8': _octet(*_random_octet(rng))})
        assert abs(partial_transpose(state).quantum_trace() - cat.twist(1)) < 1e-10


def test_non_negative_and_shortcut():
    rng = np.random.default_rng(23)
    for make, a, b in MULTIPLICITY_FREE_FAMILIES:
        cat = make()
        for _ in range(20):
            state = random_dimer(cat, a, b, rng)
            value = aln(state)
            assert value >= 0.0
            assert abs(value - aln_multiplicity_free(state)) < 1e-10


def test_side_symmetry():
    rng = np.random.default_rng(24)
    families = MULTIPLICITY_FREE_FAMILIES + [
        (lambda: su2_k(10), '1', '3/2'),
        (su3_3_subtheory, '8', '8'),
    ]
    for make, a, b in families:
        cat = make()
        for _ in range(10):
            state = random_dimer(cat, a, b, rng)
            assert abs(aln(state, 'A') - aln(state, 'B')) < 1e-10, (cat.name, a, b)


def test_separable_point_zero():
    families = MULTIPLICITY_FREE_FAMILIES + [
        (lambda: su2_k(10), '1/2', '1/2'),
        (lambda: su2_k(10), '1', '3/2'),
        (su3_3_subtheory, '8', '8'),
    ]
    for make, a, b in families:
        assert aln(separable_state(make(), a, b)) < 1e-9, (a, b)


def test_abelian_shortcut():
    cat = ising()
    state = new_dimer(cat, 'sigma', 'psi', {})
    assert aln_abelian_channel(state) == 0.0
    assert aln(state) < 1e-12
    state = new_dimer(cat, 'sigma', 'sigma', {'I': 1.0})
    assert_allclose(aln_abelian_channel(state), np.log(np.sqrt(2)), atol=1e-12)
    assert_allclose(aln(state), np.log(np.sqrt(2)), atol=1e-10)
    fib = new_dimer(fibonacci(), 'tau', 'tau', {'I': 1.0})
    assert_allclose(aln_abelian_channel(fib), aln(fib), atol=1e-10)
    try:
        aln_abelian_channel(new_dimer(fibonacci(), 'tau', 'tau', {'I': 0.5, 'tau': 0.5}))
    except UnsupportedInputError:
        return
    raise AssertionError("mixed non-Abelian dimer was accepted")


def test_werner_ln():
    assert_allclose(werner_ln(1.0), np.log(2), atol=1e-12)
    assert abs(werner_ln(0.3)) < 1e-12
    assert_allclose(werner_ln(0.75), np.log(1.5), atol=1e-12)
    try:
        werner_ln(1.2)
    except InvalidInputError:
        return
    raise AssertionError("singlet weight outside [0, 1] was accepted")


def test_full_transpose_norm():
    rng = np.random.default_rng(25)
    for make, a, b in MULTIPLICITY_FREE_FAMILIES:
        state = random_dimer(make(), a, b, rng)
        assert_allclose(full_transpose_norm(state), 1.0, atol=1e-12)
    state = random_dimer(su3_3_subtheory(), '8', '8', rng)
    assert_allclose(full_transpose_norm(state), 1.0, atol=1e-12)


def test_additive_aln():
    x = new_dimer(ising(), 'sigma', 'sigma', {'I': 0.8, 'psi': 0.2})
    y = new_dimer(fibonacci(), 'tau', 'tau', {'I': 0.1, 'tau': 0.9})
    joint = additive_aln(partial_transpose(x), partial_transpose(y))
    assert abs(joint - (aln(x) + aln(y))) < 1e-10
    try:
        additive_aln()
    except InvalidInputError:
        return
    raise AssertionError("empty additive_aln call was accepted")


def test_result_payload():
    state = new_dimer(ising(), 'sigma', 'sigma', {'I': 1.0})
    payload = partial_transpose(state, 'b').to_dict()
    assert payload['side'] == 'B'
    assert set(payload['channels']) == {'I', 'psi'}
    assert_allclose(payload['aln'], np.log(np.sqrt(2)), atol=1e-10)
    for channel in payload['channels'].values():
        assert_allclose(channel['weight'], 1 / np.sqrt(2))


def main():
    tests = [
        ("Ising 闭式", test_ising_closed_form),
        ("Fibonacci", test_fibonacci_values),
        ("su(2)_k 自旋 ½ 曲线", test_su2_spin_half_curves),
        ("su(2)_k 自旋 ½ 零点", test_su2_spin_half_zero_point),
        ("su(2)_2 与 Ising ν=3", test_su2_level_two_matches_ising),
        ("su(2)_100 与 Werner", test_su2_large_level_near_werner),
        ("su(2)_4 自旋 1", test_su2_spin_one_level_four),
        ("su(3)_3 通道矩阵", test_su3_channel_matrices),
        ("su(3)_3 零线", test_su3_qi_independence_and_zero_line),
        ("量子迹恒等式", test_quantum_trace_identity),
        ("非负与闭式一致", test_non_negative_and_shortcut),
        ("两侧对称", test_side_symmetry),
        ("可分点为零", test_separable_point_zero),
        ("阿贝尔通道", test_abelian_shortcut),
        ("Werner 态", test_werner_ln),
        ("完全转置", test_full_transpose_norm),
        ("可加性", test_additive_aln),
        ("结果字典", test_result_payload),
    ]
    return run_suite("部分转置测试", tests)


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
