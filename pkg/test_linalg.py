#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
稠密复矩阵工具测试
"""

import sys
import os

import numpy as np
from numpy.testing import assert_allclose

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from modules.errors import InvalidInputError
from modules.linalg import (
    hermitian_eigenvalues, is_hermitian, kron, numerical_rank, random_unitary, trace_norm
)
from testing_utils import run_suite

RNG_SEED = 7


def _random_matrix(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def test_trace_norm_examples():
    assert_allclose(trace_norm(np.eye(2)), 2.0, atol=1e-12)
    assert_allclose(trace_norm(np.diag([0.5, -0.5])), 1.0, atol=1e-12)
    # M†M 的本征值为 (½ ± 0.3)²
    m = np.array([[0.5j, 0.3], [0.3, -0.5j]])
    assert_allclose(trace_norm(m), 1.0, atol=1e-12)


def test_trace_norm_rejects_non_finite():
    try:
        trace_norm(np.array([[np.nan, 0], [0, 1]]))
    except InvalidInputError:
        return
    raise AssertionError("non-finite matrix was accepted")


def test_trace_norm_unitary_invariance():
    rng = np.random.default_rng(RNG_SEED)
    for n in (2, 3, 5):
        m = _random_matrix(rng, n)
        u, v = random_unitary(n, rng), random_unitary(n, rng)
        assert abs(trace_norm(u @ m @ v) - trace_norm(m)) <= 1e-9


def test_trace_norm_triangle_inequality():
    rng = np.random.default_rng(RNG_SEED + 1)
    for _ in range(20):
        a, b = _random_matrix(rng, 3), _random_matrix(rng, 3)
        assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-12


def test_hermitian_eigenvalues():
    assert_allclose(hermitian_eigenvalues([[1, 0], [0, 2]]), [1, 2], atol=1e-12)
    assert_allclose(hermitian_eigenvalues([[0, 1], [1, 0]]), [-1, 1], atol=1e-12)
    p, q = 0.7, 0.1
    disc = np.sqrt(1 - 4 * (p * (1 - p) - q * q))
    assert_allclose(hermitian_eigenvalues([[p, q], [q, 1 - p]]),
                    [(1 - disc) / 2, (1 + disc) / 2], atol=1e-12)


def test_hermitian_eigenvalues_rejects_non_hermitian():
    assert not is_hermitian([[0, 1], [0, 0]])
    try:
        hermitian_eigenvalues([[0, 1], [0, 0]])
    except InvalidInputError:
        return
    raise AssertionError("non-Hermitian matrix was accepted")


def test_eigenvalues_unitary_conjugation():
    rng = np.random.default_rng(RNG_SEED + 2)
    g = _random_matrix(rng, 4)
    h = g + g.conj().T
    u = random_unitary(4, rng)
    assert_allclose(hermitian_eigenvalues(u @ h @ u.conj().T), hermitian_eigenvalues(h), atol=1e-9)


def test_kron():
    assert_allclose(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert_allclose(kron(np.diag([1, -1]), [[2]]), np.diag([2, -2]))
    rng = np.random.default_rng(RNG_SEED + 3)
    for n in (2, 3):
        a, b = _random_matrix(rng, n), _random_matrix(rng, n)
        assert abs(trace_norm(kron(a, b)) - trace_norm(a) * trace_norm(b)) <= 1e-9


def test_numerical_rank():
    assert numerical_rank(np.zeros((3, 3))) == 0
    assert numerical_rank(np.eye(3)) == 3
    theta = np.exp(2j * np.pi / 3)
    delta = 0.5 * np.array([[theta, 1, -theta], [2, 0, 2], [-theta, 1, theta]])
    assert numerical_rank(delta.imag) == 1


def main():
    tests = [
        ("迹范数示例", test_trace_norm_examples),
        ("非有限输入", test_trace_norm_rejects_non_finite),
        ("酉不变性", test_trace_norm_unitary_invariance),
        ("三角不等式", test_trace_norm_triangle_inequality),
        ("厄米本征值", test_hermitian_eigenvalues),
        ("非厄米输入", test_hermitian_eigenvalues_rejects_non_hermitian),
        ("酉共轭", test_eigenvalues_unitary_conjugation),
        ("Kronecker 积", test_kron),
        ("数值秩", test_numerical_rank),
    ]
    return run_suite("线性代数测试", tests)


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
