"""
稠密复矩阵工具
矩阵规模很小（一般不超过 10×10），直接使用 numpy/scipy 的 LAPACK 接口
"""

from typing import Optional

import numpy as np
from scipy import linalg as sla
from scipy.stats import unitary_group

from modules.errors import InvalidInputError

HERMITIAN_TOL = 1e-12
RANK_TOL = 1e-9

CMatrix = np.ndarray


def as_cmatrix(m) -> CMatrix:
    """转换为二维复矩阵并检查数值有限"""
    arr = np.array(m, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise InvalidInputError(f"Expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("Matrix contains non-finite entries")
    return arr


def max_abs_entry(m: CMatrix) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    if not m.size:
        return True
    return float(np.max(np.abs(m - m.conj().T))) <= tol * max(1.0, max_abs_entry(m))


def singular_values(m) -> np.ndarray:
    m = as_cmatrix(m)
    if not m.size:
        return np.zeros(0)
    return sla.svdvals(m)


def trace_norm(m) -> float:
    """迹范数（一范数）：奇异值之和"""
    return float(np.sum(singular_values(m)))


def hermitian_eigh(m, tol: float = HERMITIAN_TOL):
    """厄米矩阵本征分解，本征值升序"""
    m = as_cmatrix(m)
    if not is_hermitian(m, tol):
        raise InvalidInputError("Matrix is not Hermitian within tolerance")
    # 对称化后再分解，消除舍入带来的反厄米部分
    return np.linalg.eigh((m + m.conj().T) / 2)


def hermitian_eigenvalues(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    values, _ = hermitian_eigh(m, tol)
    return values


def kron(a, b) -> CMatrix:
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def numerical_rank(m, tol: Optional[float] = None) -> int:
    """奇异值大于 tol·σ_max 的个数"""
    s = singular_values(m)
    if not s.size or s[0] == 0.0:
        return 0
    tol = RANK_TOL if tol is None else tol
    return int(np.sum(s > tol * s[0]))


def is_unitary(m, tol: float = 1e-10) -> bool:
    return unitarity_residual(m) <= tol


def unitarity_residual(m) -> float:
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        return float('inf')
    if not m.size:
        return 0.0
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def random_unitary(n: int, rng: Optional[np.random.Generator] = None) -> CMatrix:
    """Haar 随机酉矩阵"""
    if n == 1:
        phase = (rng or np.random.default_rng()).uniform(0, 2 * np.pi)
        return np.array([[np.exp(1j * phase)]])
    return unitary_group.rvs(n, random_state=rng)
