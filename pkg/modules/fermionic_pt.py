"""
费米子部分转置
占据数基下的稠密 Majorana 代数，用来与 Ising 范畴的 ALN 交叉验证
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Optional, Set, Tuple

import numpy as np
from scipy.linalg import expm

from config import Config
from modules.errors import InvalidInputError
from modules.linalg import as_cmatrix, is_hermitian, trace_norm

# 单模湮灭算符 f，基底 |0>, |1>
_ANNIHILATE = np.array([[0, 1], [0, 0]], dtype=complex)
_PARITY = np.diag([1.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class FockOperator:
    n_modes: int
    matrix: np.ndarray

    def __matmul__(self, other: 'FockOperator') -> 'FockOperator':
        _same_size(self, other)
        return FockOperator(self.n_modes, self.matrix @ other.matrix)

    def __add__(self, other: 'FockOperator') -> 'FockOperator':
        _same_size(self, other)
        return FockOperator(self.n_modes, self.matrix + other.matrix)

    def scaled(self, factor: complex) -> 'FockOperator':
        return FockOperator(self.n_modes, factor * self.matrix)

    def dagger(self) -> 'FockOperator':
        return FockOperator(self.n_modes, self.matrix.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


def _same_size(x: FockOperator, y: FockOperator):
    if x.n_modes != y.n_modes:
        raise InvalidInputError(f"Mode counts differ: {x.n_modes} vs {y.n_modes}")


def _check_modes(n_modes: int, config: Optional[Config] = None):
    config = config or Config()
    if not 1 <= n_modes <= config.FOCK_MAX_MODES:
        raise InvalidInputError(f"Mode count must be between 1 and {config.FOCK_MAX_MODES}, got {n_modes}")


def identity(n_modes: int) -> FockOperator:
    _check_modes(n_modes)
    return FockOperator(n_modes, np.eye(2 ** n_modes, dtype=complex))


@lru_cache(maxsize=None)
def _annihilation_matrix(n_modes: int, mode: int) -> np.ndarray:
    """Jordan-Wigner：f_j = P ⊗ … ⊗ P ⊗ f ⊗ 1 ⊗ … ⊗ 1"""
    factors = [_PARITY] * (mode - 1) + [_ANNIHILATE] + [np.eye(2)] * (n_modes - mode)
    result = np.ones((1, 1), dtype=complex)
    for factor in factors:
        result = np.kron(result, factor)
    result.setflags(write=False)
    return result


def annihilation(n_modes: int, mode: int) -> FockOperator:
    _check_modes(n_modes)
    if not 1 <= mode <= n_modes:
        raise InvalidInputError(f"Mode {mode} out of range 1..{n_modes}")
    return FockOperator(n_modes, _annihilation_matrix(n_modes, mode).copy())


def majorana(n_modes: int, index: int) -> FockOperator:
    """c_{2j−1} = f_j† + f_j，c_{2j} = i(f_j − f_j†)"""
    _check_modes(n_modes)
    if not 1 <= index <= 2 * n_modes:
        raise InvalidInputError(f"Majorana index {index} out of range 1..{2 * n_modes}")
    f = _annihilation_matrix(n_modes, (index + 1) // 2)
    if index % 2 == 1:
        matrix = f.conj().T + f
    else:
        matrix = 1j * (f - f.conj().T)
    return FockOperator(n_modes, matrix)


def parity(n_modes: int) -> FockOperator:
    """(−1)^{总占据数}"""
    _check_modes(n_modes)
    matrix = np.ones((1, 1), dtype=complex)
    for _ in range(n_modes):
        matrix = np.kron(matrix, _PARITY)
    return FockOperator(n_modes, matrix)


def monomial(n_modes: int, indices: Iterable[int]) -> FockOperator:
    """按给定顺序相乘的 Majorana 单项式"""
    result = identity(n_modes)
    for index in indices:
        result = result @ majorana(n_modes, index)
    return result


def _monomials(n_modes: int) -> Iterator[Tuple[Tuple[int, ...], np.ndarray]]:
    """深度优先遍历全部 4^N 个升序单项式，只保留一条乘积链"""
    gens = [majorana(n_modes, i).matrix for i in range(1, 2 * n_modes + 1)]
    stack = [((), np.eye(2 ** n_modes, dtype=complex), 0)]
    while stack:
        indices, matrix, start = stack.pop()
        yield indices, matrix
        for pos in range(2 * n_modes - 1, start - 1, -1):
            stack.append((indices + (pos + 1,), matrix @ gens[pos], pos + 1))


def monomial_expansion(op: FockOperator, tol: float = 1e-14) -> Dict[Tuple[int, ...], complex]:
    """op = Σ_S x_S c_S，x_S = Tr(c_S† op)/2^N"""
    dim = 2 ** op.n_modes
    coeffs = {}
    for indices, matrix in _monomials(op.n_modes):
        value = np.vdot(matrix, op.matrix) / dim
        if abs(value) > tol:
            coeffs[indices] = complex(value)
    return coeffs


def from_monomials(coeffs: Dict[Tuple[int, ...], complex], n_modes: int) -> FockOperator:
    result = np.zeros((2 ** n_modes, 2 ** n_modes), dtype=complex)
    for indices, value in coeffs.items():
        result += value * monomial(n_modes, indices).matrix
    return FockOperator(n_modes, result)


def _majoranas_of(modes: Set[int]) -> Set[int]:
    return {idx for j in modes for idx in (2 * j - 1, 2 * j)}


def fermionic_pt_a(op: FockOperator, modes_in_a: Iterable[int]) -> FockOperator:
    """每个单项式乘以 i^{k1}，k1 为其中属于 A 的 Majorana 个数"""
    modes = set(modes_in_a)
    if any(not 1 <= j <= op.n_modes for j in modes):
        raise InvalidInputError(f"Modes {sorted(modes)} out of range 1..{op.n_modes}")
    in_a = _majoranas_of(modes)
    dim = 2 ** op.n_modes
    result = np.zeros((dim, dim), dtype=complex)
    for indices, matrix in _monomials(op.n_modes):
        value = np.vdot(matrix, op.matrix) / dim
        if value == 0:
            continue
        k1 = sum(1 for idx in indices if idx in in_a)
        result += value * (1j ** k1) * matrix
    return FockOperator(op.n_modes, result)


def fermionic_ln(rho: FockOperator, modes_in_a: Iterable[int], config: Optional[Config] = None) -> float:
    """ln ‖ρ^{T_A}‖₁"""
    config = config or Config()
    if not is_hermitian(rho.matrix, 1e-10):
        raise InvalidInputError("Density matrix is not Hermitian")
    tr = rho.trace()
    if abs(tr - 1.0) > config.FERMION_TRACE_TOL:
        raise InvalidInputError(f"Density matrix trace is {tr.real:.12g}, expected 1")
    p = parity(rho.n_modes).matrix
    if np.max(np.abs(p @ rho.matrix - rho.matrix @ p)) > 1e-10:
        raise InvalidInputError("Density matrix is not parity even")
    value = float(np.log(trace_norm(fermionic_pt_a(rho, modes_in_a).matrix)))
    return 0.0 if -config.ALN_CLAMP_TOL <= value < 0 else value


def majorana_dimer_state(n_modes: int = 2, i: int = 2, j: int = 3) -> FockOperator:
    """(1 + i c_i c_j)/2^N，其余模式处于最大混合态"""
    op = identity(n_modes) + (majorana(n_modes, i) @ majorana(n_modes, j)).scaled(1j)
    return op.scaled(1 / 2 ** n_modes)


def product_state(occupations: Iterable[int]) -> FockOperator:
    """占据数本征态 |n1…nN><n1…nN|"""
    occupations = [int(x) for x in occupations]
    n_modes = len(occupations)
    _check_modes(n_modes)
    index = int(''.join(str(x) for x in occupations), 2)
    matrix = np.zeros((2 ** n_modes, 2 ** n_modes), dtype=complex)
    matrix[index, index] = 1.0
    return FockOperator(n_modes, matrix)


def vortex_exchange(n_modes: int, i: int, j: int) -> FockOperator:
    """τ = exp((π/4) γ_j γ_i) = (1 − γ_i γ_j)/√2"""
    if i == j:
        raise InvalidInputError("Exchange needs two distinct Majorana indices")
    gi, gj = majorana(n_modes, i), majorana(n_modes, j)
    return (identity(n_modes) + (gi @ gj).scaled(-1)).scaled(1 / np.sqrt(2))


def vortex_exchange_expm(n_modes: int, i: int, j: int) -> FockOperator:
    """指数形式，用于核对闭式"""
    if i == j:
        raise InvalidInputError("Exchange needs two distinct Majorana indices")
    generator = (majorana(n_modes, j) @ majorana(n_modes, i)).matrix
    return FockOperator(n_modes, as_cmatrix(expm(np.pi / 4 * generator)))


def clifford_residual(n_modes: int) -> float:
    """max |{c_j, c_k} − 2δ_jk|"""
    gens = [majorana(n_modes, idx).matrix for idx in range(1, 2 * n_modes + 1)]
    eye = np.eye(2 ** n_modes)
    worst = 0.0
    for x, gx in enumerate(gens):
        for y, gy in enumerate(gens):
            target = 2 * eye if x == y else 0 * eye
            worst = max(worst, float(np.max(np.abs(gx @ gy + gy @ gx - target))))
    return worst
