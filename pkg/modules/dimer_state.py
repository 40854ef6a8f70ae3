"""
两任意子（dimer）密度矩阵
按融合通道给出系数矩阵 [p^f]，并计算 AEE、ACE、互信息与 Rényi 熵
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Union

import numpy as np

from config import Config
from modules.category_core import Category
from modules.errors import InvalidInputError, UnsupportedInputError
from modules.linalg import as_cmatrix, hermitian_eigenvalues, is_hermitian

SIDES = ('A', 'B')


@dataclass(frozen=True)
class DimerState:
    """ρ̃ = Σ_f [p^f] 在通道 f 上的系数矩阵"""
    cat: Category
    a: int
    b: int
    p: Dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def channel_weights(self) -> Dict[int, float]:
        return {f: float(np.trace(block).real) for f, block in self.p.items()}

    def is_multiplicity_free(self) -> bool:
        cat = self.cat
        abar = cat.dual(self.a)
        return (all(cat.N(self.a, self.b, f) <= 1 for f in cat.channels(self.a, self.b))
                and all(cat.N(abar, self.b, c) <= 1 for c in cat.channels(abar, self.b)))

    def to_dict(self) -> dict:
        cat = self.cat
        return {
            'category': cat.selector,
            'category_hash': cat.fingerprint(),
            'a': cat.label_name(self.a),
            'b': cat.label_name(self.b),
            'channels': {
                cat.label_name(f): [[[float(z.real), float(z.imag)] for z in row] for row in block]
                for f, block in sorted(self.p.items())
            },
        }


ChannelValue = Union[float, complex, np.ndarray, list]


def _channel_matrix(value: ChannelValue) -> np.ndarray:
    """标量提升为 1×1；[[re, im], ...] 的嵌套列表按复数解析"""
    if isinstance(value, (list, tuple)) and _looks_like_pairs(value):
        arr = np.array(value, dtype=float)
        return as_cmatrix(arr[..., 0] + 1j * arr[..., 1])
    return as_cmatrix(value)


def _looks_like_pairs(value) -> bool:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        return False
    return arr.ndim == 3 and arr.shape[-1] == 2


def new_dimer(cat: Category, a, b, p_map: Mapping, config: Optional[Config] = None) -> DimerState:
    """
    构造并校验 dimer 态
    迹与 1 的偏差不超过 1e-6 时重新归一化，否则拒绝
    """
    config = config or Config()
    a, b = cat.label_id(a), cat.label_id(b)
    blocks: Dict[int, np.ndarray] = {}
    for key, value in p_map.items():
        f = cat.label_id(key)
        mult = cat.N(a, b, f)
        if mult == 0:
            raise InvalidInputError(
                f"Channel {cat.label_name(f)} is not in {cat.label_name(a)} x {cat.label_name(b)}")
        block = _channel_matrix(value)
        if block.shape != (mult, mult):
            raise InvalidInputError(
                f"Channel {cat.label_name(f)} needs a {mult}x{mult} matrix, got {block.shape}")
        if not is_hermitian(block, config.HERMITIAN_TOL):
            raise InvalidInputError(f"Channel {cat.label_name(f)} matrix is not Hermitian")
        block = (block + block.conj().T) / 2
        if hermitian_eigenvalues(block)[0] < -config.PSD_TOL:
            raise InvalidInputError(f"Channel {cat.label_name(f)} matrix is not positive semi-definite")
        blocks[f] = blocks.get(f, 0) + block

    channels = cat.channels(a, b)
    if len(channels) == 1 and not blocks:
        # 单一通道时系数被强制确定
        f = channels[0]
        mult = cat.N(a, b, f)
        blocks[f] = np.eye(mult, dtype=complex) / mult

    total = sum(float(np.trace(block).real) for block in blocks.values())
    if abs(total - 1.0) > config.NORMALIZATION_REPAIR_TOL:
        raise InvalidInputError(f"Dimer trace is {total:.12g}, expected 1")
    if abs(total - 1.0) > 1e-12:
        logging.warning(f"Renormalizing dimer with trace {total:.15g}")
    blocks = {f: block / total for f, block in sorted(blocks.items())}
    return DimerState(cat, a, b, blocks)


def separable_state(cat: Category, a, b) -> DimerState:
    """[p^f] = d_f/(d_a d_b)·I"""
    a, b = cat.label_id(a), cat.label_id(b)
    scale = cat.qdim(a) * cat.qdim(b)
    return new_dimer(cat, a, b, {
        f: cat.qdim(f) / scale * np.eye(cat.N(a, b, f)) for f in cat.channels(a, b)
    })


def random_dimer(cat: Category, a, b, rng: Optional[np.random.Generator] = None) -> DimerState:
    """每个通道取 Wishart 随机块，再整体归一化"""
    rng = rng or np.random.default_rng()
    a, b = cat.label_id(a), cat.label_id(b)
    blocks = {}
    for f in cat.channels(a, b):
        mult = cat.N(a, b, f)
        g = rng.normal(size=(mult, mult)) + 1j * rng.normal(size=(mult, mult))
        blocks[f] = g @ g.conj().T * rng.uniform(0.0, 1.0)
    total = sum(np.trace(block).real for block in blocks.values())
    return new_dimer(cat, a, b, {f: block / total for f, block in blocks.items()})


def channel_projectors(cat: Category, a, b) -> Dict[int, np.ndarray]:
    """
    dimer 空间 ⊕_c V^c_{ab}⊗V^{ab}_c 上的通道投影 Π^c
    """
    a, b = cat.label_id(a), cat.label_id(b)
    dims = {c: cat.N(a, b, c) ** 2 for c in cat.channels(a, b)}
    total = sum(dims.values())
    projectors = {}
    offset = 0
    for c, dim in dims.items():
        proj = np.zeros((total, total), dtype=complex)
        proj[offset:offset + dim, offset:offset + dim] = np.eye(dim)
        projectors[c] = proj
        offset += dim
    return projectors


def _eigen_spectrum(state: DimerState, config: Config):
    for f, block in state.p.items():
        values = hermitian_eigenvalues(block)
        yield f, values[values > config.EIGEN_CUTOFF]


def aee(state: DimerState, config: Optional[Config] = None) -> float:
    """S = −Σ_f Σ_i λ_i^f ln(λ_i^f / d_f)"""
    config = config or Config()
    total = 0.0
    for f, values in _eigen_spectrum(state, config):
        total -= float(np.sum(values * np.log(values / state.cat.qdim(f))))
    return total


def renyi_entropy(state: DimerState, n: float, config: Optional[Config] = None) -> float:
    """S_n = ln(Σ_f d_f Σ_i (λ_i^f/d_f)^n) / (1−n)"""
    config = config or Config()
    if n <= 0:
        raise InvalidInputError(f"Renyi index must be positive, got {n}")
    if abs(n - 1.0) < 1e-12:
        return aee(state, config)
    total = 0.0
    for f, values in _eigen_spectrum(state, config):
        d_f = state.cat.qdim(f)
        total += d_f * float(np.sum((values / d_f) ** n))
    return float(np.log(total) / (1.0 - n))


def partial_quantum_trace(state: DimerState, side: str = 'A') -> Dict[int, float]:
    """
    迹掉另一侧后剩下的约化算符：保留一侧电荷线上的归一化单位算符
    返回 {电荷: 权重}
    """
    side = _check_side(side)
    return {state.a if side == 'A' else state.b: 1.0}


def reduced_entropy(state: DimerState, side: str = 'A') -> float:
    cat = state.cat
    return float(sum(-w * np.log(w / cat.qdim(c))
                     for c, w in partial_quantum_trace(state, side).items() if w > 0))


def mutual_information(state: DimerState, config: Optional[Config] = None) -> float:
    return reduced_entropy(state, 'A') + reduced_entropy(state, 'B') - aee(state, config)


def ace(state: DimerState) -> float:
    """S_ace = ln d_a + ln d_b − Σ_f p_f ln d_f + Σ_f p_f ln p_f"""
    cat = state.cat
    if any(cat.N(state.a, state.b, f) > 1 for f in state.p):
        raise UnsupportedInputError("ACE is only defined here for multiplicity-free dimers")
    value = np.log(cat.qdim(state.a)) + np.log(cat.qdim(state.b))
    for f, p_f in state.channel_weights.items():
        if p_f > 0:
            value += p_f * np.log(p_f) - p_f * np.log(cat.qdim(f))
    return float(value)


def _check_side(side: str) -> str:
    side = str(side).upper()
    if side not in SIDES:
        raise InvalidInputError(f"Side must be A or B, got {side}")
    return side


def dimer_from_dict(cat: Category, data: dict, config: Optional[Config] = None) -> DimerState:
    """to_dict 的逆；category_hash 不一致时拒绝"""
    expected = data.get('category_hash')
    if expected and expected != cat.fingerprint():
        raise InvalidInputError("Dimer was saved for a different category")
    try:
        return new_dimer(cat, data['a'], data['b'], data.get('channels', {}), config)
    except KeyError as e:
        raise InvalidInputError(f"Missing dimer field {e}") from e
