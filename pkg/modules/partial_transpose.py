"""
任意子部分转置与对数负性（ALN）
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from config import Config
from modules.dimer_state import DimerState, _check_side
from modules.errors import InvalidInputError, UnsupportedInputError
from modules.linalg import kron, trace_norm


@dataclass(frozen=True)
class PTResult:
    """部分转置后的通道矩阵 [M^c]"""
    m: Dict[int, np.ndarray]
    source: DimerState
    side: str

    @property
    def reference(self) -> int:
        """量子迹权重 d_c/d_x 中的 x：A 侧为 b，B 侧为 a"""
        return self.source.b if self.side == 'A' else self.source.a

    def weights(self) -> Dict[int, float]:
        cat = self.source.cat
        d_ref = cat.qdim(self.reference)
        return {c: cat.qdim(c) / d_ref for c in self.m}

    def channel_norms(self) -> Dict[int, float]:
        return {c: trace_norm(block) for c, block in self.m.items()}

    def total_norm(self) -> float:
        weights = self.weights()
        return float(sum(weights[c] * norm for c, norm in self.channel_norms().items()))

    def quantum_trace(self) -> complex:
        weights = self.weights()
        return complex(sum(weights[c] * np.trace(block) for c, block in self.m.items()))

    def to_dict(self, config: Optional[Config] = None) -> dict:
        cat = self.source.cat
        norms = self.channel_norms()
        return {
            'side': self.side,
            'a': cat.label_name(self.source.a),
            'b': cat.label_name(self.source.b),
            'aln': _clamped_log(self.total_norm(), config or Config()),
            'channels': {
                cat.label_name(c): {
                    'weight': w,
                    'trace_norm': norms[c],
                    'matrix': [[[float(z.real), float(z.imag)] for z in row] for row in self.m[c]],
                }
                for c, w in sorted(self.weights().items())
            },
        }


def _transpose_a(cat, a: int, b: int, p: Dict[int, np.ndarray]) -> Dict[int, np.ndarray]:
    """
    [M^c]_{νν'} = Σ [p^f]_{μμ'} [A^{ab}_f]_{μδ} conj([A^{ab}_f]_{μ'δ'})
                   conj([R^{fā}_b]_{δσ}) conj([F^{āfā}_c]_{(b,σ,ν),(b,δ',σ')}) [R^{āb}_c]_{σ'ν'}
    使用顺时针半编织，使量子迹等于 θ_a
    """
    abar = cat.dual(a)
    result = {}
    for c in cat.channels(abar, b):
        size = cat.N(abar, b, c)
        block = np.zeros((size, size), dtype=complex)
        r_c = cat.R(abar, b, c)
        for f, p_f in p.items():
            amp = cat.A(a, b, f)
            r_f = cat.R(f, abar, b).conj()
            # 形状 (N_{āf}^b, N_{bā}^c, N_{fā}^b, N_{āb}^c)
            g = cat.F_sub(abar, f, abar, c, b, b)
            block += np.einsum('ab,ad,be,ds,snet,tm->nm',
                               p_f, amp, amp.conj(), r_f, g.conj(), r_c)
        result[c] = block
    return result


def partial_transpose_a(state: DimerState) -> PTResult:
    m = _transpose_a(state.cat, state.a, state.b, state.p)
    return PTResult(m=m, source=state, side='A')


def exchanged_blocks(state: DimerState) -> Dict[int, np.ndarray]:
    """交换两任意子后 (b, a) 的系数矩阵 R^{ab}_f† [p^f] R^{ab}_f"""
    cat = state.cat
    blocks = {}
    for f, p_f in state.p.items():
        r = cat.R(state.a, state.b, f)
        blocks[f] = r.conj().T @ p_f @ r
    return blocks


def partial_transpose_b(state: DimerState) -> PTResult:
    """B 侧部分转置：交换后的 dimer (b, a) 的 A 侧部分转置"""
    m = _transpose_a(state.cat, state.b, state.a, exchanged_blocks(state))
    return PTResult(m=m, source=state, side='B')


def partial_transpose(state: DimerState, side: str = 'A') -> PTResult:
    side = _check_side(side)
    return partial_transpose_a(state) if side == 'A' else partial_transpose_b(state)


def _clamped_log(norm: float, config: Config) -> float:
    value = float(np.log(norm))
    if value < 0:
        if value >= -config.ALN_CLAMP_TOL:
            return 0.0
        logging.error(f"Negative logarithmic negativity {value:.3e}")
    return value


def aln(state: DimerState, side: str = 'A', config: Optional[Config] = None) -> float:
    """E = ln Σ_c (d_c/d_b)‖M^c‖₁"""
    return _clamped_log(partial_transpose(state, side).total_norm(), config or Config())


def aln_multiplicity_free(state: DimerState, config: Optional[Config] = None) -> float:
    """
    无重数情形的闭式：ln Σ_c (d_c/d_b)|Σ_f p_f R^{fā}_b [F^{āfā}_c]_{b,b}|
    与一般收缩使用同一编织约定
    """
    if not state.is_multiplicity_free():
        raise UnsupportedInputError("Dimer has fusion multiplicity; use aln()")
    cat = state.cat
    a, b = state.a, state.b
    abar = cat.dual(a)
    total = 0.0
    for c in cat.channels(abar, b):
        amplitude = 0j
        for f, p_f in state.channel_weights.items():
            amplitude += p_f * cat.R(f, abar, b)[0, 0] * cat.F_sub(abar, f, abar, c, b, b)[0, 0, 0, 0]
        total += cat.qdim(c) / cat.qdim(b) * abs(amplitude)
    return _clamped_log(total, config or Config())


def aln_abelian_channel(state: DimerState, tol: float = 1e-10) -> float:
    """
    a 或 b 为阿贝尔任意子时 E = 0；
    只占据单一阿贝尔通道时 E = ln d_a
    """
    cat = state.cat
    if cat.is_abelian(state.a, tol) or cat.is_abelian(state.b, tol):
        return 0.0
    occupied = [f for f, w in state.channel_weights.items() if w > tol]
    if len(occupied) == 1 and cat.is_abelian(occupied[0], tol):
        return float(np.log(cat.qdim(state.a)))
    raise UnsupportedInputError("Dimer is not supported on a single Abelian channel")


def werner_ln(p0: float) -> float:
    """普通自旋 Werner 态的对数负性 ln(½ + p0 + |½ − p0|)"""
    if not 0.0 <= p0 <= 1.0:
        raise InvalidInputError(f"Singlet weight must lie in [0, 1], got {p0}")
    return float(np.log(0.5 + p0 + abs(0.5 - p0)))


def full_transpose_norm(state: DimerState) -> float:
    """完全转置只给每个通道附上相位 θ_f*，一范数保持为 1"""
    cat = state.cat
    return float(sum(trace_norm(np.conj(cat.twist(f)) * block) for f, block in state.p.items()))


def additive_aln(*results: PTResult, config: Optional[Config] = None) -> float:
    """独立 dimer 的联合部分转置：通道块做 Kronecker 积后求 ALN"""
    if not results:
        raise InvalidInputError("additive_aln needs at least one partial transpose")
    total = 0.0
    per_result = [list(r.m.items()) for r in results]
    weights = [r.weights() for r in results]
    for combo in itertools.product(*per_result):
        weight = 1.0
        block = np.ones((1, 1), dtype=complex)
        for (c, m_c), w in zip(combo, weights):
            weight *= w[c]
            block = kron(block, m_c)
        total += weight * trace_norm(block)
    return _clamped_log(total, config or Config())
