"""
内置任意子模型
Ising^(ν)、Fibonacci、su(2)_k 以及 su(3)_3 的 {1, 8, 10, 10̄} 子理论
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np

from config import Config
from modules.category_core import (
    Category, FSymbolStore, Label, RSymbolStore, compute_a_symbols
)
from modules.errors import InvalidInputError

BUILTIN_NAMES = ('ising', 'fibonacci', 'su2', 'su3_3')


def _identity_blocks(cat: Category, known: Dict[tuple, np.ndarray]) -> Dict[tuple, np.ndarray]:
    """未列出的可容许块取单位阵"""
    blocks = dict(known)
    for a, b, c in itertools.product(range(cat.n), repeat=3):
        for d in cat.fusion_outcomes(a, b, c):
            if (a, b, c, d) not in blocks:
                rows, _ = cat.f_basis(a, b, c, d)
                blocks[(a, b, c, d)] = np.eye(len(rows), dtype=complex)
    return blocks


def _unit_r_blocks(fusion: np.ndarray, known: Dict[tuple, np.ndarray]) -> Dict[tuple, np.ndarray]:
    blocks = dict(known)
    n = fusion.shape[0]
    for a, b, c in itertools.product(range(n), repeat=3):
        if fusion[a, b, c] and (a, b, c) not in blocks:
            blocks[(a, b, c)] = np.eye(fusion[a, b, c], dtype=complex)
    return blocks


def _fusion_from_rules(n: int, rules: Dict[tuple, Dict[int, int]]) -> np.ndarray:
    fusion = np.zeros((n, n, n), dtype=int)
    for a in range(n):
        fusion[0, a, a] = fusion[a, 0, a] = 1
    for (a, b), outcomes in rules.items():
        for c, mult in outcomes.items():
            fusion[a, b, c] = fusion[b, a, c] = mult
    return fusion


def _assemble(name: str, labels: List[Label], fusion: np.ndarray,
              f_known: Dict[tuple, np.ndarray], r_known: Dict[tuple, np.ndarray],
              selector: dict) -> Category:
    cat = Category(name, labels, fusion, FSymbolStore(f_known),
                   RSymbolStore(_unit_r_blocks(fusion, r_known)), selector=selector)
    cat.f_symbols = FSymbolStore(_identity_blocks(cat, f_known))
    logging.info(f"Built category {name}")
    return compute_a_symbols(cat)


# ---- Ising ----

def ising(nu: int = 1) -> Category:
    """Ising^(ν)，ν 为奇数（模 16）"""
    if isinstance(nu, bool) or int(nu) != nu or nu % 2 == 0:
        raise InvalidInputError(f"Ising nu must be an odd integer, got {nu}")
    nu = int(nu) % 16
    kappa = (-1) ** (((nu * nu - 1) // 8) % 2)
    theta = np.exp(1j * np.pi * nu / 8)
    labels = [
        Label(0, 'I', 0, 1.0, 1.0 + 0j, 1.0 + 0j),
        Label(1, 'sigma', 1, np.sqrt(2.0), complex(theta), complex(kappa)),
        Label(2, 'psi', 2, 1.0, -1.0 + 0j, 1.0 + 0j),
    ]
    fusion = _fusion_from_rules(3, {(1, 1): {0: 1, 2: 1}, (1, 2): {1: 1}, (2, 2): {0: 1}})
    f_known = {
        (1, 1, 1, 1): kappa / np.sqrt(2) * np.array([[1, 1], [1, -1]], dtype=complex),
        (2, 1, 2, 1): np.array([[-1]], dtype=complex),
        (1, 2, 1, 2): np.array([[-1]], dtype=complex),
    }
    r_known = {
        (1, 1, 0): np.array([[kappa * np.exp(-1j * np.pi * nu / 8)]]),
        (1, 1, 2): np.array([[kappa * np.exp(3j * np.pi * nu / 8)]]),
        (1, 2, 1): np.array([[(-1j) ** nu]]),
        (2, 1, 1): np.array([[(-1j) ** nu]]),
        (2, 2, 0): np.array([[-1.0 + 0j]]),
    }
    return _assemble(f"Ising(nu={nu})", labels, fusion, f_known, r_known,
                     {'builtin': 'ising', 'nu': nu})


# ---- Fibonacci ----

GOLDEN_RATIO = (1 + np.sqrt(5)) / 2


def fibonacci() -> Category:
    phi = GOLDEN_RATIO
    labels = [
        Label(0, 'I', 0, 1.0, 1.0 + 0j, 1.0 + 0j),
        Label(1, 'tau', 1, float(phi), complex(np.exp(4j * np.pi / 5)), 1.0 + 0j),
    ]
    fusion = _fusion_from_rules(2, {(1, 1): {0: 1, 1: 1}})
    f_known = {
        (1, 1, 1, 1): np.array([[1 / phi, phi ** -0.5], [phi ** -0.5, -1 / phi]], dtype=complex),
    }
    r_known = {
        (1, 1, 0): np.array([[np.exp(-4j * np.pi / 5)]]),
        (1, 1, 1): np.array([[np.exp(3j * np.pi / 5)]]),
    }
    return _assemble('Fibonacci', labels, fusion, f_known, r_known, {'builtin': 'fibonacci'})


# ---- su(2)_k ----

@dataclass(frozen=True)
class QContext:
    """q = e^{2πi/(k+2)} 下的量子整数"""
    k: int

    @property
    def q(self) -> complex:
        return complex(np.exp(2j * np.pi / (self.k + 2)))

    def qnumber(self, n) -> np.ndarray:
        """[n]_q = sin(nπ/(k+2)) / sin(π/(k+2))"""
        x = np.pi / (self.k + 2)
        return np.sin(np.asarray(n) * x) / np.sin(x)

    @property
    def log_qfactorials(self) -> np.ndarray:
        return _log_qfactorial_table(self.k)

    def log_qfactorial(self, n) -> np.ndarray:
        """ln [n]_q!，n ≥ k+2 时阶乘为零（返回 -inf）"""
        table = self.log_qfactorials
        n = np.asarray(n)
        return table[np.clip(n, 0, len(table) - 1)]


@lru_cache(maxsize=64)
def _log_qfactorial_table(k: int) -> np.ndarray:
    size = 3 * k + 8
    x = np.pi / (k + 2)
    table = np.full(size, -np.inf)
    table[0] = 0.0
    for n in range(1, k + 2):
        table[n] = table[n - 1] + np.log(np.sin(n * x) / np.sin(x))
    return table


def _triangle(a, b, c):
    """二倍自旋的三角条件（未截断）"""
    return (np.abs(a - b) <= c) & (c <= a + b) & ((a + b + c) % 2 == 0)


def _admissible(k: int, a, b, c):
    return _triangle(a, b, c) & (a + b + c <= 2 * k)


def q_6j(ctx: QContext, j1, j2, j3, j4, j5, j6):
    """
    q 变形 Racah 6j 符号 {j1 j2 j3; j4 j5 j6}_q
    自旋以二倍整数给出，可广播为数组
    """
    a, b, c, d, e, f = np.broadcast_arrays(*(np.asarray(x, dtype=int) for x in (j1, j2, j3, j4, j5, j6)))
    k = ctx.k
    ok = (_admissible(k, a, b, c) & _admissible(k, a, e, f)
          & _admissible(k, d, b, f) & _admissible(k, d, e, c))
    if not np.all(ok):
        raise InvalidInputError("Inadmissible spins for the q-6j symbol")
    lf = ctx.log_qfactorial

    def log_delta(x, y, z):
        return 0.5 * (lf((x + y - z) // 2) + lf((x - y + z) // 2)
                      + lf((-x + y + z) // 2) - lf((x + y + z) // 2 + 1))

    prefactor = log_delta(a, b, c) + log_delta(a, e, f) + log_delta(d, b, f) + log_delta(d, e, c)
    triads = [(a + b + c) // 2, (a + e + f) // 2, (d + b + f) // 2, (d + e + c) // 2]
    sums = [(a + b + d + e) // 2, (b + c + e + f) // 2, (a + c + d + f) // 2]
    zmin = np.maximum.reduce(triads)
    zmax = np.minimum.reduce(sums)
    width = int(np.max(zmax - zmin)) + 1 if zmin.size else 1
    width = max(width, 1)
    z = zmin[..., None] + np.arange(width)
    valid = z <= zmax[..., None]
    log_den = sum(lf(z - t[..., None]) for t in triads) + sum(lf(s[..., None] - z) for s in sums)
    with np.errstate(invalid='ignore', over='ignore'):
        exponent = lf(z + 1) - log_den + prefactor[..., None]
        terms = np.where(valid & np.isfinite(exponent),
                         np.where(z % 2 == 0, 1.0, -1.0) * np.exp(np.where(valid, exponent, 0.0)),
                         0.0)
    result = terms.sum(axis=-1)
    return float(result) if result.ndim == 0 else result


def _spin_name(doubled: int) -> str:
    return str(doubled // 2) if doubled % 2 == 0 else f"{doubled}/2"


def su2_k(k: int, config: Optional[Config] = None) -> Category:
    """su(2)_k，标签编号即二倍自旋 2j"""
    config = config or Config()
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise InvalidInputError(f"su(2)_k level must be a positive integer, got {k}")
    if k > config.SU2_MAX_LEVEL:
        raise InvalidInputError(f"su(2)_k level {k} exceeds the limit {config.SU2_MAX_LEVEL}")
    k = int(k)
    ctx = QContext(k)
    n = k + 1
    spins = np.arange(n)
    qdims = ctx.qnumber(spins + 1)
    twists = np.exp(2j * np.pi * spins * (spins + 2) / (4 * (k + 2)))
    labels = [Label(j, _spin_name(j), j, float(qdims[j]), complex(twists[j]),
                    complex((-1) ** j)) for j in range(n)]

    a, b, c = np.meshgrid(spins, spins, spins, indexing='ij')
    fusion = _admissible(k, a, b, c).astype(int)

    def f_block(j1: int, j2: int, j3: int, j: int) -> Optional[np.ndarray]:
        rows = [e for e in range(n) if fusion[j1, j2, e] and fusion[e, j3, j]]
        cols = [f for f in range(n) if fusion[j2, j3, f] and fusion[j1, f, j]]
        if not rows:
            return None
        j12 = np.array(rows)[:, None]
        j23 = np.array(cols)[None, :]
        sixj = q_6j(ctx, j1, j2, j12, j3, j, j23)
        sign = (-1) ** (((j1 + j2 + j3 + j) // 2) % 2)
        return (sign * np.sqrt(ctx.qnumber(j12 + 1) * ctx.qnumber(j23 + 1)) * sixj).astype(complex)

    def r_block(j1: int, j2: int, j: int) -> Optional[np.ndarray]:
        if not fusion[j1, j2, j]:
            return None
        sign = (-1) ** (((j - j1 - j2) // 2) % 2)
        exponent = (j * (j + 2) - j1 * (j1 + 2) - j2 * (j2 + 2)) / 8
        return np.array([[sign * np.exp(2j * np.pi * exponent / (k + 2))]])

    cat = Category(f"su(2)_{k}", labels, fusion,
                   FSymbolStore(generator=f_block),
                   RSymbolStore(generator=r_block),
                   selector={'builtin': 'su2', 'k': k})
    logging.info(f"Built category su(2)_{k} with {n} labels")
    return compute_a_symbols(cat)


# ---- su(3)_3 子理论 ----
# 8 的基矢 x_0, x_1, x_2 带 Z2×Z2 分次 1, 2, 3，Z3 生成元循环置换 x_i；
# 10、10̄ 为分次 0 的一维空间，Z3 特征标 ω、ω²。辫子为分次双特征标乘以交换。
# F、R 由等距分裂张量直接缩并得到，五边形与六边形方程自动成立。

SU3_GRADES = ([0], [1, 2, 3], [0], [0])
SU3_CHARGES = (0, None, 1, 2)
SU3_BY_CHARGE = {0: 0, 1: 2, 2: 3}


def _graded_sign(x: int, y: int) -> float:
    """(-1)^{B(x,y)}，B = [[1,1],[0,1]] 在 Z2×Z2 上，且在 Z3 循环下不变"""
    x0, x1, y0, y1 = x & 1, x >> 1, y & 1, y >> 1
    return -1.0 if (x0 * y0 + x0 * y1 + x1 * y1) % 2 else 1.0


def _su3_splitting_tensors() -> Dict[tuple, np.ndarray]:
    """等距分裂张量 X[i_a, i_b, i_c, μ]，规范取使 F^{888}_8 为实矩阵、R^{88}_8 = diag(-i, i)"""
    one, eight = 0, 1
    dims = [len(grades) for grades in SU3_GRADES]
    omega = np.exp(2j * np.pi / 3)
    sites = np.arange(3)
    tensors: Dict[tuple, np.ndarray] = {}
    for a in range(4):
        eye = np.eye(dims[a], dtype=complex)
        tensors[(one, a, a)] = eye.reshape(1, dims[a], dims[a], 1)
        tensors[(a, one, a)] = eye.reshape(dims[a], 1, dims[a], 1)

    abelian = (2, 3)
    for t in abelian:
        k = SU3_CHARGES[t]
        phases = np.diag(omega ** (k * sites))
        tensors[(eight, t, eight)] = phases.reshape(3, 1, 3, 1)
        tensors[(t, eight, eight)] = phases.reshape(1, 3, 3, 1)
        for s in abelian:
            total = SU3_BY_CHARGE[(k + SU3_CHARGES[s]) % 3]
            tensors[(t, s, total)] = np.ones((1, 1, 1, 1), dtype=complex)

    for t in (one,) + abelian:
        k = SU3_CHARGES[t]
        sign = 1.0 if t == one else -1.0
        cup = np.zeros((3, 3, 1, 1), dtype=complex)
        cup[sites, sites, 0, 0] = sign * omega ** (-k * sites) / np.sqrt(3)
        tensors[(eight, eight, t)] = cup

    # 两个多重度矢量是交换的本征矢，本征值 -i 与 i
    rotor = np.exp(1j * np.pi / 4)
    vertices = ((rotor, rotor.conjugate()), (rotor.conjugate(), rotor))
    adjoint = np.zeros((3, 3, 3, 2), dtype=complex)
    for k in range(3):
        for mu, (u, v) in enumerate(vertices):
            adjoint[(k + 1) % 3, (k + 2) % 3, k, mu] = u / np.sqrt(2)
            adjoint[(k + 2) % 3, (k + 1) % 3, k, mu] = v / np.sqrt(2)
    tensors[(eight, eight, eight)] = adjoint
    return tensors


def _tree_f_block(cat: Category, tensors: Dict[tuple, np.ndarray], dims: List[int],
                  a: int, b: int, c: int, d: int) -> np.ndarray:
    """把 (ab)c 的分裂树展开到 a(bc) 的分裂树上"""
    rows, cols = cat.f_basis(a, b, c, d)
    block = np.zeros((len(rows), len(cols)), dtype=complex)
    for e in cat.channels(a, b):
        if not cat.N(e, c, d):
            continue
        left = np.einsum('xyeA,ezdB->xyzdAB', tensors[(a, b, e)], tensors[(e, c, d)])
        r0 = rows.index((e, 0, 0))
        for f in cat.channels(b, c):
            if not cat.N(a, f, d):
                continue
            right = np.einsum('yzfM,xfdN->xyzdMN', tensors[(b, c, f)], tensors[(a, f, d)])
            sub = np.einsum('xyzdAB,xyzdMN->ABMN', left, right.conj()) / dims[d]
            n_rows, n_cols = sub.shape[0] * sub.shape[1], sub.shape[2] * sub.shape[3]
            c0 = cols.index((f, 0, 0))
            block[r0:r0 + n_rows, c0:c0 + n_cols] = sub.reshape(n_rows, n_cols)
    return block


def _tree_r_block(tensors: Dict[tuple, np.ndarray], dims: List[int], a: int, b: int, c: int) -> np.ndarray:
    """c_{ab}∘ψ^{ab}_{c,α} = Σ_β [R^{ab}_c]_{αβ} ψ^{ba}_{c,β}"""
    sign = np.array([[_graded_sign(x, y) for y in SU3_GRADES[b]] for x in SU3_GRADES[a]])
    return np.einsum('xycA,yxcB,xy->AB', tensors[(a, b, c)], tensors[(b, a, c)].conj(), sign) / dims[c]


def su3_3_subtheory() -> Category:
    """{1, 8, 10, 10̄}，N_88^8 = 2"""
    labels = [
        Label(0, '1', 0, 1.0, 1.0 + 0j, 1.0 + 0j),
        Label(1, '8', 1, 3.0, -1.0 + 0j, 1.0 + 0j),
        Label(2, '10', 3, 1.0, 1.0 + 0j, 1.0 + 0j),
        Label(3, '10bar', 2, 1.0, 1.0 + 0j, 1.0 + 0j),
    ]
    one, eight, ten, tenbar = range(4)
    fusion = _fusion_from_rules(4, {
        (eight, eight): {one: 1, eight: 2, ten: 1, tenbar: 1},
        (eight, ten): {eight: 1},
        (eight, tenbar): {eight: 1},
        (ten, ten): {tenbar: 1},
        (tenbar, tenbar): {ten: 1},
        (ten, tenbar): {one: 1},
    })
    tensors = _su3_splitting_tensors()
    dims = [len(grades) for grades in SU3_GRADES]
    r_blocks = {key: _tree_r_block(tensors, dims, *key) for key in tensors}
    name = 'su(3)_3 {1,8,10,10bar}'
    cat = Category(name, labels, fusion, FSymbolStore(), RSymbolStore(r_blocks),
                   selector={'builtin': 'su3_3'})
    cat.f_symbols = FSymbolStore({
        (a, b, c, d): _tree_f_block(cat, tensors, dims, a, b, c, d)
        for a, b, c in itertools.product(range(cat.n), repeat=3)
        for d in cat.fusion_outcomes(a, b, c)
    })
    logging.info(f"Built category {name} from graded splitting tensors")
    return compute_a_symbols(cat)


def get_builtin(name: str, nu: Optional[int] = None, k: Optional[int] = None,
                config: Optional[Config] = None) -> Category:
    """按名称构造内置范畴"""
    key = (name or '').strip().lower().replace('-', '_').replace('(', '').replace(')', '')
    if key == 'ising':
        return ising(1 if nu is None else nu)
    if key in ('fibonacci', 'fib'):
        return fibonacci()
    if key in ('su2', 'su2_k'):
        if k is None:
            raise InvalidInputError("su2 requires a level k")
        return su2_k(k, config)
    if key in ('su3_3', 'su3'):
        return su3_3_subtheory()
    raise InvalidInputError(f"Unknown builtin category '{name}', expected one of {BUILTIN_NAMES}")
