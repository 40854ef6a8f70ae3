"""
任意子范畴数据
标签、融合系数、F/R/A 符号的存储与一致性检查（五边形、六边形、幺正性、维数恒等式、拓扑自旋）
"""

import copy
import hashlib
import itertools
import json
import logging
import threading
from dataclasses import dataclass, field, replace, asdict
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from config import Config
from modules.errors import DataIncompleteError, InvalidInputError
from modules.linalg import as_cmatrix, unitarity_residual

VACUUM = 0


@dataclass(frozen=True)
class Label:
    """任意子标签"""
    id: int
    name: str
    dual_id: int
    qdim: float
    twist: complex
    fs_indicator: Optional[complex] = None


class SymbolStore:
    """
    矩阵块存储
    可以给定全部块，也可以给定生成函数按需计算并缓存
    """

    kind = 'X'

    def __init__(self, blocks: Optional[Dict[tuple, np.ndarray]] = None,
                 generator: Optional[Callable[..., Optional[np.ndarray]]] = None):
        self._blocks = {tuple(k): as_cmatrix(v) for k, v in (blocks or {}).items()}
        self._generator = generator
        self._lock = threading.Lock()
        self.generated = 0

    @property
    def lazy(self) -> bool:
        return self._generator is not None

    def get(self, key: tuple) -> Optional[np.ndarray]:
        block = self._blocks.get(key)
        if block is None and self._generator is not None:
            block = self._generator(*key)
            with self._lock:
                self.generated += 1
                if block is not None:
                    self._blocks[key] = block
        return block

    def __contains__(self, key) -> bool:
        return self.get(tuple(key)) is not None

    def items(self) -> List[Tuple[tuple, np.ndarray]]:
        """已物化的块"""
        with self._lock:
            return sorted(self._blocks.items())

    def updated(self, updates: Dict[tuple, np.ndarray]) -> 'SymbolStore':
        clone = type(self)(dict(self._blocks), self._generator)
        for key, block in updates.items():
            clone._blocks[tuple(key)] = as_cmatrix(block)
        return clone


class FSymbolStore(SymbolStore):
    kind = 'F'


class RSymbolStore(SymbolStore):
    kind = 'R'


class ASymbolStore(SymbolStore):
    kind = 'A'


class Category:
    """任意子模型：标签、融合张量、F/R 符号以及导出的 A 符号"""

    def __init__(self, name: str, labels: List[Label], fusion,
                 f_symbols: FSymbolStore, r_symbols: RSymbolStore,
                 selector: Optional[dict] = None):
        self.name = name
        self.fusion = np.asarray(fusion, dtype=int)
        n = len(labels)
        if self.fusion.shape != (n, n, n):
            raise InvalidInputError(f"Fusion tensor shape {self.fusion.shape} does not match {n} labels")
        if np.any(self.fusion < 0):
            raise InvalidInputError("Fusion multiplicities must be non-negative")
        for i, label in enumerate(labels):
            if label.id != i:
                raise InvalidInputError(f"Label {label.name} has id {label.id}, expected {i}")
            if not 0 <= label.dual_id < n:
                raise InvalidInputError(f"Label {label.name} has invalid dual {label.dual_id}")
        self.f_symbols = f_symbols
        self.r_symbols = r_symbols
        self.a_symbols: Optional[ASymbolStore] = None
        self.selector = dict(selector or {'name': name})

        self._channels = {
            (a, b): [c for c in range(n) if self.fusion[a, b, c] > 0]
            for a in range(n) for b in range(n)
        }
        self._basis_cache: Dict[tuple, tuple] = {}

        self.labels = list(labels)
        self.labels = [
            label if label.fs_indicator is not None
            else replace(label, fs_indicator=complex(self._fs_from_f(label.id)))
            for label in labels
        ]
        self._names = {label.name: label.id for label in self.labels}

    # ---- 基本查询 ----

    @property
    def n(self) -> int:
        return len(self.labels)

    def N(self, a: int, b: int, c: int) -> int:
        return int(self.fusion[a, b, c])

    def channels(self, a: int, b: int) -> List[int]:
        return self._channels[(a, b)]

    def dual(self, a: int) -> int:
        return self.labels[a].dual_id

    def qdim(self, a: int) -> float:
        return self.labels[a].qdim

    def twist(self, a: int) -> complex:
        return self.labels[a].twist

    def label_name(self, a: int) -> str:
        return self.labels[a].name

    def label_id(self, key) -> int:
        """按名称或编号查找标签"""
        if isinstance(key, (int, np.integer)):
            if 0 <= int(key) < self.n:
                return int(key)
            raise InvalidInputError(f"Label index {key} out of range for {self.name}")
        key = str(key).strip()
        if key in self._names:
            return self._names[key]
        for alias in _label_aliases(key):
            if alias in self._names:
                return self._names[alias]
        raise InvalidInputError(f"Unknown label '{key}' for category {self.name}")

    def is_abelian(self, a: int, tol: float = 1e-10) -> bool:
        return abs(self.qdim(a) - 1.0) <= tol

    def is_multiplicity_free(self) -> bool:
        return bool(np.all(self.fusion <= 1))

    def fingerprint(self) -> str:
        payload = json.dumps(self.selector, sort_keys=True)
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:16]

    def fusion_outcomes(self, *charges: int) -> List[int]:
        """多个标签依次融合可得到的总荷"""
        vector = np.zeros(self.n, dtype=int)
        vector[charges[0]] = 1
        for charge in charges[1:]:
            vector = np.einsum('a,ac->c', vector, self.fusion[:, charge, :])
        return [int(c) for c in np.nonzero(vector)[0]]

    # ---- F 块基底 ----

    def f_basis(self, a: int, b: int, c: int, d: int) -> Tuple[list, list]:
        """
        F^{abc}_d 的行 (e,α,β) 与列 (f,μ,ν)，按 (标签编号, 第一个顶点, 第二个顶点) 字典序
        """
        key = (a, b, c, d)
        cached = self._basis_cache.get(key)
        if cached is not None:
            return cached
        rows = [(e, al, be)
                for e in self.channels(a, b)
                for al in range(self.N(a, b, e))
                for be in range(self.N(e, c, d))]
        cols = [(f, mu, nu)
                for f in self.channels(b, c)
                for mu in range(self.N(b, c, f))
                for nu in range(self.N(a, f, d))]
        self._basis_cache[key] = (rows, cols)
        return rows, cols

    def F(self, a: int, b: int, c: int, d: int) -> np.ndarray:
        rows, cols = self.f_basis(a, b, c, d)
        if not rows and not cols:
            return np.zeros((0, 0), dtype=complex)
        block = self.f_symbols.get((a, b, c, d))
        if block is None:
            raise DataIncompleteError(f"F[{self._names_of(a, b, c)};{self.label_name(d)}]")
        if block.shape != (len(rows), len(cols)):
            raise InvalidInputError(
                f"F[{self._names_of(a, b, c)};{self.label_name(d)}] has shape {block.shape}, "
                f"expected {(len(rows), len(cols))}")
        return block

    def F_sub(self, a: int, b: int, c: int, d: int, e: int, f: int) -> np.ndarray:
        """F^{abc}_d 中行标签 e、列标签 f 的子块，形状 (N_ab^e, N_ec^d, N_bc^f, N_af^d)"""
        shape = (self.N(a, b, e), self.N(e, c, d), self.N(b, c, f), self.N(a, f, d))
        if 0 in shape:
            return np.zeros(shape, dtype=complex)
        rows, cols = self.f_basis(a, b, c, d)
        r0 = rows.index((e, 0, 0))
        c0 = cols.index((f, 0, 0))
        block = self.F(a, b, c, d)
        sub = block[r0:r0 + shape[0] * shape[1], c0:c0 + shape[2] * shape[3]]
        return sub.reshape(shape)

    def R(self, a: int, b: int, c: int) -> np.ndarray:
        if self.N(a, b, c) == 0:
            return np.zeros((0, 0), dtype=complex)
        block = self.r_symbols.get((a, b, c))
        if block is None:
            raise DataIncompleteError(f"R[{self._names_of(a, b)};{self.label_name(c)}]")
        return block

    def A(self, a: int, b: int, c: int) -> np.ndarray:
        if self.a_symbols is None:
            raise DataIncompleteError(f"A[{self._names_of(a, b)};{self.label_name(c)}]")
        if self.N(a, b, c) == 0:
            return np.zeros((0, 0), dtype=complex)
        block = self.a_symbols.get((a, b, c))
        if block is None:
            raise DataIncompleteError(f"A[{self._names_of(a, b)};{self.label_name(c)}]")
        return block

    def _names_of(self, *ids: int) -> str:
        return ','.join(self.label_name(i) for i in ids)

    def _fs_from_f(self, a: int) -> complex:
        """ϰ_a = d_a·[F^{aāa}_a]_{1,1}"""
        abar = self.dual(a)
        try:
            block = self.F_sub(a, abar, a, a, VACUUM, VACUUM)
        except DataIncompleteError:
            return 1.0
        if not block.size:
            return 1.0
        return self.labels[a].qdim * block[0, 0, 0, 0]

    def with_blocks(self, f_updates: Optional[Dict[tuple, np.ndarray]] = None,
                    r_updates: Optional[Dict[tuple, np.ndarray]] = None) -> 'Category':
        """替换部分 F/R 块得到新范畴"""
        clone = copy.copy(self)
        clone.f_symbols = self.f_symbols.updated(f_updates or {})
        clone.r_symbols = self.r_symbols.updated(r_updates or {})
        clone.selector = dict(self.selector, modified=True)
        clone.a_symbols = None
        return compute_a_symbols(clone)

    def __repr__(self):
        return f"Category({self.name}, labels={[l.name for l in self.labels]})"


def _label_aliases(key: str) -> List[str]:
    aliases = []
    lowered = key.lower()
    if lowered in ('1', 'i', 'vac', 'vacuum'):
        aliases.extend(['I', '1', '0'])
    try:
        value = float(key)
        doubled = round(2 * value)
        if abs(2 * value - doubled) < 1e-9 and doubled >= 0:
            aliases.append(str(doubled // 2) if doubled % 2 == 0 else f"{doubled}/2")
    except ValueError:
        pass
    aliases.append(lowered)
    return aliases


# ---- A 符号 ----

def compute_a_symbols(cat: Category) -> Category:
    """
    [A^{ab}_c]_{μν} = √(d_a d_b/d_c)·conj(ϰ_a)·conj([F^{āab}_b]_{1,(c,μ,ν)})
    惰性数据的范畴按需计算，其余范畴立即计算全部块
    """

    def generate(a: int, b: int, c: int) -> Optional[np.ndarray]:
        if cat.N(a, b, c) == 0:
            return None
        abar = cat.dual(a)
        sub = cat.F_sub(abar, a, b, b, VACUUM, c)
        label = cat.labels[a]
        scale = np.sqrt(label.qdim * cat.qdim(b) / cat.qdim(c))
        return scale * np.conj(label.fs_indicator) * np.conj(sub[0, 0])

    result = copy.copy(cat)
    result.a_symbols = ASymbolStore(generator=generate)
    if not cat.f_symbols.lazy:
        for a, b in itertools.product(range(cat.n), repeat=2):
            for c in cat.channels(a, b):
                result.A(a, b, c)
    return result


# ---- 融合矩阵与量子维数 ----

def fusion_matrix(cat: Category, a: int) -> np.ndarray:
    """[N_a]_{bc} = N_{ab}^c"""
    return cat.fusion[a].astype(float)


def perron_dimension(cat: Category, a: int) -> float:
    eigenvalues = np.linalg.eigvals(fusion_matrix(cat, a))
    return float(np.max(np.abs(eigenvalues)))


def twist_from_r(cat: Category, a: int) -> complex:
    """θ_a = Σ_{c,μ} (d_c/d_a)·[R^{aa}_c]_{μμ}"""
    total = 0j
    for c in cat.channels(a, a):
        total += cat.qdim(c) / cat.qdim(a) * np.trace(cat.R(a, a, c))
    return complex(total)


# ---- 一致性检查 ----

@dataclass
class ConsistencyReport:
    """一致性检查结果"""
    check: str
    passed: bool
    max_residual: float
    checked: int
    first_violation: Optional[str] = None
    sampled: bool = False
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


class _ResidualTracker:

    def __init__(self, check: str, tol: float):
        self.check = check
        self.tol = tol
        self.max_residual = 0.0
        self.checked = 0
        self.first_violation: Optional[str] = None
        self.notes: List[str] = []

    def record(self, residual: float, where: str):
        self.checked += 1
        self.max_residual = max(self.max_residual, float(residual))
        if residual > self.tol and self.first_violation is None:
            self.first_violation = where

    def missing(self, error: DataIncompleteError, where: str):
        self.checked += 1
        self.max_residual = float('inf')
        if self.first_violation is None:
            self.first_violation = f"{where}: {error}"

    def report(self, sampled: bool) -> ConsistencyReport:
        return ConsistencyReport(
            check=self.check,
            passed=self.first_violation is None,
            max_residual=self.max_residual,
            checked=self.checked,
            first_violation=self.first_violation,
            sampled=sampled,
            notes=self.notes,
        )


def _label_tuples(cat: Category, arity: int, limit: int, seed: int) -> Tuple[Iterable[tuple], bool]:
    """全部标签元组；超过上限时改为固定种子的随机抽样"""
    if cat.n ** arity <= limit:
        return itertools.product(range(cat.n), repeat=arity), False
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, cat.n, size=(limit, arity))
    return [tuple(int(x) for x in row) for row in picks], True


def _pick_totals(cat: Category, charges: tuple, sampled: bool, rng: np.random.Generator) -> List[int]:
    totals = cat.fusion_outcomes(*charges)
    if sampled and totals:
        return [totals[int(rng.integers(0, len(totals)))]]
    return totals


def _index(keys: List[tuple]) -> Dict[tuple, int]:
    return {key: i for i, key in enumerate(keys)}


def _place(target: np.ndarray, row_map: Dict[tuple, int], col_map: Dict[tuple, int],
           block: np.ndarray, row_keys: List[tuple], col_keys: List[tuple]):
    rows = [row_map[k] for k in row_keys]
    cols = [col_map[k] for k in col_keys]
    target[np.ix_(rows, cols)] = block


def _pentagon_residual(cat: Category, a: int, b: int, c: int, d: int, e: int) -> Optional[float]:
    """
    比较两条路径 ((ab)c)d → a(b(cd)) 的变换矩阵
    矩阵约定：行为旧基、列为新基，路径按矩阵乘积顺序复合
    """
    N = cat.N
    L = [(f, al, g, be, ga)
         for f in cat.channels(a, b) for al in range(N(a, b, f))
         for g in cat.channels(f, c) if N(g, d, e)
         for be in range(N(f, c, g)) for ga in range(N(g, d, e))]
    if not L:
        return None
    M1 = [(f, al, l, de, nu)
          for f in cat.channels(a, b) for al in range(N(a, b, f))
          for l in cat.channels(c, d) if N(f, l, e)
          for de in range(N(c, d, l)) for nu in range(N(f, l, e))]
    R = [(l, de, k, la, mu)
         for l in cat.channels(c, d) for de in range(N(c, d, l))
         for k in cat.channels(b, l) if N(a, k, e)
         for la in range(N(b, l, k)) for mu in range(N(a, k, e))]
    M2 = [(h, si, g, ps, ga)
          for h in cat.channels(b, c) for si in range(N(b, c, h))
          for g in cat.channels(a, h) if N(g, d, e)
          for ps in range(N(a, h, g)) for ga in range(N(g, d, e))]
    M3 = [(h, si, k, rh, mu)
          for h in cat.channels(b, c) for si in range(N(b, c, h))
          for k in cat.channels(h, d) if N(a, k, e)
          for rh in range(N(h, d, k)) for mu in range(N(a, k, e))]
    dim = len(L)
    if not (len(M1) == len(R) == len(M2) == len(M3) == dim):
        return float('inf')
    iL, iM1, iR, iM2, iM3 = map(_index, (L, M1, R, M2, M3))
    g1, g2, g3, g4, g5 = (np.zeros((dim, dim), dtype=complex) for _ in range(5))

    for f in cat.channels(a, b):
        block = cat.F(f, c, d, e)
        rows, cols = cat.f_basis(f, c, d, e)
        for al in range(N(a, b, f)):
            _place(g1, iL, iM1, block,
                   [(f, al, g, be, ga) for g, be, ga in rows],
                   [(f, al, l, de, nu) for l, de, nu in cols])
    for l in cat.channels(c, d):
        block = cat.F(a, b, l, e)
        rows, cols = cat.f_basis(a, b, l, e)
        for de in range(N(c, d, l)):
            _place(g2, iM1, iR, block,
                   [(f, al, l, de, nu) for f, al, nu in rows],
                   [(l, de, k, la, mu) for k, la, mu in cols])
    for g in cat.fusion_outcomes(a, b, c):
        if not N(g, d, e):
            continue
        block = cat.F(a, b, c, g)
        rows, cols = cat.f_basis(a, b, c, g)
        for ga in range(N(g, d, e)):
            _place(g3, iL, iM2, block,
                   [(f, al, g, be, ga) for f, al, be in rows],
                   [(h, si, g, ps, ga) for h, si, ps in cols])
    for h in cat.channels(b, c):
        block = cat.F(a, h, d, e)
        rows, cols = cat.f_basis(a, h, d, e)
        for si in range(N(b, c, h)):
            _place(g4, iM2, iM3, block,
                   [(h, si, g, ps, ga) for g, ps, ga in rows],
                   [(h, si, k, rh, mu) for k, rh, mu in cols])
    for k in cat.fusion_outcomes(b, c, d):
        if not N(a, k, e):
            continue
        block = cat.F(b, c, d, k)
        rows, cols = cat.f_basis(b, c, d, k)
        for mu in range(N(a, k, e)):
            _place(g5, iM3, iR, block,
                   [(h, si, k, rh, mu) for h, si, rh in rows],
                   [(l, de, k, la, mu) for l, de, la in cols])

    return float(np.max(np.abs(g1 @ g2 - g3 @ g4 @ g5)))


def _hexagon_residual(cat: Category, a: int, b: int, c: int, d: int,
                      braid: Callable[[int, int, int], np.ndarray]) -> Optional[float]:
    """
    (ca)b → a(bc) 的两条路径：R·F·R 与 F·R·F
    """
    N = cat.N
    P = [(e, al, be) for e in cat.channels(c, a) for al in range(N(c, a, e))
         for be in range(N(e, b, d))]
    if not P:
        return None
    Q1 = [(e, la, be) for e in cat.channels(a, c) for la in range(N(a, c, e))
          for be in range(N(e, b, d))]
    Q2 = [(g, ga, nu) for g in cat.channels(c, b) for ga in range(N(c, b, g))
          for nu in range(N(a, g, d))]
    Q3 = [(g, mu, nu) for g in cat.channels(b, c) for mu in range(N(b, c, g))
          for nu in range(N(a, g, d))]
    S1 = [(f, de, si) for f in cat.channels(a, b) for de in range(N(a, b, f))
          for si in range(N(c, f, d))]
    S2 = [(f, de, ps) for f in cat.channels(a, b) for de in range(N(a, b, f))
          for ps in range(N(f, c, d))]
    dim = len(P)
    if not all(len(x) == dim for x in (Q1, Q2, Q3, S1, S2)):
        return float('inf')
    iP, iQ1, iQ2, iQ3, iS1, iS2 = map(_index, (P, Q1, Q2, Q3, S1, S2))
    r1, f_mid, r2, f1, r_mid, f2 = (np.zeros((dim, dim), dtype=complex) for _ in range(6))

    for e in cat.channels(c, a):
        block = braid(c, a, e)
        for be in range(N(e, b, d)):
            _place(r1, iP, iQ1, block,
                   [(e, al, be) for al in range(N(c, a, e))],
                   [(e, la, be) for la in range(N(a, c, e))])
    rows, cols = cat.f_basis(a, c, b, d)
    _place(f_mid, iQ1, iQ2, cat.F(a, c, b, d), rows, cols)
    for g in cat.channels(c, b):
        block = braid(c, b, g)
        for nu in range(N(a, g, d)):
            _place(r2, iQ2, iQ3, block,
                   [(g, ga, nu) for ga in range(N(c, b, g))],
                   [(g, mu, nu) for mu in range(N(b, c, g))])

    rows, cols = cat.f_basis(c, a, b, d)
    _place(f1, iP, iS1, cat.F(c, a, b, d), rows, cols)
    for f in cat.channels(a, b):
        if not N(c, f, d):
            continue
        block = braid(c, f, d)
        for de in range(N(a, b, f)):
            _place(r_mid, iS1, iS2, block,
                   [(f, de, si) for si in range(N(c, f, d))],
                   [(f, de, ps) for ps in range(N(f, c, d))])
    rows, cols = cat.f_basis(a, b, c, d)
    _place(f2, iS2, iQ3, cat.F(a, b, c, d), rows, cols)

    return float(np.max(np.abs(r1 @ f_mid @ r2 - f1 @ r_mid @ f2)))


class CategoryValidator:
    """范畴一致性检查"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()

    def _limit(self, sample_limit: Optional[int]) -> int:
        return self.config.VERIFY_SAMPLE_LIMIT if sample_limit is None else sample_limit

    @staticmethod
    def _generated(cat: Category) -> int:
        stores = [cat.f_symbols, cat.r_symbols, cat.a_symbols]
        return sum(store.generated for store in stores if store is not None)

    def _over_budget(self, cat: Category, start: int, sampled: bool,
                     tracker: '_ResidualTracker') -> bool:
        """抽样检查在按需生成的块数超过预算后停止"""
        if not sampled or self._generated(cat) - start < self.config.VERIFY_BLOCK_BUDGET:
            return False
        tracker.notes.append(f"stopped after {tracker.checked} checks: "
                             f"block budget {self.config.VERIFY_BLOCK_BUDGET} reached")
        return True

    def verify_pentagon(self, cat: Category, sample_limit: Optional[int] = None) -> ConsistencyReport:
        tracker = _ResidualTracker('pentagon', self.config.CONSISTENCY_TOL)
        tuples, sampled = _label_tuples(cat, 4, self._limit(sample_limit), self.config.VERIFY_SEED)
        rng = np.random.default_rng(self.config.VERIFY_SEED + 1)
        start = self._generated(cat)
        for a, b, c, d in tuples:
            if self._over_budget(cat, start, sampled, tracker):
                break
            for e in _pick_totals(cat, (a, b, c, d), sampled, rng):
                where = f"({cat._names_of(a, b, c, d)};{cat.label_name(e)})"
                try:
                    residual = _pentagon_residual(cat, a, b, c, d, e)
                except DataIncompleteError as error:
                    tracker.missing(error, where)
                    continue
                if residual is not None:
                    tracker.record(residual, where)
        if sampled:
            logging.warning(f"Pentagon check on {cat.name} used a sample of {tracker.checked} tuples")
        return tracker.report(sampled)

    def verify_hexagon(self, cat: Category, sample_limit: Optional[int] = None) -> ConsistencyReport:
        tracker = _ResidualTracker('hexagon', self.config.CONSISTENCY_TOL)
        tuples, sampled = _label_tuples(cat, 3, self._limit(sample_limit), self.config.VERIFY_SEED)
        rng = np.random.default_rng(self.config.VERIFY_SEED + 2)
        start = self._generated(cat)

        def inverse(x: int, y: int, z: int) -> np.ndarray:
            return cat.R(y, x, z).conj().T

        for a, b, c in tuples:
            if self._over_budget(cat, start, sampled, tracker):
                break
            for d in _pick_totals(cat, (a, b, c), sampled, rng):
                for variant, braid in (('R', cat.R), ('R^-1', inverse)):
                    where = f"{variant} ({cat._names_of(a, b, c)};{cat.label_name(d)})"
                    try:
                        residual = _hexagon_residual(cat, a, b, c, d, braid)
                    except DataIncompleteError as error:
                        tracker.missing(error, where)
                        continue
                    if residual is not None:
                        tracker.record(residual, where)
        if sampled:
            logging.warning(f"Hexagon check on {cat.name} used a sample of {tracker.checked} tuples")
        return tracker.report(sampled)

    def verify_f_unitarity(self, cat: Category, sample_limit: Optional[int] = None) -> ConsistencyReport:
        tracker = _ResidualTracker('f_unitarity', 1e-10)
        tuples, sampled = _label_tuples(cat, 3, self._limit(sample_limit), self.config.VERIFY_SEED)
        rng = np.random.default_rng(self.config.VERIFY_SEED + 3)
        start = self._generated(cat)
        for a, b, c in tuples:
            if self._over_budget(cat, start, sampled, tracker):
                break
            for d in _pick_totals(cat, (a, b, c), sampled, rng):
                where = f"F[{cat._names_of(a, b, c)};{cat.label_name(d)}]"
                try:
                    tracker.record(unitarity_residual(cat.F(a, b, c, d)), where)
                except DataIncompleteError as error:
                    tracker.missing(error, where)
        return tracker.report(sampled)

    def verify_r_unitarity(self, cat: Category, sample_limit: Optional[int] = None) -> ConsistencyReport:
        tracker = _ResidualTracker('r_unitarity', 1e-10)
        pairs, sampled = _label_tuples(cat, 2, self._limit(sample_limit), self.config.VERIFY_SEED)
        rng = np.random.default_rng(self.config.VERIFY_SEED + 4)
        for a, b in pairs:
            for c in _pick_totals(cat, (a, b), sampled, rng):
                where = f"R[{cat._names_of(a, b)};{cat.label_name(c)}]"
                try:
                    tracker.record(unitarity_residual(cat.R(a, b, c)), where)
                except DataIncompleteError as error:
                    tracker.missing(error, where)
        return tracker.report(sampled)

    def verify_a_unitarity(self, cat: Category, sample_limit: Optional[int] = None) -> ConsistencyReport:
        tracker = _ResidualTracker('a_unitarity', 1e-10)
        if cat.a_symbols is None:
            try:
                cat = compute_a_symbols(cat)
            except DataIncompleteError as error:
                tracker.missing(error, 'A symbols')
                return tracker.report(False)
        pairs, sampled = _label_tuples(cat, 2, self._limit(sample_limit), self.config.VERIFY_SEED)
        rng = np.random.default_rng(self.config.VERIFY_SEED + 5)
        start = self._generated(cat)
        for a, b in pairs:
            if self._over_budget(cat, start, sampled, tracker):
                break
            for c in _pick_totals(cat, (a, b), sampled, rng):
                where = f"A[{cat._names_of(a, b)};{cat.label_name(c)}]"
                try:
                    tracker.record(unitarity_residual(cat.A(a, b, c)), where)
                except DataIncompleteError as error:
                    tracker.missing(error, where)
        return tracker.report(sampled)

    def verify_fusion_axioms(self, cat: Category) -> ConsistencyReport:
        """交换性、真空与对偶公理"""
        tracker = _ResidualTracker('fusion_axioms', 0.5)
        N = cat.fusion
        tracker.record(float(np.max(np.abs(N - N.transpose(1, 0, 2)))), 'commutativity')
        eye = np.eye(cat.n, dtype=int)
        tracker.record(float(np.max(np.abs(N[:, VACUUM, :] - eye))), 'vacuum')
        duals = np.zeros((cat.n, cat.n), dtype=int)
        for a in range(cat.n):
            duals[a, cat.dual(a)] = 1
        tracker.record(float(np.max(np.abs(N[:, :, VACUUM] - duals))), 'conjugate')
        bad = [label.name for label in cat.labels if cat.dual(label.dual_id) != label.id]
        tracker.record(float(len(bad)), f"dual of dual: {bad}")
        return tracker.report(False)

    def verify_dimension_identity(self, cat: Category) -> ConsistencyReport:
        """d_a d_b = Σ_c N_ab^c d_c，且 d_a 为融合矩阵的最大本征值"""
        tracker = _ResidualTracker('dimension_identity', 1e-10)
        d = np.array([label.qdim for label in cat.labels])
        lhs = np.einsum('abc,c->ab', cat.fusion, d)
        residual = np.abs(lhs - np.outer(d, d))
        worst = np.unravel_index(int(np.argmax(residual)), residual.shape)
        tracker.record(float(residual[worst]), f"({cat._names_of(*worst)})")
        for a in range(cat.n):
            tracker.record(abs(perron_dimension(cat, a) - d[a]), f"perron {cat.label_name(a)}")
            tracker.record(abs(d[a] - d[cat.dual(a)]), f"d_a = d_abar {cat.label_name(a)}")
        return tracker.report(False)

    def verify_twists(self, cat: Category) -> ConsistencyReport:
        tracker = _ResidualTracker('twists', 1e-10)
        for a in range(cat.n):
            name = cat.label_name(a)
            theta = cat.twist(a)
            tracker.record(abs(abs(theta) - 1.0), f"|theta_{name}|")
            tracker.record(abs(theta - cat.twist(cat.dual(a))), f"theta_{name} = theta_dual")
            try:
                tracker.record(abs(twist_from_r(cat, a) - theta), f"theta_{name} from R")
            except DataIncompleteError as error:
                tracker.missing(error, f"theta_{name}")
            tracker.record(abs(abs(cat.labels[a].fs_indicator) - 1.0), f"|fs_{name}|")
        return tracker.report(False)

    def run_all(self, cat: Category, sample_limit: Optional[int] = None) -> List[ConsistencyReport]:
        reports = [
            self.verify_fusion_axioms(cat),
            self.verify_dimension_identity(cat),
            self.verify_f_unitarity(cat, sample_limit),
            self.verify_r_unitarity(cat, sample_limit),
            self.verify_a_unitarity(cat, sample_limit),
            self.verify_twists(cat),
            self.verify_pentagon(cat, sample_limit),
            self.verify_hexagon(cat, sample_limit),
        ]
        failed = [r.check for r in reports if not r.passed]
        if failed:
            logging.info(f"Category {cat.name}: failed checks {failed}")
        else:
            logging.info(f"Category {cat.name}: all consistency checks passed")
        return reports


def verify_pentagon(cat: Category, config: Optional[Config] = None) -> ConsistencyReport:
    return CategoryValidator(config).verify_pentagon(cat)


def verify_hexagon(cat: Category, config: Optional[Config] = None) -> ConsistencyReport:
    return CategoryValidator(config).verify_hexagon(cat)


def verify_f_unitarity(cat: Category, config: Optional[Config] = None) -> ConsistencyReport:
    return CategoryValidator(config).verify_f_unitarity(cat)


def verify_dimension_identity(cat: Category, config: Optional[Config] = None) -> ConsistencyReport:
    return CategoryValidator(config).verify_dimension_identity(cat)


def verify_twists(cat: Category, config: Optional[Config] = None) -> ConsistencyReport:
    return CategoryValidator(config).verify_twists(cat)


# ---- JSON 序列化 ----

def _pack_matrix(m: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(m).ravel()]


def _unpack_matrix(entries: list, rows: int, cols: int) -> np.ndarray:
    values = np.array([complex(re, im) for re, im in entries], dtype=complex)
    if values.size != rows * cols:
        raise InvalidInputError(f"Block has {values.size} entries, expected {rows}x{cols}")
    return values.reshape(rows, cols)


def category_to_json(cat: Category) -> dict:
    """导出全部可容许的 F/R 块"""
    labels = [{
        'name': label.name,
        'dual': label.dual_id,
        'qdim': label.qdim,
        'twist': [label.twist.real, label.twist.imag],
        'fs': [complex(label.fs_indicator).real, complex(label.fs_indicator).imag],
    } for label in cat.labels]
    fusion = [[int(a), int(b), int(c), int(cat.fusion[a, b, c])]
              for a, b, c in zip(*np.nonzero(cat.fusion))]
    f_blocks = []
    for a, b, c in itertools.product(range(cat.n), repeat=3):
        for d in cat.fusion_outcomes(a, b, c):
            block = cat.F(a, b, c, d)
            f_blocks.append({'abcd': [a, b, c, d], 'rows': block.shape[0],
                             'cols': block.shape[1], 'entries': _pack_matrix(block)})
    r_blocks = []
    for a, b in itertools.product(range(cat.n), repeat=2):
        for c in cat.channels(a, b):
            block = cat.R(a, b, c)
            r_blocks.append({'abc': [a, b, c], 'rows': block.shape[0],
                             'cols': block.shape[1], 'entries': _pack_matrix(block)})
    return {'name': cat.name, 'labels': labels, 'fusion': fusion, 'F': f_blocks, 'R': r_blocks}


def category_from_json(data: dict) -> Category:
    try:
        labels = [Label(id=i, name=str(item['name']), dual_id=int(item['dual']),
                        qdim=float(item['qdim']),
                        twist=complex(*item['twist']),
                        fs_indicator=complex(*item['fs']) if 'fs' in item else None)
                  for i, item in enumerate(data['labels'])]
        n = len(labels)
        fusion = np.zeros((n, n, n), dtype=int)
        for a, b, c, mult in data['fusion']:
            fusion[a, b, c] = mult
        f_blocks = {tuple(item['abcd']): _unpack_matrix(item['entries'], item['rows'], item['cols'])
                    for item in data.get('F', [])}
        r_blocks = {tuple(item['abc']): _unpack_matrix(item['entries'], item['rows'], item['cols'])
                    for item in data.get('R', [])}
        name = str(data.get('name', 'custom'))
    except (KeyError, TypeError, IndexError) as e:
        raise InvalidInputError(f"Malformed category JSON: {e}") from e
    digest = hashlib.sha256(json.dumps(data, sort_keys=True).encode('utf-8')).hexdigest()[:16]
    cat = Category(name, labels, fusion, FSymbolStore(f_blocks), RSymbolStore(r_blocks),
                   selector={'json': digest})
    try:
        return compute_a_symbols(cat)
    except DataIncompleteError as e:
        # 缺块的范畴仍然可以加载，交给校验报告
        logging.warning(f"Category {name} is incomplete: {e}")
        return cat


def save_category(cat: Category, path: str):
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(category_to_json(cat), fh, indent=1)


def load_category(path: str) -> Category:
    with open(path, 'r', encoding='utf-8') as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise InvalidInputError(f"Invalid JSON in {path}: {e}") from e
    return category_from_json(data)
