"""
ALN 零点集合
Δ 矩阵、可分点、参数网格扫描与零点提取
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from config import Config
from modules.builtin_categories import su2_k
from modules.category_core import Category
from modules.dimer_state import new_dimer
from modules.errors import UnsupportedInputError
from modules.linalg import numerical_rank
from modules.partial_transpose import aln, werner_ln

ALN_COLUMN = 'aln'
WERNER_COLUMN = 'werner'


def _require_multiplicity_free(cat: Category, a: int, b: int):
    abar = cat.dual(a)
    if (any(cat.N(a, b, f) > 1 for f in cat.channels(a, b))
            or any(cat.N(abar, b, c) > 1 for c in cat.channels(abar, b))):
        raise UnsupportedInputError(
            f"{cat.label_name(a)} x {cat.label_name(b)} has fusion multiplicity")


@dataclass
class DeltaMatrix:
    """m = Δ·p，m_c 已乘以 θ_a*，因此 Σ_c m_c = 1"""
    cat: Category
    a: int
    b: int
    channels: List[int]
    rows: List[int]
    delta: np.ndarray
    im_rank: int
    r0: int

    def m(self, p_vec: Sequence[float]) -> np.ndarray:
        return self.delta @ np.asarray(p_vec, dtype=float)

    def aln(self, p_vec: Sequence[float]) -> float:
        return float(np.log(np.sum(np.abs(self.m(p_vec)))))


def delta_matrix(cat: Category, a, b, config: Optional[Config] = None) -> DeltaMatrix:
    """Δ_{cf} = θ_a*·(d_c/d_b)·conj(R^{fā}_b)·conj([F^{āfā}_c]_{b,b})·R^{āb}_c"""
    config = config or Config()
    a, b = cat.label_id(a), cat.label_id(b)
    _require_multiplicity_free(cat, a, b)
    abar = cat.dual(a)
    channels = cat.channels(a, b)
    rows = cat.channels(abar, b)
    theta_conj = np.conj(cat.twist(a))
    delta = np.zeros((len(rows), len(channels)), dtype=complex)
    for i, c in enumerate(rows):
        r_c = cat.R(abar, b, c)[0, 0]
        for j, f in enumerate(channels):
            f_sym = cat.F_sub(abar, f, abar, c, b, b)[0, 0, 0, 0]
            r_f = cat.R(f, abar, b)[0, 0]
            delta[i, j] = theta_conj * cat.qdim(c) / cat.qdim(b) * np.conj(r_f) * np.conj(f_sym) * r_c
    im_rank = numerical_rank(delta.imag, config.RANK_TOL)
    r0 = len(channels) - 1 - im_rank
    if r0 < 0:
        logging.warning(f"rank(Im Delta) {im_rank} exceeds {len(channels) - 1} for "
                        f"{cat.label_name(a)} x {cat.label_name(b)}; F or R data is inconsistent")
        r0 = 0
    return DeltaMatrix(cat, a, b, channels, rows, delta, im_rank, r0)


def separable_point(cat: Category, a, b) -> Dict[int, float]:
    """p_f = N_ab^f·d_f/(d_a d_b)"""
    a, b = cat.label_id(a), cat.label_id(b)
    scale = cat.qdim(a) * cat.qdim(b)
    return {f: cat.N(a, b, f) * cat.qdim(f) / scale for f in cat.channels(a, b)}


def simplex_grid(n: int, resolution: int) -> np.ndarray:
    """分母为 resolution 的重心坐标网格，按字典序排列"""
    if n == 2:
        i = np.arange(resolution + 1)
        return np.stack([i, resolution - i], axis=1) / resolution
    if n == 3:
        points = [(i, j, resolution - i - j)
                  for i in range(resolution + 1) for j in range(resolution + 1 - i)]
        return np.array(points, dtype=float) / resolution
    raise UnsupportedInputError(f"Sweeps support 2 or 3 channels, got {n}")


@dataclass
class SweepGrid:
    cat: Category
    a: int
    b: int
    channels: List[int]
    resolution: int
    records: pd.DataFrame = field(repr=False)

    @property
    def channel_columns(self) -> List[str]:
        return [self.cat.label_name(f) for f in self.channels]

    def points(self) -> np.ndarray:
        return self.records[self.channel_columns].to_numpy()

    def to_csv(self, path: Optional[str] = None, config: Optional[Config] = None) -> str:
        config = config or Config()
        return self.records.to_csv(path, index=False, float_format=config.FLOAT_FORMAT,
                                   lineterminator='\n')

    def to_dict(self) -> dict:
        return {
            'a': self.cat.label_name(self.a),
            'b': self.cat.label_name(self.b),
            'channels': self.channel_columns,
            'resolution': self.resolution,
            'records': self.records.to_dict(orient='records'),
        }


class ParameterSweeper:
    """在通道概率单纯形上扫描 ALN"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()

    def _evaluate(self, cat: Category, a: int, b: int, channels: List[int], point: np.ndarray) -> float:
        state = new_dimer(cat, a, b, {f: float(p) for f, p in zip(channels, point) if p > 0},
                          self.config)
        return aln(state, config=self.config)

    def sweep(self, cat: Category, a, b, resolution: int, werner: bool = False) -> SweepGrid:
        a, b = cat.label_id(a), cat.label_id(b)
        _require_multiplicity_free(cat, a, b)
        if resolution < 1:
            raise UnsupportedInputError(f"Resolution must be positive, got {resolution}")
        channels = cat.channels(a, b)
        grid = simplex_grid(len(channels), resolution)

        n_jobs = max(1, self.config.ANYON_NEG_THREADS)
        if n_jobs > 1:
            values = Parallel(n_jobs=n_jobs, prefer='threads')(
                delayed(self._evaluate)(cat, a, b, channels, point) for point in grid)
        else:
            values = [self._evaluate(cat, a, b, channels, point) for point in grid]

        records = pd.DataFrame(grid, columns=[cat.label_name(f) for f in channels])
        records[ALN_COLUMN] = values
        if werner:
            records[WERNER_COLUMN] = [werner_ln(p0) for p0 in grid[:, 0]]
        logging.info(f"Swept {cat.name} {cat.label_name(a)}x{cat.label_name(b)} "
                     f"on {len(grid)} points")
        return SweepGrid(cat, a, b, channels, resolution, records)

    def flatness_profile(self, k_values: Sequence[int], window: Tuple[float, float] = (0.2, 0.3),
                         points: int = 101) -> Dict[int, float]:
        """su(2)_k 自旋 ½ dimer 在 p0 窗口内的最大 ALN"""
        profile = {}
        for k in k_values:
            cat = su2_k(k, self.config)
            p0 = np.linspace(window[0], window[1], points)
            channels = cat.channels(1, 1)
            profile[k] = max(self._evaluate(cat, 1, 1, channels, np.array([x, 1 - x])) for x in p0)
        return profile


def sweep(cat: Category, a, b, resolution: int, config: Optional[Config] = None,
          werner: bool = False) -> SweepGrid:
    return ParameterSweeper(config).sweep(cat, a, b, resolution, werner)


def zero_set(grid: SweepGrid, tol: float = 1e-8, config: Optional[Config] = None) -> List[np.ndarray]:
    """
    ALN ≤ tol 的网格点，外加距可分点最近的网格点

    可分点一般不落在网格上。aln(p) ≤ ‖Δ‖₁·‖p − p*‖₁，
    因此最近点满足该上界时视为零点。
    """
    values = grid.records[ALN_COLUMN].to_numpy()
    points = grid.points()
    mask = values <= tol

    star = separable_point(grid.cat, grid.a, grid.b)
    target = np.array([star[f] for f in grid.channels])
    dist = np.abs(points - target).sum(axis=1)
    lipschitz = np.abs(delta_matrix(grid.cat, grid.a, grid.b, config).delta).sum(axis=0).max()
    nearest = dist <= dist.min() + 1e-12
    snapped = nearest & ~mask & (values <= tol + lipschitz * dist)
    if snapped.any():
        logging.debug(f"Snapped {int(snapped.sum())} grid point(s) to the separable point "
                      f"at distance {dist.min():.3g}")
    return list(points[mask | snapped])


def flatness_profile(k_values: Sequence[int], window: Tuple[float, float] = (0.2, 0.3),
                     config: Optional[Config] = None) -> Dict[int, float]:
    return ParameterSweeper(config).flatness_profile(k_values, window)
