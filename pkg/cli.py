#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令行入口
退出码：0 成功，1 输入违反物理约束，2 用法或读写错误
"""

import json
import logging
import sys
from typing import Dict, Optional, Tuple

import click
import numpy as np

from config import Config
from modules.builtin_categories import BUILTIN_NAMES, get_builtin
from modules.category_core import Category, CategoryValidator, load_category
from modules.dimer_state import (
    DimerState, ace, aee, dimer_from_dict, mutual_information, new_dimer
)
from modules.errors import DataIncompleteError, InvalidInputError, UnsupportedInputError
from modules.fermionic_pt import (
    clifford_residual, fermionic_ln, majorana, majorana_dimer_state, vortex_exchange
)
from modules.partial_transpose import partial_transpose
from modules.zero_locus import (
    ParameterSweeper, delta_matrix, separable_point, zero_set
)

EXIT_DOMAIN = 1
EXIT_USAGE = 2

DOMAIN_ERRORS = (InvalidInputError, DataIncompleteError, UnsupportedInputError)


def _fail(message: str, code: int):
    click.echo(f"Error: {message}", err=True)
    raise click.exceptions.Exit(code)


def _fmt(x: float, config: Config) -> str:
    return f"{x:.{config.CSV_SIGNIFICANT_DIGITS}g}"


def category_options(func):
    """范畴选择参数"""
    options = [
        click.option('--builtin', type=click.Choice(BUILTIN_NAMES), help='内置范畴名称'),
        click.option('--nu', type=int, default=None, help='Ising 的 ν（奇数）'),
        click.option('--k', 'level', type=int, default=None, help='su(2)_k 的级数 k'),
        click.option('--json', 'json_path', type=str, default=None, help='范畴 JSON 文件'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def resolve_category(builtin: Optional[str], nu: Optional[int], level: Optional[int],
                     json_path: Optional[str], config: Config) -> Category:
    """解析范畴选择；失败时以退出码 2 结束"""
    if bool(builtin) == bool(json_path):
        _fail("exactly one of --builtin and --json is required", EXIT_USAGE)
    try:
        if json_path:
            return load_category(json_path)
        return get_builtin(builtin, nu=nu, k=level, config=config)
    except OSError as e:
        _fail(f"cannot read {json_path}: {e}", EXIT_USAGE)
    except InvalidInputError as e:
        _fail(str(e), EXIT_USAGE)


def parse_weights(specs: Tuple[str, ...]) -> Dict[str, float]:
    """'I=0.5,psi=0.5' 形式的通道权重，可重复给出"""
    weights: Dict[str, float] = {}
    for spec in specs:
        for item in spec.split(','):
            item = item.strip()
            if not item:
                continue
            if '=' not in item:
                raise click.BadParameter(f"expected label=value, got '{item}'", param_hint='--p')
            label, value = item.split('=', 1)
            try:
                weights[label.strip()] = weights.get(label.strip(), 0.0) + float(value)
            except ValueError:
                raise click.BadParameter(f"'{value}' is not a number", param_hint='--p')
    return weights


def parse_octet(spec: str) -> np.ndarray:
    """'p=..,qr=..,qi=..' → [[p, qr+i qi],[qr−i qi, 1−p]]"""
    values = {'p': None, 'qr': 0.0, 'qi': 0.0}
    for item in spec.split(','):
        if '=' not in item:
            raise click.BadParameter(f"expected key=value, got '{item}'", param_hint='--p8')
        key, value = (x.strip() for x in item.split('=', 1))
        if key not in values:
            raise click.BadParameter(f"unknown key '{key}'", param_hint='--p8')
        try:
            values[key] = float(value)
        except ValueError:
            raise click.BadParameter(f"'{value}' is not a number", param_hint='--p8')
    if values['p'] is None:
        raise click.BadParameter("p is required", param_hint='--p8')
    p, q = values['p'], complex(values['qr'], values['qi'])
    return np.array([[p, q], [np.conj(q), 1 - p]], dtype=complex)


def build_dimer(cat: Category, a: Optional[str], b: Optional[str], p_specs: Tuple[str, ...],
                p8: Optional[str], dimer_path: Optional[str], config: Config) -> DimerState:
    if dimer_path:
        try:
            with open(dimer_path, 'r', encoding='utf-8') as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            _fail(f"cannot read {dimer_path}: {e}", EXIT_USAGE)
        return dimer_from_dict(cat, data, config)
    if a is None or b is None:
        _fail("--a and --b are required", EXIT_USAGE)
    p_map: dict = dict(parse_weights(p_specs))
    if p8:
        p_map['8'] = parse_octet(p8)
    return new_dimer(cat, a, b, p_map, config)


@click.group()
@click.option('--log-level', default=None, help='日志级别')
@click.pass_context
def cli(ctx, log_level):
    """任意子部分转置与对数负性计算"""
    config = Config()
    logging.basicConfig(
        level=getattr(logging, (log_level or config.LOG_LEVEL).upper(), logging.INFO),
        format='%(asctime)s - %(levelname)s - %(message)s',
    )
    ctx.obj = config


@cli.command()
def categories():
    """列出内置范畴"""
    click.echo("ising      --nu ODD      Ising^(nu), labels I, sigma, psi")
    click.echo("fibonacci                Fibonacci, labels I, tau")
    click.echo("su2        --k LEVEL     su(2)_k, labels 0, 1/2, 1, ...")
    click.echo("su3_3                    su(3)_3 subtheory, labels 1, 8, 10, 10bar")


@cli.command()
@category_options
@click.option('--sample-limit', type=int, default=None, help='抽样检查的元组上限')
@click.pass_obj
def validate(config, builtin, nu, level, json_path, sample_limit):
    """检查五边形、六边形、幺正性、维数与拓扑自旋"""
    cat = resolve_category(builtin, nu, level, json_path, config)
    reports = CategoryValidator(config).run_all(cat, sample_limit)
    for report in reports:
        status = 'PASS' if report.passed else 'FAIL'
        line = f"{report.check:<20} {status}  max_residual={report.max_residual:.3e}  checked={report.checked}"
        if report.sampled:
            line += '  (sampled)'
        click.echo(line)
        if report.first_violation:
            click.echo(f"  first violation: {report.first_violation}")
        for note in report.notes:
            click.echo(f"  note: {note}")
    if not all(r.passed for r in reports):
        raise click.exceptions.Exit(EXIT_DOMAIN)


@cli.command()
@category_options
@click.option('--a', 'label_a', type=str, default=None, help='任意子 a')
@click.option('--b', 'label_b', type=str, default=None, help='任意子 b')
@click.option('--p', 'p_specs', multiple=True, help='通道权重，如 I=0.5,psi=0.5')
@click.option('--p8', type=str, default=None, help='su3_3 的 8 通道矩阵参数 p=..,qr=..,qi=..')
@click.option('--dimer', 'dimer_path', type=str, default=None, help='dimer JSON 文件')
@click.option('--side', type=click.Choice(['A', 'B']), default='A')
@click.option('--json-out', type=str, default=None, help='把结果写为 JSON')
@click.pass_obj
def aln(config, builtin, nu, level, json_path, label_a, label_b, p_specs, p8, dimer_path, side, json_out):
    """计算 dimer 的 ALN 与熵"""
    cat = resolve_category(builtin, nu, level, json_path, config)
    try:
        state = build_dimer(cat, label_a, label_b, p_specs, p8, dimer_path, config)
        result = partial_transpose(state, side)
        payload = result.to_dict(config)
        payload['aee'] = aee(state, config)
        payload['mutual_information'] = mutual_information(state, config)
        payload['ace'] = ace(state) if state.is_multiplicity_free() else None
    except DOMAIN_ERRORS as e:
        _fail(str(e), EXIT_DOMAIN)

    click.echo(f"ALN {_fmt(payload['aln'], config)}")
    for name, channel in payload['channels'].items():
        click.echo(f"  channel {name}: weight={_fmt(channel['weight'], config)} "
                   f"trace_norm={_fmt(channel['trace_norm'], config)}")
    click.echo(f"AEE {_fmt(payload['aee'], config)}")
    click.echo(f"mutual_information {_fmt(payload['mutual_information'], config)}")
    if payload['ace'] is not None:
        click.echo(f"ACE {_fmt(payload['ace'], config)}")
    if json_out:
        try:
            with open(json_out, 'w', encoding='utf-8') as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
        except OSError as e:
            _fail(f"cannot write {json_out}: {e}", EXIT_USAGE)


def _run_sweep(config: Config, cat: Category, label_a: str, label_b: str, resolution: int, werner: bool):
    try:
        return ParameterSweeper(config).sweep(cat, label_a, label_b, resolution, werner=werner)
    except DOMAIN_ERRORS as e:
        _fail(str(e), EXIT_DOMAIN)


def _write_text(text: str, out: Optional[str]):
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        with open(out, 'w', encoding='utf-8', newline='\n') as fh:
            fh.write(text)
    except OSError as e:
        _fail(f"cannot write {out}: {e}", EXIT_USAGE)


def _rounded(value, config: Config):
    if isinstance(value, float):
        return float(_fmt(value, config))
    if isinstance(value, dict):
        return {k: _rounded(v, config) for k, v in value.items()}
    if isinstance(value, list):
        return [_rounded(v, config) for v in value]
    return value


@cli.command()
@category_options
@click.option('--a', 'label_a', type=str, required=True)
@click.option('--b', 'label_b', type=str, required=True)
@click.option('--resolution', type=int, default=100, show_default=True)
@click.option('--werner', is_flag=True, help='附加 Werner 态参考列')
@click.option('--out', type=str, default=None, help='输出文件，缺省为标准输出')
@click.option('--format', 'fmt', type=click.Choice(['csv', 'json']), default='csv')
@click.pass_obj
def sweep(config, builtin, nu, level, json_path, label_a, label_b, resolution, werner, out, fmt):
    """在通道概率网格上扫描 ALN"""
    cat = resolve_category(builtin, nu, level, json_path, config)
    grid = _run_sweep(config, cat, label_a, label_b, resolution, werner)
    if fmt == 'csv':
        _write_text(grid.to_csv(config=config), out)
    else:
        _write_text(json.dumps(_rounded(grid.to_dict(), config), indent=1) + '\n', out)


@cli.command('zero-locus')
@category_options
@click.option('--a', 'label_a', type=str, required=True)
@click.option('--b', 'label_b', type=str, required=True)
@click.option('--resolution', type=int, default=60, show_default=True)
@click.option('--tol', type=float, default=None, help='零点判据')
@click.option('--out', type=str, default=None, help='零点 CSV 输出文件')
@click.pass_obj
def zero_locus(config, builtin, nu, level, json_path, label_a, label_b, resolution, tol, out):
    """Δ 矩阵的秩、r0 以及网格上的零点"""
    cat = resolve_category(builtin, nu, level, json_path, config)
    try:
        delta = delta_matrix(cat, label_a, label_b, config)
        star = separable_point(cat, label_a, label_b)
    except DOMAIN_ERRORS as e:
        _fail(str(e), EXIT_DOMAIN)
    grid = _run_sweep(config, cat, label_a, label_b, resolution, False)
    zeros = zero_set(grid, config.ZERO_TOL if tol is None else tol, config)

    names = grid.channel_columns
    click.echo(f"rank(Im Delta) {delta.im_rank}")
    click.echo(f"r0 {delta.r0}")
    click.echo("separable point " + ' '.join(
        f"{cat.label_name(f)}={_fmt(p, config)}" for f, p in star.items()))
    click.echo(f"zero points {len(zeros)} of {len(grid.records)}")
    lines = [','.join(names)] + [','.join(_fmt(x, config) for x in point) for point in zeros]
    if out:
        _write_text('\n'.join(lines) + '\n', out)
    else:
        for line in lines[1:]:
            click.echo(f"  {line}")


@cli.command('fermionic-demo')
@click.option('--modes', type=int, default=2, show_default=True)
@click.pass_obj
def fermionic_demo(config, modes):
    """Majorana dimer 的费米子 LN 与 Ising σσ 的 ALN 对照"""
    if not 2 <= modes <= config.FOCK_MAX_MODES:
        _fail(f"--modes must be between 2 and {config.FOCK_MAX_MODES}", EXIT_USAGE)
    ln_fermion = fermionic_ln(majorana_dimer_state(modes, 2, 3), {1}, config)
    state = new_dimer(get_builtin('ising', nu=1), 'sigma', 'sigma', {'I': 1.0}, config)
    ln_anyon = partial_transpose(state).total_norm()
    ln_anyon = float(np.log(ln_anyon))
    difference = abs(ln_fermion - ln_anyon)

    clifford = clifford_residual(modes)
    tau = vortex_exchange(modes, 2, 3).matrix
    g2, g3 = majorana(modes, 2).matrix, majorana(modes, 3).matrix
    exchange = max(float(np.max(np.abs(tau @ g2 @ tau.conj().T - g3))),
                   float(np.max(np.abs(tau @ g3 @ tau.conj().T + g2))))

    click.echo(f"fermionic LN {_fmt(ln_fermion, config)}")
    click.echo(f"Ising ALN {_fmt(ln_anyon, config)}")
    click.echo(f"difference {difference:.3e}")
    click.echo(f"clifford residual {clifford:.3e}")
    click.echo(f"exchange residual {exchange:.3e}")
    if difference >= 1e-10 or clifford > 1e-12 or exchange > 1e-12:
        raise click.exceptions.Exit(EXIT_DOMAIN)


def main():
    cli(obj=None)


if __name__ == '__main__':
    sys.exit(main())
