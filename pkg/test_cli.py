#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令行测试
"""

import sys
import os
import json

import numpy as np
from click.testing import CliRunner

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli import cli
from modules.builtin_categories import fibonacci
from modules.category_core import category_to_json
from testing_utils import run_suite


def _invoke(*args):
    return CliRunner().invoke(cli, list(args), obj=None)


def _value(output, prefix):
    for line in output.splitlines():
        if line.startswith(prefix + ' '):
            return line[len(prefix) + 1:].strip()
    raise AssertionError(f"'{prefix}' not found in output:\n{output}")


def test_categories():
    result = _invoke('categories')
    assert result.exit_code == 0
    for name in ('ising', 'fibonacci', 'su2', 'su3_3'):
        assert name in result.output


def test_validate_exit_codes():
    result = _invoke('validate', '--builtin', 'fibonacci')
    assert result.exit_code == 0, result.output
    assert 'pentagon' in result.output and 'FAIL' not in result.output
    assert _invoke('validate', '--builtin', 'su2', '--k', '0').exit_code == 2
    assert _invoke('validate').exit_code == 2
    assert _invoke('validate', '--builtin', 'fibonacci', '--json', 'x.json').exit_code == 2

    result = _invoke('validate', '--builtin', 'su2', '--k', '100')
    assert result.exit_code == 0, result.output
    assert '(sampled)' in result.output and 'block budget' in result.output


def test_validate_json_files():
    runner = CliRunner()
    with runner.isolated_filesystem():
        data = category_to_json(fibonacci())
        for item in data['F']:
            if item['abcd'] == [1, 1, 1, 1]:
                item['entries'][0][0] *= -1
        with open('bad.json', 'w', encoding='utf-8') as fh:
            json.dump(data, fh)
        with open('broken.json', 'w', encoding='utf-8') as fh:
            fh.write('{"labels": [')
        result = runner.invoke(cli, ['validate', '--json', 'bad.json'])
        assert result.exit_code == 1
        assert 'first violation' in result.output

        data = category_to_json(fibonacci())
        data['F'] = [item for item in data['F'] if item['abcd'] != [1, 1, 1, 1]]
        with open('incomplete.json', 'w', encoding='utf-8') as fh:
            json.dump(data, fh)
        result = runner.invoke(cli, ['validate', '--json', 'incomplete.json'])
        assert result.exit_code == 1
        assert result.exception is None or isinstance(result.exception, SystemExit)
        assert 'a_unitarity' in result.output and 'A symbols' in result.output
        assert any(line.startswith('r_unitarity') and 'PASS' in line
                   for line in result.output.splitlines())
        assert runner.invoke(cli, ['validate', '--json', 'broken.json']).exit_code == 2
        assert runner.invoke(cli, ['validate', '--json', 'missing.json']).exit_code == 2


def test_aln_command():
    result = _invoke('aln', '--builtin', 'ising', '--a', 'sigma', '--b', 'sigma', '--p', 'I=1')
    assert result.exit_code == 0, result.output
    assert abs(float(_value(result.output, 'ALN')) - np.log(np.sqrt(2))) < 1e-10
    assert abs(float(_value(result.output, 'ACE')) - np.log(2)) < 1e-10

    result = _invoke('aln', '--builtin', 'su3_3', '--a', '8', '--b', '8', '--p8', 'p=0.5,qr=0,qi=0.3')
    assert result.exit_code == 0, result.output
    assert abs(float(_value(result.output, 'ALN'))) < 1e-10

    result = _invoke('aln', '--builtin', 'su2', '--k', '4', '--a', '1', '--b', '1',
                     '--p', '0=0.25,1=0.5', '--p', '2=0.25', '--side', 'B')
    assert result.exit_code == 0, result.output
    assert abs(float(_value(result.output, 'ALN'))) < 1e-10


def test_aln_errors():
    base = ['aln', '--builtin', 'ising', '--a', 'sigma', '--b', 'sigma']
    assert _invoke(*base, '--p', 'I=0.5,psi=0.4').exit_code == 1
    assert _invoke(*base, '--p', 'sigma=1').exit_code == 1
    assert _invoke(*base, '--p', 'I').exit_code == 2
    assert _invoke(*base, '--p', 'I=abc').exit_code == 2
    assert _invoke('aln', '--builtin', 'ising', '--p', 'I=1').exit_code == 2


def test_aln_json_output():
    runner = CliRunner()
    with runner.isolated_filesystem():
        result = runner.invoke(cli, ['aln', '--builtin', 'fibonacci', '--a', 'tau', '--b', 'tau',
                                     '--p', 'tau=1', '--json-out', 'out.json'])
        assert result.exit_code == 0, result.output
        with open('out.json', encoding='utf-8') as fh:
            payload = json.load(fh)
        assert abs(payload['aln'] - np.log(2 / ((1 + np.sqrt(5)) / 2))) < 1e-10
        assert set(payload['channels']) == {'I', 'tau'}
        assert payload['side'] == 'A'


def test_sweep_command():
    runner = CliRunner()
    args = ['sweep', '--builtin', 'su2', '--k', '3', '--a', '1/2', '--b', '1/2', '--resolution', '10']
    with runner.isolated_filesystem():
        assert runner.invoke(cli, args + ['--out', 'a.csv']).exit_code == 0
        assert runner.invoke(cli, args + ['--out', 'b.csv']).exit_code == 0
        with open('a.csv', encoding='utf-8') as fa, open('b.csv', encoding='utf-8') as fb:
            first, second = fa.read(), fb.read()
        assert first == second
        lines = first.strip().split('\n')
        assert lines[0] == '0,1,aln'
        assert len(lines) == 12

        result = runner.invoke(cli, args + ['--werner', '--format', 'json', '--out', 'c.json'])
        assert result.exit_code == 0
        with open('c.json', encoding='utf-8') as fh:
            payload = json.load(fh)
        assert payload['channels'] == ['0', '1']
        assert 'werner' in payload['records'][0]

    result = _invoke('sweep', '--builtin', 'su3_3', '--a', '8', '--b', '8')
    assert result.exit_code == 1


def test_zero_locus_command():
    result = _invoke('zero-locus', '--builtin', 'su2', '--k', '4', '--a', '1', '--b', '1',
                     '--resolution', '20')
    assert result.exit_code == 0, result.output
    assert _value(result.output, 'rank(Im Delta)') == '1'
    assert _value(result.output, 'r0') == '1'
    assert 'zero points 11 of 231' in result.output

    result = _invoke('zero-locus', '--builtin', 'fibonacci', '--a', 'tau', '--b', 'tau',
                     '--resolution', '100')
    assert result.exit_code == 0, result.output
    assert _value(result.output, 'r0') == '0'
    assert 'zero points 1 of 101' in result.output
    assert '  0.38,0.62' in result.output
    assert _invoke('zero-locus', '--builtin', 'su3_3', '--a', '8', '--b', '8').exit_code == 1


def test_fermionic_demo():
    result = _invoke('fermionic-demo')
    assert result.exit_code == 0, result.output
    assert abs(float(_value(result.output, 'fermionic LN')) - np.log(np.sqrt(2))) < 1e-10
    assert _invoke('fermionic-demo', '--modes', '9').exit_code == 2


def main():
    tests = [
        ("categories", test_categories),
        ("validate 退出码", test_validate_exit_codes),
        ("validate JSON 文件", test_validate_json_files),
        ("aln", test_aln_command),
        ("aln 错误", test_aln_errors),
        ("aln JSON 输出", test_aln_json_output),
        ("sweep", test_sweep_command),
        ("zero-locus", test_zero_locus_command),
        ("fermionic-demo", test_fermionic_demo),
    ]
    return run_suite("命令行测试", tests)


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
