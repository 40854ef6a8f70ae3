#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
HTTP 接口测试
"""

import sys
import os

import numpy as np

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from app import app
from modules.builtin_categories import fibonacci
from modules.category_core import category_to_json
from testing_utils import run_suite

client = app.test_client()


def test_index():
    response = client.get('/')
    assert response.status_code == 200
    assert response.get_json()['status'] == 'normal'


def test_categories():
    payload = client.get('/api/categories').get_json()
    assert [item['builtin'] for item in payload] == ['ising', 'fibonacci', 'su2', 'su3_3']


def test_validate():
    response = client.get('/api/validate?builtin=su2&k=3')
    assert response.status_code == 200
    payload = response.get_json()
    assert payload['passed']
    assert {r['check'] for r in payload['reports']} >= {'pentagon', 'hexagon'}
    assert client.get('/api/validate?builtin=su2&k=0').status_code == 400
    assert client.get('/api/validate?builtin=su2&k=x').status_code == 400


def test_aln():
    response = client.post('/api/aln', json={
        'category': {'builtin': 'ising', 'nu': 3},
        'a': 'sigma', 'b': 'sigma', 'p': {'I': 0.8, 'psi': 0.2},
    })
    assert response.status_code == 200
    payload = response.get_json()
    assert abs(payload['aln'] - 0.5 * np.log(2 * (0.64 + 0.04))) < 1e-10
    assert payload['ace'] is not None

    response = client.post('/api/aln', json={
        'category': {'json': category_to_json(fibonacci())},
        'a': 'tau', 'b': 'tau', 'p': {'I': 1.0}, 'side': 'B',
    })
    assert response.status_code == 200
    assert abs(response.get_json()['aln'] - np.log((1 + np.sqrt(5)) / 2)) < 1e-10

    response = client.post('/api/aln', json={
        'category': {'builtin': 'su3_3'}, 'a': '8', 'b': '8',
        'p': {'8': [[[0.5, 0.0], [0.1, 0.2]], [[0.1, -0.2], [0.5, 0.0]]]},
    })
    assert response.status_code == 200
    assert response.get_json()['ace'] is None


def test_aln_errors():
    response = client.post('/api/aln', json={
        'category': {'builtin': 'ising'}, 'a': 'sigma', 'b': 'sigma', 'p': {'I': 0.3},
    })
    assert response.status_code == 400
    assert 'error' in response.get_json()
    assert client.post('/api/aln', json={'category': 'ising'}).status_code == 400


def test_sweep():
    response = client.post('/api/sweep', json={
        'category': {'builtin': 'fibonacci'}, 'a': 'tau', 'b': 'tau', 'resolution': 4,
    })
    assert response.status_code == 200
    payload = response.get_json()
    assert payload['channels'] == ['I', 'tau']
    assert len(payload['records']) == 5
    response = client.post('/api/sweep', json={'category': {'builtin': 'su3_3'}, 'a': '8', 'b': '8'})
    assert response.status_code == 400


def test_not_found():
    response = client.get('/api/unknown')
    assert response.status_code == 404
    assert 'error' in response.get_json()


def main():
    tests = [
        ("首页", test_index),
        ("范畴列表", test_categories),
        ("一致性检查", test_validate),
        ("ALN", test_aln),
        ("ALN 错误", test_aln_errors),
        ("参数扫描", test_sweep),
        ("404", test_not_found),
    ]
    return run_suite("HTTP 接口测试", tests)


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
