#!/usr/bin/env python3
"""Tests for the read-only REST API."""
import math
import sys
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

sys.path.append(str(Path(__file__).parent))

from api.main import app
from src import __version__

client = TestClient(app)


def test_health():
    response = client.get('/api/health')
    assert response.status_code == 200
    assert response.json() == {'status': 'ok', 'version': __version__}
    assert client.get('/').json()['health'] == '/api/health'


def test_profile_of_and2():
    response = client.get('/api/profile', params={'formula': 'x1 & x2'})
    assert response.status_code == 200
    body = response.json()
    assert (body['p'], body['I'], body['E'], body['V'], body['I_plus']) == ('1/4', '1', '1/2', '3/4', '4/3')
    assert body['H'] == pytest.approx(2.0)
    assert body['H_plus'] == pytest.approx(math.log2(3))
    assert body['n'] == 2


def test_profile_errors():
    assert client.get('/api/profile', params={'formula': 'x1 $ x2'}).status_code == 400
    assert client.get('/api/profile', params={'formula': 'x3', 'n': 2}).status_code == 400
    assert client.get('/api/profile', params={'formula': 'x1', 'n': 21}).status_code == 422


def test_lex_profiles():
    exact = client.get('/api/lex', params={'mu': '2/3'}).json()
    assert exact['I'] == '4/3'
    assert exact['H'] == pytest.approx(2 * math.log2(3))
    truncated = client.get('/api/lex', params={'mu': '0.5'}).json()
    assert float(truncated['I']) == pytest.approx(1.0)
    assert client.get('/api/lex', params={'mu': 'abc'}).status_code == 400
    assert client.get('/api/lex', params={'mu': '3/2'}).status_code == 400


def test_lex_exponent_measure_is_a_float():
    body = client.get('/api/lex', params={'mu': '1e-3'}).json()
    assert body['bits'] == 60
    assert float(body['mu']) == pytest.approx(1e-3)


def test_bound_reports():
    body = client.get('/api/bounds/lb1').json()
    assert body['name'] == 'lb1'
    assert body['passed'] is True
    assert client.get('/api/bounds/lb3', params={'start': 'lex2/3'}).json()['passed'] is True
    assert client.get('/api/bounds/lb3', params={'start': 'bogus'}).status_code == 400
    assert client.get('/api/bounds/lb9').status_code == 404


def test_gamma_report_is_informational():
    assert client.get('/api/bounds/lb1').json()['informational'] is False
    body = client.get('/api/bounds/gamma', params={'profile': 'iota'}).json()
    assert body['name'] == 'gamma'
    assert body['informational'] is True
    assert client.get('/api/bounds/lb3', params={'profile': 'lex2/3'}).json()['passed'] is True


def test_table1_rows():
    rows = client.get('/api/table1', params={'max_m': 3}).json()
    assert [r['m'] for r in rows] == [2, 3]
    assert rows[1]['I'] == '13/8'
    assert client.get('/api/table1', params={'max_m': 11}).status_code == 422
