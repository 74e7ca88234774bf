"""Shared pytest fixtures: hand-computed conditions, twin pairs and spaces"""

import json
import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from amalgamation import make_request
from core_conditions import Condition
from finite_topology import generate_topology
from models import ConditionDocument


def cond(A, n, U):
    """Shorthand for Condition.build with list values"""
    return Condition.build(A, n, U)


def rows(alpha, n, value):
    """U(alpha, i) = value for every i < n"""
    return {(alpha, i): value for i in range(n)}


FIX_AMALG_CELLS = {
    **rows(0, 2, {0, 1, 2, 3, 4, 5}),
    **rows(1, 2, {0, 1, 4, 5}),
    **{(b, j): {b} for b in (2, 3, 4, 5) for j in range(2)},
}


@pytest.fixture
def fix_t():
    """t = ⟨{0}, 1, U(0,0)={0}⟩"""
    return cond([0], 1, {(0, 0): {0}})


@pytest.fixture
def fix_pair():
    """Twins ⟨{0},2,{0}⟩ and ⟨{1},2,{1}⟩ with empty root"""
    return cond([0], 2, rows(0, 2, {0})), cond([1], 2, rows(1, 2, {1}))


@pytest.fixture
def fix_bad():
    """Fails (P3) at α=0, β=1, i=0"""
    return cond([0, 1], 1, {(0, 0): {0, 1}, (1, 0): {0, 1}})


@pytest.fixture
def fix_q():
    return cond([0, 1], 1, {(0, 0): {0}, (1, 0): {1}})


@pytest.fixture
def fix_root():
    """Twins over {0,1} and {0,2} with root {0}"""
    p0 = cond([0, 1], 2, {**rows(0, 2, {0}), **rows(1, 2, {0, 1})})
    p1 = cond([0, 2], 2, {**rows(0, 2, {0}), **rows(2, 2, {0, 2})})
    return p0, p1


@pytest.fixture
def pair_request(fix_pair):
    """FIX_PAIR with ξ0=0, k=0, m=1"""
    p0, p1 = fix_pair
    return make_request(p0, p1, 0, 0, 1)


@pytest.fixture
def root_request(fix_root):
    p0, p1 = fix_root
    return make_request(p0, p1, 1, 0, 1)


@pytest.fixture
def fix_amalg():
    """The amalgam of FIX_PAIR at ξ0=0, k=0, m=1"""
    return cond(range(6), 2, FIX_AMALG_CELLS)


@pytest.fixture
def fix_sier():
    """Sierpiński space on {0,1}"""
    return generate_topology([0, 1], [{0}, {0, 1}])


@pytest.fixture
def indiscrete_two():
    return generate_topology([0, 1], [])


@pytest.fixture
def write_condition(tmp_path):
    """Write a condition document and return its path as a string"""

    def _write(name, condition):
        path = tmp_path / name
        document = ConditionDocument.from_condition(condition)
        path.write_text(json.dumps(document.model_dump()), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def write_json(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def test_client():
    """TestClient over the API app"""
    from app import app
    from fastapi.testclient import TestClient

    return TestClient(app)
