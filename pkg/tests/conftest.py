import itertools
from pathlib import Path

import numpy as np
import pytest

from spectral_sketch.graph import load_edge_list

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def conflict8():
    return load_edge_list(FIXTURES / "conflict8.txt", signed=True)


@pytest.fixture
def triangles():
    return load_edge_list(FIXTURES / "triangles_bridge.txt")


def best_polarity(A):
    """Exhaustive max of x^T A x / x^T x over {0, +-1}^n minus the origin."""
    n = A.shape[0]
    X = np.array(list(itertools.product((-1, 0, 1), repeat=n)), dtype=np.float64)
    X = X[np.any(X != 0, axis=1)]
    return float(np.max(np.einsum("ij,jk,ik->i", X, A, X) / np.sum(X * X, axis=1)))


def best_modularity(A):
    """Exhaustive max of x^T M x / (4|E|) over {+-1}^n."""
    n = A.shape[0]
    deg = A.sum(axis=1)
    m = deg.sum() / 2
    M = A - np.outer(deg, deg) / (2 * m)
    X = np.array(list(itertools.product((-1, 1), repeat=n)), dtype=np.float64)
    return float(np.max(np.einsum("ij,jk,ik->i", X, M, X) / (4 * m)))


# --------------------------------------------------------------------------
# one pass/fail line per acceptance criterion
# --------------------------------------------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        num = int(name.split("_")[2])
        label = " ".join(name.split("_")[3:])
        verdict = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:>2}  {verdict}  {label}")
