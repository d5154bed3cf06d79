import numpy as np
import pytest

from smoothperf.data import Dataset

# (criterion, passed, detail) rows filled by test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")


def random_dataset(rng, n, p, pos_frac=0.5, scale=1.0):
    """Dense Gaussian features with both classes guaranteed."""
    X = rng.normal(size=(n, p)) * scale
    y = np.where(rng.random(n) < pos_frac, 1, -1)
    y[0], y[1] = 1, -1
    return Dataset.from_dense(X, y)


def unit_ball(rng, p):
    v = rng.normal(size=p)
    return v / np.linalg.norm(v) * rng.random() ** (1.0 / p)


def _prep(X, y, seed=0):
    from sklearn.model_selection import train_test_split
    from sklearn.preprocessing import StandardScaler
    X = StandardScaler().fit_transform(X)
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    Xtr, Xte, ytr, yte = train_test_split(X, y, test_size=0.3, random_state=seed, stratify=y)
    return Dataset.from_dense(Xtr, ytr), Dataset.from_dense(Xte, yte)


@pytest.fixture(scope="session")
def breast_cancer():
    datasets = pytest.importorskip("sklearn.datasets")
    bc = datasets.load_breast_cancer()
    return _prep(bc.data, np.where(bc.target == 1, 1, -1))


@pytest.fixture(scope="session")
def digits():
    datasets = pytest.importorskip("sklearn.datasets")
    dg = datasets.load_digits()
    return _prep(dg.data, np.where(dg.target >= 5, 1, -1))


@pytest.fixture
def two_point():
    """x1 = [1] positive, x2 = [-1] negative."""
    return Dataset.from_dense(np.array([[1.0], [-1.0]]), np.array([1, -1]))
