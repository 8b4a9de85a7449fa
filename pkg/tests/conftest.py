import itertools

import numpy as np
import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20241018)


def cofactor_det(a):
    """Laplace expansion along the first row; brute-force oracle for small n."""
    a = np.asarray(a)
    n = a.shape[0]
    if n == 1:
        return a[0, 0]
    total = 0
    for j in range(n):
        minor = np.delete(np.delete(a, 0, axis=0), j, axis=1)
        total += (-1) ** j * a[0, j] * cofactor_det(minor)
    return total


def leibniz_det(a):
    a = np.asarray(a)
    n = a.shape[0]
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= a[i, perm[i]]
        total += (-1) ** inversions * prod
    return total


def projector_gram_schmidt(frame):
    """Columns via the product form (E - P_1)(E - P_2)...(E - P_{k-1}) V_k."""
    n = frame.shape[0]
    eye = np.eye(n, dtype=complex)
    cols = []
    for k in range(n):
        v = frame[:, k].astype(complex)
        for q in reversed(cols):
            v = (eye - np.outer(q, q.conj())) @ v
        cols.append(v / np.sqrt(np.vdot(v, v).real))
    return np.column_stack(cols)


def charpoly(a):
    """Faddeev-LeVerrier coefficients of det(t I - a), leading 1."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    coeffs = [1.0 + 0j]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    return np.array(coeffs)


def random_complex_matrix(rng, n, scale=1.0):
    return scale * (rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))) / np.sqrt(2)


def random_hermitian(rng, n):
    a = random_complex_matrix(rng, n)
    return a + a.conj().T


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def record_acceptance(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
