"""Conditional-independence decisions, from data (Fisher z on partial
correlations) or from a ground-truth DAG (separation oracle).

Both testers count every query; the counters are the complexity metric the
experiment harness reports. Counting is atomic so concurrent runs total
correctly.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import backend
from .graphs import Dag
from .separation import d_separated

RCOND_TOL = 1e-12


class InsufficientSampleError(ValueError):
    """n - |S| - 3 <= 0: the z approximation is undefined."""


class DegenerateCorrelationError(ValueError):
    """|rho| >= 1 admits no z-transform."""


class SingularSubmatrixError(ValueError):
    """Conditioning submatrix numerically singular (rcond below tolerance)."""


@dataclass(frozen=True)
class Dataset:
    """n x p sample matrix with column names aligned to node indices."""

    values: np.ndarray
    names: tuple[str, ...]

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError("dataset needs a 2-d array with at least one row")
        if len(self.names) != v.shape[1]:
            raise ValueError("one name per column required")
        if not np.all(np.isfinite(v)):
            raise ValueError("dataset contains missing or non-finite values")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def save_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(",".join(self.names) + "\n")
            for row in self.values:
                fh.write(",".join(repr(float(x)) for x in row) + "\n")

    @classmethod
    def load_csv(cls, path) -> "Dataset":
        with open(path) as fh:
            header = fh.readline().strip()
            if not header:
                raise ValueError(f"{path}: empty file")
            names = tuple(h.strip() for h in header.split(","))
            values = np.loadtxt(fh, delimiter=",", ndmin=2)
        return cls(values=values, names=names)


@dataclass(frozen=True)
class Covariance:
    """p x p covariance with the sample count it came from."""

    matrix: np.ndarray
    n: int

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("covariance must be square")
        if not np.allclose(m, m.T, rtol=0.0, atol=1e-8):
            raise ValueError("covariance must be symmetric")
        if np.any(np.diag(m) < 0):
            raise ValueError("negative variance on the diagonal")

    @property
    def p(self) -> int:
        return self.matrix.shape[0]


def covariance(d: Dataset) -> Covariance:
    """Maximum-likelihood covariance (divisor n), means subtracted."""
    if d.n < 2:
        raise ValueError("need at least two rows for a covariance")
    centered = d.values - d.values.mean(axis=0, keepdims=True)
    mat = centered.T @ centered / d.n
    mat = (mat + mat.T) / 2.0
    return Covariance(matrix=mat, n=d.n)


def partial_correlation(c: Covariance, i: int, j: int, s: Sequence[int]) -> float:
    """Partial correlation of i and j given s, via the precision matrix of
    the principal submatrix over [i, j, *s]."""
    s = tuple(sorted(set(int(v) for v in s)))
    if i == j or i in s or j in s:
        raise ValueError("indices must be distinct from each other and from s")
    idx = (min(i, j), max(i, j)) + s  # canonical order: exact (i, j) symmetry
    sub = c.matrix[np.ix_(idx, idx)]
    rho, rcond = backend.kernels().partial_correlation_from_cov(sub)
    if not np.isfinite(rho) or rcond < RCOND_TOL:
        raise SingularSubmatrixError(
            f"principal submatrix over {idx} has rcond {rcond:.3e}"
        )
    return float(rho)


@dataclass(frozen=True)
class CiDecision:
    independent: bool
    statistic: float
    p_value: float
    cond_size: int


def fisher_z_test(rho_hat: float, n: int, s_size: int, alpha: float) -> CiDecision:
    """z = sqrt(n - |S| - 3) * (1/2) log((1 + r)/(1 - r)), compared against
    the standard normal; independent iff the two-sided p-value exceeds
    alpha (ties count as dependent)."""
    if n - s_size - 3 <= 0:
        raise InsufficientSampleError(f"n={n} too small for |S|={s_size}")
    if abs(rho_hat) >= 1.0:
        raise DegenerateCorrelationError(f"|rho|={abs(rho_hat)} >= 1")
    kern = backend.kernels()
    stat = kern.fisher_z_statistic(rho_hat, n, s_size)
    p_value = 2.0 * kern.normal_sf(abs(stat))
    return CiDecision(
        independent=p_value > alpha, statistic=stat, p_value=p_value, cond_size=s_size
    )


class CiTester:
    """Base: counts queries and collects per-run flags."""

    def __init__(self):
        self._count = 0
        self._lock = threading.Lock()
        self.flags: list[dict] = []

    @property
    def count(self) -> int:
        return self._count

    def _bump(self) -> None:
        with self._lock:
            self._count += 1

    def test(self, i: int, j: int, s, alpha: float) -> CiDecision:
        raise NotImplementedError


class OracleTester(CiTester):
    """Separation oracle on a known DAG; p-values are 0 or 1."""

    def __init__(self, dag: Dag):
        super().__init__()
        self.dag = dag

    def test(self, i, j, s, alpha) -> CiDecision:
        self._bump()
        independent = d_separated(self.dag, i, j, s)
        p = 1.0 if independent else 0.0
        return CiDecision(independent=independent, statistic=0.0, p_value=p, cond_size=len(tuple(s)))


class FisherZTester(CiTester):
    """Gaussian partial-correlation test from a covariance.

    A singular conditioning submatrix yields a dependent decision (keep the
    edge) and is flagged rather than aborting the run.
    """

    def __init__(self, cov: Covariance):
        super().__init__()
        self.cov = cov

    @classmethod
    def from_dataset(cls, d: Dataset) -> "FisherZTester":
        return cls(covariance(d))

    def test(self, i, j, s, alpha) -> CiDecision:
        self._bump()
        s = tuple(s)
        try:
            rho = partial_correlation(self.cov, i, j, s)
        except SingularSubmatrixError:
            with self._lock:
                self.flags.append({"kind": "singular_submatrix", "i": int(i), "j": int(j), "s": [int(v) for v in s]})
            return CiDecision(independent=False, statistic=float("inf"), p_value=0.0, cond_size=len(s))
        return fisher_z_test(rho, self.cov.n, len(s), alpha)


def ci_test(t: CiTester, i: int, j: int, s, alpha: float) -> CiDecision:
    return t.test(i, j, s, alpha)


# -- covariance cache ---------------------------------------------------------


def dataset_hash(d: Dataset) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(d.values).tobytes())
    h.update("\x00".join(d.names).encode())
    return h.hexdigest()


def save_covariance(path, cov: Covariance, key: Optional[str] = None) -> None:
    doc = {"n": cov.n, "matrix": cov.matrix.tolist()}
    if key is not None:
        doc["dataset_sha256"] = key
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_covariance(path, expect_key: Optional[str] = None) -> Covariance:
    with open(path) as fh:
        doc = json.load(fh)
    if expect_key is not None and doc.get("dataset_sha256") != expect_key:
        raise ValueError("covariance cache does not match the dataset hash")
    return Covariance(matrix=np.asarray(doc["matrix"], dtype=float), n=int(doc["n"]))
