"""Pure-Python kernels: separation walks and Gaussian partial correlation.

This module is the fallback twin of the compiled extension ``_ckernels``.
The two must stay behaviourally identical bit for bit: every floating-point
operation here is written in the exact order the C code performs it (the
extension is compiled with -ffp-contract=off for that reason), and the graph
walks are plain integer logic. ``tests/test_backend_parity.py`` enforces the
contract.

Separation queries run as reachability over *half edges*: the state is the
directed slot "arrived at node v via edge (u, v)". A walk that revisits nodes
can always be spliced down to a simple path with the same collider pattern,
so reachability over walks decides path existence.
"""

from __future__ import annotations

from math import erfc, log, sqrt

NAME = "python"

_TAIL = 1
_ARROW = 2


class GraphKernel:
    """Separation queries over a frozen half-edge table."""

    def __init__(self, indptr, nbr, mark_self, mark_other, p):
        # Lists index faster than numpy scalars under the interpreter.
        self.indptr = list(indptr)
        self.nbr = list(nbr)
        self.mark_self = list(mark_self)
        self.mark_other = list(mark_other)
        self.p = p

    def ancestors(self, seeds) -> set:
        """Nodes with a directed path into any seed, plus the seeds."""
        indptr, nbr = self.indptr, self.nbr
        ms, mo = self.mark_self, self.mark_other
        mask = bytearray(self.p)
        stack = []
        for s in seeds:
            if not mask[s]:
                mask[s] = 1
                stack.append(s)
        while stack:
            u = stack.pop()
            for k in range(indptr[u], indptr[u + 1]):
                w = nbr[k]
                if not mask[w] and ms[k] == _ARROW and mo[k] == _TAIL:
                    mask[w] = 1
                    stack.append(w)
        return {v for v in range(self.p) if mask[v]}

    def m_connected(self, i: int, j: int, s) -> bool:
        """True iff an m-connecting walk exists between i and j given s."""
        indptr, nbr = self.indptr, self.nbr
        ms, mo = self.mark_self, self.mark_other
        smask = bytearray(self.p)
        for v in s:
            smask[v] = 1
        anmask = bytearray(self.p)
        for v in self.ancestors(s):
            anmask[v] = 1
        visited = bytearray(len(nbr))
        stack = []
        for k in range(indptr[i], indptr[i + 1]):
            if nbr[k] == j:
                return True
            visited[k] = 1
            stack.append(k)
        while stack:
            k = stack.pop()
            v = nbr[k]
            arrived_arrow = mo[k] == _ARROW
            for k2 in range(indptr[v], indptr[v + 1]):
                if visited[k2]:
                    continue
                if arrived_arrow and ms[k2] == _ARROW:
                    if not anmask[v]:  # collider outside an(S) blocks
                        continue
                elif smask[v]:  # conditioned non-collider blocks
                    continue
                w = nbr[k2]
                if w == j:
                    return True
                visited[k2] = 1
                stack.append(k2)
        return False

def partial_correlation_from_cov(sub) -> tuple[float, float]:
    """Partial correlation of variables 0, 1 given the rest of ``sub``.

    ``sub`` is the (m x m) covariance over [i, j, *s] as nested lists or an
    ndarray. Returns (rho, rcond_1norm); on a failed Cholesky pivot returns
    (nan, 0.0) so the caller can map it to a singularity error.
    """
    m = len(sub)
    a = [[float(sub[r][c]) for c in range(m)] for r in range(m)]
    low = [[0.0] * m for _ in range(m)]
    for c in range(m):
        acc = a[c][c]
        for k in range(c):
            acc -= low[c][k] * low[c][k]
        if not acc > 0.0:
            return (float("nan"), 0.0)
        low[c][c] = sqrt(acc)
        for r in range(c + 1, m):
            t = a[r][c]
            for k in range(c):
                t -= low[r][k] * low[c][k]
            low[r][c] = t / low[c][c]
    # inv(low), lower triangular, column by column
    inv = [[0.0] * m for _ in range(m)]
    for c in range(m):
        inv[c][c] = 1.0 / low[c][c]
        for r in range(c + 1, m):
            t = 0.0
            for k in range(c, r):
                t -= low[r][k] * inv[k][c]
            inv[r][c] = t / low[r][r]
    # precision P = inv(low)^T inv(low)
    prec = [[0.0] * m for _ in range(m)]
    for r in range(m):
        for c in range(r, m):
            t = 0.0
            for k in range(c, m):
                t += inv[k][r] * inv[k][c]
            prec[r][c] = t
            prec[c][r] = t
    rho = -prec[0][1] / sqrt(prec[0][0] * prec[1][1])
    norm_a = 0.0
    norm_p = 0.0
    for c in range(m):
        sa = 0.0
        sp = 0.0
        for r in range(m):
            sa += abs(a[r][c])
            sp += abs(prec[r][c])
        if sa > norm_a:
            norm_a = sa
        if sp > norm_p:
            norm_p = sp
    rcond = 1.0 / (norm_a * norm_p)
    return (rho, rcond)


def fisher_z_statistic(rho: float, n: int, s_size: int) -> float:
    """sqrt(n - |S| - 3) * (1/2) log((1 + rho) / (1 - rho))."""
    return sqrt(n - s_size - 3.0) * (0.5 * log((1.0 + rho) / (1.0 - rho)))


def normal_sf(x: float) -> float:
    """Standard normal upper tail via the complementary error function."""
    return 0.5 * erfc(x / sqrt(2.0))
