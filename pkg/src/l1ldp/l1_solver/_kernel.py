"""Compiled pivoting loop of the revised simplex.

One kernel serves two column layouts.  In the plain layout column ``j`` is
``A[:, j]``.  In the split layout ``A`` has ``n`` columns and the problem has
``2n``: column ``j`` is ``A[:, j]`` for ``j < n`` and ``-A[:, j - n]`` above.
The split layout additionally uses a long-step ratio test (see
``_long_step``).
"""

from __future__ import annotations

import numpy as np
from numba import njit

OPTIMAL = 0
UNBOUNDED = 2
ITERATION_LIMIT = 3
SINGULAR = 4

ELIGIBLE = 1
FLIPPABLE = 2

OPT_TOL = 1e-9
PIVOT_TOL = 1e-9
DRIFT_TOL = 1e-11


@njit(cache=True)
def _column(A, j, split, out):
    m = A.shape[0]
    if split:
        n = A.shape[1]
        if j < n:
            for i in range(m):
                out[i] = A[i, j]
        else:
            for i in range(m):
                out[i] = -A[i, j - n]
    else:
        for i in range(m):
            out[i] = A[i, j]


@njit(cache=True)
def basis_matrix(A, basis, split):
    m = basis.shape[0]
    B = np.empty((m, m))
    col = np.empty(m)
    for r in range(m):
        _column(A, basis[r], split, col)
        for i in range(m):
            B[i, r] = col[i]
    return B


@njit(cache=True)
def refactor(A, b, basis, split, Binv, xB):
    """Rebuild the explicit inverse from scratch; returns False if singular."""
    B = basis_matrix(A, basis, split)
    lim = 0.0
    for i in range(B.shape[0]):
        for j in range(B.shape[1]):
            v = abs(B[i, j])
            if v > lim:
                lim = v
    inv = np.linalg.inv(B)
    if not np.all(np.isfinite(inv)):
        return False
    # Reject an ill-conditioned factorization.
    big = 0.0
    for i in range(inv.shape[0]):
        for j in range(inv.shape[1]):
            v = abs(inv[i, j])
            if v > big:
                big = v
    if big * max(lim, 1.0) > 1e12 * B.shape[0]:
        return False
    Binv[:, :] = inv
    x = Binv @ b
    for i in range(x.shape[0]):
        xB[i] = x[i] if x[i] > 0.0 else 0.0
    return True


@njit(cache=True)
def drift(A, b, c, basis, split, Binv, xB):
    """Relative primal and dual residuals of the updated inverse."""
    m = basis.shape[0]
    B = basis_matrix(A, basis, split)
    cB = np.empty(m)
    for r in range(m):
        cB[r] = c[basis[r]]
    rp = B @ xB - b
    rd = (cB @ Binv) @ B - cB
    worst = 0.0
    for i in range(m):
        scale = 1.0 + abs(b[i])
        if abs(rp[i]) / scale > worst:
            worst = abs(rp[i]) / scale
        scale = 1.0 + abs(cB[i])
        if abs(rd[i]) / scale > worst:
            worst = abs(rd[i]) / scale
    return worst


@njit(cache=True)
def exchange(Binv, r, d):
    m = Binv.shape[0]
    piv = d[r]
    for j in range(m):
        Binv[r, j] /= piv
    for i in range(m):
        if i != r:
            f = d[i]
            if f != 0.0:
                for j in range(m):
                    Binv[i, j] -= f * Binv[r, j]


@njit(cache=True)
def run(A, b, c, basis, in_basis, Binv, xB, split, flags,
        max_iter, bland_after, refactor_every, counters):
    """Primal simplex from a feasible basis.

    ``flags[j]`` has bit ``ELIGIBLE`` if column ``j`` may enter and, in the
    split layout, bit ``FLIPPABLE`` if a basic ``j`` may trade places with
    its negated twin when its value crosses zero.  ``counters`` holds ``[iterations, degenerate pivots, pivots since
    refactor]`` and is updated in place so phases can share budgets.
    """
    m = A.shape[0]
    N = 2 * A.shape[1] if split else A.shape[1]
    n_half = A.shape[1]
    bscale = 1.0
    for i in range(m):
        if abs(b[i]) > bscale:
            bscale = abs(b[i])
    d = np.empty(m)
    col = np.empty(m)
    cB = np.empty(m)
    rc = np.empty(N)
    pos = np.empty(m, dtype=np.int64)
    ratios = np.empty(m)
    while True:
        for r in range(m):
            cB[r] = c[basis[r]]
        y = cB @ Binv
        z = y @ A
        if split:
            for j in range(n_half):
                rc[j] = c[j] - z[j]
                rc[j + n_half] = c[j + n_half] + z[j]
        else:
            for j in range(N):
                rc[j] = c[j] - z[j]
        bland = counters[1] >= bland_after
        q = -1
        best = -OPT_TOL
        for j in range(N):
            if in_basis[j] or not (flags[j] & ELIGIBLE):
                continue
            if rc[j] < best:
                q = j
                if bland:
                    break
                best = rc[j]
        if q < 0:
            if counters[2] > 0 and drift(A, b, c, basis, split, Binv, xB) > DRIFT_TOL:
                if not refactor(A, b, basis, split, Binv, xB):
                    return SINGULAR
                counters[2] = 0
                continue
            return OPTIMAL
        if counters[0] >= max_iter:
            return ITERATION_LIMIT
        _column(A, q, split, col)
        d[:] = Binv @ col
        dmax = 1.0
        for i in range(m):
            if abs(d[i]) > dmax:
                dmax = abs(d[i])
        tol = PIVOT_TOL * dmax
        npos = 0
        for i in range(m):
            if d[i] > tol:
                pos[npos] = i
                ratios[npos] = xB[i] / d[i]
                npos += 1
        if npos == 0:
            return UNBOUNDED
        if split and not bland:
            r, theta, nflip = _long_step(d, rc[q], pos, ratios, npos, basis, flags, c, n_half)
            if r < 0:
                return UNBOUNDED
            for t in range(nflip):
                i = pos[t]
                xB[i] = theta * d[i] - xB[i]
                for j in range(m):
                    Binv[i, j] = -Binv[i, j]
                d[i] = -d[i]
                old = basis[i]
                in_basis[old] = False
                basis[i] = old + n_half if old < n_half else old - n_half
                in_basis[basis[i]] = True
            for i in range(m):
                if i == r:
                    continue
                flipped = False
                for t in range(nflip):
                    if pos[t] == i:
                        flipped = True
                        break
                if not flipped:
                    xB[i] -= theta * d[i]
                if xB[i] < 0.0:
                    xB[i] = 0.0
            xB[r] = theta
        else:
            theta = np.inf
            for t in range(npos):
                if ratios[t] < theta:
                    theta = ratios[t]
            r = -1
            for t in range(npos):
                if ratios[t] <= theta + 1e-12 * bscale:
                    i = pos[t]
                    if r < 0:
                        r = i
                    elif bland:
                        if basis[i] < basis[r]:
                            r = i
                    elif d[i] > d[r]:
                        r = i
            theta = xB[r] / d[r]
            for i in range(m):
                xB[i] -= theta * d[i]
                if xB[i] < 0.0:
                    xB[i] = 0.0
            xB[r] = theta
        exchange(Binv, r, d)
        in_basis[basis[r]] = False
        basis[r] = q
        in_basis[q] = True
        if theta <= 1e-12 * bscale:
            counters[1] += 1
        counters[0] += 1
        counters[2] += 1
        if counters[2] >= refactor_every:
            if drift(A, b, c, basis, split, Binv, xB) > DRIFT_TOL:
                if not refactor(A, b, basis, split, Binv, xB):
                    return SINGULAR
            counters[2] = 0


@njit(cache=True)
def _long_step(d, rc_q, pos, ratios, npos, basis, flags, c, n_half):
    """Pick the leaving row for a step that may pass breakpoints.

    Moving the entering variable by ``t`` changes the objective at slope
    ``rc_q`` until a basic coordinate reaches zero; past that point its
    column is replaced by its negated twin and the slope grows by
    ``(c_i + c_twin) d_i``.  The step stops at the first breakpoint where
    the slope is no longer negative or the basic column may not flip.  Rows
    before it are reordered into ``pos[:nflip]`` and get their column flipped.
    """
    order = np.argsort(ratios[:npos], kind="mergesort")
    slope = rc_q
    stop = -1
    for t in range(npos):
        i = pos[order[t]]
        if not (flags[basis[i]] & FLIPPABLE):
            stop = t
            break
        j = basis[i]
        twin = j + n_half if j < n_half else j - n_half
        slope += (c[j] + c[twin]) * d[i]
        if slope >= -OPT_TOL:
            stop = t
            break
    if stop < 0:
        return -1, 0.0, 0
    r = pos[order[stop]]
    theta = ratios[order[stop]]
    flips = np.empty(stop, dtype=np.int64)
    for t in range(stop):
        flips[t] = pos[order[t]]
    for t in range(stop):
        pos[t] = flips[t]
    return r, theta, stop
