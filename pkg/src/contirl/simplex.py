"""Dense two-phase simplex for small linear programs.

Solves

    min  c . x    subject to    A x >= b,   x >= 0

with surplus variables for the inequalities and artificial variables for
the phase-1 start.  Pivoting uses Bland's rule (lowest-index entering
column, lowest-index basic variable on ratio ties), which rules out
cycling.  Long pivot paths let round-off accumulate in a dense tableau,
so the tableau is refactorised from the original data every few dozen
pivots and again before accepting optimality; a phase only terminates
when the refreshed reduced costs confirm it.  The optimal dual vector is
read off the reduced costs of the surplus columns, so callers can
certify optimality independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_RCOST_TOL = 1e-9
_PIVOT_TOL = 1e-10
_FEAS_TOL = 1e-7
_REFRESH_EVERY = 40


class LPInfeasibleError(Exception):
    """The constraint set A x >= b, x >= 0 is empty."""


class LPUnboundedError(Exception):
    """The objective is unbounded below on the feasible set."""


@dataclass(frozen=True)
class SimplexResult:
    x: np.ndarray
    objective: float
    duals: np.ndarray
    iterations: int


class _Tableau:
    """Basis-reduced tableau plus the pristine column data it came from."""

    def __init__(self, columns: np.ndarray, rhs: np.ndarray, basis: np.ndarray):
        self.columns = columns  # original, never mutated
        self.rhs = rhs
        self.basis = basis
        self.tab = np.column_stack([columns, rhs]).astype(float)

    def refresh(self) -> None:
        """Recompute the tableau exactly from the original data."""
        B = self.columns[:, self.basis]
        try:
            sol = np.linalg.solve(B, np.column_stack([self.columns, self.rhs]))
        except np.linalg.LinAlgError:
            return
        np.copyto(self.tab, sol)

    def pivot(self, row: int, col: int) -> None:
        t = self.tab
        t[row] /= t[row, col]
        for i in range(t.shape[0]):
            if i != row and t[i, col] != 0.0:
                t[i] -= t[i, col] * t[row]
        self.basis[row] = col

    def drop_rows(self, keep: np.ndarray) -> None:
        self.columns = self.columns[keep]
        self.rhs = self.rhs[keep]
        self.tab = self.tab[keep]
        self.basis = self.basis[keep]

    def _ratio_row(self, col: np.ndarray) -> int:
        """Blocking row for an entering column, or -1 if none is safe.

        Rows are eligible only above a threshold relative to the column's
        magnitude: pivoting on a noise-level entry makes the basis
        numerically singular.  Among eligible rows the minimum ratio wins,
        lowest basic index on genuine ties (any fuzz in the minimum can
        pick a non-blocking row and leave the feasible region).
        """
        thresh = max(_PIVOT_TOL, 1e-9 * float(np.max(np.abs(col))))
        rhs = self.tab[:, -1]
        leaving = -1
        best = np.inf
        for i in range(self.tab.shape[0]):
            if col[i] > thresh:
                ratio = rhs[i] / col[i]
                if ratio < best or (
                    ratio == best and self.basis[i] < self.basis[leaving]
                ):
                    best = ratio
                    leaving = i
        return leaving

    def minimize(self, costs: np.ndarray, allowed: int, max_iter: int) -> int:
        """Pivot under Bland's rule until refreshed-confirmed optimality."""
        it = 0
        since_refresh = 0
        while True:
            cb = costs[self.basis]
            reduced = costs[:allowed] - cb @ self.tab[:, :allowed]
            entering = leaving = -1
            for j in range(allowed):
                if reduced[j] < -_RCOST_TOL:
                    col = self.tab[:, j]
                    row = self._ratio_row(col)
                    if row >= 0:
                        entering, leaving = j, row
                        break
                    if float(np.max(col, initial=0.0)) <= _PIVOT_TOL:
                        raise LPUnboundedError(
                            "improving column with no blocking row")
                    # positive entries exist but only at noise level:
                    # unusable, try the next Bland candidate
            if entering < 0:
                if since_refresh == 0:
                    return it
                self.refresh()
                since_refresh = 0
                continue
            self.pivot(leaving, entering)
            it += 1
            since_refresh += 1
            if since_refresh >= _REFRESH_EVERY:
                self.refresh()
                since_refresh = 0
            if it > max_iter:
                raise RuntimeError("simplex exceeded its iteration budget")


def solve_inequality_lp(c, A, b) -> SimplexResult:
    """Minimise c.x over A x >= b, x >= 0 by the two-phase method."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).ravel()
    c = np.asarray(c, dtype=float).ravel()
    m, n = A.shape
    if b.size != m or c.size != n:
        raise ValueError("inconsistent LP dimensions")

    # Columns: n structural, m surplus (-I), m artificial (+I).  Rows with
    # negative right-hand side are flipped so the artificial start is basic
    # feasible.
    sign = np.where(b < 0.0, -1.0, 1.0)
    columns = np.zeros((m, n + 2 * m))
    columns[:, :n] = A * sign[:, None]
    columns[:, n:n + m] = -np.diag(sign)
    columns[:, n + m:n + 2 * m] = np.eye(m)
    tableau = _Tableau(columns, b * sign, np.arange(n + m, n + 2 * m))
    max_iter = 2000 + 200 * (m + n)

    phase1 = np.zeros(n + 2 * m)
    phase1[n + m:] = 1.0
    iters = tableau.minimize(phase1, n + m, max_iter)
    if float(phase1[tableau.basis] @ tableau.tab[:, -1]) > _FEAS_TOL:
        raise LPInfeasibleError("phase 1 could not drive artificials to zero")

    # Pivot any zero-level artificial out of the basis; a row with no
    # eligible pivot is redundant and can be dropped.
    keep = np.ones(m, dtype=bool)
    for i in range(m):
        if tableau.basis[i] >= n + m:
            for j in range(n + m):
                if abs(tableau.tab[i, j]) > _PIVOT_TOL:
                    tableau.pivot(i, j)
                    break
            else:
                keep[i] = False
    if not np.all(keep):
        tableau.drop_rows(keep)
    tableau.refresh()

    phase2 = np.zeros(n + 2 * m)
    phase2[:n] = c
    iters += tableau.minimize(phase2, n + m, max_iter)

    x = np.zeros(n)
    for i, var in enumerate(tableau.basis):
        if var < n:
            x[var] = tableau.tab[i, -1]
    # The reduced cost of surplus column i equals the optimal dual of row i
    # (row sign flips cancel against the flipped surplus entry).
    cb = phase2[tableau.basis]
    duals = np.asarray(-(cb @ tableau.tab[:, n:n + m]), dtype=float)
    objective = float(c @ x)
    return SimplexResult(x=x, objective=objective, duals=duals,
                         iterations=iters)


def certificate_residuals(c, A, b, result: SimplexResult) -> dict:
    """Feasibility, dual-feasibility, and complementary-slackness residuals.

    All residuals are nonnegative; an optimal primal/dual pair makes every
    one of them ~0 up to round-off.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).ravel()
    c = np.asarray(c, dtype=float).ravel()
    x, y = result.x, result.duals
    slack = A @ x - b
    dual_slack = c - A.T @ y
    return {
        "primal": float(max(0.0, -np.min(slack, initial=0.0),
                            -np.min(x, initial=0.0))),
        "dual": float(max(0.0, -np.min(y, initial=0.0),
                          -np.min(dual_slack, initial=0.0))),
        "gap": abs(float(c @ x) - float(b @ y)),
        "comp_slack": float(max(np.max(np.abs(y * slack), initial=0.0),
                                np.max(np.abs(x * dual_slack), initial=0.0))),
    }
