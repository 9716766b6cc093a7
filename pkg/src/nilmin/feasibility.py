"""Exact decision of  U x = lambda [1],  x > 0,  for a PSD integer Gram matrix U.

lambda < 0 is impossible for PSD U and positive x (x^T U x = lambda sum x_i),
and scaling x scales lambda, so only lambda = 1 and lambda = 0 are tried.
Both are linear programs solved by a two-phase simplex in exact arithmetic
with Bland's rule.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from string import ascii_lowercase
from typing import Sequence

from . import linalg

FEASIBLE_POSITIVE = "FeasibleLambdaPositive"
FEASIBLE_ZERO = "FeasibleLambdaZero"
INFEASIBLE = "Infeasible"

OPTIMAL, LP_INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: list[Fraction] | None = None
    value: Fraction | None = None


def simplex_max(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """maximize c.x  subject to  A x = b, x >= 0  (exact, Bland's rule)."""
    m = len(A)
    n = len(c)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    # tableau columns: n structural + m artificial, then rhs
    T = [A[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]

    def pivot(r: int, col: int) -> None:
        inv = 1 / T[r][col]
        T[r] = [v * inv for v in T[r]]
        for i in range(len(T)):
            if i != r and T[i][col]:
                f = T[i][col]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        basis[r] = col

    def run(cost: list[Fraction], allowed: int) -> str:
        while True:
            # reduced costs for maximisation: c_j - c_B B^-1 A_j
            entering = None
            for j in range(allowed):
                if j in basis:
                    continue
                rc = cost[j] - sum((cost[basis[i]] * T[i][j] for i in range(len(T))), Fraction(0))
                if rc > 0:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            best = None
            for i in range(len(T)):
                a = T[i][entering]
                if a > 0:
                    ratio = T[i][-1] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return UNBOUNDED
            pivot(best[1], entering)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1, n + m)
    if sum((T[i][-1] for i in range(m) if basis[i] >= n), Fraction(0)) > 0:
        return LPResult(LP_INFEASIBLE)
    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            pivot(i, col)
        i += 1
    T = [row[:n] + [row[-1]] for row in T]
    cost = [Fraction(v) for v in c]
    status = run(cost, n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    return LPResult(OPTIMAL, x, sum((ci * xi for ci, xi in zip(cost, x)), Fraction(0)))


@dataclass(frozen=True)
class SolutionForm:
    """x = particular + sum_k t_k directions[k] parametrising {x : U x = [1]}."""

    particular: list[Fraction]
    directions: list[list[Fraction]]
    free: list[int]

    def pinned(self) -> list[int]:
        """Coordinates that do not depend on any parameter."""
        return [i for i in range(len(self.particular)) if all(d[i] == 0 for d in self.directions)]

    def render(self) -> str:
        names = list(ascii_lowercase)
        parts = []
        for i, p in enumerate(self.particular):
            text = str(p) if p or all(d[i] == 0 for d in self.directions) else ""
            for name, d in zip(names, self.directions):
                coef = d[i]
                if not coef:
                    continue
                mag = "" if abs(coef) == 1 else f"{abs(coef)}*"
                if not text:
                    text = f"{'-' if coef < 0 else ''}{mag}{name}"
                else:
                    text += f" {'-' if coef < 0 else '+'} {mag}{name}"
            parts.append(text)
        return "(" + ", ".join(parts) + ")"

    def to_dict(self) -> dict:
        return {
            "particular": [str(v) for v in self.particular],
            "directions": [[str(v) for v in d] for d in self.directions],
            "free": self.free,
            "pinned": self.pinned(),
            "text": self.render(),
        }


@dataclass(frozen=True)
class FeasibilityResult:
    status: str
    witness: list[Fraction] | None = None
    lam: Fraction | None = None
    solution_form: SolutionForm | None = None
    certificate: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "witness": [str(v) for v in self.witness] if self.witness else None,
            "lambda": str(self.lam) if self.lam is not None else None,
            "solution_form": self.solution_form.to_dict() if self.solution_form else None,
            "certificate": self.certificate or None,
        }


def is_psd(U: Sequence[Sequence]) -> bool:
    """Exact positive semidefiniteness by symmetric elimination."""
    M = [[Fraction(v) for v in row] for row in U]
    n = len(M)
    if any(M[i][j] != M[j][i] for i in range(n) for j in range(n)):
        return False
    active = list(range(n))
    while active:
        p = active[0]
        if M[p][p] < 0:
            return False
        if M[p][p] == 0:
            if any(M[p][j] != 0 for j in active):
                return False
            active.pop(0)
            continue
        for i in active[1:]:
            f = M[i][p] / M[p][p]
            if f:
                for j in active:
                    M[i][j] -= f * M[p][j]
        active.pop(0)
    return True


def verify_witness(U: Sequence[Sequence], x: Sequence, lam) -> bool:
    lam = Fraction(lam)
    Ux = linalg.matvec(linalg.to_matrix(U), [Fraction(v) for v in x])
    return all(v == lam for v in Ux) and all(Fraction(v) > 0 for v in x)


def _max_min_lp(U: linalg.Matrix, rhs: Fraction) -> LPResult:
    """max t s.t. U (y + t 1) = rhs 1, t <= 1, y, t >= 0."""
    r = len(U)
    row_sums = [sum(row, Fraction(0)) for row in U]
    # variables: y_1..y_r, t, slack
    A = [U[i][:] + [row_sums[i], Fraction(0)] for i in range(r)]
    A.append([Fraction(0)] * r + [Fraction(1), Fraction(1)])
    b = [rhs] * r + [Fraction(1)]
    c = [Fraction(0)] * r + [Fraction(1), Fraction(0)]
    return simplex_max(c, A, b)


def solve_positive(U: Sequence[Sequence]) -> FeasibilityResult:
    """Decide whether U x = lambda [1] has a solution with every x_i > 0."""
    if not U:
        raise ValueError("empty Gram matrix")
    M = linalg.to_matrix(U)
    r = len(M)
    if any(len(row) != r for row in M):
        raise ValueError("Gram matrix must be square")
    lp1 = _max_min_lp(M, Fraction(1))
    if lp1.status == OPTIMAL and lp1.value > 0:
        t = lp1.value
        x = [lp1.x[i] + t for i in range(r)]
        return FeasibilityResult(FEASIBLE_POSITIVE, witness=x, lam=Fraction(1))
    lp0 = _max_min_lp(M, Fraction(0))
    if lp0.status == OPTIMAL and lp0.value > 0:
        t = lp0.value
        x = [lp0.x[i] + t for i in range(r)]
        return FeasibilityResult(FEASIBLE_ZERO, witness=x, lam=Fraction(0))

    ones = [Fraction(1)] * r
    sol = linalg.solve_affine(M, ones)
    if sol is None:
        y = linalg.left_null_witness(M, ones)
        cert = {"kind": "inconsistent", "farkas": [str(v) for v in y]}
        return FeasibilityResult(INFEASIBLE, certificate=cert)
    form = SolutionForm(*sol)
    bad = [i for i in form.pinned() if form.particular[i] <= 0]
    if bad:
        cert = {"kind": "pinned", "coordinates": {str(i + 1): str(form.particular[i]) for i in bad}}
    else:
        best = str(lp1.value) if lp1.status == OPTIMAL else None
        cert = {"kind": "max_min_coordinate", "value": best, "lp_status": lp1.status}
    return FeasibilityResult(INFEASIBLE, solution_form=form, certificate=cert)
