"""Ricci operator of the canonical metric and the soliton test Ric^c = cI + D."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .algebra import BracketError, ComplexStructure, LieBracket, pi_action, standard_J, tensor_inner
from .linalg import Matrix


@dataclass(frozen=True)
class RicciData:
    ric: Matrix
    ric_c: Matrix
    scal: Fraction

    @property
    def ric_c_norm2(self) -> Fraction:
        """tr (Ric^c)^2, the functional minimal metrics minimise."""
        return linalg.trace(linalg.matmul(self.ric_c, self.ric_c))


@dataclass(frozen=True)
class SolitonDecomposition:
    exists: bool
    c: Fraction | None = None
    D: Matrix | None = None
    defect: LieBracket | None = None


def ricci_operator(mu: LieBracket) -> Matrix:
    """Ricci operator of the orthonormal basis metric on a nilpotent bracket.

    <Ric X, Y> = -1/2 sum <mu(X,e_i),e_j><mu(Y,e_i),e_j>
                 + 1/4 sum <mu(e_i,e_j),X><mu(e_i,e_j),Y>
    """
    d = mu.dim
    c = mu.tensor
    ric = linalg.zeros(d)
    half, quarter = Fraction(1, 2), Fraction(1, 4)
    # flatten the (i, j) index of both sums once
    rows_out = [[c[a][i][j] for i in range(d) for j in range(d)] for a in range(d)]
    rows_in = [[c[i][j][a] for i in range(d) for j in range(d)] for a in range(d)]
    for a in range(d):
        for b in range(a, d):
            s_out = sum((x * y for x, y in zip(rows_out[a], rows_out[b]) if x and y), Fraction(0))
            s_in = sum((x * y for x, y in zip(rows_in[a], rows_in[b]) if x and y), Fraction(0))
            v = -half * s_out + quarter * s_in
            ric[a][b] = ric[b][a] = v
    return ric


def complexified(ric: Matrix, J: ComplexStructure) -> Matrix:
    """Ric^c = 1/2 (Ric - J Ric J)."""
    jm = J.matrix
    jrj = linalg.matmul(linalg.matmul(jm, ric), jm)
    return [[(x - y) / 2 for x, y in zip(r1, r2)] for r1, r2 in zip(ric, jrj)]


def ricci_data(mu: LieBracket, J: ComplexStructure | None = None) -> RicciData:
    J = J or standard_J(mu)
    ric = ricci_operator(mu)
    ric_c = complexified(ric, J)
    return RicciData(ric=ric, ric_c=ric_c, scal=linalg.trace(ric))


def ricci_complexified(mu: LieBracket, J: ComplexStructure | None = None) -> RicciData:
    return ricci_data(mu, J)


def soliton_decomposition(mu: LieBracket, J: ComplexStructure | None = None) -> SolitonDecomposition:
    """Decide whether Ric^c = c I + D with D a derivation, exactly.

    Since pi(I) mu = -mu, the derivation defect of Ric^c - cI is
    pi(Ric^c) mu + c mu; the only candidate c is the orthogonal projection.
    """
    if mu.is_zero():
        raise BracketError("soliton decomposition needs a nonzero bracket")
    rc = ricci_data(mu, J).ric_c
    p = pi_action(rc, mu)
    c = -tensor_inner(p, mu) / tensor_inner(mu, mu)
    defect = p + mu.scaled(c)
    if not defect.is_zero():
        return SolitonDecomposition(False, defect=defect)
    D = [row[:] for row in rc]
    for i in range(mu.dim):
        D[i][i] -= c
    return SolitonDecomposition(True, c=c, D=D)
