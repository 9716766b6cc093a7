"""Search the GL_n(C)-orbit of a bracket for a representative in a J-nice subspace.

Existence of a minimal compatible metric is invariant under the GL_n(C)
action, so the positive-solution criterion may be applied to any point of
the orbit.  When the weight subspace of the given bracket is not J-nice we
try canonical forms.

Currently handled: complex dimension 3 with a single non-closed form
dw^k depending only on the two closed ones (the 2-step families with a
one-dimensional complex centre).  Writing
    dw^k = delta w^{ab} + sum H_pq w^{p qbar},
a change w = A eta acts on H by H -> A^T H conj(A).  Splitting H = P + iQ
into Hermitian parts, we reduce the Hermitian pencil (P, Q): real
eigenvalues give a diagonal H, a complex-conjugate pair gives an
anti-diagonal H, and a defective double eigenvalue gives H with one
isotropic vector.  Exactness requires the pencil discriminant to be a
rational square (up to sign) or the eigenvectors live over Q(sqrt d), which
``QuadraticSurd`` handles.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import LieBracket, act, integrability_failure
from .exact import GaussianRational, I, QuadraticSurd, sqrt_exact
from .linalg import Matrix
from .structeq import HOL, MIX, change_coframe, complexify, coframe_matrix, realify

G = GaussianRational


@dataclass(frozen=True)
class Representative:
    bracket: LieBracket
    g: Matrix | None
    method: str
    coframe: list[list[GaussianRational]] | None = None


def _herm(H, u, v) -> GaussianRational:
    """u^T H conj(v)."""
    s = G(0)
    for i in range(2):
        for j in range(2):
            s = s + u[i] * H[i][j] * v[j].conjugate()
    return s


def _left_kernel(M) -> list[GaussianRational]:
    """Nonzero a with a^T M = 0 for a singular 2x2 M."""
    (m11, m12), (m21, m22) = M
    cand = [m21, -m11]
    if not any(cand):
        cand = [m22, -m12]
    if not any(cand):
        cand = [G(1), G(0)]
    return cand


def _det2(M) -> GaussianRational:
    return M[0][0] * M[1][1] - M[0][1] * M[1][0]


def _pencil_basis(H):
    """Columns (a, b) bringing H into canonical congruence form, plus a label."""
    Hs = [[H[j][i].conjugate() for j in range(2)] for i in range(2)]
    P = [[(H[i][j] + Hs[i][j]) / 2 for j in range(2)] for i in range(2)]
    Q = [[(H[i][j] - Hs[i][j]) / (2 * I) for j in range(2)] for i in range(2)]
    kappa = None
    for k in range(0, 8):
        Pk = [[P[i][j] + k * Q[i][j] for j in range(2)] for i in range(2)]
        if _det2(Pk):
            kappa, P = k, Pk
            break
    if kappa is None:
        return None
    # det(Q - lam P) = a lam^2 + b lam + c with real coefficients
    a = _det2(P)
    c = _det2(Q)
    b = -(Q[0][0] * P[1][1] + P[0][0] * Q[1][1] - Q[0][1] * P[1][0] - P[0][1] * Q[1][0])
    if a.im or b.im or c.im:
        raise ArithmeticError("Hermitian pencil with non-real characteristic polynomial")
    a, b, c = a.re, b.re, c.re
    disc = b * b - 4 * a * c

    def kernel(lam):
        M = [[Q[i][j] - lam * P[i][j] for j in range(2)] for i in range(2)]
        return M, _left_kernel(M)

    if disc > 0:
        r = sqrt_exact(disc)
        lams = [G((-b + r) / (2 * a)), G((-b - r) / (2 * a))]
        return [kernel(lam)[1] for lam in lams], "pencil-diagonal"
    if disc < 0:
        r = sqrt_exact(-disc)
        lam = G(-b / (2 * a), r / (2 * a))
        return [kernel(lam)[1], kernel(lam.conjugate())[1]], "pencil-antidiagonal"
    lam = G(-b / (2 * a))
    M, va = kernel(lam)
    if not any(x for row in M for x in row):
        # Q proportional to P: any P-orthogonal basis diagonalises both
        for cand in ([G(1), G(0)], [G(0), G(1)], [G(1), G(1)], [G(1), I]):
            if _herm(P, cand, cand):
                va = cand
                break
        w = [sum((va[i] * P[i][j] for i in range(2)), G(0)) for j in range(2)]
        vb = [(-w[1]).conjugate(), w[0].conjugate()]
        return [va, vb], "pencil-diagonal"
    vb = [G(0), G(1)] if va[0] else [G(1), G(0)]
    return [va, vb], "pencil-defective"


def _single_equation(eqs):
    active = [k for k in range(1, eqs.n + 1) if eqs.d(k)]
    if eqs.n != 3 or len(active) != 1:
        return None
    k0 = active[0]
    others = [k for k in range(1, 4) if k != k0]
    for (_, p, q) in eqs.d(k0):
        if k0 in (p, q):
            return None
    return k0, others


def pencil_representative(mu: LieBracket) -> Representative | None:
    if mu.dim != 6 or mu.is_zero() or integrability_failure(mu) is not None:
        return None
    if any(not isinstance(c, Fraction) for c in mu.entries.values()):
        return None
    eqs = complexify(mu)
    found = _single_equation(eqs)
    if found is None:
        return None
    k0, (p, q) = found
    terms = eqs.d(k0)
    H = [[terms.get((MIX, x, y), G(0)) for y in (p, q)] for x in (p, q)]
    delta = terms.get((HOL, p, q), G(0))
    basis = _pencil_basis(H)
    if basis is None:
        return None
    (va, vb), label = basis
    B = [[va[0], vb[0]], [va[1], vb[1]]]
    if not _det2(B):
        return None
    Hn = [[_herm(H, col1, col2) for col2 in (va, vb)] for col1 in (va, vb)]
    dn = delta * _det2(B)
    # diagonal rescaling: make the first nonzero diagonal entry and delta real
    lam1, lam2, rho = G(1), G(1), G(1)
    if label == "pencil-diagonal":
        if not Hn[0][0] and Hn[1][1]:
            B = [[B[0][1], B[0][0]], [B[1][1], B[1][0]]]
            Hn = [[Hn[1][1], Hn[1][0]], [Hn[0][1], Hn[0][0]]]
            dn = -dn
        if Hn[0][0]:
            rho = Hn[0][0]
            if dn:
                lam1 = (dn / Hn[0][0]).conjugate()
        elif dn:
            lam1 = dn.conjugate()
    A = [[G(0)] * 3 for _ in range(3)]
    for r_, x in enumerate((p, q)):
        A[x - 1][p - 1] = B[r_][0] * lam1
        A[x - 1][q - 1] = B[r_][1] * lam2
    A[k0 - 1][k0 - 1] = rho
    new = realify(change_coframe(eqs, A))
    g = coframe_matrix(A)
    if act(g, mu) != new:
        raise ArithmeticError("coframe change disagrees with the group action")
    return Representative(new, g, label, A)
