"""Exact brackets on R^{2n} with the standard complex structure.

A bracket is stored through its structure constants ``c[i, j, k]`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k`` for ``i < j`` (1-based indices).  The
complex structure is always ``J e_{2p-1} = e_{2p}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from . import linalg
from .linalg import Matrix, Vector, frac

Triple = tuple[int, int, int]


class BracketError(ValueError):
    """Raised for malformed bracket data or incompatible operands."""


def complex_index(k: int) -> int:
    """Complex coordinate (1-based) carrying the real basis vector ``e_k``."""
    return (k + 1) // 2


@dataclass(frozen=True, eq=False)
class LieBracket:
    """Antisymmetric bilinear map on R^dim given by sparse rational constants.

    ``entries`` maps ``(i, j, k)`` with ``i < j`` to a nonzero ``Fraction``.
    The Jacobi identity is not enforced here; see :func:`validate`.
    """

    dim: int
    entries: Mapping[Triple, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 2 or self.dim % 2:
            raise BracketError(f"dimension must be even and positive, got {self.dim}")
        clean: dict[Triple, Fraction] = {}
        for (i, j, k), c in self.entries.items():
            c = frac(c)
            for idx in (i, j, k):
                if not 1 <= idx <= self.dim:
                    raise BracketError(f"index {idx} out of range 1..{self.dim}")
            if i >= j:
                raise BracketError(f"entries need i < j, got ({i}, {j}, {k})")
            if c != 0:
                clean[(i, j, k)] = c
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[tuple[int, int], Mapping[int, object]]):
        """Build from ``{(i, j): {k: c}}``; pairs with ``i > j`` are flipped with a sign."""
        acc: dict[Triple, Fraction] = {}
        for (i, j), targets in brackets.items():
            if i == j:
                raise BracketError(f"[e{i}, e{i}] must vanish")
            sign = 1 if i < j else -1
            a, b = min(i, j), max(i, j)
            for k, c in targets.items():
                acc[(a, b, k)] = acc.get((a, b, k), Fraction(0)) + sign * frac(c)
        return cls(dim, acc)

    @classmethod
    def from_tensor(cls, c: Sequence[Sequence[Sequence[Fraction]]]) -> "LieBracket":
        dim = len(c)
        entries = {
            (i + 1, j + 1, k + 1): c[i][j][k]
            for i in range(dim)
            for j in range(i + 1, dim)
            for k in range(dim)
            if c[i][j][k] != 0
        }
        return cls(dim, entries)

    @property
    def n(self) -> int:
        return self.dim // 2

    def is_zero(self) -> bool:
        return not self.entries

    def coefficient(self, i: int, j: int, k: int) -> Fraction:
        if i == j:
            return Fraction(0)
        if i < j:
            return self.entries.get((i, j, k), Fraction(0))
        return -self.entries.get((j, i, k), Fraction(0))

    @cached_property
    def tensor(self) -> list[list[list[Fraction]]]:
        """Dense 0-based constants ``c[i][j][k]``, antisymmetric in ``i, j``."""
        d = self.dim
        c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        for (i, j, k), v in self.entries.items():
            c[i - 1][j - 1][k - 1] = v
            c[j - 1][i - 1][k - 1] = -v
        return c

    def __iter__(self) -> Iterator[tuple[Triple, Fraction]]:
        return iter(self.entries.items())

    def __eq__(self, other):
        if not isinstance(other, LieBracket):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __hash__(self):
        return hash((self.dim, tuple(self.entries.items())))

    def __repr__(self):
        body = ", ".join(f"[e{i},e{j}]_{k}={c}" for (i, j, k), c in self.entries.items())
        return f"LieBracket(dim={self.dim}, {body or '0'})"

    def scaled(self, s) -> "LieBracket":
        s = frac(s)
        return LieBracket(self.dim, {key: s * c for key, c in self.entries.items()})

    def __add__(self, other: "LieBracket") -> "LieBracket":
        _same_dim(self, other)
        acc = dict(self.entries)
        for key, c in other.entries.items():
            acc[key] = acc.get(key, Fraction(0)) + c
        return LieBracket(self.dim, acc)

    def __neg__(self) -> "LieBracket":
        return self.scaled(-1)

    def __sub__(self, other: "LieBracket") -> "LieBracket":
        return self + (-other)


def _same_dim(a: LieBracket, b: LieBracket) -> None:
    if a.dim != b.dim:
        raise BracketError(f"dimension mismatch: {a.dim} vs {b.dim}")


@dataclass(frozen=True)
class ComplexStructure:
    """The standard complex structure J e_{2p-1} = e_{2p} on R^dim."""

    dim: int

    def __post_init__(self):
        if self.dim < 2 or self.dim % 2:
            raise BracketError(f"dimension must be even and positive, got {self.dim}")

    @cached_property
    def matrix(self) -> Matrix:
        m = linalg.zeros(self.dim)
        for p in range(0, self.dim, 2):
            m[p + 1][p] = Fraction(1)
            m[p][p + 1] = Fraction(-1)
        return m

    def apply(self, v: Sequence[Fraction]) -> Vector:
        out = [Fraction(0)] * self.dim
        for p in range(0, self.dim, 2):
            out[p] = -v[p + 1]
            out[p + 1] = v[p]
        return out

    def commutes(self, g: Matrix) -> bool:
        return linalg.matmul(g, self.matrix) == linalg.matmul(self.matrix, g)


def standard_J(mu_or_dim) -> ComplexStructure:
    dim = mu_or_dim.dim if isinstance(mu_or_dim, LieBracket) else int(mu_or_dim)
    return ComplexStructure(dim)


def basis_vector(dim: int, k: int) -> Vector:
    """``e_k`` (1-based) as an exact vector."""
    v = [Fraction(0)] * dim
    v[k - 1] = Fraction(1)
    return v


def evaluate(mu: LieBracket, x: Sequence, y: Sequence) -> Vector:
    """mu(X, Y) by bilinear, antisymmetric extension."""
    d = mu.dim
    if len(x) != d or len(y) != d:
        raise BracketError(f"vectors must have length {d}")
    x = [frac(v) for v in x]
    y = [frac(v) for v in y]
    out = [Fraction(0)] * d
    for (i, j, k), c in mu.entries.items():
        w = x[i - 1] * y[j - 1] - x[j - 1] * y[i - 1]
        if w:
            out[k - 1] += c * w
    return out


def _basis_bracket(mu: LieBracket, i: int, j: int) -> Vector:
    return list(mu.tensor[i][j])


@dataclass(frozen=True)
class ValidationReport:
    antisymmetric: bool
    jacobi: bool
    nilpotent: bool
    step: int | None
    integrable: bool
    abelian_complex: bool
    jacobi_failure: Triple | None = None
    integrability_failure: tuple[int, int] | None = None

    @property
    def valid(self) -> bool:
        return self.antisymmetric and self.jacobi and self.nilpotent and self.integrable

    def to_dict(self) -> dict:
        return {
            "antisymmetric": self.antisymmetric,
            "jacobi": self.jacobi,
            "jacobi_failure": list(self.jacobi_failure) if self.jacobi_failure else None,
            "nilpotent": self.nilpotent,
            "step": self.step,
            "integrable": self.integrable,
            "integrability_failure": (
                list(self.integrability_failure) if self.integrability_failure else None
            ),
            "abelian_complex": self.abelian_complex,
            "valid": self.valid,
        }


def jacobi_failure(mu: LieBracket) -> Triple | None:
    """First basis triple (1-based) violating the Jacobi identity, if any."""
    d = mu.dim
    c = mu.tensor
    for a in range(d):
        for b in range(a + 1, d):
            for e in range(b + 1, d):
                # [[a,b],e] + [[b,e],a] + [[e,a],b]
                for k in range(d):
                    s = Fraction(0)
                    for m in range(d):
                        s += c[a][b][m] * c[m][e][k] + c[b][e][m] * c[m][a][k] + c[e][a][m] * c[m][b][k]
                    if s:
                        return (a + 1, b + 1, e + 1)
    return None


def lower_central_series(mu: LieBracket, max_terms: int | None = None) -> list[int]:
    """Dimensions of C^0 = n, C^{m+1} = [n, C^m] until zero or stabilisation."""
    d = mu.dim
    current = linalg.identity(d)
    dims = [d]
    limit = max_terms if max_terms is not None else d + 1
    while current and len(dims) <= limit:
        spanning = []
        for a in range(d):
            ea = basis_vector(d, a + 1)
            for v in current:
                w = evaluate(mu, ea, v)
                if any(w):
                    spanning.append(w)
        if spanning:
            red, piv = linalg.rref(spanning)
            nxt = red[: len(piv)]
        else:
            nxt = []
        dims.append(len(nxt))
        if len(nxt) == len(current):
            break
        current = nxt
    return dims


def nilpotency_step(mu: LieBracket) -> int | None:
    """Length of the lower central series; 1 for the zero bracket, None if not nilpotent."""
    dims = lower_central_series(mu)
    if dims[-1] != 0:
        return None
    return len(dims) - 1


def integrability_failure(mu: LieBracket, J: ComplexStructure | None = None) -> tuple[int, int] | None:
    """First pair (1-based) where the Nijenhuis-type identity fails."""
    J = J or standard_J(mu)
    d = mu.dim
    for a in range(1, d + 1):
        for b in range(a + 1, d + 1):
            x, y = basis_vector(d, a), basis_vector(d, b)
            jx, jy = J.apply(x), J.apply(y)
            lhs = evaluate(mu, jx, jy)
            rhs = [
                p + q + r
                for p, q, r in zip(
                    evaluate(mu, x, y), J.apply(evaluate(mu, jx, y)), J.apply(evaluate(mu, x, jy))
                )
            ]
            if lhs != rhs:
                return (a, b)
    return None


def is_abelian_complex(mu: LieBracket, J: ComplexStructure | None = None) -> bool:
    J = J or standard_J(mu)
    d = mu.dim
    for a in range(1, d + 1):
        for b in range(a + 1, d + 1):
            x, y = basis_vector(d, a), basis_vector(d, b)
            if evaluate(mu, J.apply(x), J.apply(y)) != evaluate(mu, x, y):
                return False
    return True


def validate(mu: LieBracket) -> ValidationReport:
    J = standard_J(mu)
    jf = jacobi_failure(mu)
    step = nilpotency_step(mu)
    intf = integrability_failure(mu, J)
    return ValidationReport(
        antisymmetric=True,  # guaranteed by storage
        jacobi=jf is None,
        nilpotent=step is not None,
        step=step,
        integrable=intf is None,
        abelian_complex=is_abelian_complex(mu, J),
        jacobi_failure=jf,
        integrability_failure=intf,
    )


def _check_matrix(g: Matrix, dim: int, what: str) -> None:
    if len(g) != dim or any(len(row) != dim for row in g):
        raise BracketError(f"{what} must be {dim}x{dim}")


def act(g: Sequence[Sequence], mu: LieBracket) -> LieBracket:
    """g . mu (X, Y) = g mu(g^{-1} X, g^{-1} Y) for invertible J-commuting g."""
    g = linalg.to_matrix(g)
    d = mu.dim
    _check_matrix(g, d, "g")
    if not standard_J(mu).commutes(g):
        raise BracketError("g does not commute with J")
    if linalg.is_diagonal(g):
        diag = [g[i][i] for i in range(d)]
        if any(x == 0 for x in diag):
            raise BracketError("g is singular")
        return LieBracket(
            d,
            {(i, j, k): c * diag[k - 1] / (diag[i - 1] * diag[j - 1]) for (i, j, k), c in mu.entries.items()},
        )
    try:
        h = linalg.inverse(g)
    except ValueError:
        raise BracketError("g is singular") from None
    c = mu.tensor
    out = {}
    for i in range(d):
        for j in range(i + 1, d):
            # mu(h e_i, h e_j)
            w = [Fraction(0)] * d
            for a in range(d):
                hai = h[a][i]
                if not hai:
                    continue
                for b in range(d):
                    hbj = h[b][j]
                    if not hbj:
                        continue
                    f = hai * hbj
                    cab = c[a][b]
                    for k in range(d):
                        if cab[k]:
                            w[k] += f * cab[k]
            gw = linalg.matvec(g, w)
            for k in range(d):
                if gw[k]:
                    out[(i + 1, j + 1, k + 1)] = gw[k]
    return LieBracket(d, out)


def pi_action(alpha: Sequence[Sequence], mu: LieBracket) -> LieBracket:
    """pi(alpha) mu = alpha mu(., .) - mu(alpha ., .) - mu(., alpha .)."""
    a = linalg.to_matrix(alpha)
    d = mu.dim
    _check_matrix(a, d, "alpha")
    c = mu.tensor
    out = {}
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(d):
                s = Fraction(0)
                for m in range(d):
                    if c[i][j][m]:
                        s += a[k][m] * c[i][j][m]
                    if a[m][i]:
                        s -= a[m][i] * c[m][j][k]
                    if a[m][j]:
                        s -= a[m][j] * c[i][m][k]
                if s:
                    out[(i + 1, j + 1, k + 1)] = s
    return LieBracket(d, out)


def tensor_inner(mu: LieBracket, lam: LieBracket) -> Fraction:
    """<mu, lam> summed over all ordered basis pairs (each unordered pair counts twice)."""
    _same_dim(mu, lam)
    small, big = (mu, lam) if len(mu.entries) <= len(lam.entries) else (lam, mu)
    s = Fraction(0)
    for key, c in small.entries.items():
        other = big.entries.get(key)
        if other is not None:
            s += c * other
    return 2 * s


def weight_vector(dim: int, i: int, j: int, k: int) -> LieBracket:
    """v_ijk = (e^i wedge e^j) tensor e_k."""
    return LieBracket(dim, {(i, j, k): Fraction(1)})
