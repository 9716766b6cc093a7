"""Weights of a bracket under the diagonal complex torus, roots, J-niceness, Gram matrix."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator

from .algebra import BracketError, ComplexStructure, LieBracket, act, complex_index, standard_J
from .ricci import ricci_data

Weight = tuple[int, ...]

NICE_BASIS = "NiceBasis"
ROOT_DIFFERENCE = "RootDifference"
DIAGONALITY_EVIDENCE = "DiagonalityEvidence"
INCONCLUSIVE = "Inconclusive"

# positive diagonal scalings are drawn as ratios of these
_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True)
class WeightRow:
    weight: Weight
    source: tuple[int, int, int]


@dataclass(frozen=True)
class WeightList:
    n: int
    rows: tuple[WeightRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[WeightRow]:
        return iter(self.rows)

    @property
    def weights(self) -> list[Weight]:
        return [r.weight for r in self.rows]


@dataclass(frozen=True)
class JNiceStatus:
    status: str
    samples: int | None = None
    seed: int | None = None
    failing_sample: int | None = None

    @property
    def conclusive(self) -> bool:
        return self.status != INCONCLUSIVE

    def to_dict(self) -> dict:
        out = {"status": self.status}
        if self.status in (DIAGONALITY_EVIDENCE, INCONCLUSIVE) and self.samples is not None:
            out.update(samples=self.samples, seed=self.seed)
        if self.failing_sample is not None:
            out["failing_sample"] = self.failing_sample
        return out


def weight_of(i: int, j: int, k: int, n: int) -> Weight:
    """e_K - e_I - e_J on complex-diagonal coordinates, K, I, J the complex indices."""
    if not (1 <= i < j <= 2 * n and 1 <= k <= 2 * n):
        raise BracketError(f"indices ({i}, {j}, {k}) out of range for n = {n}")
    v = [0] * n
    v[complex_index(k) - 1] += 1
    v[complex_index(i) - 1] -= 1
    v[complex_index(j) - 1] -= 1
    return tuple(v)


def weight_support(mu: LieBracket) -> WeightList:
    """One row per nonzero structure constant, ordered by (i, j, k)."""
    n = mu.n
    rows = tuple(WeightRow(weight_of(i, j, k, n), (i, j, k)) for (i, j, k) in mu.entries)
    return WeightList(n, rows)


def dot(a: Weight, b: Weight) -> int:
    return sum(x * y for x, y in zip(a, b))


def gram_matrix(w: WeightList) -> list[list[int]]:
    if not len(w):
        raise ValueError("Gram matrix of an empty weight list")
    ws = w.weights
    return [[dot(a, b) for b in ws] for a in ws]


def roots(n: int) -> frozenset[Weight]:
    out = set()
    for a in range(n):
        for b in range(a + 1, n):
            v = [0] * n
            v[a], v[b] = 1, -1
            out.add(tuple(v))
            out.add(tuple(-x for x in v))
    return frozenset(out)


def nice_basis_test(mu: LieBracket) -> bool:
    """Every [e_i, e_j] is a multiple of one e_k, and pairs sharing a target are disjoint."""
    targets: dict[tuple[int, int], list[int]] = {}
    for (i, j, k) in mu.entries:
        targets.setdefault((i, j), []).append(k)
    by_target: dict[int, list[tuple[int, int]]] = {}
    for pair, ks in targets.items():
        if len(ks) > 1:
            return False
        by_target.setdefault(ks[0], []).append(pair)
    for pairs in by_target.values():
        for p, q in combinations(pairs, 2):
            if set(p) & set(q):
                return False
    return True


def root_difference_test(w: WeightList, phi: frozenset[Weight] | None = None) -> bool:
    phi = roots(w.n) if phi is None else phi
    distinct = sorted(set(w.weights))
    for a, b in combinations(distinct, 2):
        diff = tuple(x - y for x, y in zip(a, b))
        if diff in phi:
            return False
    return True


def in_torus_algebra(m) -> bool:
    """True iff the matrix is diagonal with equal entries on each complex pair."""
    d = len(m)
    for a in range(d):
        for b in range(d):
            if a != b and m[a][b] != 0:
                return False
    return all(m[p][p] == m[p + 1][p + 1] for p in range(0, d, 2))


def sample_scaling(n: int, seed: int, index: int) -> list[Fraction]:
    """Positive rational torus element for sample ``index``; deterministic in (seed, index)."""
    rng = random.Random(f"{seed}:{index}")
    out = []
    for _ in range(n):
        p, q = rng.sample(_PRIMES, 2)
        out.append(Fraction(p, q) if rng.random() < 0.5 else Fraction(p * rng.choice(_PRIMES), q))
    return out


def diagonality_test(mu: LieBracket, J: ComplexStructure | None = None, samples: int = 32, seed: int = 0) -> JNiceStatus:
    """Randomised check that Ric^c(g . mu) lies in the torus algebra for positive diagonal g.

    Off-diagonal entries of Ric^c(g . mu) are polynomials in the squared
    scalings, so vanishing at many random points is strong evidence (not proof).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    J = J or standard_J(mu)
    for s in range(samples):
        d = sample_scaling(mu.n, seed, s)
        g = [[Fraction(0)] * mu.dim for _ in range(mu.dim)]
        for p, x in enumerate(d):
            g[2 * p][2 * p] = g[2 * p + 1][2 * p + 1] = x
        if not in_torus_algebra(ricci_data(act(g, mu), J).ric_c):
            return JNiceStatus(INCONCLUSIVE, samples, seed, failing_sample=s)
    return JNiceStatus(DIAGONALITY_EVIDENCE, samples, seed)


def jnice_status(mu: LieBracket, J: ComplexStructure | None = None, samples: int = 32, seed: int = 0) -> JNiceStatus:
    if nice_basis_test(mu):
        return JNiceStatus(NICE_BASIS)
    if root_difference_test(weight_support(mu)):
        return JNiceStatus(ROOT_DIFFERENCE)
    return diagonality_test(mu, J, samples, seed)
