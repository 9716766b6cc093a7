"""Complex structure equations  <->  real structure constants.

DSL, one equation per line or separated by ``;``::

    s = 1/2                      # parameter binding
    dw1 = 0
    dw3 = w12 + w1~1 + w1~2 + (t + s*i)*w2~2

``wAB`` is w^A ^ w^B and ``wA~B`` is w^A ^ conj(w^B); indices are single
digits.  Coefficients are complex rational expressions in ``i``, numbers
and bound parameters.  ``#`` starts a comment.

Real frame convention: w^k = e^{2k-1} - i e^{2k}, so that
de^{2k-1} = Re dw^k and de^{2k} = -Im dw^k, and
de^m = -sum_{p<q} c_pq^m e^p ^ e^q  <=>  [e_p, e_q] = sum_m c_pq^m e_m.
"""
from __future__ import annotations

import re
from itertools import product
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .algebra import BracketError, LieBracket, act, validate
from .exact import GaussianRational, I
from .linalg import Matrix
from .weights import weight_of

HOL, MIX, ANTI = "hol", "mix", "anti"
TermKey = tuple[str, int, int]

_ZERO = GaussianRational(0)


class StructEqSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class StructureEquations:
    """dw^k for k = 1..n as sums over w^{ab} (hol), w^{a bbar} (mix), wbar^{ab} (anti)."""

    n: int
    equations: Mapping[int, Mapping[TermKey, GaussianRational]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, terms in self.equations.items():
            if not 1 <= k <= self.n:
                raise ValueError(f"dw{k} out of range for n = {self.n}")
            acc: dict[TermKey, GaussianRational] = {}
            for (kind, a, b), c in terms.items():
                c = GaussianRational.of(c)
                if not (1 <= a <= self.n and 1 <= b <= self.n):
                    raise ValueError(f"form index out of range in dw{k}")
                if kind in (HOL, ANTI):
                    if a == b:
                        continue
                    if a > b:
                        a, b, c = b, a, -c
                elif kind != MIX:
                    raise ValueError(f"unknown term kind {kind!r}")
                key = (kind, a, b)
                acc[key] = acc.get(key, _ZERO) + c
            acc = {key: c for key, c in sorted(acc.items(), key=lambda kv: _key_order(kv[0])) if c}
            if acc:
                clean[k] = acc
        object.__setattr__(self, "equations", dict(sorted(clean.items())))

    def d(self, k: int) -> Mapping[TermKey, GaussianRational]:
        return self.equations.get(k, {})

    def __eq__(self, other):
        if not isinstance(other, StructureEquations):
            return NotImplemented
        return self.n == other.n and self.equations == other.equations

    def __str__(self):
        return to_text(self)


def _key_order(key: TermKey):
    kind, a, b = key
    return ({HOL: 0, MIX: 1, ANTI: 2}[kind], a, b)


def to_text(eqs: StructureEquations) -> str:
    lines = []
    for k in range(1, eqs.n + 1):
        terms = eqs.d(k)
        if not terms:
            lines.append(f"dw{k} = 0")
            continue
        parts = []
        for (kind, a, b), c in terms.items():
            form = {HOL: f"w{a}{b}", MIX: f"w{a}~{b}", ANTI: f"w~{a}~{b}"}[kind]
            parts.append(form if c == 1 else f"({c})*{form}")
        lines.append(f"dw{k} = " + " + ".join(parts))
    return "\n".join(lines)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<form>w(?P<fa>\d)(?P<bar>~)?(?P<fb>\d))"
    r"|(?P<num>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/()]))"
)


class _Value:
    """Either a pure scalar or a linear combination of 2-forms."""

    __slots__ = ("scalar", "forms")

    def __init__(self, scalar=None, forms=None):
        self.scalar = scalar
        self.forms = forms

    @property
    def is_form(self):
        return self.forms is not None


class _Parser:
    def __init__(self, text: str, line: int, col0: int, params: Mapping[str, object]):
        self.text = text
        self.line = line
        self.col0 = col0
        self.params = params
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise StructEqSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, col0 + pos + 1)
            start = m.start(m.lastgroup) if m.lastgroup else pos
            if m.group("form"):
                self.tokens.append(("form", (int(m.group("fa")), bool(m.group("bar")), int(m.group("fb"))), start))
            elif m.group("num"):
                self.tokens.append(("num", int(m.group("num")), start))
            elif m.group("name"):
                self.tokens.append(("name", m.group("name"), start))
            else:
                self.tokens.append(("op", m.group("op"), start))
            pos = m.end()
        self.i = 0

    def error(self, msg, tok=None):
        col = self.col0 + (tok[2] if tok else len(self.text)) + 1
        raise StructEqSyntaxError(msg, self.line, col)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> _Value:
        if not self.tokens:
            self.error("empty expression")
        v = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()[1]!r}", self.peek())
        return v

    def expr(self) -> _Value:
        v = self.term()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.take()
            rhs = self.term()
            v = self.combine(v, rhs, 1 if tok[1] == "+" else -1, tok)
        return v

    def combine(self, a: _Value, b: _Value, sign: int, tok) -> _Value:
        if a.is_form != b.is_form:
            # "0 + w12" style sums are allowed when the scalar is zero
            if not a.is_form and not a.scalar:
                a = _Value(forms={})
            elif not b.is_form and not b.scalar:
                b = _Value(forms={})
            else:
                self.error("cannot add a scalar to a 2-form", tok)
        if not a.is_form:
            return _Value(scalar=a.scalar + b.scalar * sign)
        out = dict(a.forms)
        for key, c in b.forms.items():
            out[key] = out.get(key, _ZERO) + c * sign
        return _Value(forms=out)

    def term(self) -> _Value:
        v = self.factor()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "*/":
            self.take()
            rhs = self.factor()
            if tok[1] == "*":
                if v.is_form and rhs.is_form:
                    self.error("product of two 2-forms", tok)
                if v.is_form:
                    v, rhs = rhs, v
                if rhs.is_form:
                    v = _Value(forms={k: c * v.scalar for k, c in rhs.forms.items()})
                else:
                    v = _Value(scalar=v.scalar * rhs.scalar)
            else:
                if rhs.is_form:
                    self.error("division by a 2-form", tok)
                if not rhs.scalar:
                    self.error("division by zero", tok)
                if v.is_form:
                    v = _Value(forms={k: c / rhs.scalar for k, c in v.forms.items()})
                else:
                    v = _Value(scalar=v.scalar / rhs.scalar)
        return v

    def factor(self) -> _Value:
        tok = self.take()
        if tok is None:
            self.error("unexpected end of expression")
        kind, val, _ = tok
        if kind == "op" and val in "+-":
            v = self.factor()
            if val == "+":
                return v
            if v.is_form:
                return _Value(forms={k: -c for k, c in v.forms.items()})
            return _Value(scalar=-v.scalar)
        if kind == "op" and val == "(":
            v = self.expr()
            close = self.take()
            if close is None or close[1] != ")":
                self.error("expected ')'", close)
            return v
        if kind == "num":
            return _Value(scalar=GaussianRational(val))
        if kind == "name":
            if val == "i":
                return _Value(scalar=I)
            if val not in self.params:
                self.error(f"unbound parameter {val!r}", tok)
            return _Value(scalar=GaussianRational.of(self.params[val]))
        if kind == "form":
            a, bar, b = val
            key = (MIX, a, b) if bar else (HOL, a, b)
            return _Value(forms={key: GaussianRational(1)})
        self.error(f"unexpected {val!r}", tok)


_EQ_LHS = re.compile(r"^\s*d\s*w\s*(\d+)\s*$")
_PARAM_LHS = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*$")


def parse_equations(text: str, params: Mapping[str, object] | None = None, n: int | None = None) -> StructureEquations:
    """Parse the DSL into normalised structure equations.

    ``params`` override bindings made inside the text.  ``n`` defaults to the
    largest index mentioned.
    """
    bound: dict[str, GaussianRational] = {}
    overrides = {k: GaussianRational.of(_to_exact(v)) for k, v in (params or {}).items()}
    equations: dict[int, dict[TermKey, GaussianRational]] = {}
    max_index = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        for stmt in line.split(";"):
            start_col = col
            col += len(stmt) + 1
            if not stmt.strip():
                continue
            if "=" not in stmt:
                raise StructEqSyntaxError("expected '='", lineno, start_col + 1)
            lhs, rhs = stmt.split("=", 1)
            rhs_col = start_col + len(lhs) + 1
            env = {**bound, **overrides}
            if m := _EQ_LHS.match(lhs):
                k = int(m.group(1))
                if k in equations:
                    raise StructEqSyntaxError(f"duplicate definition of dw{k}", lineno, start_col + 1)
                if k < 1:
                    raise StructEqSyntaxError("form indices start at 1", lineno, start_col + 1)
                value = _Parser(rhs, lineno, rhs_col, env).parse()
                if not value.is_form:
                    if value.scalar:
                        raise StructEqSyntaxError(f"dw{k} must be a 2-form or 0", lineno, rhs_col + 1)
                    value = _Value(forms={})
                for (_, a, b) in value.forms:
                    max_index = max(max_index, a, b)
                equations[k] = value.forms
                max_index = max(max_index, k)
            elif m := _PARAM_LHS.match(lhs):
                name = m.group(1)
                if name == "i":
                    raise StructEqSyntaxError("'i' is the imaginary unit", lineno, start_col + 1)
                value = _Parser(rhs, lineno, rhs_col, env).parse()
                if value.is_form:
                    raise StructEqSyntaxError("parameters must be scalars", lineno, rhs_col + 1)
                bound[name] = value.scalar
            else:
                raise StructEqSyntaxError(f"cannot parse left-hand side {lhs.strip()!r}", lineno, start_col + 1)
    if n is None:
        n = max_index
    if n < 1:
        raise ValueError("no equations given")
    if max_index > n:
        raise ValueError(f"index {max_index} exceeds n = {n}")
    return StructureEquations(n, equations)


def _to_exact(v):
    if isinstance(v, GaussianRational):
        return v
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


# ---------------------------------------------------------------- forms

# symbols 0..n-1 are w^1..w^n, n..2n-1 are their conjugates
OneForm = dict[int, GaussianRational]
TwoForm = dict[tuple[int, int], GaussianRational]


def _wedge(u: Mapping[int, object], v: Mapping[int, object]) -> dict:
    out: dict = {}
    for p, a in u.items():
        for q, b in v.items():
            if p == q:
                continue
            if p < q:
                key, c = (p, q), a * b
            else:
                key, c = (q, p), -(a * b)
            out[key] = out.get(key, 0) + c
    return {k: c for k, c in out.items() if c}


def _terms_to_symbols(terms: Mapping[TermKey, GaussianRational], n: int) -> TwoForm:
    out: TwoForm = {}
    for (kind, a, b), c in terms.items():
        if kind == HOL:
            key = (a - 1, b - 1)
        elif kind == MIX:
            key = (a - 1, n + b - 1)
        else:
            key = (n + a - 1, n + b - 1)
        out[key] = out.get(key, _ZERO) + c
    return out


def _symbols_to_terms(form: TwoForm, n: int) -> dict[TermKey, GaussianRational]:
    out: dict[TermKey, GaussianRational] = {}
    for (x, y), c in form.items():
        if y < n:
            key = (HOL, x + 1, y + 1)
        elif x < n:
            key = (MIX, x + 1, y - n + 1)
        else:
            key = (ANTI, x - n + 1, y - n + 1)
        out[key] = out.get(key, _ZERO) + GaussianRational.of(c)
    return out


def realify(eqs: StructureEquations) -> LieBracket:
    """Real structure constants of the frame e_1..e_2n dual to Re/Im of the w^k."""
    n = eqs.n
    # w^a = e^{2a-1} - i e^{2a}, wbar^a = e^{2a-1} + i e^{2a}  (0-based real indices)
    real_of = {}
    for a in range(n):
        real_of[a] = {2 * a: GaussianRational(1), 2 * a + 1: -I}
        real_of[n + a] = {2 * a: GaussianRational(1), 2 * a + 1: I}
    entries: dict[tuple[int, int, int], Fraction] = {}
    for k, terms in eqs.equations.items():
        dw: dict[tuple[int, int], GaussianRational] = {}
        for (x, y), c in _terms_to_symbols(terms, n).items():
            for key, v in _wedge(real_of[x], real_of[y]).items():
                dw[key] = dw.get(key, _ZERO) + c * v
        for (p, q), v in dw.items():
            # de^{2k-1} = Re, de^{2k} = -Im; c_pq^m = -(coefficient of e^p ^ e^q)
            if v.re:
                entries[(p + 1, q + 1, 2 * k - 1)] = -v.re
            if v.im:
                entries[(p + 1, q + 1, 2 * k)] = v.im
    return LieBracket(2 * n, entries)


def complexify(mu: LieBracket) -> StructureEquations:
    """Inverse of :func:`realify`: structure equations of a real bracket."""
    n = mu.n
    half = Fraction(1, 2)
    # e^{2a-1} = (w^a + wbar^a)/2, e^{2a} = i (w^a - wbar^a)/2
    sym_of = {}
    for a in range(n):
        sym_of[2 * a] = {a: GaussianRational(half), n + a: GaussianRational(half)}
        sym_of[2 * a + 1] = {a: GaussianRational(0, half), n + a: GaussianRational(0, -half)}
    eqs: dict[int, dict[TermKey, GaussianRational]] = {}
    for k in range(1, n + 1):
        form: TwoForm = {}
        for (p, q, m), c in mu.entries.items():
            if m == 2 * k - 1:
                w = GaussianRational(-c)  # de^{2k-1} coefficient
            elif m == 2 * k:
                w = GaussianRational(0, c)  # -i * de^{2k} coefficient, de^{2k} = -c
            else:
                continue
            for key, v in _wedge(sym_of[p - 1], sym_of[q - 1]).items():
                form[key] = form.get(key, _ZERO) + w * v
        eqs[k] = _symbols_to_terms(form, n)
    return StructureEquations(n, eqs)


def change_coframe(eqs: StructureEquations, A: Sequence[Sequence]) -> StructureEquations:
    """Equations in the coframe eta with w = A eta (A complex n x n, invertible)."""
    n = eqs.n
    A = [[GaussianRational.of(x) for x in row] for row in A]
    Ainv = complex_inverse(A)
    subst: dict[int, OneForm] = {}
    for a in range(n):
        subst[a] = {k: A[a][k] for k in range(n) if A[a][k]}
        subst[n + a] = {n + k: A[a][k].conjugate() for k in range(n) if A[a][k]}
    dw_eta: list[TwoForm] = []
    for k in range(1, n + 1):
        form: TwoForm = {}
        for (x, y), c in _terms_to_symbols(eqs.d(k), n).items():
            for key, v in _wedge(subst[x], subst[y]).items():
                form[key] = form.get(key, _ZERO) + c * v
        dw_eta.append(form)
    out = {}
    for k in range(n):
        form: TwoForm = {}
        for i in range(n):
            if not Ainv[k][i]:
                continue
            for key, v in dw_eta[i].items():
                form[key] = form.get(key, _ZERO) + Ainv[k][i] * v
        out[k + 1] = _symbols_to_terms(form, n)
    return StructureEquations(n, out)


def complex_inverse(A: Sequence[Sequence[GaussianRational]]) -> list[list[GaussianRational]]:
    n = len(A)
    m = [[GaussianRational.of(x) for x in row] + [GaussianRational(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            raise ValueError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        inv = GaussianRational(1) / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def coframe_matrix(A: Sequence[Sequence]) -> Matrix:
    """Real J-commuting g with act(g, mu) = realify(change_coframe(complexify(mu), A))."""
    n = len(A)
    A = [[GaussianRational.of(x) for x in row] for row in A]
    h = linalg.zeros(2 * n)
    for b in range(n):
        col = [A[a][b] for a in range(n)]
        col_i = [-I * z for z in col]
        for a in range(n):
            h[2 * a][2 * b] = col[a].re
            h[2 * a + 1][2 * b] = -col[a].im
            h[2 * a][2 * b + 1] = col_i[a].re
            h[2 * a + 1][2 * b + 1] = -col_i[a].im
    return linalg.inverse(h)


def is_integrable(eqs: StructureEquations) -> bool:
    """No (0,2)-components: the almost complex structure is integrable."""
    return all(kind != ANTI for k in eqs.equations for (kind, _, _) in eqs.d(k))


@dataclass(frozen=True)
class RealificationResult:
    bracket: LieBracket
    scaling: Matrix | None = None
    normalized: LieBracket | None = None


def translate(eqs: StructureEquations, target: LieBracket | None = None) -> RealificationResult:
    """realify + validation; optionally find a diagonal rescaling onto ``target``."""
    mu = realify(eqs)
    report = validate(mu)
    if not report.jacobi:
        raise BracketError("d^2 != 0: not a Lie algebra (Jacobi fails at %s)" % (report.jacobi_failure,))
    if not report.integrable:
        raise BracketError("structure equations are not integrable with the standard J")
    if target is None:
        return RealificationResult(mu)
    g = diagonal_normalization(mu, target)
    return RealificationResult(mu, g, act(g, mu) if g is not None else None)


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _integer_solution(W, rhs, span: int = 4):
    """An integer solution of W x = rhs, searching small values of the free variables."""
    sol = linalg.solve_affine(W, rhs)
    if sol is None:
        return None
    particular, directions, _ = sol
    candidates = [tuple(range(-span, span + 1))] * len(directions)
    best = None
    for free in product(*candidates):
        x = list(particular)
        for t, v in zip(free, directions):
            if t:
                x = [xi + t * vi for xi, vi in zip(x, v)]
        if all(v.denominator == 1 for v in x):
            size = sum(abs(v) for v in x)
            if best is None or size < best[0]:
                best = (size, x)
    return None if best is None else best[1]


def diagonal_normalization(raw: LieBracket, target: LieBracket) -> Matrix | None:
    """Positive rational g = diag(d1,d1,...,dn,dn) with act(g, raw) == target, if one exists.

    Each constant scales by d_K / (d_I d_J); per prime this is a linear
    system in the exponents of the d's, solved exactly.  Only integer
    exponent solutions give rational d's.
    """
    if raw.dim != target.dim or set(raw.entries) != set(target.entries):
        return None
    n = raw.n
    keys = list(raw.entries)
    ratios = [target.entries[k] / raw.entries[k] for k in keys]
    if any(r <= 0 for r in ratios):
        return None
    if not keys:
        return linalg.identity(raw.dim)
    W = [[Fraction(x) for x in weight_of(i, j, k, n)] for (i, j, k) in keys]
    primes = set()
    for r in ratios:
        primes |= set(_factor(r.numerator)) | set(_factor(r.denominator))
    d = [Fraction(1)] * n
    for p in sorted(primes):
        exps = []
        for r in ratios:
            e = _factor(r.numerator).get(p, 0) - _factor(r.denominator).get(p, 0)
            exps.append(Fraction(e))
        x = _integer_solution(W, exps)
        if x is None:
            return None
        for a in range(n):
            d[a] *= Fraction(p) ** int(x[a])
    g = linalg.diag([d[a // 2] for a in range(2 * n)])
    return g if act(g, raw) == target else None
