"""Built-in families of 6-dimensional nilpotent brackets with their expected verdicts.

Each family carries its parameter domain, a bracket generator, the expected
existence of a minimal compatible metric and the expected minimality of the
canonical metric, transcribed row by row from the classification tables.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

from .algebra import LieBracket
from .exact import parse_exact, sign, sqrt_exact
from .pipeline import DEFAULT_SAMPLES, DEFAULT_SEED, analyze
from .serialize import SCHEMA_VERSION

F = Fraction
Params = dict[str, Any]


class DomainError(ValueError):
    """Parameters outside a family's domain; the message names the violated predicate."""


def _b(brackets: Mapping[tuple[int, int], Mapping[int, Any]]) -> LieBracket:
    return LieBracket.from_brackets(6, brackets)


@dataclass(frozen=True)
class Family:
    name: str
    params: tuple[str, ...]
    bracket: Callable[..., LieBracket]
    domain: Callable[..., list[str]]
    existence: Callable[..., bool | None]
    canonical: Callable[..., bool | None]
    grid: tuple[tuple, ...]
    kind: str = "nilpotent J"
    remark: str = ""

    def violations(self, values: Params) -> list[str]:
        missing = [p for p in self.params if p not in values]
        if missing:
            return [f"missing parameter(s): {', '.join(missing)}"]
        extra = [p for p in values if p not in self.params]
        if extra:
            return [f"unknown parameter(s): {', '.join(extra)}"]
        return self.domain(*(values[p] for p in self.params))


@dataclass(frozen=True)
class Instance:
    family: str
    params: Params
    bracket: LieBracket
    expected_existence: bool | None
    expected_canonical: bool | None


# ---------------------------------------------------------------- brackets


def _h2(s, t):
    return _b({(1, 2): {6: 1}, (1, 3): {5: -1}, (2, 3): {6: -1}, (3, 4): {5: s, 6: t}})


def _h5a():
    return _b({(1, 3): {5: -1}, (1, 4): {6: -1}, (2, 3): {6: -1}, (2, 4): {5: 1}})


def _h5b(s, t):
    return _b({(1, 2): {6: 2}, (1, 3): {5: -1}, (1, 4): {6: -1}, (2, 3): {6: -1}, (2, 4): {5: 1}, (3, 4): {5: 2 * s, 6: 2 * t}})


def _h5c(s, t):
    return _b({
        (1, 2): {6: 2},
        (1, 3): {5: -(t + 1)},
        (1, 4): {6: t - 1},
        (2, 3): {6: -(t + 1)},
        (2, 4): {5: 1 - t},
        (3, 4): {5: 2 * s},
    })


def _h6():
    return _b({(1, 2): {6: 1}, (1, 3): {5: -1}, (2, 3): {6: -1}})


def _h7():
    return _b({(1, 2): {4: 1}, (1, 3): {5: -1}, (2, 3): {6: -1}})


def _h10():
    return _b({(1, 2): {4: 1}, (2, 3): {6: -1}, (2, 4): {5: 1}})


def _h11a(t):
    return _b({(1, 2): {4: 1}, (1, 3): {5: -t}, (2, 3): {6: -1}, (2, 4): {5: 1 - t}})


def _h11b(t):
    return _b({(1, 2): {4: 1}, (1, 3): {5: -1}, (1, 4): {6: t - 1}, (2, 3): {6: -t}})


def _h12_16(s, t, c):
    # shared shape of h12 (c = alpha), h13-h15 (free c) and h16 (c = 0)
    return _b({
        (1, 2): {4: 2},
        (1, 3): {5: -(s + 1 - c), 6: t},
        (1, 4): {5: t, 6: s - 1 + c},
        (2, 3): {5: -t, 6: -(s + 1 + c)},
        (2, 4): {5: -(s - 1 - c), 6: t},
    })


def _h19(e):
    return _b({(1, 3): {6: e}, (1, 5): {3: -1}, (2, 4): {6: e}, (2, 5): {4: -1}})


def _h26(e):
    return _b({(1, 2): {5: 1}, (1, 3): {6: e}, (1, 5): {3: -1}, (2, 4): {6: e}, (2, 5): {4: -1}})


# ---------------------------------------------------------------- domains


def _alpha(s, t):
    return sqrt_exact((s - 1) ** 2 + t**2)


def _quartic(s, t, c):
    b2 = s * s + t * t
    return c**4 - 2 * (b2 + 1) * c**2 + (b2 - 1) ** 2


def _h1x_domain(rel: int):
    label = {-1: "< 0", 0: "= 0", 1: "> 0"}[rel]

    def domain(s, t, c):
        bad = []
        if sign(c) < 0:
            bad.append("c >= 0")
        if c * c == (s - 1) ** 2 + t * t:
            bad.append("c != alpha")
        if c == 0 and s * s + t * t == 1:
            bad.append("(c, beta) != (0, 1)")
        if sign(_quartic(s, t, c)) != rel:
            bad.append(f"c^4 - 2(beta^2+1)c^2 + (beta^2-1)^2 {label}")
        return bad

    return domain


def _h5c_domain(s, t):
    t2 = t * t
    if sign(s) < 0:
        return ["s >= 0"]
    if 0 < t2 < F(1, 2) and s < t2 / 2:
        return []
    if F(1, 2) <= t2 < 1 and s < (1 - t2) / 2:
        return []
    if t2 > 1 and s < (t2 - 1) / 2:
        return []
    return ["one of: 0<t^2<1/2, 0<=s<t^2/2 | 1/2<=t^2<1, 0<=s<(1-t^2)/2 | t^2>1, 0<=s<(t^2-1)/2"]


def _check(*pairs) -> list[str]:
    return [label for ok, label in pairs if not ok]


def _yes(*_):
    return True


def _no(*_):
    return False


FAMILIES: dict[str, Family] = {}


def _register(f: Family) -> None:
    FAMILIES[f.name] = f


_register(Family(
    "h2", ("s", "t"), _h2,
    lambda s, t: _check((sign(s) > 0, "s > 0")),
    _yes, _no,
    ((F(1), F(0)), (F(1), F(1, 3)), (F(2), F(-1)), (F(1, 2), F(3, 4))),
))
_register(Family(
    "h4", ("t",), lambda t: _h2(0, t),
    lambda t: _check((t != 0, "t != 0")),
    lambda t: t != F(1, 4), lambda t: t == -1,
    ((F(1, 4),), (F(-1),), (F(1),), (F(-2),), (F(1, 2),), (F(-3, 4),), (F(2),)),
))
_register(Family("h5a", (), _h5a, lambda: [], _yes, _yes, ((),)))
_register(Family(
    "h5b", ("s", "t"), _h5b,
    lambda s, t: _check((sign(s) >= 0, "s >= 0"), (4 * s * s < 1 + 4 * t, "4s^2 < 1 + 4t")),
    lambda s, t: s != 0 or t != 0,
    lambda s, t: s * s + t * t == 1,
    ((F(0), F(0)), (F(0), F(1)), (F(1, 2), F(3, 4)), (F(1), F(1)), (F(3, 5), F(4, 5)), (F(0), F(-1, 8))),
))
_register(Family(
    "h5c", ("s", "t"), _h5c, _h5c_domain, _yes, _no,
    ((F(0), F(1, 2)), (F(1, 16), F(1, 2)), (F(0), F(3, 4)), (F(1, 2), F(2)), (F(0), F(-2))),
))
_register(Family("h6", (), _h6, lambda: [], _yes, _no, ((),)))
_register(Family("h7", (), _h7, lambda: [], _yes, _yes, ((),)))
_register(Family("h10", (), _h10, lambda: [], _yes, _yes, ((),)))
_register(Family(
    "h11a", ("t",), _h11a,
    lambda t: _check((t < 1, "t < 1"), (t != 0, "t != 0")),
    _yes, _no,
    ((F(-1),), (F(1, 2),), (F(-3),), (F(3, 4),)),
))
_register(Family(
    "h11b", ("t",), _h11b,
    lambda t: _check((t > 1, "t > 1")),
    _yes, _no,
    ((F(2),), (F(3),), (F(3, 2),)),
))
_register(Family(
    "h12", ("s", "t"), lambda s, t: _h12_16(s, t, _alpha(s, t)),
    lambda s, t: _check((t != 0, "t != 0")),
    _yes, lambda s, t: (s - F(1, 2)) ** 2 + t * t == F(1, 4),
    ((F(1), F(1)), (F(1, 2), F(1, 2)), (F(16, 25), F(12, 25)), (F(0), F(3, 4)), (F(2), F(1))),
))
_register(Family(
    "h13", ("s", "t", "c"), _h12_16, _h1x_domain(-1),
    _yes, lambda s, t, c: c * c + s * s + t * t == 1,
    ((F(1), F(0), F(1)), (F(3, 5), F(0), F(4, 5)), (F(0), F(1), F(1)), (F(1, 2), F(1, 2), F(1, 2))),
))
_register(Family(
    "h14", ("s", "t", "c"), _h12_16, _h1x_domain(0),
    _yes, lambda s, t, c: c * c + s * s + t * t == 1,
    ((F(1), F(0), F(2)), (F(0), F(1), F(2)), (F(2), F(0), F(3)), (F(3, 5), F(4, 5), F(2))),
))
_register(Family(
    "h15", ("s", "t", "c"), _h12_16, _h1x_domain(1),
    _yes, lambda s, t, c: c * c + s * s + t * t == 1,
    ((F(0), F(0), F(2)), (F(0), F(0), F(1, 2)), (F(1), F(0), F(3)), (F(3), F(4), F(1))),
))
_register(Family(
    "h16", ("s", "t"), lambda s, t: _h12_16(s, t, 0),
    lambda s, t: _check((s * s + t * t == 1, "s^2 + t^2 = 1"), ((s, t) != (1, 0), "(s, t) != (1, 0)")),
    _yes, _yes,
    ((F(0), F(1)), (F(0), F(-1)), (F(3, 5), F(4, 5)), (F(-1), F(0)), (F(-3, 5), F(-4, 5))),
))
_register(Family(
    "h19minus", ("e",), _h19,
    lambda e: _check((e in (1, -1), "e = +1 or -1")),
    _yes, _yes, ((F(1),), (F(-1),)), kind="non-nilpotent J",
))
_register(Family(
    "h26plus", ("e",), _h26,
    lambda e: _check((e in (1, -1), "e = +1 or -1")),
    _no, _no, ((F(1),), (F(-1),)), kind="non-nilpotent J",
))
# The 3-step example family mu_t; the canonical metric is minimal exactly at t = 0, 1.
_register(Family(
    "mu_t", ("t",), _h11b, lambda t: [],
    lambda t: True if (t > 1 or t in (0, 1)) else None,
    lambda t: t in (0, 1),
    ((F(-1),), (F(0),), (F(1, 2),), (F(1),), (F(2),)),
    kind="example family",
))


# ---------------------------------------------------------------- operations


def parse_params(text: str | Mapping[str, Any] | None) -> Params:
    """``"s=1/2,t=1"`` (or a mapping) to exact values."""
    if text is None:
        return {}
    if isinstance(text, Mapping):
        return {k: parse_exact(v) for k, v in text.items()}
    out: Params = {}
    for part in filter(None, (p.strip() for p in text.replace(";", ",").split(","))):
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"expected name=value, got {part!r}")
        out[key.strip()] = parse_exact(value.strip())
    return out


def format_params(params: Mapping[str, Any]) -> str:
    return ";".join(f"{k}={v}" for k, v in params.items())


def get_family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None


def instantiate(name: str, params: Mapping[str, Any] | None = None) -> Instance:
    fam = get_family(name)
    values = {k: parse_exact(v) for k, v in (params or {}).items()}
    bad = fam.violations(values)
    if bad:
        raise DomainError(f"{name}: parameters {format_params(values) or '()'} violate {'; '.join(bad)}")
    ordered = {p: values[p] for p in fam.params}
    args = tuple(ordered.values())
    return Instance(name, ordered, fam.bracket(*args), fam.existence(*args), fam.canonical(*args))


@dataclass(frozen=True)
class TableRow:
    family: str
    params: str
    step: int | None
    jnice_method: str
    existence_computed: bool | None
    existence_expected: bool | None
    canonical_minimal_computed: bool | None
    canonical_minimal_expected: bool | None
    verdict: str
    note: str = ""

    @property
    def existence_match(self) -> bool:
        return self.existence_expected is None or self.existence_computed == self.existence_expected

    @property
    def canonical_match(self) -> bool:
        return self.canonical_minimal_expected is None or self.canonical_minimal_computed == self.canonical_minimal_expected

    @property
    def match(self) -> bool:
        return self.existence_match and self.canonical_match


CSV_COLUMNS = (
    "family",
    "params",
    "step",
    "jnice_method",
    "existence_computed",
    "existence_expected",
    "canonical_minimal_computed",
    "canonical_minimal_expected",
    "match",
)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


@dataclass
class TableReport:
    rows: list[TableRow] = field(default_factory=list)
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    skipped: list[str] = field(default_factory=list)

    @property
    def existence_mismatches(self) -> list[TableRow]:
        return [r for r in self.rows if not r.existence_match]

    @property
    def mismatches(self) -> list[TableRow]:
        return [r for r in self.rows if not r.match]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([_cell(getattr(r, c)) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "samples": self.samples,
            "seed": self.seed,
            "rows": [
                {**{c: getattr(r, c) for c in CSV_COLUMNS}, "verdict": r.verdict, "note": r.note} for r in self.rows
            ],
            "skipped": self.skipped,
            "mismatches": len(self.mismatches),
            "existence_mismatches": len(self.existence_mismatches),
        }


def run_instance(inst: Instance, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> TableRow:
    rep = analyze(inst.bracket, samples=samples, seed=seed, name=inst.family, params=inst.params)
    return TableRow(
        family=inst.family,
        params=format_params(inst.params),
        step=rep.validation.step,
        jnice_method=rep.jnice_method,
        existence_computed=rep.existence,
        existence_expected=inst.expected_existence,
        canonical_minimal_computed=rep.canonical_minimal,
        canonical_minimal_expected=inst.expected_canonical,
        verdict=rep.verdict,
        note="; ".join(rep.notes),
    )


def sweep(
    name: str,
    grid: Sequence[Mapping[str, Any] | Sequence] | None = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> TableReport:
    fam = get_family(name)
    points = fam.grid if grid is None else grid
    report = TableReport(samples=samples, seed=seed)
    for point in points:
        values = dict(point) if isinstance(point, Mapping) else dict(zip(fam.params, point))
        try:
            inst = instantiate(name, values)
        except DomainError as exc:
            report.skipped.append(str(exc))
            continue
        report.rows.append(run_instance(inst, samples, seed))
    return report


def default_instances(names: Sequence[str] | None = None) -> list[Instance]:
    out = []
    for name in names or FAMILIES:
        fam = FAMILIES[name]
        out.extend(instantiate(name, dict(zip(fam.params, point))) for point in fam.grid)
    return out


def reproduce_tables(samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, names: Sequence[str] | None = None) -> TableReport:
    report = TableReport(samples=samples, seed=seed)
    for name in names or FAMILIES:
        part = sweep(name, samples=samples, seed=seed)
        report.rows.extend(part.rows)
        report.skipped.extend(part.skipped)
    return report
