"""Linear systems with exact rational coefficients and an exact feasibility test.

Feasibility is decided by a phase-one simplex over ``Fraction`` on a sparse
tableau. Pivot choice is Dantzig's rule until a run of degenerate pivots,
after which Bland's rule takes over, so the method always terminates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from ..structures import sort_key


class LinearSystemError(ValueError):
    pass


@dataclass
class LinearSystem:
    """Equality rows ``Σ c·v = b`` with per-variable bounds ``v ≥ 0`` and ``v ≤ 1``."""

    variables: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    nonneg: set = field(default_factory=set)
    upper: set = field(default_factory=set)

    def __post_init__(self) -> None:
        self._declared = set(self.variables)
        rows, self.rows = self.rows, []
        for coeffs, rhs in rows:
            self.add_row(coeffs, rhs)

    def add_variable(self, name: Hashable, nonneg: bool = True, upper: bool = False) -> None:
        if name in self._declared:
            raise LinearSystemError(f"variable {name!r} declared twice")
        self._declared.add(name)
        self.variables.append(name)
        if nonneg:
            self.nonneg.add(name)
        if upper:
            self.upper.add(name)

    def add_row(self, coeffs: Mapping, rhs) -> None:
        row: dict = {}
        for v, c in coeffs.items():
            if v not in self._declared:
                raise LinearSystemError(f"row references undeclared variable {v!r}")
            c = Fraction(c)
            if c:
                row[v] = row.get(v, 0) + c
        self.rows.append(({v: c for v, c in row.items() if c}, Fraction(rhs)))

    def satisfied_by(self, x: Mapping) -> bool:
        for v in self.variables:
            val = x.get(v, 0)
            if v in self.nonneg and val < 0:
                return False
            if v in self.upper and val > 1:
                return False
        return all(sum(c * x.get(v, 0) for v, c in row.items()) == rhs for row, rhs in self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearSystem):
            return NotImplemented
        return (set(self.variables) == set(other.variables) and self.nonneg == other.nonneg
                and self.upper == other.upper and _row_multiset(self.rows) == _row_multiset(other.rows))

    def renamed(self, rename) -> "LinearSystem":
        out = LinearSystem()
        for v in self.variables:
            out.add_variable(rename(v), v in self.nonneg, v in self.upper)
        for row, rhs in self.rows:
            out.add_row({rename(v): c for v, c in row.items()}, rhs)
        return out


def _row_multiset(rows) -> dict:
    acc: dict = {}
    for row, rhs in rows:
        key = (frozenset(row.items()), rhs)
        acc[key] = acc.get(key, 0) + 1
    return acc


@dataclass
class LPResult:
    feasible: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.feasible


def _implied_upper(L: LinearSystem) -> set:
    """Variables bounded by 1 through a row ``Σ v = 1`` over nonnegative variables."""
    out = set()
    for row, rhs in L.rows:
        if rhs == 1 and all(c == 1 and v in L.nonneg for v, c in row.items()):
            out.update(row)
    return out


def lp_feasible(L: LinearSystem) -> LPResult:
    """Exact feasibility of L; the witness, when present, satisfies every row and bound."""
    # Standard form: every column nonnegative; free variables split in two.
    cols: dict = {}
    ncol = 0
    for v in L.variables:
        if v in L.nonneg:
            cols[v] = [(ncol, 1)]
            ncol += 1
        else:
            cols[v] = [(ncol, 1), (ncol + 1, -1)]
            ncol += 2
    rows = []
    for row, rhs in L.rows:
        r: dict = {}
        for v, c in row.items():
            for j, s in cols[v]:
                r[j] = r.get(j, 0) + s * c
        rows.append((r, rhs))
    implied = _implied_upper(L)
    for v in L.variables:
        if v in L.upper and v not in implied:
            r = {j: Fraction(s) for j, s in cols[v]}
            r[ncol] = Fraction(1)
            ncol += 1
            rows.append((r, Fraction(1)))
    values = _phase_one(rows, ncol)
    if values is None:
        return LPResult(False)
    x = {v: sum(s * values.get(j, 0) for j, s in cols[v]) for v in L.variables}
    x = {v: Fraction(val) for v, val in x.items()}
    if not L.satisfied_by(x):
        raise AssertionError("simplex produced a point that violates the system")
    return LPResult(True, x)


def _phase_one(rows: list, ncol: int):
    """Minimise the sum of artificials for ``A y = b, y ≥ 0``; None when the optimum is positive."""
    tab: list = []
    rhs: list = []
    basis: list = []
    art = ncol
    for r, b in rows:
        r = {j: Fraction(c) for j, c in r.items() if c}
        b = Fraction(b)
        if not r:
            if b != 0:
                return None
            continue
        if b < 0:
            r = {j: -c for j, c in r.items()}
            b = -b
        r[art] = Fraction(1)
        tab.append(r)
        rhs.append(b)
        basis.append(art)
        art += 1
    first_art = ncol
    # Objective: minimise Σ artificials, kept as reduced costs over nonbasic columns.
    obj: dict = {}
    for r, b in zip(tab, rhs):
        for j, c in r.items():
            if j < first_art:
                obj[j] = obj.get(j, 0) - c
    obj = {j: c for j, c in obj.items() if c}
    # column -> rows containing it, kept in sync with pivots
    where: dict = {}
    for i, r in enumerate(tab):
        for j in r:
            where.setdefault(j, set()).add(i)
    degenerate = 0
    while True:
        neg = [j for j, c in obj.items() if c < 0]
        if not neg:
            break
        if degenerate > 50:
            enter = min(neg)
        else:
            enter = min(neg, key=lambda j: (obj[j], j))
        best = None
        for i in where.get(enter, ()):
            a = tab[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            # Unbounded direction cannot happen in phase one (objective bounded below by 0).
            raise AssertionError("phase one reported unbounded")
        (ratio, _), p = best
        degenerate = degenerate + 1 if ratio == 0 else 0
        _pivot(tab, rhs, basis, where, obj, p, enter)
    if any(rhs[i] != 0 for i, b in enumerate(basis) if b >= first_art):
        return None
    return {b: rhs[i] for i, b in enumerate(basis) if b < first_art}


def _pivot(tab, rhs, basis, where, obj, p, enter) -> None:
    prow = tab[p]
    a = prow[enter]
    if a != 1:
        inv = 1 / a
        for j in prow:
            prow[j] *= inv
        rhs[p] *= inv
    for i in list(where[enter]):
        if i == p:
            continue
        r = tab[i]
        f = r[enter]
        for j, c in prow.items():
            nv = r.get(j, 0) - f * c
            if nv:
                if j not in r:
                    where.setdefault(j, set()).add(i)
                r[j] = nv
            elif j in r:
                del r[j]
                where[j].discard(i)
        rhs[i] -= f * rhs[p]
    f = obj.get(enter, 0)
    if f:
        for j, c in prow.items():
            nv = obj.get(j, 0) - f * c
            if nv:
                obj[j] = nv
            else:
                obj.pop(j, None)
    basis[p] = enter


# --------------------------------------------------------------------------
# text format

def render_name(v: Hashable) -> str:
    """A whitespace-free token for a variable name."""
    if isinstance(v, str) and re.fullmatch(r"[A-Za-z_][^\s#*+=]*", v):
        return v
    s = repr(v)
    return "v" + re.sub(r"[^A-Za-z0-9_,()\[\].']", "", s.replace(" ", ""))


def _bound_text(L: LinearSystem, v) -> str:
    if v in L.nonneg:
        return "[0,1]" if v in L.upper else ">=0"
    return "<=1" if v in L.upper else "free"


def _coeff_terms(row: Mapping, names: Mapping) -> str:
    terms = [f"{c}*{names[v]}" for v, c in sorted(row.items(), key=lambda vc: sort_key(names[vc[0]]))]
    return " + ".join(terms) if terms else "0"


def export_linear_system(L: LinearSystem) -> str:
    names = {v: render_name(v) for v in L.variables}
    if len(set(names.values())) != len(names):
        names = {v: f"x{i}" for i, v in enumerate(L.variables)}
    lines = [f"var {names[v]} {_bound_text(L, v)}" for v in L.variables]
    lines += [f"{_coeff_terms(row, names)} = {rhs}" for row, rhs in L.rows]
    return "\n".join(lines) + "\n"


def _parse_rows(lines: Iterable[tuple[int, str]]) -> list:
    out = []
    for lineno, line in lines:
        if "=" not in line:
            raise LinearSystemError(f"line {lineno}: expected a row 'c*v + ... = b'")
        lhs, rhs = line.rsplit("=", 1)
        row: dict = {}
        lhs = lhs.strip()
        if lhs != "0":
            for term in lhs.replace("- ", "+ -").split("+"):
                term = term.strip()
                if not term:
                    continue
                if "*" in term:
                    c, v = term.split("*", 1)
                else:
                    c, v = ("-1", term[1:]) if term.startswith("-") else ("1", term)
                try:
                    coeff = Fraction(c.strip())
                except ValueError as exc:
                    raise LinearSystemError(f"line {lineno}: bad coefficient {c!r}") from exc
                row[v.strip()] = row.get(v.strip(), 0) + coeff
        try:
            out.append((lineno, row, Fraction(rhs.strip())))
        except ValueError as exc:
            raise LinearSystemError(f"line {lineno}: bad right-hand side {rhs!r}") from exc
    return out


def _content_lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def parse_linear_system(text: str) -> LinearSystem:
    L = LinearSystem()
    rows = []
    for n, line in _content_lines(text):
        if line.startswith("var "):
            parts = line.split()
            if len(parts) != 3 or parts[2] not in ("[0,1]", ">=0", "<=1", "free"):
                raise LinearSystemError(f"line {n}: expected 'var <name> [0,1]|>=0|<=1|free'")
            b = parts[2]
            L.add_variable(parts[1], nonneg=b in ("[0,1]", ">=0"), upper=b in ("[0,1]", "<=1"))
        else:
            rows.append((n, line))
    for n, row, rhs in _parse_rows(rows):
        try:
            L.add_row(row, rhs)
        except LinearSystemError as exc:
            raise LinearSystemError(f"line {n}: {exc}") from None
    return L
