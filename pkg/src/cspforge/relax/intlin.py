"""Integer linear systems over Z and Z_n.

Systems over Z are solved by column-style Hermite elimination: unimodular
column operations (tracked in V) bring A to a column-echelon H = A·V, then
``H y = b`` is solved by forward substitution and ``x = V y``. A system over
Z_n gets one extra column per row carrying the coefficient n, which turns it
into a system over Z with the same solutions modulo n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Mapping

from .lp import _content_lines, _parse_rows, render_name
from ..structures import sort_key


class GroupSystemError(ValueError):
    pass


@dataclass
class GroupSystem:
    """Rows ``Σ a·x = b`` with integer coefficients; ``modulus`` None means Z."""

    modulus: int | None = None
    variables: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.modulus is not None and self.modulus < 1:
            raise GroupSystemError("modulus must be a positive integer")
        self._declared = set(self.variables)
        rows, self.rows = self.rows, []
        for coeffs, rhs in rows:
            self.add_row(coeffs, rhs)

    def add_variable(self, name: Hashable) -> None:
        if name in self._declared:
            raise GroupSystemError(f"variable {name!r} declared twice")
        self._declared.add(name)
        self.variables.append(name)

    def _reduce(self, c: int) -> int:
        return c % self.modulus if self.modulus else c

    def add_row(self, coeffs: Mapping, rhs: int) -> None:
        row: dict = {}
        for v, c in coeffs.items():
            if v not in self._declared:
                raise GroupSystemError(f"row references undeclared variable {v!r}")
            if int(c) != c:
                raise GroupSystemError("coefficients must be integers")
            row[v] = row.get(v, 0) + int(c)
        row = {v: self._reduce(c) for v, c in row.items() if self._reduce(c)}
        self.rows.append((row, self._reduce(int(rhs))))

    def satisfied_by(self, x: Mapping) -> bool:
        for row, rhs in self.rows:
            lhs = sum(c * x.get(v, 0) for v, c in row.items())
            if self.modulus:
                if (lhs - rhs) % self.modulus:
                    return False
            elif lhs != rhs:
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupSystem):
            return NotImplemented
        key = lambda rows: sorted((sorted(r.items(), key=lambda vc: sort_key(vc[0])), b) for r, b in rows)
        return (self.modulus == other.modulus and set(self.variables) == set(other.variables)
                and key(self.rows) == key(other.rows))


def _hermite_solve(A: list, b: list, ncols: int) -> list | None:
    """An integer y with A y = b, or None. A is a list of sparse rows {col: int}."""
    m = len(A)
    # Columns of A and of the unimodular V, both sparse: col -> {row: value}.
    cols = [dict() for _ in range(ncols)]
    for i, row in enumerate(A):
        for j, c in row.items():
            if c:
                cols[j][i] = c
    V = [{j: 1} for j in range(ncols)]

    def axpy(dst: dict, src: dict, q: int) -> None:
        for k, v in src.items():
            nv = dst.get(k, 0) - q * v
            if nv:
                dst[k] = nv
            else:
                dst.pop(k, None)

    pivots = []  # (row, column) of each echelon pivot
    nxt = 0
    for i in range(m):
        if nxt == ncols:
            break
        active = [j for j in range(nxt, ncols) if cols[j].get(i)]
        while len(active) > 1:
            p = min(active, key=lambda j: (abs(cols[j][i]), j))
            a = cols[p][i]
            still = [p]
            for j in active:
                if j == p:
                    continue
                q = cols[j][i] // a
                axpy(cols[j], cols[p], q)
                axpy(V[j], V[p], q)
                if cols[j].get(i):
                    still.append(j)
            active = still
        if active:
            p = active[0]
            cols[p], cols[nxt] = cols[nxt], cols[p]
            V[p], V[nxt] = V[nxt], V[p]
            pivots.append((i, nxt))
            nxt += 1
    # Forward substitution on H y = b; columns beyond the pivots are zero in earlier rows.
    y = [0] * ncols
    pivot_of = dict(pivots)
    rows_of_H = [dict() for _ in range(m)]
    for j in range(nxt):
        for i, c in cols[j].items():
            rows_of_H[i][j] = c
    for i in range(m):
        row = rows_of_H[i]
        acc = b[i] - sum(c * y[j] for j, c in row.items() if j != pivot_of.get(i))
        if i in pivot_of:
            piv = row[pivot_of[i]]
            if acc % piv:
                return None
            y[pivot_of[i]] = acc // piv
        elif acc:
            return None
    x = [0] * ncols
    for j in range(nxt):
        if y[j]:
            for k, v in V[j].items():
                x[k] += v * y[j]
    return x


def solve_group_system(S: GroupSystem) -> dict | None:
    """A solution (values reduced mod n over Z_n), or None if the system is infeasible."""
    index = {v: j for j, v in enumerate(S.variables)}
    n = len(index)
    A, b = [], []
    for i, (row, rhs) in enumerate(S.rows):
        r = {index[v]: c for v, c in row.items()}
        if S.modulus:
            r[n + i] = S.modulus
        A.append(r)
        b.append(rhs)
    ncols = n + (len(S.rows) if S.modulus else 0)
    y = _hermite_solve(A, b, ncols)
    if y is None:
        return None
    x = {v: y[j] % S.modulus if S.modulus else y[j] for v, j in index.items()}
    if not S.satisfied_by(x):
        raise AssertionError("integer solver produced a non-solution")
    return x


def brute_force_group_system(S: GroupSystem, box: int = 3) -> dict | None:
    """Exhaustive search over Z_n^vars, or over [-box, box]^vars when the modulus is Z."""
    values = range(S.modulus) if S.modulus else range(-box, box + 1)
    for combo in itertools.product(values, repeat=len(S.variables)):
        x = dict(zip(S.variables, combo))
        if S.satisfied_by(x):
            return x
    return None


def export_group_system(S: GroupSystem) -> str:
    names = {v: render_name(v) for v in S.variables}
    if len(set(names.values())) != len(names):
        names = {v: f"x{i}" for i, v in enumerate(S.variables)}
    lines = [f"mod {S.modulus if S.modulus else 'Z'}"]
    lines += [f"var {names[v]}" for v in S.variables]
    for row, rhs in S.rows:
        terms = [f"{c}*{names[v]}" for v, c in sorted(row.items(), key=lambda vc: sort_key(names[vc[0]]))]
        lines.append(f"{' + '.join(terms) if terms else '0'} = {rhs}")
    return "\n".join(lines) + "\n"


def parse_group_system(text: str) -> GroupSystem:
    lines = list(_content_lines(text))
    if not lines or not lines[0][1].startswith("mod "):
        raise GroupSystemError("line 1: expected 'mod <n|Z>'")
    mod = lines[0][1].split(None, 1)[1].strip()
    try:
        S = GroupSystem(None if mod == "Z" else int(mod))
    except ValueError as exc:
        raise GroupSystemError(f"line {lines[0][0]}: bad modulus {mod!r}") from exc
    rows = []
    for n, line in lines[1:]:
        if line.startswith("var "):
            parts = line.split()
            if len(parts) != 2:
                raise GroupSystemError(f"line {n}: expected 'var <name>'")
            S.add_variable(parts[1])
        else:
            rows.append((n, line))
    for n, row, rhs in _parse_rows(rows):
        if any(c.denominator != 1 for c in row.values()) or rhs.denominator != 1:
            raise GroupSystemError(f"line {n}: coefficients must be integers")
        try:
            S.add_row({v: int(c) for v, c in row.items()}, int(rhs))
        except GroupSystemError as exc:
            raise GroupSystemError(f"line {n}: {exc}") from None
    return S

