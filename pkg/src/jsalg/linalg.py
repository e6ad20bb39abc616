"""Sparse exact linear algebra over Q: reduced row echelon spans with
deterministic pivoting, membership tests and coordinate solves.

Vectors are dicts coordinate -> Fraction (zero entries absent).  Pivots are
the smallest coordinate of each row, rows are normalized to pivot 1 and kept
fully reduced against each other, so the final row set is the canonical RREF
basis of the span no matter the insertion order.
"""

from __future__ import annotations

from fractions import Fraction


def vec_add(u: dict, v: dict, c=1) -> dict:
    """u + c*v as a fresh dict."""
    out = dict(u)
    for k, x in v.items():
        s = out.get(k)
        if s is None:
            y = c * x
            if y:
                out[k] = y
        else:
            s = s + c * x
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def vec_iadd(out: dict, v: dict, c=1) -> None:
    for k, x in v.items():
        s = out.get(k)
        if s is None:
            y = c * x
            if y:
                out[k] = y
        else:
            s = s + c * x
            if s:
                out[k] = s
            else:
                del out[k]


def vec_scale(u: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in u.items()}


class Echelon:
    """A growing RREF span."""

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict = {}  # pivot -> row dict (row[pivot] == 1)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)

    def basis(self):
        """Rows in pivot order: the canonical basis of the span."""
        return [self.rows[p] for p in sorted(self.rows)]

    def reduce(self, vec: dict) -> dict:
        """Residual of vec modulo the span (fresh dict)."""
        out = dict(vec)
        rows = self.rows
        while True:
            hit = None
            for k in out:
                if k in rows:
                    hit = k
                    break
            if hit is None:
                return out
            c = out[hit]
            row = rows[hit]
            for k, x in row.items():
                s = out.get(k)
                if s is None:
                    y = -c * x
                    if y:
                        out[k] = y
                else:
                    s = s - c * x
                    if s:
                        out[k] = s
                    else:
                        del out[k]

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def insert(self, vec: dict):
        """Insert vec; returns the new pivot, or None if dependent."""
        res = self.reduce(vec)
        if not res:
            return None
        piv = min(res)
        inv = Fraction(1) / res[piv]
        row = {k: inv * x for k, x in res.items()}
        # back-substitute into existing rows to keep RREF
        for p, r in self.rows.items():
            c = r.get(piv)
            if c:
                for k, x in row.items():
                    s = r.get(k)
                    if s is None:
                        y = -c * x
                        if y:
                            r[k] = y
                    else:
                        s = s - c * x
                        if s:
                            r[k] = s
                        else:
                            del r[k]
        self.rows[piv] = row
        return piv

    def solve(self, vec: dict):
        """Coordinates of vec in the pivot-ordered basis, or None if outside."""
        out = dict(vec)
        pivs = sorted(self.rows)
        coords = []
        for p in pivs:
            c = out.get(p, None)
            if c:
                row = self.rows[p]
                for k, x in row.items():
                    s = out.get(k)
                    if s is None:
                        y = -c * x
                        if y:
                            out[k] = y
                    else:
                        s = s - c * x
                        if s:
                            out[k] = s
                        else:
                            del out[k]
                coords.append(c)
            else:
                coords.append(Fraction(0))
        if out:
            return None
        return coords


class CoordSolver:
    """Reusable exact solver expressing targets in a fixed list of columns.

    Column j is tracked through elimination with an augmented marker, so a
    successful solve returns coefficients in the ORIGINAL column order
    (free coefficients 0, deterministic)."""

    def __init__(self, columns: list[dict]):
        self.ncols = len(columns)
        self.ech = Echelon()
        for j, col in enumerate(columns):
            v = dict(col)
            v[(-1, j)] = Fraction(1)
            res = ech_reduce_main(self.ech, v)
            piv = _main_pivot(res)
            if piv is None:
                continue
            inv = Fraction(1) / res[piv]
            row = {k: inv * x for k, x in res.items()}
            for p, r in self.ech.rows.items():
                c = r.get(piv)
                if c:
                    for k, x in row.items():
                        s = r.get(k)
                        if s is None:
                            y = -c * x
                            if y:
                                r[k] = y
                        else:
                            s = s - c * x
                            if s:
                                r[k] = s
                            else:
                                del r[k]
            self.ech.rows[piv] = row

    def solve(self, target: dict):
        res = ech_reduce_main(self.ech, dict(target))
        if _main_pivot(res) is not None:
            return None
        coeffs = [Fraction(0)] * self.ncols
        for k, x in res.items():
            coeffs[k[1]] = -x
        return coeffs


def solve_linear(columns: list[dict], target: dict):
    """Solve sum_j c_j * columns[j] = target exactly; None if inconsistent."""
    return CoordSolver(columns).solve(target)


def nullspace(columns: list[dict]):
    """Basis of {x : sum_j x_j columns[j] = 0}, as coefficient dicts, in the
    deterministic order of discovered dependencies."""
    ech = Echelon()
    kernels = []
    for j, col in enumerate(columns):
        v = dict(col)
        v[(-1, j)] = Fraction(1)
        res = ech_reduce_main(ech, v)
        piv = _main_pivot(res)
        if piv is None:
            kernels.append({k[1]: x for k, x in res.items()})
            continue
        inv = Fraction(1) / res[piv]
        row = {k: inv * x for k, x in res.items()}
        for p, r in ech.rows.items():
            c = r.get(piv)
            if c:
                for k, x in row.items():
                    s = r.get(k)
                    if s is None:
                        y = -c * x
                        if y:
                            r[k] = y
                    else:
                        s = s - c * x
                        if s:
                            r[k] = s
                        else:
                            del r[k]
        ech.rows[piv] = row
    return kernels


def _main_pivot(vec: dict):
    best = None
    for k in vec:
        if isinstance(k, tuple) and len(k) == 2 and k[0] == -1:
            continue
        if best is None or k < best:
            best = k
    return best


def ech_reduce_main(ech: Echelon, vec: dict) -> dict:
    """Reduce only on main (non-augmented) pivots."""
    out = dict(vec)
    rows = ech.rows
    while True:
        hit = None
        for k in out:
            if k in rows:
                hit = k
                break
        if hit is None:
            return out
        c = out[hit]
        row = rows[hit]
        for k, x in row.items():
            s = out.get(k)
            if s is None:
                y = -c * x
                if y:
                    out[k] = y
            else:
                s = s - c * x
                if s:
                    out[k] = s
                else:
                    del out[k]
