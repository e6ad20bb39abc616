"""Generalized Poisson structures on the (m, n) superalgebra.

Built-in bracket kinds:

* "h": the even-variable pairing sum d/dp_i d/dq_i - d/dq_i d/dp_i together
  with the odd block that is diagonal on xi_1..xi_{n-2} and swaps the last
  two odd generators (for n == 1 the odd block is the single diagonal term,
  for n == 0 it is absent).  Poisson, derivation D = 0.
* "k": contact extension on a signature with t at even index 0:
      {f,g} = (2-E)f dg/dt - df/dt (2-E)g + {f,g}_h
  with E the Euler operator in the non-t variables; D = 2 d/dt.
* "custom": constant superskew matrix C with {X_i, X_j} = C_ij extended as a
  biderivation, optionally with the same contact extension (has_time).
* "gauge": {f,g}^phi = phi^{-1} {phi f, phi g}; evaluation carries an explicit
  degree budget since phi^{-1} is a series.
* "dmod": {f,g}_D = {f,g} - (f D(g) - D(f) g)/2 over a base spec.

The "custom" evaluation uses
    {f,g} = sum_even C_ij df/dX_i dg/dX_j - (-1)^{p(f)} sum_odd C_ij df/dxi_i dg/dxi_j
which reproduces {X_i,X_j} = C_ij on generators (the odd-odd prefactor
swallows the extra Koszul sign of the squared odd derivatives).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .report import Report, pmap_chunks, resolve_workers
from .superpoly import (
    SuperPoly,
    VarRef,
    even_var,
    mono_degree,
    mono_mul,
    mono_parity,
    mono_partial,
    monomials,
    mul,
    odd_var,
    partial,
    render_monomial,
)


@dataclass(frozen=True)
class DerivationD:
    """An even formal vector field sum coeff_v * d/dv."""

    m: int
    n: int
    terms: tuple  # ((SuperPoly, VarRef), ...)

    @staticmethod
    def zero(m: int, n: int) -> "DerivationD":
        return DerivationD(m, n, ())

    @staticmethod
    def multiple_of_dt(m: int, n: int, c=2) -> "DerivationD":
        coeff = SuperPoly.const(m, n, c)
        return DerivationD(m, n, ((coeff, even_var(0)),))

    @staticmethod
    def from_generator_values(m: int, n: int, d_fn) -> "DerivationD":
        """Derivation with d/dz coefficient d_fn(z) for every generator z."""
        terms = []
        for i in range(m):
            val = d_fn(even_var(i))
            if val:
                terms.append((val, even_var(i)))
        for j in range(n):
            val = d_fn(odd_var(j))
            if val:
                terms.append((val, odd_var(j)))
        return DerivationD(m, n, tuple(terms))

    def is_zero(self) -> bool:
        return not self.terms

    def apply(self, f: SuperPoly) -> SuperPoly:
        out = SuperPoly.zero(self.m, self.n)
        for coeff, v in self.terms:
            out = out + mul(coeff, partial(f, v))
        return out

    def scale(self, c) -> "DerivationD":
        return DerivationD(self.m, self.n, tuple((p.scale(c), v) for p, v in self.terms))


@dataclass(frozen=True)
class BracketSpec:
    m: int
    n: int
    kind: str  # "h" | "k" | "custom" | "gauge" | "dmod"
    c_even: tuple = ()  # ((i, j, Fraction), ...) over non-time even vars, 0-based
    c_odd: tuple = ()  # ((i, j, Fraction), ...) over odd vars
    has_time: bool = False
    base: "BracketSpec | None" = None
    phi: "SuperPoly | None" = None

    # -- constructors --------------------------------------------------------

    @staticmethod
    def h_type(k: int, n: int) -> "BracketSpec":
        return BracketSpec(2 * k, n, "h", _even_pairing(k), _h_odd_block(n))

    @staticmethod
    def k_type(k: int, n: int) -> "BracketSpec":
        return BracketSpec(
            2 * k + 1, n, "k", _even_pairing(k), _h_odd_block(n), has_time=True
        )

    @staticmethod
    def diagonal(k: int, n: int, odd_sign=-1, has_time: bool = False) -> "BracketSpec":
        """Even pairing plus the fully diagonal odd block {xi_j, xi_j} = odd_sign.

        odd_sign=-1 is the block cut out by restricting the built-in "h"
        bracket to an initial segment of the odd generators.
        """
        odd = tuple((j, j, Fraction(odd_sign)) for j in range(n))
        m = 2 * k + (1 if has_time else 0)
        return BracketSpec(m, n, "custom", _even_pairing(k), odd, has_time=has_time)

    @staticmethod
    def custom(m: int, n: int, C, has_time: bool = False) -> "BracketSpec":
        """C square of size (m' + n), m' the even non-time count; indices
        1..m' label the even variables, the rest the odd ones."""
        mp = m - (1 if has_time else 0)
        if len(C) != mp + n or any(len(row) != mp + n for row in C):
            raise ValueError(f"C must be square of size {mp + n}")
        c_even = tuple(
            (i, j, Fraction(C[i][j])) for i in range(mp) for j in range(mp) if C[i][j]
        )
        c_odd = tuple(
            (i, j, Fraction(C[mp + i][mp + j]))
            for i in range(n)
            for j in range(n)
            if C[mp + i][mp + j]
        )
        if any(C[i][mp + j] or C[mp + j][i] for i in range(mp) for j in range(n)):
            raise ValueError("C must vanish between even and odd blocks")
        return BracketSpec(m, n, "custom", c_even, c_odd, has_time=has_time)

    @staticmethod
    def negated(spec: "BracketSpec") -> "BracketSpec":
        """The bracket with all generator values negated (C -> -C)."""
        if spec.kind not in ("h", "k", "custom"):
            raise ValueError("negation only supported on constant-matrix kinds")
        return BracketSpec(
            spec.m,
            spec.n,
            "custom",
            tuple((i, j, -c) for i, j, c in spec.c_even),
            tuple((i, j, -c) for i, j, c in spec.c_odd),
            has_time=spec.has_time,
        )

    @staticmethod
    def gauge(base: "BracketSpec", phi: SuperPoly) -> "BracketSpec":
        if (phi.m, phi.n) != (base.m, base.n):
            raise ValueError("phi signature mismatch")
        if phi.parity() != 0:
            raise ValueError("gauge element must be even")
        if not phi.constant_term():
            raise ValueError("gauge element must be invertible (nonzero constant term)")
        return BracketSpec(base.m, base.n, "gauge", base=base, phi=phi)

    @staticmethod
    def d_modified(base: "BracketSpec") -> "BracketSpec":
        return BracketSpec(base.m, base.n, "dmod", base=base)

    # -- structure -----------------------------------------------------------

    def signature(self):
        return (self.m, self.n)

    def is_superskew(self) -> bool:
        ev = {(i, j): c for i, j, c in self.c_even}
        if any(ev.get((j, i), Fraction(0)) != -c for (i, j), c in ev.items()):
            return False
        od = {(i, j): c for i, j, c in self.c_odd}
        return all(od.get((j, i), Fraction(0)) == c for (i, j), c in od.items())

    def derivation(self) -> DerivationD:
        """The even derivation governing the generalized Leibniz rule."""
        if self.kind == "h":
            return DerivationD.zero(self.m, self.n)
        if self.kind == "k":
            return DerivationD.multiple_of_dt(self.m, self.n)
        if self.kind == "custom":
            if self.has_time:
                return DerivationD.multiple_of_dt(self.m, self.n)
            return DerivationD.zero(self.m, self.n)
        if self.kind == "dmod":
            return self.base.derivation().scale(Fraction(1, 2))
        if self.kind == "gauge":
            base_d = self.base.derivation()
            phi = self.phi
            d_phi = base_d.apply(phi)

            def val(v: VarRef) -> SuperPoly:
                zv = SuperPoly.variable(self.m, self.n, v)
                return mul(d_phi, zv) + bracket(self.base, phi, zv)

            return DerivationD.from_generator_values(self.m, self.n, val)
        raise ValueError(f"unknown kind {self.kind}")


def _even_pairing(k: int) -> tuple:
    # even variables ordered p_1..p_k, q_1..q_k (after the time slot if any)
    out = []
    for i in range(k):
        out.append((i, k + i, Fraction(1)))
        out.append((k + i, i, Fraction(-1)))
    return tuple(out)


def _h_odd_block(n: int) -> tuple:
    if n == 0:
        return ()
    if n == 1:
        return ((0, 0, Fraction(-1)),)
    out = [(j, j, Fraction(-1)) for j in range(n - 2)]
    out.append((n - 2, n - 1, Fraction(-1)))
    out.append((n - 1, n - 2, Fraction(-1)))
    return tuple(out)


# -- evaluation ----------------------------------------------------------------


def _add_term(acc: dict, mono, c):
    s = acc.get(mono)
    if s is None:
        if c:
            acc[mono] = c
    else:
        s = s + c
        if s:
            acc[mono] = s
        else:
            del acc[mono]


def _constant_mono_bracket(spec: BracketSpec, m1, m2, acc: dict):
    t_off = 1 if spec.has_time else 0
    for i, j, cij in spec.c_even:
        d1 = mono_partial(m1, VarRef("even", i + t_off))
        if d1 is None:
            continue
        d2 = mono_partial(m2, VarRef("even", j + t_off))
        if d2 is None:
            continue
        c1, mm1 = d1
        c2, mm2 = d2
        r = mono_mul(mm1, mm2)
        if r is None:
            continue
        sign, mono = r
        _add_term(acc, mono, cij * c1 * c2 * sign)
    if spec.c_odd:
        outer = -1 if mono_parity(m1) == 0 else 1  # -(-1)^{p(f)}
        for i, j, cij in spec.c_odd:
            d1 = mono_partial(m1, VarRef("odd", i))
            if d1 is None:
                continue
            d2 = mono_partial(m2, VarRef("odd", j))
            if d2 is None:
                continue
            c1, mm1 = d1
            c2, mm2 = d2
            r = mono_mul(mm1, mm2)
            if r is None:
                continue
            sign, mono = r
            _add_term(acc, mono, cij * c1 * c2 * (sign * outer))


def _time_part(m1, m2, acc: dict):
    """(2 - E) f dg/dt - df/dt (2 - E) g on monomials; E skips t."""
    deg1 = mono_degree(m1) - m1[0][0]
    deg2 = mono_degree(m2) - m2[0][0]
    d2t = mono_partial(m2, VarRef("even", 0))
    if d2t is not None:
        c2, mm2 = d2t
        r = mono_mul(m1, mm2)
        if r is not None:
            _add_term(acc, r[1], Fraction(2 - deg1) * c2 * r[0])
    d1t = mono_partial(m1, VarRef("even", 0))
    if d1t is not None:
        c1, mm1 = d1t
        r = mono_mul(mm1, m2)
        if r is not None:
            _add_term(acc, r[1], -c1 * Fraction(2 - deg2) * r[0])


def bracket_monomials(spec: BracketSpec, m1, m2) -> dict:
    """{m1, m2} as a term dict, for the non-series bracket kinds."""
    if spec.kind in ("h", "k", "custom"):
        acc: dict = {}
        _constant_mono_bracket(spec, m1, m2, acc)
        if spec.has_time:
            _time_part(m1, m2, acc)
        return acc
    if spec.kind == "dmod":
        base = spec.base
        acc = bracket_monomials(base, m1, m2)
        D = base.derivation()
        f = SuperPoly(spec.m, spec.n, {m1: Fraction(1)})
        g = SuperPoly(spec.m, spec.n, {m2: Fraction(1)})
        corr = mul(f, D.apply(g)) - mul(D.apply(f), g)
        for mono, c in corr.terms.items():
            _add_term(acc, mono, -c / 2)
        return acc
    raise ValueError(f"monomial bracket unsupported for kind {spec.kind}")


def bracket(spec: BracketSpec, f: SuperPoly, g: SuperPoly, budget=None) -> SuperPoly:
    """Evaluate the bracket.  The series kind ("gauge") needs a degree budget
    and returns the truncation to total degree <= budget."""
    if (f.m, f.n) != (spec.m, spec.n) or (g.m, g.n) != (spec.m, spec.n):
        raise ValueError("signature mismatch between spec and arguments")
    if spec.kind == "gauge":
        if budget is None:
            raise ValueError("gauge bracket evaluation needs a degree budget")
        u = bracket(spec.base, mul(spec.phi, f), mul(spec.phi, g), budget)
        return mul_by_inverse(spec.phi, u, budget)
    out: dict = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            part = bracket_monomials(spec, m1, m2)
            c12 = c1 * c2
            for mono, c in part.items():
                _add_term(out, mono, c12 * c)
    res = SuperPoly(spec.m, spec.n)
    res.terms = out
    return res


def d_modified(
    spec: BracketSpec, D: DerivationD, f: SuperPoly, g: SuperPoly, budget=None
) -> SuperPoly:
    """{f,g}_D = {f,g} - (f D(g) - D(f) g)/2."""
    base = bracket(spec, f, g, budget)
    corr = mul(f, D.apply(g)) - mul(D.apply(f), g)
    return base - corr.scale(Fraction(1, 2))


def gauge_twist(spec: BracketSpec, phi: SuperPoly) -> BracketSpec:
    return BracketSpec.gauge(spec, phi)


def mul_by_inverse(phi: SuperPoly, u: SuperPoly, budget: int) -> SuperPoly:
    """phi^{-1} * u truncated to total degree <= budget (geometric series)."""
    c = phi.constant_term()
    if not c:
        raise ValueError("phi is not invertible")
    psi = SuperPoly.const(phi.m, phi.n, 1) - phi.scale(Fraction(1) / c)
    acc = u.truncate(budget)
    term = acc
    while term:
        term = mul(psi, term).truncate(budget)
        acc = acc + term
    return acc.scale(Fraction(1) / c)


# -- verification drivers --------------------------------------------------------

GAUGE_SLACK = 2  # degree loss of one nested bracket application


def _is_series(spec: BracketSpec) -> bool:
    while spec is not None:
        if spec.kind == "gauge":
            return True
        spec = spec.base
    return False


class _PairCache:
    """Bracket / d-modified / product caches on monomial pairs."""

    def __init__(self, spec: BracketSpec, D: DerivationD | None = None, budget=None):
        self.spec = spec
        self.D = D
        self.budget = budget
        self.series = _is_series(spec)
        self.br: dict = {}
        self.dm: dict = {}
        self.prod: dict = {}

    def _poly(self, mono) -> SuperPoly:
        return SuperPoly(self.spec.m, self.spec.n, {mono: Fraction(1)})

    def bracket_pair(self, m1, m2) -> dict:
        key = (m1, m2)
        r = self.br.get(key)
        if r is None:
            if self.series:
                r = bracket(self.spec, self._poly(m1), self._poly(m2), self.budget).terms
            else:
                r = bracket_monomials(self.spec, m1, m2)
            self.br[key] = r
        return r

    def bracket_with(self, m1, poly_terms: dict) -> dict:
        out: dict = {}
        for m2, c in poly_terms.items():
            for mono, x in self.bracket_pair(m1, m2).items():
                _add_term(out, mono, c * x)
        return out

    def bracket_right(self, poly_terms: dict, m2) -> dict:
        out: dict = {}
        for m1, c in poly_terms.items():
            for mono, x in self.bracket_pair(m1, m2).items():
                _add_term(out, mono, c * x)
        return out

    def dmod_pair(self, m1, m2) -> dict:
        key = (m1, m2)
        r = self.dm.get(key)
        if r is None:
            rr = dict(self.bracket_pair(m1, m2))
            f = self._poly(m1)
            g = self._poly(m2)
            corr = mul(f, self.D.apply(g)) - mul(self.D.apply(f), g)
            for mono, c in corr.terms.items():
                _add_term(rr, mono, -c / 2)
            self.dm[key] = rr
            r = rr
        return r

    def dmod_with(self, m1, poly_terms: dict) -> dict:
        out: dict = {}
        for m2, c in poly_terms.items():
            for mono, x in self.dmod_pair(m1, m2).items():
                _add_term(out, mono, c * x)
        return out

    def dmod_right(self, poly_terms: dict, m2) -> dict:
        out: dict = {}
        for m1, c in poly_terms.items():
            for mono, x in self.dmod_pair(m1, m2).items():
                _add_term(out, mono, c * x)
        return out

    def product(self, m1, m2):
        key = (m1, m2)
        if key not in self.prod:
            self.prod[key] = mono_mul(m1, m2)
        return self.prod[key]


def _filter_budget(terms: dict, certified_deg, series: bool) -> dict:
    if not series:
        return terms
    return {m: c for m, c in terms.items() if mono_degree(m) <= certified_deg}


def _counterexample(spec, monos, idxs, residual: dict, identity: str) -> dict:
    res = SuperPoly(spec.m, spec.n)
    res.terms = dict(residual)
    return {
        "identity": identity,
        "indices": list(idxs),
        "monomials": [render_monomial(monos[i], spec.m, spec.n) for i in idxs],
        "residual": res.render(),
    }


def _span_description(spec: BracketSpec, max_deg: int, count: int, series: bool):
    d = {
        "signature": [spec.m, spec.n],
        "kind": spec.kind,
        "maxEvenDegree": max_deg,
        "monomials": count,
    }
    if series:
        d["certifiedDegree"] = max_deg
    return d


def _ranges(n: int, workers) -> list:
    w = resolve_workers(workers)
    w = min(w, max(1, n))
    size = (n + w - 1) // w
    return [(lo, min(lo + size, n)) for lo in range(0, n, size)]


def _antisym_worker(args):
    spec, monos, lo, hi, max_deg = args
    series = _is_series(spec)
    budget = max_deg + GAUGE_SLACK if series else None
    cache = _PairCache(spec, budget=budget)
    N = len(monos)
    cnt = 0
    for i in range(lo, hi):
        pi = mono_parity(monos[i])
        for j in range(i, N):
            pj = mono_parity(monos[j])
            r = dict(cache.bracket_pair(monos[i], monos[j]))
            s = -1 if (pi and pj) else 1
            for mono, c in cache.bracket_pair(monos[j], monos[i]).items():
                _add_term(r, mono, c if s > 0 else -c)
            r = _filter_budget(r, max_deg, series)
            cnt += 1
            if r:
                return cnt, (i, j), r
    return cnt, None, None


def _jacobi_worker(args):
    spec, monos, lo, hi, max_deg = args
    series = _is_series(spec)
    budget = max_deg + GAUGE_SLACK if series else None
    cache = _PairCache(spec, budget=budget)
    N = len(monos)
    cnt = 0
    for i in range(lo, hi):
        a = monos[i]
        pa = mono_parity(a)
        for j in range(i, N):
            b = monos[j]
            pb = mono_parity(b)
            s2 = -1 if (pa and pb) else 1
            ab = cache.bracket_pair(a, b)
            for k in range(j, N):
                c = monos[k]
                lhs = cache.bracket_with(a, cache.bracket_pair(b, c))
                for mono, x in cache.bracket_right(ab, c).items():
                    _add_term(lhs, mono, -x)
                for mono, x in cache.bracket_with(b, cache.bracket_pair(a, c)).items():
                    _add_term(lhs, mono, -x if s2 > 0 else x)
                lhs = _filter_budget(lhs, max_deg, series)
                cnt += 1
                if lhs:
                    return cnt, (i, j, k), lhs
    return cnt, None, None


def check_jacobi(spec: BracketSpec, max_deg: int, workers=None) -> Report:
    """Super-antisymmetry on ordered pairs, then the super Jacobi identity on
    monomial multisets (sound once antisymmetry holds exhaustively: the
    Jacobiator is then super-antisymmetric in all three slots)."""
    t0 = time.perf_counter()
    series = _is_series(spec)
    monos = monomials(spec.m, spec.n, max_deg)
    N = len(monos)
    ce = None
    for cnt, bad, res in pmap_chunks(
        _antisym_worker,
        [(spec, monos, lo, hi, max_deg) for lo, hi in _ranges(N, workers)],
        workers,
    ):
        if bad and ce is None:
            ce = _counterexample(spec, monos, bad, res, "antisymmetry")
            break
    if ce is None:
        for cnt, bad, res in pmap_chunks(
            _jacobi_worker,
            [(spec, monos, lo, hi, max_deg) for lo, hi in _ranges(N, workers)],
            workers,
        ):
            if bad and ce is None:
                ce = _counterexample(spec, monos, bad, res, "jacobi")
                break
    span = _span_description(spec, max_deg, N, series)
    span["orderedPairs"] = N * (N + 1) // 2
    span["tripleMultisets"] = N * (N + 1) * (N + 2) // 6
    return Report(
        suite="bracket-jacobi",
        params={"kind": spec.kind, "m": spec.m, "n": spec.n, "maxDeg": max_deg},
        certified_span=span,
        status="pass" if ce is None else "fail",
        counterexample=ce,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


def _leibniz_worker(args):
    spec, D, monos, lo, hi, max_deg = args
    series = _is_series(spec)
    budget = max_deg + GAUGE_SLACK if series else None
    cache = _PairCache(spec, budget=budget)
    N = len(monos)
    d_vals = {}

    def D_of(mono):
        r = d_vals.get(mono)
        if r is None:
            r = D.apply(SuperPoly(spec.m, spec.n, {mono: Fraction(1)})).terms
            d_vals[mono] = r
        return r

    cnt = 0
    for i in range(lo, hi):
        a = monos[i]
        pa = mono_parity(a)
        for j in range(N):
            b = monos[j]
            pb = mono_parity(b)
            s = -1 if (pa and pb) else 1
            ab = cache.bracket_pair(a, b)
            for k in range(N):
                c = monos[k]
                bc = cache.product(b, c)
                lhs: dict = {}
                if bc is not None:
                    sg, mono_bc = bc
                    for mono, x in cache.bracket_pair(a, mono_bc).items():
                        _add_term(lhs, mono, x if sg > 0 else -x)
                for mono, x in ab.items():
                    r = mono_mul(mono, c)
                    if r is not None:
                        _add_term(lhs, r[1], -x if r[0] > 0 else x)
                for mono, x in cache.bracket_pair(a, c).items():
                    r = mono_mul(b, mono)
                    if r is not None:
                        v = x if (s * r[0]) > 0 else -x
                        _add_term(lhs, r[1], -v)
                if bc is not None:
                    sg, mono_bc = bc
                    for mono, x in D_of(a).items():
                        r = mono_mul(mono, mono_bc)
                        if r is not None:
                            v = x if (sg * r[0]) > 0 else -x
                            _add_term(lhs, r[1], -v)
                lhs = _filter_budget(lhs, max_deg, series)
                cnt += 1
                if lhs:
                    return cnt, (i, j, k), lhs
    return cnt, None, None


def check_gen_leibniz(
    spec: BracketSpec, D: DerivationD, max_deg: int, workers=None
) -> Report:
    """{a,bc} = {a,b}c + (-1)^{p(a)p(b)} b{a,c} + D(a)bc on ordered triples."""
    t0 = time.perf_counter()
    series = _is_series(spec)
    monos = monomials(spec.m, spec.n, max_deg)
    N = len(monos)
    ce = None
    for cnt, bad, res in pmap_chunks(
        _leibniz_worker,
        [(spec, D, monos, lo, hi, max_deg) for lo, hi in _ranges(N, workers)],
        workers,
    ):
        if bad and ce is None:
            ce = _counterexample(spec, monos, bad, res, "generalized-leibniz")
            break
    span = _span_description(spec, max_deg, N, series)
    span["orderedTriples"] = N**3
    return Report(
        suite="bracket-leibniz",
        params={"kind": spec.kind, "m": spec.m, "n": spec.n, "maxDeg": max_deg},
        certified_span=span,
        status="pass" if ce is None else "fail",
        counterexample=ce,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


def _dict_mul(t1: dict, t2: dict) -> dict:
    out: dict = {}
    for mm1, x1 in t1.items():
        for mm2, x2 in t2.items():
            r = mono_mul(mm1, mm2)
            if r is not None:
                _add_term(out, r[1], x1 * x2 if r[0] > 0 else -x1 * x2)
    return out


def _kmc_worker(args):
    spec, D, monos, lo, hi, max_deg = args
    series = _is_series(spec)
    budget = max_deg + GAUGE_SLACK if series else None
    cache = _PairCache(spec, D=D, budget=budget)
    N = len(monos)
    Dp = D.scale(Fraction(1, 2))
    dp_vals = {}

    def Dp_of(mono):
        r = dp_vals.get(mono)
        if r is None:
            r = Dp.apply(SuperPoly(spec.m, spec.n, {mono: Fraction(1)})).terms
            dp_vals[mono] = r
        return r

    cnt = 0
    for i in range(lo, hi):
        f = monos[i]
        pf = mono_parity(f)
        for j in range(N):
            g = monos[j]
            pg = mono_parity(g)
            fg = cache.dmod_pair(f, g)
            s_fg = -1 if (pf and pg) else 1
            for k in range(N):
                h = monos[k]
                ph = mono_parity(h)
                # product rule for the modified bracket
                gh_prod = cache.product(g, h)
                r1: dict = {}
                if gh_prod is not None:
                    sg, mono_gh = gh_prod
                    for mono, x in cache.dmod_pair(f, mono_gh).items():
                        _add_term(r1, mono, x if sg > 0 else -x)
                for mono, x in fg.items():
                    r = mono_mul(mono, h)
                    if r is not None:
                        _add_term(r1, r[1], -x if r[0] > 0 else x)
                for mono, x in cache.dmod_pair(f, h).items():
                    r = mono_mul(g, mono)
                    if r is not None:
                        v = x if (s_fg * r[0]) > 0 else -x
                        _add_term(r1, r[1], -v)
                if gh_prod is not None:
                    sg, mono_gh = gh_prod
                    for mono, x in Dp_of(f).items():
                        r = mono_mul(mono, mono_gh)
                        if r is not None:
                            v = x if (sg * r[0]) > 0 else -x
                            _add_term(r1, r[1], -v)
                r1 = _filter_budget(r1, max_deg, series)
                cnt += 1
                if r1:
                    return cnt, (i, j, k), r1, "kmc-product"
                # double-bracket rule for the modified bracket
                gh = cache.dmod_pair(g, h)
                r2 = cache.dmod_with(f, gh)
                for mono, x in cache.dmod_right(fg, h).items():
                    _add_term(r2, mono, -x)
                for mono, x in cache.dmod_with(g, cache.dmod_pair(f, h)).items():
                    _add_term(r2, mono, -x if s_fg > 0 else x)
                for mono, x in _dict_mul(Dp_of(f), gh).items():
                    _add_term(r2, mono, x)
                s = -1 if (pf and (pg ^ ph)) else 1
                for mono, x in _dict_mul(Dp_of(g), cache.dmod_pair(h, f)).items():
                    _add_term(r2, mono, x if s > 0 else -x)
                s = -1 if (ph and (pf ^ pg)) else 1
                for mono, x in _dict_mul(Dp_of(h), fg).items():
                    _add_term(r2, mono, x if s > 0 else -x)
                r2 = _filter_budget(r2, max_deg, series)
                if r2:
                    return cnt, (i, j, k), r2, "kmc-jacobi"
    return cnt, None, None, None


def check_kmc(spec: BracketSpec, D: DerivationD, max_deg: int, workers=None) -> Report:
    """Both compatibility identities of the modified bracket {.,.}_D with
    D' = D/2, on ordered monomial triples."""
    t0 = time.perf_counter()
    series = _is_series(spec)
    monos = monomials(spec.m, spec.n, max_deg)
    N = len(monos)
    ce = None
    for cnt, bad, res, which in pmap_chunks(
        _kmc_worker,
        [(spec, D, monos, lo, hi, max_deg) for lo, hi in _ranges(N, workers)],
        workers,
    ):
        if bad and ce is None:
            ce = _counterexample(spec, monos, bad, res, which)
            break
    span = _span_description(spec, max_deg, N, series)
    span["orderedTriples"] = N**3
    return Report(
        suite="bracket-kmc",
        params={"kind": spec.kind, "m": spec.m, "n": spec.n, "maxDeg": max_deg},
        certified_span=span,
        status="pass" if ce is None else "fail",
        counterexample=ce,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )
