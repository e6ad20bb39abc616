"""The desk-scale acceptance battery: one callable per criterion, each
returning a Report whose certified span states exactly what was quantified.

Every check is exact rational (or Gauss-rational) arithmetic; "certified
span" entries on truncated carriers mean the stated tuple set was verified
and everything that would have needed an out-of-span product was counted and
skipped, never silently dropped.
"""

from __future__ import annotations

import time
from fractions import Fraction

from . import brackets as br
from . import jordan as jd
from . import lieclass as lc
from . import schouten as sch
from . import tkk as tk
from .report import Report, merge_reports
from .superpoly import SuperPoly, monomials_total_degree, mono_parity


def _sub(reports, suite, params):
    return merge_reports(suite, params, reports)


def criterion_1_jordan_identities(workers=None) -> Report:
    """Both multiplication-operator identities across the whole catalog."""
    t0 = time.perf_counter()
    reports = []
    for name, thunk in jd.identity_catalog():
        J = thunk()
        r1 = jd.check_jordan(J, workers=workers)
        r1.suite = f"jordan-identity[{name}]"
        reports.append(r1)
        r2 = jd.check_relation10(J, workers=workers)
        r2.suite = f"relation10[{name}]"
        reports.append(r2)
    out = _sub(reports, "criterion-1-jordan-identities", {"entries": len(reports)})
    out.elapsed_ms = (time.perf_counter() - t0) * 1000
    return out


BRACKET_SIGNATURES_H = [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5),
                        (1, 0), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1)]
BRACKET_SIGNATURES_K = [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4),
                        (1, 0), (1, 1), (1, 2), (2, 0)]


def criterion_2_brackets(max_deg: int = 3, workers=None) -> Report:
    """Antisymmetry + Jacobi, the generalized product rule, and the two
    modified-bracket identities for the built-in brackets at every signature
    with at most five generators."""
    t0 = time.perf_counter()
    reports = []
    for k, n in BRACKET_SIGNATURES_H:
        spec = br.BracketSpec.h_type(k, n)
        D0 = br.DerivationD.zero(spec.m, spec.n)
        for fn, D in ((br.check_jacobi, None), (br.check_gen_leibniz, D0),
                      (br.check_kmc, D0)):
            r = fn(spec, max_deg, workers=workers) if D is None else fn(
                spec, D, max_deg, workers=workers)
            r.suite = f"{r.suite}[h({2*k},{n})]"
            reports.append(r)
    for k, n in BRACKET_SIGNATURES_K:
        spec = br.BracketSpec.k_type(k, n)
        D2 = br.DerivationD.multiple_of_dt(spec.m, spec.n)
        for fn, D in ((br.check_jacobi, None), (br.check_gen_leibniz, D2),
                      (br.check_kmc, D2)):
            r = fn(spec, max_deg, workers=workers) if D is None else fn(
                spec, D, max_deg, workers=workers)
            r.suite = f"{r.suite}[k({2*k+1},{n})]"
            reports.append(r)
    out = _sub(reports, "criterion-2-brackets", {"maxDeg": max_deg})
    out.elapsed_ms = (time.perf_counter() - t0) * 1000
    return out


SCHOUTEN_PARAMS = [(0, 3), (1, 2), (1, 3)]


def criterion_3_schouten(max_deg: int = 3) -> Report:
    """Closure conditions for the paired presentations, pointwise agreement
    of the biderivation bracket with the built-ins, and the forward
    direction conditions => Jacobi on the same span."""
    t0 = time.perf_counter()
    reports = []
    for k, n in SCHOUTEN_PARAMS:
        for kind in ("h", "k"):
            pair = (sch.pairing_h_pair if kind == "h" else sch.pairing_k_pair)(k, n)
            r = sch.check_s_conditions(pair)
            r.suite = f"schouten-conditions[{kind}({k},{n})]"
            reports.append(r)
            spec = (br.BracketSpec.h_type if kind == "h" else br.BracketSpec.k_type)(k, n)
            reports.append(_gpb_agreement(pair, spec, max_deg, f"{kind}({k},{n})"))
            reports.append(_gpb_jacobi(pair, spec, max_deg, f"{kind}({k},{n})"))
    out = _sub(reports, "criterion-3-schouten", {"maxDeg": max_deg})
    out.elapsed_ms = (time.perf_counter() - t0) * 1000
    return out


def _gpb_agreement(pair, spec, max_deg, tag) -> Report:
    t0 = time.perf_counter()
    monos = monomials_total_degree(spec.m, spec.n, max_deg)
    ce = None
    for m1 in monos:
        f = SuperPoly(spec.m, spec.n, {m1: Fraction(1)})
        for m2 in monos:
            g = SuperPoly(spec.m, spec.n, {m2: Fraction(1)})
            if sch.gpb_from_ac(pair, f, g) != br.bracket(spec, f, g):
                ce = {"monomials": [f.render(), g.render()]}
                break
        if ce:
            break
    return Report(
        f"schouten-gpb-pointwise[{tag}]",
        {"maxDeg": max_deg},
        {"pairs": len(monos) ** 2},
        "pass" if ce is None else "fail",
        ce,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


def _gpb_jacobi(pair, spec, max_deg, tag) -> Report:
    """Jacobi for the biderivation bracket itself, on monomial multisets,
    with all values assembled from a monomial-pair cache (the identity is
    multilinear, so this is exhaustive over the span)."""
    t0 = time.perf_counter()
    monos = monomials_total_degree(spec.m, spec.n, max_deg)
    N = len(monos)
    m, n = spec.m, spec.n
    cache: dict = {}

    def gp(ma, mb) -> dict:
        key = (ma, mb)
        r = cache.get(key)
        if r is None:
            f = SuperPoly(m, n, {ma: Fraction(1)})
            g = SuperPoly(m, n, {mb: Fraction(1)})
            r = sch.gpb_from_ac(pair, f, g).terms
            cache[key] = r
        return r

    def gp_left(ma, terms: dict) -> dict:
        out: dict = {}
        for mb, c in terms.items():
            for mono, x in gp(ma, mb).items():
                s = out.get(mono)
                v = c * x
                if s is None:
                    if v:
                        out[mono] = v
                else:
                    s = s + v
                    if s:
                        out[mono] = s
                    else:
                        del out[mono]
        return out

    def gp_right(terms: dict, mb) -> dict:
        out: dict = {}
        for ma, c in terms.items():
            for mono, x in gp(ma, mb).items():
                s = out.get(mono)
                v = c * x
                if s is None:
                    if v:
                        out[mono] = v
                else:
                    s = s + v
                    if s:
                        out[mono] = s
                    else:
                        del out[mono]
        return out

    ce = None
    for i in range(N):
        if ce:
            break
        pi = mono_parity(monos[i])
        for j in range(i, N):
            pj = mono_parity(monos[j])
            s = -1 if (pi and pj) else 1
            anti = dict(gp(monos[i], monos[j]))
            for mono, x in gp(monos[j], monos[i]).items():
                t = anti.get(mono)
                v = x if s > 0 else -x
                if t is None:
                    if v:
                        anti[mono] = v
                else:
                    t = t + v
                    if t:
                        anti[mono] = t
                    else:
                        del anti[mono]
            if anti:
                ce = {"identity": "antisymmetry", "indices": [i, j]}
                break
            ij = gp(monos[i], monos[j])
            for k in range(j, N):
                res = gp_left(monos[i], gp(monos[j], monos[k]))
                for mono, x in gp_right(ij, monos[k]).items():
                    t = res.get(mono)
                    if t is None:
                        if x:
                            res[mono] = -x
                    else:
                        t = t - x
                        if t:
                            res[mono] = t
                        else:
                            del res[mono]
                for mono, x in gp_left(monos[j], gp(monos[i], monos[k])).items():
                    v = x if s > 0 else -x
                    t = res.get(mono)
                    if t is None:
                        if v:
                            res[mono] = -v
                    else:
                        t = t - v
                        if t:
                            res[mono] = t
                        else:
                            del res[mono]
                if res:
                    ce = {"identity": "jacobi", "indices": [i, j, k]}
                    break
            if ce:
                break
    return Report(
        f"schouten-gpb-jacobi[{tag}]",
        {"maxDeg": max_deg},
        {"tripleMultisets": N * (N + 1) * (N + 2) // 6},
        "pass" if ce is None else "fail",
        ce,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


def criterion_4_tkk(workers=None) -> Report:
    """Round trip, triple and minimality for every total unital catalog
    entry, plus the fixed graded dimensions of the family over the sampled
    parameters."""
    t0 = time.perf_counter()
    reports = []
    for name, J in jd.unital_identity_catalog():
        real = tk.TKK(J)
        r = real.round_trip()
        r.suite = f"tkk-roundtrip[{name}]"
        reports.append(r)
        r = real.check_triple()
        r.suite = f"tkk-triple[{name}]"
        reports.append(r)
        r = real.check_minimal()
        r.suite = f"tkk-minimal[{name}]"
        reports.append(r)
        if name.startswith("D_t("):
            # frozen derived fixture: the 17-dimensional one-parameter family,
            # except at t = -1 where the degree-0 span degenerates and the
            # construction lands on the (6|8)-dimensional simple quotient
            dims = real.dims()
            want = (6, 8) if name == "D_t(-1)" else (9, 8)
            ok = dims == want
            reports.append(Report(
                f"tkk-dims[{name}]", {}, {"dims": list(dims)},
                "pass" if ok else "fail",
                None if ok else {"dims": list(dims), "expected": list(want)},
            ))
    out = _sub(reports, "criterion-4-tkk", {"entries": len(reports)})
    out.elapsed_ms = (time.perf_counter() - t0) * 1000
    return out


def criterion_5_simplicity(seed: int = 0) -> Report:
    """Simplicity verdicts across the parametric family, the three-dimensional
    non-unital algebra, the finite bracket Lie superalgebras, and the
    degenerate odd-derivation double."""
    t0 = time.perf_counter()
    cases = [
        ("D_t(1)", jd.dt(1), True),
        ("D_t(2)", jd.dt(2), True),
        ("D_t(-1)", jd.dt(-1), True),
        ("D_t(1/2)", jd.dt(Fraction(1, 2)), True),
        ("D_t(-3/7)", jd.dt(Fraction(-3, 7)), True),
        ("D_t(0)", jd.dt(0), False),
        ("K", jd.kalg(), True),
        ("H(0,3)", lc.h_zero_n_lie(3), False),
        ("H(0,4)", lc.h_zero_n_lie(4), True),
        ("JS|deg0", jd.build_js(0), False),
    ]
    reports = []
    for name, J, expected in cases:
        r = jd.check_simple_report(J, expected=expected, seed=seed)
        r.suite = f"simplicity[{name}]"
        reports.append(r)
    out = _sub(reports, "criterion-5-simplicity", {"seed": seed})
    out.elapsed_ms = (time.perf_counter() - t0) * 1000
    return out


SHORT_GRADING_TARGETS = (
    [("sl", s) for s in range(2, 9)]
    + [("so", s) for s in range(5, 9)]
    + [("sp", s) for s in (4, 6, 8)]
)


def criterion_6_short_gradings(seed: int = 0) -> Report:
    t0 = time.perf_counter()
    reports = []
    for fam, size in SHORT_GRADING_TARGETS:
        L = lc.classical(fam, size)
        r = lc.enumerate_short_gradings(L, seed=seed)
        r.suite = f"short-gradings[{fam}{size}]"
        reports.append(r)
    out = _sub(reports, "criterion-6-short-gradings", {"seed": seed})
    out.elapsed_ms = (time.perf_counter() - t0) * 1000
    return out


def criterion_7_isomorphisms() -> Report:
    t0 = time.perf_counter()
    reports = []
    for name, witness in [
        ("JP(0,1)~gl(1,1)+", jd.witness_jp01_to_gl11()),
        ("(1,2)+~D_1", jd.witness_form12_to_d1()),
        ("D_2~D_1/2", jd.witness_dt_inverse(2)),
        ("D_-3~D_-1/3", jd.witness_dt_inverse(-3)),
    ]:
        r = jd.check_iso(witness)
        r.suite = f"iso-witness[{name}]"
        reports.append(r)
    for k, n in [(0, 4), (0, 5), (1, 3)]:
        r = lc.example71_iso(k, n, 3)
        r.suite = f"iso-h-double[k={k},n={n}]"
        reports.append(r)
    for k, n in [(0, 3), (0, 4)]:
        r = lc.example72_iso(k, n, 3)
        r.suite = f"iso-k-double[k={k},n={n}]"
        reports.append(r)
    out = _sub(reports, "criterion-7-isomorphisms", {})
    out.elapsed_ms = (time.perf_counter() - t0) * 1000
    return out


def criterion_8_semidirect(seed: int = 0) -> Report:
    t0 = time.perf_counter()
    reports = []
    r = tk.check_semidirect(jd.kalg(), seed=seed)
    r.suite = "semidirect[K]"
    reports.append(r)
    r = tk.check_semidirect(jd.build_js(3), carrier=jd.build_js(24), seed=seed)
    r.suite = "semidirect[JS|deg3]"
    reports.append(r)
    out = _sub(reports, "criterion-8-semidirect", {"seed": seed})
    out.elapsed_ms = (time.perf_counter() - t0) * 1000
    return out


def criterion_9_determinism() -> Report:
    """Byte-identical canonical JSON across reruns and worker counts."""
    t0 = time.perf_counter()
    spec = br.BracketSpec.k_type(0, 2)
    a = br.check_jacobi(spec, 2, workers=1).to_json()
    b = br.check_jacobi(spec, 2, workers=2).to_json()
    c = br.check_jacobi(spec, 2, workers=3).to_json()
    r1 = jd.check_jordan(jd.dt(2)).to_json()
    r2 = jd.check_jordan(jd.dt(2)).to_json()
    s1 = jd.check_simple_report(jd.kalg(), expected=True, seed=0).to_json()
    s2 = jd.check_simple_report(jd.kalg(), expected=True, seed=0).to_json()
    ok = (a == b == c) and (r1 == r2) and (s1 == s2)
    return Report(
        "criterion-9-determinism",
        {},
        {"comparisons": ["workers 1/2/3", "rerun jordan", "rerun sampled"]},
        "pass" if ok else "fail",
        None if ok else {"workerRuns": [a, b, c], "reruns": [r1, r2]},
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


CRITERIA = [
    ("1 jordan-identities", criterion_1_jordan_identities),
    ("2 brackets", criterion_2_brackets),
    ("3 schouten", criterion_3_schouten),
    ("4 tkk", criterion_4_tkk),
    ("5 simplicity", criterion_5_simplicity),
    ("6 short-gradings", criterion_6_short_gradings),
    ("7 isomorphisms", criterion_7_isomorphisms),
    ("8 semidirect", criterion_8_semidirect),
    ("9 determinism", criterion_9_determinism),
]


def run_battery(workers=None, echo=print):
    """Run all criteria, one pass/fail line each; returns the reports."""
    reports = []
    for name, fn in CRITERIA:
        try:
            rep = fn(workers=workers) if "workers" in fn.__code__.co_varnames else fn()
        except Exception as exc:  # surface, never hide
            rep = Report(f"criterion-{name}", {}, {}, "error",
                         {"exception": repr(exc)})
        reports.append(rep)
        stamp = "PASS" if rep.passed else rep.status.upper()
        ms = f" ({rep.elapsed_ms/1000:.1f}s)" if rep.elapsed_ms else ""
        echo(f"[{stamp}] criterion {name}{ms}")
    return reports
