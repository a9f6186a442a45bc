"""Verification campaigns behind each CLI subcommand; each returns a report dict."""
from __future__ import annotations

import itertools
import time

from . import incidence as inc
from .cyclo import complete_square_failures, gauss_identities
from .field import is_prime, mk_field
from .geometry import Form
from .report import make_report, report_passed
from .spectrum import DEFAULT_CHAR_BUDGET, spectrum_verify
from .sumproduct import energy_plus, energy_plus_direct, sp_experiment


def _now() -> float:
    return time.perf_counter()


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000


def _assertion(name: str, lhs, rhs, ok: bool) -> dict:
    return {"name": name, "lhs": lhs, "rhs": rhs, "pass": bool(ok)}


# -- gauss ---------------------------------------------------------------------------


def gauss_results(p: int, ell: int, square_limit: int = 121) -> tuple[dict, list[dict]]:
    ctx = mk_field(p, ell)
    g = gauss_identities(ctx)
    res = {"p": p, "ell": ell, "q": ctx.q, **g}
    asserts = [
        _assertion(f"gauss_scaling[q={ctx.q}]", len(g["scaling_mismatches"]), 0, not g["scaling_mismatches"]),
        _assertion(f"gauss_modulus_sq[q={ctx.q}]", "G1*conj(G1)", ctx.q, g["modulus_sq"]),
        _assertion(f"gauss_square[q={ctx.q}]", "G1^2", ctx.eta(ctx.neg(1)) * ctx.q, g["square"]),
        _assertion(f"gauss_closed_form_square[q={ctx.q}]", "G1^2", "closed form", g["square_matches_explicit"]),
        _assertion(f"gauss_closed_form_fourth[q={ctx.q}]", "G1^4", "closed form", g["fourth_matches_explicit"]),
        _assertion(f"gauss_phase[q={ctx.q}]", g["phase_rel_error"], 1e-9, g["phase"]),
    ]
    if ctx.q <= square_limit:
        bad = [(a, b) for a in range(1, ctx.q) for b in complete_square_failures(a, ctx)]
        res["completing_square_pairs"] = (ctx.q - 1) * ctx.q
        res["completing_square_failures"] = bad
        asserts.append(_assertion(f"completing_square[q={ctx.q}]", len(bad), 0, not bad))
    return res, asserts


def cmd_gauss(p: int, ell: int, square_limit: int = 121) -> dict:
    t0 = _now()
    res, asserts = gauss_results(p, ell, square_limit)
    return make_report(
        "gauss", {"p": p, "ell": ell, "square_limit": square_limit}, [res],
        assertions=asserts, elapsed_ms=_ms(t0),
    )


# -- spectrum ---------------------------------------------------------------------------


def spectrum_assertions(rep) -> list[dict]:
    tag = f"{rep.form},q={rep.q},k={rep.k}"
    n = rep.q**rep.k
    out = [
        _assertion(f"formula_matches_oracle[{tag}]", len(rep.mismatches), 0, not rep.mismatches),
        _assertion(f"eigenvalue_sum[{tag}]", rep.trace_sum, n, rep.trace_ok),
        _assertion(f"eigenvalue_square_sum[{tag}]", rep.trace_sq_sum, n * rep.card, rep.plancherel_ok),
    ]
    if rep.positive_structure is not None:
        out.append(_assertion(
            f"single_positive_nontrivial[{tag}]", rep.max_nontrivial,
            rep.q ** ((rep.k - 2) // 2), rep.positive_structure,
        ))
    return out


def cmd_spectrum(p: int, ell: int, k: int, form: str, *, workers: int = 1,
                 budget: int = DEFAULT_CHAR_BUDGET, formula=None) -> dict:
    t0 = _now()
    ctx = mk_field(p, ell)
    rep = spectrum_verify(Form(form), ctx, k, workers=workers, budget=budget, formula=formula)
    return make_report(
        "spectrum", {"p": p, "ell": ell, "k": k, "form": form}, [rep],
        mismatches=rep.mismatches, assertions=spectrum_assertions(rep), elapsed_ms=_ms(t0),
    )


# -- mixing ---------------------------------------------------------------------------


def mixing_results(ctx, form: str, k: int, trials: int, size: int, seed: int, workers: int):
    rows = inc.mixing_suite(Form(form), ctx, k, trials, size, seed, workers)
    asserts = [
        _assertion(f"mixing_bound[{form},q={ctx.q},k={k},n={size},seed={r['seed']}]",
                   r["edges"], r["bound"], r["pass"])
        for r in rows
    ]
    return rows, asserts


def cmd_mixing(p: int, ell: int, k: int, form: str, trials: int, size: int,
               seed: int = 0, workers: int = 1) -> dict:
    t0 = _now()
    ctx = mk_field(p, ell)
    rows, asserts = mixing_results(ctx, form, k, trials, size, seed, workers)
    params = {"p": p, "ell": ell, "k": k, "form": form, "trials": trials, "size": size}
    return make_report("mixing", params, rows, assertions=asserts, seed=seed, elapsed_ms=_ms(t0))


# -- incidence ---------------------------------------------------------------------------


def _incidence_row(rep: inc.IncidenceReport, seed: int) -> dict:
    return {
        "seed": seed,
        "n_points": rep.n_points,
        "n_spheres": rep.n_spheres,
        "incidences": rep.incidences,
        "edges": rep.edges,
        "lift_form": rep.lift_form,
        "mixing_bound_applies": rep.mixing_bound_applies,
        "bounds": rep.bounds,
        "ratios": rep.ratios,
    }


def incidence_results(ctx, d, radius_class, n_points, n_spheres, trials, seed, workers):
    reps = inc.incidence_suite(ctx, d, radius_class, n_points, n_spheres, trials, seed, workers)
    rows, asserts = [], []
    for i, rep in enumerate(reps):
        s = seed + i
        rows.append(_incidence_row(rep, s))
        for a in rep.assertions:
            asserts.append({
                **a,
                "name": f"{a['name']}[q={ctx.q},{inc.RadiusClass(radius_class).value},"
                        f"P={n_points},S={n_spheres},seed={s}]",
            })
    return rows, asserts


def cmd_incidence(p: int, ell: int, d: int, radius_class: str, n_points: int, n_spheres: int,
                  trials: int, seed: int = 0, workers: int = 1) -> dict:
    t0 = _now()
    ctx = mk_field(p, ell)
    rows, asserts = incidence_results(ctx, d, radius_class, n_points, n_spheres, trials, seed, workers)
    params = {"p": p, "ell": ell, "d": d, "radius_class": radius_class,
              "np": n_points, "ns": n_spheres, "trials": trials}
    return make_report("incidence", params, rows, assertions=asserts, seed=seed, elapsed_ms=_ms(t0))


# -- distance ---------------------------------------------------------------------------


def distance_results(ctx, d: int, size: int, trials: int, seed: int, workers: int):
    rows = inc.distance_suite(ctx, d, size, trials, seed, workers)
    asserts = [
        _assertion(f"distance_upper[q={ctx.q},n={size},seed={r['seed']}]",
                   r["max_count"], r["upper_bound"], r["pass"])
        for r in rows
    ]
    return rows, asserts


def cmd_distance(p: int, ell: int, d: int, size: int, trials: int,
                 seed: int = 0, workers: int = 1) -> dict:
    t0 = _now()
    ctx = mk_field(p, ell)
    rows, asserts = distance_results(ctx, d, size, trials, seed, workers)
    params = {"p": p, "ell": ell, "d": d, "size": size, "trials": trials}
    return make_report("distance", params, rows, assertions=asserts, seed=seed, elapsed_ms=_ms(t0))


# -- sum-product -------------------------------------------------------------------------


def cmd_sumprod(p: int, ell: int, d: int, size_a: int, trials: int, seed: int = 0,
                debug: bool = False) -> dict:
    t0 = _now()
    ctx = mk_field(p, ell)
    rep = sp_experiment(ctx, d, size_a, trials, seed, debug=debug)
    asserts = [
        _assertion(f"tuple_classes_partition[seed={r.seed}]",
                   r.square_tuples + r.nonsquare_tuples + r.zero_tuples, r.size_A**d, r.identity_ok)
        for r in rep.rows
    ]
    if debug:
        asserts += [
            _assertion(f"solution_count_lower[seed={r.seed}]", r.debug["solutions"],
                       r.square_tuples * r.size_A**d, r.debug["lower_bound_ok"])
            for r in rep.rows
        ]
    params = {"p": p, "ell": ell, "d": d, "sizeA": size_a, "trials": trials, "q": ctx.q}
    return make_report("sumprod", params, rep.rows, assertions=asserts, seed=seed, elapsed_ms=_ms(t0))


def energy_oracle_mismatches(q_max: int = 19, max_size: int = 4, d_values=(2, 3)) -> tuple[int, list]:
    """Histogram energy vs direct enumeration on every A with |A| <= max_size."""
    checked, bad = 0, []
    for q in range(3, q_max + 1, 2):
        fields = [(q, 1)] if is_prime(q) else [
            (p, e) for p in range(3, q + 1, 2) if is_prime(p)
            for e in range(2, 6) if p**e == q
        ]
        for p, e in fields:
            ctx = mk_field(p, e)
            for size in range(1, max_size + 1):
                for A in itertools.combinations(range(q), size):
                    A = set(A)
                    for d in d_values:
                        checked += 1
                        if energy_plus(A, d, ctx) != energy_plus_direct(A, d, ctx):
                            bad.append({"q": q, "A": sorted(A), "d": d})
    return checked, bad


# -- the full matrix -----------------------------------------------------------------------

GAUSS_FIELDS = [(p, e) for p in (3, 5, 7, 11, 13) for e in (1, 2, 3) if p**e <= 343]
SPECTRUM_CELLS = [
    ("cone", 3, 4), ("cone", 7, 4), ("cone", 11, 4),
    ("cone", 5, 4), ("cone", 3, 6),
    ("cone", 3, 3), ("cone", 7, 3), ("cone", 3, 5),
    ("norm", 3, 6), ("norm", 3, 4), ("norm", 5, 2), ("norm", 13, 2),
    ("norm", 3, 3), ("norm", 7, 3),
    ("norm", 7, 6),  # heaviest cell; runs only within budget
]
MIXING_CELLS = [("cone", 3, 4), ("cone", 7, 4), ("cone", 11, 4), ("norm", 3, 6), ("norm", 7, 6)]
INCIDENCE_QS = (7, 11, 19, 23)
INCIDENCE_SIZES = (10, 50, 200)
DISTANCE_QS = (7, 11, 19)
DISTANCE_SIZES = (10, 50, 100, 200, 300)


def _spectrum_cost(form: str, q: int, k: int) -> int:
    # variety size is about q^(k-1)
    return q**k * q ** (k - 1)


def _mixing_cost(q: int, k: int, size: int, trials: int = 100) -> int:
    # large sets are counted through their complement
    m = min(size, q**k - size)
    return trials * min(m * m, m * q ** (k - 1))


def cmd_verify_all(budget: int = DEFAULT_CHAR_BUDGET, workers: int = 1, seed: int = 0) -> dict:
    t0 = _now()
    results: list[dict] = []
    asserts: list[dict] = []
    mismatches: list[dict] = []

    def cell(name: str, cost: int, fn):
        if cost > budget:
            results.append({"cell": name, "status": "skipped", "cost": cost})
            return
        c0 = _now()
        cell_asserts, detail = fn()
        ok = all(a["pass"] for a in cell_asserts)
        asserts.extend(cell_asserts)
        results.append({
            "cell": name, "status": "pass" if ok else "fail", "cost": cost,
            "checks": len(cell_asserts), "detail": detail,
            "ms": round(_ms(c0)),
        })

    for p, e in GAUSS_FIELDS:
        def run(p=p, e=e):
            res, a = gauss_results(p, e)
            return a, {"explicit": res["explicit"]}
        cell(f"gauss[p={p},ell={e}]", (p**e) ** 2, run)

    for form, q, k in SPECTRUM_CELLS:
        def run(form=form, q=q, k=k):
            rep = spectrum_verify(Form(form), mk_field(q), k, workers=workers, budget=budget)
            mismatches.extend({"cell": f"{form},q={q},k={k}", **m} for m in rep.mismatches)
            return spectrum_assertions(rep), {
                "case": rep.case, "card": rep.card, "branch_values": rep.branch_values,
                "branch_counts": rep.branch_counts,
            }
        cell(f"spectrum[{form},q={q},k={k}]", _spectrum_cost(form, q, k), run)

    for form, q, k in MIXING_CELLS:
        for size in (1, 10, 50, q ** (k // 2), q**k):
            def run(form=form, q=q, k=k, size=size):
                rows, a = mixing_results(mk_field(q), form, k, 100, size, seed, workers)
                return a, {"max_edges": max(r["edges"] for r in rows)}
            cell(f"mixing[{form},q={q},k={k},n={size}]", _mixing_cost(q, k, size), run)

    for q in INCIDENCE_QS:
        for rc in ("square", "nonsquare"):
            def run(q=q, rc=rc):
                ctx = mk_field(q)
                a_all, worst = [], 0.0
                for j in range(25):
                    n_p, n_s = list(itertools.product(INCIDENCE_SIZES, repeat=2))[j % 9]
                    rows, a = incidence_results(ctx, 3, rc, n_p, n_s, 1, seed + j, 1)
                    a_all += a
                    worst = max(worst, rows[0]["ratios"]["shape"])
                return a_all, {"instances": 25, "max_shape_ratio": worst}
            cell(f"incidence[q={q},{rc}]", 25 * 200 * 200, run)

    for q in DISTANCE_QS:
        def run(q=q):
            ctx = mk_field(q)
            a_all = []
            for j in range(50):
                size = DISTANCE_SIZES[j % len(DISTANCE_SIZES)]
                _, a = distance_results(ctx, 3, size, 1, seed + j, 1)
                a_all += a
            return a_all, {"sets": 50}
        cell(f"distance[q={q}]", 50 * 300 * 300, run)

    def run_energy():
        checked, bad = energy_oracle_mismatches()
        return [_assertion("energy_histogram_vs_direct", len(bad), 0, not bad)], {"checked": checked}
    cell("sumprod[energy_oracle]", 10**7, run_energy)

    def run_tuples():
        rep = sp_experiment(mk_field(19), 3, 5, 100, seed)
        bad = [r.seed for r in rep.rows if not r.identity_ok]
        return [_assertion("tuple_classes_partition[100 sets]", len(bad), 0, not bad)], {"trials": 100}
    cell("sumprod[tuple_identity]", 100 * 125, run_tuples)

    return make_report(
        "verify-all", {"budget": budget}, results,
        mismatches=mismatches, assertions=asserts, seed=seed, elapsed_ms=_ms(t0),
    )


__all__ = [
    "cmd_distance", "cmd_gauss", "cmd_incidence", "cmd_mixing", "cmd_spectrum",
    "cmd_sumprod", "cmd_verify_all", "report_passed",
]
