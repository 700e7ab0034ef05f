"""Command-line front end: validation gate, experiment dispatch, and
deterministic CSV/JSON emission.

Every artifact opens with comment lines echoing the full configuration and
tool version, so two runs with equal configs are byte-identical (including
parallel runs: all reductions merge in ascending key order).  Exit codes:
0 success, 2 validation failure, 3 work-limit refusal.
"""

import argparse
import json
import sys

from . import __version__, almost_prime, congruence, distribution, lattice, sieve_core
from .forms import BinaryForm, InadmissibleFormError, require_admissible
from .kernels import BACKEND


def _fmt(x):
    """CSV number formatting: 15 significant digits for floats."""
    if isinstance(x, float):
        return f"{x:.15g}"
    return str(x)


def _config_dict(args, sub, keys):
    cfg = {
        "tool": "formsieve",
        "version": __version__,
        "backend": BACKEND,
        "subcommand": sub,
        "form": args.form,
    }
    for k in keys:
        cfg[k] = getattr(args, k.replace("-", "_"))
    return cfg


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w"), True


def _emit_csv(path, config, colnames, rows, trailer=None):
    stream, close = _open_out(path)
    try:
        stream.write(f"# formsieve {__version__}\n")
        stream.write(f"# config {json.dumps(config)}\n")
        stream.write(",".join(colnames) + "\n")
        for row in rows:
            stream.write(",".join(_fmt(x) for x in row) + "\n")
        if trailer is not None:
            stream.write(f"# summary {json.dumps(trailer)}\n")
    finally:
        if close:
            stream.close()


def _emit_json(path, obj):
    stream, close = _open_out(path)
    try:
        json.dump(obj, stream, indent=2)
        stream.write("\n")
    finally:
        if close:
            stream.close()


def _load_alpha(source, n_max):
    if source == "primes":
        return sieve_core.CoefficientSequence.primes(n_max)
    if source == "ones":
        return sieve_core.CoefficientSequence.ones(n_max)
    if source == "zeros":
        return sieve_core.CoefficientSequence.zeros(n_max)
    if source.startswith("csv:"):
        return sieve_core.CoefficientSequence.from_csv(source[4:], n_max)
    raise ValueError(f"unknown alpha source {source!r} (primes | ones | zeros | csv:FILE)")


def _gate(args):
    form = BinaryForm.parse(args.form)
    require_admissible(form, assume_irreducible=args.assume_irreducible)
    return form


def _cmd_nu(args):
    form = _gate(args)
    cfg = _config_dict(args, "nu", ["d_max"])
    cache = congruence.RootCache(form.dehomogenize(), args.d_max)
    rows = [(d, cache.nu(d)) for d in range(1, args.d_max + 1)]
    _emit_csv(args.csv_out, cfg, ["d", "nu"], rows)
    return 0


def _cmd_classes(args):
    form = _gate(args)
    cfg = _config_dict(args, "classes", ["d"])
    classes = lattice.classes_uprime(form, args.d)
    rows = [(c.d, c.rho, c.basis.b11, c.basis.b12, c.basis.b21, c.basis.b22) for c in classes]
    _emit_csv(args.csv_out, cfg, ["d", "rho", "B11", "B12", "B21", "B22"], rows)
    return 0


def _cmd_psi_check(args):
    form = _gate(args)
    cfg = _config_dict(args, "psi-check", ["d", "n", "vmax", "delta", "alpha", "quad_tol"])
    W = sieve_core.WeightFunction(quad_tol=args.quad_tol)
    alpha = _load_alpha(args.alpha, args.n)
    vmax = args.vmax if args.vmax is not None else sieve_core.default_v_max(args.d, args.n, args.delta)
    classes = lattice.classes_uprime(form, args.d)
    per_class = []
    td = tp = tm = 0.0 + 0.0j
    for c in classes:
        pd = sieve_core.psi_direct(c.basis, args.n, alpha, W)
        pp = sieve_core.psi_poisson(c.basis, args.n, alpha, W, vmax)
        mt = sieve_core.main_term(c.basis, args.n, alpha, W)
        td += pd
        tp += pp
        tm += mt
        per_class.append({
            "rho": c.rho,
            "basis": [c.basis.b11, c.basis.b12, c.basis.b21, c.basis.b22],
            "psi_direct": [pd.real, pd.imag],
            "psi_poisson": [pp.real, pp.imag],
            "main_term": [mt.real, mt.imag],
            "abs_error": abs(pp - pd),
        })
    out = {
        "config": cfg,
        "nu": len(classes),
        "vmax": vmax,
        "psi_direct": [td.real, td.imag],
        "psi_poisson": [tp.real, tp.imag],
        "main_term": [tm.real, tm.imag],
        "abs_error": abs(tp - td),
        "classes": per_class,
    }
    _emit_json(args.json_out, out)
    return 0


def _cmd_family_exp(args):
    form = _gate(args)
    cfg = _config_dict(args, "family-exp", ["d", "m1", "n", "delta", "alpha", "quad_tol"])
    W = sieve_core.WeightFunction(quad_tol=args.quad_tol)
    alpha = _load_alpha(args.alpha, args.n)
    spec = sieve_core.build_family(form, args.d, args.m1, args.n, delta=args.delta)
    report = sieve_core.family_discrepancy(spec, alpha, W)
    rows = [
        (i, b11, det, abs(psi), abs(mt), err)
        for (i, b11, det, psi, mt, err) in report.rows
    ]
    rows.append(("TOTAL", len(spec.lattices), spec.D, report.total_error,
                 report.trivial_scale, report.total_error))
    trailer = {
        "case": report.case,
        "total_error": report.total_error,
        "trivial_scale": report.trivial_scale,
        "bound_shape": report.bound_shape,
        "ratio_to_trivial": report.ratio_to_trivial,
        "ratio_to_bound_shape": report.ratio_to_bound_shape,
        "lattices": len(spec.lattices),
    }
    _emit_csv(args.csv_out, cfg, ["lattice_id", "B11", "det", "psi", "main", "abs_err"],
              rows, trailer=trailer)
    if args.json_out:
        _emit_json(args.json_out, {"config": cfg, **trailer})
    return 0


def _cmd_lod(args):
    form = _gate(args)
    cfg = _config_dict(args, "lod", ["n", "theta", "alpha", "eta", "split_b11",
                                     "jobs", "work_limit", "quad_tol"])
    W = sieve_core.WeightFunction(quad_tol=args.quad_tol)
    alpha = _load_alpha(args.alpha, args.n)
    report = distribution.lod_experiment(
        form, args.n, args.theta, alpha, W,
        eta=args.eta, split_b11=args.split_b11,
        work_limit=args.work_limit, jobs=args.jobs,
    )
    rows = [(d, nu_d, abs(A), abs(M), err) for (d, nu_d, A, M, err) in report.records]
    summary = {"config": cfg, **report.summary()}
    _emit_csv(args.csv_out, cfg, ["d", "nu", "abs_A", "abs_M", "abs_err"], rows,
              trailer=report.summary())
    if args.json_out:
        _emit_json(args.json_out, summary)
    return 0


def _cmd_prime_square(args):
    form = _gate(args)
    cfg = _config_dict(args, "prime-square", ["n", "delta1", "quad_tol"])
    W = sieve_core.WeightFunction(quad_tol=args.quad_tol)
    alpha = sieve_core.CoefficientSequence.primes(args.n)
    total = distribution.prime_square_sum(form, args.n, args.delta1, alpha, W)
    _emit_json(args.json_out, {
        "config": cfg,
        "sum": total,
        "normalized": total / args.n**2,
    })
    return 0


def _cmd_census(args):
    form = _gate(args)
    cfg = _config_dict(args, "census", ["n", "r", "alpha_exp", "beta_exp", "jobs", "seed"])
    report = almost_prime.census(
        form, args.n, r=args.r, alpha_exp=args.alpha_exp, beta_exp=args.beta_exp,
        collect_pairs=args.pairs_csv is not None, jobs=args.jobs,
        rho_seed=args.seed,
    )
    if args.pairs_csv:
        _emit_csv(args.pairs_csv, cfg, ["p", "n", "value", "omega"], report.pairs)
    _emit_json(args.json_out, {"config": cfg, **report.summary()})
    return 0


def _cmd_cf(args):
    form = _gate(args)
    cfg = _config_dict(args, "cf", ["zmax", "z_grid"])
    if args.z_grid:
        grid = sorted(int(z) for z in args.z_grid.split(","))
    else:
        grid = []
        z = 100
        while z <= args.zmax:
            grid.append(z)
            z *= 10
        if not grid or grid[-1] != args.zmax:
            grid.append(args.zmax)
    rows = almost_prime.singular_series(form, grid)
    _emit_csv(args.csv_out, cfg, ["z", "estimate"], rows)
    return 0


def _add_common(sub, csv_out=False, json_out=False):
    sub.add_argument("--form", required=True,
                     help="coefficients a0,a1,...,ak of f = sum a_i x^(k-i) y^i")
    sub.add_argument("--assume-irreducible", action="store_true",
                     help="accept a form without an irreducibility certificate")
    if csv_out:
        sub.add_argument("--csv-out", default="-", help="CSV output path ('-' = stdout)")
    if json_out:
        sub.add_argument("--json-out", default="-", help="JSON output path ('-' = stdout)")


def build_parser():
    p = argparse.ArgumentParser(
        prog="formsieve",
        description="Congruence lattices and almost-prime values of binary forms",
    )
    p.add_argument("--version", action="version", version=f"formsieve {__version__}")
    subs = p.add_subparsers(dest="command", required=True)

    s = subs.add_parser("nu", help="root counts nu(d) for all d <= D")
    _add_common(s, csv_out=True)
    s.add_argument("--d-max", type=int, required=True)
    s.set_defaults(fn=_cmd_nu)

    s = subs.add_parser("classes", help="solution classes and reduced bases at one modulus")
    _add_common(s, csv_out=True)
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(fn=_cmd_classes)

    s = subs.add_parser("psi-check", help="direct vs Poisson-dual lattice sums at one modulus")
    _add_common(s, json_out=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--vmax", type=int, default=None)
    s.add_argument("--delta", type=float, default=0.05)
    s.add_argument("--alpha", default="primes")
    s.add_argument("--quad-tol", type=float, default=sieve_core.DEFAULT_QUAD_TOL)
    s.set_defaults(fn=_cmd_psi_check)

    s = subs.add_parser("family-exp", help="averaged discrepancy over a lattice family")
    _add_common(s, csv_out=True, json_out=False)
    s.add_argument("--d", type=int, required=True, help="dyadic determinant scale D")
    s.add_argument("--m1", type=int, required=True, help="dyadic B11 scale M1")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--delta", type=float, default=0.05)
    s.add_argument("--alpha", default="primes")
    s.add_argument("--quad-tol", type=float, default=sieve_core.DEFAULT_QUAD_TOL)
    s.add_argument("--json-out", default=None)
    s.set_defaults(fn=_cmd_family_exp)

    s = subs.add_parser("lod", help="level-of-distribution experiment over d ~ N^theta")
    _add_common(s, csv_out=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--theta", type=float, required=True)
    s.add_argument("--alpha", default="primes")
    s.add_argument("--eta", type=float, default=0.05)
    s.add_argument("--split-b11", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--work-limit", type=int, default=None)
    s.add_argument("--quad-tol", type=float, default=sieve_core.DEFAULT_QUAD_TOL)
    s.add_argument("--json-out", default=None)
    s.set_defaults(fn=_cmd_lod)

    s = subs.add_parser("prime-square", help="sum of |A_{p^2}| over a prime window")
    _add_common(s, json_out=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--delta1", type=float, required=True)
    s.add_argument("--quad-tol", type=float, default=sieve_core.DEFAULT_QUAD_TOL)
    s.set_defaults(fn=_cmd_prime_square)

    s = subs.add_parser("census", help="almost-prime census of f(p, n)")
    _add_common(s, json_out=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, default=None)
    s.add_argument("--alpha-exp", type=float, default=0.1)
    s.add_argument("--beta-exp", type=float, default=0.5)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--seed", type=int, default=0, help="offset for the rho increment schedule")
    s.add_argument("--pairs-csv", default=None, help="optional per-pair CSV dump")
    s.set_defaults(fn=_cmd_census)

    s = subs.add_parser("cf", help="singular product estimates over a z grid")
    _add_common(s, csv_out=True)
    s.add_argument("--zmax", type=int, required=True)
    s.add_argument("--z-grid", default=None, help="comma-separated z values (overrides decades)")
    s.set_defaults(fn=_cmd_cf)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except distribution.WorkLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InadmissibleFormError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
