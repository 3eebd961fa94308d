"""Command line front end: eval, compare, coeffs, order-report, table.

Exit codes: 0 ok, 1 bad input, 2 domain or pole error, 3 convergence failure.
Complex arguments are ``re`` or ``re,im``; use ``--y=-100`` style for negatives.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys

from mpmath import mp, mpc, mpf

from .core import ConvergenceError, DomainError, EvalOutcome, PrecisionContext, cnum
from .expansion import Expansion

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 1, 2, 3

PARAM_NAMES = {
    "psi1": ("a", "b", "c", "cp"),
    "kdf": ("a1", "b1", "c1", "d1", "d2", "e1", "e2"),
    "fk": ("alpha1", "alpha2", "beta1", "beta2", "gamma1", "gamma2", "gamma3"),
    "mellin": ("xi", "eta", "a", "b", "c", "cp", "lambda", "mu"),
}
ALIASES = {"a1": "alpha1", "a2": "alpha2", "b1": "beta1", "b2": "beta2", "g1": "gamma1", "g2": "gamma2",
           "g3": "gamma3", "c'": "cp", "lam": "lambda"}
METHODS = {
    "psi1": ("auto", "series", "euler", "kummer", "mellin_barnes", "left", "caseii", "caseiii", "large_x"),
    "kdf": ("auto", "series", "euler"),
    "fk": ("auto", "triple_series", "single_series", "laplace", "asymptotic"),
    "mellin": ("closed", "direct"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_PARSE)


# --------------------------------------------------------------------------
# parsing


def parse_params(fn: str, text: str | None) -> dict:
    names = PARAM_NAMES[fn]
    if not text:
        raise UsageError(f"--params: expected {','.join(n + '=..' for n in names)}")
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"--params: '{item}' is not name=value")
        k, v = (s.strip() for s in item.split("=", 1))
        k = ALIASES.get(k, k)
        if fn != "fk" and k in ("alpha1", "alpha2", "beta1", "beta2") and k not in names:
            k = {"alpha1": "a1", "beta1": "b1"}.get(k, k)
        if k not in names:
            raise UsageError(f"--params: unknown field '{k}' for {fn} (fields: {', '.join(names)})")
        try:
            out[k] = mpc(mp.mpmathify(v.replace(" ", "")))
        except (ValueError, TypeError):
            raise UsageError(f"--params: field '{k}' value '{v}' is not a number") from None
    missing = [n for n in names if n not in out]
    if missing:
        raise UsageError(f"--params: missing field(s) {', '.join(missing)}")
    return out


def parse_complex(name: str, text: str | None, default=None):
    if text is None:
        if default is None:
            raise UsageError(f"--{name}: value required")
        return cnum(default)
    try:
        return cnum(text)
    except (ValueError, TypeError):
        raise UsageError(f"--{name}: '{text}' is not re or re,im") from None


def parse_sweep(text: str | None, need: int = 3) -> list:
    if not text:
        raise UsageError("--sweep: expected y=v1,v2,...")
    key, _, vals = text.partition("=")
    if key.strip() != "y" or not vals:
        raise UsageError("--sweep: only y=v1,v2,... is supported")
    try:
        out = [mpf(v) for v in vals.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--sweep: bad number in '{vals}'") from None
    if len(out) < need:
        raise UsageError(f"--sweep: need at least {need} points to fit, got {len(out)}")
    return out


# --------------------------------------------------------------------------
# evaluation


def _outcome_from_expansion(e: Expansion, method: str) -> EvalOutcome:
    return EvalOutcome(e.evaluate(), float(e.remainder_estimate()), method,
                       {"terms": e.order, "label": e.label})


def evaluate(fn: str, prm: dict, args, ctx: PrecisionContext, method: str) -> EvalOutcome:
    if method not in METHODS[fn]:
        raise UsageError(f"--method: '{method}' not available for {fn} (choose from {', '.join(METHODS[fn])})")
    x = parse_complex("x", args.x, 0)
    if fn == "psi1":
        from .psi1 import Psi1Params, psi1
        from .psi1_asym import psi1_large_x, psi1_large_y_caseii, psi1_large_y_caseiii, psi1_large_y_left
        p = Psi1Params(prm["a"], prm["b"], prm["c"], prm["cp"])
        y = parse_complex("y", args.y, 0)
        n = args.n_terms
        if method == "left":
            return _outcome_from_expansion(psi1_large_y_left(p, x, y, n, ctx), method)
        if method == "caseii":
            return _outcome_from_expansion(psi1_large_y_caseii(p, x, y, n, ctx), method)
        if method == "caseiii":
            return _outcome_from_expansion(psi1_large_y_caseiii(p, x, y, ctx, n), method)
        if method == "large_x":
            return _outcome_from_expansion(psi1_large_x(p, x, y, n, ctx), method)
        return psi1(p, x, y, ctx, method)
    if fn == "kdf":
        from .kdf import KdfParams, kdf
        p = KdfParams(*(prm[k] for k in PARAM_NAMES["kdf"]))
        return kdf(p, x, parse_complex("y", args.y, 0), ctx, method)
    if fn == "fk":
        from .fk import FkParams, fk_asymptotic, fk_auto, fk_laplace, fk_single_series, fk_triple_series
        p = FkParams(*(prm[k] for k in PARAM_NAMES["fk"]))
        y, z = parse_complex("y", args.y, 0), parse_complex("z", args.z, 0)
        if method == "auto":
            return fk_auto(p, x, y, z, ctx, crossover_y=args.crossover_y, n_terms=args.n_terms)
        if method == "asymptotic":
            return fk_asymptotic(p, x, y, z, args.n_terms, ctx)[1]
        fn_ = {"triple_series": fk_triple_series, "single_series": fk_single_series, "laplace": fk_laplace}[method]
        return fn_(p, x, y, z, ctx)
    from .mellin import PsiFSpec, mellin_psiF_closed, mellin_psiF_direct
    from .psi1 import Psi1Params
    spec = PsiFSpec(prm["xi"], prm["eta"], Psi1Params(prm["a"], prm["b"], prm["c"], prm["cp"]),
                    prm["lambda"], prm["mu"], x)
    s = parse_complex("s", args.s)
    if method == "closed":
        with mp.workdps(ctx.dps):
            return EvalOutcome(mellin_psiF_closed(spec, s, ctx), 0.0, "closed")
    r = mellin_psiF_direct(spec, s, ctx)
    return EvalOutcome(r.value, r.abs_err_est, "direct", {"nodes": r.nodes_used})


# --------------------------------------------------------------------------
# output


def _num(v, digits) -> str:
    return mp.nstr(mpf(v), digits)


def _emit_outcome(o: EvalOutcome, fmt: str, digits: int) -> str:
    d = o.to_dict(digits)
    if fmt == "json":
        return json.dumps(d, sort_keys=True, indent=2)
    if fmt == "csv":
        return _csv([["re", "im", "err_est", "method", "status"],
                     [d["value"]["re"], d["value"]["im"], d["err_est"], d["method"], d["status"]]])
    return (f"value   {d['value']['re']} + {d['value']['im']}i\n"
            f"err_est {d['err_est']}\nmethod  {d['method']}\n"
            f"diag    {json.dumps(d['diagnostics'], sort_keys=True)}")


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


# --------------------------------------------------------------------------
# commands


def cmd_eval(args, ctx) -> str:
    prm = parse_params(args.fn, args.params)
    o = evaluate(args.fn, prm, args, ctx, args.method or METHODS[args.fn][0])
    return _emit_outcome(o, args.format or "json", args.digits)


def cmd_compare(args, ctx) -> str:
    prm = parse_params(args.fn, args.params)
    methods = [m for m in METHODS[args.fn] if m != "auto"]
    if args.fn == "psi1":
        methods = ["series", "euler", "kummer", "mellin_barnes"]
    rows = []
    vals = {}
    for m in methods:
        try:
            o = evaluate(args.fn, prm, args, ctx, m)
            vals[m] = o.value
            rows.append([m, _num(o.value.real, args.digits), _num(o.value.imag, args.digits),
                         _num(o.err_est, 6), "ok"])
        except (DomainError, ConvergenceError) as e:
            rows.append([m, "", "", "", f"skipped: {type(e).__name__}: {e}"])
    if not vals:
        raise DomainError("no method applicable at this point")
    ref_name = next(iter(vals))
    ref = vals[ref_name]
    for r in rows:
        if r[0] in vals:
            r.append(_num(abs(vals[r[0]] - ref) / max(abs(ref), mpf(10) ** -300), 4))
        else:
            r.append("")
    header = ["method", "re", "im", "err_est", "status", f"rel_diff_vs_{ref_name}"]
    if (args.format or "text") == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], sort_keys=True, indent=2)
    return _csv([header] + rows)


def cmd_coeffs(args, ctx) -> str:
    prm = parse_params(args.fn, args.params)
    x = parse_complex("x", args.x, 0)
    n = args.n_terms
    rows = []
    if args.fn == "fk":
        from .fk import (FkParams, case_of, fk_coeff_Ahat, fk_coeff_Bcross, fk_coeff_Bhat, fk_coeff_Bk_tilde,
                         fk_coeff_Chat)
        p = FkParams(*(prm[k] for k in PARAM_NAMES["fk"]))
        y, z = parse_complex("y", args.y), parse_complex("z", args.z)
        w = y / z
        case, L = case_of(p, ctx)
        with mp.workdps(ctx.dps):
            for k in range(n):
                rows.append(["Btilde", k, fk_coeff_Bk_tilde(p, x, w, k, ctx)])
                if case == "nonlog":
                    rows.append(["Bhat", k, fk_coeff_Bhat(p, x, w, k, ctx)])
                    rows.append(["Ahat", k, fk_coeff_Ahat(p, x, w, k, ctx)])
                else:
                    if case == "logI" and k < L:
                        rows.append(["Ahat", k, fk_coeff_Ahat(p, x, w, k, ctx)])
                    if case == "logII" and k < L:
                        rows.append(["Bhat", k, fk_coeff_Bhat(p, x, w, k, ctx)])
                    kk = k if case == "logI" else k + L
                    rows.append(["Bcross", kk, fk_coeff_Bcross(p, x, w, kk, ctx)])
                    rows.append(["Chat_limit", kk, fk_coeff_Chat(p, x, w, kk, ctx, "limit")])
                    rows.append(["Chat_displayed", kk, fk_coeff_Chat(p, x, w, kk, ctx, "displayed")])
    elif args.fn == "psi1":
        from .psi1 import Psi1Params
        from .psi1_asym import psi1_large_x, psi1_large_y_caseii, psi1_large_y_left
        p = Psi1Params(prm["a"], prm["b"], prm["c"], prm["cp"])
        y = parse_complex("y", args.y)
        method = args.method or "left"
        maker = {"left": lambda: psi1_large_y_left(p, x, y, n, ctx),
                 "caseii": lambda: psi1_large_y_caseii(p, x, y, n, ctx),
                 "large_x": lambda: psi1_large_x(p, x, y, n, ctx)}.get(method)
        if maker is None:
            raise UsageError("--method: coeffs for psi1 supports left, caseii, large_x")
        e = maker()
        for k, c in enumerate(e.coeffs):
            rows.append([method, k, c])
    else:
        raise UsageError("coeffs supports --fn fk or psi1")
    header = ["name", "k", "re", "im"]
    body = [[r[0], r[1], _num(r[2].real, args.digits), _num(r[2].imag, args.digits)] for r in rows]
    if (args.format or "csv") == "json":
        return json.dumps([dict(zip(header, r)) for r in body], sort_keys=True, indent=2)
    return _csv([header] + body)


def _slope(ys, errs) -> float:
    lx = [math.log(float(abs(v))) for v in ys]
    le = [math.log(float(e)) for e in errs]
    n = len(lx)
    mx, me = sum(lx) / n, sum(le) / n
    sxx = sum((a - mx) ** 2 for a in lx)
    return -sum((a - mx) * (b - me) for a, b in zip(lx, le)) / sxx


def order_report(p, x, ys, ratio, n_terms, ctx, oracle=None):
    """Rows and verdict for the F_K expansion against the Laplace oracle over a y sweep."""
    from .fk import case_of, fk_asymptotic, fk_coeff_Bcross, fk_laplace
    oracle = oracle or fk_laplace
    rows, errs = [], []
    exps = []
    for y in ys:
        z = y / ratio
        e, a = fk_asymptotic(p, x, y, z, n_terms, ctx)
        try:
            o = oracle(p, x, y, z, ctx)
        except (ConvergenceError, DomainError) as exc:
            where = mp.nstr(y.real, 8) if y.imag == 0 else mp.nstr(y, 8)
            raise ConvergenceError(f"oracle failed at y = {where}: {exc}") from exc
        err = abs(a.value - o.value)
        errs.append(err)
        exps.append((e, o.value))
        rows.append([y, a.value, o.value, err, err / abs(o.value)])
    slope = _slope(ys, errs)
    order = exps[0][0].remainder_order
    case, L = case_of(p, ctx)
    verdict = {"slope": slope, "expected_order": order, "slope_pass": slope >= order - 0.3, "case": case}
    if case != "nonlog" and len(ys) >= 4:
        # fit C + B log|y| + (C' + B' log|y|)/|y| to the leading log-order remainder
        k0 = 0 if case == "logI" else L
        q0 = float((k0 + p.beta1 + p.beta2).real) if case == "logI" else float(p.alpha2.real)
        vals, Ls = [], []
        for (e, ov), y in zip(exps, ys):
            finite = sum((c * (-y) ** (-ee) for ee, c in e.inverse_power_terms
                          if abs(float(cnum(ee).real) - q0) > 1e-9 and float(cnum(ee).real) < q0), mpc(0))
            vals.append(((ov - finite) * (-y) ** q0).real)
            Ls.append(mp.log(abs(y)))
        A = mp.matrix([[1, Ls[i], 1 / abs(ys[i]), Ls[i] / abs(ys[i])] for i in range(len(ys))])
        sol = mp.lu_solve(A, mp.matrix(vals)) if len(ys) == 4 else mp.qr_solve(A, mp.matrix(vals))[0]
        bx = fk_coeff_Bcross(p, x, ys[0] / (ys[0] / ratio), k0, ctx)
        verdict["fitted_log_coeff"] = sol[1]
        verdict["Bcross"] = bx.real
        verdict["fitted_const"] = sol[0]
        verdict["log_pass"] = abs(sol[1] - bx.real) <= 0.01 * abs(bx)
    verdict["pass"] = verdict["slope_pass"] and verdict.get("log_pass", True)
    return rows, verdict


def cmd_order_report(args, ctx) -> str:
    if args.fn != "fk":
        raise UsageError("order-report supports --fn fk")
    from .fk import FkParams
    ys_abs = parse_sweep(args.sweep)
    prm = parse_params("fk", args.params)
    p = FkParams(*(prm[k] for k in PARAM_NAMES["fk"]))
    x = parse_complex("x", args.x, 0)
    direction = parse_complex("y", args.y, -1)
    direction = direction / abs(direction)
    ratio = parse_complex("ratio", args.ratio, 1)
    ys = [v * direction if v > 0 else mpc(v) for v in ys_abs]
    rows, verdict = order_report(p, x, ys, ratio, args.n_terms, ctx)
    d = 10
    table = [["abs_y", "expansion_re", "oracle_re", "abs_err", "rel_err"]]
    for y, a, o, e, r in rows:
        table.append([_num(abs(y), d), _num(a.real, d), _num(o.real, d), _num(e, 4), _num(r, 4)])
    summary = [["slope", _num(verdict["slope"], 4)], ["expected_order", _num(verdict["expected_order"], 4)],
               ["case", verdict["case"]]]
    if "log_pass" in verdict:
        summary += [["fitted_log_coeff", _num(verdict["fitted_log_coeff"], 8)],
                    ["Bcross", _num(verdict["Bcross"], 8)], ["fitted_const", _num(verdict["fitted_const"], 8)]]
    summary.append(["verdict", "PASS" if verdict["pass"] else "FAIL"])
    if (args.format or "csv") == "json":
        return json.dumps({"rows": [dict(zip(table[0], r)) for r in table[1:]], "summary": dict(summary)},
                          sort_keys=True, indent=2)
    return _csv(table) + "\n" + _csv(summary)


def cmd_table(args, ctx) -> str:
    prm = parse_params(args.fn, args.params)
    ys = parse_sweep(args.sweep, need=1)
    rows = [["y", "re", "im", "err_est", "method"]]
    ratio = cnum(args.ratio) if args.ratio else None
    for y in ys:
        args.y = mp.nstr(y, 30)
        if args.fn == "fk" and ratio is not None:
            args.z = mp.nstr(y / ratio.real, 30)
        o = evaluate(args.fn, prm, args, ctx, args.method or METHODS[args.fn][0])
        rows.append([_num(y, 12), _num(o.value.real, args.digits), _num(o.value.imag, args.digits),
                     _num(o.err_est, 6), o.method])
    return _csv(rows)


COMMANDS = {"eval": cmd_eval, "compare": cmd_compare, "coeffs": cmd_coeffs, "order-report": cmd_order_report,
            "table": cmd_table}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fkasym", description="Humbert Psi_1, Kampe de Feriet and Saran F_K evaluation")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--fn", choices=sorted(PARAM_NAMES), required=True)
    ap.add_argument("--params")
    ap.add_argument("--x")
    ap.add_argument("--y")
    ap.add_argument("--z")
    ap.add_argument("--s", help="Mellin variable for --fn mellin")
    ap.add_argument("--ratio", help="y/z for order-report and fk tables")
    ap.add_argument("--digits", type=int, default=16)
    ap.add_argument("--method")
    ap.add_argument("--n-terms", type=int, default=2)
    ap.add_argument("--format", choices=("json", "csv", "text"))
    ap.add_argument("--crossover-y", type=float, default=80.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--sweep")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    random.seed(args.seed)
    try:
        if args.digits < 10:
            raise UsageError("--digits: must be >= 10")
        if args.n_terms < 0:
            raise UsageError("--n-terms: must be >= 0")
        ctx = PrecisionContext(args.digits)
        out = COMMANDS[args.command](args, ctx)
    except UsageError as e:
        sys.stderr.write(f"fkasym: error: {e}\n")
        return EXIT_PARSE
    except DomainError as e:
        witness = getattr(e, "witness", "") or str(e)
        sys.stdout.write(json.dumps({"error": type(e).__name__, "message": str(e), "witness": witness},
                                    sort_keys=True) + "\n")
        return EXIT_DOMAIN
    except ConvergenceError as e:
        sys.stdout.write(json.dumps({"error": "ConvergenceError", "message": str(e)}, sort_keys=True) + "\n")
        return EXIT_CONVERGENCE
    sys.stdout.write(out + "\n")
    return EXIT_OK


def main_exit():  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
