"""Command-line front end.

Exit status: 0 when everything checked passes, 1 when a predicate is false,
2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from . import catalog
from .codefile import CodefileError, format_codefile, parse_codefile
from .css import (
    DEFAULT_DIM_CAP,
    DEFAULT_W_MAX,
    InvariantError,
    build_css,
    distance_x,
    distance_z,
    has_transversal_x,
    verify_transversal_phase,
)
from .gf2 import BitMatrix, format_matrix, parse_matrix, rank, support
from .lifting import (
    SENSITIVITY_CAP,
    InnerCodeSpec,
    assemble_lift,
    check_sensitivity,
    complete_check_matrix,
    lift_report,
    rate_step,
    tower_rate,
)
from .ortho import OrthoPair, SubsetFailure, Verdict, find_coefficient_vector, pair_report

OK, FALSE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _witness(w, bits: bool = False):
    """JSON form of a witness: bit vectors and row indices become index lists."""
    if w is None:
        return None
    if isinstance(w, SubsetFailure):
        return list(w.subset)
    if isinstance(w, bool):
        return w
    if isinstance(w, int):
        return support(w) if bits else [w]
    if isinstance(w, (tuple, list)):
        return [x if isinstance(x, (str, int)) else _witness(x) for x in w]
    return str(w)


class Report:
    def __init__(self, command: str, as_json: bool, prefix: str = ""):
        self.command = command
        self.as_json = as_json
        self.prefix = prefix
        self.data: dict = {"command": command, "checks": []}
        self.lines: list[str] = []

    def say(self, line: str):
        self.lines.append(line)

    def param(self, **kw):
        self.data.setdefault("params", {}).update(kw)

    def put(self, key: str, value):
        self.data[key] = value

    def check(self, name: str, verdict: Verdict, bits: bool = False) -> bool:
        self.data["checks"].append({
            "name": name,
            "ok": verdict.ok,
            "witness": _witness(verdict.witness, bits),
            "detail": verdict.detail,
        })
        line = f"{'PASS' if verdict else 'FAIL'}  {name}"
        if not verdict:
            line += f"  witness={_witness(verdict.witness, bits)}"
            if verdict.detail:
                line += f"  ({verdict.detail})"
        self.say(line)
        return verdict.ok

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.data["checks"])

    def emit(self, status: int, out=None) -> int:
        out = out or sys.stdout
        if self.as_json:
            self.data["ok"] = self.ok and status == OK
            self.data["exit"] = status
            out.write(json.dumps(self.data, indent=2, sort_keys=True) + "\n")
        else:
            for line in self.lines:
                out.write(self.prefix + line + "\n")
        return status


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as err:
        raise UsageError(f"{path}: {err.strerror}") from None


def _load(path: str, require_t: bool = True) -> OrthoPair:
    try:
        return parse_codefile(_read(path), require_t=require_t)
    except CodefileError as err:
        raise UsageError(f"{path}: {err}") from None
    except ValueError as err:
        raise UsageError(f"{path}: {err}") from None


def _inners(paths) -> list[InnerCodeSpec]:
    pairs = [_load(p) for p in paths]
    nu, n_out = pairs[0].nu, pairs[0].L.nrows
    for p, pair in zip(paths, pairs):
        if pair.nu != nu:
            raise UsageError(f"{p}: level {pair.nu} differs from {paths[0]} at level {nu}")
        if pair.L.nrows != n_out:
            raise UsageError(f"{p}: {pair.L.nrows} L rows, expected {n_out} (one per output)")
    return [InnerCodeSpec(p.L, p.S, p.t) for p in pairs]


def _dist_text(d: Optional[int], wmax: int) -> str:
    return str(d) if d is not None else f">{wmax}"


def _code_checks(rep: Report, pair: OrthoPair) -> bool:
    ok = True
    for name, verdict in pair_report(pair):
        ok &= rep.check(name, verdict)
    return ok


def cmd_verify(args) -> int:
    pair = _load(args.codefile)
    rep = Report("verify", args.json)
    k = sum(1 for r in pair.L.rows if r)
    rep.param(n=pair.n, k=k, nu=pair.nu)
    rep.say(f"n={pair.n} k={k} nu={pair.nu}")
    ok = _code_checks(rep, pair)
    return rep.emit(OK if ok else FALSE)


def _lift_summary(rep: Report, pair: OrthoPair, wmax: int, dimcap: int) -> bool:
    """Distance, phase and transversal-X lines; False only if the phase check fails."""
    code = build_css(pair)
    dz = distance_z(code, wmax)
    rep.put("d_z", dz)
    rep.say(f"d_Z = {_dist_text(dz, wmax)}")
    ok = True
    if rank(pair.G) <= dimcap:
        ok = rep.check("transversal phase", verify_transversal_phase(code, dimcap), bits=True)
    else:
        rep.say(f"SKIP  transversal phase (rank {rank(pair.G)} > dimcap {dimcap})")
    tx = has_transversal_x(code)
    rep.put("transversal_x", tx.ok)
    rep.say(f"transversal X: {'yes' if tx else 'no (' + tx.detail + ')'}")
    return ok


def cmd_lift(args) -> int:
    inners = _inners(args.inner)
    rep = Report("lift", args.json, prefix="# ")
    try:
        res = assemble_lift(inners)
    except InvariantError as err:
        rep.check(err.name, err.verdict)
        return rep.emit(FALSE)
    pair = res.pair()
    rep.param(n=res.ncols, k=res.c_ell.nrows, nu=res.nu, n_out=res.n_out, widths=list(res.widths))
    rep.say(f"lifted code: n={res.ncols} k={res.c_ell.nrows} nu={res.nu} "
            f"(n_out={res.n_out}, inner widths {list(res.widths)})")
    for name, verdict in lift_report(res):
        rep.check(name, verdict)
    ok = _lift_summary(rep, pair, args.wmax, args.dimcap)
    rep.put("bumped", list(res.bumped))
    rep.put("notes", list(res.notes))
    rep.say(f"columns bumped by 2^{res.nu - 1}: {list(res.bumped)}")
    for note in res.notes:
        rep.say(f"note: {note}")
    text = format_codefile(pair)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        rep.put("out", args.out)
    elif args.json:
        rep.put("codefile", text)
    else:
        sys.stdout.write(text)
    return rep.emit(OK if ok and rep.ok else FALSE)


def cmd_tower(args) -> int:
    pair = _load(args.codefile)
    if args.target_nu < pair.nu:
        raise UsageError(f"target level {args.target_nu} is below the input level {pair.nu}")
    rep = Report("tower", args.json)
    if not _code_checks(rep, pair):
        return rep.emit(FALSE)
    if not rep.check("input has transversal X", has_transversal_x(build_css(pair))):
        return rep.emit(FALSE)
    os.makedirs(args.out_dir, exist_ok=True)
    rows = []
    while True:
        code = build_css(pair)
        dz = distance_z(code, args.wmax)
        tx = has_transversal_x(code)
        path = os.path.join(args.out_dir, f"level{pair.nu}.code")
        with open(path, "w") as fh:
            fh.write(format_codefile(pair))
        rows.append({"nu": pair.nu, "n": pair.n, "k": code.k, "d_z": dz,
                     "transversal_x": tx.ok, "file": path})
        if pair.nu >= args.target_nu:
            break
        try:
            res = assemble_lift([InnerCodeSpec.from_pair(pair)])
        except InvariantError as err:
            rep.check(f"lift to level {pair.nu + 1}: {err.name}", err.verdict)
            rep.put("levels", rows)
            return rep.emit(FALSE)
        pair = res.pair()
    rep.put("levels", rows)
    rep.say(f"{'nu':>3} {'n':>6} {'k':>4} {'d_Z':>5}  X  file")
    for r in rows:
        rep.say(f"{r['nu']:>3} {r['n']:>6} {r['k']:>4} {_dist_text(r['d_z'], args.wmax):>5}  "
                f"{'y' if r['transversal_x'] else 'n'}  {r['file']}")
    return rep.emit(OK)


def _checked_code(rep: Report, pair: OrthoPair):
    if not _code_checks(rep, pair):
        return None
    return build_css(pair)


def cmd_distance(args) -> int:
    pair = _load(args.codefile)
    rep = Report("distance", args.json)
    code = _checked_code(rep, pair)
    if code is None:
        return rep.emit(FALSE)
    dz = distance_z(code, args.wmax)
    try:
        dx = distance_x(code, args.dimcap)
    except ValueError as err:
        raise UsageError(str(err)) from None
    rep.param(n=code.n, k=code.k, nu=code.nu, wmax=args.wmax, dimcap=args.dimcap)
    rep.put("d_z", dz)
    rep.put("d_x", dx)
    rep.say(f"[[{code.n},{code.k}]] nu={code.nu}")
    rep.say(f"d_Z = {_dist_text(dz, args.wmax)}")
    rep.say(f"d_X = {dx}")
    return rep.emit(OK)


def cmd_phase_check(args) -> int:
    pair = _load(args.codefile)
    rep = Report("phase-check", args.json)
    code = _checked_code(rep, pair)
    if code is None:
        return rep.emit(FALSE)
    try:
        verdict = verify_transversal_phase(code, args.dimcap)
    except ValueError as err:
        raise UsageError(str(err)) from None
    rep.check("transversal phase", verdict, bits=True)
    return rep.emit(OK if verdict else FALSE)


def cmd_checkmat(args) -> int:
    inners = _inners(args.inner)
    try:
        c0, c1 = complete_check_matrix(inners)
    except InvariantError as err:
        rep = Report("checkmat", args.json)
        rep.check(err.name, err.verdict)
        return rep.emit(FALSE)
    if args.json:
        rep = Report("checkmat", True)
        rep.put("C0", c0.to_strings())
        rep.put("C1", c1.to_strings())
        rep.param(ncols=c0.ncols)
        return rep.emit(OK)
    sys.stdout.write(format_matrix(c0) + "\n" + format_matrix(c1))
    return OK


def cmd_sensitivity(args) -> int:
    try:
        m = parse_matrix(_read(args.matrixfile))
    except ValueError as err:
        raise UsageError(f"{args.matrixfile}: {err}") from None
    if args.d < 1:
        raise UsageError("--d must be positive")
    rep = Report("sensitivity", args.json)
    rep.param(d=args.d, rows=m.nrows, cols=m.ncols)
    try:
        verdict = check_sensitivity(m, args.d, args.cap)
    except ValueError as err:
        raise UsageError(str(err)) from None
    rep.check(f"|e| + 2|Me| >= {args.d}", verdict, bits=True)
    return rep.emit(OK if verdict else FALSE)


def cmd_rate(args) -> int:
    try:
        r = tower_rate(args.n, args.k, args.s, args.mu, args.nu)
    except ValueError as err:
        raise UsageError(str(err)) from None
    step = Fraction(args.n, args.k)
    for _ in range(args.nu - args.mu):
        step = rate_step(step, args.s)
    rep = Report("rate", args.json)
    rep.param(n=args.n, k=args.k, s=args.s, mu=args.mu, nu=args.nu)
    rep.put("ratio", str(r))
    rep.say(f"n/k at level {args.nu} = {r} ({float(r):.6g})")
    ok = rep.check("closed form matches iterated step", Verdict(step == r, str(step),
                   "" if step == r else f"iterated {step} != closed form {r}"))
    return rep.emit(OK if ok else FALSE)


def _catalog_args(family: catalog.NamedFamily, params: list[str]) -> dict:
    out = {}
    order = list(family.params)
    for tok in params:
        if "=" in tok:
            key, _, val = tok.partition("=")
        elif order:
            key, val = None, tok
        else:
            raise UsageError(f"{family.name} takes no parameters")
        if key is None:
            remaining = [p for p in order if p not in out]
            if not remaining:
                raise UsageError(f"too many parameters for {family.name}")
            key = remaining[0]
        if key not in order:
            raise UsageError(f"{family.name} has no parameter {key!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise UsageError(f"parameter {key} must be an integer, got {val!r}") from None
    missing = [p for p in order if p not in out]
    if missing:
        raise UsageError(f"{family.name} needs {', '.join(missing)}")
    return out


def cmd_catalog(args) -> int:
    family = catalog.FAMILIES.get(args.name)
    if family is None:
        raise UsageError(f"unknown family {args.name!r}; choose from {', '.join(catalog.FAMILIES)}")
    kw = _catalog_args(family, args.params)
    try:
        obj = family.generator(**kw)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if obj is None:
        rep = Report("catalog", args.json)
        rep.check("search", Verdict(False, None, "no code found with these parameters"))
        return rep.emit(FALSE)
    text = format_matrix(obj) if isinstance(obj, BitMatrix) else format_codefile(obj)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if args.json:
        rep = Report("catalog", True)
        rep.param(name=args.name, **kw)
        rep.put("text", text)
        if args.out:
            rep.put("out", args.out)
        return rep.emit(OK)
    if not args.out:
        sys.stdout.write(text)
    return OK


def cmd_coeff(args) -> int:
    pair = _load(args.codefile, require_t=False)
    nu = args.nu if args.nu is not None else pair.nu
    rep = Report("coeff", args.json)
    rep.param(n=pair.n, nu=nu)
    try:
        t = find_coefficient_vector(pair.L, pair.S, nu)
    except ValueError as err:
        rep.check("preconditions", Verdict(False, getattr(err, "rows", None), str(err)))
        return rep.emit(FALSE)
    if t is None:
        rep.check("coefficient vector exists", Verdict(False, None, f"no odd solution at level {nu}"))
        return rep.emit(FALSE)
    out = OrthoPair(pair.L, pair.S, t)
    rep.put("t", list(t.values))
    text = format_codefile(out)
    if args.json:
        rep.put("codefile", text)
        return rep.emit(OK)
    sys.stdout.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable report")
    p = argparse.ArgumentParser(prog="divtower", parents=[common],
                                description="Construct, lift and verify divisible CSS codes.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=func)
        return sp

    def bounds(sp, wmax=True, dimcap=True):
        if wmax:
            sp.add_argument("--wmax", type=int, default=DEFAULT_W_MAX, help="largest Z-logical weight searched")
        if dimcap:
            sp.add_argument("--dimcap", type=int, default=DEFAULT_DIM_CAP, help="largest span dimension enumerated")

    sp = add("verify", cmd_verify, "check every predicate of a codefile")
    sp.add_argument("codefile")

    sp = add("lift", cmd_lift, "lift inner codes one level up")
    sp.add_argument("inner", nargs="+")
    sp.add_argument("--out")
    bounds(sp)

    sp = add("tower", cmd_tower, "self-lift repeatedly up to a target level")
    sp.add_argument("codefile")
    sp.add_argument("--target-nu", type=int, required=True)
    sp.add_argument("--out-dir", required=True)
    bounds(sp, dimcap=False)

    sp = add("distance", cmd_distance, "brute-force d_Z and d_X")
    sp.add_argument("codefile")
    bounds(sp)

    sp = add("phase-check", cmd_phase_check, "check the transversal phase on every codeword")
    sp.add_argument("codefile")
    bounds(sp, wmax=False)

    sp = add("checkmat", cmd_checkmat, "print the complete check matrices C0 and C1")
    sp.add_argument("inner", nargs="+")

    sp = add("sensitivity", cmd_sensitivity, "check |e| + 2|Me| >= d")
    sp.add_argument("matrixfile")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--cap", type=int, default=SENSITIVITY_CAP, help="largest number of patterns enumerated")

    sp = add("rate", cmd_rate, "closed-form n/k after lifting")
    for flag in ("n", "k", "s", "mu", "nu"):
        sp.add_argument(f"--{flag}", type=int, required=True)

    sp = add("catalog", cmd_catalog, "emit a built-in code")
    sp.add_argument("name")
    sp.add_argument("params", nargs="*", help="integers in order, or key=value")
    sp.add_argument("--out")

    sp = add("coeff", cmd_coeff, "find a coefficient vector for L and S")
    sp.add_argument("codefile")
    sp.add_argument("--nu", type=int)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "json"):
        args.json = False
    try:
        return args.func(args)
    except UsageError as err:
        print(f"divtower {args.command}: {err}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
