"""Command-line front end: algebra selection, verification suites,
invariants, and the B4m value table.

Exit statuses: 0 success, 1 a computed check failed, 2 usage error,
3 the algebra does not support the request (not unimodular, or the
integral symmetry needed by the normalized invariant fails).
"""
from __future__ import annotations

import argparse
import cmath
import json
import os
import re
import sys
from fractions import Fraction

from .scalar import Cyc
from .hopf import (HopfDataError, HopfPresentation, build_qcqs,
                   compute_integrals, check_lambda_symmetry, trace_s2,
                   verify_hopf, verify_yd)
from .zoo import builtin_group, load_group, group_algebra, quantum_double, \
    kac_b4m, uq_sl2
from .tangle import arity, builtin, horn, disk_sum, parse, to_text, \
    to_slices, cap_positions
from .evaluate import (evaluate, invariant_v, verify_relations,
                       check_horn_independence, check_scaling)


class UsageError(ValueError):
    pass


class UnsupportedAlgebra(ValueError):
    pass


# -- scalar rendering ---------------------------------------------------------

def _rat_str(fr: Fraction) -> str:
    return str(fr)


def _as_rational(v: Cyc) -> Fraction | None:
    """The value as a rational when its zeta-coordinates allow it."""
    if all(c == 0 for c in v.num[1:]):
        return Fraction(v.num[0], v.den)
    return None


def scalar_text(v: Cyc, decimal: int | None = None) -> str:
    fr = _as_rational(v)
    if fr is not None:
        out = _rat_str(fr)
    else:
        terms = []
        for i, c in enumerate(v.num):
            if c == 0:
                continue
            coef = Fraction(c, v.den)
            mag = _rat_str(abs(coef))
            power = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if power and mag == "1":
                body = power
            elif power:
                body = f"{mag}*{power}"
            else:
                body = mag
            sign = "-" if coef < 0 else "+"
            terms.append((sign, body))
        if not terms:
            out = "0"
        else:
            first_sign, first_body = terms[0]
            out = ("-" if first_sign == "-" else "") + first_body
            for sign, body in terms[1:]:
                out += f" {sign} {body}"
        out += f" (z = primitive {v.n}-th root of unity)"
    if decimal is not None:
        z = cmath.exp(2j * cmath.pi / v.n)
        val = sum(float(Fraction(c, v.den)) * z ** i
                  for i, c in enumerate(v.num))
        out += (f" ~ {val.real:.{decimal}f}{val.imag:+.{decimal}f}i "
                f"({decimal}-digit approximation)")
    return out


def value_json(v: Cyc) -> dict:
    fr = _as_rational(v)
    if fr is not None:
        return {"type": "rational", "data": _rat_str(fr)}
    return {"type": "cyclotomic",
            "data": {"conductor": v.n, "num": list(v.num), "den": v.den}}


# -- raw structure-constant files ---------------------------------------------

_HEADER = re.compile(r"hopf v1 dim=(\d+) conductor=(\d+)$")
_SECTIONS = ("MULT", "UNIT", "COMULT", "COUNIT", "ANTIPODE", "ANTIPODE_INV")
_LINE = {
    "MULT": re.compile(r"(\d+)\s+(\d+)\s*->\s*(\d+)\s*:\s*(.+)$"),
    "COMULT": re.compile(r"(\d+)\s*->\s*(\d+)\s+(\d+)\s*:\s*(.+)$"),
    "UNIT": re.compile(r"->\s*(\d+)\s*:\s*(.+)$"),
    "COUNIT": re.compile(r"(\d+)\s*->\s*:\s*(.+)$"),
    "ANTIPODE": re.compile(r"(\d+)\s*->\s*(\d+)\s*:\s*(.+)$"),
    "ANTIPODE_INV": re.compile(r"(\d+)\s*->\s*(\d+)\s*:\s*(.+)$"),
}


def _coeff(text: str, n: int) -> Cyc:
    """Comma-separated zeta-power coordinates, each a rational."""
    out = Cyc.zero(n)
    for t, part in enumerate(text.split(",")):
        fr = Fraction(part.strip())
        if fr:
            out = out + Cyc.from_rational(fr) * Cyc.zeta(n, t)
    return out


def load_raw(path: str) -> HopfPresentation:
    """Parse 'hopf v1' structure-constant files; constants are not
    trusted and must still pass verify_hopf."""
    lines = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.append(line)
    if not lines or not _HEADER.match(lines[0]):
        raise UsageError(f"{path}: not a raw Hopf file "
                         "(expected header 'hopf v1 dim=D conductor=N')")
    m = _HEADER.match(lines[0])
    dim, cond = int(m.group(1)), int(m.group(2))
    mult, unit, comult, counit = {}, {}, {}, {}
    antipode, antipode_inv = {}, {}
    section = None
    for line in lines[1:]:
        if line in _SECTIONS:
            section = line
            continue
        if section is None:
            raise UsageError(f"{path}: data before any section header")
        lm = _LINE[section].match(line)
        if lm is None:
            raise UsageError(f"{path}: bad {section} line: {line!r}")
        g = lm.groups()
        val = _coeff(g[-1], cond)
        if section == "MULT":
            col = mult.setdefault((int(g[0]), int(g[1])), {})
            col[int(g[2])] = col.get(int(g[2]), Cyc.zero(cond)) + val
        elif section == "COMULT":
            col = comult.setdefault(int(g[0]), {})
            key = (int(g[1]), int(g[2]))
            col[key] = col.get(key, Cyc.zero(cond)) + val
        elif section == "UNIT":
            unit[int(g[0])] = unit.get(int(g[0]), Cyc.zero(cond)) + val
        elif section == "COUNIT":
            counit[int(g[0])] = counit.get(int(g[0]), Cyc.zero(cond)) + val
        elif section == "ANTIPODE":
            col = antipode.setdefault(int(g[0]), {})
            col[int(g[1])] = col.get(int(g[1]), Cyc.zero(cond)) + val
        else:
            col = antipode_inv.setdefault(int(g[0]), {})
            col[int(g[1])] = col.get(int(g[1]), Cyc.zero(cond)) + val
    try:
        return HopfPresentation(
            dim=dim, conductor=cond, mult=mult, unit=unit, comult=comult,
            counit=counit, antipode=antipode, antipode_inv=antipode_inv,
            name=os.path.basename(path))
    except HopfDataError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _coeff_text(v: Cyc) -> str:
    parts = [Fraction(c, v.den) for c in v.num]
    while len(parts) > 1 and parts[-1] == 0:
        parts.pop()
    return ",".join(_rat_str(p) for p in parts)


def dump_raw(H: HopfPresentation) -> str:
    """Serialize a presentation in the raw file format, sorted and exact."""
    out = [f"hopf v1 dim={H.dim} conductor={H.conductor}"]
    out.append("MULT")
    for (i, j) in sorted(H.mult):
        for k in sorted(H.mult[(i, j)]):
            v = H.mult[(i, j)][k]
            if not v.is_zero():
                out.append(f"{i} {j} -> {k} : {_coeff_text(v)}")
    out.append("UNIT")
    for k in sorted(H.unit):
        if not H.unit[k].is_zero():
            out.append(f"-> {k} : {_coeff_text(H.unit[k])}")
    out.append("COMULT")
    for i in sorted(H.comult):
        for (j, k) in sorted(H.comult[i]):
            v = H.comult[i][(j, k)]
            if not v.is_zero():
                out.append(f"{i} -> {j} {k} : {_coeff_text(v)}")
    out.append("COUNIT")
    for i in sorted(H.counit):
        if not H.counit[i].is_zero():
            out.append(f"{i} -> : {_coeff_text(H.counit[i])}")
    for sec, tbl in (("ANTIPODE", H.antipode),
                     ("ANTIPODE_INV", H.antipode_inv)):
        out.append(sec)
        for i in sorted(tbl):
            for k in sorted(tbl[i]):
                if not tbl[i][k].is_zero():
                    out.append(f"{i} -> {k} : {_coeff_text(tbl[i][k])}")
    return "\n".join(out) + "\n"


# -- algebra and tangle resolution -------------------------------------------

def resolve_algebra(args) -> tuple[HopfPresentation, dict]:
    fam = args.family
    try:
        if fam == "group":
            if not args.group:
                raise UsageError("--family group requires --group")
            G = load_group(args.group) if os.path.exists(args.group) \
                else builtin_group(args.group)
            H, _ = group_algebra(G, name=f"k[{args.group}]")
            info = {"family": "group", "group": args.group}
        elif fam == "double":
            if not args.group:
                raise UsageError("--family double requires --group")
            G = load_group(args.group) if os.path.exists(args.group) \
                else builtin_group(args.group)
            H, _ = quantum_double(G, name=f"D(k[{args.group}])")
            info = {"family": "double", "group": args.group}
        elif fam == "b4m":
            if args.m is None:
                raise UsageError("--family b4m requires --m")
            H, _ = kac_b4m(args.m)
            info = {"family": "b4m", "m": args.m}
        elif fam == "uq":
            if args.n is None:
                raise UsageError("--family uq requires --n")
            H, _ = uq_sl2(args.n, conjugate=args.conjugate)
            info = {"family": "uq", "n": args.n}
        else:
            if not args.file:
                raise UsageError("--family raw requires --file")
            H = load_raw(args.file)
            info = {"family": "raw", "file": args.file}
    except UsageError:
        raise
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    return H, info


_DISK_SUM = re.compile(r"([^#]+)#([^#]+)$")


def resolve_tangle(text: str):
    """Builtin name, 'A#B' disk sum of two builtins, or a file path."""
    text = text.strip()
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            e = parse(fh.read())
        return e, os.path.basename(text)
    m = _DISK_SUM.match(text)
    if m:
        a = builtin(m.group(1))
        b = builtin(m.group(2))
        return disk_sum(horn(a, 0), horn(b, 0)), text
    return builtin(text), text


# -- reports -------------------------------------------------------------------

def algebra_summary(H: HopfPresentation, info: dict, I, B) -> dict:
    out = dict(info)
    out["name"] = H.name
    out["dim"] = H.dim
    out["conductor"] = H.conductor
    out["unimodular"] = I.unimodular if I is not None else None
    out["cosemisimple"] = I.cosemisimple if I is not None else None
    out["assumption15"] = (check_lambda_symmetry(B)["assumption15"]
                           if B is not None else None)
    out["trace_s2"] = value_json(trace_s2(H))
    return out


def _suite_json(rep) -> dict:
    return {"passed": sum(c.passed for c in rep.checks),
            "total": len(rep.checks),
            "failures": [{"name": c.name, "detail": c.detail}
                         for c in rep.failures()]}


def _suite_text(name: str, rep) -> list[str]:
    passed = sum(c.passed for c in rep.checks)
    lines = [f"{name}: {passed}/{len(rep.checks)}"
             + ("" if rep.ok else " FAIL")]
    for c in rep.failures():
        lines.append(f"  {c.name}: {c.detail}" if c.detail
                     else f"  {c.name}")
    return lines


def _algebra_text(summary: dict) -> str:
    ts = summary["trace_s2"]
    ts_text = ts["data"] if ts["type"] == "rational" else json.dumps(ts["data"])
    flags = " ".join(f"{k}={str(summary[k]).lower()}"
                     for k in ("unimodular", "cosemisimple", "assumption15")
                     if summary[k] is not None)
    return (f"algebra {summary['name']}: dim={summary['dim']} "
            f"conductor={summary['conductor']} {flags} trace_s2={ts_text}")


def _emit(report: dict, text_lines: list[str], as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=False))
    else:
        for line in text_lines:
            print(line)


# -- subcommands ----------------------------------------------------------------

def cmd_verify(args) -> int:
    H, info = resolve_algebra(args)
    hopf_rep = verify_hopf(H)
    lines = []
    suites = {"hopf": _suite_json(hopf_rep), "yd": None, "relations": None}
    status = 0 if hopf_rep.ok else 1
    B = None
    I = None
    if hopf_rep.ok:
        I = compute_integrals(H)
        try:
            B = build_qcqs(H, I)
        except HopfDataError as exc:
            raise UnsupportedAlgebra(str(exc)) from exc
        yd_rep = verify_yd(B)
        rel_rep = verify_relations(B)
        suites["yd"] = _suite_json(yd_rep)
        suites["relations"] = _suite_json(rel_rep)
        status = 0 if (yd_rep.ok and rel_rep.ok) else 1
    summary = algebra_summary(H, info, I, B)
    lines.append(_algebra_text(summary))
    lines += _suite_text("hopf", hopf_rep)
    if B is not None:
        lines += _suite_text("yd", yd_rep)
        lines += _suite_text("relations", rel_rep)
    report = {"algebra": summary, "results": [], "suites": suites}
    _emit(report, lines, args.json)
    return status


def cmd_invariant(args) -> int:
    H, info = resolve_algebra(args)
    suites = {"hopf": None, "yd": None, "relations": None}
    lines = []
    if info["family"] == "raw":
        hopf_rep = verify_hopf(H)
        suites["hopf"] = _suite_json(hopf_rep)
        if not hopf_rep.ok:
            failing = ", ".join(c.name for c in hopf_rep.failures())
            print(f"error: structure constants fail verification: {failing}",
                  file=sys.stderr)
            return 1
    I = compute_integrals(H)
    try:
        B = build_qcqs(H, I)
    except HopfDataError as exc:
        raise UnsupportedAlgebra(str(exc)) from exc
    results = []
    status = 0
    scale = None
    if args.scale:
        try:
            scale = Cyc.from_rational(Fraction(args.scale))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --scale {args.scale!r}: {exc}") from exc
        if scale.is_zero():
            raise UsageError("--scale must be nonzero")
    for text in args.tangle:
        try:
            e, tid = resolve_tangle(text)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        try:
            res = invariant_v(B, e)
        except ValueError as exc:
            if "assumption" in str(exc):
                raise UnsupportedAlgebra(str(exc)) from exc
            raise
        horn_checked = None
        if args.check_horns:
            n_caps = len(cap_positions(to_slices(e))) \
                if arity(e) == (0, 0) else 0
            ok = check_horn_independence(B, e) if n_caps else True
            horn_checked = n_caps
            if not ok:
                lines.append(f"horn check of {tid}: FAIL")
                status = 1
        if scale is not None:
            if not check_scaling(H, e, scale):
                lines.append(f"scaling check of {tid} by {args.scale}: FAIL")
                status = 1
        results.append({"tangle": tid, "value": value_json(res.value),
                        "caps": res.cap_count, "cups": res.cup_count,
                        "horn_checked": horn_checked})
        lines.append(f"v({tid}) = {scalar_text(res.value, args.decimal)}")
    summary = algebra_summary(H, info, I, B)
    lines.insert(0, _algebra_text(summary))
    report = {"algebra": summary, "results": results, "suites": suites}
    _emit(report, lines, args.json)
    return status


def cmd_table(args) -> int:
    m = re.fullmatch(r"(\d+)\.\.(\d+)", args.m_range)
    if m is None:
        raise UsageError(f"bad --m-range {args.m_range!r}: expected A..B")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo < 3 or hi < lo:
        raise UsageError("--m-range requires 3 <= A <= B")
    names = [t.strip() for t in args.tangles.split(",") if t.strip()]
    if not names:
        raise UsageError("--tangles is empty")
    exprs = []
    for name in names:
        try:
            exprs.append(resolve_tangle(name)[0])
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    grid = {}
    for mm in range(lo, hi + 1):
        H, _ = kac_b4m(mm)
        B = build_qcqs(H)
        for name, e in zip(names, exprs):
            grid[(name, mm)] = invariant_v(B, e).value
    ms = list(range(lo, hi + 1))
    results = [{"tangle": name, "m": mm,
                "value": value_json(grid[(name, mm)]),
                "caps": None, "cups": None, "horn_checked": None}
               for name in names for mm in ms]
    head = ["tangle"] + [f"m={mm}" for mm in ms]
    rows = [[name] + [scalar_text(grid[(name, mm)]) for mm in ms]
            for name in names]
    widths = [max(len(r[i]) for r in [head] + rows) for i in range(len(head))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
             for r in [head] + rows]
    report = {"algebra": {"family": "b4m", "m_range": [lo, hi]},
              "results": results,
              "suites": {"hopf": None, "yd": None, "relations": None}}
    _emit(report, lines, args.json)
    return 0


# -- entry point -----------------------------------------------------------------

def _add_algebra_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True,
                   choices=["group", "double", "b4m", "uq", "raw"])
    p.add_argument("--group", help="group spec (Z6, S3, D4, Z2xZ3, "
                                   "or a Cayley-table file)")
    p.add_argument("--m", type=int, help="b4m parameter, m > 2")
    p.add_argument("--n", type=int, help="root-of-unity order, n >= 3")
    p.add_argument("--conjugate", action="store_true",
                   help="use the conjugate root of unity (uq family)")
    p.add_argument("--file", help="raw structure-constant file")
    p.add_argument("--json", action="store_true",
                   help="machine-readable output")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="hbinv",
        description="Exact handlebody-link invariants from unimodular "
                    "Hopf algebra structure constants.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the axiom and relation suites")
    _add_algebra_flags(p)

    p = sub.add_parser("invariant", help="evaluate the normalized invariant")
    _add_algebra_flags(p)
    p.add_argument("--tangle", action="append", required=True,
                   help="builtin (O, theta, genus(g)), A#B disk sum, "
                        "or a tangle file")
    p.add_argument("--check-horns", action="store_true",
                   help="verify independence of the horn position")
    p.add_argument("--scale", help="rational c: verify both scaling laws")
    p.add_argument("--decimal", type=int, default=None,
                   help="append a k-digit numeric approximation")

    p = sub.add_parser("table", help="grid of invariants over the B4m family")
    p.add_argument("--m-range", default="3..7")
    p.add_argument("--tangles", default="O,theta")
    p.add_argument("--json", action="store_true")

    args = ap.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "invariant":
            return cmd_invariant(args)
        return cmd_table(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedAlgebra as exc:
        print(f"unsupported algebra: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
