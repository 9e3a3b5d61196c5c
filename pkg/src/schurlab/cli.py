"""Command-line front end: ring expressions, commands, JSON reports and a result cache."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from math import prod
from pathlib import Path

from . import __version__
from .abelian import AbelianStructure, factorize, is_prime
from .homformulas import h1_sl2_formula, h2_B_formula, h2_sl2_predict, verdict
from .hopf import ResourceRefusal, TIER1_MAX_ORDER, abelianization, check_size, schur_multiplier
from .ktheory import k2_predict
from .matgroup import enumerate_sl2, sl2_order_formula, subgroup_B
from .ring_core import (
    FiniteRing,
    RingError,
    additive_structure,
    analyze_local,
    make_finite_field,
    make_galois_ring,
    make_gilmer_f,
    make_pir,
    make_quasi_galois,
    make_truncated_multivariate,
    make_zmod,
    prime_power,
    product,
    unit_group,
    witt_sets,
)
from .witt import grothendieck_witt, rp1, rp1_via_kernel

SCHEMA = 1
RING_ORDER_LIMIT = 10 ** 6

EXIT_OK, EXIT_MISMATCH, EXIT_NOT_COVERED, EXIT_REFUSED = 0, 1, 2, 3


# ----------------------------------------------------------------------------
# ring expressions

class RingParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str):
        head = f"{msg} at position {pos}: "
        super().__init__(f"{head}{text}\n{' ' * (len(head) + pos)}^")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|(GILMER_F|GR|QG|TM|PIR|Z|F)|(.))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        i = 0
        while i < len(text):
            m = _TOKEN.match(text, i)
            if m is None or m.end() == i:
                break
            if m.group(0).strip() == "":
                i = m.end()
                continue
            start = m.start(m.lastindex)
            kind = ("int", "name", "sym")[m.lastindex - 1]
            self.toks.append((kind, m.group(m.lastindex), start))
            i = m.end()
        self.i = 0

    def error(self, msg):
        pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        raise RingParseError(msg, pos, self.text)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self, kind=None, value=None):
        k, v, _ = self.peek()
        if k is None or (kind and k != kind) or (value and v != value):
            self.error(f"expected {value or kind}")
        self.i += 1
        return v

    def integer(self) -> int:
        neg = False
        if self.peek()[1] == "-":
            self.i += 1
            neg = True
        v = int(self.take("int"))
        return -v if neg else v

    def expr(self):
        parts = [self.term()]
        while self.peek()[1] == "*":
            self.i += 1
            parts.append(self.term())
        return parts[0] if len(parts) == 1 else ("product", parts)

    def term(self):
        k, v, pos = self.peek()
        if v == "(":
            self.i += 1
            e = self.expr()
            self.take(value=")")
            return e
        if k != "name":
            self.error("expected a ring")
        self.i += 1
        if v == "GILMER_F":
            return ("GILMER_F", (), pos)
        if v == "Z":
            self.take(value="/")
            return ("Z", (self.integer(),), pos)
        self.take(value="(")
        if v == "F":
            args = (self.integer(),)
        elif v in ("GR", "QG", "TM"):
            a = self.integer()
            self.take(value=",")
            args = (a, self.integer())
        else:
            p = self.integer()
            self.take(value=",")
            l = self.integer()
            self.take(value=",")
            m = self.integer()
            self.take(value=";")
            coeffs = []
            while self.peek()[1] != ";":
                if coeffs:
                    self.take(value=",")
                coeffs.append(self.coeff())
            self.take(value=";")
            args = (p, l, m, tuple(coeffs), self.integer())
        self.take(value=")")
        return (v, args, pos)

    def coeff(self):
        if self.peek()[1] == "(":
            self.i += 1
            vals = [self.integer()]
            while self.peek()[1] == ",":
                self.i += 1
                vals.append(self.integer())
            self.take(value=")")
            return tuple(vals)
        return self.integer()


def _prime_power_arg(q: int, text: str, pos: int) -> tuple[int, int]:
    pp = prime_power(q)
    if pp is None:
        raise RingParseError(f"{q} is not a prime power", pos, text)
    return pp


def _ast_order(node, text) -> int:
    if node[0] == "product":
        return prod(_ast_order(x, text) for x in node[1])
    kind, args, pos = node
    if kind == "GILMER_F":
        return 8
    if kind in ("Z", "F"):
        return args[0]
    if kind == "GR":
        p, l = _prime_power_arg(args[0], text, pos)
        return p ** (l * args[1])
    if kind == "QG":
        return args[0] ** args[1]
    if kind == "TM":
        return args[0] ** (args[1] + 1)
    p, l, m, coeffs, _t = args
    return p ** (l * m * max(1, len(coeffs)))


def _build(node, text) -> FiniteRing:
    if node[0] == "product":
        rings = [_build(x, text) for x in node[1]]
        out = rings[0]
        for R in rings[1:]:
            out = product(out, R)
        out.label = "*".join(R.label for R in rings)
        return out
    kind, args, pos = node
    try:
        if kind == "GILMER_F":
            return make_gilmer_f()
        if kind == "Z":
            n = args[0]
            if n < 2:
                raise RingParseError("Z/n needs n >= 2", pos, text)
            parts = [make_zmod(p, e) for p, e in sorted(factorize(n).items())]
            out = parts[0]
            for R in parts[1:]:
                out = product(out, R)
            out.label = f"Z/{n}"
            return out
        if kind == "F":
            p, r = _prime_power_arg(args[0], text, pos)
            return make_finite_field(p, r)
        if kind == "GR":
            p, l = _prime_power_arg(args[0], text, pos)
            return make_galois_ring(p, l, args[1])
        if kind == "QG":
            p, r = _prime_power_arg(args[0], text, pos)
            return make_quasi_galois(p, r, args[1])
        if kind == "TM":
            p, r = _prime_power_arg(args[0], text, pos)
            return make_truncated_multivariate(p, r, args[1])
        p, l, m, coeffs, t = args
        if not is_prime(p):
            raise RingParseError(f"{p} is not prime", pos, text)
        return make_pir(p, l, m, list(coeffs), t)
    except RingError as exc:
        raise RingParseError(str(exc), pos, text) from None


def parse_ring_expr(text: str, order_limit: int = RING_ORDER_LIMIT) -> FiniteRing:
    """Build a ring from an expression such as ``GR(27,2)`` or ``Z/4 * F(9)``."""
    P = _Parser(text)
    ast = P.expr()
    if P.i != len(P.toks):
        P.error("unexpected trailing input")
    n = _ast_order(ast, text)
    if n > order_limit:
        raise RingParseError(f"ring order {n} exceeds the limit {order_limit}", 0, text)
    return _build(ast, text)


# ----------------------------------------------------------------------------
# helpers

def structure_json(s: AbelianStructure | None):
    if s is None:
        return None
    return {"invariant_factors": list(s.invariant_factors), "free_rank": s.free_rank, "text": str(s)}


def sl2_order(A: FiniteRing) -> int:
    if A.components is not None and len(A.components) > 1:
        return prod(sl2_order_formula(C) for C, _, _ in A.components)
    return sl2_order_formula(A)


def _timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, round(time.perf_counter() - t, 3)


def exit_code_for(verdicts: list[str]) -> int:
    if "mismatch" in verdicts:
        return EXIT_MISMATCH
    if "refused" in verdicts:
        return EXIT_REFUSED
    if verdicts and all(v in ("not_covered", "conjecture") for v in verdicts):
        return EXIT_NOT_COVERED
    return EXIT_OK


# ----------------------------------------------------------------------------
# commands (each returns a JSON-serializable report)

def cmd_analyze(A: FiniteRing, opts) -> dict:
    la = analyze_local(A)
    rep = {"ring": A.label, "order": A.order, "additive": structure_json(additive_structure(A)),
           "local": la.is_local, "characteristic": A.characteristic}
    if la.is_local:
        ug = unit_group(A)
        rep.update(residue_order=la.residue_order, residue_char=la.residue_char,
                   nilpotency=la.nilpotency, principal_ideal_ring=la.is_principal_ideal,
                   units=structure_json(ug.structure),
                   one_plus_m=structure_json(ug.one_plus_m_structure))
        if A.order <= 10 ** 4:
            w = witt_sets(A)
            rep.update(square_classes=len(w.square_classes), W_size=len(w.W), V_size=len(w.V))
    rep["verdicts"] = []
    return rep


def _prediction_block(A: FiniteRing, e=None, r=None) -> dict:
    pred = h2_sl2_predict(A, e, r)
    block = {"h2_sl2": pred.to_json()}
    k2 = k2_predict(A, e, r)
    block["k2"] = {"kind": k2.kind, "provenance": k2.provenance, "structure": structure_json(k2.structure),
                   "note": k2.note}
    if analyze_local(A).is_local:
        block["h1_sl2"] = structure_json(h1_sl2_formula(A))
        b = h2_B_formula(A)
        block["h2_borel"] = {"branch": b.branch, "structure": structure_json(b.structure)}
    return block


def cmd_predict(A: FiniteRing, opts) -> dict:
    return {"ring": A.label, "predictions": _prediction_block(A, opts.e, opts.r), "verdicts": []}


def compute_schur(A: FiniteRing, group: str, max_order: int, tier2: bool) -> dict:
    """Run the Hopf pipeline on SL_2(A) or B(A) and compare with the prediction."""
    if group == "sl2":
        n = sl2_order(A)
    else:
        n = A.order * len(unit_group(A).units)
    row = {"ring": A.label, "group": group, "group_order": n, "timings": {}}
    try:
        check_size(n, max_order, tier2)
    except ResourceRefusal as exc:
        row.update(verdict="refused", reason=str(exc))
        return row
    G, t_enum = _timed(enumerate_sl2 if group == "sl2" else subgroup_B, A)
    res = schur_multiplier(G, max_order=max_order, tier2=tier2)
    row["timings"] = {"enumerate": t_enum, **{k: round(v, 3) for k, v in res.timings.items()}}
    row["h1"] = structure_json(res.h1)
    row["h2"] = structure_json(res.h2)
    row["relators"] = len(res.presentation.relators)
    if group == "sl2":
        pred = h2_sl2_predict(A)
        v = verdict(res.h2, pred)
        row["prediction"] = pred.to_json()
        if A.components is None or len(A.components) == 1:
            h1p = h1_sl2_formula(A)
            row["h1_prediction"] = structure_json(h1p)
            if res.h1 != h1p:
                v = {"verdict": "mismatch", "agrees": False}
        row.update(v)
    else:
        b = h2_B_formula(A)
        row["prediction"] = {"branch": b.branch, "structure": structure_json(b.structure)}
        if b.structure is None:
            row.update(verdict="not_covered", agrees=None)
        else:
            ok = b.structure == res.h2
            row.update(verdict="match" if ok else "mismatch", agrees=ok)
    return row


def cmd_schur(A: FiniteRing, opts) -> dict:
    row = compute_schur(A, opts.group, opts.max_order, opts.tier2)
    return {"ring": A.label, "rows": [row], "verdicts": [row["verdict"]]}


def cmd_rp1(A: FiniteRing, opts) -> dict:
    s, t = _timed(rp1, A)
    s2 = rp1_via_kernel(A)
    rep = {"ring": A.label, "rp1": structure_json(s), "rp1_kernel_route": structure_json(s2),
           "timings": {"rp1": t}}
    verdicts = ["match" if s == s2 else "mismatch"]
    pred = rp1_prediction(A)
    if pred is not None:
        rep["prediction"] = structure_json(pred)
        verdicts.append("match" if pred == s else "mismatch")
    rep["verdicts"] = verdicts
    return rep


def rp1_prediction(A: FiniteRing) -> AbelianStructure | None:
    """Z/(q+1) for even q, Z/((q+1)/2) for odd q, over finite fields."""
    la = analyze_local(A)
    if la.nilpotency != 1 or la.residue_order < 4:
        return None
    q = la.residue_order
    return AbelianStructure.from_orders([q + 1 if q % 2 == 0 else (q + 1) // 2])


def cmd_gw(A: FiniteRing, opts) -> dict:
    g = grothendieck_witt(A)
    return {"ring": A.label, "gw": structure_json(g.gw), "fundamental_ideal": structure_json(g.fundamental_ideal),
            "fundamental_ideal_sq": structure_json(g.fundamental_ideal_sq), "valid": g.valid,
            "verdicts": []}


# ----------------------------------------------------------------------------
# verification suites

SUITES = {
    "theorem-a": [("sl2", f"F({q})") for q in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)],
    "classic": [("sl2", x) for x in ("Z/9", "Z/27", "Z/4", "QG(2,2)", "QG(2,3)", "GILMER_F", "QG(3,2)",
                                     "QG(5,2)", "QG(3,3)", "QG(2,4)", "QG(2,5)")],
    "main": [("sl2", x) for x in ("F(7)", "F(11)", "F(13)", "TM(3,2)")],
    "h2b": [("borel", x) for x in ("F(7)", "F(9)", "F(11)", "Z/9", "QG(3,2)")],
    "kunneth": [("sl2", x) for x in ("F(2)*F(2)", "F(2)*F(3)", "F(3)*F(3)", "F(4)*F(5)")],
    "h1": [("h1", x) for x in ("F(2)", "F(3)", "F(4)", "F(5)", "Z/4", "Z/8", "Z/9", "QG(2,2)", "QG(2,3)",
                                "GILMER_F", "QG(3,2)", "F(8)", "F(9)")],
    "rp1": [("rp1", f"F({q})") for q in (8, 16, 32, 5, 7, 11, 13, 25, 27)],
}


def run_row(task: tuple) -> dict:
    kind, expr, max_order, tier2 = task
    A = parse_ring_expr(expr)
    t0 = time.perf_counter()
    try:
        if kind in ("sl2", "borel"):
            row = compute_schur(A, kind, max_order, tier2)
        elif kind == "h1":
            n = sl2_order(A)
            check_size(n, max_order, tier2)
            G = enumerate_sl2(A)
            got = abelianization(G)
            want = h1_sl2_formula(A)
            row = {"ring": A.label, "group": "sl2", "h1": structure_json(got),
                   "prediction": structure_json(want), "verdict": "match" if got == want else "mismatch"}
        else:
            rep = cmd_rp1(A, None)
            row = {"ring": A.label, "rp1": rep["rp1"], "prediction": rep.get("prediction"),
                   "verdict": "mismatch" if "mismatch" in rep["verdicts"] else "match"}
    except ResourceRefusal as exc:
        row = {"ring": A.label, "verdict": "refused", "reason": str(exc)}
    row.setdefault("timings", {})["total"] = round(time.perf_counter() - t0, 3)
    return row


def cmd_verify(opts) -> dict:
    tasks = [(k, x, opts.max_order, opts.tier2) for k, x in SUITES[opts.suite]]
    if opts.jobs > 1:
        with ProcessPoolExecutor(opts.jobs) as ex:
            rows = list(ex.map(run_row, tasks))
    else:
        rows = [run_row(t) for t in tasks]
    return {"suite": opts.suite, "rows": rows, "verdicts": [r["verdict"] for r in rows]}


def cmd_experiment(opts) -> dict:
    lo, hi = (int(x) for x in opts.range.split(":"))
    if opts.family == "f2xn":
        exprs = [f"QG(2,{n})" for n in range(lo, hi + 1)]
    else:
        exprs = []
        for l in range(max(lo, 1), hi + 1):
            for p, m in ((2, 1), (2, 2), (3, 1), (3, 2), (5, 1)):
                if l >= 2 or m >= 2:
                    exprs.append(f"GR({p ** l},{m})")
    rows = [run_row(("sl2", x, opts.max_order, opts.tier2)) for x in exprs]
    return {"experiment": opts.family, "range": opts.range, "rows": rows,
            "verdicts": [r["verdict"] for r in rows]}


# ----------------------------------------------------------------------------
# cache and output

def cache_path(cache_dir: str, key_material: dict) -> Path:
    h = hashlib.sha256(json.dumps(key_material, sort_keys=True).encode()).hexdigest()
    return Path(cache_dir) / h[:2] / f"{h}.json"


def render_text(rep: dict) -> str:
    lines = []
    head = rep.get("ring") or rep.get("suite") or rep.get("experiment")
    lines.append(f"== {rep['command']} {head}")
    rows = rep.get("rows")
    if rows:
        for r in rows:
            got = (r.get("h2") or r.get("h1") or r.get("rp1") or {}).get("text", "-")
            pred = r.get("prediction")
            if isinstance(pred, dict):
                ptxt = pred.get("structure")
                if isinstance(ptxt, dict):
                    ptxt = ptxt.get("text")
                if ptxt is None:
                    ptxt = pred.get("text") or pred.get("constraint") or "-"
            else:
                ptxt = "-"
            lines.append(f"{r['ring']:<14} {r.get('group', ''):<6} computed {got:<22} predicted {ptxt:<22} "
                         f"{r['verdict']}")
    else:
        for k, v in rep.items():
            if k in ("command", "schema", "verdicts"):
                continue
            lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="schurlab", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--max-order", type=int, default=TIER1_MAX_ORDER)
    common.add_argument("--tier2", action="store_true", help="allow groups above the default cap")
    common.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("analyze", "predict", "rp1", "gw"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("ring")
        if name == "predict":
            s.add_argument("--e", type=int, default=None, help="ramification index for Eisenstein rings")
            s.add_argument("--r", type=int, default=None, help="p-primary roots of unity exponent")
    s = sub.add_parser("schur", parents=[common])
    s.add_argument("ring")
    s.add_argument("--group", choices=("sl2", "borel"), default="sl2")
    s = sub.add_parser("verify", parents=[common])
    s.add_argument("suite", choices=sorted(SUITES))
    s.add_argument("--jobs", type=int, default=1)
    s = sub.add_parser("experiment", parents=[common])
    s.add_argument("family", choices=("f2xn", "galois"))
    s.add_argument("--range", default="2:4", help="inclusive range lo:hi")
    return ap


def run(opts) -> dict:
    if opts.command == "verify":
        return cmd_verify(opts)
    if opts.command == "experiment":
        return cmd_experiment(opts)
    A = parse_ring_expr(opts.ring)
    return {"analyze": cmd_analyze, "predict": cmd_predict, "schur": cmd_schur,
            "rp1": cmd_rp1, "gw": cmd_gw}[opts.command](A, opts)


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    key = {"args": {k: v for k, v in sorted(vars(opts).items()) if k not in ("json", "cache_dir", "jobs")},
           "version": __version__}
    if getattr(opts, "ring", None):
        try:
            key["ring"] = parse_ring_expr(opts.ring).cache_key()
        except RingParseError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    rep = None
    path = cache_path(opts.cache_dir, key) if opts.cache_dir else None
    if path is not None and path.exists():
        rep = json.loads(path.read_text())
        rep["cached"] = True
    if rep is None:
        try:
            rep = run(opts)
        except RingParseError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        except ResourceRefusal as exc:
            print(f"refused: {exc}", file=sys.stderr)
            return EXIT_REFUSED
        rep = {"schema": SCHEMA, "command": opts.command, **rep}
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(rep, sort_keys=True))
            os.replace(tmp, path)
    if opts.json:
        print(json.dumps(rep, sort_keys=True, indent=1))
    else:
        print(render_text(rep))
    return exit_code_for(rep.get("verdicts", []))


if __name__ == "__main__":
    sys.exit(main())
