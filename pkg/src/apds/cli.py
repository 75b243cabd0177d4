"""Command-line front end.

Exit codes: 0 = provable / ok, 1 = not provable / check failed, 2 = error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import proof as prooflib
from .certify import unfold
from .complement import build_negation_extension, tilde
from .core import APDSError, Atom, format_atom, parse_config, parse_system, serialize_system
from .decide import decide, pipeline
from .normalize import to_small_step
from .oracle import search
from .proof import check_proof, eliminate_cuts, to_json
from .saturate import provenance_lines, saturate

# Schemas of the --json outputs, one per subcommand.
_PROOF = {"type": "object"}
JSON_SCHEMAS = {
    "check": {"type": "object", "required": ["ok", "errors"],
              "properties": {"ok": {"type": "boolean"},
                             "errors": {"type": "array", "items": {"type": "string"}}}},
    "normalize": {"type": "object", "required": ["system", "erasure"],
                  "properties": {"system": {"type": "string"},
                                 "erasure": {"type": "object", "additionalProperties": {"type": "string"}}}},
    "saturate": {"type": "object", "required": ["system", "added", "provenance"],
                 "properties": {"system": {"type": "string"}, "added": {"type": "integer"},
                                "provenance": {"type": "array", "items": {"type": "string"}}}},
    "decide": {"type": "object", "required": ["config", "provable"],
               "properties": {"config": {"type": "string"}, "provable": {"type": "boolean"},
                              "certificate": _PROOF, "refutation": _PROOF}},
    "prove": {"type": "object", "required": ["config", "provable"],
              "properties": {"config": {"type": "string"}, "provable": {"type": "boolean"},
                             "certificate": _PROOF}},
    "refute": {"type": "object", "required": ["config", "provable"],
               "properties": {"config": {"type": "string"}, "provable": {"type": "boolean"},
                              "depth": {"type": "integer"}, "refutation": _PROOF, "unfolding": _PROOF,
                              "expansion_map": {"type": "object", "additionalProperties": {"type": "string"}}}},
    "eliminate-cuts": {"type": "object", "required": ["proof", "trace"],
                       "properties": {"proof": _PROOF,
                                      "trace": {"type": "array", "items": {
                                          "type": "object",
                                          "required": ["position", "shape", "rule", "before", "after"]}}}},
    "complement": {"type": "object", "required": ["tilde", "negation"],
                   "properties": {"tilde": {"type": "string"}, "negation": {"type": "string"}}},
    "oracle": {"type": "object", "required": ["config", "found"],
               "properties": {"config": {"type": "string"}, "found": {"type": "boolean"},
                              "proof": _PROOF}},
}


def _read_system(path: str):
    return parse_system(Path(path).read_text(encoding="utf-8"))


def _write(path: str | None, text: str, out):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def _emit_json(obj, out):
    out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_check(a, out):
    s = _read_system(a.system)
    p = prooflib.loads(Path(a.proof).read_text(encoding="utf-8"))
    errors = check_proof(s, p, admit_hypotheses=a.admit_hypotheses, admit_markers=a.admit_markers)
    if a.json:
        _emit_json({"ok": not errors, "errors": errors}, out)
    else:
        out.write("ok\n" if not errors else "".join(e + "\n" for e in errors))
    return 0 if not errors else 1


def cmd_normalize(a, out):
    s, m = to_small_step(_read_system(a.input))
    text = serialize_system(s)
    if a.json:
        _emit_json({"system": text, "erasure": {q: format_atom(Atom(p, w, False)) for q, (p, w) in m.fresh.items()}}, out)
    else:
        _write(a.output, text, out)
    if a.output:
        Path(a.output + ".erase").write_text("".join(l + "\n" for l in m.lines()), encoding="utf-8")
    return 0


def cmd_saturate(a, out):
    s = _read_system(a.input)
    sat = saturate(s)
    prov = provenance_lines(sat)
    text = serialize_system(sat)
    if a.provenance:
        Path(a.provenance).write_text("".join(l + "\n" for l in prov), encoding="utf-8")
    if a.json:
        _emit_json({"system": text, "added": len(sat.rules) - len(s.rules), "provenance": prov}, out)
    else:
        _write(a.output, text, out)
    return 0


def cmd_decide(a, out):
    s = _read_system(a.system)
    cfg = parse_config(a.config, s)
    v = decide(s, cfg, want_negative_certificate=bool(a.refute) or a.json)
    cert = v.saturated_certificate if a.saturated else v.certificate
    if v.provable and a.certificate:
        Path(a.certificate).write_text(prooflib.dumps(cert), encoding="utf-8")
    if not v.provable and a.refute:
        Path(a.refute).write_text(prooflib.dumps(v.refutation), encoding="utf-8")
    if a.json:
        obj = {"config": format_atom(cfg), "provable": v.provable}
        if v.provable:
            obj["certificate"] = to_json(cert)
        else:
            obj["refutation"] = to_json(v.refutation)
        _emit_json(obj, out)
    else:
        out.write("provable\n" if v.provable else "not provable\n")
    return 0 if v.provable else 1


def cmd_prove(a, out):
    s = _read_system(a.system)
    cfg = parse_config(a.config, s)
    v = decide(s, cfg)
    cert = v.saturated_certificate if a.saturated else v.certificate
    if a.json:
        obj = {"config": format_atom(cfg), "provable": v.provable}
        if v.provable:
            obj["certificate"] = to_json(cert)
        _emit_json(obj, out)
    elif v.provable:
        _write(a.output, prooflib.dumps(cert), out)
    else:
        out.write("not provable\n")
    return 0 if v.provable else 1


def cmd_refute(a, out):
    s = _read_system(a.system)
    cfg = parse_config(a.config, s)
    v = decide(s, cfg, want_negative_certificate=True)
    if v.provable:
        if a.json:
            _emit_json({"config": format_atom(cfg), "provable": True}, out)
        else:
            out.write("provable\n")
        return 1
    prefix = unfold(cfg, s, a.depth)
    emap = pipeline(s).expansion_map
    if a.expansion_map:
        Path(a.expansion_map).write_text("".join(l + "\n" for l in emap.lines()), encoding="utf-8")
    if a.json:
        _emit_json({"config": format_atom(cfg), "provable": False, "depth": a.depth,
                    "refutation": to_json(v.refutation), "unfolding": to_json(prefix),
                    "expansion_map": {e.source: e.rule for e in emap.entries.values()}}, out)
    else:
        _write(a.output, prooflib.dumps(prefix), out)
    return 0


def cmd_eliminate_cuts(a, out):
    s = _read_system(a.system)
    p = prooflib.loads(Path(a.proof).read_text(encoding="utf-8"))
    errors = check_proof(s, p)
    if errors:
        raise APDSError("input proof does not check: " + "; ".join(errors))
    q, trace = eliminate_cuts(p, s)
    if a.json:
        _emit_json({"proof": to_json(q), "trace": [
            {"position": list(t.position), "shape": t.shape, "rule": t.rule,
             "before": list(t.before), "after": list(t.after)} for t in trace]}, out)
        return 0
    _write(a.output, prooflib.dumps(q), out)
    if a.trace:
        for t in trace:
            pos = "/" + "/".join(map(str, t.position))
            sys.stderr.write(f"{pos} shape {t.shape} -> {t.rule}  "
                             f"({t.before.elims},{t.before.neutrals}) -> ({t.after.elims},{t.after.neutrals})\n")
    return 0


def cmd_complement(a, out):
    s, _ = to_small_step(_read_system(a.system))
    t = tilde(s)
    neg = build_negation_extension(s)
    if a.tilde:
        Path(a.tilde).write_text(serialize_system(t), encoding="utf-8")
    if a.negation:
        Path(a.negation).write_text(serialize_system(neg.system), encoding="utf-8")
    if a.json:
        _emit_json({"tilde": serialize_system(t), "negation": serialize_system(neg.system)}, out)
    elif not (a.tilde or a.negation):
        out.write(serialize_system(neg.system))
    return 0


def cmd_oracle(a, out):
    s = _read_system(a.system)
    cfg = parse_config(a.config, s)
    p = search(s, cfg, a.depth, a.word_bound)
    if a.json:
        obj = {"config": format_atom(cfg), "found": p is not None}
        if p is not None:
            obj["proof"] = to_json(p)
        _emit_json(obj, out)
    else:
        out.write(prooflib.dumps(p) if p is not None else "not found\n")
    return 0 if p is not None else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-o", "--output", help="write the main output to this file")

    ap = argparse.ArgumentParser(prog="apds", description="Decide and certify provability in alternating pushdown systems.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check a proof against a system")
    p.add_argument("system")
    p.add_argument("proof")
    p.add_argument("--admit-hypotheses", action="store_true")
    p.add_argument("--admit-markers", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("normalize", parents=[common], help="convert to a small-step system")
    p.add_argument("input")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("saturate", parents=[common], help="saturate a small-step system")
    p.add_argument("input")
    p.add_argument("--provenance", help="write saturation provenance lines here")
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("decide", parents=[common], help="decide provability of a configuration")
    p.add_argument("system")
    p.add_argument("config")
    p.add_argument("--certificate", help="write the proof here when provable")
    p.add_argument("--refute", help="write the finite refutation here when not provable")
    p.add_argument("--saturated", action="store_true", help="keep the saturated-system proof")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("prove", parents=[common], help="emit a certificate for a provable configuration")
    p.add_argument("system")
    p.add_argument("config")
    p.add_argument("--saturated", action="store_true", help="keep the saturated-system proof")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("refute", parents=[common], help="unfold the counterexample of an unprovable configuration")
    p.add_argument("system")
    p.add_argument("config")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--expansion-map", help="write the expansion map here")
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("eliminate-cuts", parents=[common], help="cut-eliminate a proof over a saturated system")
    p.add_argument("system")
    p.add_argument("proof")
    p.add_argument("--trace", action="store_true", help="print reduction steps on stderr")
    p.set_defaults(func=cmd_eliminate_cuts)

    p = sub.add_parser("complement", parents=[common], help="build the tilde system and negation extension")
    p.add_argument("system")
    p.add_argument("--tilde", help="write the tilde system here")
    p.add_argument("--negation", help="write the negation extension here")
    p.set_defaults(func=cmd_complement)

    p = sub.add_parser("oracle", parents=[common], help="bounded brute-force proof search")
    p.add_argument("system")
    p.add_argument("config")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--word-bound", type=int, required=True)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except (APDSError, OSError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
