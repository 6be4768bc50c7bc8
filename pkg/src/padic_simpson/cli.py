"""Command line front end: ``padic-simpson <command> --instance file.json``.

Exit codes: 0 success, 1 domain error or failed validation, 2 precision or
parse error.  Every report is JSON on stdout with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .cohomology import euler_characteristic, koszul_cohomology_dims, build_koszul, ext1_line
from .errors import DomainError, PrecisionError
from .higgs import (
    NonSplit,
    conjugate_extension,
    higgs_to_rep,
    rep_to_higgs,
    split_higgs_extension,
    validate_higgs,
)
from .io import (
    ParseError,
    format_character,
    format_higgs,
    format_matrix,
    format_rep,
    format_scalar,
    parse_abeloid,
    parse_character,
    parse_field,
    parse_higgs,
    parse_rep,
    parse_scalar,
)
from .representation import (
    analytic_test_rep,
    analytic_test_unipotent,
    decompose_rep,
    find_isomorphism,
    hom_space,
    tensor_rep,
    validate_rep,
)
from .unipotent import is_unipotent

COMMANDS = ("validate", "decompose", "to-higgs", "from-higgs", "roundtrip", "analytic-check",
            "hom", "tensor", "cohomology", "ext1", "split-ext")


class Instance:
    def __init__(self, data: dict):
        if not isinstance(data, dict):
            raise ParseError("instance must be a JSON object")
        self.data = data
        if "field" not in data:
            raise ParseError("instance is missing 'field'")
        self.field = parse_field(data["field"])
        self.params = data.get("params", {})

    def _need(self, key: str):
        if key not in self.data:
            raise ParseError(f"instance is missing {key!r}")
        return self.data[key]

    @property
    def g(self) -> int:
        return int(self._need("g"))

    def abeloid(self):
        return parse_abeloid(self.field, self.g, self._need("abeloid"))

    def rep(self, key: str = "rep"):
        rho = parse_rep(self.field, self._need(key))
        if "g" in self.data and rho.ngens != 2 * self.g:
            raise ParseError(f"{key} has {rho.ngens} generators, expected 2g = {2 * self.g}")
        return rho

    def higgs(self):
        return parse_higgs(self.field, self._need("higgs"))

    def param(self, key: str):
        if key not in self.params:
            raise ParseError(f"params is missing {key!r}")
        return self.params[key]

    def scalars(self, key: str):
        return [parse_scalar(self.field, x) for x in self.param(key)]


def _require_valid(rho, name="rep"):
    r = validate_rep(rho)
    if not r:
        raise DomainError(f"{name} is invalid: {r.reason}")


def cmd_validate(inst: Instance, args) -> tuple[dict, int]:
    report = {"valid": True, "field": "ok"}
    checks = []
    if "abeloid" in inst.data:
        inst.abeloid()
        report["abeloid"] = "ok"
    for key in ("rep", "rep2"):
        if key in inst.data:
            r = validate_rep(inst.rep(key))
            report[key] = "ok" if r else r.reason
            checks.append(r.valid)
    if "higgs" in inst.data:
        A = inst.abeloid() if "abeloid" in inst.data else None
        r = validate_higgs(inst.higgs(), A)
        report["higgs"] = "ok" if r else r.reason
        checks.append(r.valid)
    report["valid"] = all(checks)
    return report, 0 if report["valid"] else 1


def _decomposition_report(D) -> dict:
    return {
        "blocks": [{"character": format_character(b.character), "size": b.unipotent.n,
                    "unipotent": [format_matrix(m) for m in b.unipotent.generators],
                    "basis": format_matrix(b.basis)} for b in D.blocks],
        "change_of_basis": format_matrix(D.change_of_basis),
    }


def cmd_decompose(inst, args):
    rho = inst.rep()
    _require_valid(rho)
    return _decomposition_report(decompose_rep(rho, args.tol)), 0


def cmd_to_higgs(inst, args):
    rho = inst.rep()
    _require_valid(rho)
    return {"higgs": format_higgs(rep_to_higgs(rho, inst.abeloid(), args.tol))}, 0


def cmd_from_higgs(inst, args):
    A = inst.abeloid()
    H = inst.higgs()
    r = validate_higgs(H, A)
    if not r:
        raise DomainError(f"higgs data is invalid: {r.reason}")
    return {"rep": format_rep(higgs_to_rep(H, A))}, 0


def cmd_roundtrip(inst, args):
    rho = inst.rep()
    _require_valid(rho)
    A = inst.abeloid()
    H = rep_to_higgs(rho, A, args.tol)
    back = higgs_to_rep(H, A)
    T = find_isomorphism(rho, back, seed=args.seed)
    return {"isomorphic": T is not None, "blocks": len(H.blocks)}, 0


def cmd_analytic_check(inst, args):
    rho = inst.rep()
    _require_valid(rho)
    A = inst.abeloid()
    if all(is_unipotent(m) for m in rho.generators):
        ok, witness = analytic_test_unipotent(rho, A)
    else:
        ok, witness = analytic_test_rep(rho, A, args.tol)
    return {"analytic": ok, "witness": format_matrix(witness) if witness is not None else None}, 0


def cmd_hom(inst, args):
    rho, rho2 = inst.rep(), inst.rep("rep2")
    _require_valid(rho)
    _require_valid(rho2, "rep2")
    H = hom_space(rho, rho2, args.tol)
    return {"dimension": H.dimension, "basis": [format_matrix(m) for m in H.basis]}, 0


def cmd_tensor(inst, args):
    rho, rho2 = inst.rep(), inst.rep("rep2")
    _require_valid(rho)
    _require_valid(rho2, "rep2")
    return {"rep": format_rep(tensor_rep(rho, rho2))}, 0


def cmd_cohomology(inst, args):
    gammas = inst.scalars("gammas")
    dims = koszul_cohomology_dims(gammas, args.tol)
    K = build_koszul(gammas)
    return {"dims": dims, "euler": euler_characteristic(dims),
            "precision_floor": str(Fraction(K.precision_floor, inst.field.e))}, 0


def cmd_ext1(inst, args):
    chi1 = parse_character(inst.field, inst.param("chi1"))
    chi2 = parse_character(inst.field, inst.param("chi2"))
    return {"ext1": ext1_line(chi1, chi2, args.tol)}, 0


def cmd_split_ext(inst, args):
    b, theta, r = inst.scalars("b"), inst.scalars("theta"), inst.scalars("rho_offdiag")
    out = split_higgs_extension(b, theta, r)
    if isinstance(out, NonSplit):
        return {"split": False, "reason": out.reason}, 0
    new_b, new_r = conjugate_extension(out, b, theta, r)
    return {"split": True, "matrix": format_matrix(out),
            "b_after": [format_scalar(x) for x in new_b],
            "rho_offdiag_after": [format_scalar(x) for x in new_r]}, 0


HANDLERS = {
    "validate": cmd_validate,
    "decompose": cmd_decompose,
    "to-higgs": cmd_to_higgs,
    "from-higgs": cmd_from_higgs,
    "roundtrip": cmd_roundtrip,
    "analytic-check": cmd_analytic_check,
    "hom": cmd_hom,
    "tensor": cmd_tensor,
    "cohomology": cmd_cohomology,
    "ext1": cmd_ext1,
    "split-ext": cmd_split_ext,
}


def _table(report, indent: int = 0) -> list[str]:
    lines = []
    pad = "  " * indent
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict) and {"rows", "cols", "entries"} <= set(val):
            lines.append(f"{pad}{key}:")
            for row in val["entries"]:
                lines.append(pad + "  [" + ", ".join(row) + "]")
        elif isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_table(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            for k, item in enumerate(val):
                lines.append(f"{pad}{key}[{k}]:")
                lines.extend(_table(item, indent + 1) if "entries" not in item
                             else _table({"matrix": item}, indent + 1))
        else:
            lines.append(f"{pad}{key}: {json.dumps(val, ensure_ascii=False)}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padic-simpson",
                                 description="p-adic representation / Higgs correspondence engine")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--instance", required=True, help="path to the instance JSON file ('-' for stdin)")
    ap.add_argument("--tol", type=Fraction, default=None, help="rank tolerance as a valuation, e.g. 12 or 25/2")
    ap.add_argument("--format", choices=("json", "table"), default="json")
    ap.add_argument("--seed", type=int, default=0, help="seed for isomorphism probes")
    return ap


def run(command: str, data: dict, tol=None, seed: int = 0) -> tuple[dict, int]:
    """Run one subcommand on parsed instance JSON; returns (report, exit code)."""
    args = argparse.Namespace(tol=tol, seed=seed)
    try:
        inst = Instance(data)
        return HANDLERS[command](inst, args)
    except ParseError as exc:
        return _error(command, exc, 2, data)
    except PrecisionError as exc:
        return _error(command, exc, 2, data)
    except DomainError as exc:
        return _error(command, exc, 1, data)
    except ValueError as exc:
        return _error(command, exc, 1, data)


def _error(command, exc, code, data):
    report = {"error": type(exc).__name__, "message": str(exc), "operation": command}
    field = data.get("field") if isinstance(data, dict) else None
    if isinstance(field, dict) and "precision" in field:
        report["precision"] = field["precision"]
    return report, code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.instance == "-":
            data = json.load(sys.stdin)
        else:
            with open(args.instance, encoding="utf-8") as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        report, code = {"error": type(exc).__name__, "message": str(exc), "operation": args.command}, 2
    else:
        report, code = run(args.command, data, args.tol, args.seed)
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, ensure_ascii=False))
    else:
        print("\n".join(_table(report)))
    return code


if __name__ == "__main__":
    sys.exit(main())
