"""JSON encoding of scalars, matrices, representations and Higgs data."""

from __future__ import annotations

import re
from fractions import Fraction

from .field import FieldConfig, Scalar, format_expansion, pi_power_coords, rational_mul_coords
from .higgs import HiggsBlock, HiggsLine, HiggsModel, UnipotentHiggs
from .linalg import Matrix
from .representation import AbeloidModel, CharacterTuple, PadicRep


class ParseError(ValueError):
    """Malformed instance data."""


_TERM = re.compile(r"^(?P<digit>-?\d+|\([^()]*\))(?:\*π(?:\^(?P<exp>-?\d+))?)?$")
_BIGOH = re.compile(r"^O\(π(?:\^(?P<exp>-?\d+))?\)$")
_MONO = re.compile(r"^(?P<c>-?\d+)(?:\*x(?:\^(?P<e>\d+))?)?$")


def _split_terms(text: str) -> list[str]:
    terms, depth, cur = [], 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and text.startswith(" + ", i):
            terms.append("".join(cur).strip())
            cur = []
            i += 3
            continue
        cur.append(ch)
        i += 1
    terms.append("".join(cur).strip())
    return terms


def _parse_digit(F: FieldConfig, text: str) -> list[Fraction]:
    if not text.startswith("("):
        return [Fraction(int(text))] + [Fraction(0)] * (F.d - 1)
    coords = [0] * F.d
    for mono in _split_terms(text[1:-1]):
        m = _MONO.match(mono.replace(" ", ""))
        if not m:
            raise ParseError(f"bad digit polynomial {text!r}")
        e = 0 if "x" not in mono else int(m.group("e") or 1)
        if e >= F.d:
            raise ParseError(f"digit polynomial degree too large in {text!r}")
        coords[e] += int(m.group("c"))
    return [Fraction(c) for c in coords]


def parse_expansion(F: FieldConfig, text: str) -> Scalar:
    terms = _split_terms(text.strip())
    m = _BIGOH.match(terms[-1].replace(" ", ""))
    if not m:
        raise ParseError(f"digit expansion must end with O(π^M): {text!r}")
    prec = int(m.group("exp") or 1)
    acc = [Fraction(0)] * F.d
    for term in terms[:-1]:
        t = _TERM.match(term.replace(" ", "")) if not term.startswith("(") else _TERM.match(term)
        if not t:
            raise ParseError(f"bad term {term!r} in {text!r}")
        digit = _parse_digit(F, t.group("digit"))
        body = t.group(0)
        k = 0 if "π" not in body else int(t.group("exp") or 1)
        shifted = rational_mul_coords(F, digit, pi_power_coords(F, k))
        acc = [a + b for a, b in zip(acc, shifted)]
    return F(acc).add_bigoh(prec)


def parse_scalar(F: FieldConfig, lit) -> Scalar:
    """Scalar literal: int, ``"a/b"``, digit expansion, or ``{"coords": [...]}``."""
    try:
        if isinstance(lit, bool):
            raise ParseError("booleans are not scalars")
        if isinstance(lit, int):
            return F(lit)
        if isinstance(lit, str):
            if "O(" in lit:
                return parse_expansion(F, lit)
            return F(Fraction(lit.strip()))
        if isinstance(lit, dict) and "coords" in lit:
            coords = [Fraction(str(c)) for c in lit["coords"]]
            return F(coords)
    except (ZeroDivisionError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad scalar literal {lit!r}: {exc}") from exc
    raise ParseError(f"bad scalar literal {lit!r}")


def format_scalar(s: Scalar) -> str:
    return format_expansion(s)


def parse_field(obj) -> FieldConfig:
    try:
        return FieldConfig(int(obj["p"]), int(obj["precision"]),
                           tuple(int(c) for c in obj.get("poly", (0, 1))),
                           obj.get("mode", "unramified"))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad field config: {exc}") from exc


def format_field(F: FieldConfig) -> dict:
    return {"p": F.p, "precision": F.precision, "poly": list(F.poly), "mode": F.mode}


def parse_matrix(F: FieldConfig, obj) -> Matrix:
    try:
        entries = obj["entries"]
        rows, cols = int(obj.get("rows", len(entries))), int(obj.get("cols", len(entries[0]) if entries else 0))
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"bad matrix: {exc}") from exc
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise ParseError(f"matrix entries do not match declared shape {rows}x{cols}")
    return Matrix(F, [[parse_scalar(F, x) for x in r] for r in entries], cols)


def format_matrix(M: Matrix) -> dict:
    return {"rows": M.nrows, "cols": M.ncols,
            "entries": [[format_scalar(x) for x in r] for r in M.rows]}


def parse_rep(F: FieldConfig, obj) -> PadicRep:
    try:
        gens = [parse_matrix(F, m) for m in obj["generators"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad rep: {exc}") from exc
    rho = PadicRep(gens)
    if "n" in obj and int(obj["n"]) != rho.n:
        raise ParseError(f"rep declares n={obj['n']} but generators are {rho.n}x{rho.n}")
    return rho


def format_rep(rho: PadicRep) -> dict:
    return {"n": rho.n, "generators": [format_matrix(m) for m in rho.generators]}


def parse_abeloid(F: FieldConfig, g: int, obj) -> AbeloidModel:
    try:
        omega = parse_matrix(F, obj["omega_basis"])
        analytic = parse_matrix(F, obj["analytic_basis"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad abeloid model: {exc}") from exc
    dirs = obj.get("canonical_directions")
    return AbeloidModel(g, omega, analytic, bool(obj.get("ordinary", False)), dirs)


def format_abeloid(A: AbeloidModel) -> dict:
    out = {"omega_basis": format_matrix(A.omega_basis), "analytic_basis": format_matrix(A.analytic_basis),
           "ordinary": A.ordinary}
    if A.canonical_directions is not None:
        out["canonical_directions"] = list(A.canonical_directions)
    return out


def parse_character(F: FieldConfig, values) -> CharacterTuple:
    return CharacterTuple([parse_scalar(F, v) for v in values])


def format_character(chi: CharacterTuple) -> list:
    return [format_scalar(v) for v in chi.values]


def parse_higgs(F: FieldConfig, obj) -> HiggsModel:
    blocks = []
    try:
        for b in obj["blocks"]:
            line = HiggsLine(parse_character(F, b["line"]["chi_an"]),
                             tuple(parse_scalar(F, t) for t in b["line"]["theta"]))
            u = b["unipotent"]
            U = UnipotentHiggs([parse_matrix(F, m) for m in u["analytic_logs"]],
                               [parse_matrix(F, m) for m in u["higgs_fields"]])
            if "n" in u and int(u["n"]) != U.n:
                raise ParseError("unipotent Higgs block declares the wrong rank")
            blocks.append(HiggsBlock(line, U))
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"bad higgs data: {exc}") from exc
    return HiggsModel(blocks)


def format_higgs(H: HiggsModel) -> dict:
    return {"blocks": [
        {"line": {"chi_an": format_character(b.line.chi_an), "theta": [format_scalar(t) for t in b.line.theta]},
         "unipotent": {"n": b.unipotent.n,
                       "analytic_logs": [format_matrix(m) for m in b.unipotent.analytic_logs],
                       "higgs_fields": [format_matrix(m) for m in b.unipotent.higgs_fields]}}
        for b in H.blocks]}
