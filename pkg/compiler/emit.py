"""Deterministic text files for polynomial systems.

    # h10 polynomial system
    version: 0.1.0
    config-sha256: <hex digest of the canonical JSON of the configuration>
    curve: a=1 b=1 sqrt_b_sign=1
    form: system
    restricted: true
    variables: 2
    equations: 1

    [variables]
    x K
    y K

    [equations]
    x^2 - z1*y^2 = 0

    [provenance]
    0: source of the first equation

Expanded equations use the canonical sparse rendering over z1, z2 (h1, h2
before restriction) and then the variables in table order; a folded single
equation keeps its nested form. Reading evaluates the equation text, so only
read files you produced.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from algebra.polys import render
from compiler.lower import H1, H2, Z1, Z2, PolySystem
from curve.params import CurveParams

log = logging.getLogger(__name__)

TOOL_VERSION = "0.1.0"
MAGIC = "# h10 polynomial system"
_TRANSFORMS = standard_transformations + (convert_xor,)


def config_digest(config: dict | None) -> str:
    text = json.dumps(config or {}, sort_keys=True, default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _equation_text(expr: sympy.Expr, order: dict[sympy.Symbol, int], nested: bool) -> str:
    if nested:
        return sympy.sstr(expr)
    gens = sorted(expr.free_symbols, key=lambda s: order[s])
    return render(expr, gens) if gens else sympy.sstr(expr)


def dumps(system: PolySystem, config: dict | None = None) -> str:
    digest = config_digest(config) if config is not None else system.meta.get("config-sha256", config_digest(None))
    p = system.params
    order = {g: i for i, g in enumerate(system.gens)}
    nested = system.form == "single"
    lines = [
        MAGIC,
        f"version: {TOOL_VERSION}",
        f"config-sha256: {digest}",
        f"curve: a={p.a} b={p.b} sqrt_b_sign={p.sqrt_b_sign}",
        f"form: {system.form}",
        f"restricted: {'true' if system.restricted else 'false'}",
        f"variables: {len(system.variables)}",
        f"equations: {len(system.equations)}",
        "",
        "[variables]",
        *(f"{name} {sort}" for name, sort in system.variables),
        "",
        "[equations]",
        *(f"{_equation_text(e, order, nested)} = 0" for e in system.equations),
        "",
        "[provenance]",
        *(f"{i}: {origin}" for i, origin in enumerate(system.provenance)),
    ]
    return "\n".join(lines) + "\n"


def emit(system: PolySystem, path: str | Path, config: dict | None = None) -> Path:
    """Write the system; I/O errors propagate."""
    path = Path(path)
    path.write_text(dumps(system, config), encoding="utf-8")
    log.info("wrote %d equations to %s", len(system.equations), path)
    return path


def _header(lines: list[str]) -> tuple[dict[str, str], int]:
    if not lines or lines[0] != MAGIC:
        raise ValueError("not an h10 polynomial system file")
    header = {}
    index = 1
    while index < len(lines) and lines[index]:
        key, _, value = lines[index].partition(": ")
        header[key] = value
        index += 1
    return header, index


def _sections(lines: list[str], start: int) -> dict[str, list[str]]:
    sections: dict[str, list[str]] = {}
    current = None
    for line in lines[start:]:
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            sections[current] = []
        elif line and current is not None:
            sections[current].append(line)
    return sections


def loads(text: str) -> PolySystem:
    lines = text.split("\n")
    header, index = _header(lines)
    curve = dict(item.split("=", 1) for item in header.get("curve", "").split())
    params = CurveParams(
        a=sympy.sympify(curve.get("a", 1)),
        b=sympy.sympify(curve.get("b", 1)),
        sqrt_b_sign=int(curve.get("sqrt_b_sign", 1)),
    )
    sections = _sections(lines, index)
    variables = []
    for line in sections.get("variables", []):
        name, sort = line.rsplit(" ", 1)
        variables.append((name, sort))
    local = {s.name: s for s in (Z1, Z2, H1, H2)}
    local.update({name: sympy.Symbol(name) for name, _ in variables})
    equations = []
    for line in sections.get("equations", []):
        if not line.endswith(" = 0"):
            raise ValueError(f"malformed equation line: {line!r}")
        equations.append(parse_expr(line[: -len(" = 0")], local_dict=local, transformations=_TRANSFORMS))
    provenance = [line.split(": ", 1)[1] if ": " in line else "" for line in sections.get("provenance", [])]
    for key, count in (("variables", len(variables)), ("equations", len(equations))):
        if int(header.get(key, count)) != count:
            raise ValueError(f"header says {header[key]} {key}, file has {count}")
    return PolySystem(
        variables,
        equations,
        provenance,
        params,
        restricted=header.get("restricted") == "true",
        form=header.get("form", "system"),
        meta={"config-sha256": header.get("config-sha256", ""), "version": header.get("version", "")},
    )


def read(path: str | Path) -> PolySystem:
    return loads(Path(path).read_text(encoding="utf-8"))


__all__ = ["MAGIC", "TOOL_VERSION", "config_digest", "dumps", "emit", "loads", "read"]
