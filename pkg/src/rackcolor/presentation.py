"""Combinatorial surface-knot diagrams ("presentations").

A presentation lists sheets and the relations a coloring must satisfy:

* ``double i j k``: along one double point curve arc, ``c(k) = c(i) * c(j)``
  (``j`` is the over-sheet, its normal pointing from ``i`` to ``k``);
* ``curve i j layer``: across an arc of an oriented immersed curve,
  ``c(j) = iota(c(i))``; ``layer`` (1 or 2) tags which curve set the arc
  belongs to;
* ``branch s``: a branch point on ``s``, forcing ``c(s) * c(s) = c(s)``.

Geometric realizability is never checked.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional

ID_PATTERN = re.compile(r"[A-Za-z0-9_]+\Z")

Double = tuple[str, str, str]
Curve = tuple[str, str, int]


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    sheets: tuple[str, ...] = ()
    doubles: tuple[Double, ...] = ()
    curves: tuple[Curve, ...] = ()
    branches: tuple[str, ...] = ()
    genus: Optional[int] = None

    @property
    def is_plain(self) -> bool:
        return not self.curves

    @property
    def layers(self) -> set[int]:
        return {layer for _, _, layer in self.curves}

    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.sheets)}


def make_presentation(sheets: Iterable[str], doubles: Iterable[Iterable[str]] = (),
                      curves: Iterable[tuple[str, str, int]] = (),
                      branches: Iterable[str] = (), genus: Optional[int] = None,
                      check: bool = True) -> Presentation:
    p = Presentation(
        sheets=tuple(sheets),
        doubles=tuple(tuple(d) for d in doubles),
        curves=tuple((a, b, int(layer)) for a, b, layer in curves),
        branches=tuple(branches),
        genus=genus,
    )
    if check:
        problems = validate(p)
        if problems:
            raise PresentationError("; ".join(problems))
    return p


def validate(p: Presentation) -> list[str]:
    """Every violation found, as readable messages; empty when valid."""
    problems = []
    declared = set()
    for s in p.sheets:
        if not ID_PATTERN.match(s):
            problems.append(f"invalid sheet id {s!r}")
        if s in declared:
            problems.append(f"duplicate sheet {s}")
        declared.add(s)

    def need(s, where):
        if s not in declared:
            problems.append(f"undeclared sheet {s} in {where}")

    for d in p.doubles:
        if len(d) != 3:
            problems.append(f"double relation {d} does not have three sheets")
            continue
        for s in d:
            need(s, "double " + " ".join(d))
    for a, b, layer in p.curves:
        where = f"curve {a} {b} {layer}"
        need(a, where)
        need(b, where)
        if layer not in (1, 2):
            problems.append(f"layer out of range in {where}")
    for s in p.branches:
        need(s, f"branch {s}")
    return problems


# --- text format -------------------------------------------------------------

def parse_presentation(text: str, check: bool = True) -> Presentation:
    sheets: list[str] = []
    doubles, curves, branches = [], [], []
    genus = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        head, args = tokens[0], tokens[1:]

        def arity(k):
            if len(args) != k:
                raise PresentationError(
                    f"line {lineno}: '{head}' takes {k} arguments, got {len(args)}")

        if head == "sheets":
            for s in args:
                if check and s in sheets:
                    raise PresentationError(f"line {lineno}: duplicate sheet {s}")
                sheets.append(s)
        elif head == "double":
            arity(3)
            doubles.append(tuple(args))
        elif head == "curve":
            arity(3)
            try:
                layer = int(args[2])
            except ValueError:
                raise PresentationError(f"line {lineno}: bad layer {args[2]!r}") from None
            curves.append((args[0], args[1], layer))
        elif head == "branch":
            arity(1)
            branches.append(args[0])
        elif head == "genus":
            arity(1)
            try:
                genus = int(args[0])
            except ValueError:
                raise PresentationError(f"line {lineno}: bad genus {args[0]!r}") from None
        else:
            raise PresentationError(f"line {lineno}: unknown directive {head!r}")
    return make_presentation(sheets, doubles, curves, branches, genus, check=check)


def serialize_presentation(p: Presentation) -> str:
    lines = [" ".join(("sheets",) + p.sheets)]
    if p.genus is not None:
        lines.append(f"genus {p.genus}")
    lines.extend("double " + " ".join(d) for d in p.doubles)
    lines.extend(f"curve {a} {b} {layer}" for a, b, layer in p.curves)
    lines.extend(f"branch {s}" for s in p.branches)
    return "\n".join(lines) + "\n"


# --- structural operations ---------------------------------------------------

def contract(p: Presentation, layer: int) -> tuple[Presentation, dict[str, str]]:
    """Merge sheets joined by curve arcs of ``layer``.

    Each merged class is named after its first sheet in declaration order.
    The curve arcs of ``layer`` disappear; everything else is rewritten
    through the returned parent map.
    """
    return contract_layers(p, (layer,))


def contract_layers(p: Presentation, layers: Iterable[int]) -> tuple[Presentation, dict[str, str]]:
    contracted, pmap = _contract_layers(p, frozenset(layers))
    return contracted, dict(pmap)


@lru_cache(maxsize=512)
def _contract_layers(p: Presentation, layers: frozenset) -> tuple[Presentation, tuple]:
    order = p.index()
    parent = {s: s for s in p.sheets}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    for a, b, layer in p.curves:
        if layer in layers:
            ra, rb = find(a), find(b)
            if ra != rb:
                if order[ra] < order[rb]:
                    parent[rb] = ra
                else:
                    parent[ra] = rb
    pmap = {s: find(s) for s in p.sheets}
    sheets = tuple(s for s in p.sheets if pmap[s] == s)
    doubles = tuple(tuple(pmap[s] for s in d) for d in p.doubles)
    curves = tuple((pmap[a], pmap[b], layer) for a, b, layer in p.curves
                   if layer not in layers)
    branches = tuple(dict.fromkeys(pmap[s] for s in p.branches))
    return Presentation(sheets, doubles, curves, branches, p.genus), tuple(pmap.items())


def rename(p: Presentation, mapping: Mapping[str, str]) -> Presentation:
    missing = [s for s in p.sheets if s not in mapping]
    if missing:
        raise PresentationError(f"rename map does not cover sheets {missing}")
    images = [mapping[s] for s in p.sheets]
    if len(set(images)) != len(images):
        raise PresentationError("rename map is not injective on sheets")
    f = mapping.__getitem__
    return replace(
        p,
        sheets=tuple(images),
        doubles=tuple(tuple(map(f, d)) for d in p.doubles),
        curves=tuple((f(a), f(b), layer) for a, b, layer in p.curves),
        branches=tuple(map(f, p.branches)),
    )


def add_sheets(p: Presentation, new: Iterable[str]) -> Presentation:
    return make_presentation(p.sheets + tuple(new), p.doubles, p.curves, p.branches, p.genus)


# --- built-in corpus ---------------------------------------------------------

CORPUS_PACKAGE = "rackcolor.data.corpus"


def corpus_names() -> list[str]:
    files = resources.files(CORPUS_PACKAGE).iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".pres"))


def builtin_presentation(name: str) -> Presentation:
    resource = resources.files(CORPUS_PACKAGE) / f"{name}.pres"
    if not resource.is_file():
        raise PresentationError(
            f"unknown built-in presentation {name!r}; known: {', '.join(corpus_names())}")
    return parse_presentation(resource.read_text())


def load_presentation(src: str) -> Presentation:
    """Resolve ``corpus:<name>`` or a path to a ``.pres`` file."""
    if src.startswith("corpus:"):
        return builtin_presentation(src[len("corpus:"):])
    return parse_presentation(Path(src).read_text())
