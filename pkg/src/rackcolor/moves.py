"""Coloring invariance of local moves.

A move is a pair of local patches with a common boundary. The boundary is
a list of germs, pieces of sheets meeting the boundary of the ball; on
each side every germ lies on some sheet (by default the sheet of the same
name, or the one given by an ``at <germ> <sheet>`` line). A move
preserves colorings when, for every coloring of the germs, both sides have
the same number of extensions.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .algebra import (RackTable, connected_components, is_quandle,
                      require_rack)
from .coloring import count_colorings, iter_colorings
from .presentation import (ID_PATTERN, Presentation, builtin_presentation,
                           parse_presentation, serialize_presentation, validate)

MOVES_PACKAGE = "rackcolor.data.moves"
CATALOG_ORDER = ("D1", "D2", "T1", "T2")


class SchemaError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class MoveSchema:
    name: str
    boundary: tuple[str, ...]
    before: Presentation
    after: Presentation
    before_at: dict[str, str] = field(default_factory=dict)
    after_at: dict[str, str] = field(default_factory=dict)
    branch_free: bool = True

    def attach(self, side: str) -> dict[str, str]:
        """Germ -> sheet on the given side (``"before"`` or ``"after"``)."""
        explicit = self.before_at if side == "before" else self.after_at
        return {g: explicit.get(g, g) for g in self.boundary}

    def swapped(self) -> MoveSchema:
        return MoveSchema(self.name, self.boundary, self.after, self.before,
                          self.after_at, self.before_at, self.branch_free)


def validate_schema(m: MoveSchema) -> list[str]:
    problems = []
    if len(set(m.boundary)) != len(m.boundary):
        problems.append("repeated boundary germ")
    for side, p in (("before", m.before), ("after", m.after)):
        problems.extend(f"{side}: {msg}" for msg in validate(p))
        sheets = set(p.sheets)
        for germ, sheet in m.attach(side).items():
            if sheet not in sheets:
                problems.append(f"{side}: boundary germ {germ} is on unknown sheet {sheet}")
    interior_before = set(m.before.sheets) - set(m.attach("before").values())
    interior_after = set(m.after.sheets) - set(m.attach("after").values())
    shared = sorted(interior_before & interior_after)
    if shared:
        problems.append(f"interior sheets appear on both sides: {shared}")
    return problems


# --- schema files ------------------------------------------------------------

def parse_schema(text: str) -> MoveSchema:
    name: Optional[str] = None
    boundary: Optional[tuple[str, ...]] = None
    branch_free = True
    blocks: list[list[str]] = [[]]
    attach: list[dict[str, str]] = [{}]
    in_blocks = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        head = tokens[0]
        if head == "---":
            if len(blocks) == 2:
                raise SchemaError(f"line {lineno}: more than two blocks")
            blocks.append([])
            attach.append({})
            in_blocks = True
        elif head == "name" and not in_blocks and not blocks[0]:
            if len(tokens) != 2:
                raise SchemaError(f"line {lineno}: 'name' takes one label")
            name = tokens[1]
        elif head == "boundary" and not in_blocks and not blocks[0]:
            boundary = tuple(tokens[1:])
            bad = [g for g in boundary if not ID_PATTERN.match(g)]
            if bad:
                raise SchemaError(f"line {lineno}: invalid boundary ids {bad}")
        elif head == "branch-free" and not in_blocks and not blocks[0]:
            if len(tokens) != 2 or tokens[1] not in ("yes", "no"):
                raise SchemaError(f"line {lineno}: 'branch-free' takes yes or no")
            branch_free = tokens[1] == "yes"
        elif head == "at":
            if len(tokens) != 3:
                raise SchemaError(f"line {lineno}: 'at' takes a germ and a sheet")
            attach[-1][tokens[1]] = tokens[2]
        else:
            blocks[-1].append(raw)
    if name is None or boundary is None:
        raise SchemaError("schema needs 'name' and 'boundary' headers")
    if len(blocks) != 2:
        raise SchemaError("schema needs two blocks separated by '---'")
    for side in attach:
        unknown = sorted(set(side) - set(boundary))
        if unknown:
            raise SchemaError(f"'at' names germs not on the boundary: {unknown}")
    before = parse_presentation("\n".join(blocks[0]))
    after = parse_presentation("\n".join(blocks[1]))
    m = MoveSchema(name, boundary, before, after, attach[0], attach[1], branch_free)
    problems = validate_schema(m)
    if problems:
        raise SchemaError("; ".join(problems))
    return m


def serialize_schema(m: MoveSchema) -> str:
    lines = [f"name {m.name}", "boundary " + " ".join(m.boundary)]
    if not m.branch_free:
        lines.append("branch-free no")
    out = "\n".join(lines) + "\n"
    for i, (p, at) in enumerate(((m.before, m.before_at), (m.after, m.after_at))):
        if i:
            out += "---\n"
        out += serialize_presentation(p)
        out += "".join(f"at {g} {s}\n" for g, s in at.items())
    return out


def load_schema(src: str) -> MoveSchema:
    """Resolve ``catalog:<name>`` or a path to a schema file."""
    if src.startswith("catalog:"):
        return catalog_schema(src[len("catalog:"):])
    return parse_schema(Path(src).read_text())


def catalog_schema(name: str) -> MoveSchema:
    resource = resources.files(MOVES_PACKAGE) / f"{name}.move"
    if not resource.is_file():
        raise SchemaError(f"no cataloged move {name!r}; known: {', '.join(CATALOG_ORDER)}")
    return parse_schema(resource.read_text())


def catalog() -> list[MoveSchema]:
    """The branch-free moves D1, D2, T1, T2."""
    return [catalog_schema(name) for name in CATALOG_ORDER]


# --- verification ------------------------------------------------------------

@dataclass
class MoveReport:
    name: str
    rack: str
    boundary: tuple[str, ...]
    boundary_assignments: int
    # boundary coloring -> (extensions before, extensions after); colorings
    # absent here have no extension on either side
    fibers: dict[tuple[int, ...], tuple[int, int]]
    total_before: int
    total_after: int

    @property
    def bijective(self) -> bool:
        return all(b == a for b, a in self.fibers.values())

    @property
    def mismatches(self) -> list[tuple[tuple[int, ...], tuple[int, int]]]:
        return [(k, v) for k, v in self.fibers.items() if v[0] != v[1]]

    def format(self) -> str:
        verdict = "bijective" if self.bijective else "NOT bijective"
        lines = [
            f"move {self.name} with rack {self.rack}: {verdict}",
            f"  boundary germs: {' '.join(self.boundary)}",
            f"  boundary colorings: {self.boundary_assignments} "
            f"({len(self.fibers)} extend on some side)",
            f"  total colorings: before {self.total_before}, after {self.total_after}",
        ]
        hist = Counter(b for b, a in self.fibers.values() if b == a)
        if hist:
            lines.append("  matching fiber sizes: " + ", ".join(
                f"{size} x{count}" for size, count in sorted(hist.items())))
        for key, (b, a) in self.mismatches[:10]:
            lines.append(f"  mismatch at {key}: before {b}, after {a}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "rack": self.rack,
            "bijective": self.bijective,
            "boundary": list(self.boundary),
            "boundary_assignments": self.boundary_assignments,
            "total_before": self.total_before,
            "total_after": self.total_after,
            "fibers": [[list(k), b, a] for k, (b, a) in self.fibers.items()],
        }


def _fiber_counts(p: Presentation, attach: dict[str, str], boundary, t) -> Counter:
    sheets = [attach[g] for g in boundary]
    return Counter(tuple(c[s] for s in sheets) for c in iter_colorings(p, t))


def verify_move(m: MoveSchema, t: RackTable) -> MoveReport:
    problems = validate_schema(m)
    if problems:
        raise SchemaError("; ".join(problems))
    require_rack(t)
    before = _fiber_counts(m.before, m.attach("before"), m.boundary, t)
    after = _fiber_counts(m.after, m.attach("after"), m.boundary, t)
    keys = sorted(set(before) | set(after))
    fibers = {k: (before[k], after[k]) for k in keys}
    return MoveReport(m.name, t.name, m.boundary, t.order ** len(m.boundary), fibers,
                      sum(before.values()), sum(after.values()))


def boundary_assignments(m: MoveSchema, t: RackTable):
    """All colorings of the boundary germs in lexicographic order."""
    return itertools.product(range(t.order), repeat=len(m.boundary))


# --- Satoh's diagrams --------------------------------------------------------

@dataclass(frozen=True)
class SatohReport:
    rack: str
    count_d1: int
    count_d2: int

    @property
    def distinguished(self) -> bool:
        return self.count_d1 != self.count_d2

    @property
    def verdict(self) -> str:
        return "not regular-equivalent" if self.distinguished else "inconclusive"

    def format(self) -> str:
        return (f"rack {self.rack}\n"
                f"colorings of satoh_d1: {self.count_d1}\n"
                f"colorings of satoh_d2: {self.count_d2}\n"
                f"verdict: {self.verdict}")

    def to_dict(self) -> dict:
        return {"rack": self.rack, "count_d1": self.count_d1,
                "count_d2": self.count_d2, "verdict": self.verdict}


def satoh_discrimination(t: RackTable, workers: int = 1) -> SatohReport:
    """Count colorings of Satoh's two regular torus diagrams by a connected
    non-quandle rack; different counts rule out regular equivalence."""
    require_rack(t)
    if is_quandle(t):
        raise PreconditionError(f"{t.name} is a quandle; its colorings cannot separate the diagrams")
    if len(connected_components(t)) != 1:
        raise PreconditionError(f"{t.name} is not connected")
    d1 = count_colorings(builtin_presentation("satoh_d1"), t, workers)
    d2 = count_colorings(builtin_presentation("satoh_d2"), t, workers)
    return SatohReport(t.name, d1, d2)
