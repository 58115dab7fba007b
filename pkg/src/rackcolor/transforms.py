"""Bijections between coloring sets.

* :func:`pushoff` copies every double point arc onto its under-sheet as a
  layer-1 curve arc, giving an overlay whose rack colorings match the
  colorings of the original diagram by the associated quandle
  (:func:`psi`, :func:`psi_inverse`).
* :func:`alexander_numbering` labels overlay sheets with integers; when it
  exists, :func:`phi` turns colorings of the layer-2-contracted overlay
  into colorings of the layer-1-contracted one by applying ``iota**n``.
* :func:`theorem2_report` chains the two to compare colorings of a
  diagram by a rack and by its associated quandle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .algebra import RackTable, associated_quandle, kink_map, require_rack
from .coloring import Coloring, check_coloring, enumerate_colorings
from .presentation import Presentation, contract


class TransformError(ValueError):
    pass


@dataclass(frozen=True)
class Strip:
    relation: int
    sheet: str
    parent: str


@dataclass(frozen=True)
class StripMap:
    strips: tuple[Strip, ...] = ()

    def parents(self) -> dict[str, str]:
        return {s.sheet: s.parent for s in self.strips}


@dataclass(frozen=True)
class Numbering:
    values: dict[str, int]
    modulus: Optional[int] = None

    def __getitem__(self, sheet):
        return self.values[sheet]

    @property
    def consistent(self) -> bool:
        return True


@dataclass(frozen=True)
class Step:
    source: str
    target: str
    increment: int
    reason: tuple


@dataclass(frozen=True)
class Inconsistent:
    """A closed walk through the constraint graph whose increments add up
    to a nonzero total (nonzero modulo ``modulus`` when one is set)."""

    walk: tuple[Step, ...]
    modulus: Optional[int] = None

    @property
    def total(self) -> int:
        return sum(s.increment for s in self.walk)

    @property
    def consistent(self) -> bool:
        return False

    def describe(self) -> str:
        path = "".join(
            f"{s.source} -[{s.increment:+d}]-> " for s in self.walk) + self.walk[0].source
        return f"{path}  (total {self.total:+d})"


NumberingResult = Union[Numbering, Inconsistent]


# --- push-off ----------------------------------------------------------------

def pushoff(d: Presentation) -> tuple[Presentation, StripMap]:
    if d.curves:
        raise TransformError("push-off needs a diagram without immersed curves")
    if d.branches:
        raise TransformError(
            f"push-off is undefined with branch points (found on {', '.join(d.branches)})")
    taken = set(d.sheets)
    sheets = list(d.sheets)
    doubles, curves, strips = [], [], []
    for k, (i, j, out) in enumerate(d.doubles):
        y = f"{i}__strip{k}"
        while y in taken:
            y += "_"
        taken.add(y)
        sheets.append(y)
        curves.append((i, y, 1))
        doubles.append((y, j, out))
        strips.append(Strip(k, y, i))
    overlay = Presentation(tuple(sheets), tuple(doubles), tuple(curves), (), d.genus)
    return overlay, StripMap(tuple(strips))


# --- numbering ---------------------------------------------------------------

def _constraint_edges(p: Presentation):
    """Adjacency ``sheet -> [(neighbour, increment, reason)]``; each constraint
    contributes both directions."""
    adj: dict[str, list] = {s: [] for s in p.sheets}
    for d in p.doubles:
        i, _, k = d
        adj[i].append((k, 0, ("double",) + tuple(d)))
        adj[k].append((i, 0, ("double",) + tuple(d)))
    for a, b, layer in p.curves:
        w = 1 if layer == 2 else -1
        reason = ("curve", a, b, layer)
        adj[a].append((b, w, reason))
        adj[b].append((a, -w, reason))
    return adj


def alexander_numbering(overlay: Presentation, modulus: Optional[int] = None) -> NumberingResult:
    """Integers on sheets: equal across double point arcs (under-sheets),
    +1 across a layer-2 arc and -1 across a layer-1 arc in its direction.

    Each connected piece of the constraint graph is rooted at its least
    sheet id, which gets 0. With ``modulus`` the labels
    live in the integers mod ``modulus``.
    """
    adj = _constraint_edges(overlay)

    def norm(x):
        return x % modulus if modulus else x

    value: dict[str, int] = {}
    parent: dict[str, Optional[Step]] = {}
    for root in sorted(overlay.sheets):
        if root in value:
            continue
        value[root] = 0
        parent[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, w, reason in adj[u]:
                want = norm(value[u] + w)
                if v not in value:
                    value[v] = want
                    parent[v] = Step(u, v, w, reason)
                    queue.append(v)
                elif value[v] != want:
                    return Inconsistent(_witness(parent, Step(u, v, w, reason)), modulus)
    return Numbering({s: value[s] for s in overlay.sheets}, modulus)


def _witness(parent, closing: Step) -> tuple[Step, ...]:
    def to_root(s):
        steps = []
        while parent[s] is not None:
            steps.append(parent[s])
            s = parent[s].source
        return steps[::-1]

    down_u = to_root(closing.source)
    down_v = to_root(closing.target)
    # drop the shared prefix so the walk is as short as the tree allows
    common = 0
    while (common < min(len(down_u), len(down_v))
           and down_u[common] == down_v[common]):
        common += 1
    forward = down_u[common:]
    back = [Step(s.target, s.source, -s.increment, s.reason)
            for s in reversed(down_v[common:])]
    return tuple(forward + [closing] + back)


def verify_witness(overlay: Presentation, witness: Inconsistent) -> bool:
    """Independent re-check that ``witness`` is a closed walk along real
    constraints with a nonzero total."""
    allowed = set()
    for i, _, k in overlay.doubles:
        allowed.add((i, k, 0))
        allowed.add((k, i, 0))
    for a, b, layer in overlay.curves:
        w = 1 if layer == 2 else -1
        allowed.add((a, b, w))
        allowed.add((b, a, -w))
    walk = witness.walk
    if not walk or walk[0].source != walk[-1].target:
        return False
    for prev, step in zip(walk, walk[1:]):
        if prev.target != step.source:
            return False
    if any((s.source, s.target, s.increment) not in allowed for s in walk):
        return False
    total = witness.total
    return (total % witness.modulus != 0) if witness.modulus else total != 0


# --- Phi ---------------------------------------------------------------------

def _require_numbering(numbering: NumberingResult) -> Numbering:
    if not isinstance(numbering, Numbering):
        raise TransformError("numbering is inconsistent; the map is undefined")
    return numbering


def phi_candidates(overlay: Presentation, numbering: NumberingResult,
                   c1: Mapping[str, int], t: RackTable, sign: int = 1) -> dict[str, set[int]]:
    """Every value the construction can assign to each target sheet, one
    per choice of representative overlay sheet."""
    numbering = _require_numbering(numbering)
    k = kink_map(t)
    source_layer, target_layer = (2, 1) if sign == 1 else (1, 2)
    _, to_source = contract(overlay, source_layer)
    _, to_target = contract(overlay, target_layer)
    out: dict[str, set[int]] = {}
    for y in overlay.sheets:
        value = k.power(c1[to_source[y]], sign * numbering[y])
        out.setdefault(to_target[y], set()).add(value)
    return out


def _transport(overlay, numbering, c, t, sign):
    source_layer, target_layer = (2, 1) if sign == 1 else (1, 2)
    source, _ = contract(overlay, source_layer)
    target, _ = contract(overlay, target_layer)
    problems = check_coloring(source, t, c)
    if problems:
        raise TransformError(
            "input is not a coloring: " + "; ".join(map(str, problems)))
    candidates = phi_candidates(overlay, numbering, c, t, sign)
    out = {}
    for s in target.sheets:
        values = candidates[s]
        if len(values) != 1:
            raise AssertionError(f"representatives of {s} disagree: {sorted(values)}")
        out[s] = next(iter(values))
    problems = check_coloring(target, t, out)
    if problems:
        raise AssertionError("image is not a coloring: " + "; ".join(map(str, problems)))
    return out


def phi(overlay: Presentation, numbering: NumberingResult, c1: Mapping[str, int],
        t: RackTable) -> Coloring:
    """Coloring of ``contract(overlay, 2)`` -> coloring of ``contract(overlay, 1)``."""
    return _transport(overlay, numbering, c1, t, 1)


def phi_inverse(overlay: Presentation, numbering: NumberingResult, c2: Mapping[str, int],
                t: RackTable) -> Coloring:
    return _transport(overlay, numbering, c2, t, -1)


# --- Psi ---------------------------------------------------------------------

def psi(d: Presentation, strips: StripMap, qr_coloring: Mapping[str, int],
        t: RackTable) -> Coloring:
    """Quandle coloring of ``d`` by the associated quandle -> rack coloring
    of the push-off overlay. Strips get ``iota`` of their parent's color."""
    problems = check_coloring(d, associated_quandle(t), qr_coloring)
    if problems:
        raise TransformError(
            "input is not an associated-quandle coloring: " + "; ".join(map(str, problems)))
    k = kink_map(t)
    out = {s: qr_coloring[s] for s in d.sheets}
    for strip in strips.strips:
        out[strip.sheet] = k(qr_coloring[strip.parent])
    return out


def psi_inverse(d: Presentation, strips: StripMap, overlay_coloring: Mapping[str, int],
                t: RackTable) -> Coloring:
    overlay, _ = pushoff(d)
    problems = check_coloring(overlay, t, overlay_coloring)
    if problems:
        raise TransformError(
            "input is not an overlay coloring: " + "; ".join(map(str, problems)))
    return {s: overlay_coloring[s] for s in d.sheets}


# --- composed report ---------------------------------------------------------

@dataclass
class Theorem2Report:
    diagram: Presentation
    rack: RackTable
    numbering: NumberingResult
    # numbering actually used for the bijection (mod the period of iota when
    # the integer one fails); None when no numbering exists
    used_numbering: Optional[Numbering]
    count_quandle: int
    count_rack: int
    bijection: Optional[bool]
    notes: list[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return bool(self.bijection)

    def to_dict(self) -> dict:
        n = self.numbering
        payload = {
            "rack": self.rack.name,
            "numbering": {
                "consistent": n.consistent,
                "values": n.values if isinstance(n, Numbering) else None,
                "witness": _witness_dict(n) if isinstance(n, Inconsistent) else None,
            },
            "used_modulus": self.used_numbering.modulus if self.used_numbering else None,
            "count_associated_quandle": self.count_quandle,
            "count_rack": self.count_rack,
            "bijection": self.bijection,
            "notes": self.notes,
        }
        return payload

    def format(self) -> str:
        lines = []
        n = self.numbering
        if isinstance(n, Numbering):
            lines.append("numbering: consistent")
            lines.append("  " + " ".join(f"{s}={v}" for s, v in n.values.items()))
        else:
            lines.append("numbering: inconsistent")
            lines.append("  witness walk: " + n.describe())
        if self.used_numbering is not None and self.used_numbering.modulus:
            lines.append(f"numbering used modulo {self.used_numbering.modulus} "
                         "(period of the kink map)")
        lines.append(f"colorings by associated quandle: {self.count_quandle}")
        lines.append(f"colorings by rack {self.rack.name}: {self.count_rack}")
        if self.bijection is None:
            lines.append("bijection: not claimed (numbering hypothesis fails)")
        elif self.bijection:
            lines.append("bijection verified")
        else:
            lines.append("bijection FAILED")
        lines.extend(self.notes)
        return "\n".join(lines)


def _witness_dict(w: Inconsistent) -> dict:
    return {
        "total": w.total,
        "walk": [[s.source, s.target, s.increment, list(s.reason)] for s in w.walk],
    }


def theorem2_report(d: Presentation, t: RackTable) -> Theorem2Report:
    require_rack(t)
    overlay, strips = pushoff(d)
    q = associated_quandle(t)
    numbering = alexander_numbering(overlay)
    used: Optional[Numbering] = numbering if isinstance(numbering, Numbering) else None
    if used is None:
        period = kink_map(t).period
        modular = alexander_numbering(overlay, modulus=period)
        if isinstance(modular, Numbering):
            used = modular
    quandle_colorings = enumerate_colorings(d, q)
    rack_colorings = enumerate_colorings(d, t)
    report = Theorem2Report(d, t, numbering, used, len(quandle_colorings),
                            len(rack_colorings), None)
    if used is None:
        return report

    contracted, _ = contract(overlay, 1)
    if contracted.sheets != d.sheets:
        raise AssertionError("contracting the push-off did not recover the diagram")
    images = []
    for c in quandle_colorings:
        overlay_coloring = psi(d, strips, c, t)
        image = phi(overlay, used, overlay_coloring, t)
        back = psi_inverse(d, strips, phi_inverse(overlay, used, image, t), t)
        if back != c:
            report.notes.append(f"round trip failed at {c}")
        images.append(tuple(image[s] for s in d.sheets))
    targets = {tuple(c[s] for s in d.sheets) for c in rack_colorings}
    report.bijection = (len(set(images)) == len(images)
                        and set(images) == targets and not report.notes)
    return report
