"""Finite racks and quandles stored as operation tables.

Elements are the integers ``0..n-1`` and ``table[a][b]`` is ``a * b``
(the row is the left operand).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterator, Optional, Sequence


class MalformedTableError(ValueError):
    pass


class NotARackError(ValueError):
    pass


@dataclass(frozen=True)
class RackTable:
    order: int
    table: tuple[tuple[int, ...], ...]
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.order < 1:
            raise MalformedTableError(f"order must be >= 1, got {self.order}")
        if len(self.table) != self.order:
            raise MalformedTableError(
                f"expected {self.order} rows, got {len(self.table)}")
        for a, row in enumerate(self.table):
            if len(row) != self.order:
                raise MalformedTableError(
                    f"row {a} has {len(row)} entries, expected {self.order}")
            for b, v in enumerate(row):
                if not 0 <= v < self.order:
                    raise MalformedTableError(
                        f"entry at cell ({a},{b}) is {v}, outside 0..{self.order - 1}")

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def axioms(self) -> AxiomReport:
        return check_axioms(self)

    @cached_property
    def right_inverse(self) -> tuple[tuple[int, ...], ...]:
        """``right_inverse[b][c]`` is the unique ``x`` with ``x * b == c``."""
        if not self.axioms.q2:
            raise NotARackError(f"{self.name}: right translations are not bijective")
        inv = [[0] * self.order for _ in self.elements]
        for b in self.elements:
            for x in self.elements:
                inv[b][self.table[x][b]] = x
        return tuple(tuple(r) for r in inv)

    @property
    def name(self) -> str:
        return self.label or f"table of order {self.order}"

    def __repr__(self):
        return f"RackTable({self.name}, {[list(r) for r in self.table]})"


@dataclass(frozen=True)
class AxiomReport:
    q1: bool
    q2: bool
    q3: bool
    q1_witness: Optional[int] = None
    q2_witness: Optional[int] = None
    q3_witness: Optional[tuple[int, int, int]] = None


@dataclass(frozen=True)
class KinkMap:
    """The permutation ``iota`` with ``iota(a) * a == a``."""

    order: int
    forward: tuple[int, ...]
    inverse: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.forward[a]

    def power(self, a: int, m: int) -> int:
        step = self.forward if m >= 0 else self.inverse
        for _ in range(abs(m)):
            a = step[a]
        return a

    @cached_property
    def period(self) -> int:
        """Order of ``iota`` as a permutation (lcm of its cycle lengths)."""
        from math import lcm

        seen = [False] * self.order
        result = 1
        for start in range(self.order):
            if seen[start]:
                continue
            length, a = 0, start
            while not seen[a]:
                seen[a] = True
                a = self.forward[a]
                length += 1
            result = lcm(result, length)
        return result

    def is_identity(self) -> bool:
        return all(self.forward[a] == a for a in range(self.order))


@dataclass(frozen=True)
class KinkReport:
    k1: bool
    k2: bool
    k3: bool
    k1_witness: Optional[int] = None
    k2_witness: Optional[tuple[int, int]] = None
    k3_witness: Optional[tuple[int, int]] = None

    @property
    def ok(self) -> bool:
        return self.k1 and self.k2 and self.k3


def build_rack_table(order: int, entries: Sequence[Sequence[int]],
                     label: Optional[str] = None) -> RackTable:
    try:
        table = tuple(tuple(int(v) for v in row) for row in entries)
    except (TypeError, ValueError) as exc:
        raise MalformedTableError(f"entries are not an integer matrix: {exc}") from None
    return RackTable(order, table, label)


def check_axioms(t: RackTable) -> AxiomReport:
    """Exhaustive check of idempotency, right invertibility and right
    self-distributivity. Witnesses are the lexicographically smallest
    counterexamples."""
    n, T = t.order, t.table
    q1_witness = next((a for a in range(n) if T[a][a] != a), None)
    q2_witness = next(
        (b for b in range(n) if len({T[a][b] for a in range(n)}) != n), None)
    q3_witness = None
    for a, b, c in itertools.product(range(n), repeat=3):
        if T[T[a][b]][c] != T[T[a][c]][T[b][c]]:
            q3_witness = (a, b, c)
            break
    return AxiomReport(
        q1=q1_witness is None, q2=q2_witness is None, q3=q3_witness is None,
        q1_witness=q1_witness, q2_witness=q2_witness, q3_witness=q3_witness)


def is_rack(t: RackTable) -> bool:
    return t.axioms.q2 and t.axioms.q3


def is_quandle(t: RackTable) -> bool:
    return t.axioms.q1 and is_rack(t)


def require_rack(t: RackTable) -> None:
    report = t.axioms
    if not report.q2:
        raise NotARackError(
            f"{t.name} is not a rack: right translation by {report.q2_witness} "
            "is not a bijection")
    if not report.q3:
        raise NotARackError(
            f"{t.name} is not a rack: self-distributivity fails at {report.q3_witness}")


@lru_cache(maxsize=256)
def kink_map(t: RackTable) -> KinkMap:
    if not t.axioms.q2:
        raise NotARackError(
            f"{t.name}: kink map needs bijective right translations "
            f"(fails at column {t.axioms.q2_witness})")
    inv = t.right_inverse
    forward = tuple(inv[a][a] for a in t.elements)
    inverse = [0] * t.order
    for a, x in enumerate(forward):
        inverse[x] = a
    return KinkMap(t.order, forward, tuple(inverse))


def verify_kink_properties(t: RackTable) -> KinkReport:
    require_rack(t)
    k = kink_map(t)
    T, n = t.table, t.order
    k1_witness = next(
        (a for a in range(n)
         if k.inverse[k.forward[a]] != a or k.forward[k.inverse[a]] != a
         or T[k.forward[a]][a] != a),
        None)
    k2_witness = next(
        ((a, b) for a, b in itertools.product(range(n), repeat=2)
         if T[k.forward[a]][b] != k.forward[T[a][b]]),
        None)
    k3_witness = next(
        ((a, b) for a, b in itertools.product(range(n), repeat=2)
         if T[a][k.forward[b]] != T[a][b]),
        None)
    return KinkReport(
        k1=k1_witness is None, k2=k2_witness is None, k3=k3_witness is None,
        k1_witness=k1_witness, k2_witness=k2_witness, k3_witness=k3_witness)


def iota_power(k: KinkMap, a: int, m: int) -> int:
    return k.power(a, m)


def associated_quandle(t: RackTable) -> RackTable:
    """The quandle with operation ``a *' b = iota(a) * b``."""
    # tables compare without their labels, so the label is part of the key
    return _associated_quandle(t, t.label)


@lru_cache(maxsize=256)
def _associated_quandle(t: RackTable, label: Optional[str]) -> RackTable:
    require_rack(t)
    k = kink_map(t)
    label = f"Q({label})" if label else None
    q = RackTable(t.order, tuple(t.table[k.forward[a]] for a in t.elements), label)
    if not is_quandle(q):
        raise AssertionError(f"associated quandle of {t.name} failed the axioms: {q.axioms}")
    return q


def connected_components(t: RackTable) -> list[list[int]]:
    """Orbits of the group generated by right translations.

    Components are returned sorted by their least element, each sorted
    ascending.
    """
    require_rack(t)
    n, T = t.order, t.table
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    # orbits of a group generated by permutations = connected components of
    # the graph a -- a*b
    for a in range(n):
        for b in range(n):
            ra, rb = find(a), find(T[a][b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for a in range(n):
        groups.setdefault(find(a), []).append(a)
    components = sorted(groups.values())
    for comp in components:
        sub = restrict(t, comp)
        if not is_rack(sub):
            raise AssertionError(f"component {comp} of {t.name} is not a rack")
    return components


def restrict(t: RackTable, elements: Sequence[int]) -> RackTable:
    """Subtable on a subset closed under the operation, relabelled in
    ascending order."""
    elements = sorted(elements)
    index = {a: i for i, a in enumerate(elements)}
    try:
        rows = [[index[t.table[a][b]] for b in elements] for a in elements]
    except KeyError:
        raise ValueError(f"{elements} is not closed under the operation") from None
    return build_rack_table(len(elements), rows)


def disjoint_union(*tables: RackTable) -> RackTable:
    """Union where each summand acts trivially on the others."""
    offsets = list(itertools.accumulate([0] + [t.order for t in tables]))
    n = offsets[-1]
    rows = [[0] * n for _ in range(n)]
    for t, off in zip(tables, offsets):
        for a in t.elements:
            for b in range(n):
                local_b = b - off
                rows[off + a][b] = (off + t.table[a][local_b]
                                    if 0 <= local_b < t.order else off + a)
    return build_rack_table(n, rows)


FAMILIES = ("cyclic", "dihedral", "trivial")


def builtin(family: str, n: int) -> RackTable:
    if family not in FAMILIES:
        raise ValueError(f"unknown rack family {family!r}; expected one of {FAMILIES}")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"{family} rack needs a positive order, got {n!r}")
    if family == "cyclic":
        rows = [[(a + 1) % n] * n for a in range(n)]
    elif family == "dihedral":
        rows = [[(2 * b - a) % n for b in range(n)] for a in range(n)]
    else:
        rows = [[a] * n for a in range(n)]
    return build_rack_table(n, rows, label=f"{family}:{n}")


MAX_ENUMERATION_ORDER = 4


def enumerate_racks(n: int) -> Iterator[RackTable]:
    """All racks on ``{0..n-1}`` as raw tables, in lexicographic order.

    Cells are filled row-major with ascending values; a branch is cut as
    soon as a column repeats a value or a fully evaluable instance of
    self-distributivity fails.
    """
    if not 1 <= n <= MAX_ENUMERATION_ORDER:
        raise ValueError(f"enumerate_racks supports 1 <= n <= {MAX_ENUMERATION_ORDER}, got {n}")
    size = n * n
    cells: list[int] = [-1] * size
    used = [[False] * n for _ in range(n)]  # used[col][value]

    def get(a, b):
        return cells[a * n + b]

    def distributive_ok(a0, b0):
        # every triple whose evaluation reads cell (a0, b0)
        for a, b, c in itertools.product(range(n), repeat=3):
            ab, ac, bc = get(a, b), get(a, c), get(b, c)
            if ab < 0 or ac < 0 or bc < 0:
                continue
            if not ((a, b) == (a0, b0) or (a, c) == (a0, b0) or (b, c) == (a0, b0)
                    or (ab, c) == (a0, b0) or (ac, bc) == (a0, b0)):
                continue
            lhs, rhs = get(ab, c), get(ac, bc)
            if lhs >= 0 and rhs >= 0 and lhs != rhs:
                return False
        return True

    def search(pos):
        if pos == size:
            yield RackTable(n, tuple(tuple(cells[r * n:(r + 1) * n]) for r in range(n)))
            return
        a, b = divmod(pos, n)
        for v in range(n):
            if used[b][v]:
                continue
            cells[pos] = v
            used[b][v] = True
            if distributive_ok(a, b):
                yield from search(pos + 1)
            used[b][v] = False
            cells[pos] = -1

    yield from search(0)


# --- .rack files -----------------------------------------------------------

class RackFormatError(ValueError):
    pass


def parse_rack(text: str, label: Optional[str] = None) -> RackTable:
    tokens: list[str] = []
    for line in text.splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    if len(tokens) < 2 or tokens[0] != "order":
        raise RackFormatError("rack file must start with 'order <n>'")
    try:
        n = int(tokens[1])
        values = [int(v) for v in tokens[2:]]
    except ValueError as exc:
        raise RackFormatError(f"non-integer token: {exc}") from None
    if n < 1:
        raise RackFormatError(f"order must be positive, got {n}")
    if len(values) != n * n:
        raise RackFormatError(f"expected {n * n} table entries, got {len(values)}")
    rows = [values[i * n:(i + 1) * n] for i in range(n)]
    return build_rack_table(n, rows, label)


def format_rack(t: RackTable) -> str:
    lines = []
    if t.label:
        lines.append(f"# {t.label}")
    lines.append(f"order {t.order}")
    lines.extend(" ".join(str(v) for v in row) for row in t.table)
    return "\n".join(lines) + "\n"


def load_rack(src: str) -> RackTable:
    """Resolve ``builtin:<family>:<n>`` or a path to a ``.rack`` file."""
    if src.startswith("builtin:"):
        parts = src.split(":")
        if len(parts) != 3:
            raise RackFormatError(f"expected builtin:<family>:<n>, got {src!r}")
        try:
            n = int(parts[2])
        except ValueError:
            raise RackFormatError(f"bad order in {src!r}") from None
        return builtin(parts[1], n)
    path = Path(src)
    return parse_rack(path.read_text(), label=path.stem)
