"""Rack colorings of presentations.

The solver is a depth-first search over sheets in declaration order with
values tried in ascending order, so colorings come out in lexicographic
order. A relation ``c(k) = c(i) * c(j)`` with two known colors fixes or
restricts the third: ``c(k)`` directly, ``c(i)`` through the inverse right
translation, and ``c(j)`` when ``c(i) * x = c(k)`` has one solution or none.
"""

from __future__ import annotations

import atexit
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Optional

from .algebra import RackTable, kink_map, require_rack
from .presentation import Presentation

Coloring = dict[str, int]

WORKERS_ENV = "RACKCOLOR_WORKERS"


@dataclass(frozen=True)
class Violation:
    kind: str
    relation: tuple
    detail: str

    def __str__(self):
        return f"{self.kind} {' '.join(map(str, self.relation))}: {self.detail}"


class _Problem:
    """Index-level form of a presentation together with the rack data the
    propagation needs."""

    def __init__(self, p: Presentation, t: RackTable):
        require_rack(t)
        self.sheets = p.sheets
        idx = p.index()
        self.n = t.order
        self.T = t.table
        self.inv = t.right_inverse
        k = kink_map(t)
        self.iota, self.iota_inv = k.forward, k.inverse
        # over[i][k]: the colors j with i * j == k
        over = [[[] for _ in range(self.n)] for _ in range(self.n)]
        for i in range(self.n):
            for j in range(self.n):
                over[i][self.T[i][j]].append(j)
        self.over = tuple(tuple(tuple(js) for js in row) for row in over)
        # watch[v] lists constraints mentioning v, as (kind, args)
        self.watch: list[list[tuple]] = [[] for _ in p.sheets]
        for i, j, kk in p.doubles:
            c = ("d", idx[i], idx[j], idx[kk])
            for v in set(c[1:]):
                self.watch[v].append(c)
        for a, b, _ in p.curves:
            c = ("c", idx[a], idx[b])
            for v in {c[1], c[2]}:
                self.watch[v].append(c)
        for s in p.branches:
            self.watch[idx[s]].append(("b", idx[s]))

    def assign(self, assign: list[int], trail: list[int], var: int, value: int) -> bool:
        """Set ``var`` and propagate; False on conflict. Assigned variables are
        pushed on ``trail`` so the caller can undo them."""
        queue = [(var, value)]
        T, inv = self.T, self.inv
        while queue:
            v, val = queue.pop()
            cur = assign[v]
            if cur >= 0:
                if cur != val:
                    return False
                continue
            assign[v] = val
            trail.append(v)
            for c in self.watch[v]:
                kind = c[0]
                if kind == "d":
                    _, i, j, k = c
                    vi, vj, vk = assign[i], assign[j], assign[k]
                    if vj < 0:
                        if vi >= 0 and vk >= 0:
                            js = self.over[vi][vk]
                            if not js:
                                return False
                            if len(js) == 1:
                                queue.append((j, js[0]))
                        continue
                    if vi >= 0:
                        want = T[vi][vj]
                        if vk < 0:
                            queue.append((k, want))
                        elif vk != want:
                            return False
                    elif vk >= 0:
                        queue.append((i, inv[vj][vk]))
                elif kind == "c":
                    _, a, b = c
                    va, vb = assign[a], assign[b]
                    if va >= 0:
                        if vb < 0:
                            queue.append((b, self.iota[va]))
                        elif vb != self.iota[va]:
                            return False
                    elif vb >= 0:
                        queue.append((a, self.iota_inv[vb]))
                else:
                    if T[val][val] != val:
                        return False
        return True

    def solutions(self, prefix: Optional[int] = None) -> Iterator[tuple[int, ...]]:
        """Yield satisfying assignments; ``prefix`` pins the first sheet."""
        m = len(self.sheets)
        assign = [-1] * m
        trail: list[int] = []

        def undo(mark):
            while len(trail) > mark:
                assign[trail.pop()] = -1

        def search(start):
            var = start
            while var < m and assign[var] >= 0:
                var += 1
            if var == m:
                yield tuple(assign)
                return
            values = range(self.n) if not (var == 0 and prefix is not None) else (prefix,)
            for value in values:
                mark = len(trail)
                if self.assign(assign, trail, var, value):
                    yield from search(var + 1)
                undo(mark)

        yield from search(0)


def iter_colorings(p: Presentation, t: RackTable) -> Iterator[Coloring]:
    prob = _Problem(p, t)
    for sol in prob.solutions():
        yield dict(zip(p.sheets, sol))


def enumerate_colorings(p: Presentation, t: RackTable) -> list[Coloring]:
    return list(iter_colorings(p, t))


def _count_branch(p: Presentation, t: RackTable, value: int) -> int:
    return sum(1 for _ in _Problem(p, t).solutions(prefix=value))


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@lru_cache(maxsize=None)
def _pool(workers: int) -> ProcessPoolExecutor:
    pool = ProcessPoolExecutor(max_workers=workers)
    atexit.register(pool.shutdown)
    return pool


def count_colorings(p: Presentation, t: RackTable, workers: int = 1) -> int:
    """Number of colorings. With ``workers > 1`` the choices for the first
    sheet are counted in separate processes and summed in order."""
    prob = _Problem(p, t)
    if workers <= 1 or not p.sheets:
        return sum(1 for _ in prob.solutions())
    parts = _pool(workers).map(_count_branch, [p] * t.order, [t] * t.order, range(t.order))
    return sum(parts)


def check_coloring(p: Presentation, t: RackTable, c: Mapping[str, int]) -> list[Violation]:
    """Every relation ``c`` violates; an empty list means ``c`` is a coloring."""
    problems = []
    missing = [s for s in p.sheets if s not in c]
    if missing:
        return [Violation("sheet", (s,), "no color assigned") for s in missing]
    bad = [s for s in p.sheets if not 0 <= c[s] < t.order]
    if bad:
        return [Violation("sheet", (s,), f"color {c[s]} not in the rack") for s in bad]
    T = t.table
    for d in p.doubles:
        i, j, k = d
        want = T[c[i]][c[j]]
        if c[k] != want:
            problems.append(Violation(
                "double", d, f"{c[i]}*{c[j]}={want} but {k} has {c[k]}"))
    if p.curves:
        iota = kink_map(t)
        for a, b, layer in p.curves:
            if c[b] != iota(c[a]):
                problems.append(Violation(
                    "curve", (a, b, layer),
                    f"iota({c[a]})={iota(c[a])} but {b} has {c[b]}"))
    for s in p.branches:
        if T[c[s]][c[s]] != c[s]:
            problems.append(Violation(
                "branch", (s,), f"{c[s]}*{c[s]}={T[c[s]][c[s]]} is not {c[s]}"))
    return problems


def format_coloring(p: Presentation, c: Mapping[str, int]) -> str:
    return " ".join(f"{s}={c[s]}" for s in p.sheets)
