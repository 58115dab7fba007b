"""Independent reference computations used by the tests.

Nothing here calls the solver, the enumerator or the numbering code; each
oracle works from the raw table and the relation lists.
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from rackcolor.presentation import make_presentation


def scan_tables(n):
    """Every n x n table as an array of shape (n**(n*n), n, n), in
    lexicographic row-major order."""
    cells = np.array(list(itertools.product(range(n), repeat=n * n)), dtype=np.int64)
    return cells.reshape(-1, n, n)


def scan_racks(n):
    """Boolean masks (is_rack, is_quandle) over ``scan_tables(n)``."""
    tabs = scan_tables(n)
    m = len(tabs)
    rows = np.arange(m)[:, None]
    # Q2: every column is a permutation
    q2 = np.ones(m, dtype=bool)
    for b in range(n):
        col = np.sort(tabs[:, :, b], axis=1)
        q2 &= np.all(col == np.arange(n), axis=1)
    # Q3: (a*b)*c == (a*c)*(b*c)
    q3 = np.ones(m, dtype=bool)
    for a, b, c in itertools.product(range(n), repeat=3):
        ab = tabs[:, a, b]
        ac = tabs[:, a, c]
        bc = tabs[:, b, c]
        lhs = tabs[rows[:, 0], ab, c]
        rhs = tabs[rows[:, 0], ac, bc]
        q3 &= lhs == rhs
    q1 = np.ones(m, dtype=bool)
    for a in range(n):
        q1 &= tabs[:, a, a] == a
    rack = q2 & q3
    return tabs, rack, rack & q1


def kink_by_scan(table):
    """iota(a) found by scanning column a for the x with x*a == a."""
    n = len(table)
    return [next(x for x in range(n) if table[x][a] == a) for a in range(n)]


def scan_colorings(p, table):
    """All colorings of ``p`` as tuples in canonical sheet order, by
    filtering the full product of assignments."""
    T = np.asarray(table, dtype=np.int64)
    n = T.shape[0]
    m = len(p.sheets)
    if m == 0:
        return [()]
    grid = np.indices((n,) * m).reshape(m, -1).T
    idx = {s: i for i, s in enumerate(p.sheets)}
    ok = np.ones(len(grid), dtype=bool)
    for i, j, k in p.doubles:
        ok &= T[grid[:, idx[i]], grid[:, idx[j]]] == grid[:, idx[k]]
    if p.curves:
        iota = np.asarray(kink_by_scan(table))
        for a, b, _ in p.curves:
            ok &= iota[grid[:, idx[a]]] == grid[:, idx[b]]
    for s in p.branches:
        v = grid[:, idx[s]]
        ok &= T[v, v] == v
    return [tuple(int(x) for x in row) for row in grid[ok]]


def potentials_consistent(p):
    """Whether integers exist that are equal across double relations and
    step by -1 / +1 across layer-1 / layer-2 curves. Weighted union-find."""
    parent = {s: s for s in p.sheets}
    offset = {s: 0 for s in p.sheets}  # value(s) - value(parent(s))

    def find(s):
        if parent[s] == s:
            return s, 0
        root, off = find(parent[s])
        parent[s] = root
        offset[s] += off
        return root, offset[s]

    def join(u, v, w):
        # value(v) = value(u) + w
        ru, ou = find(u)
        rv, ov = find(v)
        if ru == rv:
            return ov - ou == w
        parent[rv] = ru
        offset[rv] = ou + w - ov
        return True

    edges = [(i, k, 0) for i, _, k in p.doubles]
    edges += [(a, b, -1 if layer == 1 else 1) for a, b, layer in p.curves]
    return all(join(u, v, w) for u, v, w in edges)


def random_plain(rng, max_sheets=5, max_relations=4):
    """A plain branch-free presentation with random double relations."""
    m = rng.randint(1, max_sheets)
    sheets = [f"x{i}" for i in range(m)]
    r = rng.randint(0, max_relations)
    doubles = [tuple(rng.choice(sheets) for _ in range(3)) for _ in range(r)]
    return make_presentation(sheets, doubles)


def random_overlay(rng, max_sheets=5, max_relations=4):
    p = random_plain(rng, max_sheets, max_relations)
    curves = []
    for _ in range(rng.randint(0, 3)):
        curves.append((rng.choice(p.sheets), rng.choice(p.sheets), rng.choice((1, 2))))
    return make_presentation(p.sheets, p.doubles, curves)


def theorem_instances(count, seed=20240607):
    """The first ``count`` distinct random plain diagrams whose push-off
    admits a consistent numbering.

    In the push-off each relation (i, j, k) becomes a curve i -> strip on
    layer 1 and an equality strip = k, so consistency means k sits one
    below i around every cycle.
    """
    rng = random.Random(seed)
    out, seen = [], set()
    while len(out) < count:
        d = random_plain(rng)
        if d in seen:
            continue
        seen.add(d)
        strips = [f"{i}__strip{t}" for t, (i, _, _) in enumerate(d.doubles)]
        overlay = make_presentation(
            list(d.sheets) + strips,
            [(y, j, k) for y, (_, j, k) in zip(strips, d.doubles)],
            [(i, y, 1) for y, (i, _, _) in zip(strips, d.doubles)])
        if potentials_consistent(overlay):
            out.append(d)
    return out
