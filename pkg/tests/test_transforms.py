import random

import pytest
from hypothesis import given, settings

from rackcolor.algebra import associated_quandle, builtin, enumerate_racks, kink_map
from rackcolor.coloring import check_coloring, count_colorings, enumerate_colorings
from rackcolor.presentation import (
    add_sheets, builtin_presentation, contract, corpus_names, make_presentation, rename,
)
from rackcolor.transforms import (
    Inconsistent, Numbering, Step, TransformError, alexander_numbering, phi, phi_candidates,
    phi_inverse, psi, psi_inverse, pushoff, theorem2_report, verify_witness,
)
from tests.oracles import potentials_consistent, random_overlay, random_plain
from tests.test_presentation import presentations

C3 = builtin("cyclic", 3)
R3 = builtin("dihedral", 3)
SPHERE = builtin_presentation("sphere_circle")
D1 = builtin_presentation("satoh_d1")
D2 = builtin_presentation("satoh_d2")


def corpus_overlays():
    out = [builtin_presentation(n) for n in corpus_names() if builtin_presentation(n).curves]
    out += [pushoff(builtin_presentation(n))[0] for n in corpus_names()
            if not builtin_presentation(n).curves]
    return [p for p in out if alexander_numbering(p).consistent]


def racks_up_to_5():
    out = [t for n in (1, 2, 3) for t in enumerate_racks(n)]
    out += [builtin(f, n) for f, lo in (("cyclic", 2), ("dihedral", 3), ("trivial", 1))
            for n in range(max(lo, 4), 6)]
    return out


def test_pushoff_examples():
    overlay, strips = pushoff(D2)
    assert overlay.sheets == ("s", "s__strip0")
    assert overlay.curves == (("s", "s__strip0", 1),)
    assert overlay.doubles == (("s__strip0", "s", "s"),)
    assert strips.parents() == {"s__strip0": "s"}
    overlay, _ = pushoff(SPHERE)
    assert overlay.sheets == ("p", "q", "o", "p__strip0")
    assert overlay.curves == (("p", "p__strip0", 1),)
    assert overlay.doubles == (("p__strip0", "o", "q"),)
    overlay, strips = pushoff(D1)
    assert overlay == D1 and strips.strips == ()


def test_pushoff_errors():
    with pytest.raises(TransformError):
        pushoff(builtin_presentation("overlay_over"))
    with pytest.raises(TransformError):
        pushoff(make_presentation(["a"], branches=["a"]))


def test_pushoff_avoids_name_clash():
    d = make_presentation(["a", "a__strip0"], [("a", "a", "a")])
    overlay, strips = pushoff(d)
    assert len(set(overlay.sheets)) == 3 and strips.strips[0].sheet not in d.sheets


def test_pushoff_contracts_back():
    rng = random.Random(11)
    for _ in range(50):
        d = random_plain(rng)
        overlay, _ = pushoff(d)
        assert contract(overlay, 1)[0] == d


def test_numbering_examples():
    n = alexander_numbering(pushoff(SPHERE)[0])
    assert n == Numbering({"p": 0, "q": -1, "o": 0, "p__strip0": -1})
    w = alexander_numbering(pushoff(D2)[0])
    assert isinstance(w, Inconsistent) and w.total != 0
    assert verify_witness(pushoff(D2)[0], w)
    assert w.describe() == "s -[-1]-> s__strip0 -[+0]-> s  (total -1)"
    plain = make_presentation(["a", "b", "c"], [("b", "a", "c")])
    assert alexander_numbering(plain).values == {"a": 0, "b": 0, "c": 0}


def test_numbering_roots_least_id():
    p = make_presentation(["z", "b", "a"], curves=[("z", "b", 2), ("b", "a", 2)])
    assert alexander_numbering(p).values == {"z": -2, "b": -1, "a": 0}


def _satisfies(p, values):
    ok = all(values[k] == values[i] for i, _, k in p.doubles)
    return ok and all(values[b] == values[a] + (1 if layer == 2 else -1)
                      for a, b, layer in p.curves)


@settings(max_examples=200, deadline=None)
@given(presentations(max_sheets=5))
def test_numbering_matches_oracle(p):
    result = alexander_numbering(p)
    assert result.consistent == potentials_consistent(p)
    if result.consistent:
        assert _satisfies(p, result.values)
    else:
        assert verify_witness(p, result)
        walk = result.walk
        assert walk[-1].target == walk[0].source


def test_numbering_invariances():
    rng = random.Random(5)
    for _ in range(100):
        p = random_overlay(rng)
        verdict = alexander_numbering(p).consistent
        renamed = rename(p, {s: "w" + s for s in p.sheets})
        assert alexander_numbering(renamed).consistent == verdict
        assert alexander_numbering(add_sheets(p, ["iso"])).consistent == verdict


def test_verify_witness_rejects_forgeries():
    overlay = pushoff(D2)[0]
    fake = Inconsistent((Step("s", "s__strip0", 1, ("curve", "s", "s__strip0", 1)),
                         Step("s__strip0", "s", 0, ("double", "s__strip0", "s", "s"))))
    assert not verify_witness(overlay, fake)
    zero = Inconsistent((Step("s", "s__strip0", -1, ("curve", "s", "s__strip0", 1)),
                         Step("s__strip0", "s", 1, ("curve", "s", "s__strip0", 1))))
    assert not verify_witness(overlay, zero)


def test_modular_numbering():
    overlay = pushoff(D2)[0]
    assert not alexander_numbering(overlay, modulus=3).consistent
    n = alexander_numbering(overlay, modulus=1)
    assert n.consistent and n.modulus == 1


def test_phi_example():
    overlay = pushoff(SPHERE)[0]
    n = alexander_numbering(overlay)
    c1 = {"p": 0, "o": 0, "p__strip0": 2, "q": 0}
    out = phi(overlay, n, c1, C3)
    assert out == {"p": 0, "q": 1, "o": 0}
    assert check_coloring(contract(overlay, 1)[0], C3, out) == []


def test_phi_without_curves_is_identity():
    p = make_presentation(["a", "b", "c"], [("a", "b", "c")])
    n = alexander_numbering(p)
    for t in (C3, R3):
        for c in enumerate_colorings(p, t):
            assert phi(p, n, c, t) == c


def test_phi_errors():
    overlay = pushoff(D2)[0]
    with pytest.raises(TransformError):
        phi(overlay, alexander_numbering(overlay), {"s": 0, "s__strip0": 2}, C3)
    overlay = pushoff(SPHERE)[0]
    with pytest.raises(TransformError):
        phi(overlay, alexander_numbering(overlay),
            {"p": 0, "o": 0, "p__strip0": 0, "q": 0}, C3)


def test_phi_round_trip_sphere():
    overlay = pushoff(SPHERE)[0]
    n = alexander_numbering(overlay)
    for t in (C3, R3):
        source = enumerate_colorings(contract(overlay, 2)[0], t)
        assert len(source) == 9
        for c in source:
            assert phi_inverse(overlay, n, phi(overlay, n, c, t), t) == c
        for c in enumerate_colorings(contract(overlay, 1)[0], t):
            assert phi(overlay, n, phi_inverse(overlay, n, c, t), t) == c


def test_phi_representative_independence_on_corpus():
    overlays = corpus_overlays()
    assert len(overlays) >= 5
    for overlay in overlays:
        n = alexander_numbering(overlay)
        for t in racks_up_to_5():
            source = enumerate_colorings(contract(overlay, 2)[0], t)
            target = contract(overlay, 1)[0]
            for c in source:
                cands = phi_candidates(overlay, n, c, t)
                assert all(len(v) == 1 for v in cands.values())
            assert len(source) == count_colorings(target, t)


def test_psi_examples():
    c = {"p": 0, "o": 2, "q": 0}
    _, strips = pushoff(SPHERE)
    out = psi(SPHERE, strips, c, C3)
    assert out == {"p": 0, "o": 2, "q": 0, "p__strip0": 2}
    assert check_coloring(pushoff(SPHERE)[0], C3, out) == []
    _, strips = pushoff(D2)
    q = associated_quandle(C3)
    for c in enumerate_colorings(D2, q):
        a = c["s"]
        assert psi(D2, strips, c, C3) == {"s": a, "s__strip0": (a - 1) % 3}
    _, strips = pushoff(SPHERE)
    for c in enumerate_colorings(SPHERE, R3):
        assert psi(SPHERE, strips, c, R3) == {**c, "p__strip0": c["p"]}


def test_psi_rejects_bad_input():
    _, strips = pushoff(SPHERE)
    with pytest.raises(TransformError):
        psi(SPHERE, strips, {"p": 0, "o": 2, "q": 1}, C3)
    with pytest.raises(TransformError):
        psi_inverse(SPHERE, strips, {"p": 0, "o": 2, "q": 0, "p__strip0": 0}, C3)


def test_psi_round_trips():
    rng = random.Random(17)
    diagrams = [SPHERE, D1, D2] + [random_plain(rng) for _ in range(40)]
    racks = [t for t in enumerate_racks(3)] + [builtin("cyclic", 6), builtin("dihedral", 6)]
    for d in diagrams:
        overlay, strips = pushoff(d)
        for t in rng.sample(racks, 4):
            q = associated_quandle(t)
            left = enumerate_colorings(d, q)
            right = enumerate_colorings(overlay, t)
            assert len(left) == len(right)
            for c in left:
                assert psi_inverse(d, strips, psi(d, strips, c, t), t) == c
            for c in right:
                assert psi(d, strips, psi_inverse(d, strips, c, t), t) == c


def test_theorem2_examples():
    r = theorem2_report(SPHERE, C3)
    assert r.numbering.consistent and r.count_quandle == r.count_rack == 9 and r.verified
    r = theorem2_report(D2, C3)
    assert not r.numbering.consistent and r.bijection is None
    assert (r.count_quandle, r.count_rack) == (3, 0)
    assert "not claimed" in r.format()
    r = theorem2_report(D1, C3)
    assert r.verified and r.count_quandle == r.count_rack == 3


def test_theorem2_quandles_always_verify():
    rng = random.Random(23)
    quandles = [t for n in (2, 3) for t in enumerate_racks(n) if kink_map(t).is_identity()]
    for _ in range(60):
        d = random_plain(rng)
        for t in quandles + [R3]:
            assert theorem2_report(d, t).verified


def test_theorem2_report_output():
    r = theorem2_report(SPHERE, C3)
    text = r.format()
    assert "colorings by associated quandle: 9" in text and "bijection verified" in text
    payload = r.to_dict()
    assert payload["count_rack"] == 9 and payload["bijection"] is True
    r = theorem2_report(D2, C3)
    assert r.to_dict()["numbering"]["witness"]["total"] == -1
