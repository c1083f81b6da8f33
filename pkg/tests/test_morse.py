from functools import lru_cache

import pytest

from domcomplex.complex import ComplexSpec, embed_mask, enumerate_complex, wedge_count
from domcomplex.graphs import edge_bit, mask_edges, parse_mask
from domcomplex.morse import (
    REFERENCE_PAIRS,
    LemmaViolation,
    Matching,
    MatchingConflict,
    assemble,
    cofacet_count,
    critical_census,
    d52_matching,
    dnn2_matching,
    embedded_cells,
    enumerate_r34_matchings,
    reference_matching,
    inclusion_exclusion_matching,
    q12_matching,
    q23_matching,
    r34_cell,
    r34_label,
    validate_witness,
    verify_acyclic,
    verify_no_outside_cycles,
    verify_restriction,
)


@lru_cache(maxsize=None)
def table(n, k):
    return enumerate_complex(ComplexSpec(n, k))


@lru_cache(maxsize=None)
def parts(n):
    return dnn2_matching(table(n, n - 2))


def P(text, n):
    return parse_mask(text, n)


# hollow triangle on vertices a, b, c (bits 0, 1, 2), each vertex paired
# with the next edge round the cycle
A, B, C = 0b001, 0b010, 0b100
AB, BC, CA = A | B, B | C, C | A
TRIANGLE = [A, B, C, AB, BC, CA]


def cyclic_triangle():
    return Matching(3, [(A, AB), (B, BC), (C, CA)])


def test_pairs_must_be_facets():
    with pytest.raises(ValueError):
        Matching(4, [(P("13", 4), P("13|14|23", 4))])
    m = Matching(4, [(P("13", 4), P("13|14", 4))])
    with pytest.raises(MatchingConflict):
        m.add(P("13|14", 4), P("13|14|23", 4))


# -- inclusion-exclusion ------------------------------------------------------

def test_p12_on_d42_leaves_12_and_r12():
    t = table(4, 2)
    p12 = inclusion_exclusion_matching((1, 2), t, 4)
    unmatched = {c for c in t if c not in p12}
    assert unmatched == {P("12", 4)} | parts(4).r12
    assert len(parts(4).r12) == 9


def test_p34_on_d52_r12():
    d52 = d52_matching(table(5, 2))
    profile = {}
    for c in d52.r34:
        profile[c.bit_count() - 1] = profile.get(c.bit_count() - 1, 0) + 1
    assert profile == {4: 4, 5: 12, 6: 4}
    assert {r34_label(c) for c in d52.r34} == set("abcdefghijklmnpqrstu")


@pytest.mark.parametrize("n", [3, 4])
def test_p12_on_full_simplex(n):
    t = table(n, 0)
    m = inclusion_exclusion_matching((1, 2), t, n)
    census = critical_census(m, t)
    # the empty graph is not a cell, so the vertex {12} has no partner
    assert census.critical == {d: ([P("12", n)] if d == 0 else []) for d in range(t.dim + 1)}


# -- Q12 and Q23 ------------------------------------------------------------------

def test_q12_examples():
    q = parts(5).q12
    assert q.up[P("13|45", 5)] == P("13|14|45", 5)
    assert q.up[P("34|45", 5)] == P("13|34|45", 5)
    assert parts(4).q12.up[P("13|14", 4)] == P("13|14|23", 4)


def _expected_q12_partner(s, n):
    (a, b), (c, d) = mask_edges(s, n)
    if len({a, b, c, d}) == 4:  # two disjoint edges ab, cd with a < c
        return s | edge_bit(a, c, n)
    # a path x - mid - y
    mid = ({a, b} & {c, d}).pop()
    x, y = sorted(({a, b} | {c, d}) - {mid})
    hub = 2 if mid == 1 else 1
    return s | edge_bit(hub, x, n)


@pytest.mark.parametrize("n", range(4, 8))
def test_q12_follows_the_two_shapes(n):
    q = parts(n).q12
    ones = [c for c in parts(n).r12 if c.bit_count() == 2]
    assert len(q) == len(ones)
    for s in ones:
        assert q.up[s] == _expected_q12_partner(s, n)


@pytest.mark.parametrize("n", range(4, 8))
def test_q12_is_injective(n):
    ups = list(parts(n).q12.up.values())
    assert len(ups) == len(set(ups))


def test_q12_needs_an_admissible_edge():
    with pytest.raises(LemmaViolation):
        q12_matching({P("13|14", 4)}, 4)


def test_q23_examples():
    assert parts(4).q23.up[P("14|23|24", 4)] == P("13|14|23|24", 4)
    big = parts(6).q23
    assert big.up[embed_mask(P("14|23|24", 4), 4, 6)] == embed_mask(P("13|14|23|24", 4), 4, 6)


@pytest.mark.parametrize("n", range(4, 8))
def test_q23_partners_are_free_faces(n):
    p = parts(n)
    for tau, sigma in p.q23.pairs():
        assert tau not in p.q12
        assert cofacet_count(tau, p.table, n) == 1
        assert sigma & -sigma == sigma ^ tau  # the removed edge is the first one


def test_q23_conflict_with_q12():
    p = parts(4)
    fake = Matching(4, [(P("14|23|24", 4), P("13|14|23|24", 4))])
    with pytest.raises(MatchingConflict):
        q23_matching(p.r12, 4, q12=fake)


# -- assembly ---------------------------------------------------------------------

def test_assemble():
    p = parts(4)
    total = assemble([p.p12, p.q12, p.q23])
    assert total == p.total
    assert critical_census(total, p.table).counts == (1, 0, 3, 0)
    assert len(assemble([], n=4)) == 0
    with pytest.raises(MatchingConflict):
        assemble([p.q12, p.q12])


def test_assemble_d52():
    d = d52_matching(table(5, 2))
    assert critical_census(d.total, d.table).counts == (1, 0, 0, 0, 0, 4, 0)


# -- acyclicity ---------------------------------------------------------------

def test_cyclic_triangle_detected():
    report = verify_acyclic(cyclic_triangle(), TRIANGLE)
    assert not report.acyclic
    assert len(report.witness) == 7  # t0 s1 t1 s2 t2 s3 t0
    assert validate_witness(cyclic_triangle(), report.witness)


def test_acyclic_triangle():
    m = Matching(3, [(A, AB), (B, BC)])
    assert verify_acyclic(m, TRIANGLE).acyclic


def test_witness_validation_rejects_junk():
    m = cyclic_triangle()
    assert not validate_witness(m, [A, AB, B, BC, C, CA])  # not closed
    assert not validate_witness(m, [A, CA, C, BC, B, AB, A])  # wrong direction


@pytest.mark.parametrize("n", range(4, 9))
def test_dnn_acyclic_with_wedge_census(n):
    p = parts(n)
    p.total.check(p.table)
    assert verify_acyclic(p.total, p.table).acyclic
    assert critical_census(p.total, p.table).counts == (1, 0, wedge_count(n), 0)


@pytest.mark.parametrize("n", range(4, 8))
def test_parts_acyclic_on_their_own(n):
    p = parts(n)
    for piece, fam in [(p.p12, p.table), (p.q12, p.r12), (p.q23, p.r12)]:
        assert verify_acyclic(piece, fam).acyclic


def test_reference_matching():
    d = d52_matching(table(5, 2))
    m = reference_matching()
    assert len(m) == len(REFERENCE_PAIRS) == 8
    assert verify_acyclic(m, d.r34).acyclic
    census = critical_census(m, d.r34)
    assert census.counts == (0, 0, 0, 0, 0, 4, 0)
    assert {r34_label(c) for c in census.critical[5]} == set("hmpq")
    assert verify_acyclic(d.total, d.table).acyclic


def test_census_examples():
    crit = critical_census(parts(4).total, parts(4).table).critical[2]
    assert set(crit) == {P("13|14|34", 4), P("23|24|34", 4), P("13|14|24", 4)}
    t = table(5, 4)
    assert critical_census(Matching(5), t).counts == (10,)
    c = critical_census(parts(5).total, parts(5).table)
    assert sum(c.counts) + 2 * c.matched_pairs == len(parts(5).table)


# -- restriction ------------------------------------------------------------------

@pytest.mark.parametrize("n", range(5, 9))
def test_restriction(n):
    assert verify_restriction(parts(n).total, parts(n - 1).total)


def _force_pair(m, tau, sigma):
    """Pair ``tau`` with ``sigma``, dropping whatever either was paired with."""
    for c in (tau, sigma):
        if c in m.up:
            m.remove(c)
        elif c in m.down:
            m.remove(m.down[c])
    m.add(tau, sigma)
    return m


@pytest.mark.parametrize("target", ["13|14|34", "13|14|15"])
def test_perturbed_restriction_rejected(target):
    small = parts(4).total
    big = parts(5).total.copy()
    tau = P("13|14", 5)
    assert big.up[tau] == P("13|14|23", 5)
    # 13|14|34 breaks the embedded pair; 13|14|15 also crosses to the new vertex
    _force_pair(big, tau, P(target, 5))
    assert not verify_restriction(big, small)


@pytest.mark.parametrize("n", range(5, 9))
def test_no_outside_cycles_and_short_paths(n):
    big, small = parts(n), parts(n - 1)
    report = verify_no_outside_cycles(big.q12, big.r12, embedded_cells(small.table, n))
    assert report.acyclic
    assert report.max_path_length <= 2


def test_outside_cycles_trivial_cases():
    p = parts(5)
    assert verify_no_outside_cycles(p.total, p.table, p.table).acyclic
    report = verify_no_outside_cycles(cyclic_triangle(), TRIANGLE, [])
    assert not report.acyclic and validate_witness(cyclic_triangle(), report.witness)


# -- R34 enumeration ------------------------------------------------------------

@lru_cache(maxsize=None)
def r34_search():
    return enumerate_r34_matchings(d52_matching(table(5, 2)).r34)


def test_r34_enumeration_contains_reference():
    found = r34_search()
    fig = reference_matching()
    assert any(m == fig for m in found.acyclic)
    assert any(m == fig for m in found.shared_down)


def test_r34_enumeration_census():
    r34 = d52_matching(table(5, 2)).r34
    for m in r34_search().acyclic[:200] + r34_search().shared_down:
        assert critical_census(m, r34).counts == (0, 0, 0, 0, 0, 4, 0)


def test_r34_counts():
    counts = r34_search().counts()
    # 32 complete matchings contain a cycle; 16 pair every shared middle
    # cell downwards, and those are all acyclic
    assert counts == {"complete": 2402, "acyclic": 2370, "shared_down": 16}
    assert all(verify_acyclic(m, d52_matching(table(5, 2)).r34).acyclic
               for m in r34_search().shared_down)


# -- export formats -----------------------------------------------------------

def test_matching_export_text():
    text = parts(4).total.export_text()
    lines = text.splitlines()
    assert lines[0].split()[0] == "0"
    dims = [int(ln.split()[0]) for ln in lines]
    assert dims == sorted(dims)
    assert len(lines) == len(parts(4).total)
    assert "2 1c 1e" in lines  # 14|23|24 -> 13|14|23|24


def test_census_json():
    import json

    c = critical_census(parts(4).total, parts(4).table)
    payload = json.loads(c.to_json(acyclic=True))
    assert payload == {"critical": {"0": 1, "1": 0, "2": 3, "3": 0},
                       "matched_pairs": 18, "acyclic": True}


def test_r34_label_lookup():
    assert r34_label(r34_cell("u")) == "u"
    with pytest.raises(KeyError):
        r34_label(P("12", 5))
