import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import vizing_lab.chains as chains_mod
from helpers import (
    as_dict,
    line_distance,
    oracle_alt_path,
    oracle_conditional_fan,
    oracle_fan,
    oracle_flags,
    oracle_shift,
    random_greedy_coloring,
    regular_instance,
)
from vizing_lab.chains import (
    PreconditionError,
    alternating_path,
    amazing_sufficient,
    conditional_fan,
    enumerate_three_step_chains,
    fan,
    first_iteration,
    format_record,
    is_k_bad,
    iter_three_step_chains,
    min_chain_length,
    pair_family,
    parse_record_line,
    second_iteration,
    suitability_failure,
    superb_surrogate,
    third_iteration,
    two_suitability_failure,
    validate_record,
)
from vizing_lab.coloring import PartialColoring, classify_chain
from vizing_lab.graph import build_graph, cycle, path4, random_graph, star3


def flags(c, P):
    return oracle_flags(list(c.graph.edges), as_dict(c), c.palette, tuple(P))


def oracle_path_clear(c, center, ref_edges):
    """No nonempty alternating path anchored next to ``center`` gets within line distance 3 of ``ref_edges``."""
    g = c.graph
    edges = list(g.edges)
    col = as_dict(c)
    for w in g.neighbors(center):
        miss = c.missing(w)
        for kappa in miss:
            for iota in range(1, c.palette + 1):
                if iota in miss:
                    continue
                for h in oracle_alt_path(edges, col, w, iota, kappa):
                    if any(line_distance(g, h, f) <= 3 for f in ref_edges):
                        return False
    return True


def oracle_suitable(c, path_chain, alpha, f, ref_edges):
    pos = path_chain.index(f)
    return (
        pos != len(path_chain) - 1
        and c.colors[f] == alpha
        and all(line_distance(c.graph, f, h) >= 3 for h in ref_edges)
    )


# ---------------------------------------------------------------------------
# a corpus of stage-2 and stage-3 constructions on random 3- and 4-regular graphs
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def corpus():
    out = {"r1": [], "r2": [], "r3": [], "instances": []}
    for d, seed in ((3, 0), (4, 1)):
        g, c = regular_instance(3000, d, seed)
        out["instances"].append(c)
        for e in sorted(c.uncolored()):
            for x in sorted(g.edges[e]):
                r1 = first_iteration(c, e, x)
                out["r1"].append((c, r1))
                if r1.paths[0] is None:
                    continue
                for f1 in r1.paths[0].chain:
                    if suitability_failure(c, r1, f1) or not superb_surrogate(c, r1, f1):
                        continue
                    r2 = second_iteration(c, r1, f1, check_superb=False)
                    out["r2"].append((c, r2))
                    if r2.paths[1] is None:
                        continue
                    for f2 in r2.paths[1].chain:
                        if two_suitability_failure(c, r2, f2) is None:
                            out["r3"].append((c, r2, f2, third_iteration(c, r2, f2)))
    return out


# ---------------------------------------------------------------------------
# alternating paths and fans
# ---------------------------------------------------------------------------


def test_alternating_path_examples():
    g = path4()
    c = PartialColoring(g, [1, 2, 1])
    P = alternating_path(c, g.vid("a"), 1, 2)
    assert P.chain == (0, 1, 2) and P.last_vertex == g.vid("d")
    assert list(P.chain) == oracle_alt_path(list(g.edges), as_dict(c), g.vid("a"), 1, 2)
    d = g.vid("d")
    empty = alternating_path(c, d, 2, 3)
    assert empty.chain == () and empty.last_vertex == d
    sat = PartialColoring(cycle(4), [1, 2, 1, 2])
    with pytest.raises(PreconditionError, match="not missing"):
        alternating_path(sat, 1, 1, 2)
    with pytest.raises(PreconditionError, match="distinct"):
        alternating_path(c, 0, 1, 1)


def test_fan_examples():
    g = star3()
    x = g.vid("x")
    assert fan(PartialColoring(g), x, 0).chain == (0,)
    c = PartialColoring.from_mapping(g, {1: 1, 2: 2})
    F = fan(c, x, 0)
    assert F.chain == (0, 1, 2)
    assert list(F.chain) == oracle_fan(list(g.edges), as_dict(c), c.palette, x, 0)
    leaf = g.vid("v0")
    assert fan(c, leaf, 0).chain == (0,)
    with pytest.raises(PreconditionError):
        fan(c, x, 1)


def cond_gadget(extra_at_u):
    """Path a-b-y-d-w colored 1,2,1,2 with a third edge y-u colored 3."""
    edges = [("a", "b"), ("b", "y"), ("y", "d"), ("d", "w"), ("y", "u")]
    colors = {0: 1, 1: 2, 2: 1, 3: 2, 4: 3}
    if extra_at_u:
        edges += [("u", "p"), ("u", "q")]
        colors.update({5: 1, 6: 2})
    g = build_graph(edges)
    return g, PartialColoring.from_mapping(g, colors, palette=4)


def test_conditional_fan_hit():
    g, c = cond_gadget(False)
    P = alternating_path(c, g.vid("a"), 1, 2)
    assert P.chain == (0, 1, 2, 3)
    F = conditional_fan(c, 1, g.vid("y"), 1, 2, path=P)
    # b sees 1 and 2, its least missing color 3 leads to u, which misses 1
    assert F.chain == (1, 4) and F.leaves == (g.vid("b"), g.vid("u")) and F.hit
    assert (list(F.chain), F.hit) == oracle_conditional_fan(list(g.edges), as_dict(c), 4, 1, g.vid("y"), 1, 2)


def test_conditional_fan_maximal():
    g, c = cond_gadget(True)
    F = conditional_fan(c, 1, g.vid("y"), 1, 2)
    # u sees 1, 2, 3; its least missing color 4 is missing at y as well
    assert F.chain == (1, 4) and not F.hit
    assert (list(F.chain), F.hit) == oracle_conditional_fan(list(g.edges), as_dict(c), 4, 1, g.vid("y"), 1, 2)


def test_conditional_fan_degree_two_and_errors():
    g = build_graph([("a", "b"), ("b", "y"), ("y", "d"), ("d", "w")])
    c = PartialColoring.from_mapping(g, {0: 1, 1: 2, 2: 1, 3: 2}, palette=4)
    assert conditional_fan(c, 1, g.vid("y"), 1, 2).chain == (1,)
    P = alternating_path(c, g.vid("a"), 1, 2)
    with pytest.raises(PreconditionError, match="first edge"):
        conditional_fan(c, 0, g.vid("b"), 1, 2, path=P)
    with pytest.raises(PreconditionError, match="last edge"):
        conditional_fan(c, 3, g.vid("w"), 1, 2, path=P)
    with pytest.raises(PreconditionError, match="last vertex of the prefix"):
        conditional_fan(c, 1, g.vid("b"), 1, 2, path=P)


@settings(max_examples=60, deadline=None)
@given(st.integers(10, 120), st.integers(2, 6), st.integers(0, 2**32), st.data())
def test_paths_unique_and_reversible(n, d, seed, data):
    g = random_graph(n, d, seed)
    if g.m == 0:
        return
    c = random_greedy_coloring(g, seed)
    x = data.draw(st.integers(0, g.n - 1))
    alpha, beta = data.draw(st.lists(st.integers(1, c.palette), min_size=2, max_size=2, unique=True))
    if not c.is_missing(x, beta):
        with pytest.raises(PreconditionError):
            alternating_path(c, x, alpha, beta)
        return
    P = alternating_path(c, x, alpha, beta)
    assert P == alternating_path(c, x, alpha, beta)
    assert list(P.chain) == oracle_alt_path(list(g.edges), as_dict(c), x, alpha, beta)
    walk = P.vertices()
    assert len(set(walk)) == len(walk)
    for i, h in enumerate(P.chain):
        assert c.colors[h] == (alpha if i % 2 == 0 else beta)
    if P.chain and P.last_vertex != x:
        last = c.colors[P.chain[-1]]
        other = beta if last == alpha else alpha
        back = alternating_path(c, P.last_vertex, last, other)
        assert back.chain == tuple(reversed(P.chain))


@settings(max_examples=60, deadline=None)
@given(st.integers(10, 120), st.integers(2, 6), st.integers(0, 2**32), st.data())
def test_fan_matches_oracle(n, d, seed, data):
    g = random_graph(n, d, seed)
    c = random_greedy_coloring(g, seed)
    U = sorted(c.uncolored())
    if not U:
        return
    e = data.draw(st.sampled_from(U))
    x = data.draw(st.sampled_from(g.edges[e]))
    F = fan(c, x, e)
    assert list(F.chain) == oracle_fan(list(g.edges), as_dict(c), c.palette, x, e)
    assert len(F) <= g.degree(x)
    assert F == fan(c, x, e)


# ---------------------------------------------------------------------------
# iterations
# ---------------------------------------------------------------------------


def test_first_iteration_star3_and_isolated():
    g = star3()
    c = PartialColoring.from_mapping(g, {1: 1, 2: 2})
    r = first_iteration(c, 0, g.vid("x"))
    assert r.edge_type == "fan-only" and r.chain == (0, 1, 2) and r.augmenting
    assert flags(c, r.chain)[3]
    iso = build_graph([("u", "v")])
    r = first_iteration(PartialColoring(iso), 0, 0)
    assert r.chain == (0,) and r.edge_type == "fan-only" and r.augmenting


def test_first_iteration_with_path(corpus):
    with_path = [(c, r) for c, r in corpus["r1"] if r.blocks[1]]
    assert with_path
    for c, r in with_path:
        assert r.edge_type == "vizing"
        assert flags(c, r.chain)[3]
        assert r.x not in {v for h in r.blocks[1] for v in c.graph.edges[h]}
        assert r.colors[0] == (c.min_missing(r.x), c.min_missing(r.fans[0].leaves[-1]))


def test_second_iteration_errors(corpus):
    c, r1 = next((c, r) for c, r in corpus["r1"] if r.blocks[1] and len(r.blocks[1]) >= 3)
    near = r1.blocks[1][1]
    with pytest.raises(PreconditionError, match="not suitable"):
        second_iteration(c, r1, near)
    last = r1.paths[0].chain[-1]
    with pytest.raises(PreconditionError, match="last edge"):
        second_iteration(c, r1, last)


def test_second_iteration_prefix_proper_shiftable(corpus):
    assert corpus["r2"]
    kinds = Counter()
    for c, r2 in corpus["r2"]:
        kinds[r2.types[1]] += 1
        through_f2 = r2.blocks[0] + r2.blocks[1] + r2.blocks[2]
        assert flags(c, through_f2)[2]
        # color-pair dichotomy
        if r2.colors[1] is not None:
            a1 = set(r2.colors[0])
            pair = set(r2.colors[1])
            assert pair == a1 or not (pair & a1)
    assert set(kinds) == {"a", "b", "c"}


def test_third_iteration_types_and_sufficiency(corpus):
    kinds = Counter()
    for c, r2, f2, r3 in corpus["r3"]:
        assert r3.types[2] in ("a", "b", "c")
        kinds[r3.types[2]] += 1
        if r3.types[2] == "a":
            assert r3.blocks[5] == ()
        if r3.amazing:
            assert r3.augmenting and flags(c, r3.chain)[3]
        suff = amazing_sufficient(c, r2, f2)
        if suff:
            assert r3.amazing
        if r3.types[2] == "c" and r3.colors[2] is not None:
            assert not set(r3.colors[2]) & set(r2.colors[1])
    assert set(kinds) == {"a", "b", "c"}


def test_sufficient_test_matches_oracle(corpus):
    checked = 0
    for c, r2, f2, r3 in corpus["r3"][:60]:
        y3 = r3.y[2]
        ref = r2.blocks[0] + r2.blocks[1] + r2.blocks[2]
        assert amazing_sufficient(c, r2, f2) == oracle_path_clear(c, y3, ref)
        checked += 1
    assert checked > 10


def test_sufficient_is_strict():
    """Amazing although the sufficient test fails."""
    g, c = regular_instance(3000, 3, 0)
    e, x, f1, f2 = 105, 2099, 2049, 283
    r2 = second_iteration(c, first_iteration(c, e, x), f1)
    assert not amazing_sufficient(c, r2, f2)
    r3 = third_iteration(c, r2, f2)
    assert r3.amazing and r3.types[2] == "a"
    assert flags(c, r3.chain)[3]


def test_non_amazing_third_iteration():
    """A 2-suitable f2 whose third path changes under the shift."""
    g, c = regular_instance(3000, 4, 4)
    e, x, f1, f2 = 2564, 1492, 2518, 3924
    r2 = second_iteration(c, first_iteration(c, e, x), f1)
    r3 = third_iteration(c, r2, f2)
    assert not r3.amazing and r3.types[2] == "b" and not r3.augmenting
    assert r3.failure == "P_{c_Q}(z3) differs from P_c(z3)"
    # recompute both paths from plain dicts
    edges = list(g.edges)
    col = as_dict(c)
    alpha, beta = r2.paths[1].alpha, r2.paths[1].beta
    wn = r3.fans[2].leaves[-1]
    Q = r3.blocks[0] + r3.blocks[1] + r3.blocks[2] + r3.blocks[3] + r3.blocks[4]
    assert oracle_alt_path(edges, col, wn, alpha, beta) != oracle_alt_path(edges, oracle_shift(col, Q), wn, alpha, beta)


def test_third_iteration_last_edge_error(corpus):
    c, r2 = next((c, r) for c, r in corpus["r2"] if r.paths[1] is not None and len(r.paths[1].chain) > 1)
    with pytest.raises(PreconditionError, match="last edge"):
        third_iteration(c, r2, r2.paths[1].chain[-1])


def test_suitability_clauses_match_oracle(corpus):
    seen = 0
    for c, r1 in corpus["r1"][:400]:
        P = r1.paths[0]
        if P is None:
            continue
        for f1 in P.chain:
            want = oracle_suitable(c, P.chain, P.alpha, f1, r1.blocks[0])
            assert (suitability_failure(c, r1, f1) is None) == want
            seen += 1
    assert seen > 100
    for c, r2 in corpus["r2"][:100]:
        P = r2.paths[1]
        if P is None:
            continue
        ref = r2.blocks[0] + r2.blocks[1] + r2.blocks[2]
        for f2 in P.chain:
            assert (two_suitability_failure(c, r2, f2) is None) == oracle_suitable(c, P.chain, P.alpha, f2, ref)


def test_superb_surrogate_matches_oracle(corpus):
    checked = 0
    for c, r1 in corpus["r1"][:300]:
        P = r1.paths[0]
        if P is None:
            continue
        for pos, f1 in enumerate(P.chain):
            if suitability_failure(c, r1, f1):
                continue
            y2 = P.vertices()[pos + 1]
            assert superb_surrogate(c, r1, f1) == oracle_path_clear(c, y2, r1.blocks[0])
            checked += 1
    assert checked > 5


def test_fans_in_records_match_oracle(corpus):
    for c, r2, f2, r3 in corpus["r3"][:80]:
        edges, col = list(c.graph.edges), as_dict(c)
        assert list(r3.fans[0].chain) == oracle_fan(edges, col, c.palette, r3.x, r3.e)
        for k in (1, 2):
            cf = r3.fans[k]
            assert (list(cf.chain), cf.hit) == oracle_conditional_fan(edges, col, c.palette, cf.chain[0], cf.center, cf.alpha, cf.beta)


# ---------------------------------------------------------------------------
# enumeration, K-badness, pair families
# ---------------------------------------------------------------------------


def test_enumerate_fixtures():
    iso = build_graph([("u", "v")])
    recs = enumerate_three_step_chains(PartialColoring(iso), 0)
    assert [r.chain for r in recs] == [(0,)] and recs[0].edge_type == "fan-only"
    g = star3()
    c = PartialColoring.from_mapping(g, {1: 1, 2: 2})
    recs = enumerate_three_step_chains(c, 0)
    assert any(r.edge_type == "fan-only" for r in recs)
    assert enumerate_three_step_chains(c, 0, budget=1) == recs[:1]


def test_enumeration_contains_frozen_pair():
    g, c = regular_instance(3000, 3, 0)
    e, x, f1, f2 = 105, 2099, 2049, 283
    r3 = third_iteration(c, second_iteration(c, first_iteration(c, e, x), f1), f2)
    chains = {r.chain for r in enumerate_three_step_chains(c, e)}
    assert r3.chain in chains


def test_every_record_valid_and_augmenting(corpus):
    for c in corpus["instances"]:
        stages = Counter()
        for e in sorted(c.uncolored()):
            seen = set()
            for rec in iter_three_step_chains(c, e):
                assert validate_record(c, rec) == []
                assert flags(c, rec.chain)[3]
                assert rec.chain not in seen
                seen.add(rec.chain)
                stages[rec.stage] += 1
        assert stages[3] > 0


def test_record_format_round_trip(corpus):
    for c, r2, f2, r3 in corpus["r3"][:50]:
        d = parse_record_line(format_record(r3))
        assert d["edge"] == r3.e and d["x"] == r3.x and d["len"] == len(r3)
        assert tuple(d[k] for k in ("F1", "P1", "F2", "P2", "F3", "P3")) == r3.blocks
        assert d["y"] == r3.y and d["z"] == r3.z and d["colors"] == r3.colors
        assert d["f1"] == r3.f1 and d["f2"] == r3.f2


def test_truncation_is_prefix(corpus):
    for c, r2, f2, r3 in corpus["r3"][:50]:
        for t in range(1, len(r3) + 1):
            cut = r3.truncate(t)
            assert cut.chain == r3.chain[:t]
            assert cut.truncated == (t < len(r3))


def test_is_k_bad_examples():
    iso = build_graph([("u", "v")])
    c = PartialColoring(iso)
    assert not is_k_bad(c, 0, 1)
    assert not is_k_bad(c, 0, 0)
    g = star3()
    cs = PartialColoring.from_mapping(g, {1: 1, 2: 2})
    assert all(not is_k_bad(cs, 0, K) for K in range(4))


@settings(max_examples=30, deadline=None)
@given(st.integers(10, 150), st.integers(2, 5), st.integers(0, 2**32), st.integers(0, 4))
def test_is_k_bad_matches_min_length(n, d, seed, K):
    g = random_graph(n, d, seed)
    c = random_greedy_coloring(g, seed)
    for e in sorted(c.uncolored())[:5]:
        m = min_chain_length(c, e)
        want = m is None or m >= 2 * K + 2 * g.max_degree
        assert is_k_bad(c, e, K) == want


def test_pair_family_guard():
    g, c = regular_instance(3000, 4, 0)
    for e in sorted(c.uncolored())[:20]:
        m = min_chain_length(c, e)
        assert m < 2 * g.max_degree
        with pytest.raises(PreconditionError):
            pair_family(c, e, 0)


def recount(c, e, K):
    """Independent recount of the candidate and rejected sets from the iteration records."""
    g = c.graph
    x = min(g.edges[e])
    r1 = first_iteration(c, e, x)
    half = K / 2
    seconds = {}
    if r1.paths[0] is not None:
        P = r1.paths[0]
        for pos, f1 in enumerate(P.chain[: int(math.floor(half))]):
            if not oracle_suitable(c, P.chain, P.alpha, f1, r1.blocks[0]):
                continue
            if not oracle_path_clear(c, P.vertices()[pos + 1], r1.blocks[0]):
                continue
            r2 = second_iteration(c, r1, f1, check_superb=False)
            if r2.paths[1] is not None:
                seconds[f1] = r2
    tally = Counter(r.colors[1] for r in seconds.values())
    if not tally:
        return None, set(), set()
    top = max(tally.values())
    gd = min(p for p in tally if tally[p] == top)
    T, S = set(), set()
    for r2 in seconds.values():
        if r2.colors[1] != gd:
            continue
        P = r2.paths[1]
        ref = r2.blocks[0] + r2.blocks[1] + r2.blocks[2]
        for pos, f2 in enumerate(P.chain[: int(math.floor(half))]):
            if c.colors[f2] != gd[0]:
                continue
            T.add(f2)
            ok = oracle_suitable(c, P.chain, P.alpha, f2, ref) and oracle_path_clear(c, P.vertices()[pos + 1], ref)
            if not ok:
                S.add(f2)
    return gd, T, S


def test_pair_family_counts_match_recount(monkeypatch):
    """The counting runs with the badness guard lifted so that dense instances exercise it."""
    monkeypatch.setattr(chains_mod, "is_k_bad", lambda c, e, K: True)
    nonempty = 0
    for d, seed in ((3, 0), (4, 1)):
        g, c = regular_instance(3000, d, seed)
        for e in sorted(c.uncolored())[:150]:
            K = 40
            fam = pair_family(c, e, K)
            gd, T, S = recount(c, e, K)
            assert fam.gamma_delta == gd
            assert fam.candidates == T and fam.rejected == S
            assert T - S <= fam.projection()
            nonempty += bool(T)
    assert nonempty > 0
