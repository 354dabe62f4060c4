"""Canonical forms, signs, zero detection, contractions, enumeration."""

import itertools
import random

import pytest

from graphcoop.siggraph import (
    EVEN, ODD, ContractionError, Graph, StructuralError,
    canonicalize, contract_edge, contract_subgraph, enumerate_graphs,
    perm_sign, rearrangement_sign, stab_sum,
)


def G(n_ext, n_int, edges, parity):
    return Graph(n_ext, n_int, tuple(edges), parity)


# ---------------------------------------------------------------------------
# brute-force oracle: act by every group element, track characters
# ---------------------------------------------------------------------------

def brute_orbit_signs(g):
    """Map labeled-graph-form -> set of characters of elements reaching it."""
    M, n_ext = g.n_int, g.n_ext
    seen = {}
    for sigma in itertools.permutations(range(M)):
        def relab(v):
            return v if v < n_ext else n_ext + sigma[v - n_ext]
        base = [(relab(s), relab(t)) for (s, t) in g.edges]
        for flips in itertools.product((0, 1), repeat=g.n_edges):
            flipped = [(t, s) if f else (s, t) for (s, t), f in zip(base, flips)]
            for pi in itertools.permutations(range(g.n_edges)):
                edges = tuple(flipped[pi[i]] for i in range(g.n_edges))
                if g.parity == EVEN:
                    chi = perm_sign(pi)
                else:
                    chi = perm_sign(sigma) * (-1) ** sum(flips)
                seen.setdefault(edges, set()).add(chi)
    return seen


def brute_is_zero(g):
    signs = brute_orbit_signs(g)[g.edges]
    return len(signs) == 2


def brute_stab_sum(g):
    signs = 0
    M, n_ext = g.n_int, g.n_ext
    for sigma in itertools.permutations(range(M)):
        def relab(v):
            return v if v < n_ext else n_ext + sigma[v - n_ext]
        base = [(relab(s), relab(t)) for (s, t) in g.edges]
        for flips in itertools.product((0, 1), repeat=g.n_edges):
            flipped = [(t, s) if f else (s, t) for (s, t), f in zip(base, flips)]
            for pi in itertools.permutations(range(g.n_edges)):
                edges = tuple(flipped[pi[i]] for i in range(g.n_edges))
                if edges == g.edges:
                    if g.parity == EVEN:
                        signs += perm_sign(pi)
                    else:
                        signs += perm_sign(sigma) * (-1) ** sum(flips)
    return signs


# ---------------------------------------------------------------------------
# spec examples
# ---------------------------------------------------------------------------

def test_double_edge_even_is_zero():
    g = G(0, 2, [(0, 1), (0, 1)], EVEN)
    assert canonicalize(g).is_zero
    assert brute_is_zero(g)


def test_tadpole_parity():
    g_even = G(0, 1, [(0, 0)], EVEN)
    g_odd = G(0, 1, [(0, 0)], ODD)
    assert not canonicalize(g_even).is_zero
    assert canonicalize(g_odd).is_zero
    assert not brute_is_zero(g_even)
    assert brute_is_zero(g_odd)


def test_identity_relabel_sign():
    for parity in (EVEN, ODD):
        g = G(1, 3, [(0, 1), (1, 2), (2, 3), (3, 1)], parity)
        sk = canonicalize(g)
        again = canonicalize(sk.graph)
        assert again.sign == 1 and again.graph == sk.graph


def test_relabeling_consistency_exhaustive_small():
    rng = random.Random(7)
    for parity in (EVEN, ODD):
        for _ in range(40):
            M = rng.randint(1, 4)
            k = rng.randint(1, 5)
            edges = [(rng.randrange(M), rng.randrange(M)) for _ in range(k)]
            g = G(0, M, edges, parity)
            sk = canonicalize(g)
            if sk.is_zero:
                continue
            # every group element must transform the sign by its character
            for sigma in itertools.permutations(range(M)):
                for flips in itertools.product((0, 1), repeat=min(k, 3)):
                    fl = flips + (0,) * (k - len(flips))
                    e2 = tuple((sigma[t], sigma[s]) if f else (sigma[s], sigma[t])
                               for (s, t), f in zip(edges, fl))
                    h = G(0, M, e2, parity)
                    chi = 1 if parity == EVEN else perm_sign(sigma) * (-1) ** sum(fl)
                    sk2 = canonicalize(h)
                    assert sk2.graph == sk.graph
                    assert sk2.sign == chi * sk.sign


def test_zero_detection_matches_bruteforce():
    rng = random.Random(11)
    for parity in (EVEN, ODD):
        for _ in range(60):
            M = rng.randint(1, 4)
            k = rng.randint(0, 5)
            edges = [(rng.randrange(M), rng.randrange(M)) for _ in range(k)]
            g = G(0, M, edges, parity)
            assert canonicalize(g).is_zero == brute_is_zero(g)


def test_stab_sum_matches_bruteforce():
    rng = random.Random(13)
    cases = [
        G(0, 2, [(0, 1)], ODD),
        G(0, 2, [(0, 1)] * 3, ODD),
        G(0, 1, [(0, 0)], EVEN),
        G(0, 3, [(0, 1), (1, 2), (0, 2)], EVEN),
    ]
    for _ in range(30):
        M = rng.randint(1, 4)
        k = rng.randint(0, 4)
        parity = rng.choice([EVEN, ODD])
        cases.append(G(0, M, [(rng.randrange(M), rng.randrange(M))
                              for _ in range(k)], parity))
    for g in cases:
        sk = canonicalize(g)
        assert stab_sum(sk.graph) == brute_stab_sum(sk.graph)


def test_contract_edge_basics():
    g = G(0, 2, [(0, 1)], EVEN)
    g2, sign = contract_edge(g, 0)
    assert g2 == G(0, 1, [], EVEN) and sign == 1

    # contracting an external-internal edge absorbs the internal vertex
    g = G(2, 1, [(0, 2), (2, 1)], EVEN)
    g2, sign = contract_edge(g, 0)
    assert g2 == G(2, 0, [(0, 1)], EVEN)

    with pytest.raises(ContractionError):
        contract_edge(G(0, 1, [(0, 0)], EVEN), 0)
    with pytest.raises(ContractionError):
        contract_edge(G(2, 0, [(0, 1)], EVEN), 0)


def test_triangle_contraction_is_zero_even():
    tri = G(0, 3, [(0, 1), (1, 2), (0, 2)], EVEN)
    g2, _ = contract_edge(tri, 1)
    assert canonicalize(g2).is_zero  # double edge


def test_contract_subgraph_trivia():
    # s = all edges of a connected all-internal graph -> single vertex
    tri = G(0, 3, [(0, 1), (1, 2), (0, 2)], EVEN)
    quot, sub, _, _, _, sign = contract_subgraph(tri, [0, 1, 2])
    assert quot == G(0, 1, (), EVEN)
    assert sub.n_int == 3 and sub.n_edges == 3

    # s = empty with one designated vertex: graph unchanged, sign +1
    quot, sub, vq, vs, vstar, sign = contract_subgraph(tri, [], vertex_set=[1])
    assert sign == 1
    assert canonicalize(quot).graph == canonicalize(tri).graph


def test_contract_subgraph_tetrahedron_triangle():
    # contracting one triangle of the tetrahedron leaves a double edge
    tet = G(0, 4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], EVEN)
    tri_edges = [i for i, (s, t) in enumerate(tet.edges) if s != 3 and t != 3]
    quot, sub, _, _, _, _ = contract_subgraph(tet, tri_edges)
    assert quot.n_int == 2 and quot.n_edges == 3
    mult = {}
    for (s, t) in quot.edges:
        key = (min(s, t), max(s, t))
        mult[key] = mult.get(key, 0) + 1
    assert sorted(mult.values()) == [3]


def test_contract_subgraph_edge_vs_contract_edge():
    # |s| = 1 agrees with contract_edge up to the documented sign rule
    rng = random.Random(3)
    for parity in (EVEN, ODD):
        for _ in range(25):
            M = rng.randint(2, 5)
            k = rng.randint(1, 6)
            edges = []
            while len(edges) < k:
                s, t = rng.randrange(M), rng.randrange(M)
                if s != t:
                    edges.append((s, t))
            g = G(0, M, edges, parity)
            e = rng.randrange(k)
            try:
                ge, se, vmape = __import__("graphcoop.siggraph", fromlist=["x"]).contract_edge_full(g, e)
            except ContractionError:
                continue
            quot, sub, vq, vs, vstar, ss = contract_subgraph(g, [e])
            assert canonicalize(quot).graph == canonicalize(ge).graph


def test_enumerate_examples():
    # n_ext=0, n_int=4, 6 edges, even, >=3-valent, connected, 1-vi: tetrahedron only
    out = enumerate_graphs(0, 4, 6, EVEN, min_valence=3, connected=True, one_vi=True)
    assert len(out) == 1
    assert out[0].graph.n_edges == 6

    out = enumerate_graphs(0, 2, 1, EVEN, connected=True)
    assert len(out) == 1

    # the double edge is zero for even parity; only the edge+tadpole class
    # remains, and nothing at all without tadpoles
    assert canonicalize(G(0, 2, [(0, 1), (0, 1)], EVEN)).is_zero
    out = enumerate_graphs(0, 2, 2, EVEN, connected=True, no_tadpoles=True)
    assert out == []
    out = enumerate_graphs(0, 2, 2, EVEN, connected=True)
    assert [sk.graph.edges for sk in out] == [((0, 1), (1, 1))]

    # odd parity: even numbers of parallel edges are zero too (swap both
    # vertices and flip every edge), tadpoles always die; triple edge lives
    out = enumerate_graphs(0, 2, 2, ODD, connected=True)
    assert out == []
    out = enumerate_graphs(0, 2, 3, ODD, connected=True)
    assert [sk.graph.edges for sk in out] == [((0, 1), (0, 1), (0, 1))]


def test_text_roundtrip():
    g = G(2, 2, [(0, 2), (2, 3), (3, 1)], ODD)
    assert Graph.from_text(g.to_text()) == g
    with pytest.raises(StructuralError):
        Graph.from_text("G even 1 2")


def test_rearrangement_sign():
    # swapping two odd symbols gives -1, odd/even crossings are free
    assert rearrangement_sign([1, 1], [1, 0]) == -1
    assert rearrangement_sign([1, 0], [1, 0]) == 1
    assert rearrangement_sign([1, 1, 1], [2, 1, 0]) == -1
