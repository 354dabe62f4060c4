"""Directed multigraphs with orientation data and sign-tracked canonical forms.

A graph here is the raw combinatorial carrier of every complex in the
package: ordered external vertices, ordered internal vertices, an ordered
list of directed edges.  The ordering data is the orientation; permuting it
produces signs that depend on the parity of the ambient dimension n:

* ``even``  -- the edge ordering is the orientation (edge swaps give -1,
  relabelings and direction flips are free);
* ``odd``   -- the internal-vertex ordering together with the edge
  directions is the orientation (vertex swaps and flips give -1, edge
  swaps are free).

Canonical forms quotient by relabelings/reorderings/flips with the sign of
the group element applied, and detect graphs that are zero because some
automorphism acts by -1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

EVEN = "even"
ODD = "odd"


class StructuralError(ValueError):
    """Malformed graph data (bad vertex index, bad parity tag, ...)."""


class ContractionError(ValueError):
    """Contraction is undefined (tadpole edge, external-external edge)."""


@dataclass(frozen=True)
class Graph:
    """Directed multigraph with ordered vertices and edges.

    Vertices ``0 .. n_ext-1`` are external, ``n_ext .. n_ext+n_int-1``
    internal.  ``edges`` is an ordered tuple of ``(source, target)`` pairs;
    tadpoles and parallel edges are allowed.
    """

    n_ext: int
    n_int: int
    edges: tuple
    parity: str

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise StructuralError("parity must be 'even' or 'odd', got %r" % (self.parity,))
        if self.n_ext < 0 or self.n_int < 0:
            raise StructuralError("negative vertex count")
        n = self.n_ext + self.n_int
        for (s, t) in self.edges:
            if not (0 <= s < n and 0 <= t < n):
                raise StructuralError("edge endpoint %r out of range" % ((s, t),))

    # -- basic queries ---------------------------------------------------

    @property
    def n_vertices(self):
        return self.n_ext + self.n_int

    @property
    def n_edges(self):
        return len(self.edges)

    def is_internal(self, v):
        return v >= self.n_ext

    def valences(self):
        """Undirected valence per vertex; a tadpole counts twice."""
        val = [0] * self.n_vertices
        for (s, t) in self.edges:
            val[s] += 1
            val[t] += 1
        return val

    def components(self):
        """List of vertex sets of the connected components."""
        n = self.n_vertices
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for (s, t) in self.edges:
            ra, rb = find(s), find(t)
            if ra != rb:
                parent[ra] = rb
        comps = {}
        for v in range(n):
            comps.setdefault(find(v), set()).add(v)
        return list(comps.values())

    def is_connected(self):
        return len(self.components()) <= 1

    def is_admissible(self):
        """No connected component consisting only of internal vertices."""
        for comp in self.components():
            if all(self.is_internal(v) for v in comp):
                return False
        return True

    def is_one_vertex_irreducible(self):
        """Connected, and still connected after deleting any single vertex."""
        if not self.is_connected():
            return False
        if self.n_vertices <= 1:
            return True
        for v in range(self.n_vertices):
            keep = [u for u in range(self.n_vertices) if u != v]
            idx = {u: i for i, u in enumerate(keep)}
            sub = Graph(0, len(keep),
                        tuple((idx[s], idx[t]) for (s, t) in self.edges
                              if s != v and t != v),
                        self.parity)
            if not sub.is_connected():
                return False
        return True

    def loop_order(self):
        """First Betti number: edges - vertices + components."""
        return self.n_edges - self.n_vertices + len(self.components())

    # -- text form --------------------------------------------------------

    def to_text(self):
        parts = ["G", self.parity, str(self.n_ext), str(self.n_int),
                 str(self.n_edges), "|"]
        for (s, t) in self.edges:
            parts.append(str(s))
            parts.append(str(t))
        return " ".join(parts)

    @staticmethod
    def from_text(text):
        tok = text.split()
        try:
            if tok[0] != "G" or tok[5] != "|":
                raise StructuralError("bad graph header: %r" % text)
            parity, n_ext, n_int, k = tok[1], int(tok[2]), int(tok[3]), int(tok[4])
            flat = [int(x) for x in tok[6:]]
            if len(flat) != 2 * k:
                raise StructuralError("edge count mismatch in %r" % text)
            edges = tuple((flat[2 * i], flat[2 * i + 1]) for i in range(k))
        except (IndexError, ValueError) as exc:
            raise StructuralError("cannot parse graph text %r: %s" % (text, exc))
        return Graph(n_ext, n_int, edges, parity)


@dataclass(frozen=True)
class SignedKey:
    """A canonical graph together with the sign relating the input to it.

    ``sign`` is the parity-mode character of the group element carrying the
    input labeling to the canonical one; ``is_zero`` is set when the graph
    equals minus itself under some automorphism.
    """

    graph: Graph
    sign: int
    is_zero: bool


def perm_sign(perm):
    """Sign of a permutation given as a sequence of images."""
    n = len(perm)
    sign = 1
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def rearrangement_sign(parities, dest):
    """Koszul sign of rearranging a word of graded symbols.

    ``parities[i]`` is the degree parity of symbol i, ``dest[i]`` its target
    position.  The sign is (-1)^(number of inverted pairs of odd symbols).
    """
    sign = 1
    n = len(dest)
    for i in range(n):
        if not parities[i]:
            continue
        for j in range(i + 1, n):
            if parities[j] and dest[i] > dest[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# canonicalization
# ---------------------------------------------------------------------------

def _undirected_key(s, t):
    return (s, t) if s <= t else (t, s)


def _initial_colors(g, int_colors):
    """Isomorphism-invariant starting colors for the internal vertices.

    Directions are ignored (flips act on them), external labels are fixed.
    """
    n_ext = g.n_ext
    tad = [0] * g.n_int
    extm = [dict() for _ in range(g.n_int)]
    deg = [0] * g.n_int
    for (s, t) in g.edges:
        if s == t:
            if s >= n_ext:
                tad[s - n_ext] += 1
                deg[s - n_ext] += 2
            continue
        for a, b in ((s, t), (t, s)):
            if a >= n_ext:
                deg[a - n_ext] += 1
                if b < n_ext:
                    d = extm[a - n_ext]
                    d[b] = d.get(b, 0) + 1
    cols = []
    for i in range(g.n_int):
        base = int_colors[i] if int_colors is not None else None
        cols.append((base, deg[i], tad[i], tuple(sorted(extm[i].items()))))
    return cols


def _refine(g, cols):
    """Weisfeiler-Leman refinement of integer internal-vertex colors."""
    n_ext = g.n_ext
    adj = {}
    for (s, t) in g.edges:
        if s == t or s < n_ext or t < n_ext:
            continue
        a, b = s - n_ext, t - n_ext
        adj[(a, b)] = adj.get((a, b), 0) + 1
        adj[(b, a)] = adj.get((b, a), 0) + 1
    cols = list(cols)
    while True:
        sig = []
        for i in range(g.n_int):
            nbrs = sorted((cols[j], m) for (a, j), m in adj.items() if a == i)
            sig.append((cols[i], tuple(nbrs)))
        ranks = {v: r for r, v in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if new == cols:
            return cols
        cols = new


def _rank_values(values):
    """Deterministic integer ranks for possibly heterogeneous hashables."""
    ranks = {v: r for r, v in enumerate(sorted(set(values), key=repr))}
    return [ranks[v] for v in values]


def _labeling_code(g, sigma, int_colors):
    """Canonical code of the relabeled graph: sorted normalized edges (+colors)."""
    n_ext = g.n_ext

    def relab(v):
        return v if v < n_ext else n_ext + sigma[v - n_ext]

    edges = []
    for (s, t) in g.edges:
        a, b = relab(s), relab(t)
        edges.append((a, b) if a <= b else (b, a))
    edges.sort()
    if int_colors is None:
        return (tuple(edges),)
    inv = [0] * g.n_int
    for i, p in enumerate(sigma):
        inv[p] = i
    return (tuple(edges), tuple(int_colors[inv[p]] for p in range(g.n_int)))


def _search_labelings(g, int_colors):
    """All internal relabelings attaining the minimal code.

    Returns ``(code, sigmas)`` where each sigma maps old internal index to
    new internal index.  Partition-refinement individualization keeps the
    search close to the automorphism group.
    """
    M = g.n_int
    if M == 0:
        return _labeling_code(g, (), int_colors), [()]
    n_ext = g.n_ext
    adj = {}
    for (s, t) in g.edges:
        if s == t or s < n_ext or t < n_ext:
            continue
        a, b = s - n_ext, t - n_ext
        adj[(a, b)] = adj.get((a, b), 0) + 1
        adj[(b, a)] = adj.get((b, a), 0) + 1

    base = _refine(g, _initial_colors(g, int_colors))
    best = [None, []]

    def descend(cols, assigned):
        if len(assigned) == M:
            sigma = [0] * M
            for newpos, old in enumerate(assigned):
                sigma[old] = newpos
            code = _labeling_code(g, tuple(sigma), int_colors)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, [tuple(sigma)]
            elif code == best[0]:
                best[1].append(tuple(sigma))
            return
        # next label goes to a vertex of minimal color among the unassigned
        unassigned = [v for v in range(M) if v not in assigned]
        target = min(cols[v] for v in unassigned)
        cell = [v for v in unassigned if cols[v] == target]
        for v in cell:
            newcols = list(cols)
            newcols[v] = -(1 + len(assigned))  # individualize
            newcols = _refine(g, newcols)
            descend(newcols, assigned + [v])

    descend(_refine(g, _rank_values(base)), [])
    return best[0], best[1]


def _sigma_sign(g, sigma, deco_parities):
    """Sign of carrying the input labeling to the sigma-relabeled canonical one."""
    n_ext = g.n_ext
    vpar = 1 if g.parity == ODD else 0
    pairpar = [(vpar + (deco_parities[i] if deco_parities else 0)) % 2
               for i in range(g.n_int)]
    sign = rearrangement_sign(pairpar, sigma) if g.n_int else 1

    def relab(v):
        return v if v < n_ext else n_ext + sigma[v - n_ext]

    normed = []
    nflips = 0
    for idx, (s, t) in enumerate(g.edges):
        a, b = relab(s), relab(t)
        if a > b:
            nflips += 1
            a, b = b, a
        normed.append((a, b, idx))
    order = sorted(range(len(normed)), key=lambda i: normed[i][:2] + (normed[i][2],))
    if g.parity == EVEN:
        dest = [0] * len(order)
        for newpos, i in enumerate(order):
            dest[i] = newpos
        sign *= rearrangement_sign([1] * len(order), dest)
    else:
        sign *= (-1) ** (nflips % 2)
    return sign


_CANON_CACHE = {}


def _canon_full(g, int_colors, deco_parities):
    key = (g, int_colors, deco_parities)
    hit = _CANON_CACHE.get(key)
    if hit is not None:
        return hit
    code, sigmas = _search_labelings(g, int_colors)
    sigma0 = sigmas[0]
    n_ext = g.n_ext

    def relab(v):
        return v if v < n_ext else n_ext + sigma0[v - n_ext]

    edges = []
    for (s, t) in g.edges:
        a, b = relab(s), relab(t)
        edges.append((a, b) if a <= b else (b, a))
    edges.sort()
    cg = Graph(g.n_ext, g.n_int, tuple(edges), g.parity)

    is_zero = False
    if g.parity == EVEN:
        if len(set(edges)) != len(edges):
            is_zero = True
    else:
        if any(s == t for (s, t) in edges):
            is_zero = True
    sign0 = _sigma_sign(g, sigma0, deco_parities)
    if not is_zero:
        for sig in sigmas[1:]:
            if _sigma_sign(g, sig, deco_parities) != sign0:
                is_zero = True
                break
    result = (cg, sign0, is_zero, len(sigmas), sigma0)
    if len(_CANON_CACHE) > 400000:
        _CANON_CACHE.clear()
    _CANON_CACHE[key] = result
    return result


def canonicalize(g, int_colors=None, deco_parities=None):
    """Canonical form of ``g`` with the sign of the chosen relabeling.

    ``int_colors`` (hashable per internal vertex) makes decorated vertices
    distinguishable; ``deco_parities`` feeds their degree parities into the
    Koszul bookkeeping.  Two graphs related by a relabeling of internal
    vertices, a reordering of edges and direction flips get the same
    canonical graph, with signs differing by the character of the relating
    group element.
    """
    cg, sign, is_zero, _, _ = _canon_full(g, int_colors, deco_parities)
    return SignedKey(cg, sign, is_zero)


def canonical_labeling(g, int_colors=None, deco_parities=None):
    """Like :func:`canonicalize` but also returns the internal relabeling used."""
    cg, sign, is_zero, _, sigma = _canon_full(g, int_colors, deco_parities)
    return SignedKey(cg, sign, is_zero), sigma


def stab_sum(g, int_colors=None, deco_parities=None):
    """Sum of characters over the stabilizer of ``g`` in the full group.

    Equals the order of the stabilizer for classes that are not zero by
    symmetry, and 0 for zero classes.  This is the weight with which a
    canonical basis element pairs against its dual in the duality pairing.
    """
    cg, _, is_zero, nopt, _ = _canon_full(g, int_colors, deco_parities)
    if is_zero:
        return 0
    count = nopt
    if g.parity == ODD:
        mult = {}
        for e in cg.edges:
            mult[e] = mult.get(e, 0) + 1
        for m in mult.values():
            for j in range(2, m + 1):
                count *= j
    else:
        ntad = sum(1 for (s, t) in cg.edges if s == t)
        count <<= ntad
    return count


# ---------------------------------------------------------------------------
# contractions
# ---------------------------------------------------------------------------

def contract_edge(g, e):
    """Contract edge ``e`` (an index), merging its endpoints.

    The merged vertex is external iff either endpoint was, and sits at the
    survivor's slot (the external endpoint, else the smaller index).  The
    sign moves the edge out of the orientation: (-1)^e for even parity; for
    odd parity (-1)^(position of the dying internal vertex, 1-based) times
    -1 if the edge points from the dying to the surviving vertex.
    """
    g2, sign, _ = contract_edge_full(g, e)
    return g2, sign


def contract_edge_full(g, e):
    """:func:`contract_edge` plus the old-vertex -> new-vertex map."""
    if not (0 <= e < g.n_edges):
        raise StructuralError("edge index %d out of range" % e)
    s, t = g.edges[e]
    if s == t:
        raise ContractionError("cannot contract a tadpole")
    if s < g.n_ext and t < g.n_ext:
        raise ContractionError("cannot contract an edge between external vertices")
    if s < g.n_ext or (t >= g.n_ext and s < t):
        surv, dying = s, t
    else:
        surv, dying = t, s

    vmap = []
    for v in range(g.n_vertices):
        if v == dying:
            vmap.append(None)
        elif v > dying:
            vmap.append(v - 1)
        else:
            vmap.append(v)
    vmap[dying] = vmap[surv]

    new_edges = tuple((vmap[a], vmap[b]) for i, (a, b) in enumerate(g.edges) if i != e)
    g2 = Graph(g.n_ext, g.n_int - 1, new_edges, g.parity)

    if g.parity == EVEN:
        sign = (-1) ** e
    else:
        pos = dying - g.n_ext + 1
        sign = (-1) ** pos
        if (s, t) != (surv, dying):
            sign = -sign
    return g2, sign, tuple(vmap)


def contract_subgraph(g, edge_indices, vertex_set=None, merge_external=None):
    """Contract the subgraph on ``edge_indices`` (plus designated vertices).

    The subgraph's vertex set is the endpoints of the chosen edges together
    with ``vertex_set``.  All chosen edges move to the subgraph factor; the
    quotient keeps the rest, with the subgraph collapsed to a single new
    vertex.  If ``merge_external`` is None the new vertex is internal and is
    placed at the slot of the first subgraph vertex; otherwise it is the
    given external vertex (all other subgraph vertices must be internal or
    equal to it... external members merge into it).

    Returns ``(quotient, subgraph, vmap_quot, vmap_sub, vstar, sign)`` where
    the vmaps send old vertex indices to indices in the respective factor
    (``None`` when absent), ``vstar`` is the merged vertex's index in the
    quotient, and the sign is the lexicographic factor that moves the
    subgraph's orientation data to the right of the quotient's.
    """
    edge_indices = sorted(set(edge_indices))
    sverts = set(vertex_set or ())
    for i in edge_indices:
        if not (0 <= i < g.n_edges):
            raise StructuralError("edge index %d out of range" % i)
        s, t = g.edges[i]
        sverts.add(s)
        sverts.add(t)
    if not sverts:
        raise StructuralError("empty subgraph")
    exts_in = sorted(v for v in sverts if v < g.n_ext)
    if merge_external is None and exts_in:
        raise StructuralError("subgraph touches external vertices; pass merge_external")

    in_sub = [v in sverts for v in range(g.n_vertices)]

    # subgraph factor: chosen externals first (relabeled in order), then its
    # internals in order
    sub_ext = exts_in
    sub_int = sorted(v for v in sverts if v >= g.n_ext)
    vmap_sub = {}
    for i, v in enumerate(sub_ext):
        vmap_sub[v] = i
    for i, v in enumerate(sub_int):
        vmap_sub[v] = len(sub_ext) + i
    sub_edges = tuple((vmap_sub[s], vmap_sub[t])
                      for i, (s, t) in enumerate(g.edges) if i in set(edge_indices))
    sub = Graph(len(sub_ext), len(sub_int), sub_edges, g.parity)

    # quotient factor
    vmap_quot = [None] * g.n_vertices
    if merge_external is not None:
        if merge_external not in sverts or merge_external >= g.n_ext:
            raise StructuralError("merge_external must be an external subgraph vertex")
        surviving_ext = [v for v in range(g.n_ext) if v == merge_external or not in_sub[v]]
        new_ext = {v: i for i, v in enumerate(surviving_ext)}
        vstar = new_ext[merge_external]
        nxt = len(surviving_ext)
        for v in range(g.n_ext, g.n_vertices):
            if not in_sub[v]:
                vmap_quot[v] = nxt
                nxt += 1
        for v in range(g.n_ext):
            if v in new_ext:
                vmap_quot[v] = new_ext[v]
        for v in sverts:
            vmap_quot[v] = vstar
        q_next = len(surviving_ext)
        q_int = g.n_int - len(sub_int)
    else:
        # the new internal vertex takes the slot of the first subgraph vertex
        first = min(sverts)
        order = []
        for v in range(g.n_ext, g.n_vertices):
            if v == first:
                order.append("star")
            elif not in_sub[v]:
                order.append(v)
        new_ext = None
        vstar = None
        nxt = g.n_ext
        for item in order:
            if item == "star":
                vstar = nxt
            else:
                vmap_quot[item] = nxt
            nxt += 1
        for v in range(g.n_ext):
            vmap_quot[v] = v
        for v in sverts:
            vmap_quot[v] = vstar
        q_int = g.n_int - len(sub_int) + 1

    chosen = set(edge_indices)
    quot_edges = tuple((vmap_quot[s], vmap_quot[t])
                       for i, (s, t) in enumerate(g.edges) if i not in chosen)
    quot = Graph(g.n_ext if merge_external is None else len(surviving_ext),
                 q_int, quot_edges, g.parity)

    sign = _contract_subgraph_sign(g, chosen, sub_int, merge_external)
    return quot, sub, tuple(vmap_quot), vmap_sub, vstar, sign


def _contract_subgraph_sign(g, chosen_edges, sub_int, merge_external):
    """Lexicographic sign: quotient orientation data left, subgraph's right."""
    if g.parity == EVEN:
        # edges are the odd symbols; unshuffle chosen edges to the right
        par = [1] * g.n_edges
        dest = [0] * g.n_edges
        nq = 0
        for i in range(g.n_edges):
            if i not in chosen_edges:
                dest[i] = nq
                nq += 1
        ns = nq
        for i in range(g.n_edges):
            if i in chosen_edges:
                dest[i] = ns
                ns += 1
        return rearrangement_sign(par, dest)
    # odd parity: internal vertices are the odd symbols; gather the
    # subgraph's internals into a block (the merged vertex's slot for an
    # internal merge, the tail for an external merge), preserving relative
    # order on both sides
    ints = list(range(g.n_ext, g.n_vertices))
    sub_set = set(sub_int)
    if merge_external is None and sub_int:
        anchor = min(sub_int)
        target = []
        for v in ints:
            if v == anchor:
                target.extend(sub_int)
            elif v not in sub_set:
                target.append(v)
    else:
        target = [v for v in ints if v not in sub_set] + list(sub_int)
    dest_of = {v: p for p, v in enumerate(target)}
    dest = [dest_of[v] for v in ints]
    return rearrangement_sign([1] * len(ints), dest)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _as_range(x):
    if isinstance(x, int):
        return (x, x)
    lo, hi = x
    return (int(lo), int(hi))


def enumerate_graphs(n_ext, n_int, edges, parity, min_valence=0,
                     connected=False, one_vi=False, admissible=False,
                     no_tadpoles=False):
    """Enumerate canonical graphs, one per isomorphism class.

    ``n_int`` and ``edges`` may be ints or (lo, hi) ranges.  Classes that are
    zero by symmetry in the requested parity are omitted.  ``min_valence``
    applies to internal vertices.  Deterministic output order.
    """
    m_lo, m_hi = _as_range(n_int)
    k_lo, k_hi = _as_range(edges)
    out = []
    for M in range(m_lo, m_hi + 1):
        per_k = _grow_classes(n_ext, M, k_hi, parity)
        for k in range(k_lo, k_hi + 1):
            for cg in per_k.get(k, ()):
                if connected and not cg.is_connected():
                    continue
                if no_tadpoles and any(s == t for (s, t) in cg.edges):
                    continue
                if admissible and not cg.is_admissible():
                    continue
                if min_valence:
                    val = cg.valences()
                    if any(val[v] < min_valence for v in range(cg.n_ext, cg.n_vertices)):
                        continue
                if one_vi and not cg.is_one_vertex_irreducible():
                    continue
                sk = canonicalize(cg)
                if sk.is_zero:
                    continue
                out.append(sk)
    out.sort(key=lambda sk: (sk.graph.n_int, sk.graph.n_edges, sk.graph.edges))
    return out


@lru_cache(maxsize=None)
def _grow_classes(n_ext, M, k_max, parity):
    """Canonical representatives per edge count, grown by edge addition."""
    n = n_ext + M
    base = Graph(n_ext, M, (), parity)
    level = {canonicalize(base).graph}
    per_k = {0: sorted(level, key=lambda g: g.edges)}
    pairs = [(u, v) for u in range(n) for v in range(u, n)]
    for k in range(1, k_max + 1):
        nxt = set()
        for g in level:
            for (u, v) in pairs:
                g2 = Graph(n_ext, M, g.edges + ((u, v),), parity)
                nxt.add(canonicalize(g2).graph)
        level = nxt
        per_k[k] = sorted(level, key=lambda g: g.edges)
    return per_k
