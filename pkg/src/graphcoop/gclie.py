"""Graph Lie algebras on internal-only connected graphs.

The prime space is spanned by connected graphs (tadpoles and multi-edges
allowed, killed only by symmetry); the reduced variant restricts to
1-vertex-irreducible graphs with all vertices at least bivalent.  The Lie
bracket is the insertion bracket; edge contraction gives the dual
differential on the same basis.  Coefficient extensions tensor with the
monomial basis of H(BG).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .exlin import Lin, TruncationBox
from .siggraph import (
    EVEN, ODD, Graph, canonicalize, contract_edge, contract_subgraph,
    enumerate_graphs, stab_sum,
)
from .coefalg import GenSet, cobar_d, expand_tree


def parity_of(n):
    return ODD if n % 2 else EVEN


class GCSpace:
    """Canonical-basis manager for G_n' / GC_n' and their reduced variants."""

    def __init__(self, n, reduced=False):
        self.n = n
        self.parity = parity_of(n)
        self.reduced = reduced
        self.tag = ("gc", n, reduced)

    def degree(self, g):
        """Lie-algebra-side degree n(N-1) - k(n-1)."""
        return self.n * (g.n_vertices - 1) - g.n_edges * (self.n - 1)

    def is_reduced_graph(self, g):
        if any(v < 2 for v in g.valences()):
            return False
        return g.is_one_vertex_irreducible()

    def canon(self, g):
        """(key, sign) for a raw graph, or None when zero in this space."""
        if g.n_ext:
            raise ValueError("GC graphs have no external vertices")
        if not g.is_connected():
            return None
        sk = canonicalize(g)
        if sk.is_zero:
            return None
        if self.reduced and not self.is_reduced_graph(sk.graph):
            return None
        return sk.graph, sk.sign

    def lin(self, pairs):
        out = Lin(space=self.tag)
        for g, c in pairs:
            r = self.canon(g)
            if r is not None:
                out.add_term(r[0], c * r[1])
        return out

    def basis(self, max_vertices, max_edges):
        return [sk.graph for sk in enumerate_graphs(
            0, (1, max_vertices), (0, max_edges), self.parity,
            min_valence=2 if self.reduced else 0,
            connected=True, one_vi=self.reduced)]


def g_differential(space, x):
    """Edge-contraction differential, extended linearly.

    Tadpole edges are skipped (contraction undefined there); in reduced mode
    the quotient kills images with low-valence or 1-vertex-reducible graphs.
    """
    out = Lin(space=x.space)
    for g, c in x:
        for e, (s, t) in enumerate(g.edges):
            if s == t:
                continue
            g2, sign = contract_edge(g, e)
            r = space.canon(g2)
            if r is not None:
                out.add_term(r[0], c * sign * r[1])
    return out


# ---------------------------------------------------------------------------
# insertion bracket
# ---------------------------------------------------------------------------

def insertion_sign(parity, n_x, n_y, v):
    """Koszul sign of splicing an n_y-vertex block into slot v of x.

    For odd parity the vertex word changes by parity (1 + n_y) at slot v;
    the sign counts the crossings with the prefix.  Required for the graded
    Jacobi identity; even parity carries no vertex signs.
    """
    if parity == EVEN:
        return 1
    return (-1) ** (v * (1 + n_y))


def insertions(x, y, v):
    """All graphs obtained by inserting y into vertex v of x.

    y's vertices are spliced into v's slot, edge endpoints at v are
    redistributed over y's vertices in all ways, edge lists are concatenated
    (x first).  Raw graphs; the slot sign is :func:`insertion_sign`, the
    rest comes from canonicalization.
    """
    nx, ny = x.n_vertices, y.n_vertices
    slots = [i for i, (s, t) in enumerate(x.edges) for end in (0, 1)
             if (s, t)[end] == v]

    def vmap(u):
        return u if u < v else u + ny - 1

    out = []
    for assign in itertools.product(range(ny), repeat=len(slots)):
        edges = []
        si = 0
        for i, (s, t) in enumerate(x.edges):
            a, b = s, t
            if a == v:
                a = None
            if b == v:
                b = None
            # consume slot assignments in order (source end first)
            if a is None:
                a = v + assign[si]
                si += 1
            else:
                a = vmap(a)
            if b is None:
                b = v + assign[si]
                si += 1
            else:
                b = vmap(b)
            edges.append((a, b))
        for (s, t) in y.edges:
            edges.append((v + s, v + t))
        out.append(Graph(0, nx + ny - 1, tuple(edges), x.parity))
    return out


def pre_insert(space, x, y):
    """x o y: sum over vertices of x of inserting y, canonicalized."""
    out = Lin(space=x.space)
    for gx, cx in x:
        for gy, cy in y:
            c = cx * cy
            for v in range(gx.n_vertices):
                s = insertion_sign(gx.parity, gx.n_vertices, gy.n_vertices, v)
                for g in insertions(gx, gy, v):
                    r = space.canon(g)
                    if r is not None:
                        out.add_term(r[0], c * s * r[1])
    return out


def gc_bracket(space, x, y):
    """Insertion Lie bracket; inputs must be degree-homogeneous.

    [x, y] = y o x - (-1)^{|x||y|} x o y.  This orientation (insert the
    left argument into the right) is the one under which the printed
    Maurer-Cartan coefficients satisfy their equation and the bullet
    operation on the cooperads is a right action.
    """
    px = _parity_of_lin(space, x)
    py = _parity_of_lin(space, y)
    sign = (-1) ** (px * py)
    return pre_insert(space, y, x) - sign * pre_insert(space, x, y)


def _parity_of_lin(space, x):
    pars = {space.degree(g) % 2 for g, _ in x}
    if len(pars) > 1:
        raise ValueError("inhomogeneous element in bracket")
    return pars.pop() if pars else 0


# ---------------------------------------------------------------------------
# coefficient-extended elements: keys (bg_mono, graph) and the L-key
# ---------------------------------------------------------------------------

L_KEY = "L"


class CoefGCSpace:
    """H(BG) (x) GC_n (with an optional loop-order generator L term)."""

    def __init__(self, n, reduced=True):
        self.n = n
        self.gens = GenSet.for_dimension(n)
        self.gc = GCSpace(n, reduced)
        self.tag = ("coefgc", n, reduced)

    def degree(self, key):
        mono, g = key
        if g == L_KEY:
            return self.gens.bg_degree(mono)
        return self.gens.bg_degree(mono) + self.gc.degree(g)

    def lin(self, triples):
        out = Lin(space=self.tag)
        for mono, g, c in triples:
            r = self.gc.canon(g)
            if r is not None:
                out.add_term((mono, r[0]), c * r[1])
        return out

    def bracket(self, x, y, box=None):
        """Coefficient-bilinear insertion bracket, box-truncated.

        [a (x) g, b (x) h] = +- ab (x) [g, h]; the Koszul sign is trivial
        because H(BG) is evenly graded.
        """
        out = Lin(space=self.tag)
        grouped_x = _group_by_mono(x)
        grouped_y = _group_by_mono(y)
        for ma, xs in grouped_x.items():
            for mb, ys in grouped_y.items():
                mono = self.gens.bg_mul(ma, mb)
                if box is not None and self.gens.bg_degree(mono) > box.max_coef_degree:
                    continue
                br = gc_bracket(self.gc, xs, ys)
                for g, c in br:
                    if box is not None and (g.n_vertices > box.max_internal
                                            or g.n_edges > box.max_edges):
                        continue
                    out.add_term((mono, g), c)
        return out


def _group_by_mono(x):
    grouped = {}
    for (mono, g), c in x:
        if g == L_KEY:
            raise ValueError("L terms have no bracket against graphs here")
        grouped.setdefault(mono, Lin()).add_term(g, c)
    return grouped


# ---------------------------------------------------------------------------
# the Maurer-Cartan elements
# ---------------------------------------------------------------------------

def delta_graph(n):
    return Graph(0, 2, ((0, 1),), parity_of(n))


def build_delta(n):
    """delta = (1/2) (two internal vertices joined by one edge)."""
    return Lin.basis(delta_graph(n), Fraction(1, 2), space=("gc", n, False))


def tadpole_graph(n):
    return Graph(0, 1, ((0, 0),), parity_of(n))


def multi_edge_graph(n, j):
    return Graph(0, 2, tuple((0, 1) for _ in range(j)), parity_of(n))


def build_m(n, box):
    """The MC element encoding the rotation-group action, truncated.

    Even n: E_n (x) (tadpole vertex).  Odd n: sum over k >= 1 of
    p_{2n-2}^k / 4^k * 1/(2 (2k+1)!) times the 2-vertex graph with 2k+1
    edges, for every k the box can hold.
    """
    gens = GenSet.for_dimension(n)
    space = CoefGCSpace(n)
    out = Lin(space=space.tag)
    if n % 2 == 0:
        e_idx = len(gens.bg) - 1  # the Euler generator is listed last
        out.add_term((gens.bg_gen(e_idx), tadpole_graph(n)), Fraction(1))
        return out
    top = len(gens.bg) - 1  # p_{2n-2}
    deg = gens.bg[top][1]
    kmax = 0
    k = 1
    while 2 * k + 1 <= box.max_edges and k * deg <= box.max_coef_degree:
        kmax = k
        k += 1
    if kmax == 0:
        raise ValueError("truncation box too small to hold the first term of m")
    for k in range(1, kmax + 1):
        fact = 1
        for j in range(1, 2 * k + 2):
            fact *= j
        mono = tuple(k if i == top else 0 for i in range(gens.ngen))
        coeff = Fraction(1, 4 ** k) * Fraction(1, 2 * fact)
        out.add_term((mono, multi_edge_graph(n, 2 * k + 1)), coeff)
    return out


def mc_residual(m, n, box):
    """[delta, m] + (1/2)[m, m] in the box; zero iff m is Maurer-Cartan
    in the delta-twisted Lie algebra."""
    space = CoefGCSpace(n)
    delta = Lin({(space.gens.unit(), delta_graph(n)): Fraction(1, 2)},
                space=space.tag)
    r = space.bracket(delta, m, box) + Fraction(1, 2) * space.bracket(m, m, box)
    return r


# ---------------------------------------------------------------------------
# loop order and L
# ---------------------------------------------------------------------------

def loop_grading(x):
    """Split a graph Lin by first Betti number."""
    parts = {}
    for g, c in x:
        parts.setdefault(g.loop_order(), Lin(space=x.space)).add_term(g, c)
    return parts


def l_bracket(x):
    """[L, x]: multiply each loop-graded part by its loop order."""
    out = Lin(space=x.space)
    for g, c in x:
        out.add_term(g, c * g.loop_order())
    return out


# ---------------------------------------------------------------------------
# the Lie algebra map phi: ghat -> GC_n encoded by m
# ---------------------------------------------------------------------------

class Phi:
    """Generators x_mu map to the H(BG)-components of the MC element m."""

    def __init__(self, n, box):
        self.n = n
        self.box = box
        self.space = GCSpace(n, reduced=True)
        self.gens = GenSet.for_dimension(n)
        self.images = {}
        for (mono, g), c in build_m(n, box):
            self.images.setdefault(mono, Lin(space=self.space.tag)).add_term(g, c)

    def on_generator(self, mono):
        return self.images.get(mono, Lin(space=self.space.tag))

    def on_tree(self, tree):
        if tree[0] == "g":
            return self.on_generator(tree[1])
        return gc_bracket(self.space, self.on_tree(tree[1]), self.on_tree(tree[2]))

    def on_lie(self, x):
        """Apply to a Lin over Lyndon bracket trees."""
        out = Lin(space=self.space.tag)
        for tree, c in x:
            for g, c2 in self.on_tree(tree):
                out.add_term(g, c * c2)
        return out


def phi_chain_residual(phi, mono):
    """phi(d_cobar x_mono) - [delta, phi(x_mono)]; zero when phi is a dg map."""
    from .coefalg import lie_normalize
    gens = phi.gens
    d = cobar_d(gens, Lin.basis((mono,)))
    nf = lie_normalize(gens, d) if d else Lin()
    lhs = phi.on_lie(nf)
    prime = GCSpace(phi.n, reduced=False)
    delta = build_delta(phi.n)
    img = Lin(dict(phi.on_generator(mono).terms), space=prime.tag)
    rhs = gc_bracket(prime, delta, img)
    diff = lhs - Lin(dict(rhs.terms), space=lhs.space)
    out = Lin(space=lhs.space)
    for g, c in diff:
        if g.n_vertices <= phi.box.max_internal and g.n_edges <= phi.box.max_edges:
            out.add_term(g, c)
    return out


# ---------------------------------------------------------------------------
# duality pairing
# ---------------------------------------------------------------------------

def pairing(g, key):
    """Stabilizer-weighted duality pairing of a raw graph against a basis key.

    Sums the character over all group elements carrying the canonical key to
    the raw graph: canonical sign times the stabilizer order on a match.
    """
    sk = canonicalize(g)
    if sk.is_zero or sk.graph != key:
        return 0
    return sk.sign * stab_sum(key)
