"""The undecorated graph Hopf cooperads and their symmetry actions.

Arity-r pieces are spanned by admissible graphs (external vertices 1..r,
no all-internal components).  The commutative product glues graphs along
external vertices; cocomposition contracts subgraphs containing a chosen
set of external inputs; the graph Lie algebra acts by the bullet
(subgraph-pairing) and circle (unary-cocomposition) operations, and their
combination twists the differential.  The semidirect product with the word
Hopf algebra realizes the smaller model of the framed disks operad.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .coefalg import GenSet, deconcat, shuffle_words, word_merge_d
from .exlin import Lin
from .siggraph import (
    EVEN, ODD, Graph, canonicalize, contract_subgraph, enumerate_graphs,
    stab_sum,
)
from .gclie import GCSpace, build_delta, build_m, pairing


class GGSpace:
    """Canonical-basis manager for the arity-r piece of GG_n' / GG_n."""

    def __init__(self, n, r, reduced=False):
        self.n = n
        self.r = r
        self.parity = ODD if n % 2 else EVEN
        self.reduced = reduced
        self.tag = ("gg", n, r, reduced)

    def degree(self, g):
        return g.n_edges * (self.n - 1) - self.n * g.n_int

    def unit_graph(self):
        return Graph(self.r, 0, (), self.parity)

    def canon(self, g):
        """(key, sign) or None; inadmissible and quotiented graphs drop."""
        if g.n_ext != self.r:
            raise ValueError("arity mismatch: expected %d external vertices" % self.r)
        if not g.is_admissible():
            return None
        if self.reduced:
            val = g.valences()
            if any(val[v] < 2 for v in range(g.n_ext, g.n_vertices)):
                return None
        sk = canonicalize(g)
        if sk.is_zero:
            return None
        return sk.graph, sk.sign

    def lin(self, pairs):
        out = Lin(space=self.tag)
        for g, c in pairs:
            r = self.canon(g)
            if r is not None:
                out.add_term(r[0], c * r[1])
        return out

    def basis(self, max_internal, max_edges):
        return [sk.graph for sk in enumerate_graphs(
            self.r, (0, max_internal), (0, max_edges), self.parity,
            min_valence=2 if self.reduced else 0, admissible=True)]


# ---------------------------------------------------------------------------
# product
# ---------------------------------------------------------------------------

def glue_graphs(gx, gy):
    """Union over shared external vertices; y's internals follow x's."""
    shift = gx.n_int
    edges = list(gx.edges)
    for (s, t) in gy.edges:
        edges.append((s if s < gy.n_ext else s + shift,
                      t if t < gy.n_ext else t + shift))
    return Graph(gx.n_ext, gx.n_int + gy.n_int, tuple(edges), gx.parity)


def gg_product(space, x, y):
    """Graded commutative product: glue at external vertices."""
    out = Lin(space=space.tag)
    for gx, cx in x:
        for gy, cy in y:
            r = space.canon(glue_graphs(gx, gy))
            if r is not None:
                out.add_term(r[0], cx * cy * r[1])
    return out


# ---------------------------------------------------------------------------
# cocomposition
# ---------------------------------------------------------------------------

def subsets(seq):
    for r in range(len(seq) + 1):
        yield from itertools.combinations(seq, r)


def cocompose_terms(g, ext_subset):
    """Raw cocomposition terms for the 2-level tree grouping ``ext_subset``.

    Yields ``(quotient, subgraph, sign)`` over pairs of an internal-vertex
    subset S and an arbitrary subset E' of the edges inside ext_subset + S;
    unchosen inner edges stay in the quotient as tadpoles at the merged
    vertex.  (Free edge subsets, not only induced subgraphs: with tadpoles
    admitted, the counit law forces this.)  Inadmissible factors are
    skipped.  The new external vertex sits at the slot of min(ext_subset).
    """
    A = sorted(ext_subset)
    if not A or any(not (0 <= a < g.n_ext) for a in A):
        raise ValueError("bad external subset %r" % (ext_subset,))
    aset = set(A)
    internals = range(g.n_ext, g.n_vertices)
    for S in subsets(list(internals)):
        sel = aset | set(S)
        inner = [i for i, (s, t) in enumerate(g.edges)
                 if s in sel and t in sel]
        for chosen in subsets(inner):
            quot, sub, vq, vs, vstar, sign = contract_subgraph(
                g, chosen, vertex_set=sel, merge_external=min(A))
            if not sub.is_admissible() or not quot.is_admissible():
                continue
            yield quot, sub, sign


def gg_cocompose(space, x, ext_subset):
    """Cocomposition as a Lin over (quotient_key, subgraph_key) pairs."""
    A = sorted(ext_subset)
    left = GGSpace(space.n, space.r - len(A) + 1, space.reduced)
    right = GGSpace(space.n, len(A), space.reduced)
    out = Lin(space=("ggpair", left.tag, right.tag))
    for g, c in x:
        for quot, sub, sign in cocompose_terms(g, A):
            rq = left.canon(quot)
            rs = right.canon(sub)
            if rq is None or rs is None:
                continue
            out.add_term((rq[0], rs[0]), c * sign * rq[1] * rs[1])
    return out


def counit(space, x):
    """Counit of GG(1): the coefficient of the unit graph."""
    if space.r != 1:
        raise ValueError("counit lives on arity 1")
    return x[space.unit_graph()]


# ---------------------------------------------------------------------------
# bullet action (dual of the internal-subgraph coaction)
# ---------------------------------------------------------------------------

def bullet_terms(g):
    """Raw coaction terms: (quotient, internal subgraph, sign).

    The sum runs over pairs (S, E') of a nonempty internal vertex subset and
    an arbitrary subset of the edges inside S; unchosen inner edges become
    tadpoles at the merged vertex.  The sign carries the lexicographic
    factor and, for odd parity, the insertion slot sign transported through
    the duality.
    """
    internals = [v for v in range(g.n_ext, g.n_vertices)]
    for S in subsets(internals):
        if not S:
            continue
        sset = set(S)
        inner = [i for i, (s, t) in enumerate(g.edges)
                 if s in sset and t in sset]
        for chosen in subsets(inner):
            quot, sub, vq, vs, vstar, sign = contract_subgraph(
                g, chosen, vertex_set=S)
            if not sub.is_connected():
                continue
            if g.parity == ODD:
                sign *= (-1) ** ((vstar - g.n_ext) * (1 + len(S)))
            yield quot, sub, sign


def bullet_action(space, x, gamma):
    """x bullet gamma: pair internal subgraphs against gamma and contract.

    ``gamma`` is a Lin over internal-graph keys (the Lie algebra side); the
    pairing is stabilizer-weighted, so that x bullet delta contracts each
    internal edge with coefficient 1.
    """
    out = Lin(space=space.tag)
    for g, c in x:
        for quot, sub, sign in bullet_terms(g):
            for key, cg in gamma:
                p = pairing(sub, key)
                if p:
                    r = space.canon(quot)
                    if r is not None:
                        out.add_term(r[0], c * cg * sign * p * r[1])
    return out


# ---------------------------------------------------------------------------
# circle action and the combined action
# ---------------------------------------------------------------------------

def internalize(g):
    """GG(1) graph -> internal-only graph: the external vertex becomes the
    first internal vertex (indices are unchanged)."""
    if g.n_ext != 1:
        raise ValueError("internalize expects arity 1")
    return Graph(0, g.n_int + 1, g.edges, g.parity)


def gamma1_pairing(gamma, g1):
    """Pairing of the one-vertex-made-external image of gamma against a
    GG(1) graph: internalize and pair in the Lie algebra."""
    gi = internalize(g1)
    total = 0
    for key, c in gamma:
        p = pairing(gi, key)
        if p:
            total += c * p
    return total


def circ_action(space, gamma, x):
    """[gamma_1, x]: unary cocompositions paired against gamma.

    First sum: group all inputs, pair the arity-1 quotient.  Second sum:
    group each single input, pair the arity-1 subgraph, with the Koszul
    sign of moving gamma_1 past the quotient factor.
    """
    p_g = _gc_parity(space.n, gamma)
    out = Lin(space=space.tag)
    all_inputs = list(range(space.r))
    for g, c in x:
        for quot, sub, sign in cocompose_terms(g, all_inputs):
            val = gamma1_pairing(gamma, quot)
            if val:
                r = space.canon(sub)
                if r is not None:
                    out.add_term(r[0], c * sign * val * r[1])
        for i in range(space.r):
            for quot, sub, sign in cocompose_terms(g, [i]):
                val = gamma1_pairing(gamma, sub)
                if val:
                    r = space.canon(quot)
                    if r is not None:
                        koszul = (-1) ** (p_g * (space.degree(quot) % 2))
                        out.add_term(r[0], -c * sign * val * koszul * r[1])
    return out


def _gc_parity(n, gamma):
    gc = GCSpace(n)
    pars = {gc.degree(g) % 2 for g, _ in gamma}
    if len(pars) > 1:
        raise ValueError("inhomogeneous Lie element")
    return pars.pop() if pars else 0


def combined_action(space, gamma, x):
    """gamma . x = [gamma_1, x] + (-1)^{|gamma||x|} x bullet gamma."""
    p_g = _gc_parity(space.n, gamma)
    out = circ_action(space, gamma, x)
    for g, c in x:
        sgn = (-1) ** (p_g * (space.degree(g) % 2))
        part = bullet_action(space, Lin.basis(g, c, space=space.tag), gamma)
        out = out + sgn * part
    return out


def gg_differential(space, x):
    """The twisted differential delta . x (the differential of GG_n)."""
    return combined_action(space, build_delta(space.n), x)


# ---------------------------------------------------------------------------
# semidirect product GG_n o Hhat(G)  (the smaller framed-disks model)
# ---------------------------------------------------------------------------

class KWSpace:
    """GG_n(r) decorated with one word of Hhat(G) per external vertex.

    Keys are (graph_key, (word_1, ..., word_r)).  The cocomposition twists
    decorations by the word coaction encoded by the map phi.
    """

    def __init__(self, n, r, phi, reduced=True):
        self.n = n
        self.r = r
        self.gens = GenSet.for_dimension(n)
        self.gg = GGSpace(n, r, reduced)
        self.phi = phi
        self.tag = ("kw", n, r, reduced)

    def degree(self, key):
        g, words = key
        return self.gg.degree(g) + sum(self.gens.word_degree(w) for w in words)

    def unit_key(self):
        return (self.gg.unit_graph(), ((),) * self.r)

    def lin(self, triples):
        out = Lin(space=self.tag)
        for g, words, c in triples:
            r = self.gg.canon(g)
            if r is not None:
                out.add_term((r[0], tuple(words)), c * r[1])
        return out

    # -- differential ------------------------------------------------------

    def differential(self, x):
        """Graph differential plus the word merge differential, slotwise."""
        out = Lin(space=self.tag)
        for (g, words), c in x:
            dg = gg_differential(self.gg, Lin.basis(g, space=self.gg.tag))
            for g2, c2 in dg:
                out.add_term((g2, words), c * c2)
            par = self.gg.degree(g) % 2
            for i, w in enumerate(words):
                for w2, s in word_merge_d(self.gens, w):
                    out.add_term((g, words[:i] + (w2,) + words[i + 1:]),
                                 c * s * (-1) ** par)
                par = (par + self.gens.word_degree(w)) % 2
        return out

    # -- product -----------------------------------------------------------

    def product(self, x, y):
        out = Lin(space=self.tag)
        for (gx, wx), cx in x:
            px_graph = self.gg.degree(gx) % 2
            for (gy, wy), cy in y:
                base = self.gg.canon(glue_graphs(gx, gy))
                if base is None:
                    continue
                gkey, gsign = base
                # Koszul: each y-word block crosses x's later word blocks,
                # and y's graph crosses x's decorations
                sign = gsign
                py_graph = self.gg.degree(gy) % 2
                tail_x = sum(self.gens.word_degree(w) for w in wx) % 2
                sign *= (-1) ** (py_graph * tail_x)
                terms = [((), Fraction(1))]
                for i in range(self.r):
                    crossing = sum(self.gens.word_degree(wx[j])
                                   for j in range(i + 1, self.r)) % 2
                    s_i = (-1) ** (self.gens.word_degree(wy[i]) % 2 * crossing)
                    new_terms = []
                    for words_acc, c_acc in terms:
                        for w, s in shuffle_words(self.gens, wx[i], wy[i]):
                            new_terms.append((words_acc + (w,), c_acc * s * s_i))
                    terms = new_terms
                for words, c2 in terms:
                    out.add_term((gkey, words), cx * cy * sign * c2)
        return out

    # -- the word coaction encoded by phi ------------------------------------

    def coaction_words(self, maxlen, maxdeg):
        """Words (with their dual-basis signs) indexing the coaction sum."""
        out = []
        for w in self.gens.words_up_to(maxlen, maxdeg):
            r = len(w)
            out.append((w, (-1) ** (r * (r - 1) // 2)))
        return out

    def act_word(self, word, x, space=None):
        """phi(word) acting through the iterated combined action."""
        cur = x
        space = space or self.gg
        for letter in reversed(word):
            img = self.phi.on_generator(letter)
            img = Lin(dict(img.terms), space=None)
            if not img:
                return Lin(space=x.space)
            cur = combined_action(space, img, cur)
            if not cur:
                return cur
        return cur

    # -- cocomposition -------------------------------------------------------

    def cocompose(self, x, ext_subset, maxlen, maxdeg):
        """Twisted cocomposition of the semidirect product.

        For each graph cocomposition term, the inner factor is acted on by
        phi(w) while w* joins the decoration of the new external vertex, and
        the grouped decorations split by deconcatenation: the w-sum realizes
        the Hopf coaction.
        """
        A = sorted(ext_subset)
        left = KWSpace(self.n, self.r - len(A) + 1, self.phi, self.gg.reduced)
        right = KWSpace(self.n, len(A), self.phi, self.gg.reduced)
        out = Lin(space=("kwpair", left.tag, right.tag))
        vstar_slot = sum(1 for v in range(min(A)) if v not in A)
        for (g, words), c in x:
            # split the grouped decorations by deconcatenation
            splits = [(dict(), dict(), Fraction(1))]
            for i in A:
                new_splits = []
                for lefts, rights, cs in splits:
                    for u, v, s in deconcat(words[i]):
                        l2, r2 = dict(lefts), dict(rights)
                        l2[i], r2[i] = u, v
                        new_splits.append((l2, r2, cs * s))
                splits = new_splits
            for quot_raw, sub, gsign in cocompose_terms(g, A):
                rq = left.gg.canon(quot_raw)
                if rq is None:
                    continue
                quot, qsign = rq
                sub_lin = Lin.basis(sub, space=None)
                for w, wsign in self.coaction_words(maxlen, maxdeg):
                    acted = self.act_word(w, sub_lin, right.gg)
                    if not acted:
                        continue
                    for lefts, rights, csplit in splits:
                        term = self._assemble(A, quot, acted, words,
                                              lefts, rights, w, maxdeg)
                        for key, c2 in term:
                            out.add_term(key, c * gsign * qsign * wsign
                                         * csplit * c2)
        return out

    def _assemble(self, A, quot, acted_sub, words, lefts, rights, w, maxdeg):
        """Build (left_key (x) right_key) terms with Koszul bookkeeping.

        Input decoration blocks sit in slot order with each grouped slot
        split as (left part, right part) adjacently and the coaction word
        entering from the far right; the target order is the quotient's
        decorations (merged slot at min(A), fed by the left parts and then
        w), followed by the subgraph's decorations in A-order.  The sign
        counts crossings of odd blocks; a block is odd iff its word length
        is odd, every letter being odd.
        """
        gens = self.gens
        out = Lin()
        surviving = [v for v in range(self.r) if v not in A or v == min(A)]
        dest_index = {}
        pos = 0
        for v in surviving:
            dest_index[("L", v)] = pos
            pos += 1
        dest_index[("W",)] = pos  # w joins the tail of the merged slot
        pos += 1
        for v in A:
            dest_index[("R", v)] = pos
            pos += 1
        par_dest = []
        for i in range(self.r):
            if i in A:
                par_dest.append((len(lefts[i]) % 2, dest_index[("L", min(A))]))
                par_dest.append((len(rights[i]) % 2, dest_index[("R", i)]))
            else:
                par_dest.append((len(words[i]) % 2, dest_index[("L", i)]))
        par_dest.append((len(w) % 2, dest_index[("W",)]))
        sign = 1
        for a in range(len(par_dest)):
            pa, da = par_dest[a]
            if not pa:
                continue
            for b in range(a + 1, len(par_dest)):
                pb, db = par_dest[b]
                if pb and da > db:
                    sign = -sign
        # merged decoration: shuffle of the left parts (in A order) then w
        merged = Lin.basis(())
        for i in A:
            merged = _shuffle_lin(gens, merged, lefts[i])
        merged = _shuffle_lin(gens, merged, w)
        ggr = GGSpace(self.n, len(A), self.gg.reduced)
        for sub_g, csub in acted_sub:
            # the subgraph factor crosses the left-hand decorations
            p_sub = ggr.degree(sub_g) % 2
            for mw, cm in merged:
                if gens.word_degree(mw) > maxdeg:
                    continue
                lwords = tuple(mw if v == min(A) else words[v]
                               for v in surviving)
                p_left = sum(len(lw) for lw in lwords) % 2
                sign2 = (-1) ** (p_sub * p_left)
                rwords = tuple(rights[i] for i in A)
                out.add_term(((quot, lwords), (sub_g, rwords)),
                             csub * cm * sign * sign2)
        return out


def _shuffle_lin(gens, x, word_or_lin):
    from .coefalg import shuffle
    y = word_or_lin if isinstance(word_or_lin, Lin) else Lin.basis(tuple(word_or_lin))
    return shuffle(gens, x, y)
