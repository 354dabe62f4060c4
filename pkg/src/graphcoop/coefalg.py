"""Coefficient (co)algebras attached to the rotation group of dimension n.

Realized here, all over exact rationals and on explicit monomial/word bases:

* ``H(G)``   -- exterior algebra on odd primitive generators;
* ``H(BG)``  -- polynomial algebra on even generators (one per H(G)
  generator, degree shifted up by one);
* ``Hhat``   -- words in letters from the nonunit monomials of H(BG),
  shifted down by one, with shuffle product, deconcatenation coproduct and
  the letter-merging differential dual to the cobar differential;
* ``K = H(G) (x) H(BG)`` and ``Khat = Hhat (x) H(BG)`` -- Koszul complexes,
  acyclic except for the unit;
* ``ghat``   -- the free graded Lie algebra on generators dual to the
  nonunit monomials of ``H_*(BG)``, with the cobar differential;
* the gauge elements I, x_u, m_u used to trivialize Maurer-Cartan data.

Key formats (all hashable tuples):
  bg monomial   : tuple of exponents over the H(BG) generator list
  hg monomial   : 0/1 tuple over the H(G) generator list
  word          : tuple of nonunit bg monomials
  K element     : (hg_mono, bg_mono)
  Khat element  : (word, bg_mono)
  ghat          : Lin over tensor words (tuples of nonunit bg monomials),
                  always primitive; Lyndon bracket trees via lie_normalize
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exlin import Lin

# cobar differential global sign; pinned so that d^2 = 0 on Khat, the
# Maurer-Cartan equation for m_u, and the gauge identity all hold together
COBAR_SIGN = -1


@dataclass(frozen=True)
class GenSet:
    """Generators and degrees of H(G) and H(BG) for ambient dimension n."""

    n: int
    hg: tuple  # ((name, degree), ...)  all odd degrees
    bg: tuple  # ((name, degree), ...)  all even degrees, index-aligned with hg

    @staticmethod
    def for_dimension(n):
        if n < 2:
            raise ValueError("ambient dimension must be >= 2")
        if n % 2:
            hdeg = list(range(3, 2 * n - 2, 4))
            bdeg = list(range(4, 2 * n - 1, 4))
        else:
            hdeg = list(range(3, 2 * n - 4, 4)) + [n - 1]
            bdeg = list(range(4, 2 * n - 3, 4)) + [n]
        hg = tuple(("p%d" % d if (n % 2 or d != n - 1) else "E%d" % d, d) for d in hdeg)
        bg = tuple(("p%d" % d if (n % 2 or d != n) else "E%d" % d, d) for d in bdeg)
        return GenSet(n, hg, bg)

    @property
    def ngen(self):
        return len(self.bg)

    def unit(self):
        return (0,) * self.ngen

    # -- H(BG): polynomial on even generators -----------------------------

    def bg_degree(self, mono):
        return sum(e * d for e, (_, d) in zip(mono, self.bg))

    def bg_mul(self, m1, m2):
        return tuple(a + b for a, b in zip(m1, m2))

    def bg_gen(self, i):
        return tuple(1 if j == i else 0 for j in range(self.ngen))

    def bg_monos_up_to(self, maxdeg, include_unit=True):
        """All monomials of degree <= maxdeg, ordered by (degree, exponents)."""
        out = [self.unit()] if include_unit else []
        degs = [d for (_, d) in self.bg]

        def rec(i, mono, deg):
            if i == len(degs):
                t = tuple(mono)
                if t != self.unit():
                    out.append(t)
                return
            e = 0
            while deg + e * degs[i] <= maxdeg:
                mono[i] = e
                rec(i + 1, mono, deg + e * degs[i])
                e += 1
            mono[i] = 0

        if degs:
            rec(0, [0] * len(degs), 0)
        out.sort(key=lambda m: (self.bg_degree(m), m))
        return out

    def bg_factorizations(self, mono):
        """Ordered pairs (m1, m2) of nonunit monomials with m1*m2 = mono."""
        ranges = [range(e + 1) for e in mono]
        unit = self.unit()
        out = []
        for sub in itertools.product(*ranges):
            rest = tuple(e - s for e, s in zip(mono, sub))
            if sub != unit and rest != unit:
                out.append((sub, rest))
        return out

    def bg_str(self, mono):
        if all(e == 0 for e in mono):
            return "1"
        bits = []
        for e, (name, _) in zip(mono, self.bg):
            if e == 1:
                bits.append(name)
            elif e > 1:
                bits.append("%s^%d" % (name, e))
        return " ".join(bits)

    # -- H(G): exterior on odd generators ---------------------------------

    def hg_unit(self):
        return (0,) * len(self.hg)

    def hg_degree(self, mono):
        return sum(e * d for e, (_, d) in zip(mono, self.hg))

    def hg_gen(self, i):
        return tuple(1 if j == i else 0 for j in range(len(self.hg)))

    def hg_mul(self, m1, m2):
        """Product of exterior monomials: (result, sign) or None if zero."""
        if any(a and b for a, b in zip(m1, m2)):
            return None
        # sign: interleave the odd generators of m2 into m1
        sign = 1
        ones1 = [i for i, e in enumerate(m1) if e]
        ones2 = [i for i, e in enumerate(m2) if e]
        for i in ones2:
            sign *= (-1) ** sum(1 for j in ones1 if j > i)
        return tuple(a + b for a, b in zip(m1, m2)), sign

    def hg_monos(self):
        out = []
        for bits in itertools.product((0, 1), repeat=len(self.hg)):
            out.append(tuple(bits))
        out.sort(key=lambda m: (self.hg_degree(m), m))
        return out

    def hg_coproduct(self, mono):
        """Full Sweedler list of the (primitive-generator) coproduct."""
        ones = [i for i, e in enumerate(mono) if e]
        out = []
        for r in range(len(ones) + 1):
            for left in itertools.combinations(ones, r):
                right = [i for i in ones if i not in left]
                # unshuffle sign: gens odd; count inverted (right, left) pairs
                sign = 1
                for i in right:
                    sign *= (-1) ** sum(1 for j in left if j > i)
                lm = tuple(1 if i in left else 0 for i in range(len(self.hg)))
                rm = tuple(1 if i in right else 0 for i in range(len(self.hg)))
                out.append((lm, rm, sign))
        return out

    def hg_str(self, mono):
        if all(e == 0 for e in mono):
            return "1"
        return " ".join(name for e, (name, _) in zip(mono, self.hg) if e)

    # -- words (Hhat) ------------------------------------------------------

    def word_degree(self, word):
        return sum(self.bg_degree(l) - 1 for l in word)

    def words_up_to(self, maxlen, maxdeg):
        letters = self.bg_monos_up_to(maxdeg + 1, include_unit=False)
        out = [()]
        level = [()]
        for _ in range(maxlen):
            nxt = []
            for w in level:
                base = self.word_degree(w)
                for l in letters:
                    d = base + self.bg_degree(l) - 1
                    if d <= maxdeg:
                        nxt.append(w + (l,))
            out.extend(nxt)
            level = nxt
        out.sort(key=lambda w: (self.word_degree(w), len(w), w))
        return out

    def word_str(self, word):
        return "[" + "|".join(self.bg_str(l) for l in word) + "]"


# ---------------------------------------------------------------------------
# shuffle algebra
# ---------------------------------------------------------------------------

def shuffle_words(gens, w1, w2):
    """Graded shuffle product of two words; all letters have odd degree here
    only when the letter degrees are odd, so signs use true letter parities."""
    p1 = [(gens.bg_degree(l) - 1) % 2 for l in w1]
    p2 = [(gens.bg_degree(l) - 1) % 2 for l in w2]
    n1, n2 = len(w1), len(w2)
    out = Lin()
    for positions in itertools.combinations(range(n1 + n2), n1):
        posset = set(positions)
        word = []
        i = j = 0
        sign = 1
        for pos in range(n1 + n2):
            if pos in posset:
                word.append(w1[i])
                i += 1
            else:
                # the j-th letter of w2 jumps over the remaining letters of w1
                if p2[j]:
                    sign *= (-1) ** sum(p1[a] for a in range(i, n1))
                word.append(w2[j])
                j += 1
        out.add_term(tuple(word), sign)
    return out


def shuffle(gens, x, y):
    """Bilinear extension of the shuffle product to word Lins."""
    out = Lin()
    for w1, c1 in x:
        for w2, c2 in y:
            for w, s in shuffle_words(gens, w1, w2):
                out.add_term(w, c1 * c2 * s)
    return out


def deconcat(word):
    """Sweedler list of the deconcatenation coproduct (sign-free)."""
    return [(word[:i], word[i:], 1) for i in range(len(word) + 1)]


def word_merge_d(gens, word):
    """Internal differential of Hhat: merge adjacent letters.

    Dual to the cobar differential; sign (-1)^(s_i + 1) where s_i is the
    shifted degree of the first i letters.
    """
    out = Lin()
    for i in range(len(word) - 1):
        s_i = sum(gens.bg_degree(l) - 1 for l in word[: i + 1])
        merged = word[:i] + (gens.bg_mul(word[i], word[i + 1]),) + word[i + 2:]
        out.add_term(merged, (-1) ** (s_i + 1))
    return out


# ---------------------------------------------------------------------------
# Koszul complexes
# ---------------------------------------------------------------------------

def k_degree(gens, key):
    x, y = key
    return gens.hg_degree(x) + gens.bg_degree(y)


def khat_degree(gens, key):
    w, y = key
    return gens.word_degree(w) + gens.bg_degree(y)


def koszul_d_k(gens, key):
    """Koszul differential on K = H(G) (x) H(BG)."""
    x, y = key
    out = Lin()
    ones = [i for i, e in enumerate(x) if e]
    m = len(ones)
    for j, gi in enumerate(ones):
        # extract generator gi to the right: crosses the later odd generators
        sweedler = (-1) ** (m - 1 - j)
        rest = tuple(0 if i == gi else e for i, e in enumerate(x))
        koszul = (-1) ** ((m - 1) % 2)
        out.add_term((rest, gens.bg_mul(y, gens.bg_gen(gi))), sweedler * koszul)
    return out


def koszul_d_khat(gens, key):
    """Differential on Khat: letter merging plus moving the last letter."""
    w, y = key
    out = Lin()
    for merged, s in word_merge_d(gens, w):
        out.add_term((merged, y), s)
    if w:
        s = (-1) ** ((len(w) - 1) % 2)  # letters all have odd shifted degree
        out.add_term((w[:-1], gens.bg_mul(y, w[-1])), s)
    return out


def k_mul(gens, k1, k2):
    """Product in K; None when the exterior parts collide."""
    (x1, y1), (x2, y2) = k1, k2
    r = gens.hg_mul(x1, x2)
    if r is None:
        return None
    x, sign = r
    # moving x2 (odd part) past y1 (even) is free
    return (x, gens.bg_mul(y1, y2)), sign


def khat_mul(gens, k1, k2):
    """Product in Khat as a Lin (shuffle on words)."""
    (w1, y1), (w2, y2) = k1, k2
    out = Lin()
    y = gens.bg_mul(y1, y2)
    for w, s in shuffle_words(gens, w1, w2):
        out.add_term((w, y), s)
    return out


def k_basis(gens, maxdeg):
    out = []
    bg = gens.bg_monos_up_to(maxdeg)
    for x in gens.hg_monos():
        dx = gens.hg_degree(x)
        if dx > maxdeg:
            continue
        for y in bg:
            if dx + gens.bg_degree(y) <= maxdeg:
                out.append((x, y))
    out.sort(key=lambda k: (k_degree(gens, k), k))
    return out


def khat_basis(gens, maxdeg, maxlen):
    out = []
    bg = gens.bg_monos_up_to(maxdeg)
    for w in gens.words_up_to(maxlen, maxdeg):
        dw = gens.word_degree(w)
        for y in bg:
            if dw + gens.bg_degree(y) <= maxdeg:
                out.append((w, y))
    out.sort(key=lambda k: (khat_degree(gens, k), k))
    return out


def k_augment(key):
    x, y = key
    return Fraction(1) if not any(x) and not any(y) else Fraction(0)


def khat_augment(key):
    w, y = key
    return Fraction(1) if not w and not any(y) else Fraction(0)


def coaction_k(gens, key):
    """H(G)-coaction K -> H(G) (x) K, from the coproduct on the H(G) part."""
    x, y = key
    out = Lin()
    for lm, rm, s in gens.hg_coproduct(x):
        out.add_term((lm, (rm, y)), s)
    return out


def coaction_khat(gens, key):
    """Hhat-coaction Khat -> Hhat (x) Khat by deconcatenation."""
    w, y = key
    out = Lin()
    for left, right, s in deconcat(w):
        out.add_term((left, (right, y)), s)
    return out


def kh_map_k(gens, key):
    """K -> H(G): coaction followed by augmentation of the K factor."""
    x, y = key
    return (x, 1) if not any(y) else None


def kh_map_khat(gens, key):
    """Khat -> Hhat."""
    w, y = key
    return (w, 1) if not any(y) else None


def embed_hg_to_hhat(gens, mono):
    """Hopf embedding H(G) -> Hhat: generators to single-letter words."""
    out = Lin.basis(())
    for i, e in enumerate(mono):
        if e:
            out = shuffle(gens, out, Lin.basis((gens.bg_gen(i),)))
    return out


def embed_k_to_khat(gens, key):
    """Chain/comodule embedding K -> Khat (a quasi-isomorphism)."""
    x, y = key
    out = Lin()
    for w, c in embed_hg_to_hhat(gens, x):
        out.add_term((w, y), c)
    return out


# ---------------------------------------------------------------------------
# derivations of H(BG)
# ---------------------------------------------------------------------------

class DerElem:
    """A derivation of H(BG), given on generators; extended by Leibniz.

    Since H(BG) is evenly graded no Koszul signs arise; the assignment must
    be degree-homogeneous.
    """

    def __init__(self, gens, images, degree=None):
        self.gens = gens
        self.images = {i: (img if isinstance(img, Lin) else Lin.basis(img))
                       for i, img in images.items()}
        degs = set()
        for i, img in self.images.items():
            for mono, _ in img:
                degs.add(gens.bg_degree(mono) - gens.bg[i][1])
        if degree is None:
            if len(degs) > 1:
                raise ValueError("derivation assignment is not homogeneous: %r" % degs)
            degree = degs.pop() if degs else 0
        self.degree = degree

    def on_bg_mono(self, mono):
        out = Lin()
        for i, e in enumerate(mono):
            if not e or i not in self.images:
                continue
            lowered = tuple(x - 1 if j == i else x for j, x in enumerate(mono))
            for img, c in self.images[i]:
                out.add_term(self.gens.bg_mul(lowered, img), e * c)
        return out

    def on_bg(self, x):
        out = Lin()
        for mono, c in x:
            for m2, c2 in self.on_bg_mono(mono):
                out.add_term(m2, c * c2)
        return out

    def on_word(self, word):
        """Letterwise action; letter images through the unit-free quotient."""
        out = Lin()
        unit = self.gens.unit()
        for i, letter in enumerate(word):
            for img, c in self.on_bg_mono(letter):
                if img == unit:
                    continue  # letters live in the augmentation coideal
                out.add_term(word[:i] + (img,) + word[i + 1:], c)
        return out

    def on_khat(self, key):
        w, y = key
        out = Lin()
        for w2, c in self.on_word(w):
            out.add_term((w2, y), c)
        for y2, c in self.on_bg_mono(y):
            out.add_term((w, y2), c)
        return out

    def commutator(self, other):
        """[D1, D2] as a new derivation (degrees are even, plain commutator)."""
        images = {}
        for i in range(self.gens.ngen):
            gen = self.gens.bg_gen(i)
            img = self.on_bg(other.on_bg_mono(gen)) - other.on_bg(self.on_bg_mono(gen))
            if img:
                images[i] = img
        return DerElem(self.gens, images, degree=self.degree + other.degree)


# ---------------------------------------------------------------------------
# the free Lie resolution ghat
# ---------------------------------------------------------------------------

def gen_degree(gens, mono):
    """Degree of the ghat generator dual to the monomial (odd)."""
    return 1 - gens.bg_degree(mono)


def word_parity(gens, word):
    """Degree parity of a tensor word of ghat generators."""
    return sum(1 - gens.bg_degree(l) for l in word) % 2


def tensor_mul(w1, w2):
    return w1 + w2


def cobar_d_word(gens, word):
    """Cobar differential on a tensor word (derivation over generators)."""
    out = Lin()
    for i, letter in enumerate(word):
        prefix_par = word_parity(gens, word[:i])
        for m1, m2 in gens.bg_factorizations(letter):
            out.add_term(word[:i] + (m1, m2) + word[i + 1:],
                         COBAR_SIGN * (-1) ** prefix_par)
    return out


def cobar_d(gens, x):
    out = Lin()
    for w, c in x:
        for w2, c2 in cobar_d_word(gens, w):
            out.add_term(w2, c * c2)
    return out


def tensor_commutator(gens, x, y):
    """[x, y] in the tensor algebra with Koszul signs."""
    out = Lin()
    for w1, c1 in x:
        p1 = word_parity(gens, w1)
        for w2, c2 in y:
            p2 = word_parity(gens, w2)
            out.add_term(w1 + w2, c1 * c2)
            out.add_term(w2 + w1, -c1 * c2 * (-1) ** (p1 * p2))
    return out


def coproduct_tensor(gens, word):
    """Deshuffle coproduct of the tensor Hopf algebra (generators primitive)."""
    pars = [(1 - gens.bg_degree(l)) % 2 for l in word]
    out = []
    n = len(word)
    for r in range(n + 1):
        for left_idx in itertools.combinations(range(n), r):
            lset = set(left_idx)
            sign = 1
            for i in range(n):
                if i in lset:
                    continue
                if pars[i]:
                    sign *= (-1) ** sum(pars[j] for j in left_idx if j > i)
            left = tuple(word[i] for i in left_idx)
            right = tuple(word[i] for i in range(n) if i not in lset)
            out.append((left, right, sign))
    return out


# -- Lyndon bracket normal form --------------------------------------------

def _is_lyndon(word):
    return bool(word) and all(word < word[i:] for i in range(1, len(word)))


def _lyndon_factor(word):
    """Standard factorization w = uv with v the longest proper Lyndon suffix."""
    n = len(word)
    for i in range(1, n):
        if _is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise ValueError("not factorizable: %r" % (word,))


def lyndon_tree(word):
    """Standard bracketing of a Lyndon word as a nested key."""
    if len(word) == 1:
        return ("g", word[0])
    u, v = _lyndon_factor(word)
    return ("b", lyndon_tree(u), lyndon_tree(v))


def expand_tree(gens, key):
    """Expansion of a bracket tree in the tensor algebra."""
    if key[0] == "g":
        return Lin.basis((key[1],))
    return tensor_commutator(gens, expand_tree(gens, key[1]), expand_tree(gens, key[2]))


def lie_normalize(gens, x):
    """Rewrite a primitive tensor Lin on the (super) Lyndon bracket basis.

    Raises ValueError when the element is not a Lie element; this doubles as
    a primitivity check for gauge data.
    """
    rest = Lin(dict(x.terms))
    out = Lin()
    guard = 0
    while rest:
        guard += 1
        if guard > 10000:
            raise RuntimeError("lie_normalize did not terminate")
        w = min(rest.terms, key=lambda t: (len(t), t))
        c = rest[w]
        if _is_lyndon(w):
            key = lyndon_tree(w)
            lead = Fraction(1)
        else:
            half = len(w) // 2
            u = w[:half]
            if len(w) % 2 or w != u + u or not _is_lyndon(u) \
                    or word_parity(gens, u) == 0:
                raise ValueError("not a Lie element; offending leading word %r" % (w,))
            sub = lyndon_tree(u)
            key = ("b", sub, sub)
            lead = Fraction(2)
        coeff = c / lead
        out.add_term(key, coeff)
        rest = rest - coeff * expand_tree(gens, key)
    return out


def tree_str(gens, key):
    if key[0] == "g":
        return "x[%s]" % gens.bg_str(key[1])
    return "[%s,%s]" % (tree_str(gens, key[1]), tree_str(gens, key[2]))


# ---------------------------------------------------------------------------
# gauge data: I, x_u, m_u in Khat (x) T(V)
#
# keys of the ambient algebra: (word, bg_mono, genword)
# ---------------------------------------------------------------------------

def _kt_mul_term(gens, t1, t2):
    (w1, y1, g1), (w2, y2, g2) = t1, t2
    sign = (-1) ** (len(g1) * len(w2))  # letters and generators are all odd
    y = gens.bg_mul(y1, y2)
    out = Lin()
    for w, s in shuffle_words(gens, w1, w2):
        out.add_term((w, y, g1 + g2), s * sign)
    return out


def kt_mul(gens, a, b, maxlen):
    out = Lin()
    for t1, c1 in a:
        for t2, c2 in b:
            if len(t1[2]) + len(t2[2]) > maxlen:
                continue
            for t, s in _kt_mul_term(gens, t1, t2):
                out.add_term(t, c1 * c2 * s)
    return out


def kt_d(gens, a):
    """Differential of Khat (x) U(ghat): Koszul part plus cobar part."""
    out = Lin()
    for (w, y, g), c in a:
        for (w2, y2), s in koszul_d_khat(gens, (w, y)):
            out.add_term((w2, y2, g), c * s)
        par = (gens.word_degree(w) + gens.bg_degree(y)) % 2
        for g2, s in cobar_d_word(gens, g):
            out.add_term((w, y, g2), c * s * (-1) ** par)
    return out


def build_identity(gens, maxlen, maxdeg):
    """The identity element I of Hom(Hhat_bullet, Hhat_bullet) inside
    Hhat (x) U(ghat), with Koszul-normalized dual-basis signs."""
    out = Lin()
    for w in gens.words_up_to(maxlen, maxdeg):
        r = len(w)
        out.add_term((w, gens.unit(), w), (-1) ** (r * (r - 1) // 2))
    return out


def build_mu(gens, maxdeg):
    """m_u: the generator-pairing sum over the nonunit monomial basis."""
    out = Lin()
    for mono in gens.bg_monos_up_to(maxdeg, include_unit=False):
        out.add_term(((), mono, (mono,)), 1)
    return out


def build_xu(gens, maxlen, maxdeg):
    """x_u = log(I), truncated to the box; primitive in the U(ghat) factor.

    Products of in-box words can leave the box; those incomplete components
    are dropped, so every returned component is exact.
    """
    one = Lin.basis(((), gens.unit(), ()))
    I = build_identity(gens, maxlen, maxdeg)
    z = I - one  # starts at genword length 1
    out = Lin()
    power = Lin.basis(((), gens.unit(), ()))
    for j in range(1, maxlen + 1):
        power = kt_mul(gens, power, z, maxlen)
        out = out + Fraction((-1) ** (j + 1), j) * power
    trimmed = Lin()
    for (w, y, gw), c in out:
        if gens.word_degree(w) + gens.bg_degree(y) <= maxdeg:
            trimmed.add_term((w, y, gw), c)
    return trimmed


def kt_inverse(gens, a, maxlen):
    """Inverse of 1 + (length >= 1 terms) in Khat (x) T(V), truncated."""
    one = Lin.basis(((), gens.unit(), ()))
    z = a - one
    out = Lin(dict(one.terms))
    power = one
    for j in range(1, maxlen + 1):
        power = kt_mul(gens, power, z, maxlen)
        out = out + Fraction((-1) ** j) * power
    return out


def gauge_residual(gens, maxlen, maxdeg):
    """m_u - I^(-1) d(I), truncated: zero iff the gauge identity holds."""
    I = build_identity(gens, maxlen, maxdeg)
    dI = kt_d(gens, I)
    lhs = kt_mul(gens, kt_inverse(gens, I, maxlen), dI, maxlen)
    mu = build_mu(gens, maxdeg)
    diff = lhs - mu
    # compare only inside the box (I is itself a truncation, so d(I) has
    # boundary terms one word-length beyond the box)
    out = Lin()
    for (w, y, g), c in diff:
        if len(g) <= maxlen - 1 and gens.word_degree(w) + gens.bg_degree(y) <= maxdeg - 1:
            out.add_term((w, y, g), c)
    return out
