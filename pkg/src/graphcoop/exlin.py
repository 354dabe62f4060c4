"""Exact rational linear algebra over canonical bases.

Linear combinations are dicts from canonical basis keys to ``Fraction``
coefficients; matrices are sparse with exact entries.  Ranks come from a
fraction-free Bareiss elimination with Markowitz-style pivoting, with a
plain rational Gauss elimination as an independent second strategy.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction


class KeySpaceError(TypeError):
    """Linear combinations over different key spaces were mixed."""


class CompletenessError(ValueError):
    """A map produced a basis key outside the declared codomain basis."""

    def __init__(self, key, msg=None):
        self.key = key
        super().__init__(msg or "image term outside codomain basis: %r" % (key,))


class ChainComplexError(ValueError):
    """d_out o d_in is nonzero on the given bases."""


@dataclass(frozen=True)
class TruncationBox:
    """Finite window realizing every completed tensor product.

    All completed objects (power series in coefficients, words, graph
    expansions) are truncated to this box.
    """

    max_arity: int = 3
    max_internal: int = 4
    max_edges: int = 6
    max_coef_degree: int = 12
    max_word_length: int = 3

    def __post_init__(self):
        for f in ("max_arity", "max_internal", "max_edges",
                  "max_coef_degree", "max_word_length"):
            if getattr(self, f) < 0:
                raise ValueError("box bound %s must be nonnegative" % f)


class Lin:
    """Finite formal sum of basis keys with exact rational coefficients.

    Zero coefficients are pruned on construction.  An optional ``space`` tag
    guards against mixing incompatible key spaces.
    """

    __slots__ = ("terms", "space")

    def __init__(self, terms=None, space=None):
        self.space = space
        self.terms = {}
        if terms:
            for k, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    c0 = self.terms.get(k)
                    c = (c0 + c) if c0 is not None else Fraction(c)
                    if c:
                        self.terms[k] = c
                    elif k in self.terms:
                        del self.terms[k]

    @classmethod
    def basis(cls, key, coeff=1, space=None):
        return cls({key: Fraction(coeff)}, space=space)

    @classmethod
    def zero(cls, space=None):
        return cls(space=space)

    def _check(self, other):
        if self.space is not None and other.space is not None \
                and self.space != other.space:
            raise KeySpaceError("mixed key spaces %r and %r" % (self.space, other.space))
        return self.space if self.space is not None else other.space

    def add_term(self, key, coeff):
        """In-place accumulate; prunes zeros."""
        c = self.terms.get(key, 0) + coeff
        if c:
            self.terms[key] = c
        elif key in self.terms:
            del self.terms[key]

    def __add__(self, other):
        space = self._check(other)
        out = Lin(dict(self.terms), space=space)
        for k, c in other.terms.items():
            out.add_term(k, c)
        return out

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        if not scalar:
            return Lin(space=self.space)
        s = Fraction(scalar)
        return Lin({k: c * s for k, c in self.terms.items()}, space=self.space)

    def __neg__(self):
        return (-1) * self

    def __eq__(self, other):
        if not isinstance(other, Lin):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __getitem__(self, key):
        return self.terms.get(key, Fraction(0))

    def __repr__(self):
        if not self.terms:
            return "Lin(0)"
        bits = ["%s*%r" % (c, k) for k, c in sorted(self.terms.items(), key=lambda t: repr(t[0]))]
        return "Lin(" + " + ".join(bits) + ")"

    def map_keys(self, fn):
        """Push through a key -> (key, sign) | None map (None drops the term)."""
        out = Lin(space=self.space)
        for k, c in self.terms.items():
            r = fn(k)
            if r is None:
                continue
            k2, s = r
            out.add_term(k2, c * s)
        return out


def lin_apply(op, x):
    """Extend a basis-key -> Lin map linearly to a Lin."""
    out = Lin(space=x.space)
    for k, c in x.terms.items():
        y = op(k)
        if y is None:
            continue
        for k2, c2 in y.terms.items():
            out.add_term(k2, c * c2)
    return out


class SparseMat:
    """Sparse exact-rational matrix over explicit row/column bases."""

    def __init__(self, row_basis, col_basis, entries=None):
        self.row_basis = list(row_basis)
        self.col_basis = list(col_basis)
        self.row_index = {k: i for i, k in enumerate(self.row_basis)}
        self.col_index = {k: j for j, k in enumerate(self.col_basis)}
        self.entries = {}
        if entries:
            for (i, j), v in entries.items():
                if v:
                    if not (0 <= i < len(self.row_basis) and 0 <= j < len(self.col_basis)):
                        raise CompletenessError((i, j), "entry outside basis range")
                    self.entries[(i, j)] = Fraction(v)

    @property
    def shape(self):
        return (len(self.row_basis), len(self.col_basis))

    def transpose(self):
        return SparseMat(self.col_basis, self.row_basis,
                         {(j, i): v for (i, j), v in self.entries.items()})

    def rows(self):
        """Materialize rows as dicts col-index -> value."""
        rows = [dict() for _ in self.row_basis]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def apply(self, x: Lin) -> Lin:
        """Matrix times a Lin in the column basis."""
        out = Lin(space=None)
        for (i, j), v in self.entries.items():
            c = x[self.col_basis[j]]
            if c:
                out.add_term(self.row_basis[i], v * c)
        return out

    def compose(self, other):
        """self o other (other's row basis must be self's column basis)."""
        entries = {}
        by_k = {}
        for (i, k), v in self.entries.items():
            by_k.setdefault(k, []).append((i, v))
        for (k, j), w in other.entries.items():
            for (i, v) in by_k.get(k, ()):
                key = (i, j)
                val = entries.get(key, 0) + v * w
                if val:
                    entries[key] = val
                elif key in entries:
                    del entries[key]
        return SparseMat(self.row_basis, other.col_basis, entries)

    def basis_digest(self, to_text):
        """Digest of both bases' canonical text forms, in order."""
        h = hashlib.sha256()
        for k in self.row_basis:
            h.update(to_text(k).encode())
            h.update(b"\n")
        h.update(b"|")
        for k in self.col_basis:
            h.update(to_text(k).encode())
            h.update(b"\n")
        return h.hexdigest()

    def to_cache_text(self, to_text=repr):
        lines = ["M %d %d %s" % (len(self.row_basis), len(self.col_basis),
                                 self.basis_digest(to_text))]
        for (i, j) in sorted(self.entries):
            v = self.entries[(i, j)]
            lines.append("%d %d %d/%d" % (i, j, v.numerator, v.denominator))
        return "\n".join(lines) + "\n"

    @staticmethod
    def entries_from_cache_text(text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "M":
            raise ValueError("bad matrix cache header")
        digest = head[3]
        entries = {}
        for ln in lines[1:]:
            i, j, frac = ln.split()
            num, den = frac.split("/")
            entries[(int(i), int(j))] = Fraction(int(num), int(den))
        return digest, entries


def matrix_of(op, domain_basis, codomain_basis, space=None):
    """Matrix whose column j is op(domain_basis[j]) in the codomain basis.

    Raises :class:`CompletenessError` when an image term falls outside the
    codomain basis -- the signal of a truncation leak.
    """
    col_index = {k: j for j, k in enumerate(domain_basis)}
    row_index = {k: i for i, k in enumerate(codomain_basis)}
    entries = {}
    for j, k in enumerate(domain_basis):
        img = op(k)
        if img is None:
            continue
        for k2, c in img.terms.items():
            i = row_index.get(k2)
            if i is None:
                raise CompletenessError(k2)
            if c:
                entries[(i, j)] = c
    return SparseMat(list(codomain_basis), list(domain_basis), entries)


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------

def _integer_rows(mat):
    """Rows rescaled to integers (row scaling is rank-preserving)."""
    rows = []
    for r in mat.rows():
        if not r:
            continue
        den = 1
        for v in r.values():
            den = den * v.denominator // _gcd(den, v.denominator)
        rows.append({j: int(v * den) for j, v in r.items()})
    return rows


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def rank(mat, strategy="bareiss"):
    """Exact rank of a sparse rational matrix.

    ``bareiss``: fraction-free elimination on integer-rescaled rows with a
    Markowitz-flavored pivot choice (sparsest eligible row, smallest pivot).
    ``gauss``: plain rational Gaussian elimination, first nonzero pivot.
    The two strategies are independent implementations used to cross-check
    each other.
    """
    if strategy == "bareiss":
        return _rank_bareiss(mat)
    if strategy == "gauss":
        return _rank_gauss(mat)
    raise ValueError("unknown strategy %r" % strategy)


def _rank_bareiss(mat):
    rows = _integer_rows(mat)
    rk = 0
    prev = 1
    while rows:
        # Markowitz-like: pick the sparsest row, then its smallest-magnitude entry
        rows.sort(key=len)
        piv_row = rows.pop(0)
        if not piv_row:
            continue
        pj = min(piv_row, key=lambda j: (abs(piv_row[j]), j))
        pv = piv_row[pj]
        rk += 1
        nxt = []
        for r in rows:
            rv = r.get(pj, 0)
            # one-step fraction-free update; division by the previous pivot
            # is exact (Sylvester identity) only if every row is updated
            cols = set(r) | (set(piv_row) if rv else set())
            out = {}
            for j in cols:
                if j == pj:
                    continue
                val = pv * r.get(j, 0) - rv * piv_row.get(j, 0)
                if val:
                    out[j] = val // prev
            if out:
                nxt.append(out)
        rows = nxt
        prev = pv
    return rk


def _rank_gauss(mat):
    rows = [dict(r) for r in mat.rows() if r]
    rk = 0
    while rows:
        piv_row = rows.pop(0)
        if not piv_row:
            continue
        pj = min(piv_row)
        pv = piv_row[pj]
        rk += 1
        nxt = []
        for r in rows:
            rv = r.get(pj)
            if rv:
                f = rv / pv
                out = {}
                for j in set(r) | set(piv_row):
                    val = r.get(j, 0) - f * piv_row.get(j, 0)
                    if val:
                        out[j] = val
                r = out
            if r:
                nxt.append(r)
        rows = nxt
    return rk


def cohomology_dims(d_in, d_out, check=True, strategy="bareiss"):
    """dim ker(d_out) - rank(d_in) for consecutive differentials.

    ``d_in: C^{k-1} -> C^k`` and ``d_out: C^k -> C^{k+1}`` must compose to
    zero on the given bases (checked exactly unless ``check=False``).
    """
    if d_in.col_basis and d_out.row_basis is not None:
        if len(d_in.row_basis) != len(d_out.col_basis):
            raise ChainComplexError("basis mismatch between d_in codomain and d_out domain")
    if check:
        comp = d_out.compose(d_in)
        if comp.entries:
            raise ChainComplexError("d_out o d_in != 0 (%d nonzero entries)" % len(comp.entries))
    dim_mid = len(d_out.col_basis)
    return (dim_mid - rank(d_out, strategy)) - rank(d_in, strategy)
