"""The free binomial cup-one graded algebra T_R(X) in degrees <= 3.

Elements are sparse combinations of tensor words whose factors are
zeta-basis monomials of Int(R^X) with zero constant term.  Degree-0
terms are scalars (the empty word).  The cup product is word
concatenation; the cup-one product on degree 1 is the polynomial
product; the remaining cup-one and circle maps follow the Hirsch-style
slot formulas, with the mixed-degree variants taking the canonical
decompositions of differentials supplied by the caller.
"""
from __future__ import annotations

from .rings import BinomialPoly, MultiIndex, RingSpec, UNIT_INDEX

Word = tuple  # tuple of MultiIndex, none of them the unit

DEGREE_CAP = 4  # degree 4 arises only transiently inside d^2 checks


class TensorElem:
    """Sparse element of T_R(X); may mix degrees (words of any length)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingSpec, terms=None):
        self.ring = ring
        tidy: dict[Word, int] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for word, c in items:
                c = ring.normalize(c)
                if not c:
                    continue
                word = tuple(word)
                if len(word) > DEGREE_CAP:
                    raise ValueError(f"degree cap {DEGREE_CAP} exceeded")
                for f in word:
                    if f.is_unit:
                        raise ValueError("unit factor in tensor word")
                tidy[word] = tidy.get(word, 0) + c
                if not ring.normalize(tidy[word]):
                    del tidy[word]
        self.terms = tidy

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ring: RingSpec) -> "TensorElem":
        return cls(ring, {})

    @classmethod
    def scalar(cls, ring: RingSpec, c: int) -> "TensorElem":
        return cls(ring, {(): c})

    @classmethod
    def gen(cls, ring: RingSpec, name: str) -> "TensorElem":
        return cls(ring, {(MultiIndex.single(name),): 1})

    @classmethod
    def from_poly(cls, p: BinomialPoly) -> "TensorElem":
        if not p.is_constant_free():
            raise ValueError("degree-1 elements must have zero constant term")
        return cls(p.ring, {(idx,): c for idx, c in p.terms.items()})

    @classmethod
    def word(cls, ring: RingSpec, factors, c: int = 1) -> "TensorElem":
        return cls(ring, {tuple(factors): c})

    # -- basics --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        degs = {len(w) for w in self.terms}
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element, degrees {sorted(degs)}")
        return degs.pop()

    def homogeneous_part(self, d: int) -> "TensorElem":
        return TensorElem(self.ring,
                          {w: c for w, c in self.terms.items() if len(w) == d})

    def to_poly(self) -> BinomialPoly:
        if any(len(w) != 1 for w in self.terms):
            raise ValueError("only degree-1 elements convert to polynomials")
        return BinomialPoly(self.ring,
                            {w[0]: c for w, c in self.terms.items()},
                            _validated=True)

    def __add__(self, other: "TensorElem") -> "TensorElem":
        self._check(other)
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, 0) + c
        return TensorElem(self.ring, acc)

    def __sub__(self, other: "TensorElem") -> "TensorElem":
        return self + other.scale(-1)

    def __neg__(self) -> "TensorElem":
        return self.scale(-1)

    def scale(self, c: int) -> "TensorElem":
        return TensorElem(self.ring,
                          {w: v * c for w, v in self.terms.items()})

    def _check(self, other: "TensorElem"):
        if self.ring != other.ring:
            raise ValueError("ring mismatch")

    def __eq__(self, other):
        return (isinstance(other, TensorElem)
                and self.ring == other.ring and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def weight_of(self) -> tuple[int, int]:
        """(min, max) total zeta-weight over the words."""
        if not self.terms:
            return (0, 0)
        weights = [sum(f.weight for f in w) for w in self.terms]
        return (min(weights), max(weights))

    def support_names(self) -> tuple:
        names = set()
        for w in self.terms:
            for f in w:
                names.update(f.support)
        return tuple(sorted(names))

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (len(kv[0]),
                                      [f.sort_key() for f in kv[0]]))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            if not w:
                parts.append(str(c))
                continue
            body = " T ".join(
                "*".join(f"z({n},{e})" for n, e in f.entries) for f in w)
            parts.append(f"{c} * {body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self.render()}>"


# ---------------------------------------------------------------------------
# products

def cup(u: TensorElem, v: TensorElem) -> TensorElem:
    """Concatenation product; the empty word is the unit."""
    u._check(v)
    out: dict[Word, int] = {}
    for w1, c1 in u.terms.items():
        for w2, c2 in v.terms.items():
            w = w1 + w2
            out[w] = out.get(w, 0) + c1 * c2
    return TensorElem(u.ring, out)


def cup1_deg1(u: TensorElem, v: TensorElem) -> TensorElem:
    """a cup1 b = ab on degree-1 elements (commutative, associative)."""
    u._check(v)
    if u.is_zero() or v.is_zero():
        return TensorElem.zero(u.ring)
    if u.degree() != 1 or v.degree() != 1:
        raise ValueError("cup1_deg1 requires two degree-1 elements")
    return TensorElem.from_poly(u.to_poly() * v.to_poly())


def zeta_apply(u: TensorElem, k: int) -> TensorElem:
    """zeta_k computed in the binomial ring R + T^1."""
    if k == 0:
        return TensorElem.scalar(u.ring, 1)
    if not u.is_zero() and u.degree() != 1:
        raise ValueError("zeta applies to degree-1 elements")
    p = u.to_poly() if not u.is_zero() else BinomialPoly.zero(u.ring)
    return TensorElem.from_poly(p.zeta(k))


def _slot_mul(ring: RingSpec, word: Word, coeff: int, slot: int,
              p: BinomialPoly, out: dict):
    """Accumulate word with word[slot] multiplied by p (expanded)."""
    base = BinomialPoly(ring, {word[slot]: 1}, _validated=True) * p
    for idx, c in base.terms.items():
        if idx.is_unit:
            raise AssertionError("constant-free product grew a constant")
        w = word[:slot] + (idx,) + word[slot + 1:]
        out[w] = out.get(w, 0) + coeff * c


def cup1_hirsch(u: TensorElem, v: TensorElem) -> TensorElem:
    """(a x b) cup1 c = ac x b + a x bc, extended bilinearly; (2,1)."""
    u._check(v)
    if u.is_zero() or v.is_zero():
        return TensorElem.zero(u.ring)
    if u.degree() != 2 or v.degree() != 1:
        raise ValueError("cup1_hirsch requires degrees (2, 1)")
    ring = u.ring
    vp = v.to_poly()
    out: dict[Word, int] = {}
    for w, c in u.terms.items():
        _slot_mul(ring, w, c, 0, vp, out)
        _slot_mul(ring, w, c, 1, vp, out)
    return TensorElem(ring, out)


def cup1_31(u: TensorElem, v: TensorElem) -> TensorElem:
    """(u1 x u2 x u3) cup1 v distributes over the three slots; (3,1)."""
    u._check(v)
    if u.is_zero() or v.is_zero():
        return TensorElem.zero(u.ring)
    if u.degree() != 3 or v.degree() != 1:
        raise ValueError("cup1_31 requires degrees (3, 1)")
    ring = u.ring
    vp = v.to_poly()
    out: dict[Word, int] = {}
    for w, c in u.terms.items():
        for slot in range(3):
            _slot_mul(ring, w, c, slot, vp, out)
    return TensorElem(ring, out)


def _decompose(t: TensorElem) -> list[tuple[BinomialPoly, BinomialPoly, int]]:
    """Canonical decomposition of a degree-2 element as sum of cup pairs.

    Each word zeta_I x zeta_J with coefficient c is read as the cup
    product (c * zeta_I) cup (zeta_J); the coefficient rides along so the
    correction sums in the mixed-degree formulas stay exact.
    """
    ring = t.ring
    out = []
    for w, c in t.sorted_terms():
        if len(w) != 2:
            raise ValueError("decomposition requires a degree-2 element")
        out.append((BinomialPoly(ring, {w[0]: 1}, _validated=True),
                    BinomialPoly(ring, {w[1]: 1}, _validated=True), c))
    return out


def _word_poly(ring: RingSpec, idx: MultiIndex) -> BinomialPoly:
    return BinomialPoly(ring, {idx: 1}, _validated=True)


def cup1_22_words(a: TensorElem, b: TensorElem, d_of_poly) -> TensorElem:
    """(a1 cup a2) cup1 (b1 cup b2), bilinear over basis words.

    ``d_of_poly`` maps a degree-1 BinomialPoly to its differential as a
    TensorElem of degree 2 (the canonical decompositions of d a1, d a2
    are read from it).
    """
    a._check(b)
    if a.is_zero() or b.is_zero():
        return TensorElem.zero(a.ring)
    if a.degree() != 2 or b.degree() != 2:
        raise ValueError("cup1_22 requires degrees (2, 2)")
    ring = a.ring
    out: dict[Word, int] = {}

    def addw(c, i0, i1, i2):
        if c:
            w = (i0, i1, i2)
            out[w] = out.get(w, 0) + c

    def add_products(c, parts):
        # parts: triple of BinomialPoly
        p0, p1, p2 = parts
        for i0, c0 in p0.terms.items():
            for i1, c1 in p1.terms.items():
                for i2, c2 in p2.terms.items():
                    addw(c * c0 * c1 * c2, i0, i1, i2)

    for wa, ca in a.terms.items():
        a1p, a2p = _word_poly(ring, wa[0]), _word_poly(ring, wa[1])
        da1 = _decompose(d_of_poly(a1p))
        da2 = _decompose(d_of_poly(a2p))
        for wb, cb in b.terms.items():
            c = ca * cb
            b1p, b2p = _word_poly(ring, wb[0]), _word_poly(ring, wb[1])
            add_products(-c, (a1p, b1p * a2p, b2p))
            add_products(-c, (a1p, b1p, b2p * a2p))
            for p, q, cc in da2:
                add_products(c * cc, (a1p, p * b1p, q * b2p))
            add_products(c, (b1p * a1p, b2p, a2p))
            add_products(c, (b1p, b2p * a1p, a2p))
            for p, q, cc in da1:
                add_products(-c * cc, (p * b1p, q * b2p, a2p))
    return TensorElem(ring, out)


def circ_22(u: TensorElem, v: TensorElem) -> TensorElem:
    """(a1 x a2) circ (b1 x b2) = a1 b1 x a2 b2; (2,2) -> 2."""
    u._check(v)
    if u.is_zero() or v.is_zero():
        return TensorElem.zero(u.ring)
    if u.degree() != 2 or v.degree() != 2:
        raise ValueError("circ_22 requires degrees (2, 2)")
    ring = u.ring
    out: dict[Word, int] = {}
    for w1, c1 in u.terms.items():
        for w2, c2 in v.terms.items():
            p = _word_poly(ring, w1[0]) * _word_poly(ring, w2[0])
            q = _word_poly(ring, w1[1]) * _word_poly(ring, w2[1])
            for i0, a in p.terms.items():
                for i1, b in q.terms.items():
                    w = (i0, i1)
                    out[w] = out.get(w, 0) + c1 * c2 * a * b
    return TensorElem(ring, out)


def circ_23_words(a: TensorElem, v: TensorElem, d_of_poly) -> TensorElem:
    """(a1 cup a2) circ (v1 cup v2 cup v3); needs the decomposition of d a1."""
    a._check(v)
    if a.is_zero() or v.is_zero():
        return TensorElem.zero(a.ring)
    if a.degree() != 2 or v.degree() != 3:
        raise ValueError("circ_23 requires degrees (2, 3)")
    ring = a.ring
    out: dict[Word, int] = {}

    def add_products(c, parts):
        p0, p1, p2 = parts
        for i0, c0 in p0.terms.items():
            for i1, c1 in p1.terms.items():
                for i2, c2 in p2.terms.items():
                    cc = c * c0 * c1 * c2
                    if cc:
                        w = (i0, i1, i2)
                        out[w] = out.get(w, 0) + cc

    for wa, ca in a.terms.items():
        a1p, a2p = _word_poly(ring, wa[0]), _word_poly(ring, wa[1])
        da1 = _decompose(d_of_poly(a1p))
        for wv, cv in v.terms.items():
            c = ca * cv
            v1p, v2p, v3p = (_word_poly(ring, wv[i]) for i in range(3))
            add_products(c, (a1p * v1p, a2p * v2p, v3p))
            add_products(c, (a1p * v1p, v2p, a2p * v3p))
            add_products(c, (v1p, a1p * v2p, a2p * v3p))
            for p, q, cc in da1:
                add_products(-c * cc, (p * v1p, q * v2p, a2p * v3p))
    return TensorElem(ring, out)


def circ_32_words(u: TensorElem, b: TensorElem, d_of_poly) -> TensorElem:
    """(u1 cup u2 cup u3) circ (b1 cup b2); needs the decomposition of d b2."""
    u._check(b)
    if u.is_zero() or b.is_zero():
        return TensorElem.zero(u.ring)
    if u.degree() != 3 or b.degree() != 2:
        raise ValueError("circ_32 requires degrees (3, 2)")
    ring = u.ring
    out: dict[Word, int] = {}

    def add_products(c, parts):
        p0, p1, p2 = parts
        for i0, c0 in p0.terms.items():
            for i1, c1 in p1.terms.items():
                for i2, c2 in p2.terms.items():
                    cc = c * c0 * c1 * c2
                    if cc:
                        w = (i0, i1, i2)
                        out[w] = out.get(w, 0) + cc

    for wb, cb in b.terms.items():
        b1p, b2p = _word_poly(ring, wb[0]), _word_poly(ring, wb[1])
        db2 = _decompose(d_of_poly(b2p))
        for wu, cu in u.terms.items():
            c = cu * cb
            u1p, u2p, u3p = (_word_poly(ring, wu[i]) for i in range(3))
            add_products(c, (u1p, u2p * b1p, u3p * b2p))
            add_products(c, (u1p * b1p, u2p * b2p, u3p))
            add_products(c, (u1p * b1p, u2p, u3p * b2p))
            for p, q, cc in db2:
                add_products(-c * cc, (u1p * b1p, u2p * p, u3p * q))
    return TensorElem(ring, out)
