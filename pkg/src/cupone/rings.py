"""Exact arithmetic in the free binomial algebra over Z or Z_p.

Elements are integer-valued polynomials written in the basis of products
of binomial coefficients z(x, k) = C(x, k).  Over Z the basis consists of
all such products; over Z_p every exponent is capped at p - 1 and the
coefficients live in the field with p elements.

Products of basis monomials are re-expanded in the basis using structure
constants obtained by evaluation-interpolation on the integer grid
0..m+n, which makes the multiplication self-verifying: the expansion is
the unique one matching the product pointwise.
"""
from __future__ import annotations

from math import comb, factorial


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class RingSpec:
    """Coefficient ring: the integers or the field Z_p for a prime p."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind not in ("Z", "Zp"):
            raise ValueError(f"unknown ring kind {kind!r}")
        if kind == "Zp":
            if p is None or not is_prime(p):
                raise ValueError(f"Zp requires a prime, got {p!r}")
        elif p is not None:
            raise ValueError("Z takes no modulus")
        self.kind = kind
        self.p = p

    @classmethod
    def Z(cls) -> "RingSpec":
        return cls("Z")

    @classmethod
    def Zp(cls, p: int) -> "RingSpec":
        return cls("Zp", p)

    @property
    def is_modular(self) -> bool:
        return self.kind == "Zp"

    @property
    def max_zeta(self) -> int | None:
        """Largest k for which zeta_k is defined (None means unbounded)."""
        return None if self.p is None else self.p - 1

    def normalize(self, c: int) -> int:
        return c % self.p if self.p else c

    def inv(self, c: int) -> int:
        if not self.p:
            if c in (1, -1):
                return c
            raise ZeroDivisionError(f"{c} is not a unit in Z")
        c %= self.p
        if c == 0:
            raise ZeroDivisionError("inverse of 0 in Zp")
        return pow(c, self.p - 2, self.p)

    def __eq__(self, other):
        return (isinstance(other, RingSpec)
                and self.kind == other.kind and self.p == other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "Z" if self.kind == "Z" else f"Zp({self.p})"


ZZ = RingSpec.Z()


def binom_of(a: int, n: int, ring: RingSpec = ZZ) -> int:
    """C(a, n) in the coefficient ring, with the convention C(a, 0) = 1.

    Over Z the argument may be any integer (falling factorial divided
    exactly by n!).  Over Z_p the operation is undefined for n >= p.
    """
    if n < 0:
        raise ValueError("binomial lower index must be >= 0")
    if ring.is_modular and n > ring.max_zeta:
        raise ValueError(f"zeta_{n} undefined over Zp with p={ring.p}")
    if n == 0:
        return ring.normalize(1)
    if ring.is_modular:
        a %= ring.p
    num = 1
    for i in range(n):
        num *= a - i
    q, r = divmod(num, factorial(n))
    assert r == 0, "falling factorial must be divisible by n!"
    return ring.normalize(q)


class MultiIndex:
    """Finitely supported map generator -> positive exponent.

    The empty index is the unit (the constant monomial 1).  Entries are
    stored sorted by generator name, which makes the representation
    canonical and hashable.
    """

    __slots__ = ("entries", "weight", "_hash")

    def __init__(self, entries):
        pairs = tuple(sorted((str(n), int(e)) for n, e in entries if e))
        for _, e in pairs:
            if e < 0:
                raise ValueError("exponents must be positive")
        names = [n for n, _ in pairs]
        if len(set(names)) != len(names):
            raise ValueError("repeated generator in multi-index")
        self.entries = pairs
        self.weight = sum(e for _, e in pairs)
        self._hash = hash(pairs)

    @classmethod
    def unit(cls) -> "MultiIndex":
        return cls(())

    @classmethod
    def single(cls, name: str, exp: int = 1) -> "MultiIndex":
        return cls(((name, exp),))

    def get(self, name: str) -> int:
        for n, e in self.entries:
            if n == name:
                return e
        return 0

    @property
    def support(self) -> tuple:
        return tuple(n for n, _ in self.entries)

    @property
    def is_unit(self) -> bool:
        return not self.entries

    def merge(self, other: "MultiIndex") -> "MultiIndex":
        """Entrywise sum of exponents."""
        acc = dict(self.entries)
        for n, e in other.entries:
            acc[n] = acc.get(n, 0) + e
        return MultiIndex(acc.items())

    def drop(self, name: str) -> "MultiIndex":
        return MultiIndex((n, e) for n, e in self.entries if n != name)

    def max_exponent(self) -> int:
        return max((e for _, e in self.entries), default=0)

    def sort_key(self):
        return (self.weight, self.entries)

    def __eq__(self, other):
        return isinstance(other, MultiIndex) and self.entries == other.entries

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        if self.is_unit:
            return "1"
        return "*".join(f"z({n},{e})" for n, e in self.entries)


UNIT_INDEX = MultiIndex.unit()

# Structure constants of single-variable products:
# zeta_m(x) * zeta_n(x) = sum_k c_k zeta_k(x), computed once over Z by
# interpolation on x = 0..m+n and shared across rings (idempotent insert,
# safe under concurrent readers).
_ZETA_CACHE: dict[tuple[int, int], dict[int, int]] = {}


def zeta_structure_constants(m: int, n: int) -> dict[int, int]:
    key = (m, n) if m <= n else (n, m)
    cached = _ZETA_CACHE.get(key)
    if cached is not None:
        return cached
    m, n = key
    top = m + n
    values = [comb(t, m) * comb(t, n) for t in range(top + 1)]
    coeffs: dict[int, int] = {}
    # Forward substitution: C(t, k) vanishes for k > t, so c_t is read off
    # the value at t once lower coefficients are subtracted.
    for t in range(top + 1):
        c = values[t] - sum(ck * comb(t, k) for k, ck in coeffs.items())
        if c:
            coeffs[t] = c
    for t in range(top + 1):
        assert sum(ck * comb(t, k) for k, ck in coeffs.items()) == values[t]
    _ZETA_CACHE[key] = coeffs
    return coeffs


# Cache of basis-monomial products zeta_I * zeta_J per ring (idempotent
# inserts; safe to share across threads).
_MONO_CACHE: dict = {}


def mono_product(ring: RingSpec, i1: MultiIndex, i2: MultiIndex):
    """zeta_I * zeta_J expanded in the basis, as a tuple of (index, coeff)."""
    if i2.sort_key() < i1.sort_key():
        i1, i2 = i2, i1
    key = (ring.kind, ring.p, i1, i2)
    cached = _MONO_CACHE.get(key)
    if cached is not None:
        return cached
    cap = ring.max_zeta
    shared = set(i1.support) & set(i2.support)
    if not shared:
        idx = i1.merge(i2)
        out = () if (cap is not None and idx.max_exponent() > cap) \
            else ((idx, 1),)
        _MONO_CACHE[key] = out
        return out
    partial: dict[MultiIndex, int] = {UNIT_INDEX: 1}
    rest1 = dict(i1.entries)
    rest2 = dict(i2.entries)
    for name in sorted(shared):
        m, n = rest1.pop(name), rest2.pop(name)
        consts = zeta_structure_constants(m, n)
        nxt: dict[MultiIndex, int] = {}
        for idx, cc in partial.items():
            for k, ck in consts.items():
                if cap is not None and k > cap:
                    continue
                nidx = idx.merge(MultiIndex.single(name, k))
                nxt[nidx] = nxt.get(nidx, 0) + cc * ck
        partial = nxt
    tail = MultiIndex(list(rest1.items()) + list(rest2.items()))
    out_list = []
    if cap is None or tail.max_exponent() <= cap:
        for idx, cc in partial.items():
            c = ring.normalize(cc)
            if c:
                out_list.append((idx.merge(tail), c))
    out = tuple(out_list)
    _MONO_CACHE[key] = out
    return out


class BinomialPoly:
    """Element of Int(R^X): sparse combination of zeta-basis monomials."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingSpec, terms=None, _validated=False):
        self.ring = ring
        tidy: dict[MultiIndex, int] = {}
        if terms:
            for idx, c in (terms.items() if isinstance(terms, dict) else terms):
                c = ring.normalize(c)
                if c:
                    tidy[idx] = tidy.get(idx, 0) + c
                    if not ring.normalize(tidy[idx]):
                        del tidy[idx]
        if not _validated and ring.is_modular:
            for idx in tidy:
                if idx.max_exponent() > ring.max_zeta:
                    raise ValueError(
                        f"exponent exceeds p-1 in {idx!r} over {ring!r}")
        self.terms = tidy

    @classmethod
    def zero(cls, ring: RingSpec) -> "BinomialPoly":
        return cls(ring, {})

    @classmethod
    def const(cls, ring: RingSpec, c: int) -> "BinomialPoly":
        return cls(ring, {UNIT_INDEX: c})

    @classmethod
    def gen(cls, ring: RingSpec, name: str) -> "BinomialPoly":
        return cls(ring, {MultiIndex.single(name): 1})

    @classmethod
    def zeta_monomial(cls, ring: RingSpec, idx: MultiIndex, c: int = 1) -> "BinomialPoly":
        return cls(ring, {idx: c})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> int:
        return self.terms.get(UNIT_INDEX, 0)

    def is_constant_free(self) -> bool:
        return UNIT_INDEX not in self.terms

    def without_constant(self) -> "BinomialPoly":
        return BinomialPoly(self.ring,
                            {i: c for i, c in self.terms.items()
                             if not i.is_unit}, _validated=True)

    def support_names(self) -> tuple:
        names = set()
        for idx in self.terms:
            names.update(idx.support)
        return tuple(sorted(names))

    def __add__(self, other):
        if isinstance(other, int):
            other = BinomialPoly.const(self.ring, other)
        self._check_ring(other)
        acc = dict(self.terms)
        for idx, c in other.terms.items():
            acc[idx] = acc.get(idx, 0) + c
        return BinomialPoly(self.ring, acc, _validated=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = BinomialPoly.const(self.ring, other)
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: int) -> "BinomialPoly":
        if not self.ring.normalize(c):
            return BinomialPoly.zero(self.ring)
        return BinomialPoly(self.ring,
                            {i: v * c for i, v in self.terms.items()},
                            _validated=True)

    def _check_ring(self, other: "BinomialPoly"):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def __mul__(self, other):
        """Product re-expanded in the zeta basis.

        Disjoint supports merge directly (zeta_I * zeta_J = zeta_{I+J});
        shared variables go through the interpolated structure constants.
        Over Z_p the quotient kills every index with an exponent >= p.
        """
        if isinstance(other, int):
            return self.scale(other)
        self._check_ring(other)
        ring = self.ring
        out: dict[MultiIndex, int] = {}
        for i1, c1 in self.terms.items():
            for i2, c2 in other.terms.items():
                base = c1 * c2
                for idx, cc in mono_product(ring, i1, i2):
                    out[idx] = out.get(idx, 0) + base * cc
        return BinomialPoly(ring, out, _validated=True)

    __rmul__ = __mul__

    def zeta(self, k: int) -> "BinomialPoly":
        """zeta_k applied to this element: falling factorial over k!.

        The division is exact on the level of basis coordinates; a
        non-zero remainder signals an arithmetic bug and raises.
        """
        ring = self.ring
        if k < 0:
            raise ValueError("zeta index must be >= 0")
        if ring.is_modular and k > ring.max_zeta:
            raise ValueError(f"zeta_{k} undefined over {ring!r}")
        if k == 0:
            return BinomialPoly.const(ring, 1)
        prod = BinomialPoly.const(ring, 1)
        for i in range(k):
            prod = prod * (self - i)
        if ring.is_modular:
            return prod.scale(ring.inv(factorial(k) % ring.p))
        out = {}
        f = factorial(k)
        for idx, c in prod.terms.items():
            q, r = divmod(c, f)
            if r:
                raise ArithmeticError(
                    f"inexact division by {k}! at {idx!r} (coefficient {c})")
            if q:
                out[idx] = q
        return BinomialPoly(ring, out, _validated=True)

    def evaluate(self, point: dict) -> int:
        """Evaluate at a point (unset generators default to 0)."""
        ring = self.ring
        total = 0
        for idx, c in self.terms.items():
            v = c
            for name, e in idx.entries:
                v *= binom_of(point.get(name, 0), e, ring)
                if not v:
                    break
            total += v
        return ring.normalize(total)

    def reduce_mod_p(self, p: int) -> "BinomialPoly":
        """Quotient map Int(Z^X) -> Int(Z_p^X)."""
        if self.ring.is_modular:
            raise ValueError("already modular")
        target = RingSpec.Zp(p)
        out = {}
        for idx, c in self.terms.items():
            if idx.max_exponent() >= p:
                continue
            c = c % p
            if c:
                out[idx] = c
        return BinomialPoly(target, out, _validated=True)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def render(self) -> str:
        """Canonical text form, e.g. ``3 * z(x,2)*z(y,1) + 1 * z(y,1)``."""
        if not self.terms:
            return "0"
        parts = []
        for idx, c in self.sorted_terms():
            if idx.is_unit:
                parts.append(str(c))
            else:
                mono = "*".join(f"z({n},{e})" for n, e in idx.entries)
                parts.append(f"{c} * {mono}")
        return " + ".join(parts)

    def __eq__(self, other):
        return (isinstance(other, BinomialPoly)
                and self.ring == other.ring and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, tuple(sorted(
            (i, c) for i, c in self.terms.items()))))

    def __repr__(self):
        return f"<{self.render()} over {self.ring!r}>"


def parse_poly(text: str, ring: RingSpec) -> BinomialPoly:
    """Parse the canonical rendering produced by :meth:`BinomialPoly.render`."""
    text = text.strip()
    if text == "0":
        return BinomialPoly.zero(ring)
    terms = []
    for chunk in text.split(" + "):
        chunk = chunk.strip()
        if "*" in chunk:
            coeff_str, _, mono = chunk.partition(" * ")
            coeff = int(coeff_str)
            entries = []
            for factor in mono.split("*"):
                factor = factor.strip()
                if not (factor.startswith("z(") and factor.endswith(")")):
                    raise ValueError(f"bad monomial factor {factor!r}")
                name, _, exp = factor[2:-1].partition(",")
                entries.append((name.strip(), int(exp)))
            terms.append((MultiIndex(entries), coeff))
        else:
            terms.append((UNIT_INDEX, int(chunk)))
    return BinomialPoly(ring, terms)


def zeta_add_expand(k: int, ring: RingSpec = ZZ,
                    left: str = "a", right: str = "b") -> BinomialPoly:
    """The addition law zeta_k(a+b) = sum_{i+j=k} zeta_i(a) zeta_j(b)
    as an element of Int(R^{a,b})."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if ring.is_modular and k > ring.max_zeta:
        raise ValueError(f"zeta_{k} undefined over {ring!r}")
    terms = []
    for i in range(k + 1):
        j = k - i
        entries = []
        if i:
            entries.append((left, i))
        if j:
            entries.append((right, j))
        terms.append((MultiIndex(entries), 1))
    return BinomialPoly(ring, terms)
