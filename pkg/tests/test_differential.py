import random

import pytest

from cupone.differential import (
    GeneratorSet,
    apply_d,
    build_differential,
    check_d_squared,
    iter_indices,
    zero_differential,
)
from cupone.rings import MultiIndex, RingSpec
from cupone.tensor import (
    TensorElem,
    circ_22,
    cup,
    cup1_22_words,
    cup1_31,
    cup1_deg1,
    cup1_hirsch,
    zeta_apply,
)

Z = RingSpec.Z()


def g(name, ring=Z):
    return TensorElem.gen(ring, name)


def zmono(name, k, ring=Z, c=1):
    return TensorElem(ring, {(MultiIndex.single(name, k),): c})


def word(*factors, ring=Z, c=1):
    return TensorElem(ring, {tuple(MultiIndex(f) for f in factors): c})


def d0(names=("x", "y"), ring=Z):
    return zero_differential(GeneratorSet(names), ring)


def closed_form_d0_single(name, k, ring=Z):
    """Independent oracle: d0(zeta_k(x)) = -sum zeta_l T zeta_{k-l}."""
    acc = {}
    for l in range(1, k):
        w = (MultiIndex.single(name, l), MultiIndex.single(name, k - l))
        acc[w] = acc.get(w, 0) - 1
    return TensorElem(ring, acc)


def closed_form_d0_index(idx, ring=Z):
    """d0(zeta_I) = -sum_{I1+I2=I, Ij != 0} zeta_I1 T zeta_I2."""
    entries = idx.entries
    acc = {}

    def splits(i):
        if i == len(entries):
            yield (), ()
            return
        name, e = entries[i]
        for a in range(e + 1):
            for left, right in splits(i + 1):
                l = ((name, a),) + left if a else left
                r = ((name, e - a),) + right if e - a else right
                yield l, r

    for left, right in splits(0):
        if not left or not right:
            continue
        w = (MultiIndex(left), MultiIndex(right))
        acc[w] = acc.get(w, 0) - 1
    return TensorElem(ring, acc)


def test_d0_zeta_closed_form():
    d = d0(("x",))
    for k in range(1, 7):
        assert d.d_zeta("x", k) == closed_form_d0_single("x", k)


def test_d0_multi_index_closed_form():
    d = d0(("x", "y"))
    for idx in iter_indices(["x", "y"], 6):
        assert d.d_index(idx) == closed_form_d0_index(idx)


def test_d0_zp_closed_form():
    for p in (2, 3, 5):
        ring = RingSpec.Zp(p)
        d = zero_differential(GeneratorSet(["x", "y"]), ring)
        for idx in iter_indices(["x", "y"], 6, max_exp=p - 1):
            assert d.d_index(idx) == closed_form_d0_index(idx, ring)


def test_apply_d_scalar_and_cup1():
    d = d0()
    assert apply_d(d, TensorElem.scalar(Z, 5)).is_zero()
    # d0(x cup1 y) = -x T y - y T x
    got = apply_d(d, cup1_deg1(g("x"), g("y")))
    assert got == word([("x", 1)], [("y", 1)], c=-1) + word([("y", 1)], [("x", 1)], c=-1)


def test_apply_d_leibniz_on_word():
    # d0(z2(x) T y) = -x T x T y
    d = d0()
    got = apply_d(d, word([("x", 2)], [("y", 1)]))
    assert got == word([("x", 1)], [("x", 1)], [("y", 1)], c=-1)


def test_d0_check_d_squared():
    report = check_d_squared(d0(), weight_cap=6)
    assert report.passed
    assert report.checked > 20


def heisenberg_diff(k=1, ring=Z):
    gens = GeneratorSet(["x1", "x2", "y"], {"x1": 1, "x2": 1, "y": 2})
    tau = {"y": cup(g("x1", ring), g("x2", ring)).scale(-k)}
    return build_differential(gens, tau, ring)


def test_heisenberg_leibniz_sign():
    # d(x1 T y) = -x1 T dy = k x1 T x1 T x2 for dy = -k x1 T x2.
    k = 3
    d = heisenberg_diff(k)
    got = apply_d(d, word([("x1", 1)], [("y", 1)]))
    assert got == word([("x1", 1)], [("x1", 1)], [("x2", 1)], c=k)


def test_heisenberg_d_squared():
    report = check_d_squared(heisenberg_diff(2), weight_cap=4)
    assert report.passed


def test_heisenberg_cocycles_mechanical():
    # Under d(a T b) = da T b + (-1)^{|a|} a T db and dy = -k x1 T x2 the
    # verified cocycles carry a plus sign on the correction term.
    k = 4
    d = heisenberg_diff(k)
    u = word([("x1", 1)], [("y", 1)]) + word([("x1", 2)], [("x2", 1)], c=k)
    v = word([("y", 1)], [("x2", 1)]) + word([("x1", 1)], [("x2", 2)], c=k)
    assert apply_d(d, u).is_zero()
    assert apply_d(d, v).is_zero()
    # The minus-sign variant fails the mechanical test.
    bad = word([("x1", 1)], [("y", 1)]) + word([("x1", 2)], [("x2", 1)], c=-k)
    assert not apply_d(d, bad).is_zero()


def test_corrupted_tau_fails_d_squared():
    # dy = x1 T x2 + z2(x1) is not a cocycle for d0; d^2(y) != 0.
    gens = GeneratorSet(["x1", "x2", "y"], {"x1": 1, "x2": 1, "y": 2})
    tau = {"y": cup(g("x1"), g("x2")) + cup(g("x1"), zmono("x1", 2))}
    d = build_differential(gens, tau, Z)
    report = check_d_squared(d, weight_cap=2)
    assert not report.passed
    assert report.first_failure() is not None


def test_level_violation_rejected():
    gens = GeneratorSet(["x", "y"], {"x": 1, "y": 2})
    tau = {"y": cup(g("y"), g("x"))}
    with pytest.raises(ValueError):
        build_differential(gens, tau, Z)


def test_weight_grading_of_d0():
    d = d0(("x", "y", "z"))
    rng = random.Random(3)
    for idx in iter_indices(["x", "y", "z"], 5):
        val = d.d_index(idx)
        if not val.is_zero():
            lo, hi = val.weight_of()
            assert lo == hi == idx.weight


def random_deg1(rng, names=("x", "y"), ring=Z):
    # <= 3 terms, weight <= 3 per term
    t = TensorElem.zero(ring)
    for _ in range(rng.randint(1, 3)):
        budget = rng.randint(1, 3)
        entries = []
        for n in names:
            e = rng.randint(0, budget)
            budget -= e
            if e:
                entries.append((n, e))
        if not entries:
            entries = [(rng.choice(names), 1)]
        c = rng.choice([-2, -1, 1, 2])
        t = t + TensorElem(ring, {(MultiIndex(entries),): c})
    return t


def test_cup1_d_formula_random():
    # d(a cup1 b) = -ab - ba + da cup1 b + db cup1 a - da circ db
    rng = random.Random(4)
    d = heisenberg_diff(2)
    names = ("x1", "x2", "y")
    for _ in range(40):
        a = random_deg1(rng, names)
        b = random_deg1(rng, names)
        lhs = apply_d(d, cup1_deg1(a, b))
        da, db = apply_d(d, a), apply_d(d, b)
        rhs = -cup(a, b) - cup(b, a)
        if not da.is_zero():
            rhs = rhs + cup1_hirsch(da, b)
        if not db.is_zero():
            rhs = rhs + cup1_hirsch(db, a)
        if not (da.is_zero() or db.is_zero()):
            rhs = rhs - circ_22(da, db)
        assert lhs == rhs


def test_da1b_identity():
    # d(da cup1 b) = da cup b - b cup da + da cup1 db  (d^2 a = 0)
    rng = random.Random(5)
    d = heisenberg_diff(3)
    names = ("x1", "x2", "y")
    dp = d.d_poly_fn()
    for _ in range(30):
        a = random_deg1(rng, names)
        b = random_deg1(rng, names)
        da, db = apply_d(d, a), apply_d(d, b)
        if da.is_zero():
            continue
        lhs = apply_d(d, cup1_hirsch(da, b))
        rhs = cup(da, b) - cup(b, da)
        if not db.is_zero():
            rhs = rhs + cup1_22_words(da, db, dp)
        assert lhs == rhs


def test_da1b_identity_closed_case():
    # a = zeta_2(x), b = y under d0.
    d = d0()
    dp = d.d_poly_fn()
    a, b = zmono("x", 2), g("y")
    da, db = apply_d(d, a), apply_d(d, b)
    lhs = apply_d(d, cup1_hirsch(da, b))
    rhs = cup(da, b) - cup(b, da)  # db = 0 kills da cup1 db
    assert db.is_zero()
    assert lhs == rhs


def test_dadb_identity():
    # d(da circ db) = da cup1 db + db cup1 da  (d^2 a = d^2 b = 0)
    rng = random.Random(6)
    d = heisenberg_diff(2)
    names = ("x1", "x2", "y")
    dp = d.d_poly_fn()
    for _ in range(30):
        a = random_deg1(rng, names)
        b = random_deg1(rng, names)
        da, db = apply_d(d, a), apply_d(d, b)
        if da.is_zero() or db.is_zero():
            continue
        lhs = apply_d(d, circ_22(da, db))
        rhs = cup1_22_words(da, db, dp) + cup1_22_words(db, da, dp)
        assert lhs == rhs


def test_cup1_31_slotwise_expansion():
    got = cup1_31(cup(cup(g("x"), g("y")), g("z")), g("w"))
    expect = (cup(cup(cup1_deg1(g("x"), g("w")), g("y")), g("z"))
              + cup(cup(g("x"), cup1_deg1(g("y"), g("w"))), g("z"))
              + cup(cup(g("x"), g("y")), cup1_deg1(g("z"), g("w"))))
    assert expect == got


def test_chain_homotopy_identity():
    """d0 h_l + h_{l+1} d0 = id on the acyclic summand T1 (single x),
    where h kills words unless the first factor is zeta_1 and then
    shifts: h(z1 T z_{i2} T ...) = -z_{i2+1} T ...; weight <= 6."""
    ring = Z
    d = d0(("x",))

    def h(t: TensorElem) -> TensorElem:
        acc = {}
        for w, c in t.terms.items():
            if not w or w[0].get("x") != 1:
                continue
            if len(w) == 1:
                continue
            i2 = w[1].get("x")
            nw = (MultiIndex.single("x", i2 + 1),) + w[2:]
            acc[nw] = acc.get(nw, 0) - c
        return TensorElem(ring, acc)

    def words_T1(weight, length):
        # words of given length in zeta_i(x), total weight given,
        # excluding the single word (x) in degree 1 (that lives in T0).
        def rec(l, rem):
            if l == 0:
                if rem == 0:
                    yield ()
                return
            for i in range(1, rem + 1):
                for rest in rec(l - 1, rem - i):
                    yield (MultiIndex.single("x", i),) + rest

        for w in rec(length, weight):
            if length == 1 and w[0].weight == 1:
                continue
            yield w

    checked = 0
    for weight in range(2, 7):
        for length in range(1, min(weight, 3) + 1):
            for w in words_T1(weight, length):
                t = TensorElem(ring, {w: 1})
                got = apply_d(d, h(t)) + h(apply_d(d, t))
                assert got == t, (w, got.render())
                checked += 1
    assert checked > 30


def test_cup1_high_and_circ_dispatch():
    from cupone.differential import circ, cup1_high
    from cupone.tensor import circ_22, circ_23_words, cup1_31

    d = heisenberg_diff(2)
    x, y = g("x1"), g("x2")
    u3 = cup(cup(x, y), g("y"))
    v2 = cup(x, y)
    assert cup1_high(u3, x) == cup1_31(u3, x)
    # (2,2) requires the context
    with pytest.raises(ValueError):
        cup1_high(v2, v2)
    got = cup1_high(v2, v2, d)
    assert got == cup1_22_words(v2, v2, d.d_poly_fn())
    assert circ(v2, v2) == circ_22(v2, v2)
    with pytest.raises(ValueError):
        circ(v2, u3)
    assert circ(v2, u3, d) == circ_23_words(v2, u3, d.d_poly_fn())
    with pytest.raises(ValueError):
        cup1_high(x, y)
