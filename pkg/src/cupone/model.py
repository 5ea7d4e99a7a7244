"""Stage-wise 1-minimal models of simplicial cochain algebras.

Stage 1 is (T(X_1), d_0) with one generator per H^1 basis class of the
target; stage n+1 adjoins one generator y per basis element of the free
module ker H^2(rho_n), with d(y) = -(kernel representative) and rho(y)
solved exactly from delta rho(y) = rho(dy).

Over Z the degree-2 cohomology of a stage-2 model is assembled from the
two spectral-sequence pieces: Lambda^2(X_1)/K in Smith normal form and
the kernel E of the pairing H^1 (x) span(Y) -> Lambda^3(X_1), each
E-element completed to a cocycle by an exact weight-graded solve; every
representative is re-verified to be a cocycle.  Over Z_p any stage is
handled by brute-force linear algebra on the finite truncation
T^1 -> T^2 -> T^3.

kappa_n pushes an H^2(M_n) generating set through rho simplicially and
reports the torsion of the cokernel inside H^2(X; R) (the full cokernel
invariants ride along, being themselves an n-step invariant).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .delta import (
    Cochain,
    DeltaSet,
    MagmaLaw,
    check_admissible,
    coboundary,
    coboundary_matrix,
    cup_cochain,
    magma_from_tau,
    segment_cohomology,
)
from .differential import (
    Differential,
    GeneratorSet,
    apply_d,
    build_differential,
    iter_indices,
    zero_differential,
)
from .interval import CylEl, cylinder_over_complex
from .linalg import (
    AbelianInvariants,
    CohomologyData,
    ZpEliminator,
    cohomology_at,
    kernel_basis_Z,
    kernel_into_presented,
    lattice_basis,
    smith_normal_form,
    solve_Z,
    solve_mod_p,
)
from .rings import BinomialPoly, MultiIndex, RingSpec, binom_of
from .tensor import TensorElem, cup


class PreconditionError(ValueError):
    """A mathematical precondition of an operation fails."""


class StageCapError(RuntimeError):
    """Stage-model H^2 over Z is supported for n <= 2 only."""


@dataclass
class H2Gen:
    order: int              # 0 for a free generator, d > 1 for torsion
    rep: TensorElem
    label: str


@dataclass
class ModelStage:
    n: int
    ring: RingSpec
    gens: GeneratorSet
    diff: Differential
    target: DeltaSet
    rho: dict[str, Cochain]
    h1_names: list[str]
    h2x: CohomologyData
    h2_model: list[H2Gen] | None = None
    ker_basis: list[TensorElem] | None = None
    complete: bool = False

    def level_names(self, m: int) -> list[str]:
        return self.gens.at_level(m)


# ---------------------------------------------------------------------------
# weight-graded bases of (T(X), d_0) and exterior coordinates

def t1_weight_basis(names, w, ring) -> list[MultiIndex]:
    return [i for i in iter_indices(names, w, ring.max_zeta)
            if i.weight == w]


def t_word_basis(names, w, length, ring) -> list[tuple]:
    """Words of the given length with total weight w."""
    if length == 1:
        return [(i,) for i in t1_weight_basis(names, w, ring)]
    out = []
    for w1 in range(1, w - length + 2):
        for head in t1_weight_basis(names, w1, ring):
            for tail in t_word_basis(names, w - w1, length - 1, ring):
                out.append((head,) + tail)
    return out


def elem_vector(t: TensorElem, index: dict, size: int) -> list[int]:
    v = [0] * size
    for w, c in t.terms.items():
        pos = index.get(w)
        if pos is None:
            raise ValueError(f"word {w!r} outside the chosen basis")
        v[pos] = c
    return v


def d0_weight_matrix(names, w, length, ring):
    """Matrix of d_0 from words of the given length/weight to length+1."""
    d0 = zero_differential(GeneratorSet(names), ring)
    src = t_word_basis(names, w, length, ring)
    dst = t_word_basis(names, w, length + 1, ring)
    index = {word: i for i, word in enumerate(dst)}
    rows = [[0] * len(src) for _ in dst]
    for j, word in enumerate(src):
        val = apply_d(d0, TensorElem(ring, {word: 1}))
        for wv, c in val.terms.items():
            rows[index[wv]][j] = c
    return src, dst, rows


def exterior_weight_cohomology(names, ring, w: int, degree: int) -> CohomologyData:
    """H^degree of (T(X), d_0) in one weight, by direct linear algebra."""
    from .linalg import ComplexSegment
    mid = t_word_basis(names, w, degree, ring)
    low = t_word_basis(names, w, degree - 1, ring) if degree > 1 else []
    up = t_word_basis(names, w, degree + 1, ring) if degree < 3 else []
    if degree > 1:
        _, _, A = d0_weight_matrix(names, w, degree - 1, ring)
    else:
        A = [[] for _ in mid]
    if degree < 3 and up:
        _, _, B = d0_weight_matrix(names, w, degree, ring)
    else:
        B, up = [], []
    seg = ComplexSegment(ring, low, mid, up, A, B)
    return cohomology_at(seg)


def lambda2_basis(names) -> list[tuple[str, str]]:
    return [(names[i], names[j]) for i in range(len(names))
            for j in range(i + 1, len(names))]


def lambda2_coords(t: TensorElem, names) -> list[int]:
    """Class coordinates of a weight-2 cocycle of (T(X_1), d_0) in the
    exterior basis [x_i (x) x_j], i < j; uses d zeta_2(x) = -x (x) x and
    d(x cup1 y) = -x(x)y - y(x)x.  Valid over Z and Z_p with p odd."""
    pos = {n: i for i, n in enumerate(names)}
    basis = lambda2_basis(names)
    slot = {pair: i for i, pair in enumerate(basis)}
    out = [0] * len(basis)
    for word, c in t.terms.items():
        if len(word) != 2 or any(f.weight != 1 for f in word):
            raise ValueError("lambda2 coordinates need weight-2 words")
        a = word[0].entries[0][0]
        b = word[1].entries[0][0]
        if a == b:
            continue
        if pos[a] < pos[b]:
            out[slot[(a, b)]] += c
        else:
            out[slot[(b, a)]] -= c
    return out


def lambda3_coords(t: TensorElem, names) -> list[int]:
    """Class coordinates of a weight-3 degree-3 element in the exterior
    basis [x_i (x) x_j (x) x_k], i < j < k (words with repeats die)."""
    pos = {n: i for i, n in enumerate(names)}
    basis = [(names[i], names[j], names[k])
             for i in range(len(names))
             for j in range(i + 1, len(names))
             for k in range(j + 1, len(names))]
    slot = {tri: i for i, tri in enumerate(basis)}
    out = [0] * len(basis)
    for word, c in t.terms.items():
        if len(word) != 3 or any(f.weight != 1 for f in word):
            raise ValueError("lambda3 coordinates need weight-3 words")
        letters = [f.entries[0][0] for f in word]
        if len(set(letters)) != 3:
            continue
        order = sorted(letters, key=lambda n: pos[n])
        # parity of the permutation taking letters to sorted order
        perm = [order.index(l) for l in letters]
        sign = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if perm[i] > perm[j]:
                    sign = -sign
        out[slot[tuple(order)]] += sign * c
    return out


def word_pair(a: str, b: str, ring, c: int = 1) -> TensorElem:
    return TensorElem(ring, {(MultiIndex.single(a), MultiIndex.single(b)): c})


@dataclass
class H2FreeData:
    """H^2 of (T(X_1), d_0) over Z: the exterior basis with coordinates."""
    names: list[str]
    basis: list[tuple[str, str]]
    reps: list[TensorElem]

    def coords(self, t: TensorElem) -> list[int]:
        return lambda2_coords(t, self.names)


def h2_free_d0(names, ring: RingSpec) -> H2FreeData:
    """Basis [x_i T x_j], i < j, of H^2(T(X_1), d_0) with the weight-2
    coordinate functional (the d zeta_2 and d(x cup1 y) reductions)."""
    if ring.is_modular and ring.p == 2:
        raise PreconditionError(
            "over Z_2 the degree-2 cohomology is not exterior; "
            "use the brute-force Z_p route")
    names = list(names)
    basis = lambda2_basis(names)
    reps = [word_pair(a, b, ring) for a, b in basis]
    return H2FreeData(names=names, basis=basis, reps=reps)


# ---------------------------------------------------------------------------
# pushing model elements into the cochain algebra

def rho_poly(stage_rho: dict, X: DeltaSet, ring, idx: MultiIndex) -> Cochain:
    """rho(zeta_I): pointwise product of binomials of the rho-values."""
    out = {}
    for e in X.cells[1]:
        v = 1
        for name, k in idx.entries:
            v *= binom_of(stage_rho[name].values.get(e, 0), k, ring)
            if not v:
                break
        v = ring.normalize(v)
        if v:
            out[e] = v
    return Cochain(1, ring, out)


def rho_push(stage: "ModelStage", t: TensorElem) -> Cochain:
    """Apply the structural morphism to a tensor element (degree <= 3)."""
    X, ring = stage.target, stage.ring
    deg = t.degree() if not t.is_zero() else 2
    acc = Cochain(deg, ring, {})
    for word, c in t.terms.items():
        factors = [rho_poly(stage.rho, X, ring, idx) for idx in word]
        cur = factors[0]
        for f in factors[1:]:
            cur = cup_cochain(X, cur, f)
        acc = acc + cur.scale(c)
    return acc


# ---------------------------------------------------------------------------
# stage 1

def stage1(X: DeltaSet, ring: RingSpec,
           h1_reps: list[Cochain] | None = None) -> ModelStage:
    h0 = segment_cohomology(X, ring, 0)
    if ring.is_modular:
        connected = len(h0.generators) == 1
    else:
        connected = h0.invariants == AbelianInvariants(1, ())
    if not connected:
        raise PreconditionError(f"target is not connected: H^0 = "
                                f"{h0.invariants.render()}")
    h1 = segment_cohomology(X, ring, 1)
    if not ring.is_modular and h1.invariants.torsion:
        raise PreconditionError(
            f"H^1 is not free: {h1.invariants.render()}")
    if h1_reps is None:
        reps = [Cochain(1, ring, dict(zip(X.cells[1], rep)))
                for _, rep in h1.generators]
    else:
        reps = list(h1_reps)
        coords = [h1.class_coords(r.vector(X.cells[1])) for r in reps]
        k = len(h1.generators)
        if len(reps) != k:
            raise PreconditionError("wrong number of H^1 representatives")
        if ring.is_modular:
            elim = ZpEliminator(ring.p)
            for v in coords:
                elim.insert({i: x for i, x in enumerate(v) if x % ring.p})
            ok = elim.rank == k
        else:
            snf = smith_normal_form(coords, k)
            ok = snf.diag == [1] * k
        if not ok:
            raise PreconditionError("supplied cochains are not an H^1 basis")
    names = [f"x{i + 1}" for i in range(len(reps))]
    gens = GeneratorSet(names, {n: 1 for n in names})
    diff = zero_differential(gens, ring)
    h2x = segment_cohomology(X, ring, 2)
    stage = ModelStage(n=1, ring=ring, gens=gens, diff=diff, target=X,
                       rho=dict(zip(names, reps)), h1_names=names, h2x=h2x)
    if ring.is_modular:
        stage.h2_model = h2_stage_Zp(stage)
    else:
        stage.h2_model = [
            H2Gen(0, word_pair(a, b, ring), f"[{a} T {b}]")
            for a, b in lambda2_basis(names)]
    _compute_kernel(stage)
    return stage


def _h2x_relation_cols(stage: "ModelStage") -> list[list[int]]:
    m = len(stage.h2x.generators)
    cols = []
    for i, (order, _) in enumerate(stage.h2x.generators):
        if order:
            col = [0] * m
            col[i] = order
            cols.append(col)
    return cols


def _compute_kernel(stage: "ModelStage"):
    """ker H^2(rho_n) as a free submodule of H^2(M_n), with cocycle
    representatives; sets stage.ker_basis and stage.complete."""
    ring = stage.ring
    gens = stage.h2_model
    img = [stage.h2x.class_coords(
        rho_push(stage, g.rep).vector(stage.target.cells[2]))
        for g in gens]
    m = len(stage.h2x.generators)
    if ring.is_modular:
        p = ring.p
        elim = ZpEliminator(p)
        ker_vecs = []
        for j, col in enumerate(img):
            sparse = {i: v % p for i, v in enumerate(col) if v % p}
            combo = elim.express(sparse)
            if combo is None:
                elim.insert(sparse, tag=j)
            else:
                vec = [0] * len(img)
                vec[j] = 1
                for t, c in combo.items():
                    vec[t] = (-c) % p
                ker_vecs.append(vec)
    else:
        cols = [list(v) for v in img]
        sol = kernel_into_presented(cols, _h2x_relation_cols(stage), m) \
            if cols else []
        # Quotient by the torsion of the source generators: a solution
        # vector is trivial when each coordinate dies in the source.
        orders = [g.order for g in gens]
        keep = []
        for v in sol:
            if all((o and x % o == 0) or (not o and x == 0)
                   for x, o in zip(v, orders)):
                continue
            keep.append(v)
        ker_vecs = lattice_basis(keep, len(gens)) if keep else []
    basis = []
    for v in ker_vecs:
        # normalize the leading sign
        lead = next((x for x in v if x), 1)
        if lead < 0:
            v = [-x for x in v]
        rep = TensorElem.zero(ring)
        for coeff, g in zip(v, gens):
            if coeff:
                rep = rep + g.rep.scale(coeff)
        basis.append(rep)
    stage.ker_basis = basis
    stage.complete = not basis


# ---------------------------------------------------------------------------
# stage extension

def extend_stage(stage: "ModelStage") -> "ModelStage":
    """Adjoin one generator per kernel-basis element (d y = -rep) and
    lift rho; returns the input stage when the model is complete."""
    if stage.complete:
        return stage
    ring = stage.ring
    if not ring.is_modular and stage.n >= 2:
        raise StageCapError(
            "H^2 of stage models over Z is computed for n <= 2 only; "
            "cannot certify a free kernel basis beyond stage 2")
    if stage.ker_basis is None:
        raise PreconditionError("stage kernel has not been computed")
    X = stage.target
    level = stage.n + 1
    prefix = "y" if level == 2 else f"t{level}_"
    new_names = [f"{prefix}{i + 1}" for i in range(len(stage.ker_basis))]
    gens = stage.gens.extend(new_names, level)
    tau = dict(stage.diff.tau)
    rho = dict(stage.rho)
    delta1 = coboundary_matrix(X, 1)
    n1 = len(X.cells[1])
    for name, rep in zip(new_names, stage.ker_basis):
        tau[name] = rep.scale(-1)
        target = rho_push(stage, rep.scale(-1))
        b = target.vector(X.cells[2])
        if ring.is_modular:
            p = ring.p
            cols = [{i: row[j] % p for i, row in enumerate(delta1)
                     if row[j] % p} for j in range(n1)]
            x = solve_mod_p(cols, {i: v % p for i, v in enumerate(b)
                                   if v % p}, p)
        else:
            x = solve_Z(delta1, b, n1)
        if x is None:
            raise AssertionError(
                "rho-lift unsolvable: kernel representative is not in "
                "ker H^2(rho) (internal consistency failure)")
        rho[name] = Cochain(1, ring, dict(zip(X.cells[1], x)))
    diff = build_differential(gens, tau, ring)
    nxt = ModelStage(n=level, ring=ring, gens=gens, diff=diff, target=X,
                     rho=rho, h1_names=stage.h1_names, h2x=stage.h2x)
    if ring.is_modular:
        nxt.h2_model = h2_stage_Zp(nxt)
        _compute_kernel(nxt)
    elif level == 2:
        nxt.h2_model = h2_stage2_Z(nxt)
        _compute_kernel(nxt)
    else:
        nxt.h2_model = None
        nxt.ker_basis = None
    return nxt


# ---------------------------------------------------------------------------
# H^2 of stage models

def h2_stage2_Z(stage: "ModelStage") -> list[H2Gen]:
    """H^2(M_2) = (Lambda^2(X_1)/K) + ker(e), with audited cocycle
    representatives (see the module docstring)."""
    if stage.n != 2 or stage.ring.is_modular:
        raise PreconditionError("h2_stage2_Z needs a stage-2 model over Z")
    ring = stage.ring
    names = stage.h1_names
    ys = stage.gens.at_level(2)
    basis2 = lambda2_basis(names)
    # K: classes of dy in Lambda^2.
    kcols = [lambda2_coords(stage.diff.tau[y], names) for y in ys]
    krows = [[kcols[j][i] for j in range(len(ys))]
             for i in range(len(basis2))]
    gens_out: list[H2Gen] = []
    if basis2:
        snf = smith_normal_form(krows, len(ys), want_uinv=True)
        diag = snf.diag + [0] * (len(basis2) - len(snf.diag))
        for i, d in enumerate(diag):
            if d == 1:
                continue
            wvec = [snf.Uinv[r][i] for r in range(len(basis2))]
            rep = TensorElem.zero(ring)
            for coeff, (a, b) in zip(wvec, basis2):
                if coeff:
                    rep = rep + word_pair(a, b, ring, coeff)
            label = f"[{rep.render()}]"
            gens_out.append(H2Gen(d if d else 0, rep, label))
    # E: kernel of the pairing H^1 (x) span(Y) -> Lambda^3.
    pair_cols = []
    col_labels = []
    for xi in names:
        for y in ys:
            v = cup(TensorElem.gen(ring, xi), stage.diff.tau[y])
            pair_cols.append(lambda3_coords(v, names))
            col_labels.append((xi, y))
    k = len(names)
    nl3 = k * (k - 1) * (k - 2) // 6
    rows = [[pair_cols[j][i] for j in range(len(pair_cols))]
            for i in range(nl3)]
    evecs = kernel_basis_Z(rows, len(pair_cols)) if pair_cols else []
    # Completion in the weight-3 layer of (T(X_1), d_0).
    src, dst, dmat = d0_weight_matrix(names, 3, 2, ring)
    dst_index = {w: i for i, w in enumerate(dst)}
    for v in evecs:
        lead = next((x for x in v if x), 1)
        if lead < 0:
            v = [-x for x in v]
        z = TensorElem.zero(ring)
        for coeff, (xi, y) in zip(v, col_labels):
            if coeff:
                z = z + TensorElem(ring, {
                    (MultiIndex.single(xi), MultiIndex.single(y)): coeff})
        dz = apply_d(stage.diff, z)
        target = [0] * len(dst)
        for w, c in dz.terms.items():
            target[dst_index[w]] = -c
        sol = solve_Z(dmat, target, len(src))
        if sol is None:
            raise AssertionError("E-pairing element failed to complete "
                                 "(internal consistency failure)")
        c_elem = TensorElem(ring, {w: cc for w, cc in zip(src, sol) if cc})
        rep = z + c_elem
        if not apply_d(stage.diff, rep).is_zero():
            raise AssertionError("stage-2 representative is not a cocycle")
        label = " + ".join(
            f"{coeff}*[{xi} T {y}]"
            for coeff, (xi, y) in zip(v, col_labels) if coeff)
        gens_out.append(H2Gen(0, rep, label))
    return gens_out


def _t_basis_all(names, ring, degree: int) -> list[tuple]:
    """Full basis of T^degree over Z_p (every exponent <= p-1)."""
    cap = ring.max_zeta
    singles = list(iter_indices(names, cap * len(names), cap))

    def words(d):
        if d == 0:
            return [()]
        return [(i,) + rest for i in singles for rest in words(d - 1)]

    return words(degree)


def h2_stage_Zp(stage: "ModelStage") -> list[H2Gen]:
    """Brute-force H^2 of the finite truncation T^1 -> T^2 -> T^3.

    All matrices stay sparse; degree-3 words are indexed lazily so only
    the image of the differential is ever materialized.
    """
    ring = stage.ring
    if not ring.is_modular:
        raise PreconditionError("h2_stage_Zp requires a Z_p model")
    from .linalg import cohomology_sparse_zp
    names = stage.gens.names
    b1 = _t_basis_all(names, ring, 1)
    b2 = _t_basis_all(names, ring, 2)
    i2 = {w: i for i, w in enumerate(b2)}
    i3: dict = {}
    # One shared d-memo: every degree-2 word differential is assembled
    # from the cached single-index values by the Leibniz rule.
    memo: dict = {}
    d1 = {w[0]: stage.diff.d_index(w[0], memo) for w in b1}
    a_cols = [{i2[wv]: c for wv, c in d1[w[0]].terms.items()} for w in b1]
    b_cols = []
    for (idx_a, idx_b) in b2:
        col: dict = {}
        for wv, c in d1[idx_a].terms.items():
            pos = i3.setdefault(wv + (idx_b,), len(i3))
            col[pos] = (col.get(pos, 0) + c) % ring.p
        for wv, c in d1[idx_b].terms.items():
            pos = i3.setdefault((idx_a,) + wv, len(i3))
            col[pos] = (col.get(pos, 0) - c) % ring.p
        b_cols.append({k: v for k, v in col.items() if v})
    data = cohomology_sparse_zp(ring, len(b2), a_cols, b_cols)
    out = []
    for order, vec in data.generators:
        rep = TensorElem(ring, {w: c for w, c in zip(b2, vec) if c})
        out.append(H2Gen(order, rep, f"[{rep.render()}]"))
    return out


def express_many_in_h2_basis(stage: "ModelStage", zs: list[TensorElem],
                             weight_cap: int = 3) -> list[list[int]]:
    """Coordinates of stage-2 cocycle classes in stage.h2_model, by the
    exact solve  z = sum v_i rep_i + d(c)  over a weight-capped basis
    (one Smith normal form shared by all right-hand sides)."""
    ring = stage.ring
    if ring.is_modular:
        raise PreconditionError("use the Z_p coordinate functional instead")
    for z in zs:
        if not apply_d(stage.diff, z).is_zero():
            raise ValueError("not a cocycle")
    names = stage.gens.names
    reps = [g.rep for g in stage.h2_model]
    cols: list[TensorElem] = list(reps)
    memo: dict = {}
    for idx in iter_indices(names, weight_cap, ring.max_zeta):
        cols.append(stage.diff.d_index(idx, memo))
    support = set()
    for z in zs:
        support.update(z.terms)
    for c in cols:
        support.update(c.terms)
    support = sorted(support, key=lambda word: (len(word),
                                                [f.sort_key() for f in word]))
    index = {w: i for i, w in enumerate(support)}
    rows = [[0] * len(cols) for _ in support]
    for j, c in enumerate(cols):
        for w, v in c.terms.items():
            rows[index[w]][j] = v
    bs = []
    for z in zs:
        b = [0] * len(support)
        for w, v in z.terms.items():
            b[index[w]] = v
        bs.append(b)
    snf = smith_normal_form(rows, len(cols), want_v=True, carry=bs)
    out = []
    for c in snf.carry:
        y = [0] * len(cols)
        for i, d in enumerate(snf.diag):
            q, r = divmod(c[i], d)
            if r:
                raise ValueError("cocycle not expressible at this weight cap")
            y[i] = q
        if any(c[i] for i in range(snf.rank, len(c))):
            raise ValueError("cocycle not expressible at this weight cap")
        from .linalg import mat_vec
        out.append(mat_vec(snf.V, y)[:len(reps)])
    return out


def express_in_h2_basis(stage: "ModelStage", z: TensorElem,
                        weight_cap: int = 3) -> list[int]:
    return express_many_in_h2_basis(stage, [z], weight_cap)[0]


def t_cohomology_Zp(names, ring: RingSpec, degree: int,
                    diff: Differential | None = None):
    """H^degree of (T_{Z_p}(X), d) for degree 1 or 2, brute force."""
    from .linalg import cohomology_sparse_zp
    diff = diff or zero_differential(GeneratorSet(names), ring)
    memo: dict = {}
    b1 = _t_basis_all(names, ring, 1)
    d1 = {w[0]: diff.d_index(w[0], memo) for w in b1}
    if degree == 1:
        i2: dict = {}
        b_cols = []
        for w in b1:
            col = {}
            for wv, c in d1[w[0]].terms.items():
                col[i2.setdefault(wv, len(i2))] = c
            b_cols.append(col)
        data = cohomology_sparse_zp(ring, len(b1), [], b_cols)
        reps = [TensorElem(ring, {w: c for w, c in zip(b1, vec) if c})
                for _, vec in data.generators]
        return data, b1, reps
    if degree != 2:
        raise ValueError("degrees 1 and 2 only")
    b2 = _t_basis_all(names, ring, 2)
    i2 = {w: i for i, w in enumerate(b2)}
    a_cols = [{i2[wv]: c for wv, c in d1[w[0]].terms.items()} for w in b1]
    i3: dict = {}
    b_cols = []
    for (ia, ib) in b2:
        col: dict = {}
        for wv, c in d1[ia].terms.items():
            pos = i3.setdefault(wv + (ib,), len(i3))
            col[pos] = (col.get(pos, 0) + c) % ring.p
        for wv, c in d1[ib].terms.items():
            pos = i3.setdefault((ia,) + wv, len(i3))
            col[pos] = (col.get(pos, 0) - c) % ring.p
        b_cols.append({k: v for k, v in col.items() if v})
    data = cohomology_sparse_zp(ring, len(b2), a_cols, b_cols)
    reps = [TensorElem(ring, {w: c for w, c in zip(b2, vec) if c})
            for _, vec in data.generators]
    return data, b2, reps


@dataclass
class PsiComparison:
    p: int
    names: list[str]
    dims_model: dict[int, int]
    dims_bar: dict[int, int]
    iso: dict[int, bool]

    @property
    def ok(self) -> bool:
        return all(self.iso.values()) and all(
            self.dims_model[i] == self.dims_bar[i] for i in self.iso)


def psi_cohomology_comparison(names, ring: RingSpec) -> PsiComparison:
    """Check that psi: (T_{Z_p}(X), d_0) -> C*(B(Z_p^|X|); Z_p) induces
    isomorphisms on H^1 and H^2."""
    from .delta import delta_from_magma, psi_embed
    if not ring.is_modular:
        raise PreconditionError("the comparison runs over Z_p")
    law = magma_from_tau(list(names), {}, ring)
    mc = delta_from_magma(law.to_finite_magma(), 3)
    X = mc.delta
    dims_model, dims_bar, iso = {}, {}, {}
    for degree in (1, 2):
        data, basis, reps = t_cohomology_Zp(names, ring, degree)
        bar = segment_cohomology(X, ring, degree)
        dims_model[degree] = len(data.generators)
        dims_bar[degree] = len(bar.generators)
        elim = ZpEliminator(ring.p)
        full = True
        for rep in reps:
            c = psi_embed(rep, mc, list(names), deg=degree)
            coords = bar.class_coords(c.vector(X.cells[degree]))
            if not elim.insert({i: v for i, v in enumerate(coords) if v}):
                full = False
        iso[degree] = full and dims_model[degree] == dims_bar[degree]
    return PsiComparison(p=ring.p, names=list(names),
                         dims_model=dims_model, dims_bar=dims_bar, iso=iso)


# ---------------------------------------------------------------------------
# kappa and comparison

@dataclass
class KappaInvariant:
    n: int
    cokernel: AbelianInvariants

    @property
    def torsion(self) -> AbelianInvariants:
        return self.cokernel.torsion_part()


def kappa(stage: "ModelStage") -> KappaInvariant:
    if stage.h2_model is None:
        raise StageCapError("H^2 data unavailable at this stage")
    ring = stage.ring
    img = [stage.h2x.class_coords(
        rho_push(stage, g.rep).vector(stage.target.cells[2]))
        for g in stage.h2_model]
    m = len(stage.h2x.generators)
    if ring.is_modular:
        elim = ZpEliminator(ring.p)
        for col in img:
            elim.insert({i: v for i, v in enumerate(col) if v % ring.p})
        dim = m - elim.rank
        inv = AbelianInvariants(0, tuple(ring.p for _ in range(dim)))
        return KappaInvariant(stage.n, inv)
    cols = _h2x_relation_cols(stage) + [list(v) for v in img]
    if not cols:
        inv = AbelianInvariants(m, ())
    else:
        rows = [[c[i] for c in cols] for i in range(m)]
        snf = smith_normal_form(rows, len(cols))
        inv = AbelianInvariants.from_coker(snf.diag, m)
    return KappaInvariant(stage.n, inv)


def minimal_model(X: DeltaSet, ring: RingSpec, stages: int = 2,
                  h1_reps=None) -> list[ModelStage]:
    out = [stage1(X, ring, h1_reps)]
    while out[-1].n < stages and not out[-1].complete:
        out.append(extend_stage(out[-1]))
    return out


@dataclass
class CompareVerdict:
    distinguished: bool
    left: KappaInvariant
    right: KappaInvariant
    forget_torsion: bool

    @property
    def verdict(self) -> str:
        return "distinguished" if self.distinguished \
            else "not-distinguished-by-kappa"


def n_step_compare(Xa: DeltaSet, Xb: DeltaSet, ring: RingSpec, n: int = 2,
                   forget_torsion: bool = False, h1_reps_a=None,
                   h1_reps_b=None, jobs: int = 1) -> CompareVerdict:
    """Certify non-equivalence via coker H^2(rho_n); never certifies
    equivalence."""

    def side(X, reps):
        st = minimal_model(X, ring, n, reps)[-1]
        return kappa(st)

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=2) as ex:
            fa = ex.submit(side, Xa, h1_reps_a)
            fb = ex.submit(side, Xb, h1_reps_b)
            ka, kb = fa.result(), fb.result()
    else:
        ka, kb = side(Xa, h1_reps_a), side(Xb, h1_reps_b)
    if forget_torsion:
        different = ka.cokernel.rank != kb.cokernel.rank
    else:
        different = ka.cokernel != kb.cokernel
    return CompareVerdict(distinguished=different, left=ka, right=kb,
                          forget_torsion=forget_torsion)


# ---------------------------------------------------------------------------
# group realization

@dataclass
class GroupRealization:
    law: MagmaLaw
    law_rendered: dict[str, str]
    tower: list[tuple[int, list[str]]]
    audit: dict


def realize_group(stage: "ModelStage", box: int = 3, samples: int = 50,
                  seed: int = 0) -> GroupRealization:
    ring = stage.ring
    law = magma_from_tau(stage.gens.names, stage.diff.tau, ring)
    rendered = {g: p.render() for g, p in law.law_polynomials().items()}
    audit = {}
    verdict = check_admissible(law, box=box, samples=samples, seed=seed)
    audit["associativity"] = verdict.status
    if not verdict.ok:
        raise AssertionError(
            f"group axioms fail: counterexample {verdict.counterexample}")
    n = len(stage.gens.names)
    zero = tuple(0 for _ in range(n))
    import random as _random
    rng = _random.Random(seed)
    if ring.is_modular:
        fm = law.to_finite_magma()
        audit["order"] = len(fm)
        audit["unit"] = all(fm.op(a, zero) == a and fm.op(zero, a) == a
                            for a in fm.elements)
        audit["inverses"] = fm.has_inverses()
    else:
        pts = [tuple(rng.randint(-box, box) for _ in range(n))
               for _ in range(samples)]
        audit["unit"] = all(law.apply(a, zero) == a
                            and law.apply(zero, a) == a for a in pts)
        audit["inverses"] = "not-audited-over-Z (group by construction)"
    # Central tower: level m+1 coordinates are killed by f_tau, so
    # level-supported elements commute with everything; audit by samples.
    tower = []
    central_ok = True
    for m in range(2, stage.n + 1):
        lv = stage.gens.at_level(m)
        tower.append((m, lv))
        idxs = [stage.gens.names.index(g) for g in lv]
        for _ in range(min(samples, 25)):
            zvec = [0] * n
            for i in idxs:
                zvec[i] = (rng.randint(0, ring.p - 1) if ring.is_modular
                           else rng.randint(-box, box))
            zt = tuple(zvec)
            a = tuple(rng.randint(0, ring.p - 1) if ring.is_modular
                      else rng.randint(-box, box) for _ in range(n))
            expect = tuple(ring.normalize(x + y) for x, y in zip(a, zt))
            if law.apply(a, zt) != expect or law.apply(zt, a) != expect:
                central_ok = False
    audit["central_tower"] = central_ok
    if not central_ok:
        raise AssertionError("central-extension audit failed")
    return GroupRealization(law=law, law_rendered=rendered, tower=tower,
                            audit=audit)


# ---------------------------------------------------------------------------
# homotopies between morphisms (T(X_1), d_0) -> C*(X; R)

@dataclass
class HomotopyWitness:
    Phi: dict[str, CylEl]
    c: dict[str, Cochain]
    audit: dict


def construct_homotopy(X: DeltaSet, ring: RingSpec, names: list[str],
                       phi0: dict[str, Cochain],
                       phi1: dict[str, Cochain]) -> HomotopyWitness:
    h1 = segment_cohomology(X, ring, 1)
    for g in names:
        for phi in (phi0, phi1):
            if not coboundary(X, phi[g]).is_zero():
                raise PreconditionError(f"phi({g}) is not a cocycle")
        c0 = h1.class_coords(phi0[g].vector(X.cells[1]))
        c1 = h1.class_coords(phi1[g].vector(X.cells[1]))
        if c0 != c1:
            raise PreconditionError(
                f"[phi0({g})] != [phi1({g})]: {c0} vs {c1}")
    delta0 = coboundary_matrix(X, 0)
    n0 = len(X.cells[0])
    cyl = cylinder_over_complex(X, ring)
    Phi, cs = {}, {}
    for g in names:
        diff = phi0[g] - phi1[g]
        b = diff.vector(X.cells[1])
        if ring.is_modular:
            p = ring.p
            cols = [{i: row[j] % p for i, row in enumerate(delta0)
                     if row[j] % p} for j in range(n0)]
            x = solve_mod_p(cols, {i: v % p for i, v in enumerate(b)
                                   if v % p}, p)
        else:
            x = solve_Z(delta0, b, n0)
        if x is None:
            raise AssertionError("equal classes must differ by a coboundary")
        c = Cochain(0, ring, dict(zip(X.cells[0], x)))
        cs[g] = c
        Phi[g] = CylEl(1, phi0[g], phi1[g], c.scale(-1))
    audit = {"cocycle": True, "endpoints": True, "zeta": True, "cup1": True}
    for g in names:
        if not cyl.is_zero(cyl.d(Phi[g])):
            audit["cocycle"] = False
        if cyl.restrict(Phi[g], 0) != phi0[g] or \
                cyl.restrict(Phi[g], 1) != phi1[g]:
            audit["endpoints"] = False
        kmax = 3 if (not ring.is_modular or ring.p > 3) else ring.p - 1
        for k in range(2, kmax + 1):
            zk = cyl.zeta(Phi[g], k)
            from .delta import zeta_cochain
            if cyl.restrict(zk, 0) != zeta_cochain(X, phi0[g], k) or \
                    cyl.restrict(zk, 1) != zeta_cochain(X, phi1[g], k):
                audit["zeta"] = False
            dz = cyl.d(zk)
            rhs = cyl.elem(2)
            for l in range(1, k):
                rhs = cyl.add(rhs, cyl.cup(cyl.zeta(Phi[g], l),
                                           cyl.zeta(Phi[g], k - l)))
            if not cyl.is_zero(cyl.add(dz, rhs)):
                audit["zeta"] = False
    for g in names:
        for h in names:
            v = cyl.cup1(Phi[g], Phi[h])
            from .delta import cup1_cochain
            if cyl.restrict(v, 0) != cup1_cochain(X, phi0[g], phi0[h]) or \
                    cyl.restrict(v, 1) != cup1_cochain(X, phi1[g], phi1[h]):
                audit["cup1"] = False
    if not all(v is True for v in audit.values()):
        raise AssertionError(f"homotopy audit failed: {audit}")
    return HomotopyWitness(Phi=Phi, c=cs, audit=audit)
