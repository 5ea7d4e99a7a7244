"""Exact linear algebra over Z and Z_p.

Smith normal form with unimodular transforms drives everything over Z:
kernels, cokernels, particular solutions, and the cohomology of
three-term complexes with labeled bases.  Over Z_p the same interfaces
are served by sparse Gaussian elimination with combination tracking.

The SNF pivot rule is smallest nonzero magnitude with ties broken by
(row, col), which keeps entry growth tame on the matrix sizes produced
by the rest of the package and makes every output deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rings import RingSpec


# ---------------------------------------------------------------------------
# dense helpers

def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_vec(m: list[list[int]], v: list[int]) -> list[int]:
    return [sum(r[j] * v[j] for j in range(len(v))) for r in m]


def mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    cols = len(b[0]) if b else 0
    return [[sum(ra[k] * b[k][j] for k in range(len(ra))) for j in range(cols)]
            for ra in a]


def transpose(m: list[list[int]], ncols: int | None = None) -> list[list[int]]:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def rank_over_Q(rows: list[list[int]]) -> int:
    """Independent rank oracle: Gaussian elimination over the rationals."""
    work = [[Fraction(x) for x in r] for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        prow = work[rank]
        inv = 1 / prow[col]
        work[rank] = [x * inv for x in prow]
        for i in range(len(work)):
            if i != rank and work[i][col]:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass
class SNFResult:
    diag: list[int]
    rank: int
    nrows: int
    ncols: int
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None
    Uinv: list[list[int]] | None = None
    Vinv: list[list[int]] | None = None
    carry: list[list[int]] | None = None  # U*vec for each input carry vector


def smith_normal_form(rows: list[list[int]], ncols: int | None = None,
                      want_u: bool = False, want_v: bool = False,
                      want_uinv: bool = False, want_vinv: bool = False,
                      carry: list[list[int]] | None = None) -> SNFResult:
    """U * M * V = D with U, V unimodular and D a divisibility chain.

    The matrix is given as a list of dense rows; internally the
    elimination runs on a sparse dict-of-dicts copy.
    """
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    work: dict[int, dict[int, int]] = {}
    colidx: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            if v:
                work.setdefault(i, {})[j] = v
                colidx.setdefault(j, set()).add(i)

    need_u = want_u or want_uinv
    need_v = want_v or want_vinv
    U = identity(nrows) if need_u else None
    Uinv = identity(nrows) if want_uinv else None
    V = identity(ncols) if need_v else None
    Vinv = identity(ncols) if want_vinv else None
    carried = [list(v) for v in carry] if carry else None

    def get(i, j):
        return work.get(i, {}).get(j, 0)

    def setval(i, j, v):
        row = work.setdefault(i, {})
        if v:
            row[j] = v
            colidx.setdefault(j, set()).add(i)
        else:
            if j in row:
                del row[j]
                colidx[j].discard(i)
            if not row:
                del work[i]

    def row_add(i, t, q):
        # row_i += q * row_t
        if not q:
            return
        for j, v in list(work.get(t, {}).items()):
            setval(i, j, get(i, j) + q * v)
        if U is not None:
            Ui, Ut = U[i], U[t]
            for j in range(nrows):
                Ui[j] += q * Ut[j]
        if carried is not None:
            for v in carried:
                v[i] += q * v[t]
        if Uinv is not None:
            for r in Uinv:
                r[t] -= q * r[i]

    def row_swap(i, t):
        if i == t:
            return
        ri, rt = work.pop(i, {}), work.pop(t, {})
        for j in set(ri) | set(rt):
            colidx[j].discard(i)
            colidx[j].discard(t)
        if rt:
            work[i] = rt
            for j in rt:
                colidx.setdefault(j, set()).add(i)
        if ri:
            work[t] = ri
            for j in ri:
                colidx.setdefault(j, set()).add(t)
        if U is not None:
            U[i], U[t] = U[t], U[i]
        if carried is not None:
            for v in carried:
                v[i], v[t] = v[t], v[i]
        if Uinv is not None:
            for r in Uinv:
                r[i], r[t] = r[t], r[i]

    def row_negate(i):
        for j, v in list(work.get(i, {}).items()):
            work[i][j] = -v
        if U is not None:
            U[i] = [-x for x in U[i]]
        if carried is not None:
            for v in carried:
                v[i] = -v[i]
        if Uinv is not None:
            for r in Uinv:
                r[i] = -r[i]

    def col_add(j, t, q):
        # col_j += q * col_t
        if not q:
            return
        for i in list(colidx.get(t, ())):
            setval(i, j, get(i, j) + q * get(i, t))
        if V is not None:
            for r in V:
                r[j] += q * r[t]
        if Vinv is not None:
            Vt, Vj = Vinv[t], Vinv[j]
            for kk in range(ncols):
                Vt[kk] -= q * Vj[kk]

    def col_swap(j, t):
        if j == t:
            return
        rows_j = set(colidx.get(j, ()))
        rows_t = set(colidx.get(t, ()))
        for i in rows_j | rows_t:
            row = work[i]
            vj, vt = row.get(j, 0), row.get(t, 0)
            if vt:
                row[j] = vt
            else:
                row.pop(j, None)
            if vj:
                row[t] = vj
            else:
                row.pop(t, None)
        colidx[j], colidx[t] = rows_t, rows_j
        if V is not None:
            for r in V:
                r[j], r[t] = r[t], r[j]
        if Vinv is not None:
            Vinv[j], Vinv[t] = Vinv[t], Vinv[j]

    limit = min(nrows, ncols)
    t = 0
    while t < limit:
        # Deterministic pivot: smallest magnitude, ties by (row, col).
        best = None
        for i, row in work.items():
            if i < t:
                continue
            for j, v in row.items():
                if j < t:
                    continue
                key = (abs(v), i, j)
                if best is None or key < best[0]:
                    best = (key, i, j)
        if best is None:
            break
        _, bi, bj = best
        row_swap(t, bi)
        col_swap(t, bj)
        while True:
            piv = get(t, t)
            for i in list(colidx.get(t, ())):
                if i == t:
                    continue
                row_add(i, t, -(get(i, t) // piv))
            for j in list(work.get(t, {})):
                if j == t:
                    continue
                col_add(j, t, -(get(t, j) // piv))
            below = [i for i in colidx.get(t, ()) if i != t and get(i, t)]
            beside = [j for j in work.get(t, {}) if j != t and get(t, j)]
            if not below and not beside:
                break
            # Leftover remainders are strictly smaller than the pivot;
            # promote the smallest so the pivot magnitude decreases.
            best = None
            for i in below:
                key = (abs(get(i, t)), i, t)
                if best is None or key < best[0]:
                    best = (key, i, t)
            for j in beside:
                key = (abs(get(t, j)), t, j)
                if best is None or key < best[0]:
                    best = (key, t, j)
            _, bi, bj = best
            row_swap(t, bi)
            col_swap(t, bj)
        t += 1

    ndiag = t
    # Divisibility chain fixup.
    changed = True
    while changed:
        changed = False
        for i in range(ndiag - 1):
            a, b = get(i, i), get(i + 1, i + 1)
            if b % a != 0:
                changed = True
                col_add(i, i + 1, 1)
                # Euclid on rows i, i+1 in column i, then clear.
                while get(i + 1, i):
                    q = get(i, i) // get(i + 1, i)
                    row_add(i, i + 1, -q)
                    if get(i, i):
                        row_swap(i, i + 1)
                    else:
                        break
                if get(i + 1, i):
                    row_swap(i, i + 1)
                piv = get(i, i)
                if get(i + 1, i):
                    row_add(i + 1, i, -(get(i + 1, i) // piv))
                if get(i, i + 1):
                    col_add(i + 1, i, -(get(i, i + 1) // piv))
    for i in range(ndiag):
        if get(i, i) < 0:
            row_negate(i)
    diag = [get(i, i) for i in range(ndiag)]
    assert all(diag[i] > 0 for i in range(ndiag))
    for i in range(ndiag - 1):
        assert diag[i + 1] % diag[i] == 0
    return SNFResult(diag=diag, rank=ndiag, nrows=nrows, ncols=ncols,
                     U=U if want_u else None, V=V if want_v else None,
                     Uinv=Uinv, Vinv=Vinv, carry=carried)


def kernel_basis_Z(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis of the integer kernel lattice {v : M v = 0} (as columns)."""
    snf = smith_normal_form(rows, ncols, want_v=True)
    return [[snf.V[i][j] for i in range(ncols)]
            for j in range(snf.rank, ncols)]


def solve_Z(rows: list[list[int]], b: list[int],
            ncols: int) -> list[int] | None:
    """Particular integer solution of M x = b, or None (SNF residue fails)."""
    snf = smith_normal_form(rows, ncols, want_v=True, carry=[b])
    c = snf.carry[0]
    y = [0] * ncols
    for i, d in enumerate(snf.diag):
        q, r = divmod(c[i], d)
        if r:
            return None
        y[i] = q
    if any(c[i] for i in range(snf.rank, len(c))):
        return None
    return mat_vec(snf.V, y)


@dataclass
class SolveResult:
    solution: list[int] | None
    certificate: dict | None  # SNF residue witnessing unsolvability

    @property
    def ok(self) -> bool:
        return self.solution is not None


def solve_in_image(rows: list[list[int]], b: list[int], ncols: int,
                   ring: RingSpec | None = None) -> SolveResult:
    """Particular solution of M x = b over the ring, or a certificate.

    Over Z the certificate records the first Smith-normal-form residue:
    either a diagonal entry that fails to divide the transformed
    right-hand side, or a nonzero coordinate beyond the rank.
    """
    if ring is not None and ring.is_modular:
        p = ring.p
        cols = [{i: row[j] % p for i, row in enumerate(rows) if row[j] % p}
                for j in range(ncols)]
        x = solve_mod_p(cols, {i: v % p for i, v in enumerate(b) if v % p}, p)
        cert = None if x is not None else {"reason": "not in column span"}
        return SolveResult(x, cert)
    snf = smith_normal_form(rows, ncols, want_v=True, carry=[b])
    c = snf.carry[0]
    y = [0] * ncols
    for i, d in enumerate(snf.diag):
        q, r = divmod(c[i], d)
        if r:
            return SolveResult(None, {"index": i, "divisor": d,
                                      "residue": r})
        y[i] = q
    for i in range(snf.rank, len(c)):
        if c[i]:
            return SolveResult(None, {"index": i, "divisor": 0,
                                      "residue": c[i]})
    return SolveResult(mat_vec(snf.V, y), None)


def lattice_basis(vectors: list[list[int]], dim: int) -> list[list[int]]:
    """Basis of the sublattice of Z^dim spanned by the given vectors."""
    if not vectors:
        return []
    rows = [[v[i] for v in vectors] for i in range(dim)]
    snf = smith_normal_form(rows, len(vectors), want_uinv=True)
    basis = []
    for i, d in enumerate(snf.diag):
        basis.append([d * snf.Uinv[r][i] for r in range(dim)])
    return basis


def kernel_into_presented(img_cols: list[list[int]],
                          rel_cols: list[list[int]],
                          dim: int) -> list[list[int]]:
    """Basis of {v in Z^s : sum_i v_i img_i lies in the lattice of relations}.

    ``img_cols`` and ``rel_cols`` are columns in Z^dim.
    """
    s, r = len(img_cols), len(rel_cols)
    if s == 0:
        return []
    rows = [[col[i] for col in img_cols] + [col[i] for col in rel_cols]
            for i in range(dim)]
    combined = kernel_basis_Z(rows, s + r)
    projected = [v[:s] for v in combined]
    # Relation columns may be dependent; the projection still spans the
    # solution lattice, so re-extract a basis.
    return lattice_basis(projected, s)


# ---------------------------------------------------------------------------
# GF(p) elimination with combination tracking

class ZpEliminator:
    """Sparse row space over GF(p).

    Rows are dicts column -> value.  Tagged insertions track how each
    stored pivot row decomposes over the tagged originals, which yields
    coordinate functionals on quotients.
    """

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, tuple[dict[int, int], dict]] = {}

    def _reduce(self, vec: dict[int, int], expr: dict) -> tuple[dict, dict]:
        p = self.p
        vec = {j: v % p for j, v in vec.items() if v % p}
        while vec:
            lead = min(vec)
            hit = self.pivots.get(lead)
            if hit is None:
                break
            prow, pexpr = hit
            f = vec[lead]
            for j, v in prow.items():
                nv = (vec.get(j, 0) - f * v) % p
                if nv:
                    vec[j] = nv
                else:
                    vec.pop(j, None)
            for tag, c in pexpr.items():
                nc = (expr.get(tag, 0) - f * c) % p
                if nc:
                    expr[tag] = nc
                else:
                    expr.pop(tag, None)
        return vec, expr

    def insert(self, vec: dict[int, int], tag=None) -> bool:
        """Insert a row; returns True when it enlarged the space."""
        expr = {} if tag is None else {tag: 1}
        vec, expr = self._reduce(vec, expr)
        if not vec:
            return False
        lead = min(vec)
        inv = pow(vec[lead], self.p - 2, self.p)
        vec = {j: (v * inv) % self.p for j, v in vec.items()}
        expr = {t: (c * inv) % self.p for t, c in expr.items()}
        self.pivots[lead] = (vec, expr)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: dict[int, int]) -> dict[int, int]:
        out, _ = self._reduce(dict(vec), {})
        return out

    def contains(self, vec: dict[int, int]) -> bool:
        return not self.reduce(vec)

    def express(self, vec: dict[int, int]) -> dict | None:
        """Write vec as a combination of tagged rows modulo untagged ones.

        Returns tag -> coefficient, negated to solve  vec = sum c_t row_t,
        or None when vec is not in the row space.
        """
        out, expr = self._reduce(dict(vec), {})
        if out:
            return None
        return {t: (-c) % self.p for t, c in expr.items()}


def solve_mod_p(cols: list[dict[int, int]], b: dict[int, int],
                p: int) -> list[int] | None:
    """Solve sum_i x_i col_i = b over GF(p); columns are sparse dicts."""
    elim = ZpEliminator(p)
    for i, col in enumerate(cols):
        elim.insert(col, tag=i)
    coeffs = elim.express(b)
    if coeffs is None:
        return None
    return [coeffs.get(i, 0) for i in range(len(cols))]


# ---------------------------------------------------------------------------
# finitely generated abelian groups

@dataclass(frozen=True)
class AbelianInvariants:
    rank: int
    torsion: tuple[int, ...]  # divisibility chain d1 | d2 | ..., each > 1

    @classmethod
    def from_coker(cls, diag: list[int], target_dim: int) -> "AbelianInvariants":
        tors = tuple(d for d in diag if d > 1)
        return cls(rank=target_dim - len(diag), torsion=tors)

    def torsion_part(self) -> "AbelianInvariants":
        return AbelianInvariants(0, self.torsion)

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def render(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self):
        return self.render()


# ---------------------------------------------------------------------------
# cohomology of a three-term complex

class ComplexSegment:
    """C^{k-1} --A--> C^k --B--> C^{k+1} with labeled bases, B A = 0."""

    def __init__(self, ring: RingSpec, lower: list, mid: list, upper: list,
                 A: list[list[int]], B: list[list[int]]):
        self.ring = ring
        self.lower, self.mid, self.upper = list(lower), list(mid), list(upper)
        self.A = A  # len(mid) rows x len(lower) cols
        self.B = B  # len(upper) rows x len(mid) cols
        prod = mat_mul(B, A) if (upper and lower) else []
        if any(any(ring.normalize(x) for x in row) for row in prod):
            raise ValueError("B*A != 0: not a complex segment")


class CohomologyData:
    """H^k of a segment: invariants, representative cocycles, coordinates.

    ``generators`` is a list of (order, representative) pairs, torsion
    generators first in divisibility order, then free generators; the
    representative is a dense vector over the middle basis.
    ``class_coords`` maps any cocycle vector to coordinates aligned with
    the generators (torsion coordinates reduced mod the order).
    """

    def __init__(self, ring, invariants, generators, coord_fn, mid_labels):
        self.ring = ring
        self.invariants = invariants
        self.generators = generators
        self._coord_fn = coord_fn
        self.mid_labels = mid_labels

    def class_coords(self, vec: list[int]) -> list[int]:
        return self._coord_fn(vec)

    @property
    def orders(self) -> list[int]:
        return [o for o, _ in self.generators]


def _cohomology_Z(seg: ComplexSegment) -> CohomologyData:
    nm, nl = len(seg.mid), len(seg.lower)
    if seg.upper:
        K = kernel_basis_Z(seg.B, nm)
    else:
        K = [[1 if i == j else 0 for i in range(nm)] for j in range(nm)]
    k = len(K)
    if k == 0:
        return CohomologyData(seg.ring, AbelianInvariants(0, ()), [],
                              lambda v: [], seg.mid)
    Krows = [[K[j][i] for j in range(k)] for i in range(nm)]
    ksnf = smith_normal_form(Krows, k, want_u=True, want_v=True)
    assert all(d == 1 for d in ksnf.diag) and ksnf.rank == k

    def in_kernel_coords(vec):
        c = mat_vec(ksnf.U, vec)
        if any(c[i] for i in range(k, nm)):
            raise ValueError("vector is not a cocycle")
        return mat_vec(ksnf.V, c[:k])

    cols = [in_kernel_coords([seg.A[i][j] for i in range(nm)])
            for j in range(nl)]
    Crows = [[cols[j][i] for j in range(nl)] for i in range(k)]
    csnf = smith_normal_form(Crows, nl, want_u=True, want_uinv=True)
    diag = csnf.diag
    gens = []
    order_slots = []
    for i, d in enumerate(diag):
        if d > 1:
            order_slots.append((i, d))
    for i in range(csnf.rank, k):
        order_slots.append((i, 0))
    for i, d in order_slots:
        w = [csnf.Uinv[r][i] for r in range(k)]
        rep = [sum(K[j][r] * w[j] for j in range(k)) for r in range(nm)]
        gens.append((d, rep))
    inv = AbelianInvariants(rank=k - csnf.rank,
                            torsion=tuple(d for _, d in order_slots if d))

    def coord_fn(vec):
        y = in_kernel_coords(vec)
        c = mat_vec(csnf.U, y)
        out = []
        for i, d in order_slots:
            out.append(c[i] % d if d else c[i])
        return out

    return CohomologyData(seg.ring, inv, gens, coord_fn, seg.mid)


def cohomology_sparse_zp(ring: RingSpec, n_mid: int,
                         a_cols: list[dict[int, int]],
                         b_cols: list[dict[int, int]] | None,
                         mid_labels=None) -> CohomologyData:
    """H = ker(B)/im(A) over GF(p) with sparse column input.

    ``b_cols[j]`` is the j-th column of B (upper-index -> value); None
    means B = 0.  ``a_cols`` are the columns of A in mid-coordinates.
    """
    p = ring.p
    ker: list[list[int]] = []
    if b_cols is not None:
        # A column expressible in earlier columns yields a kernel vector.
        elim = ZpEliminator(p)
        for j in range(n_mid):
            col = {i: v % p for i, v in b_cols[j].items() if v % p}
            combo = elim.express(col)
            if combo is not None:
                vec = [0] * n_mid
                vec[j] = 1
                for t, c in combo.items():
                    vec[t] = (-c) % p
                ker.append(vec)
            else:
                elim.insert(col, tag=j)
    else:
        ker = [[1 if i == j else 0 for i in range(n_mid)]
               for j in range(n_mid)]
    quotient = ZpEliminator(p)
    for col in a_cols:
        quotient.insert({i: v % p for i, v in col.items() if v % p})
    gens = []
    for v in ker:
        vec = {i: x % p for i, x in enumerate(v) if x % p}
        if quotient.insert(vec, tag=len(gens)):
            gens.append((p, list(v)))
    inv = AbelianInvariants(rank=0, torsion=tuple(p for _ in gens))

    def coord_fn(vec):
        sparse = {i: x % p for i, x in enumerate(vec) if x % p}
        combo = quotient.express(sparse)
        if combo is None:
            raise ValueError("vector is not a cocycle")
        return [combo.get(i, 0) for i in range(len(gens))]

    labels = mid_labels if mid_labels is not None else list(range(n_mid))
    return CohomologyData(ring, inv, gens, coord_fn, labels)


def _cohomology_Zp(seg: ComplexSegment) -> CohomologyData:
    p = seg.ring.p
    nm = len(seg.mid)
    b_cols = None
    if seg.upper:
        b_cols = [{} for _ in range(nm)]
        for i, row in enumerate(seg.B):
            for j, v in enumerate(row):
                if v % p:
                    b_cols[j][i] = v % p
    a_cols = [{i: seg.A[i][j] % p for i in range(nm) if seg.A[i][j] % p}
              for j in range(len(seg.lower))]
    return cohomology_sparse_zp(seg.ring, nm, a_cols, b_cols, seg.mid)


def cohomology_at(seg: ComplexSegment) -> CohomologyData:
    if seg.ring.is_modular:
        return _cohomology_Zp(seg)
    return _cohomology_Z(seg)


# ---------------------------------------------------------------------------
# map analysis

def dump_matrix(rows: list[list[int]], ncols: int | None = None) -> str:
    """Debug dump: `rows cols` then one `r c value` triple per entry."""
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    lines = [f"{nrows} {ncols}"]
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v:
                lines.append(f"{i} {j} {v}")
    return "\n".join(lines) + "\n"


@dataclass
class MapAnalysis:
    kernel: list[list[int]]
    image_rank: int
    cokernel: AbelianInvariants


def map_analysis(rows: list[list[int]], nrows: int, ncols: int) -> MapAnalysis:
    """Kernel basis, image rank, cokernel invariants of f: Z^ncols -> Z^nrows."""
    snf = smith_normal_form(rows, ncols, want_v=True)
    kernel = [[snf.V[i][j] for i in range(ncols)]
              for j in range(snf.rank, ncols)]
    coker = AbelianInvariants.from_coker(snf.diag, nrows)
    return MapAnalysis(kernel=kernel, image_rank=snf.rank, cokernel=coker)
