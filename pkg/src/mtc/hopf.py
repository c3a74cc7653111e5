"""Finite-dimensional ribbon Hopf algebras presented by exact structure
constants: verifiers for the axioms, Drinfeld doubles, mirrors, tensor
products, ribbon element enumeration, and a library of built-in presets.

Elements of H are column Matrices over the scalar field; elements of tensor
powers H^{x m} are sparse dicts {index tuple: Scalar}.
"""

import json

from .scalars import CycField, parse_scalar, format_scalar
from .linalg import Matrix, kron, solve_right, kernel_basis, NoSolution, invert
from .etale import (Subalgebra, orthogonal_primitive_idempotents,
                    poly_squarefree_k)
from .report import Report


class HopfError(Exception):
    pass


class HopfAlgebraData:
    """Structure constants of a finite-dimensional (quasitriangular, ribbon)
    Hopf algebra.

    mult[i][j] is the sparse product e_i e_j as {k: coeff}; comult[i] is the
    sparse Delta(e_i) as {(j, k): coeff}; rmatrix is sparse {(i, j): coeff};
    unit, counit, antipode, ribbon are dense matrices."""

    def __init__(self, field, dim, basis_labels, mult, unit, comult, counit,
                 antipode, rmatrix=None, ribbon=None, name="H"):
        self.field = field
        self.dim = dim
        self.basis_labels = list(basis_labels)
        self.mult = mult
        self.unit = unit
        self.comult = comult
        self.counit = counit
        self.antipode = antipode
        self.rmatrix = rmatrix
        self.ribbon = ribbon
        self.name = name
        assert len(basis_labels) == dim
        assert len(mult) == dim and all(len(row) == dim for row in mult)
        assert len(comult) == dim
        assert unit.rows == dim and unit.cols == 1
        assert counit.rows == 1 and counit.cols == dim
        assert antipode.rows == dim and antipode.cols == dim
        self._lmul_cache = {}
        self._cache = {}

    # -- element calculus -------------------------------------------------
    def basis_vec(self, i):
        v = Matrix.zeros(self.field, self.dim, 1)
        v.data[i] = self.field.one()
        return v

    def mul_vec(self, a, b):
        out = Matrix.zeros(self.field, self.dim, 1)
        for i in range(self.dim):
            x = a.data[i]
            if x.is_zero():
                continue
            for j in range(self.dim):
                y = b.data[j]
                if y.is_zero():
                    continue
                xy = x * y
                for k, c in self.mult[i][j].items():
                    out.data[k] = out.data[k] + xy * c
        return out

    def left_mult_matrix(self, a):
        m = Matrix.zeros(self.field, self.dim, self.dim)
        for i in range(self.dim):
            x = a.data[i]
            if x.is_zero():
                continue
            for j in range(self.dim):
                for k, c in self.mult[i][j].items():
                    m.data[k * self.dim + j] = m.data[k * self.dim + j] + x * c
        return m

    def right_mult_matrix(self, a):
        m = Matrix.zeros(self.field, self.dim, self.dim)
        for j in range(self.dim):
            y = a.data[j]
            if y.is_zero():
                continue
            for i in range(self.dim):
                for k, c in self.mult[i][j].items():
                    m.data[k * self.dim + i] = m.data[k * self.dim + i] + y * c
        return m

    def left_regular(self, i):
        """Matrix of left multiplication by e_i (the regular action)."""
        m = self._lmul_cache.get(i)
        if m is None:
            m = self.left_mult_matrix(self.basis_vec(i))
            self._lmul_cache[i] = m
        return m

    def inv_vec(self, a):
        try:
            return solve_right(self.left_mult_matrix(a), self.unit)
        except NoSolution:
            raise HopfError("element is not invertible")

    def counit_of(self, a):
        s = self.field.zero()
        for i in range(self.dim):
            if not a.data[i].is_zero():
                s = s + self.counit.data[i] * a.data[i]
        return s

    def antipode_of(self, a):
        return self.antipode * a

    # sparse tensor-power elements ----------------------------------------
    def vec_to_sparse(self, a):
        return {(i,): x for i, x in enumerate(a.data) if not x.is_zero()}

    def sparse_to_vec(self, s, m=1):
        assert m == 1
        v = Matrix.zeros(self.field, self.dim, 1)
        for (i,), c in s.items():
            v.data[i] = c
        return v

    def tensor_mul(self, x, y):
        """Product in H^{x m} of sparse elements (componentwise algebra)."""
        out = {}
        for ix, cx in x.items():
            for iy, cy in y.items():
                coeff = cx * cy
                terms = [{(): coeff}]
                parts = [self.mult[a][b] for a, b in zip(ix, iy)]
                idxs = [()]
                vals = [coeff]
                for p in parts:
                    nidx, nval = [], []
                    for base, v in zip(idxs, vals):
                        for k, c in p.items():
                            nidx.append(base + (k,))
                            nval.append(v * c)
                    idxs, vals = nidx, nval
                for t, v in zip(idxs, vals):
                    if t in out:
                        out[t] = out[t] + v
                    else:
                        out[t] = v
        return {t: v for t, v in out.items() if not v.is_zero()}

    def sparse_eq(self, x, y):
        keys = set(x) | set(y)
        z = self.field.zero()
        return all(x.get(k, z) == y.get(k, z) for k in keys)

    def comult_sparse(self, a):
        out = {}
        for i in range(self.dim):
            c = a.data[i]
            if c.is_zero():
                continue
            for (j, k), v in self.comult[i].items():
                key = (j, k)
                cv = c * v
                out[key] = out[key] + cv if key in out else cv
        return {t: v for t, v in out.items() if not v.is_zero()}

    def comult2_sparse(self, a):
        """(Delta x id) Delta a as {(p,q,r): coeff}."""
        out = {}
        for (j, k), v in self.comult_sparse(a).items():
            for (p, q), w in self.comult[j].items():
                key = (p, q, k)
                vw = v * w
                out[key] = out[key] + vw if key in out else vw
        return {t: v for t, v in out.items() if not v.is_zero()}

    def rmatrix_sparse(self):
        return dict(self.rmatrix)

    def unit_sparse(self, m=1):
        out = {}
        idxs = [()]
        vals = [self.field.one()]
        for _ in range(m):
            nidx, nval = [], []
            for base, v in zip(idxs, vals):
                for i, c in enumerate(self.unit.data):
                    if not c.is_zero():
                        nidx.append(base + (i,))
                        nval.append(v * c)
            idxs, vals = nidx, nval
        for t, v in zip(idxs, vals):
            out[t] = v
        return out

    # -- derived elements ---------------------------------------------------
    def drinfeld_u(self):
        """u = m (S x id) flip(R)."""
        u = Matrix.zeros(self.field, self.dim, 1)
        for (i, j), c in self.rmatrix.items():
            su = self.antipode * self.basis_vec(j)
            u = u + self.mul_vec(su, self.basis_vec(i)).scale(c)
        return u

    def pivot(self):
        """g = u v^{-1}, grouplike for an accepted ribbon element."""
        assert self.ribbon is not None, "no ribbon element chosen"
        return self.mul_vec(self.drinfeld_u(), self.inv_vec(self.ribbon))

    def monodromy_sparse(self):
        """R_21 R as a sparse element of H x H."""
        r = self.rmatrix
        r21 = {(j, i): c for (i, j), c in r.items()}
        return self.tensor_mul(r21, dict(r))

    def with_ribbon(self, v):
        h = HopfAlgebraData(self.field, self.dim, self.basis_labels, self.mult,
                            self.unit, self.comult, self.counit, self.antipode,
                            self.rmatrix, v, self.name)
        return h

    def __repr__(self):
        return "HopfAlgebraData(%s, dim=%d)" % (self.name, self.dim)


# ---------------------------------------------------------------------------
# verifiers

def verify_hopf_axioms(h):
    """Unital associative / counital coassociative / bialgebra / antipode
    axioms, checked by exact tensor contraction.  The report carries the
    first violating basis index tuple per failed axiom."""
    rep = Report("hopf axioms of %s" % h.name)
    f = h.field
    n = h.dim

    bad = None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                # (e_i e_j) e_k vs e_i (e_j e_k), sparse
                left = {}
                for m, c in h.mult[i][j].items():
                    for l, d in h.mult[m][k].items():
                        left[l] = left.get(l, f.zero()) + c * d
                right = {}
                for m, c in h.mult[j][k].items():
                    for l, d in h.mult[i][m].items():
                        right[l] = right.get(l, f.zero()) + c * d
                keys = set(left) | set(right)
                if any(left.get(t, f.zero()) != right.get(t, f.zero()) for t in keys):
                    bad = (i, j, k)
                    break
            if bad:
                break
        if bad:
            break
    rep.add("associativity", bad is None, None if bad is None else "basis triple %s" % (bad,))

    bad = None
    for i in range(n):
        if h.mul_vec(h.unit, h.basis_vec(i)) != h.basis_vec(i) or \
           h.mul_vec(h.basis_vec(i), h.unit) != h.basis_vec(i):
            bad = (i,)
            break
    rep.add("unit", bad is None, None if bad is None else "basis index %s" % (bad,))

    bad = None
    for i in range(n):
        lhs = {}
        for (j, k), v in h.comult[i].items():
            for (p, q), w in h.comult[j].items():
                key = (p, q, k)
                lhs[key] = lhs.get(key, f.zero()) + v * w
        rhs = {}
        for (j, k), v in h.comult[i].items():
            for (p, q), w in h.comult[k].items():
                key = (j, p, q)
                rhs[key] = rhs.get(key, f.zero()) + v * w
        keys = set(lhs) | set(rhs)
        if any(lhs.get(t, f.zero()) != rhs.get(t, f.zero()) for t in keys):
            bad = (i,)
            break
    rep.add("coassociativity", bad is None, None if bad is None else "basis index %s" % (bad,))

    bad = None
    for i in range(n):
        le = Matrix.zeros(f, n, 1)
        ri = Matrix.zeros(f, n, 1)
        for (j, k), v in h.comult[i].items():
            le.data[k] = le.data[k] + h.counit.data[j] * v
            ri.data[j] = ri.data[j] + h.counit.data[k] * v
        if le != h.basis_vec(i) or ri != h.basis_vec(i):
            bad = (i,)
            break
    rep.add("counit", bad is None, None if bad is None else "basis index %s" % (bad,))

    bad = None
    for i in range(n):
        for j in range(n):
            dprod = {}
            for k, c in h.mult[i][j].items():
                for t, v in h.comult[k].items():
                    dprod[t] = dprod.get(t, f.zero()) + c * v
            dd = h.tensor_mul(dict(h.comult[i]), dict(h.comult[j]))
            keys = set(dprod) | set(dd)
            if any(dprod.get(t, f.zero()) != dd.get(t, f.zero()) for t in keys):
                bad = (i, j)
                break
        if bad:
            break
    d_unit = h.comult_sparse(h.unit)
    if bad is None and not h.sparse_eq(d_unit, h.unit_sparse(2)):
        bad = ("Delta(1)",)
    rep.add("comultiplication is an algebra map", bad is None,
            None if bad is None else "basis pair %s" % (bad,))

    bad = None
    for i in range(n):
        for j in range(n):
            lhs = f.zero()
            for k, c in h.mult[i][j].items():
                lhs = lhs + c * h.counit.data[k]
            if lhs != h.counit.data[i] * h.counit.data[j]:
                bad = (i, j)
                break
        if bad:
            break
    if bad is None and h.counit_of(h.unit) != f.one():
        bad = ("eps(1)",)
    rep.add("counit is an algebra map", bad is None,
            None if bad is None else "basis pair %s" % (bad,))

    bad = None
    for i in range(n):
        left = Matrix.zeros(f, n, 1)
        right = Matrix.zeros(f, n, 1)
        for (j, k), v in h.comult[i].items():
            left = left + h.mul_vec(h.antipode * h.basis_vec(j), h.basis_vec(k)).scale(v)
            right = right + h.mul_vec(h.basis_vec(j), h.antipode * h.basis_vec(k)).scale(v)
        expect = h.unit.scale(h.counit.data[i])
        if left != expect or right != expect:
            bad = (i,)
            break
    rep.add("antipode", bad is None, None if bad is None else "basis index %s" % (bad,))
    return rep


def verify_quasitriangular(h):
    """R invertibility, both hexagon identities, and the almost-
    cocommutativity intertwining Delta^op = R Delta R^{-1}."""
    rep = Report("quasitriangular structure of %s" % h.name)
    f = h.field
    n = h.dim
    if h.rmatrix is None:
        rep.add("rmatrix present", False, "no R-matrix")
        return rep
    rep.add("rmatrix present", True)
    r = h.rmatrix_sparse()

    rinv = _invert_tensor2(h, r)
    rep.add("R invertible", rinv is not None)
    if rinv is None:
        return rep

    # (Delta x id) R = R13 R23
    lhs = {}
    for (i, j), c in r.items():
        for (p, q), v in h.comult[i].items():
            key = (p, q, j)
            lhs[key] = lhs.get(key, f.zero()) + c * v
    r13 = {(i, u, j): c * w for (i, j), c in r.items()
           for u, w in enumerate(h.unit.data) if not w.is_zero()}
    r23 = {(u, i, j): c * w for (i, j), c in r.items()
           for u, w in enumerate(h.unit.data) if not w.is_zero()}
    rhs = h.tensor_mul(r13, r23)
    rep.add("hexagon (Delta x id)R = R13 R23",
            h.sparse_eq({k: v for k, v in lhs.items() if not v.is_zero()}, rhs))

    # (id x Delta) R = R13 R12
    lhs = {}
    for (i, j), c in r.items():
        for (p, q), v in h.comult[j].items():
            key = (i, p, q)
            lhs[key] = lhs.get(key, f.zero()) + c * v
    r12 = {(i, j, u): c * w for (i, j), c in r.items()
           for u, w in enumerate(h.unit.data) if not w.is_zero()}
    rhs = h.tensor_mul(r13, r12)
    rep.add("hexagon (id x Delta)R = R13 R12",
            h.sparse_eq({k: v for k, v in lhs.items() if not v.is_zero()}, rhs))

    bad = None
    for i in range(n):
        dop = {(k, j): v for (j, k), v in h.comult[i].items()}
        lhs = h.tensor_mul(dop, r)
        rhs = h.tensor_mul(r, dict(h.comult[i]))
        if not h.sparse_eq(lhs, rhs):
            bad = (i,)
            break
    rep.add("Delta^op(a) R = R Delta(a)", bad is None,
            None if bad is None else "basis index %s" % (bad,))

    ce1 = Matrix.zeros(f, n, 1)
    ce2 = Matrix.zeros(f, n, 1)
    for (i, j), c in r.items():
        ce1.data[j] = ce1.data[j] + c * h.counit.data[i]
        ce2.data[i] = ce2.data[i] + c * h.counit.data[j]
    rep.add("(eps x id)R = 1 = (id x eps)R", ce1 == h.unit and ce2 == h.unit)
    return rep


def _invert_tensor2(h, r):
    """Inverse of a sparse element of H x H, or None."""
    n = h.dim
    lm = Matrix.zeros(h.field, n * n, n * n)
    for (i, j), c in r.items():
        li, lj = h.left_regular(i), h.left_regular(j)
        for a in range(n):
            for b in range(n):
                x = li.data[a * n + b]
                if x.is_zero():
                    continue
                for p in range(n):
                    for q in range(n):
                        y = lj.data[p * n + q]
                        if not y.is_zero():
                            idx = (a * n + p) * n * n + (b * n + q)
                            lm.data[idx] = lm.data[idx] + c * x * y
    one2 = Matrix.zeros(h.field, n * n, 1)
    for t, v in h.unit_sparse(2).items():
        one2.data[t[0] * n + t[1]] = v
    try:
        inv = solve_right(lm, one2)
    except NoSolution:
        return None
    inv_sparse = {}
    for a in range(n):
        for b in range(n):
            v = inv.data[a * n + b]
            if not v.is_zero():
                inv_sparse[(a, b)] = v
    if not h.sparse_eq(h.tensor_mul(r, inv_sparse), h.unit_sparse(2)):
        return None
    return inv_sparse


def verify_ribbon(h, rep=None):
    """Ribbon-element identities: centrality, invertibility, S(v) = v,
    eps(v) = 1, and (R21 R) Delta(v) = v x v."""
    if rep is None:
        rep = Report("ribbon structure of %s" % h.name)
    f = h.field
    if h.ribbon is None:
        rep.add("ribbon element present", False, "no ribbon element set; use solve_ribbon")
        return rep
    rep.add("ribbon element present", True)
    v = h.ribbon
    bad = None
    for i in range(h.dim):
        if h.mul_vec(v, h.basis_vec(i)) != h.mul_vec(h.basis_vec(i), v):
            bad = i
            break
    rep.add("v central", bad is None, None if bad is None else "basis index %d" % bad)
    try:
        h.inv_vec(v)
        rep.add("v invertible", True)
    except HopfError:
        rep.add("v invertible", False)
        return rep
    rep.add("S(v) = v", h.antipode * v == v)
    rep.add("eps(v) = 1", h.counit_of(v) == f.one())
    lhs = h.tensor_mul(h.monodromy_sparse(), h.comult_sparse(v))
    rep.add("(R21 R) Delta(v) = v x v", h.sparse_eq(lhs, _outer_sparse(h, v, v)))
    return rep


def _outer_sparse(h, a, b):
    out = {}
    for i, x in enumerate(a.data):
        if x.is_zero():
            continue
        for j, y in enumerate(b.data):
            if not y.is_zero():
                out[(i, j)] = x * y
    return out


def verify_all(h):
    rep = verify_hopf_axioms(h)
    rep.merge(verify_quasitriangular(h))
    if h.ribbon is not None:
        verify_ribbon(h, rep)
    return rep


# ---------------------------------------------------------------------------
# constructors

def mirror(h):
    """Same underlying Hopf algebra with R -> flip(R)^{-1} and v -> v^{-1}."""
    assert h.rmatrix is not None
    rflip = {(j, i): c for (i, j), c in h.rmatrix.items()}
    rinv = _invert_tensor2(h, rflip)
    assert rinv is not None, "R-matrix is not invertible"
    ribbon = h.inv_vec(h.ribbon) if h.ribbon is not None else None
    return HopfAlgebraData(h.field, h.dim, h.basis_labels, h.mult, h.unit,
                           h.comult, h.counit, h.antipode, rinv, ribbon,
                           "mirror(%s)" % h.name)


def change_field(h, target):
    """The same Hopf data over a larger cyclotomic field (N | M)."""
    if h.field is target:
        return h
    from .scalars import embed_scalar

    def emb_mat(m):
        return Matrix(target, m.rows, m.cols,
                      [embed_scalar(x, target) for x in m.data])

    mult = [[{k2: embed_scalar(c, target) for k2, c in cell.items()}
             for cell in row] for row in h.mult]
    comult = [{t: embed_scalar(c, target) for t, c in d.items()}
              for d in h.comult]
    rmat = None
    if h.rmatrix is not None:
        rmat = {t: embed_scalar(c, target) for t, c in h.rmatrix.items()}
    ribbon = emb_mat(h.ribbon) if h.ribbon is not None else None
    return HopfAlgebraData(target, h.dim, h.basis_labels, mult,
                           emb_mat(h.unit), comult, emb_mat(h.counit),
                           emb_mat(h.antipode), rmat, ribbon, h.name)


def tensor_hopf(h, k):
    """Componentwise Hopf structure on H x K with R = (R_H)_13 (R_K)_24 and
    v = v_H x v_K.  Operands over different cyclotomic fields are embedded
    into the lcm field."""
    if h.field is not k.field:
        from math import lcm
        target = CycField(lcm(h.field.order, k.field.order))
        h = change_field(h, target)
        k = change_field(k, target)
    f = h.field
    n, m = h.dim, k.dim
    dim = n * m
    labels = ["%s*%s" % (a, b) for a in h.basis_labels for b in k.basis_labels]

    def pid(i, j):
        return i * m + j

    mult = [[{} for _ in range(dim)] for _ in range(dim)]
    for i1 in range(n):
        for j1 in range(m):
            for i2 in range(n):
                for j2 in range(m):
                    d = mult[pid(i1, j1)][pid(i2, j2)]
                    for a, ca in h.mult[i1][i2].items():
                        for b, cb in k.mult[j1][j2].items():
                            d[pid(a, b)] = ca * cb
    unit = kron(h.unit, k.unit)
    comult = []
    for i in range(n):
        for j in range(m):
            d = {}
            for (a1, a2), va in h.comult[i].items():
                for (b1, b2), vb in k.comult[j].items():
                    d[(pid(a1, b1), pid(a2, b2))] = va * vb
            comult.append(d)
    counit = kron(h.counit, k.counit)
    antipode = kron(h.antipode, k.antipode)
    rmat = {}
    for (a1, a2), va in h.rmatrix.items():
        for (b1, b2), vb in k.rmatrix.items():
            rmat[(pid(a1, b1), pid(a2, b2))] = va * vb
    ribbon = None
    if h.ribbon is not None and k.ribbon is not None:
        ribbon = kron(h.ribbon, k.ribbon)
    return HopfAlgebraData(f, dim, labels, mult, unit, comult, counit,
                           antipode, rmat, ribbon,
                           "%s(x)%s" % (h.name, k.name))


def drinfeld_double(h):
    """The Drinfeld double D(H) on basis f_a x e_i (dual functions first),
    with the standard double multiplication and canonical R-matrix
    sum_i (1 x e_i) x (f^i x 1)."""
    f = h.field
    n = h.dim
    dim = n * n
    labels = ["%s*.%s" % (h.basis_labels[a], h.basis_labels[i])
              for a in range(n) for i in range(n)]

    def did(a, i):
        return a * n + i

    sinv = invert(h.antipode)

    # conj[p][r] entry (c, b): f_b(S^{-1}(e_r) e_c e_p)
    conj = {}

    def conj_coeff(p, r, c):
        key = (p, r, c)
        got = conj.get(key)
        if got is None:
            s = sinv.col_list(r)
            vec = Matrix.column(f, s)
            vec = h.mul_vec(vec, h.basis_vec(c))
            vec = h.mul_vec(vec, h.basis_vec(p))
            got = vec
            conj[key] = got
        return got

    # convolution on H*: f_a f_x = sum_c Delta(e_c)[(a,x)] f_c
    conv = [[None] * n for _ in range(n)]
    for c in range(n):
        for (a, x), v in h.comult[c].items():
            if conv[a][x] is None:
                conv[a][x] = {}
            conv[a][x][c] = conv[a][x].get(c, f.zero()) + v
    for a in range(n):
        for x in range(n):
            if conv[a][x] is None:
                conv[a][x] = {}

    mult = [[{} for _ in range(dim)] for _ in range(dim)]
    for i in range(n):
        d2 = h.comult2_sparse(h.basis_vec(i))
        for a in range(n):
            for b in range(n):
                for j in range(n):
                    acc = mult[did(a, i)][did(b, j)]
                    for (p, q, r), c in d2.items():
                        # middle functional: y -> f_b(S^{-1}(e_r) y e_p)
                        for cc in range(n):
                            w = conj_coeff(p, r, cc).data[b]
                            if w.is_zero():
                                continue
                            coeff = c * w
                            for aa, v in conv[a][cc].items():
                                coeff2 = coeff * v
                                for kk, u in h.mult[q][j].items():
                                    key = did(aa, kk)
                                    acc[key] = acc.get(key, f.zero()) + coeff2 * u
                    for key in [k for k, v in acc.items() if v.is_zero()]:
                        del acc[key]

    unit = kron(h.counit.transpose(), h.unit)

    # Delta_D(f_c x e_i) with H*^cop: sum m^c_{ab} (f_b x e_i1) x (f_a x e_i2)
    comult = []
    for c in range(n):
        for i in range(n):
            d = {}
            for a in range(n):
                for b in range(n):
                    v = h.mult[a][b].get(c)
                    if v is None:
                        continue
                    for (i1, i2), w in h.comult[i].items():
                        key = (did(b, i1), did(a, i2))
                        d[key] = d.get(key, f.zero()) + v * w
            comult.append({k: v for k, v in d.items() if not v.is_zero()})

    counit_entries = []
    for a in range(n):
        for i in range(n):
            counit_entries.append(h.unit.data[a] * h.counit.data[i])
    counit = Matrix.row(f, counit_entries)

    dd = HopfAlgebraData(f, dim, labels, mult, unit, comult, counit,
                         Matrix.identity(f, dim), None, None,
                         "D(%s)" % h.name)

    # antipode: S_D(f_c x e_i) = (eps x S(e_i)) *D (f_c S^{-1} x 1)
    antipode = Matrix.zeros(f, dim, dim)
    eta = h.unit
    eps_row = h.counit
    for c in range(n):
        for i in range(n):
            left = Matrix.zeros(f, dim, 1)
            sv = h.antipode.col_list(i)
            for a in range(n):
                for ii in range(n):
                    val = eps_row.data[a] * sv[ii]
                    if not val.is_zero():
                        left.data[did(a, ii)] = val
            right = Matrix.zeros(f, dim, 1)
            for b in range(n):
                w = sinv.data[c * n + b]
                if w.is_zero():
                    continue
                for ii in range(n):
                    val = w * eta.data[ii]
                    if not val.is_zero():
                        right.data[did(b, ii)] = right.data[did(b, ii)] + val
            col = dd.mul_vec(left, right)
            for t in range(dim):
                antipode.data[t * dim + did(c, i)] = col.data[t]
    dd.antipode = antipode

    rmat = {}
    for a in range(n):
        for bb, cb in enumerate(h.counit.data):
            if cb.is_zero():
                continue
            for cc, cu in enumerate(h.unit.data):
                if cu.is_zero():
                    continue
                key = (did(bb, a), did(a, cc))
                rmat[key] = rmat.get(key, f.zero()) + cb * cu
    dd.rmatrix = {k: v for k, v in rmat.items() if not v.is_zero()}
    return dd


# ---------------------------------------------------------------------------
# ribbon element enumeration

def solve_ribbon(h):
    """All ribbon elements of a quasitriangular H, in deterministic order.

    Every ribbon element is S-fixed, central, and squares to u S(u); the
    candidates are found by taking square roots of u S(u) in each local
    factor of the S-fixed part of the centre, then filtered by the counit
    and Delta(v) relations."""
    assert h.rmatrix is not None
    f = h.field
    n = h.dim
    u = h.drinfeld_u()
    c = h.mul_vec(u, h.antipode * u)

    # centre: [L_i - R_i] x = 0 for all i
    rows = []
    for i in range(n):
        d = h.left_regular(i) - h.right_mult_matrix(h.basis_vec(i))
        rows.append(d)
    stack = rows[0]
    for d in rows[1:]:
        stack = stack.vstack(d)
    stack = stack.vstack(h.antipode - Matrix.identity(f, n))
    zbasis = kernel_basis(stack)
    if not zbasis:
        return []
    sub = Subalgebra(f, h.mul_vec, zbasis, h.unit)
    idems = orthogonal_primitive_idempotents(
        f, h.mul_vec, zbasis, h.unit, require_split=False,
        block_name="S-fixed centre of %s" % h.name)
    idems.sort(key=lambda e: tuple(s.sort_key() for s in e.data))

    from .scalars import sqrt_in_field
    from fractions import Fraction
    per_factor = []
    for e in idems:
        corner = Subalgebra(f, h.mul_vec, zbasis, e)
        ce = h.mul_vec(c, e)
        q = corner.min_poly(ce)
        q_sf = poly_squarefree_k(q, f)
        if len(q_sf) - 1 != 1:
            # residue field strictly larger than the scalar field
            return []
        gamma = -(q_sf[0] * q_sf[1].inv())
        roots = sqrt_in_field(gamma)
        if not roots:
            return []
        # nilpotent part: n0 = ce/gamma - e; sqrt(e + n0) by binomial series
        n0 = ce.scale(gamma.inv()) - e
        series = e
        term = e
        kk = 1
        while True:
            term = h.mul_vec(term, n0)
            if term.is_zero():
                break
            coeff = _binom_half(kk)
            series = series + term.scale(f.from_rational(coeff))
            kk += 1
        branch = []
        for r in sorted(roots, key=lambda s: s.sort_key()):
            branch.append(h.mul_vec(series, e.scale(r)))
        per_factor.append(branch)

    candidates = [Matrix.zeros(f, n, 1)]
    for branch in per_factor:
        candidates = [cand + y for cand in candidates for y in branch]

    out = []
    mono = h.monodromy_sparse()
    for v in candidates:
        if h.counit_of(v) != f.one():
            continue
        lhs = h.tensor_mul(mono, h.comult_sparse(v))
        if not h.sparse_eq(lhs, _outer_sparse(h, v, v)):
            continue
        out.append(v)
    out.sort(key=lambda m: tuple(s.sort_key() for s in m.data))
    return out


def _binom_half(k):
    from fractions import Fraction
    num = Fraction(1)
    x = Fraction(1, 2)
    for i in range(k):
        num *= (x - i)
    from math import factorial
    return num / factorial(k)


# ---------------------------------------------------------------------------
# built-in presets

def builtin(name, params=None):
    """Verified preset algebras: group_algebra(orders), sweedler,
    drinfeld doubles thereof."""
    params = list(params) if params is not None else []
    if name == "group_algebra":
        orders = params if params else [2]
        return group_algebra(orders)
    if name == "sweedler":
        return sweedler()
    if name == "double_group_algebra":
        orders = params if params else [2]
        return drinfeld_double(group_algebra(orders))
    if name == "double_z2":
        return drinfeld_double(group_algebra([2]))
    if name == "double_sweedler":
        return drinfeld_double(sweedler())
    if name == "taft":
        return taft(params[0] if params else 3)
    if name == "double_taft":
        return drinfeld_double(taft(params[0] if params else 3))
    if name == "trivial":
        return group_algebra([1])
    raise HopfError("unknown builtin algebra %r" % name)


BUILTIN_NAMES = ["trivial", "group_algebra", "sweedler", "double_group_algebra",
                 "double_z2", "double_sweedler", "taft", "double_taft"]


def group_algebra(orders):
    """k[Z/n1 x ... x Z/nk] with the trivial R-matrix and ribbon v = 1."""
    from math import lcm
    order = 1
    for m in orders:
        assert m >= 1
        order = lcm(order, m)
    f = CycField(max(order, 1))
    elems = [()]
    for m in orders:
        elems = [t + (i,) for t in elems for i in range(m)]
    index = {t: i for i, t in enumerate(elems)}
    n = len(elems)
    labels = ["g" + "".join(str(x) for x in t) if t else "1" for t in elems]
    one = f.one()
    mult = [[{} for _ in range(n)] for _ in range(n)]
    for s in elems:
        for t in elems:
            p = tuple((a + b) % m for a, b, m in zip(s, t, orders))
            mult[index[s]][index[t]][index[p]] = one
    unit = Matrix.zeros(f, n, 1)
    unit.data[index[tuple(0 for _ in orders)]] = one
    comult = [{(i, i): one} for i in range(n)]
    counit = Matrix.row(f, [one] * n)
    antipode = Matrix.zeros(f, n, n)
    for s in elems:
        inv = tuple((-a) % m for a, m in zip(s, orders))
        antipode.data[index[inv] * n + index[s]] = one
    rmat = {(index[tuple(0 for _ in orders)],) * 2: one}
    h = HopfAlgebraData(f, n, labels, mult, unit, comult, counit, antipode,
                        rmat, unit.copy(),
                        "k[Z%s]" % "xZ".join(str(m) for m in orders))
    return h


def sweedler():
    """The 4-dimensional Sweedler algebra (g^2 = 1, x^2 = 0, xg = -gx) with
    its lambda = 0 quasitriangular structure and ribbon element 1."""
    f = CycField(4)
    one = f.one()
    mone = -one
    half = f.from_rational(1) / 2
    n = 4
    labels = ["1", "g", "x", "gx"]
    I, G, X, GX = 0, 1, 2, 3
    mult = [[{} for _ in range(n)] for _ in range(n)]

    def setm(i, j, terms):
        for k, c in terms:
            mult[i][j][k] = c

    setm(I, I, [(I, one)]); setm(I, G, [(G, one)]); setm(I, X, [(X, one)]); setm(I, GX, [(GX, one)])
    setm(G, I, [(G, one)]); setm(G, G, [(I, one)]); setm(G, X, [(GX, one)]); setm(G, GX, [(X, one)])
    setm(X, I, [(X, one)]); setm(X, G, [(GX, mone)]); setm(X, X, []); setm(X, GX, [])
    setm(GX, I, [(GX, one)]); setm(GX, G, [(X, mone)]); setm(GX, X, []); setm(GX, GX, [])
    unit = Matrix.column(f, [one, f.zero(), f.zero(), f.zero()])
    comult = [
        {(I, I): one},
        {(G, G): one},
        {(X, I): one, (G, X): one},
        {(GX, G): one, (I, GX): one},
    ]
    # Delta(gx) = Delta(g)Delta(x) = (g x g)(x x 1 + g x x) = gx x g + 1 x gx
    counit = Matrix.row(f, [one, one, f.zero(), f.zero()])
    antipode = Matrix.zeros(f, n, n)
    antipode.data[I * n + I] = one
    antipode.data[G * n + G] = one
    antipode.data[GX * n + X] = mone   # S(x) = -gx
    antipode.data[X * n + GX] = one    # S(gx) = S(x)S(g) = -gx g = x
    rmat = {(I, I): half, (I, G): half, (G, I): half, (G, G): -half}
    return HopfAlgebraData(f, n, labels, mult, unit, comult, counit, antipode,
                           rmat, unit.copy(), "sweedler")


def taft(n):
    """The Taft algebra of dimension n^2 over Q(zeta_n): g^n = 1, x^n = 0,
    g x g^{-1} = q x with q a primitive n-th root of unity, Delta(x) =
    x (x) 1 + g (x) x.  Not quasitriangular for n > 2; its Drinfeld double
    is, and is ribbon exactly for odd n."""
    assert n >= 2
    f = CycField(n)
    q = f.zeta(1)
    dim = n * n

    def idx(a, b):
        return (a % n) * n + b

    labels = ["g%dx%d" % (a, b) for a in range(n) for b in range(n)]
    mult = [[{} for _ in range(dim)] for _ in range(dim)]
    for a1 in range(n):
        for b1 in range(n):
            for a2 in range(n):
                for b2 in range(n):
                    if b1 + b2 >= n:
                        continue
                    # x^b1 g^a2 = q^{-b1 a2} g^a2 x^b1
                    mult[idx(a1, b1)][idx(a2, b2)][idx(a1 + a2, b1 + b2)] = \
                        q ** (-b1 * a2)
    unit = Matrix.zeros(f, dim, 1)
    unit.data[idx(0, 0)] = f.one()
    counit = Matrix.zeros(f, 1, dim)
    for a in range(n):
        counit.data[idx(a, 0)] = f.one()

    def pair_mul(u, v):
        out = {}
        for (p1, p2), cu in u.items():
            for (r1, r2), cv in v.items():
                c = cu * cv
                for k1, d1 in mult[p1][r1].items():
                    for k2, d2 in mult[p2][r2].items():
                        key = (k1, k2)
                        t = c * d1 * d2
                        out[key] = out[key] + t if key in out else t
        return {k: v for k, v in out.items() if not v.is_zero()}

    dg = {(idx(1, 0), idx(1, 0)): f.one()}
    dx = {(idx(0, 1), idx(0, 0)): f.one(), (idx(1, 0), idx(0, 1)): f.one()}
    comult = [None] * dim
    for a in range(n):
        for b in range(n):
            cur = {(idx(0, 0), idx(0, 0)): f.one()}
            for _ in range(a):
                cur = pair_mul(cur, dg)
            for _ in range(b):
                cur = pair_mul(cur, dx)
            comult[idx(a, b)] = cur

    # S(g) = g^{-1}, S(x) = -g^{-1} x; extend anti-multiplicatively
    def vec_mul(u, v):
        out = {}
        for p, cu in u.items():
            for r, cv in v.items():
                c = cu * cv
                for k, d in mult[p][r].items():
                    out[k] = out.get(k, f.zero()) + c * d
        return {k: v for k, v in out.items() if not v.is_zero()}

    sg = {idx(n - 1, 0): f.one()}
    sx = {idx(n - 1, 1): -f.one()}
    antipode = Matrix.zeros(f, dim, dim)
    for a in range(n):
        for b in range(n):
            cur = {idx(0, 0): f.one()}
            for _ in range(b):
                cur = vec_mul(cur, sx)
            for _ in range(a):
                cur = vec_mul(cur, sg)
            for k, v in cur.items():
                antipode.data[k * dim + idx(a, b)] = v
    return HopfAlgebraData(f, dim, labels, mult, unit, comult, counit,
                           antipode, None, None, "taft(%d)" % n)


# ---------------------------------------------------------------------------
# serialization (the algebra spec file format)

def to_json_dict(h):
    def fmt(s):
        return format_scalar(s)
    d = {
        "name": h.name,
        "scalar": {"cyclotomic_order": h.field.order},
        "dim": h.dim,
        "basis": list(h.basis_labels),
        "mult": sorted([i, j, k, fmt(c)] for i in range(h.dim) for j in range(h.dim)
                       for k, c in h.mult[i][j].items()),
        "unit": sorted([i, fmt(c)] for i, c in enumerate(h.unit.data) if not c.is_zero()),
        "comult": sorted([i, j, k, fmt(c)] for i in range(h.dim)
                         for (j, k), c in h.comult[i].items()),
        "counit": sorted([i, fmt(c)] for i, c in enumerate(h.counit.data) if not c.is_zero()),
        "antipode": sorted([j, i, fmt(h.antipode.data[i * h.dim + j])]
                           for i in range(h.dim) for j in range(h.dim)
                           if not h.antipode.data[i * h.dim + j].is_zero()),
        "rmatrix": sorted([i, j, fmt(c)] for (i, j), c in h.rmatrix.items()) if h.rmatrix else [],
    }
    if h.ribbon is not None:
        d["ribbon"] = sorted([i, fmt(c)] for i, c in enumerate(h.ribbon.data)
                             if not c.is_zero())
    return d


class AlgebraFormatError(Exception):
    pass


def from_json_dict(d):
    for fieldname in ["name", "scalar", "dim", "basis", "mult", "unit",
                      "comult", "counit", "antipode", "rmatrix"]:
        if fieldname not in d:
            raise AlgebraFormatError("missing field %r in algebra spec" % fieldname)
    if "cyclotomic_order" not in d["scalar"]:
        raise AlgebraFormatError("missing field 'scalar.cyclotomic_order'")
    f = CycField(int(d["scalar"]["cyclotomic_order"]))
    n = int(d["dim"])
    labels = list(d["basis"])
    if len(labels) != n:
        raise AlgebraFormatError("basis has %d labels, dim is %d" % (len(labels), n))

    def chk(i, what):
        i = int(i)
        if not 0 <= i < n:
            raise AlgebraFormatError("index %d out of range in %s" % (i, what))
        return i

    mult = [[{} for _ in range(n)] for _ in range(n)]
    for i, j, k, c in d["mult"]:
        mult[chk(i, "mult")][chk(j, "mult")][chk(k, "mult")] = parse_scalar(f, c)
    unit = Matrix.zeros(f, n, 1)
    for i, c in d["unit"]:
        unit.data[chk(i, "unit")] = parse_scalar(f, c)
    comult = [{} for _ in range(n)]
    for i, j, k, c in d["comult"]:
        comult[chk(i, "comult")][(chk(j, "comult"), chk(k, "comult"))] = parse_scalar(f, c)
    counit = Matrix.zeros(f, 1, n)
    for i, c in d["counit"]:
        counit.data[chk(i, "counit")] = parse_scalar(f, c)
    antipode = Matrix.zeros(f, n, n)
    for j, i, c in d["antipode"]:
        antipode.data[chk(i, "antipode") * n + chk(j, "antipode")] = parse_scalar(f, c)
    rmat = {}
    for i, j, c in d["rmatrix"]:
        rmat[(chk(i, "rmatrix"), chk(j, "rmatrix"))] = parse_scalar(f, c)
    ribbon = None
    if "ribbon" in d and d["ribbon"]:
        ribbon = Matrix.zeros(f, n, 1)
        for i, c in d["ribbon"]:
            ribbon.data[chk(i, "ribbon")] = parse_scalar(f, c)
    return HopfAlgebraData(f, n, labels, mult, unit, comult, counit, antipode,
                           rmat if rmat else None, ribbon, str(d["name"]))


def save_algebra(h, path):
    with open(path, "w") as fp:
        json.dump(to_json_dict(h), fp, indent=1, sort_keys=True)


def load_algebra(path):
    with open(path) as fp:
        try:
            d = json.load(fp)
        except json.JSONDecodeError as e:
            raise AlgebraFormatError("malformed JSON in %s: %s" % (path, e))
    return from_json_dict(d)
