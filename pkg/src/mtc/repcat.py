"""The module category of a Hopf algebra H: objects with per-basis-element
action matrices, intertwiner spaces, monoidal / rigid / braided / ribbon
structure, simples with projective covers, the Cartan matrix, and the
Grothendieck ring.
"""

import json

from .scalars import Scalar, parse_scalar, format_scalar
from .linalg import Matrix, kron, solve_right, kernel_basis, rank, NoSolution
from .etale import orthogonal_primitive_idempotents, _column_space_basis


class ModuleObject:
    """A finite-dimensional H-module: one action matrix per basis element of
    H."""

    def __init__(self, algebra, dim, action, name="X"):
        assert len(action) == algebra.dim
        for m in action:
            assert m.rows == dim and m.cols == dim
        self.algebra = algebra
        self.dim = dim
        self.action = action
        self.name = name

    def act(self, a):
        """Action matrix of an arbitrary element a of H."""
        out = Matrix.zeros(self.algebra.field, self.dim, self.dim)
        for i, c in enumerate(a.data):
            if not c.is_zero():
                out = out + self.action[i].scale(c)
        return out

    def validate(self):
        h = self.algebra
        f = h.field
        if self.act(h.unit) != Matrix.identity(f, self.dim):
            return False
        for i in range(h.dim):
            for j in range(h.dim):
                lhs = self.action[i] * self.action[j]
                rhs = Matrix.zeros(f, self.dim, self.dim)
                for k, c in h.mult[i][j].items():
                    rhs = rhs + self.action[k].scale(c)
                if lhs != rhs:
                    return False
        return True

    def fingerprint(self):
        key = []
        for m in self.action:
            for x in m.data:
                key.append(x.sort_key())
        return (self.dim, tuple(key))

    def __repr__(self):
        return "ModuleObject(%s, dim=%d)" % (self.name, self.dim)


class Morphism:
    """An intertwiner between modules, stored as a cod.dim x dom.dim
    matrix."""

    def __init__(self, dom, cod, matrix):
        assert matrix.rows == cod.dim and matrix.cols == dom.dim, \
            "matrix shape %dx%d does not match cod %d, dom %d" % (
                matrix.rows, matrix.cols, cod.dim, dom.dim)
        self.dom = dom
        self.cod = cod
        self.matrix = matrix

    def is_intertwiner(self, generators=None):
        h = self.dom.algebra
        idxs = generators if generators is not None else range(h.dim)
        for i in idxs:
            if self.matrix * self.dom.action[i] != self.cod.action[i] * self.matrix:
                return False
        return True

    def __mul__(self, other):
        assert other.cod.dim == self.dom.dim
        return Morphism(other.dom, self.cod, self.matrix * other.matrix)

    def __eq__(self, other):
        return self.matrix == other.matrix

    def tensor(self, other):
        return Morphism(tensor_obj(self.dom, other.dom),
                        tensor_obj(self.cod, other.cod),
                        kron(self.matrix, other.matrix))

    def __repr__(self):
        return "Morphism(%s -> %s)" % (self.dom.name, self.cod.name)


def identity_morphism(x):
    return Morphism(x, x, Matrix.identity(x.algebra.field, x.dim))


# ---------------------------------------------------------------------------
# basic objects

def trivial_module(h):
    f = h.field
    action = [Matrix.from_rows(f, [[h.counit.data[i]]]) for i in range(h.dim)]
    return ModuleObject(h, 1, action, "1")


def regular_module(h):
    action = [h.left_regular(i) for i in range(h.dim)]
    return ModuleObject(h, h.dim, action, "H")


def module_from_vectors(h, vectors, name, left_action=None):
    """Module spanned by coordinate vectors closed under the given left
    action (default: left multiplication in the regular module)."""
    if left_action is None:
        left_action = lambda i, v: h.mul_vec(h.basis_vec(i), v)
    basis = _column_space_basis(h.field, vectors)
    stack = basis[0]
    for b in basis[1:]:
        stack = stack.hstack(b)
    action = []
    for i in range(h.dim):
        img = None
        for j in range(len(basis)):
            col = left_action(i, basis[j])
            img = col if img is None else img.hstack(col)
        action.append(solve_right(stack, img))
    m = ModuleObject(h, len(basis), action, name)
    m.embedding = stack  # basis vectors inside the ambient coordinates
    return m


def tensor_obj(x, y):
    """Tensor product module via the comultiplication."""
    h = x.algebra
    f = h.field
    dim = x.dim * y.dim
    action = []
    for i in range(h.dim):
        m = Matrix.zeros(f, dim, dim)
        for (j, k), c in h.comult[i].items():
            m = m + kron(x.action[j], y.action[k]).scale(c)
        action.append(m)
    return ModuleObject(h, dim, action, "(%s x %s)" % (x.name, y.name))


def dual_obj(x):
    """Left dual: rho*(a) = rho(S(a))^T."""
    h = x.algebra
    action = []
    for i in range(h.dim):
        s = h.antipode.col_list(i)
        m = Matrix.zeros(h.field, x.dim, x.dim)
        for k, c in enumerate(s):
            if not c.is_zero():
                m = m + x.action[k].scale(c)
        action.append(m.transpose())
    return ModuleObject(h, x.dim, action, "%s*" % x.name)


def direct_sum(x, y):
    h = x.algebra
    f = h.field
    dim = x.dim + y.dim
    action = []
    for i in range(h.dim):
        m = Matrix.zeros(f, dim, dim)
        for a in range(x.dim):
            for b in range(x.dim):
                m[a, b] = x.action[i][a, b]
        for a in range(y.dim):
            for b in range(y.dim):
                m[x.dim + a, x.dim + b] = y.action[i][a, b]
        action.append(m)
    return ModuleObject(h, dim, action, "(%s + %s)" % (x.name, y.name))


# ---------------------------------------------------------------------------
# rigid structure

def ev_morphism(x):
    """ev: X* x X -> 1, xi x v -> xi(v)."""
    h = x.algebra
    f = h.field
    m = Matrix.zeros(f, 1, x.dim * x.dim)
    one = f.one()
    for a in range(x.dim):
        m.data[a * x.dim + a] = one
    return Morphism(tensor_obj(dual_obj(x), x), trivial_module(h), m)


def coev_morphism(x):
    """coev: 1 -> X x X*."""
    h = x.algebra
    f = h.field
    m = Matrix.zeros(f, x.dim * x.dim, 1)
    one = f.one()
    for a in range(x.dim):
        m.data[a * x.dim + a] = one
    return Morphism(trivial_module(h), tensor_obj(x, dual_obj(x)), m)


def ev_tilde_morphism(x):
    """ev~: X x X* -> 1, v x xi -> xi(g v), with g the pivot u v^{-1}."""
    h = x.algebra
    g = x.act(h.pivot())
    m = Matrix.zeros(h.field, 1, x.dim * x.dim)
    for b in range(x.dim):
        for a in range(x.dim):
            m.data[b * x.dim + a] = g.data[a * x.dim + b]
    return Morphism(tensor_obj(x, dual_obj(x)), trivial_module(h), m)


def coev_tilde_morphism(x):
    """coev~: 1 -> X* x X, 1 -> sum xi^i x g^{-1} e_i."""
    h = x.algebra
    ginv = x.act(h.inv_vec(h.pivot()))
    m = Matrix.zeros(h.field, x.dim * x.dim, 1)
    for i in range(x.dim):
        for j in range(x.dim):
            m.data[i * x.dim + j] = ginv.data[j * x.dim + i]
    return Morphism(trivial_module(h), tensor_obj(dual_obj(x), x), m)


def duality(x):
    return (ev_morphism(x), coev_morphism(x),
            ev_tilde_morphism(x), coev_tilde_morphism(x))


def pivot_morphism(x):
    """The canonical X -> X** given by the action of the pivot element."""
    h = x.algebra
    return Morphism(x, dual_obj(dual_obj(x)), x.act(h.pivot()))


def flip_matrix(field, dx, dy):
    m = Matrix.zeros(field, dx * dy, dx * dy)
    one = field.one()
    for i in range(dx):
        for j in range(dy):
            m.data[(j * dx + i) * dx * dy + (i * dy + j)] = one
    return m


def braiding(x, y):
    """beta_{X,Y} = flip . (action of R): x x y -> R2 y x R1 x."""
    h = x.algebra
    assert h.rmatrix is not None, "braiding needs a quasitriangular structure"
    f = h.field
    rm = Matrix.zeros(f, x.dim * y.dim, x.dim * y.dim)
    for (i, j), c in h.rmatrix.items():
        rm = rm + kron(x.action[i], y.action[j]).scale(c)
    return Morphism(tensor_obj(x, y), tensor_obj(y, x),
                    flip_matrix(f, x.dim, y.dim) * rm)


def braiding_inverse(x, y):
    """(beta_{X,Y})^{-1}: Y x X -> X x Y."""
    b = braiding(x, y)
    from .linalg import invert
    return Morphism(b.cod, b.dom, invert(b.matrix))


def twist_morphism(x):
    """theta_X = action of v^{-1}: the categorical twist matching the
    braiding convention (see ledger: the monodromy acts by R21 R, so the
    element satisfying Delta(v) = (R21 R)^{-1}(v x v) acts as the inverse
    twist)."""
    h = x.algebra
    assert h.ribbon is not None, "twist needs a ribbon element"
    return Morphism(x, x, x.act(h.inv_vec(h.ribbon)))


def twist_inverse_morphism(x):
    h = x.algebra
    assert h.ribbon is not None, "twist needs a ribbon element"
    return Morphism(x, x, x.act(h.ribbon))


# ---------------------------------------------------------------------------
# intertwiner spaces

def generating_indices(h):
    """A small set of basis indices generating H as a unital algebra."""
    cached = h._cache.get("generators")
    if cached is not None:
        return cached
    f = h.field
    gens = []
    span = [h.unit]

    def in_span(v, basis):
        stack = basis[0]
        for b in basis[1:]:
            stack = stack.hstack(b)
        try:
            solve_right(stack, v)
            return True
        except NoSolution:
            return False

    def closure(idxs):
        basis = [h.unit]
        frontier = [h.unit]
        while frontier:
            new = []
            for v in frontier:
                for i in idxs:
                    w = h.mul_vec(h.basis_vec(i), v)
                    if not w.is_zero() and not in_span(w, basis):
                        basis.append(w)
                        new.append(w)
            frontier = new
        return basis

    for i in range(h.dim):
        if in_span(h.basis_vec(i), span):
            continue
        gens.append(i)
        span = closure(gens)
        if len(span) == h.dim:
            break
    h._cache["generators"] = gens
    return gens


def hom_basis(x, y, generators=None, gen_elements=None):
    """Basis of Hom_H(X, Y), deterministic ordering.

    Intertwining is imposed against a generating set of the algebra
    (indices or explicit element vectors), which is equivalent to the full
    set of basis constraints."""
    h = x.algebra
    f = h.field
    if gen_elements is not None:
        pairs = [(x.act(v), y.act(v)) for v in gen_elements]
    else:
        if generators is None:
            generators = generating_indices(h)
        pairs = [(x.action[g], y.action[g]) for g in generators]
    dx, dy = x.dim, y.dim
    iy = Matrix.identity(f, dy)
    ix = Matrix.identity(f, dx)
    stack = None
    for ax, ay in pairs:
        c = kron(iy, ax.transpose()) - kron(ay, ix)
        stack = c if stack is None else stack.vstack(c)
    if stack is None:
        stack = Matrix.zeros(f, 1, dx * dy)
    basis = []
    for vec in kernel_basis(stack):
        m = Matrix(f, dy, dx, vec.data)
        basis.append(Morphism(x, y, m))
    return basis


def is_isomorphic_simple(x, y):
    """Isomorphism test for modules that are known simple."""
    if x.dim != y.dim:
        return False
    return len(hom_basis(x, y)) > 0


# ---------------------------------------------------------------------------
# simples, projective covers, Cartan matrix

class SimplesData:
    def __init__(self, algebra, simples, projectives, idempotents, cartan):
        self.algebra = algebra
        self.simples = simples
        self.projectives = projectives
        self.idempotents = idempotents
        self.cartan = cartan

    @property
    def count(self):
        return len(self.simples)

    def trivial_index(self):
        one = trivial_module(self.algebra)
        for i, s in enumerate(self.simples):
            if is_isomorphic_simple(s, one):
                return i
        raise AssertionError("trivial module missing from the simples")

    def dual_permutation(self):
        """The involution U -> U* on simple indices."""
        perm = []
        for s in self.simples:
            d = dual_obj(s)
            matches = [i for i, t in enumerate(self.simples)
                       if is_isomorphic_simple(t, d)]
            assert len(matches) == 1, "dual of a simple matched %d simples" % len(matches)
            perm.append(matches[0])
        return perm


def radical_basis(h):
    """Jacobson radical via the trace form of the regular representation
    (valid in characteristic zero)."""
    f = h.field
    n = h.dim
    sparse = []
    for i in range(n):
        li = h.left_regular(i)
        sparse.append([(a, b, li.data[a * n + b]) for a in range(n)
                       for b in range(n) if not li.data[a * n + b].is_zero()])
    gram = Matrix.zeros(f, n, n)
    for i in range(n):
        for j in range(n):
            lj = h.left_regular(j)
            t = f.zero()
            for a, b, v in sparse[i]:
                w = lj.data[b * n + a]
                if not w.is_zero():
                    t = t + v * w
            gram.data[i * n + j] = t
    return kernel_basis(gram)


class _Quotient:
    """A/rad with canonical representatives: coordinates reduced against the
    RREF of the radical."""

    def __init__(self, h):
        self.h = h
        f = h.field
        n = h.dim
        rad = radical_basis(h)
        self.rad = rad
        rows = []
        for v in rad:
            rows.append({i: x for i, x in enumerate(v.data) if not x.is_zero()})
        from .linalg import _rref
        pivots = _rref(rows, n)
        self.rad_rows = rows
        self.rad_pivots = pivots  # (row, col)
        self.pivot_cols = {c: r for r, c in pivots}
        self.free_cols = [j for j in range(n) if j not in self.pivot_cols]
        self.dim = len(self.free_cols)

    def reduce(self, v):
        """Canonical representative of v + rad."""
        out = list(v.data)
        for c, r in self.pivot_cols.items():
            x = out[c]
            if x.is_zero():
                continue
            for j, val in self.rad_rows[r].items():
                out[j] = out[j] - x * val
        return Matrix.column(self.h.field, out)

    def mul(self, a, b):
        return self.reduce(self.h.mul_vec(a, b))

    def basis(self):
        return [self.reduce(self.h.basis_vec(j)) for j in self.free_cols]


def simples_data(h):
    """Simple modules, projective covers, primitive idempotent data, and the
    Cartan matrix.  Raises NonSplitError when the scalar field does not
    split the semisimple quotient."""
    cached = h._cache.get("simples")
    if cached is not None:
        return cached
    f = h.field
    q = _Quotient(h)
    qbasis = _column_space_basis(f, q.basis())
    unit_bar = q.reduce(h.unit)
    prims = orthogonal_primitive_idempotents(
        f, q.mul, qbasis, unit_bar, require_split=True,
        block_name="semisimple quotient of %s" % h.name)

    # group into isomorphism classes: P ~ P' iff P Abar P' != 0
    classes = []
    for p in prims:
        placed = False
        for cls in classes:
            rep = cls[0]
            linked = False
            for b in qbasis:
                if not q.mul(q.mul(rep, b), p).is_zero():
                    linked = True
                    break
            if linked:
                cls.append(p)
                placed = True
                break
        if not placed:
            classes.append([p])

    entries = []
    for cls in classes:
        p = cls[0]
        simple_vectors = [q.mul(b, p) for b in qbasis]
        s = module_from_vectors(h, simple_vectors, "S?",
                                left_action=lambda i, v: q.mul(h.basis_vec(i), v))
        # lift the idempotent to H and take the projective cover H e
        e = _newton_lift_in_algebra(h, p)
        proj_vectors = [h.mul_vec(h.basis_vec(i), e) for i in range(h.dim)]
        pm = module_from_vectors(h, proj_vectors, "P?")
        entries.append((s, pm, e, len(cls)))

    # regular decomposition bookkeeping: multiplicity of P_i equals dim S_i
    for s, pm, e, mult in entries:
        assert mult == s.dim, "class size %d != dim of simple %d" % (mult, s.dim)
    assert sum(s.dim * pm.dim for s, pm, e, _ in entries) == h.dim

    entries.sort(key=lambda t: t[0].fingerprint())
    simples, projectives, idems = [], [], []
    for i, (s, pm, e, _) in enumerate(entries):
        s.name = "S%d" % i
        pm.name = "P%d" % i
        simples.append(s)
        projectives.append(pm)
        idems.append(e)

    m = len(simples)
    for i in range(m):
        assert len(hom_basis(simples[i], simples[i])) == 1, \
            "End(S%d) is not one-dimensional" % i
        for j in range(i + 1, m):
            assert len(hom_basis(simples[i], simples[j])) == 0, \
                "S%d and S%d are isomorphic" % (i, j)

    cartan = [[len(hom_basis(projectives[v], projectives[u]))
               for v in range(m)] for u in range(m)]
    sd = SimplesData(h, simples, projectives, idems, cartan)
    h._cache["simples"] = sd
    return sd


def _newton_lift_in_algebra(h, e):
    three = h.field.from_rational(3)
    two = h.field.from_rational(2)
    for _ in range(64):
        e2 = h.mul_vec(e, e)
        if e2 == e:
            return e
        e = e2.scale(three) - h.mul_vec(e2, e).scale(two)
    raise AssertionError("idempotent lifting did not converge")


def composition_factors(x, sd=None):
    """Multiset of simple indices with multiplicities [X : S_i], via
    dim Hom(P_i, X)."""
    if sd is None:
        sd = simples_data(x.algebra)
    mult = [len(hom_basis(p, x)) for p in sd.projectives]
    assert sum(m * s.dim for m, s in zip(mult, sd.simples)) == x.dim, \
        "composition series does not fill the module"
    return mult


def radical_filtration_factors(x, sd=None):
    """Same multiset, but computed through the radical filtration of X;
    used as the independent strategy in the invariants."""
    h = x.algebra
    if sd is None:
        sd = simples_data(h)
    q = _Quotient(h)
    f = h.field
    mult = [0] * sd.count

    cur = x
    while cur.dim > 0:
        # rad * cur spans
        vecs = []
        for r in q.rad:
            act = cur.act(r)
            for j in range(cur.dim):
                v = Matrix.column(f, act.col_list(j))
                if not v.is_zero():
                    vecs.append(v)
        sub_basis = _column_space_basis(f, vecs) if vecs else []
        layer = _quotient_module(cur, sub_basis)
        for i, s in enumerate(sd.simples):
            mult[i] += len(hom_basis(layer, s))
        if not sub_basis:
            break
        cur = _sub_module(cur, sub_basis)
    return mult


def _sub_module(x, basis):
    h = x.algebra
    stack = basis[0]
    for b in basis[1:]:
        stack = stack.hstack(b)
    action = [solve_right(stack, x.action[i] * stack) for i in range(h.dim)]
    return ModuleObject(h, len(basis), action, "%s'" % x.name)


def _quotient_module(x, sub_basis):
    """X / span(sub_basis) with induced action."""
    h = x.algebra
    f = h.field
    rows = [{i: v for i, v in enumerate(b.data) if not v.is_zero()}
            for b in sub_basis]
    from .linalg import _rref
    pivots = _rref(rows, x.dim)
    pivot_cols = {c: r for r, c in pivots}
    free = [j for j in range(x.dim) if j not in pivot_cols]

    def reduce_vec(data):
        out = list(data)
        for c, r in pivot_cols.items():
            v = out[c]
            if v.is_zero():
                continue
            for j, val in rows[r].items():
                out[j] = out[j] - v * val
        return [out[j] for j in free]

    action = []
    for i in range(h.dim):
        cols = []
        for j in free:
            cols.append(reduce_vec(x.action[i].col_list(j)))
        m = Matrix.zeros(f, len(free), len(free))
        for cj, col in enumerate(cols):
            for ri, v in enumerate(col):
                m[ri, cj] = v
        action.append(m)
    return ModuleObject(h, len(free), action, "%s/." % x.name)


def grothendieck_ring(h):
    """Structure constants N_ij^k = [S_i x S_j : S_k] on classes of
    simples."""
    cached = h._cache.get("grring")
    if cached is not None:
        return cached
    sd = simples_data(h)
    m = sd.count
    table = [[composition_factors(tensor_obj(sd.simples[i], sd.simples[j]), sd)
              for j in range(m)] for i in range(m)]
    h._cache["grring"] = table
    return table


# ---------------------------------------------------------------------------
# module serialization (same JSON-syntax format as algebras)

def module_to_json_dict(x):
    return {
        "name": x.name,
        "dim": x.dim,
        "action": sorted([k, i, j, format_scalar(x.action[k][i, j])]
                         for k in range(x.algebra.dim)
                         for i in range(x.dim) for j in range(x.dim)
                         if not x.action[k][i, j].is_zero()),
    }


def module_from_json_dict(h, d):
    for fieldname in ["name", "dim", "action"]:
        if fieldname not in d:
            raise ValueError("missing field %r in module spec" % fieldname)
    dim = int(d["dim"])
    action = [Matrix.zeros(h.field, dim, dim) for _ in range(h.dim)]
    for k, i, j, c in d["action"]:
        action[int(k)][int(i), int(j)] = parse_scalar(h.field, c)
    m = ModuleObject(h, dim, action, str(d["name"]))
    if not m.validate():
        raise ValueError("module action does not respect the algebra structure")
    return m


def save_module(x, path):
    with open(path, "w") as fp:
        json.dump(module_to_json_dict(x), fp, indent=1, sort_keys=True)


def load_module(h, path):
    with open(path) as fp:
        return module_from_json_dict(h, json.load(fp))
