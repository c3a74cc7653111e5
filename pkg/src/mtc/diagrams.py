"""A textual string-diagram language for morphisms in the module category:
parser, typechecker, and evaluator.

Grammar (whitespace-insensitive):
    term   := factor {';' factor}          ';' reads bottom-to-top: f;g = g.f
    factor := atom {'*' atom}              '*' is the monoidal product
    atom   := gen '(' args ')' | '(' term ')'
    obj    := IDENT | obj '.dual' | obj 'x' obj | '(' obj ')'

Generators: id, ev, coev, evt, coevt, br, brinv, tw, twinv, box.
Object expressions are compared structurally up to tensor flattening; duals
of composites stay as-is (the canonical identifications are explicit boxes).
"""

from .linalg import Matrix, kron
from . import repcat


class DiagramError(Exception):
    def __init__(self, msg, pos=None):
        if pos is not None:
            msg = "%s (line %d, column %d)" % (msg, pos[0], pos[1])
        super().__init__(msg)
        self.pos = pos


class DiagramTypeError(DiagramError):
    pass


# -- AST --------------------------------------------------------------------

class Node:
    pass


class Gen(Node):
    def __init__(self, kind, args, pos=None):
        self.kind = kind
        self.args = args
        self.pos = pos

    def __repr__(self):
        return "%s(%s)" % (self.kind, ", ".join(map(str, self.args)))


class Compose(Node):
    def __init__(self, parts):
        self.parts = parts

    def __repr__(self):
        return " ; ".join(map(repr, self.parts))


class Tensor(Node):
    def __init__(self, parts):
        self.parts = parts

    def __repr__(self):
        return " * ".join("(%r)" % p for p in self.parts)


# object expressions: normalized form is a tuple of atoms;
# atom = ("name", str) | ("dual", normalized-tuple)

def obj_name(expr):
    out = []
    for a in expr:
        if a[0] == "name":
            out.append(a[1])
        else:
            inner = obj_name(a[1])
            out.append("(%s).dual" % inner if len(a[1]) != 1 else "%s.dual" % inner)
    return " x ".join(out) if out else "1"


def obj_dual(expr):
    return (("dual", expr),)


# -- tokenizer / parser -----------------------------------------------------

GENERATORS = {"id": 1, "ev": 1, "coev": 1, "evt": 1, "coevt": 1,
              "br": 2, "brinv": 2, "tw": 1, "twinv": 1, "box": 1}


class _Tok:
    def __init__(self, kind, val, pos):
        self.kind = kind
        self.val = val
        self.pos = pos


def _tokenize(text):
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            col += 1
            i += 1
            continue
        if c in "();*,":
            toks.append(_Tok(c, c, (line, col)))
            i += 1
            col += 1
            continue
        if c == "." and text[i:i + 5] == ".dual":
            toks.append(_Tok("dual", ".dual", (line, col)))
            i += 5
            col += 5
            continue
        if c.isalnum() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "x" if word == "x" else "ident"
            toks.append(_Tok(kind, word, (line, col)))
            col += j - i
            i = j
            continue
        raise DiagramError("unexpected character %r" % c, (line, col))
    toks.append(_Tok("eof", "", (line, col)))
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        t = self.toks[self.i]
        if kind is not None and t.kind != kind:
            raise DiagramError("expected %r, found %r" % (kind, t.val or "end of input"), t.pos)
        self.i += 1
        return t

    # term := factor {';' factor}
    def term(self):
        parts = [self.factor()]
        while self.peek().kind == ";":
            self.take()
            parts.append(self.factor())
        return parts[0] if len(parts) == 1 else Compose(parts)

    # factor := atom {'*' atom}
    def factor(self):
        parts = [self.atom()]
        while self.peek().kind == "*":
            self.take()
            parts.append(self.atom())
        return parts[0] if len(parts) == 1 else Tensor(parts)

    def atom(self):
        t = self.peek()
        if t.kind == "(":
            self.take()
            inner = self.term()
            self.take(")")
            return inner
        if t.kind == "ident" and t.val in GENERATORS:
            self.take()
            self.take("(")
            args = []
            if t.val == "box":
                name = self.take("ident")
                args.append(name.val)
            else:
                args.append(self.obj())
                while self.peek().kind == ",":
                    self.take()
                    args.append(self.obj())
            self.take(")")
            nargs = GENERATORS[t.val]
            if t.val != "box" and len(args) != nargs:
                raise DiagramError("%s expects %d object argument(s), got %d"
                                   % (t.val, nargs, len(args)), t.pos)
            return Gen(t.val, args, t.pos)
        raise DiagramError("expected a generator or '('", t.pos)

    # obj := objatom {'x' objatom}; objatom := (IDENT | '(' obj ')') {'.dual'}
    def obj(self):
        parts = [self.objatom()]
        while self.peek().kind == "x":
            self.take()
            parts.append(self.objatom())
        out = ()
        for p in parts:
            out = out + p
        return out

    def objatom(self):
        t = self.peek()
        if t.kind == "(":
            self.take()
            inner = self.obj()
            self.take(")")
            expr = inner
        elif t.kind == "ident":
            self.take()
            expr = (("name", t.val),)
        else:
            raise DiagramError("expected an object expression", t.pos)
        while self.peek().kind == "dual":
            self.take()
            expr = obj_dual(expr)
        return expr


def parse(text):
    """Parse a diagram expression; raises DiagramError with line/column on
    syntax errors."""
    p = _Parser(_tokenize(text))
    ast = p.term()
    if p.peek().kind != "eof":
        t = p.peek()
        raise DiagramError("unexpected %r after expression" % t.val, t.pos)
    return ast


# -- environment ------------------------------------------------------------

class Env:
    """Named objects (ModuleObjects) and boxes (Morphisms, or lazy column
    functions, with declared object expressions)."""

    def __init__(self, algebra):
        self.algebra = algebra
        self.objects = {}
        self.boxes = {}
        self.lazy_boxes = {}
        self._module_cache = {}

    def bind_object(self, name, module):
        self.objects[name] = module
        return self

    def bind_box(self, name, morphism, dom_expr, cod_expr):
        self.boxes[name] = (morphism, dom_expr, cod_expr)
        return self

    def bind_box_lazy(self, name, colfn, dom_expr, cod_expr):
        """A box given by a column function col_index -> [(row, Scalar)],
        for morphisms too large to materialize."""
        self.boxes[name] = (None, dom_expr, cod_expr)
        self.lazy_boxes[name] = colfn
        return self

    def dim_of(self, expr):
        """Dimension of an object expression, without materializing tensor
        products."""
        d = 1
        for atom in expr:
            if atom[0] == "name":
                if atom[1] not in self.objects:
                    raise DiagramTypeError("unbound object %r" % atom[1])
                d *= self.objects[atom[1]].dim
            else:
                d *= self.dim_of(atom[1])
        return d

    def module_of(self, expr):
        """Materialize an object expression as a ModuleObject."""
        if expr in self._module_cache:
            return self._module_cache[expr]
        if len(expr) == 0:
            m = repcat.trivial_module(self.algebra)
        elif len(expr) == 1:
            kind, payload = expr[0]
            if kind == "name":
                if payload not in self.objects:
                    raise DiagramTypeError("unbound object %r" % payload)
                m = self.objects[payload]
            else:
                m = repcat.dual_obj(self.module_of(payload))
        else:
            m = self.module_of(expr[:1])
            for k in range(1, len(expr)):
                m = repcat.tensor_obj(m, self.module_of(expr[k:k + 1]))
        self._module_cache[expr] = m
        return m


def _gen_types(gen, env):
    k = gen.kind
    if k == "box":
        name = gen.args[0]
        if name not in env.boxes:
            raise DiagramTypeError("unbound box %r" % name, gen.pos)
        _, dom, cod = env.boxes[name]
        return dom, cod
    a = gen.args[0]
    if k == "id":
        return a, a
    if k == "ev":
        return obj_dual(a) + a, ()
    if k == "coev":
        return (), a + obj_dual(a)
    if k == "evt":
        return a + obj_dual(a), ()
    if k == "coevt":
        return (), obj_dual(a) + a
    if k in ("tw", "twinv"):
        return a, a
    b = gen.args[1]
    if k == "br":
        return a + b, b + a
    if k == "brinv":
        return b + a, a + b
    raise AssertionError(k)


def typecheck(ast, env):
    """Domain and codomain object expressions; raises DiagramTypeError at
    the offending junction or on unresolved object names."""
    if isinstance(ast, Gen):
        dom, cod = _gen_types(ast, env)
        env.dim_of(dom)  # resolve names
        env.dim_of(cod)
        return dom, cod
    if isinstance(ast, Tensor):
        dom, cod = (), ()
        for p in ast.parts:
            d, c = typecheck(p, env)
            dom += d
            cod += c
        return dom, cod
    if isinstance(ast, Compose):
        dom, cod = typecheck(ast.parts[0], env)
        for p in ast.parts[1:]:
            d, c = typecheck(p, env)
            if d != cod:
                raise DiagramTypeError(
                    "composition mismatch: previous codomain %s, next domain %s"
                    % (obj_name(cod), obj_name(d)),
                    getattr(p, "pos", None) if isinstance(p, Gen) else None)
            cod = c
        return dom, cod
    raise AssertionError(type(ast))


# -- evaluation -------------------------------------------------------------

def _gen_matrix(gen, env):
    k = gen.kind
    if k == "box":
        mor = env.boxes[gen.args[0]][0]
        if mor is None:
            raise DiagramError("box %r is lazy; dense evaluation unavailable"
                               % gen.args[0])
        return mor.matrix
    x = env.module_of(gen.args[0])
    if k == "id":
        return Matrix.identity(env.algebra.field, x.dim)
    if k == "ev":
        return repcat.ev_morphism(x).matrix
    if k == "coev":
        return repcat.coev_morphism(x).matrix
    if k == "evt":
        return repcat.ev_tilde_morphism(x).matrix
    if k == "coevt":
        return repcat.coev_tilde_morphism(x).matrix
    if k == "tw":
        return repcat.twist_morphism(x).matrix
    if k == "twinv":
        return repcat.twist_inverse_morphism(x).matrix
    y = env.module_of(gen.args[1])
    if k == "br":
        return repcat.braiding(x, y).matrix
    if k == "brinv":
        return repcat.braiding_inverse(x, y).matrix
    raise AssertionError(k)


def evaluate(ast, env):
    """Compile the diagram to a Morphism (dense matrix)."""
    dom, cod = typecheck(ast, env)
    m = _eval_matrix(ast, env)
    return repcat.Morphism(env.module_of(dom), env.module_of(cod), m)


def _eval_matrix(ast, env):
    if isinstance(ast, Gen):
        return _gen_matrix(ast, env)
    if isinstance(ast, Tensor):
        m = _eval_matrix(ast.parts[0], env)
        for p in ast.parts[1:]:
            m = kron(m, _eval_matrix(p, env))
        return m
    if isinstance(ast, Compose):
        m = _eval_matrix(ast.parts[0], env)
        for p in ast.parts[1:]:
            m = _eval_matrix(p, env) * m
        return m
    raise AssertionError(type(ast))


# -- sparse applied evaluation ---------------------------------------------
#
# The coend construction evaluates diagram words on the regular module where
# dense composites are infeasible; instead the word is normalized into layers
# of tensored generators and applied column-by-column to a sparse block.

def _layers(ast, env):
    """Normalize into a list of layers; each layer is a list of
    (gen, dom_expr, cod_expr)."""
    if isinstance(ast, Gen):
        d, c = _gen_types(ast, env)
        return [[(ast, d, c)]], d, c
    if isinstance(ast, Compose):
        out = []
        dom = cod = None
        for p in ast.parts:
            ls, d, c = _layers(p, env)
            if dom is None:
                dom = d
            cod = c
            out.extend(ls)
        return out, dom, cod
    if isinstance(ast, Tensor):
        blocks = [_layers(p, env) for p in ast.parts]
        depth = max(len(b[0]) for b in blocks)
        for ls, d, c in blocks:
            while len(ls) < depth:
                ls.append([(Gen("id", [c]), c, c)])
        out = []
        for k in range(depth):
            layer = []
            for ls, d, c in blocks:
                layer.extend(ls[k])
            out.append(layer)
        dom = ()
        cod = ()
        for ls, d, c in blocks:
            dom += d
            cod += c
        return out, dom, cod
    raise AssertionError(type(ast))


def _matrix_colfn(matrix):
    """Column function from a dense matrix."""
    cols = {}
    for i in range(matrix.rows):
        base = i * matrix.cols
        for j in range(matrix.cols):
            v = matrix.data[base + j]
            if not v.is_zero():
                cols.setdefault(j, []).append((i, v))
    return lambda j: cols.get(j, [])


def _sparse_cols_of(matrix):
    cols = {}
    for j in range(matrix.cols):
        col = [(i, matrix.data[i * matrix.cols + j]) for i in range(matrix.rows)
               if not matrix.data[i * matrix.cols + j].is_zero()]
        cols[j] = col
    return cols


def _gen_colfn(gen, env):
    """(dom_dim, cod_dim, colfn|None) with colfn built factor-wise; never
    materializes tensor-product modules."""
    h = env.algebra
    f = h.field
    k = gen.kind
    if k == "box":
        name = gen.args[0]
        mor, d_expr, c_expr = env.boxes[name]
        din, dout = env.dim_of(d_expr), env.dim_of(c_expr)
        if name in env.lazy_boxes:
            return din, dout, env.lazy_boxes[name]
        return din, dout, _matrix_colfn(mor.matrix)
    if k == "id":
        d = env.dim_of(gen.args[0])
        return d, d, None
    x = env.module_of(gen.args[0])
    if k in ("tw", "twinv"):
        el = h.inv_vec(h.ribbon) if k == "tw" else h.ribbon
        return x.dim, x.dim, _matrix_colfn(x.act(el))
    if k == "ev":
        d = x.dim
        def ev_col(j, d=d):
            a, b = divmod(j, d)
            return [(0, f.one())] if a == b else []
        return d * d, 1, ev_col
    if k == "evt":
        g = x.act(h.pivot())
        d = x.dim
        def evt_col(j, d=d, g=g):
            b, a = divmod(j, d)
            v = g.data[a * d + b]
            return [] if v.is_zero() else [(0, v)]
        return d * d, 1, evt_col
    if k == "coev":
        d = x.dim
        def coev_col(j, d=d):
            assert j == 0
            return [(a * d + a, f.one()) for a in range(d)]
        return 1, d * d, coev_col
    if k == "coevt":
        ginv = x.act(h.inv_vec(h.pivot()))
        d = x.dim
        def coevt_col(j, d=d, m=ginv):
            assert j == 0
            out = []
            for i in range(d):
                for jj in range(d):
                    v = m.data[jj * d + i]
                    if not v.is_zero():
                        out.append((i * d + jj, v))
            return out
        return 1, d * d, coevt_col
    y = env.module_of(gen.args[1])
    if k == "br":
        xs = [_sparse_cols_of(x.action[i]) for i in range(h.dim)]
        ys = [_sparse_cols_of(y.action[i]) for i in range(h.dim)]
        rterms = [(i, j, c) for (i, j), c in h.rmatrix.items()]
        dx, dy = x.dim, y.dim
        cache = {}
        def br_col(col, dx=dx, dy=dy):
            got = cache.get(col)
            if got is not None:
                return got
            i, j = divmod(col, dy)
            acc = {}
            for r1, r2, c in rterms:
                for ii, vx in xs[r1].get(i, []):
                    cvx = c * vx
                    for jj, vy in ys[r2].get(j, []):
                        key = jj * dx + ii
                        w = cvx * vy
                        acc[key] = acc[key] + w if key in acc else w
            got = [(p, v) for p, v in acc.items() if not v.is_zero()]
            cache[col] = got
            return got
        return dx * dy, dx * dy, br_col
    if k == "brinv":
        # beta_{X,Y}^{-1}(y (x) x) = sum (R^{-1})_1 x (x) (R^{-1})_2 y,
        # with R^{-1} = (S x id)(R)
        rinv = []
        for (i, j), c in h.rmatrix.items():
            s = h.antipode.col_list(i)
            for kk, sc in enumerate(s):
                if not sc.is_zero():
                    rinv.append((kk, j, c * sc))
        xs = [_sparse_cols_of(x.action[i]) for i in range(h.dim)]
        ys = [_sparse_cols_of(y.action[i]) for i in range(h.dim)]
        dx, dy = x.dim, y.dim
        cache = {}
        def brinv_col(col, dx=dx, dy=dy):
            got = cache.get(col)
            if got is not None:
                return got
            j, i = divmod(col, dx)
            acc = {}
            for r1, r2, c in rinv:
                for ii, vx in xs[r1].get(i, []):
                    cvx = c * vx
                    for jj, vy in ys[r2].get(j, []):
                        key = ii * dy + jj
                        w = cvx * vy
                        acc[key] = acc[key] + w if key in acc else w
            got = [(p, v) for p, v in acc.items() if not v.is_zero()]
            cache[col] = got
            return got
        return dx * dy, dx * dy, brinv_col
    raise AssertionError(k)


def evaluate_applied(ast, env, columns):
    """Apply the diagram word to sparse column vectors.

    `columns` is a list of dicts {flat domain index: Scalar}; returns the
    transformed list (flat codomain indices) plus the codomain dimension."""
    layers, dom, cod = _layers(ast, env)
    atom_cache = {}

    def atom_data(gen, d_expr, c_expr):
        key = (gen.kind,) + (tuple(gen.args) if gen.kind == "box" else
                             (tuple(d_expr), tuple(c_expr)))
        got = atom_cache.get(key)
        if got is None:
            got = _gen_colfn(gen, env)
            atom_cache[key] = got
        return got

    cur = columns
    for layer in layers:
        atoms = [atom_data(g, d, c) for g, d, c in layer]
        dims_in = [a[0] for a in atoms]
        dims_out = [a[1] for a in atoms]
        new = []
        for col in cur:
            out = {}
            for flat, val in col.items():
                idxs = []
                rest = flat
                for dd in reversed(dims_in):
                    idxs.append(rest % dd)
                    rest //= dd
                idxs.reverse()
                parts = []
                ok = True
                for (din, dout, colfn), sub in zip(atoms, idxs):
                    if colfn is None:
                        parts.append([(sub, None)])
                        continue
                    hits = colfn(sub)
                    if not hits:
                        ok = False
                        break
                    parts.append(hits)
                if not ok:
                    continue
                acc = [(0, val)]
                for hits, dout in zip(parts, dims_out):
                    nxt = []
                    for base, v in acc:
                        for row, w in hits:
                            nv = v if w is None else v * w
                            nxt.append((base * dout + row, nv))
                    acc = nxt
                for pos, v in acc:
                    if pos in out:
                        out[pos] = out[pos] + v
                    else:
                        out[pos] = v
            new.append({p: v for p, v in out.items() if not v.is_zero()})
        cur = new
    return cur, env.dim_of(cod)
