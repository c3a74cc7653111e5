"""Independent brute-force oracles for the derived expected values.  These
deliberately avoid the library's own computation paths."""

from fractions import Fraction

import sympy

from mtc.linalg import Matrix, kernel_basis


def rank_oracle_fraction(rows):
    """Row-reduction rank over Fraction lists (independent of mtc.linalg)."""
    rows = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        rank += 1
    return rank


def partial_trace_left_oracle(entries, d, k):
    """Brute-force index sum for the left partial trace of a (d*k)-square
    matrix given as a dict {(row, col): value}."""
    out = {}
    for a in range(k):
        for b in range(k):
            s = 0
            for i in range(d):
                s += entries.get((i * k + a, i * k + b), 0)
            out[(a, b)] = s
    return out


def brute_ribbon_elements(h):
    """All v with v central, S(v) = v, eps(v) = 1 and (R21 R) Delta(v) =
    v (x) v, found by a sympy solve of the full quadratic system over the
    S-fixed centre.  Returns coordinate vectors as Matrix columns."""
    f = h.field
    n = h.dim
    rows = None
    for i in range(n):
        d = h.left_regular(i) - h.right_mult_matrix(h.basis_vec(i))
        rows = d if rows is None else rows.vstack(d)
    rows = rows.vstack(h.antipode - Matrix.identity(f, n))
    zb = kernel_basis(rows)
    m = len(zb)
    ts = sympy.symbols("t0:%d" % m)
    I = sympy.I

    def to_sym(s):
        co = s.q_coords()
        if f.phi == 1:
            return sympy.Rational(co[0].numerator, co[0].denominator)
        assert f.order == 4, "oracle only supports Q and Q(i) scalars"
        return sympy.Rational(co[0].numerator, co[0].denominator) + \
            I * sympy.Rational(co[1].numerator, co[1].denominator)

    v = [sum(ts[a] * to_sym(zb[a].data[i]) for a in range(m)) for i in range(n)]
    eqs = [sum(v[i] * to_sym(h.counit.data[i]) for i in range(n)) - 1]
    mono = h.monodromy_sparse()
    dv = {}
    for i in range(n):
        for (j, k), c in h.comult[i].items():
            dv[(j, k)] = dv.get((j, k), 0) + v[i] * to_sym(c)
    mdv = {}
    for (a, b), cm in mono.items():
        cs = to_sym(cm)
        for (j, k), val in dv.items():
            for p, c1 in h.mult[a][j].items():
                for q, c2 in h.mult[b][k].items():
                    mdv[(p, q)] = mdv.get((p, q), 0) + \
                        cs * to_sym(c1) * to_sym(c2) * val
    for p in range(n):
        for q in range(n):
            eqs.append(sympy.expand(mdv.get((p, q), 0) - v[p] * v[q]))
    sols = sympy.solve(eqs, list(ts), dict=True)
    out = []
    for sol in sols:
        vec = Matrix.zeros(f, n, 1)
        for a in range(m):
            val = sympy.nsimplify(sol.get(ts[a], 0))
            val = sympy.expand(val)
            re, im = val.as_real_imag()
            re = Fraction(sympy.Rational(re).p, sympy.Rational(re).q)
            im = Fraction(sympy.Rational(im).p, sympy.Rational(im).q)
            if f.phi == 1:
                assert im == 0
                coeff = f.from_rational(re)
            else:
                coeff = f.from_rational(re) + f.zeta() * f.from_rational(im)
            vec = vec + zb[a].scale(coeff)
        out.append(vec)
    return out


def group_double_table_z2():
    """Hand multiplication table of D(k[Z/2]) = F(Z/2) (x) k[Z/2]: basis
    delta_a (x) g^b with pointwise product on functions."""
    table = {}
    for a1 in range(2):
        for b1 in range(2):
            for a2 in range(2):
                for b2 in range(2):
                    i = a1 * 2 + b1
                    j = a2 * 2 + b2
                    # (delta_{a1} g^{b1})(delta_{a2} g^{b2}):
                    # group Z/2 acts trivially, so delta_{a1} delta_{a2}
                    # = [a1 == a2] delta_{a1}
                    if a1 == a2:
                        table[(i, j)] = a1 * 2 + ((b1 + b2) % 2)
    return table
