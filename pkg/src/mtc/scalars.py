"""Exact scalars in a cyclotomic field Q(z_N), optionally extended by a
square root D of a field element (D^2 = zeta, fixed when the extension is
created).

Elements are stored as integer coordinate vectors over the Q-basis
{z^a} (a < phi(N)), or {z^a, z^a*D} when the extension is active, together
with a single positive denominator.  All arithmetic is exact.
"""

from fractions import Fraction
from math import gcd


def _poly_mul(p, q):
    r = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    r[i + j] += a * b
    return r


def _poly_divmod(p, q):
    # q monic, integer coefficients
    p = list(p)
    dq = len(q) - 1
    quo = [0] * max(1, len(p) - dq)
    while len(p) - 1 >= dq and any(p):
        k = len(p) - 1
        if p[k] == 0:
            p.pop()
            continue
        c = p[k]
        quo[k - dq] = c
        for j in range(dq + 1):
            p[k - dq + j] -= c * q[j]
        p.pop()
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return quo, p


def cyclotomic_poly(n):
    """Integer coefficient list (low degree first) of the n-th cyclotomic
    polynomial, computed by dividing x^n - 1 by the proper divisors."""
    assert n >= 1
    p = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q = cyclotomic_poly(d)
            p, rem = _poly_divmod(p, q)
            assert not any(rem)
    return p


class CycField:
    """Q(z_N), optionally extended by D with D^2 equal to a fixed element.

    dsquare, when present, is an integer coefficient tuple plus denominator
    describing an element of Q(z_N) itself (the modularity parameter).
    """

    _cache = {}

    def __new__(cls, order, dsquare=None):
        key = (order, dsquare)
        if key in cls._cache:
            return cls._cache[key]
        self = object.__new__(cls)
        self.order = order
        self.dsquare = dsquare  # ((int coeffs over phi basis), den) or None
        phi_poly = cyclotomic_poly(order)
        self.phi = len(phi_poly) - 1
        self.dim = self.phi * (2 if dsquare is not None else 1)
        # reduction of z^k for k up to 2*(phi-1): integer vectors of length phi
        red = []
        for k in range(2 * self.phi - 1):
            vec = [0] * max(k + 1, self.phi)
            vec[k] = 1
            _, rem = _poly_divmod(vec, phi_poly)
            rem = rem + [0] * (self.phi - len(rem))
            red.append(tuple(rem[: self.phi]))
        self._zred = red
        cls._cache[key] = self
        return self

    @property
    def extended(self):
        return self.dsquare is not None

    def __repr__(self):
        if self.extended:
            return "CycField(%d, D^2 adjoined)" % self.order
        return "CycField(%d)" % self.order

    # ------------------------------------------------------------------
    # construction of elements

    def scalar(self, num, den=1):
        return Scalar(self, tuple(num), den)

    def zero(self):
        return Scalar(self, (0,) * self.dim, 1)

    def one(self):
        v = [0] * self.dim
        v[0] = 1
        return Scalar(self, tuple(v), 1)

    def from_rational(self, q):
        q = Fraction(q)
        v = [0] * self.dim
        v[0] = q.numerator
        return Scalar(self, tuple(v), q.denominator)

    def zeta(self, power=1):
        """z^power as a field element (power taken mod N)."""
        power %= self.order
        acc = self.one()
        z = self._gen_zeta()
        for _ in range(power):
            acc = acc * z
        return acc

    def _gen_zeta(self):
        v = [0] * self.dim
        if self.phi == 1:
            # z is rational: z = root of Phi_N, degree 1 (N = 1 or 2)
            v[0] = 1 if self.order == 1 else -1
        else:
            v[1] = 1
        return Scalar(self, tuple(v), 1)

    def dgen(self):
        assert self.extended, "no D adjoined in this field"
        v = [0] * self.dim
        v[self.phi] = 1
        return Scalar(self, tuple(v), 1)

    def extend_sqrt(self, dsquare_scalar):
        """Return the extension Q(z_N)(D) with D^2 = dsquare_scalar."""
        assert not self.extended
        assert dsquare_scalar.field is self
        return CycField(self.order, (dsquare_scalar.num, dsquare_scalar.den))

    def promote(self, s):
        """Map a scalar of the unextended base field into this field."""
        if s.field is self:
            return s
        assert s.field.order == self.order and not s.field.extended
        v = list(s.num) + [0] * (self.dim - len(s.num))
        return Scalar(self, tuple(v), s.den)

    # multiplication of basis vectors: index a (z-degree) with optional D flag
    def _basis_mul(self, i, j):
        """Product of basis elements i and j as (int vector, den)."""
        phi = self.phi
        if not self.extended:
            return self._zred[i + j], 1
        ai, di = i % phi, i // phi
        aj, dj = j % phi, j // phi
        zpart = self._zred[ai + aj]
        if di + dj == 0:
            return tuple(zpart) + (0,) * phi, 1
        if di + dj == 1:
            return (0,) * phi + tuple(zpart), 1
        # D^2 = dsquare: multiply zpart by dsquare in Q(z)
        dnum, dden = self.dsquare
        prod = [0] * phi
        for a, ca in enumerate(zpart):
            if ca:
                for b, cb in enumerate(dnum):
                    if cb:
                        r = self._zred[a + b]
                        for k, ck in enumerate(r):
                            prod[k] += ca * cb * ck
        return tuple(prod) + (0,) * phi, dden


def _normalize(num, den):
    if den < 0:
        num = tuple(-x for x in num)
        den = -den
    g = den
    for x in num:
        g = gcd(g, x)
        if g == 1:
            break
    if g > 1:
        num = tuple(x // g for x in num)
        den //= g
    return num, den


class Scalar:
    """An element of a CycField.  Immutable, canonical form, decidable
    equality."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den=1):
        assert len(num) == field.dim
        num, den = _normalize(tuple(num), den)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Scalar is immutable")

    # -- predicates ----------------------------------------------------
    def is_zero(self):
        return not any(self.num)

    def is_one(self):
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def is_rational(self):
        return not any(self.num[1:])

    def as_fraction(self):
        assert self.is_rational(), "not a rational scalar: %s" % self
        return Fraction(self.num[0], self.den)

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is self.field:
                return self, other
            if self.field.extended and not other.field.extended:
                return self, self.field.promote(other)
            if other.field.extended and not self.field.extended:
                return other.field.promote(self), other
            raise TypeError("scalars from incompatible fields")
        if isinstance(other, (int, Fraction)):
            return self, self.field.from_rational(other)
        return self, NotImplemented

    def __add__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        da, db = a.den, b.den
        num = tuple(x * db + y * da for x, y in zip(a.num, b.num))
        return Scalar(a.field, num, da * db)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, tuple(-x for x in self.num), self.den)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        fld = a.field
        acc = [0] * fld.dim
        den = a.den * b.den
        extra_den = 1
        for i, x in enumerate(a.num):
            if not x:
                continue
            for j, y in enumerate(b.num):
                if not y:
                    continue
                vec, d = fld._basis_mul(i, j)
                if d == 1:
                    for k, c in enumerate(vec):
                        if c:
                            acc[k] += x * y * c
                else:
                    # bring accumulated terms over a common denominator lazily
                    if extra_den % d:
                        m = d // gcd(extra_den, d)
                        acc = [v * m for v in acc]
                        extra_den *= m
                    m = extra_den // d
                    for k, c in enumerate(vec):
                        if c:
                            acc[k] += x * y * c * m
        return Scalar(fld, tuple(acc), den * extra_den)

    __rmul__ = __mul__

    def inv(self):
        """Multiplicative inverse via the regular representation over Q."""
        if self.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        fld = self.field
        n = fld.dim
        # columns: self * basis_j, as fractions
        cols = []
        for j in range(n):
            unit = [0] * n
            unit[j] = 1
            b = Scalar(fld, tuple(unit), 1)
            p = self * b
            cols.append([Fraction(x, p.den) for x in p.num])
        # solve M y = e0 by Gaussian elimination over Fraction
        m = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = [Fraction(1 if i == 0 else 0) for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if m[r][col] != 0)
            m[col], m[piv] = m[piv], m[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
            inv = 1 / m[col][col]
            m[col] = [v * inv for v in m[col]]
            rhs[col] *= inv
            for r in range(n):
                if r != col and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [v - f * w for v, w in zip(m[r], m[col])]
                    rhs[r] -= f * rhs[col]
        den = 1
        for v in rhs:
            den = den * v.denominator // gcd(den, v.denominator)
        num = tuple(int(v * den) for v in rhs)
        return Scalar(fld, num, den)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return a * b.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k):
        assert isinstance(k, int)
        if k < 0:
            return self.inv() ** (-k)
        acc = self.field.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.field is not self.field:
            try:
                a, b = self._coerce(other)
            except TypeError:
                return False
            return a.num == b.num and a.den == b.den
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    # -- rational coordinate access (for the Q-linear algebra layer) ----
    def q_coords(self):
        """Coordinates over the Q-basis of the field, as Fractions."""
        return [Fraction(x, self.den) for x in self.num]

    @staticmethod
    def from_q_coords(field, coords):
        den = 1
        for c in coords:
            c = Fraction(c)
            den = den * c.denominator // gcd(den, c.denominator)
        num = tuple(int(Fraction(c) * den) for c in coords)
        return Scalar(field, num, den)

    # -- printing / parsing (the Scalar literal grammar) ----------------
    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return "Scalar(%s)" % format_scalar(self)

    def sort_key(self):
        return (self.den,) + self.num


def format_scalar(s):
    """Render per the literal grammar: sums of rational*z^k and rational*D
    terms.  z-degree ascending, D-part last."""
    fld = s.field
    phi = fld.phi
    terms = []
    for i, x in enumerate(s.num):
        if not x:
            continue
        a = i % phi
        dflag = i >= phi
        q = Fraction(x, s.den)
        rat = str(q.numerator) if q.denominator == 1 else "%d/%d" % (q.numerator, q.denominator)
        if a == 0:
            base = None
        elif a == 1:
            base = "z"
        else:
            base = "z^%d" % a
        if base is None and not dflag:
            terms.append(rat)
        else:
            tail = base if base is not None else ""
            if dflag:
                tail = tail + "*D" if tail else "D"
            if q == 1:
                terms.append(tail)
            elif q == -1:
                terms.append("-" + tail)
            else:
                terms.append(rat + "*" + tail)
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


class ScalarParseError(ValueError):
    pass


def parse_scalar(field, text):
    """Parse the Scalar literal grammar into an element of `field`.

    coeff    := polyterm { ('+'|'-') polyterm }
    polyterm := rational ['*' 'z' ['^' int]] | 'z' ['^' int]
              | rational ['*' 'D'] | 'D' | rational '*' 'z' ['^' int] '*' 'D'
              | 'z' ['^' int] '*' 'D'
    rational := int ['/' posint]
    """
    s = text.replace(" ", "")
    if not s:
        raise ScalarParseError("empty scalar literal")
    pos = 0
    total = field.zero()
    sign = 1
    if s[pos] in "+-":
        sign = -1 if s[pos] == "-" else 1
        pos += 1
    while True:
        term, pos = _parse_term(field, s, pos)
        total = total + (term if sign == 1 else -term)
        if pos == len(s):
            return total
        if s[pos] not in "+-":
            raise ScalarParseError("unexpected %r at column %d in %r" % (s[pos], pos, text))
        sign = -1 if s[pos] == "-" else 1
        pos += 1


def _parse_int(s, pos):
    start = pos
    if pos < len(s) and s[pos] in "+-":
        pos += 1
    while pos < len(s) and s[pos].isdigit():
        pos += 1
    if pos == start or not s[start:pos].lstrip("+-"):
        raise ScalarParseError("expected integer at column %d" % start)
    return int(s[start:pos]), pos


def _parse_term(field, s, pos):
    rat = Fraction(1)
    have_rat = False
    if pos < len(s) and (s[pos].isdigit() or s[pos] in "+-"):
        n, pos = _parse_int(s, pos)
        if pos < len(s) and s[pos] == "/":
            d, pos = _parse_int(s, pos + 1)
            if d <= 0:
                raise ScalarParseError("denominator must be positive")
            rat = Fraction(n, d)
        else:
            rat = Fraction(n)
        have_rat = True
        if pos < len(s) and s[pos] == "*":
            pos += 1
        else:
            return field.from_rational(rat), pos
    zpow = 0
    if pos < len(s) and s[pos] == "z":
        pos += 1
        zpow = 1
        if pos < len(s) and s[pos] == "^":
            zpow, pos = _parse_int(s, pos + 1)
        if pos < len(s) and s[pos] == "*":
            pos += 1
    elif not have_rat and not (pos < len(s) and s[pos] == "D"):
        raise ScalarParseError("expected term at column %d" % pos)
    dflag = False
    if pos < len(s) and s[pos] == "D":
        pos += 1
        dflag = True
    val = field.from_rational(rat)
    if zpow:
        val = val * field.zeta(zpow)
    if dflag:
        val = val * field.dgen()
    return val, pos


def embed_scalar(s, target):
    """Embed an element of Q(z_N) into Q(z_M) for N | M, sending z_N to
    z_M^(M/N)."""
    src = s.field
    if src is target:
        return s
    assert not src.extended and not target.extended, \
        "embedding of extended fields is not supported"
    assert target.order % src.order == 0, \
        "no canonical embedding of Q(z_%d) into Q(z_%d)" % (src.order, target.order)
    step = target.order // src.order
    acc = target.zero()
    zpow = target.one()
    z = target.zeta(step)
    for i, c in enumerate(s.num):
        if c:
            acc = acc + zpow * Fraction(c, s.den)
        zpow = zpow * z
    return acc


def sqrt_in_field(value):
    """All square roots of `value` inside its own field, sorted
    deterministically; empty when no root exists in the field.

    Works by splitting k[t]/(t^2 - value) as an etale Q-algebra.
    """
    from .etale import poly_roots_in_field
    if value.is_zero():
        return [value.field.zero()]
    f = value.field
    return poly_roots_in_field(f, [-value, f.zero(), f.one()])


def sqrt_adjoin(value):
    """A square root of `value`: the in-field root whose first nonzero
    coordinate is positive when one exists, else a fresh symbol D adjoined
    with D^2 = value.

    Returns (root scalar, field containing it)."""
    from .etale import sign_normalized_first
    roots = sqrt_in_field(value)
    if roots:
        return sign_normalized_first(roots), value.field
    assert not value.field.extended, "cannot stack a second square root extension"
    ext = value.field.extend_sqrt(value)
    return ext.dgen(), ext
