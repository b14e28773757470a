"""The two-step tower K2 = K0(x1, x2) with exact valuation.

Elements are stored on the multiplication-friendly monomial basis
x1^i x2^j (0 <= i, j < p) with K0 coefficients; products reduce through
the defining relations

    x1^p = x1 + a1,        x2^p = x2 + a2 + D(x1, a1).

Valuations are read off on the valuation-friendly basis x1^i y2^j where
y2 = x2 - mu*x1: the monomial valuations -i*p*b1 - j*b2 are pairwise
distinct modulo p^2 (b2 = b1 mod p^2 and gcd(b1, p) = 1), so the minimum
over terms is exact.  The two bases are exchanged by the triangular
substitutions x2 = y2 + mu*x1 and y2 = x2 - mu*x1.
"""

from __future__ import annotations

from math import comb

from .errors import (
    IndeterminateValuation,
    InvariantViolation,
    NoConvergence,
    NotInBaseField,
    PrecisionExhausted,
)
from .padic import BaseField, K0Element


class ExtensionDesc:
    """Parameters of a cyclic degree-p^2 extension built from a length-2
    Witt vector (a1, a2) with a2 = mu^p * a1.

    Carries the break numbers b1 = -v0(a1), m = -v0(mu), b2 = p^2*m + b1
    and the reduction data shared by all K2 elements.  Construction
    checks the structural identities but not the analytic parameter
    bounds; see :mod:`wittscaffold.construction` for those.
    """

    __slots__ = (
        "base",
        "a1",
        "mu",
        "a2",
        "b1",
        "m",
        "b2",
        "target_v2",
        "lift_target",
        "x2_rel",
        "_zero",
        "_one",
    )

    def __init__(self, base: BaseField, a1: K0Element, mu: K0Element,
                 target_v2: int | None = None):
        p = base.p
        self.base = base
        self.a1 = a1
        self.mu = mu
        self.a2 = mu**p * a1
        self.b1 = -a1.valuation()
        self.m = -mu.valuation()
        if self.b1 <= 0:
            raise InvariantViolation("a1 must have negative valuation")
        if self.m <= 0:
            raise InvariantViolation("mu must have negative valuation")
        if self.b1 % p == 0:
            raise InvariantViolation("p must not divide v0(a1)")
        self.b2 = p * p * self.m + self.b1
        self.target_v2 = target_v2 if target_v2 is not None else 2 * p * p * base.e0
        # roots are lifted beyond the working target so that operator
        # identities still hold at the target on elements of deeply
        # negative valuation
        self.lift_target = self.target_v2 + 2 * p * p * base.e0
        # coefficients of a2 + D(x1, a1) as a polynomial in x1
        rel = [self.a2]
        for k in range(1, p):
            rel.append(a1 ** (p - k) * (-(comb(p, k) // p)))
        self.x2_rel = tuple(rel)
        self._zero = base.zero()
        self._one = base.one()
        residues = {(-i * p * self.b1 - j * self.b2) % (p * p)
                    for i in range(p) for j in range(p)}
        if len(residues) != p * p:
            raise InvariantViolation("monomial valuations do not cover Z/p^2")

    @property
    def p(self) -> int:
        return self.base.p

    def degree(self) -> int:
        return self.p * self.p

    # -- element factories ---------------------------------------------

    def zero(self) -> "K2Element":
        return K2Element.from_scalar(self, self._zero)

    def one(self) -> "K2Element":
        return K2Element.from_scalar(self, self._one)

    def from_k0(self, c: K0Element) -> "K2Element":
        return K2Element.from_scalar(self, c)

    def from_int(self, n: int) -> "K2Element":
        return K2Element.from_scalar(self, self.base.from_int(n))

    def x1(self) -> "K2Element":
        rows = self._empty_rows()
        rows[1][0] = self._one
        return K2Element(self, rows)

    def x2(self) -> "K2Element":
        rows = self._empty_rows()
        rows[0][1] = self._one
        return K2Element(self, rows)

    def y2(self) -> "K2Element":
        return self.x2() - self.from_k0(self.mu) * self.x1()

    def pi0(self, k: int = 1) -> "K2Element":
        return self.from_k0(self.base.pi0(k))

    def monomial(self, k: int, i: int, j: int) -> "K2Element":
        """pi0^k * x1^i * y2^j, given on the y-basis."""
        grid = [[None] * self.p for _ in range(self.p)]
        grid[i][j] = self.base.pi0(k)
        return K2Element.from_y_grid(self, grid)

    def monomial_valuation(self, k: int, i: int, j: int) -> int:
        return self.p**2 * k - i * self.p * self.b1 - j * self.b2

    def _empty_rows(self):
        return [[self._zero] * self.p for _ in range(self.p)]

    def __repr__(self):
        return (f"ExtensionDesc(p={self.p}, e0={self.base.e0}, "
                f"b1={self.b1}, m={self.m}, b2={self.b2})")


class K2Element:
    """An element of K2 on the x1^i x2^j basis with K0 coefficients."""

    __slots__ = ("ext", "rows", "_ycache")

    def __init__(self, ext: ExtensionDesc, rows):
        self.ext = ext
        self.rows = tuple(tuple(r) for r in rows)
        self._ycache = None

    @classmethod
    def from_scalar(cls, ext: ExtensionDesc, c: K0Element) -> "K2Element":
        rows = ext._empty_rows()
        rows[0][0] = c
        return cls(ext, rows)

    @classmethod
    def from_y_grid(cls, ext: ExtensionDesc, grid) -> "K2Element":
        """Convert a grid of coefficients on the x1^i y2^j basis, entries
        None meaning zero, into an element (x-basis)."""
        p = ext.p
        mu = ext.mu
        rows = None
        for l in reversed(range(p)):
            if rows is not None:
                rows = _shift_second(ext, rows, mu, negate_mu=True)
            else:
                rows = [[None] * p for _ in range(p)]
            for i in range(p):
                c = grid[i][l]
                if c is not None:
                    rows[i][0] = c if rows[i][0] is None else rows[i][0] + c
        return cls(ext, _fill(ext, rows))

    # -- linear structure ------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if not isinstance(other, K2Element):
            return NotImplemented
        if other.ext is not self.ext:
            raise ValueError("elements of different extensions")
        rows = [
            [a + b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.rows, other.rows)
        ]
        return K2Element(self.ext, rows)

    __radd__ = __add__

    def __neg__(self):
        return K2Element(self.ext, [[-c for c in r] for r in self.rows])

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "K2Element":
        """Multiply by a K0 scalar (or int) coefficientwise."""
        if isinstance(c, int):
            c = self.ext.base.from_int(c)
        return K2Element(self.ext, [[c * x for x in r] for r in self.rows])

    def _coerce(self, other):
        if isinstance(other, int):
            return self.ext.from_int(other)
        if isinstance(other, K0Element):
            return self.ext.from_k0(other)
        return other

    # -- multiplication ----------------------------------------------

    def __mul__(self, other):
        if isinstance(other, (int, K0Element)):
            return self.scale(other)
        if not isinstance(other, K2Element):
            return NotImplemented
        ext = self.ext
        if other.ext is not ext:
            raise ValueError("elements of different extensions")
        p = ext.p
        wide = 3 * p - 2
        tmp = [[None] * (2 * p - 1) for _ in range(wide)]
        for i in range(p):
            for j in range(p):
                ca = self.rows[i][j]
                if ca.is_pristine_zero():
                    continue
                for k in range(p):
                    for l in range(p):
                        cb = other.rows[k][l]
                        if cb.is_pristine_zero():
                            continue
                        _acc(tmp, i + k, j + l, ca * cb)
        # reduce x2 powers: x2^(p+t) = x2^(t+1) + (a2 + D(x1,a1)) * x2^t
        for j in range(2 * p - 2, p - 1, -1):
            for i in range(wide):
                c = tmp[i][j]
                if c is None:
                    continue
                tmp[i][j] = None
                _acc(tmp, i, j - p + 1, c)
                for k, rk in enumerate(ext.x2_rel):
                    _acc(tmp, i + k, j - p, c * rk)
        # reduce x1 powers: x1^(p+t) = x1^(t+1) + a1 * x1^t
        for i in range(wide - 1, p - 1, -1):
            for j in range(p):
                c = tmp[i][j]
                if c is None:
                    continue
                tmp[i][j] = None
                _acc(tmp, i - p + 1, j, c)
                _acc(tmp, i - p, j, c * ext.a1)
        return K2Element(ext, _fill(ext, [row[:p] for row in tmp[:p]]))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers not supported on K2Element")
        result = self.ext.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- valuation and precision --------------------------------------

    def y_coefficients(self):
        """Coefficients on the x1^i y2^j basis (p x p grid of K0Element)."""
        if self._ycache is None:
            ext = self.ext
            p = ext.p
            rows = None
            for j in reversed(range(p)):
                if rows is not None:
                    rows = _shift_second(ext, rows, ext.mu, negate_mu=False)
                else:
                    rows = [[None] * p for _ in range(p)]
                for i in range(p):
                    c = self.rows[i][j]
                    rows[i][0] = c if rows[i][0] is None else rows[i][0] + c
            self._ycache = tuple(tuple(r) for r in _fill(ext, rows))
        return self._ycache

    def _stats(self):
        ext = self.ext
        p2 = ext.p**2
        pb1 = ext.p * ext.b1
        det = None
        bound = None
        prec = None
        for i, row in enumerate(self.y_coefficients()):
            for j, c in enumerate(row):
                mono = -i * pb1 - j * ext.b2
                v, floor = c._val_parts()
                if v is None:
                    cand = p2 * floor + mono
                    if bound is None or cand < bound:
                        bound = cand
                else:
                    cand = p2 * v + mono
                    if det is None or cand < det:
                        det = cand
                pr = p2 * c.precision() + mono
                if prec is None or pr < prec:
                    prec = pr
        return det, bound, prec

    def valuation(self) -> int:
        det, bound, _ = self._stats()
        if det is not None and (bound is None or det < bound):
            return det
        raise IndeterminateValuation(
            "element has no resolvable valuation at current precision"
        )

    def val_floor(self) -> int:
        det, bound, _ = self._stats()
        if det is not None and (bound is None or det < bound):
            return det
        return min(x for x in (det, bound) if x is not None)

    def precision(self) -> int:
        """Absolute v2-precision of the element."""
        _, _, prec = self._stats()
        return prec

    def is_zero(self) -> bool:
        return all(c.is_zero() for row in self.rows for c in row)

    def vanishes(self, threshold: int | None = None) -> bool:
        """True when the value provably sits at or above the working
        target (or the given v2 level); an element whose digits all
        vanish still only counts up to its tracked precision."""
        t = threshold if threshold is not None else self.ext.target_v2
        return self.val_floor() >= t

    def __eq__(self, other):
        other = self._coerce(other)
        if not isinstance(other, K2Element):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def constant_part(self, noise_floor: int | None = None) -> K0Element:
        """The element as a K0 scalar; raises if the nonconstant part is
        visible above the noise floor (the working target by default)."""
        rows = [list(r) for r in self.rows]
        rows[0][0] = self.ext._zero
        rest = K2Element(self.ext, rows)
        if not rest.vanishes(noise_floor):
            raise NotInBaseField(
                "nonconstant coordinates are visible above the noise floor"
            )
        return self.rows[0][0]

    def __repr__(self):
        terms = []
        for i, row in enumerate(self.rows):
            for j, c in enumerate(row):
                if not c.is_zero():
                    terms.append(f"({c!r})*x1^{i}*x2^{j}")
        return "K2Element(" + (" + ".join(terms) if terms else "0") + ")"


def _acc(tmp, i, j, val):
    tmp[i][j] = val if tmp[i][j] is None else tmp[i][j] + val


def _fill(ext, rows):
    z = ext._zero
    return [[c if c is not None else z for c in row] for row in rows]


def _shift_second(ext, rows, mu, negate_mu):
    """Multiply a p x p grid (entries may be None) by (T + s*mu*x1) where
    T is the second basis generator of the grid and s = -1 when
    ``negate_mu``.  Used by the triangular basis changes in both
    directions; the x1 overflow folds through x1^p = x1 + a1."""
    p = ext.p
    out = [[None] * p for _ in range(p)]
    for i in range(p):
        for l in range(p):
            c = rows[i][l]
            if c is None:
                continue
            _acc(out, i, l + 1, c)
            cm = c * mu
            if negate_mu:
                cm = -cm
            if i + 1 < p:
                _acc(out, i + 1, l, cm)
            else:
                _acc(out, 1, l, cm)
                _acc(out, 0, l, cm * ext.a1)
    return out


def uniformizer_exponents(ext: ExtensionDesc, r: int) -> tuple[int, int, int]:
    """Exponents (k, i, j) of the unique monomial pi0^k x1^i y2^j with
    0 <= i, j < p and valuation exactly r."""
    p = ext.p
    p2 = p * p
    r %= p2
    for i in range(p):
        for j in range(p):
            if (-i * p * ext.b1 - j * ext.b2 - r) % p2 == 0:
                k = (r + i * p * ext.b1 + j * ext.b2) // p2
                return k, i, j
    raise InvariantViolation("no monomial of requested residue")  # unreachable


def uniformizer_k2(ext: ExtensionDesc, r: int) -> K2Element:
    """A monomial of K2 with valuation the least nonnegative residue of
    r modulo p^2."""
    k, i, j = uniformizer_exponents(ext, r % (ext.p**2))
    return ext.monomial(k, i, j)


def scaffold_lambda(ext: ExtensionDesc, t: int) -> K2Element:
    """The monomial of valuation exactly t whose quotient by any other
    of the family with congruent index lies in K0."""
    p2 = ext.p**2
    k, i, j = uniformizer_exponents(ext, t % p2)
    base_val = ext.monomial_valuation(k, i, j)
    return ext.monomial(k + (t - base_val) // p2, i, j)


def hensel_lift(c: K2Element, t0: K2Element, trace: list | None = None,
                target: int | None = None) -> K2Element:
    """Newton-iterate f(X) = X^p - X - c to a root from the seed t0.

    Requires v2(f(t0)) > 0 and f'(t0) a unit; the residual valuation at
    least doubles per step, and iteration stops once the residual is
    beyond ``target`` (the extension's padded lift target by default).
    """
    ext = c.ext
    p = ext.p
    if target is None:
        target = ext.lift_target
    t = t0

    def residual(tt):
        return tt**p - tt - c

    f = residual(t)
    last = None
    for _ in range(128):
        det, bound, prec = f._stats()
        if det is not None and (bound is None or det < bound):
            rv = det
            if rv <= 0:
                raise NoConvergence(f"residual valuation {rv} is not positive")
            if trace is not None:
                trace.append(rv)
            if rv >= target:
                return t
        else:
            rv = min(x for x in (det, bound) if x is not None)
            if trace is not None:
                trace.append(rv)
            if rv >= target:
                return t
            raise PrecisionExhausted(
                f"residual vanishes at precision {rv} < target {target}"
            )
        if last is not None and rv <= last:
            raise NoConvergence("residual valuation stopped increasing")
        last = rv
        fp = t ** (p - 1) * p - ext.one()
        if fp.valuation() != 0:
            raise NoConvergence("derivative is not a unit at the iterate")
        t = t - f * _invert_unit(fp)
        f = residual(t)
    raise NoConvergence("iteration budget exhausted")


def _invert_unit(x: K2Element) -> K2Element:
    """Inverse of a v2-valuation-zero element by Newton iteration."""
    ext = x.ext
    if x.valuation() != 0:
        raise ValueError("only unit inversion is supported in K2")
    y00 = x.y_coefficients()[0][0]
    z = ext.from_k0(y00.inverse())
    one = ext.one()
    r = one - x * z
    for _ in range(64):
        if r.is_zero():
            return z
        z = z + z * r
        r = one - x * z
    raise PrecisionExhausted("unit inversion did not stabilize")


def trace_sum(x: K2Element, automorphisms) -> K2Element:
    """Sum of images of x under the given automorphisms."""
    acc = None
    for s in automorphisms:
        img = s.apply(x)
        acc = img if acc is None else acc + img
    return acc


def trace_to_base(x: K2Element, automorphisms) -> K0Element:
    """Galois trace down to K0; raises NotInBaseField when the orbit sum
    has visibly nonconstant coordinates."""
    return trace_sum(x, automorphisms).constant_part()
