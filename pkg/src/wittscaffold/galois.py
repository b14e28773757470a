"""Numerical realization of the cyclic Galois group of K2/K0.

The generator sigma1 is produced by Hensel-lifting the defining
Artin-Schreier equations from the seeds x1 + 1 and x2 + D(x1, 1); its
p-th power fixes K1 and shifts x2 by 1 + (small).  Group-algebra
operators (the scaffold operators psi1, psi2 among them) are kept as
small expression trees over {automorphism, scale, add, compose} and
evaluated structurally on K2 elements.
"""

from __future__ import annotations

from math import factorial

from .errors import InvariantViolation
from .padic import K0Element
from .tower import ExtensionDesc, K2Element, hensel_lift
from .witt import d_poly


class Automorphism:
    """A K0-automorphism of K2 given by its images of x1 and x2."""

    __slots__ = ("ext", "image_x1", "image_x2", "_table")

    def __init__(self, ext: ExtensionDesc, image_x1: K2Element, image_x2: K2Element):
        self.ext = ext
        self.image_x1 = image_x1
        self.image_x2 = image_x2
        self._table = None

    def _power_table(self):
        """Cached grid of image_x1^i * image_x2^j for 0 <= i, j < p."""
        if self._table is None:
            p = self.ext.p
            apow = [self.ext.one()]
            for _ in range(p - 1):
                apow.append(apow[-1] * self.image_x1)
            bpow = [self.ext.one()]
            for _ in range(p - 1):
                bpow.append(bpow[-1] * self.image_x2)
            self._table = [[apow[i] * bpow[j] for j in range(p)] for i in range(p)]
        return self._table

    def apply(self, x: K2Element) -> K2Element:
        """Image of x: substitute the generator images into its monomial
        expansion.  K0 coefficients pass through unchanged."""
        table = self._power_table()
        acc = None
        for i, row in enumerate(x.rows):
            for j, c in enumerate(row):
                if c.is_pristine_zero():
                    continue
                term = table[i][j].scale(c)
                acc = term if acc is None else acc + term
        return acc if acc is not None else self.ext.zero()

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other."""
        return Automorphism(
            self.ext, self.apply(other.image_x1), self.apply(other.image_x2)
        )

    def __repr__(self):
        return f"Automorphism(ext={self.ext!r})"


def identity_automorphism(ext: ExtensionDesc) -> Automorphism:
    return Automorphism(ext, ext.x1(), ext.x2())


def automorphism_power(auto: Automorphism, n: int) -> Automorphism:
    result = identity_automorphism(auto.ext)
    for _ in range(n):
        result = auto.compose(result)
    return result


def cyclic_group(sigma1: Automorphism) -> list[Automorphism]:
    """All p^2 powers of sigma1, identity first."""
    autos = [identity_automorphism(sigma1.ext)]
    for _ in range(sigma1.ext.degree() - 1):
        autos.append(sigma1.compose(autos[-1]))
    return autos


def verify_automorphism(auto: Automorphism) -> None:
    """Check that the images satisfy both defining Artin-Schreier
    relations to the working target; raises InvariantViolation."""
    ext = auto.ext
    p = ext.p
    a1 = ext.from_k0(ext.a1)
    a2 = ext.from_k0(ext.a2)
    r1 = auto.image_x1**p - auto.image_x1 - a1
    r2 = auto.image_x2**p - auto.image_x2 - (a2 + d_poly(auto.image_x1, a1, p))
    for name, r in (("x1", r1), ("x2", r2)):
        if r.val_floor() < ext.target_v2:
            raise InvariantViolation(
                f"image of {name} fails its defining relation: residual "
                f"valuation {r.val_floor()} < target {ext.target_v2}"
            )


def compute_sigma1(ext: ExtensionDesc, check: bool = True) -> Automorphism:
    """The degree-p^2 generator: sends x1 to x1 + 1 + eps and x2 to
    x2 + D(x1, 1) + (small)."""
    p = ext.p
    x1 = ext.x1()
    x2 = ext.x2()
    a1 = ext.from_k0(ext.a1)
    a2 = ext.from_k0(ext.a2)
    image_x1 = hensel_lift(a1, x1 + 1)
    c1 = d_poly(x1, ext.one(), p)
    image_x2 = hensel_lift(a2 + d_poly(image_x1, a1, p), x2 + c1)
    auto = Automorphism(ext, image_x1, image_x2)
    if check:
        eps_val = (image_x1 - x1 - 1).valuation()
        expected = p**2 * ext.base.e0 - p * (p - 1) * ext.b1
        if eps_val != expected:
            raise InvariantViolation(
                f"v2(eps) = {eps_val}, expected {expected}"
            )
        if (image_x2 - x2 - c1).val_floor() <= 0:
            raise InvariantViolation("x2-image correction is not small")
        verify_automorphism(auto)
    return auto


def compute_sigma2_direct(ext: ExtensionDesc, check: bool = True) -> Automorphism:
    """The generator of the subgroup fixing K1, lifted directly: x1 is
    fixed, x2 goes to x2 + 1 + delta."""
    p = ext.p
    x1 = ext.x1()
    x2 = ext.x2()
    a1 = ext.from_k0(ext.a1)
    a2 = ext.from_k0(ext.a2)
    image_x2 = hensel_lift(a2 + d_poly(x1, a1, p), x2 + 1)
    auto = Automorphism(ext, x1, image_x2)
    if check:
        delta_floor = (image_x2 - x2 - 1).val_floor()
        bound = p**2 * ext.base.e0 + (p - 1) * p * ext.a2.valuation()
        if delta_floor < bound:
            raise InvariantViolation(
                f"v2(delta) = {delta_floor} below the bound {bound}"
            )
        verify_automorphism(auto)
    return auto


def compute_sigma2(ext: ExtensionDesc, sigma1: Automorphism,
                   check: bool = True) -> Automorphism:
    """sigma1^p, cross-checked against the direct lift; the direct form
    is returned (cheaper images for repeated application)."""
    direct = compute_sigma2_direct(ext, check=check)
    if check:
        composed = automorphism_power(sigma1, ext.p)
        for a, b in ((composed.image_x1, direct.image_x1),
                     (composed.image_x2, direct.image_x2)):
            d = a - b
            if d.val_floor() < ext.target_v2:
                raise InvariantViolation(
                    "sigma1^p disagrees with the directly lifted generator: "
                    f"difference valuation {d.val_floor()}"
                )
    return direct


# -- group algebra operators -----------------------------------------


class GroupAlgebraOp:
    """A formal K0[G] element, evaluated structurally on K2 elements."""

    def __call__(self, x: K2Element) -> K2Element:
        raise NotImplementedError

    def __add__(self, other):
        return OpSum((self, other))

    def __sub__(self, other):
        return OpSum((self, OpScale(-1, other)))

    def __rmul__(self, c):
        return OpScale(c, self)

    def __matmul__(self, other):
        return OpCompose(self, other)

    def __pow__(self, n: int):
        return OpPower(self, n)


class OpIdentity(GroupAlgebraOp):
    def __call__(self, x):
        return x


class OpZero(GroupAlgebraOp):
    def __call__(self, x):
        return x.ext.zero()


class OpAuto(GroupAlgebraOp):
    def __init__(self, auto: Automorphism):
        self.auto = auto

    def __call__(self, x):
        return self.auto.apply(x)


class OpScale(GroupAlgebraOp):
    def __init__(self, c, inner: GroupAlgebraOp):
        self.c = c
        self.inner = inner

    def __call__(self, x):
        return self.inner(x).scale(self.c)


class OpSum(GroupAlgebraOp):
    def __init__(self, terms):
        self.terms = tuple(terms)

    def __call__(self, x):
        acc = None
        for t in self.terms:
            v = t(x)
            acc = v if acc is None else acc + v
        return acc


class OpCompose(GroupAlgebraOp):
    def __init__(self, outer: GroupAlgebraOp, inner: GroupAlgebraOp):
        self.outer = outer
        self.inner = inner

    def __call__(self, x):
        return self.outer(self.inner(x))


class OpPower(GroupAlgebraOp):
    def __init__(self, inner: GroupAlgebraOp, n: int):
        if n < 0:
            raise ValueError("operator powers must be nonnegative")
        self.inner = inner
        self.n = n

    def __call__(self, x):
        for _ in range(self.n):
            x = self.inner(x)
        return x


def k0_binomial(y: K0Element, i: int) -> K0Element:
    """Binomial coefficient C(y, i) = y(y-1)...(y-i+1)/i! in K0.
    Requires i < p so that i! is a unit."""
    field = y.field
    if i >= field.p:
        raise ValueError("binomial index must stay below p")
    acc = field.one()
    for t in range(i):
        acc = acc * (y - t)
    if i >= 2:
        acc = acc * field.scalar(field.exact(factorial(i)).unit_inverse())
    return acc


def truncated_exp(base_auto: Automorphism, y: K0Element) -> GroupAlgebraOp:
    """Truncated exponentiation (1 + (auto - 1))^[y]: the binomial series
    sum_{i<p} C(y,i) (auto - 1)^i."""
    p = base_auto.ext.p
    delta = OpAuto(base_auto) - OpIdentity()
    terms = [OpIdentity()]
    for i in range(1, p):
        terms.append(OpScale(k0_binomial(y, i), OpPower(delta, i)))
    return OpSum(terms)


def psi_operators(ext: ExtensionDesc, sigma1: Automorphism,
                  sigma2: Automorphism) -> tuple[GroupAlgebraOp, GroupAlgebraOp]:
    """The scaffold operators: psi1 + 1 = sigma1 * sigma2^[mu] and
    psi2 = sigma2 - 1.  Both kill K0 constants."""
    psi1 = OpCompose(OpAuto(sigma1), truncated_exp(sigma2, ext.mu)) - OpIdentity()
    psi2 = OpAuto(sigma2) - OpIdentity()
    return psi1, psi2


def operator_matrix(op: GroupAlgebraOp, ext: ExtensionDesc) -> list[list[K0Element]]:
    """Materialize an operator as the p^2 x p^2 matrix of its action on
    the x1^i x2^j basis; column (i*p + j) is the image of x1^i x2^j."""
    p = ext.p
    n = p * p
    cols = []
    for i in range(p):
        for j in range(p):
            rows = ext._empty_rows()
            rows[i][j] = ext.base.one()
            img = op(K2Element(ext, rows))
            cols.append([img.rows[a][b] for a in range(p) for b in range(p)])
    return [[cols[c][r] for c in range(n)] for r in range(n)]


def scaffold_index(ext: ExtensionDesc, t: int) -> int:
    """Residue index steering the shift law: the unique representative of
    -t * b2^(-1) in [0, p^2).  Its base-p digits are exactly the (j, i)
    exponents of the monomial pi0^k x1^i y2^j of valuation t."""
    p2 = ext.p**2
    binv = pow(ext.b2, -1, p2)
    return (-t * binv) % p2


def scaffold_index_digits(ext: ExtensionDesc, t: int) -> tuple[int, int]:
    a = scaffold_index(ext, t)
    return a % ext.p, a // ext.p
