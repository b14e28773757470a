import random

import pytest

from wittscaffold.construction import construct_extension, ramification_data
from wittscaffold.galois import (
    OpPower,
    automorphism_power,
    compute_sigma1,
    compute_sigma2,
    compute_sigma2_direct,
    cyclic_group,
    identity_automorphism,
    k0_binomial,
    operator_matrix,
    psi_operators,
    scaffold_index,
    scaffold_index_digits,
    truncated_exp,
)
from wittscaffold.tower import scaffold_lambda, trace_sum, trace_to_base, uniformizer_k2
from wittscaffold.witt import WittVector2, d_poly


@pytest.fixture(scope="module")
def ctx5():
    desc, _ = construct_extension(3, 6, (1, -1), (1, -1))
    sigma1 = compute_sigma1(desc)
    sigma2 = compute_sigma2(desc, sigma1)
    psi1, psi2 = psi_operators(desc, sigma1, sigma2)
    return desc, sigma1, sigma2, psi1, psi2


class TestSigma1(object):
    def test_epsilon_valuation(self, ctx5):
        desc, s1, _, _, _ = ctx5
        eps = s1.image_x1 - desc.x1() - 1
        assert eps.valuation() == 48  # p^2 e0 - p(p-1) b1

    def test_carry_term_valuation(self, ctx5):
        desc, s1, _, _, _ = ctx5
        c1 = d_poly(desc.x1(), desc.one(), desc.p)
        assert c1.valuation() == -6
        assert (s1.image_x2 - desc.x2() - c1).val_floor() > 0

    def test_fixes_base_field(self, ctx5):
        desc, s1, _, _, _ = ctx5
        c = desc.from_k0(desc.base.monomial(5, -2))
        assert s1.apply(c) == c

    def test_is_ring_homomorphism(self, ctx5):
        desc, s1, _, _, _ = ctx5
        rng = random.Random(2)
        from tests_helpers import random_k2

        for _ in range(5):
            x = random_k2(desc, rng)
            y = random_k2(desc, rng)
            assert (s1.apply(x * y) - s1.apply(x) * s1.apply(y)).vanishes()
            assert (s1.apply(x + y) - s1.apply(x) - s1.apply(y)).is_zero()

    def test_witt_congruence(self, ctx5):
        desc, s1, _, _, _ = ctx5
        image = WittVector2(desc.x1(), desc.x2(), desc.p) + WittVector2(
            desc.one(), desc.zero(), desc.p
        )
        assert (s1.image_x1 - image.first).val_floor() >= 1
        assert (s1.image_x2 - image.second).val_floor() >= 1


class TestSigma2(object):
    def test_fixes_x1_exactly(self, ctx5):
        desc, _, s2, _, _ = ctx5
        assert (s2.image_x1 - desc.x1()).is_zero()

    def test_shift_error_bound(self, ctx5):
        desc, _, s2, _, _ = ctx5
        delta = s2.image_x2 - desc.x2() - 1
        assert delta.val_floor() >= 30  # p^2 e0 + (p-1) p v0(a2)

    def test_composed_equals_direct(self, ctx5):
        desc, s1, _, _, _ = ctx5
        composed = automorphism_power(s1, desc.p)
        direct = compute_sigma2_direct(desc)
        assert (composed.image_x1 - direct.image_x1).vanishes()
        assert (composed.image_x2 - direct.image_x2).vanishes()

    def test_group_orders(self, ctx5):
        desc, s1, s2, _, _ = ctx5
        s2_cubed = automorphism_power(s2, desc.p)
        assert (s2_cubed.image_x2 - desc.x2()).vanishes()
        full = automorphism_power(s1, desc.degree())
        assert (full.image_x1 - desc.x1()).vanishes()
        assert (full.image_x2 - desc.x2()).vanishes()


class TestTruncatedExp(object):
    def test_zero_exponent_is_identity(self, ctx5):
        desc, _, s2, _, _ = ctx5
        op = truncated_exp(s2, desc.base.zero())
        x = desc.x2()
        assert (op(x) - x).is_zero()

    def test_unit_exponent_is_the_automorphism(self, ctx5):
        desc, _, s2, _, _ = ctx5
        op = truncated_exp(s2, desc.base.one())
        x = desc.x2() * desc.x1()
        assert (op(x) - s2.apply(x)).is_zero()

    def test_expansion_matches_manual_binomials(self, ctx5):
        desc, _, s2, _, _ = ctx5
        mu = desc.mu
        op = truncated_exp(s2, mu)
        x = desc.x2()
        d1 = s2.apply(x) - x
        d2 = s2.apply(d1) - d1
        manual = x + d1.scale(mu) + d2.scale(mu * (mu - 1) / 2)
        assert (op(x) - manual).is_zero()

    def test_binomial_values(self, ctx5):
        desc, _, _, _, _ = ctx5
        mu = desc.mu
        assert k0_binomial(mu, 0) == desc.base.one()
        assert k0_binomial(mu, 1) == mu
        assert k0_binomial(mu, 2) == mu * (mu - 1) / 2


class TestPsiOperators(object):
    def test_kill_constants(self, ctx5):
        desc, _, _, psi1, psi2 = ctx5
        c = desc.from_int(5)
        assert psi1(c).is_zero()
        assert psi2(c).is_zero()

    def test_shift_table_values(self, ctx5):
        desc, _, _, psi1, psi2 = ctx5
        pi2 = uniformizer_k2(desc, 1)
        assert psi1(pi2).valuation() == 4  # 1 + p*b1
        assert psi2(pi2).valuation() == 11  # 1 + b2

    def test_shift_law_on_class_b2(self, ctx5):
        desc, _, _, psi1, psi2 = ctx5
        rng = random.Random(4)
        from tests_helpers import element_with_valuation

        for t in (10, 1, 19):
            alpha = element_with_valuation(desc, rng, t)
            outer = alpha
            for j in range(desc.p):
                cur = outer
                for i in range(desc.p):
                    assert cur.valuation() == t + j * 10 + i * 3
                    if i + 1 < desc.p:
                        cur = psi1(cur)
                if j + 1 < desc.p:
                    outer = psi2(outer)

    def test_index_map_digits_name_the_monomial(self, ctx5):
        desc, _, _, _, _ = ctx5
        from wittscaffold.tower import uniformizer_exponents

        for t in range(9):
            a0, a1 = scaffold_index_digits(desc, t)
            _, i, j = uniformizer_exponents(desc, t)
            assert (a0, a1) == (j, i)

    def test_digit_drop_behaviour(self, ctx5):
        desc, _, _, psi1, psi2 = ctx5
        rd = ramification_data(desc)
        c = rd.precision_c
        for t in range(9):
            lam = scaffold_lambda(desc, t)
            a0, a1 = scaffold_index_digits(desc, t)
            img1, img2 = psi1(lam), psi2(lam)
            if a1 >= 1:
                assert img1.valuation() == t + 3
            else:
                assert img1.is_zero() or img1.val_floor() >= t + 3 + c
            if a0 >= 1:
                assert img2.valuation() == t + 10
            else:
                assert img2.is_zero() or img2.val_floor() >= t + 10 + c

    def test_psi_power_growths(self, ctx5):
        desc, _, _, psi1, psi2 = ctx5
        rho = uniformizer_k2(desc, 1) * desc.pi0()
        assert rho.valuation() == 10
        lhs = OpPower(psi1, 3)(rho)
        assert lhs.valuation() == 20  # 2*b2 under the structural bound
        assert (lhs - psi2(rho)).val_floor() >= 37  # p^2 e0 + p b1 - (p-1) b2
        grown = OpPower(psi2, 3)(rho)
        assert grown.val_floor() >= 54 + 10

    def test_operator_matrix_consistency(self, ctx5):
        desc, _, _, psi1, _ = ctx5
        mat = operator_matrix(psi1, desc)
        x = desc.x2()
        img = psi1(x)
        # column of x2 = basis index (0,1) -> column 1
        col = [mat[r][1] for r in range(9)]
        flat = [img.rows[i][j] for i in range(3) for j in range(3)]
        assert all((a - b).is_zero() for a, b in zip(col, flat))


class TestTraces(object):
    def test_trace_of_one(self, ctx5):
        desc, s1, _, _, _ = ctx5
        autos = cyclic_group(s1)
        assert trace_to_base(desc.one(), autos) == desc.base.from_int(9)

    def test_subextension_trace_of_shift_error(self, ctx5):
        desc, _, s2, _, _ = ctx5
        delta = s2.image_x2 - desc.x2() - 1
        sub = [identity_automorphism(desc)]
        for _ in range(2):
            sub.append(s2.compose(sub[-1]))
        assert (trace_sum(delta, sub) + 3).vanishes()

    def test_depth_bound_on_traces(self, ctx5):
        desc, s1, _, _, _ = ctx5
        autos = cyclic_group(s1)
        rng = random.Random(8)
        from tests_helpers import element_with_valuation

        for t in (-5, 0, 3, 7):
            y = element_with_valuation(desc, rng, t)
            tr = trace_sum(y, autos)
            assert tr.val_floor() - t >= 26

    def test_scaffold_index_is_negated_inverse(self, ctx5):
        desc, _, _, _, _ = ctx5
        assert [scaffold_index(desc, t) for t in range(9)] == [
            (-t * 1) % 9 for t in range(9)
        ]

    def test_partial_orbit_sum_is_not_rational(self, ctx5):
        desc, s1, _, _, _ = ctx5
        from wittscaffold.errors import NotInBaseField

        partial = [identity_automorphism(desc), s1]
        with pytest.raises(NotInBaseField):
            trace_to_base(desc.x1(), partial)

    def test_apply_keeps_degraded_zero_bounds(self, ctx5):
        desc, s1, _, _, _ = ctx5
        from wittscaffold.padic import K0Element, PadicInt

        f = desc.base
        limited = K0Element.make(
            f, 0, (PadicInt(3, 0, 2),) + tuple(f.exact(0) for _ in range(5))
        )
        z = desc.from_k0(limited)
        img = s1.apply(z)
        assert img.is_zero()
        assert img.val_floor() <= 9 * 12
