import numpy as np
import pytest

from bssc import gf2, symplectic as sp
from bssc.errors import NotInvertibleError, NotSymmetricError, NotSymplecticError
from bssc.gf2 import Gf2Matrix


class TestMembership:
    def test_identity_and_omega(self):
        for m in range(1, 5):
            assert sp.is_symplectic(Gf2Matrix.identity(2 * m))
            assert sp.is_symplectic(sp.omega(m).mat)

    def test_row_swap_not_symplectic(self):
        eye = Gf2Matrix.identity(4).to_lists()
        eye[0], eye[1] = eye[1], eye[0]
        assert not sp.is_symplectic(Gf2Matrix.from_rows(eye))
        with pytest.raises(NotSymplecticError):
            sp.SymplecticElement(2, Gf2Matrix.from_rows(eye))

    def test_block_conditions_hold(self):
        rng = np.random.default_rng(7)
        for m in (2, 3):
            for _ in range(20):
                f = sp.random_symplectic(m, rng)
                assert (f.a @ f.b.transpose()).is_symmetric()
                assert (f.c @ f.d.transpose()).is_symmetric()
                assert (f.a @ f.d.transpose() + f.b @ f.c.transpose()
                        == Gf2Matrix.identity(m))


class TestGenerators:
    def test_fomega_zero_is_identity(self):
        assert sp.make_fomega(3, 0) == sp.SymplecticElement.identity(3)

    def test_fomega_full_is_omega(self):
        assert sp.make_fomega(3, 3) == sp.omega(3)

    def test_du_commutation(self):
        # F_D(P) F_U(S) = F_U(P S P^T) F_D(P)
        rng = np.random.default_rng(8)
        for m in (1, 2, 3, 4):
            for _ in range(10):
                p = gf2.random_invertible(m, rng)
                s = gf2.random_symmetric(m, rng)
                lhs = sp.make_fd(p) @ sp.make_fu(s)
                rhs = sp.make_fu(p @ s @ p.transpose()) @ sp.make_fd(p)
                assert lhs == rhs

    def test_partial_swap_involution_commutes_with_omega(self):
        # F_Omega(r)^2 = I and Omega F_Omega(r) Omega = F_Omega(r): the
        # aligned block layout makes the partial swap central to Omega.
        for m in range(1, 5):
            for r in range(m + 1):
                fom = sp.make_fomega(m, r)
                assert fom @ fom == sp.SymplecticElement.identity(m)
                assert sp.omega(m) @ fom @ sp.omega(m) == fom

    def test_generator_validation(self):
        with pytest.raises(NotInvertibleError):
            sp.make_fd(Gf2Matrix.from_rows([[1, 1], [1, 1]]))
        with pytest.raises(NotSymmetricError):
            sp.make_fu(Gf2Matrix.from_rows([[0, 1], [0, 0]]))

    def test_group_closure_and_inverse(self):
        rng = np.random.default_rng(9)
        for m in (1, 3, 5, 8):
            f = sp.random_symplectic(m, rng)
            g = sp.random_symplectic(m, rng)
            assert sp.is_symplectic((f @ g).mat)
            assert sp.is_symplectic(f.inverse().mat)
            assert f @ f.inverse() == sp.SymplecticElement.identity(m)


class TestBruhat:
    def test_identity_case(self):
        m = 3
        fac = sp.bruhat_decompose(sp.SymplecticElement.identity(m))
        assert fac.r == 0
        assert fac.p == Gf2Matrix.identity(m)
        assert fac.sr.nrows == 0
        assert fac.m_mat == Gf2Matrix.identity(m)
        assert fac.s.is_zero()

    def test_omega_case(self):
        # running the factorization on Omega by hand: C = I, so r = m, P = I,
        # M = I, and both symmetric parts vanish
        m = 3
        fac = sp.bruhat_decompose(sp.omega(m))
        assert fac.r == m
        assert fac.p == Gf2Matrix.identity(m)
        assert fac.sr.is_zero()
        assert fac.m_mat == Gf2Matrix.identity(m)
        assert fac.s.is_zero()

    def test_roundtrip_random(self):
        rng = np.random.default_rng(10)
        for m in range(1, 7):
            for _ in range(60):
                f = sp.random_symplectic(m, rng)
                assert sp.bruhat_decompose(f).recompose() == f

    def test_five_factor_form_matches(self):
        rng = np.random.default_rng(11)
        for m in (2, 4):
            for _ in range(20):
                f = sp.random_symplectic(m, rng)
                fac = sp.bruhat_decompose(f)
                regen = (sp.make_fd(fac.p1) @ sp.make_fu(fac.s1)
                         @ sp.make_fomega(m, fac.r) @ sp.make_fu(fac.s2)
                         @ sp.make_fd(fac.p2))
                assert regen == f


class TestCosets:
    def test_canonical_rep_invariant_under_right_action(self):
        rng = np.random.default_rng(12)
        m = 3
        fs = [sp.random_symplectic(m, rng) for _ in range(5)]
        for f in fs:
            rep = sp.canonical_rep(f)
            for q in sp.enumerate_gl(m):
                assert sp.canonical_rep(f @ sp.make_fd(q)) == rep
            for s in gf2.enumerate_symmetric(m):
                assert sp.canonical_rep(f @ sp.make_fu(s)) == rep

    def test_representative_lies_in_its_coset(self):
        rng = np.random.default_rng(13)
        for m in (1, 2, 3):
            for _ in range(10):
                f = sp.random_symplectic(m, rng)
                rep = sp.canonical_rep(f)
                assert sp.canonical_rep(rep.representative()) == rep
                # quotient by the representative lands in the stabilizer:
                # its lower-left block vanishes
                q = rep.representative().inverse() @ f
                assert q.c.is_zero()

    def test_omega_rep(self):
        m = 3
        rep = sp.canonical_rep(sp.omega(m))
        assert rep.r == m
        assert rep.h.matrix == Gf2Matrix.identity(m)
        assert rep.sr.is_zero()

    def test_coset_count_m2(self):
        reps = {sp.canonical_rep(f) for f in sp.enumerate_symplectic(2)}
        assert len(reps) == 15 == sp.lagrangian_count(2)

    def test_enumerate_symplectic_sizes(self):
        assert sp.symplectic_order(1) == 6
        assert sp.symplectic_order(2) == 720
        elems = {f.mat for f in sp.enumerate_symplectic(1)}
        assert len(elems) == 6
        elems2 = {f.mat for f in sp.enumerate_symplectic(2)}
        assert len(elems2) == 720


class TestLagrangian:
    def test_extreme_reps(self):
        m = 3
        z_rep = sp.CosetRep(m, 0, gf2.SchubertCellRep(m, (), ()),
                            Gf2Matrix.zeros(0, 0))
        lag = sp.coset_to_lagrangian(z_rep)
        assert lag == Gf2Matrix.zeros(m, m).hstack(Gf2Matrix.identity(m))
        x_rep = sp.CosetRep(m, m, gf2.column_echelon(Gf2Matrix.identity(m)),
                            Gf2Matrix.zeros(m, m))
        lag = sp.coset_to_lagrangian(x_rep)
        assert lag == Gf2Matrix.identity(m).hstack(Gf2Matrix.zeros(m, m))

    def test_rows_isotropic(self):
        rng = np.random.default_rng(14)
        for m in (2, 3, 4):
            for _ in range(20):
                rep = sp.random_coset_rep(m, rng)
                lag = sp.coset_to_lagrangian(rep)
                rows = lag.rows
                for i in range(m):
                    for j in range(m):
                        ai, bi = rows[i] >> m, rows[i] & ((1 << m) - 1)
                        aj, bj = rows[j] >> m, rows[j] & ((1 << m) - 1)
                        assert gf2.parity(bi & aj) ^ gf2.parity(ai & bj) == 0

    def test_bijection_m2(self):
        spaces = set()
        for rep in sp.enumerate_cosets(2):
            lag = sp.coset_to_lagrangian(rep)
            spaces.add(tuple(gf2._eliminate(list(lag.rows))))
        assert len(spaces) == 15


class TestSampling:
    def test_every_draw_symplectic(self):
        rng = np.random.default_rng(15)
        for m in (1, 2, 6):
            for _ in range(10):
                assert sp.is_symplectic(sp.random_symplectic(m, rng).mat)

    def test_m1_uniform_within_3_sigma(self):
        rng = np.random.default_rng(16)
        n = 60_000
        counts = {}
        for _ in range(n):
            f = sp.random_symplectic(1, rng)
            counts[f.mat] = counts.get(f.mat, 0) + 1
        assert len(counts) == 6
        sigma = (n * (1 / 6) * (5 / 6)) ** 0.5
        for c in counts.values():
            assert abs(c - n / 6) <= 3 * sigma

    def test_m2_support_size(self):
        rng = np.random.default_rng(17)
        seen = {sp.random_symplectic(2, rng).mat for _ in range(30_000)}
        assert len(seen) == 720
