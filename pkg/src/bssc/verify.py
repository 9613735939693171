"""Self-check suites behind the `verify` subcommand.

quick: exhaustive checks at m <= 2 plus randomized checks up to m = 6
(seconds).  full: exhaustive checks at m <= 3 plus the complete m = 4
decode roundtrip (minutes).  Each check raises AssertionError on violation;
the runner reports one line per check and the first failure names the
broken invariant.
"""

from __future__ import annotations

import numpy as np

from . import (_kernels, clifford, codebook as cb, decoder, gf2, pauli,
               symplectic as sp)


def check_gf2_schubert_identities(full: bool):
    top = 5 if full else 4
    for m in range(1, top + 1):
        for r in range(m + 1):
            count = 0
            for rep in gf2.enumerate_grassmannian(m, r):
                count += 1
                p, pinv, pinvt = gf2.complete_to_invertible(rep)
                assert p @ pinv == gf2.Gf2Matrix.identity(m), "P Pinv != I"
                assert pinvt == pinv.transpose(), "PinvT != Pinv^T"
                assert (rep.matrix.transpose() @ gf2.dual_raw(rep)).is_zero(), \
                    "dual not orthogonal"
            assert count == gf2.gaussian_binomial(m, r), "cell count mismatch"


def check_bruhat_roundtrip(full: bool):
    rng = np.random.default_rng(2024)
    per = 40 if full else 15
    for m in range(1, 7):
        for _ in range(per):
            f = sp.random_symplectic(m, rng)
            fac = sp.bruhat_decompose(f)
            assert fac.recompose() == f, "Bruhat recomposition mismatch"


def check_symplectic_group_counts(_full: bool):
    elems = {f.mat for f in sp.enumerate_symplectic(2)}
    assert len(elems) == 720 == sp.symplectic_order(2), "|Sp(4;2)| != 720"
    reps = {sp.canonical_rep(sp.SymplecticElement(2, mat)) for mat in elems}
    assert len(reps) == 15 == sp.lagrangian_count(2), "coset count != 15"


def check_pauli_dense_oracle(_full: bool):
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)

    def dense(e):
        mat = np.eye(1, dtype=complex)
        for i in range(e.m):
            f = np.eye(2, dtype=complex)
            if (e.a >> (e.m - 1 - i)) & 1:
                f = f @ sx
            if (e.b >> (e.m - 1 - i)) & 1:
                f = f @ sz
            mat = np.kron(mat, f)
        return 1j ** ((e.phase_k + (e.a & e.b).bit_count()) % 4) * mat

    m = 2
    paulis = [pauli.PauliElement(m, a, b)
              for a in range(4) for b in range(4)]
    for e1 in paulis:
        for e2 in paulis:
            got = dense(pauli.pauli_mul(e1, e2))
            assert np.allclose(got, dense(e1) @ dense(e2)), "Pauli product phase"
            want = np.allclose(dense(e1) @ dense(e2), dense(e2) @ dense(e1))
            assert pauli.commutes(e1, e2) == want, "commutation predicate"


def check_projector_laws(_full: bool):
    rng = np.random.default_rng(2025)
    for m in (2, 3):
        n = 1 << m
        for _ in range(5):
            rep = sp.random_coset_rep(m, rng)
            ab = sp.coset_to_lagrangian(rep)
            v = rng.normal(size=n) + 1j * rng.normal(size=n)
            acc = np.zeros(n, dtype=complex)
            for d in range(n):
                pv = pauli.project(
                    pauli.stabilizer_from(ab, gf2.Gf2Vector(m, d)), v)
                acc += pv
                again = pauli.project(
                    pauli.stabilizer_from(ab, gf2.Gf2Vector(m, d)), pv)
                assert np.allclose(again, pv, atol=1e-10), "projector not idempotent"
            assert np.allclose(acc, v, atol=1e-10), "resolution of identity"


def check_clifford_actions(full: bool):
    rng = np.random.default_rng(2026)
    for m in (4, 6):
        n = 1 << m
        for _ in range(10 if full else 5):
            g = clifford.CliffordFactored(
                m, gf2.random_invertible(m, rng), gf2.random_symmetric(m, rng),
                int(rng.integers(0, m + 1)))
            v = rng.normal(size=n) + 1j * rng.normal(size=n)
            w = rng.normal(size=n) + 1j * rng.normal(size=n)
            assert abs(np.vdot(g.apply(v), g.apply(w)) - np.vdot(v, w)) < 1e-10, \
                "Clifford action not unitary"


def check_codebook_counts(_full: bool):
    ids = list(cb.enumerate_codebook(2))
    assert len(ids) == 60, "m=2 codebook size != 60"
    split = [sum(1 for i in ids if i.r == r) for r in (0, 1, 2)]
    assert split == [4, 24, 32], "m=2 rank split != 4/24/32"
    assert sum(1 for _ in cb.enumerate_codebook(3)) == 1080, "m=3 size != 1080"


def check_cross_construction(full: bool):
    for m in (1, 2, 3) if full else (1, 2):
        for cid in cb.enumerate_codebook(m):
            w1 = cb.bssc_vector(cid)
            w2 = clifford.clifford_column(cid.coset(), cid.b)
            assert w1.phase_offset(w2) is not None, \
                "formula and operator constructions disagree"
    rng = np.random.default_rng(2027)
    for _ in range(200 if full else 50):
        cid = cb.random_id(6, rng)
        w1 = cb.bssc_vector(cid)
        w2 = clifford.clifford_column(cid.coset(), cid.b)
        assert w1.phase_offset(w2) is not None, \
            "formula and operator constructions disagree (m=6)"


def check_min_distance(full: bool):
    from fractions import Fraction

    for m in (2, 3) if full else (2,):
        assert cb.max_pairwise_inner_sq(m) == Fraction(1, 2), \
            f"min chordal distance at m={m} is not 1/sqrt(2)"


def check_stabilizer_fixes_codewords(full: bool):
    for m in (1, 2, 3) if full else (1, 2):
        for cid in cb.enumerate_codebook(m):
            w = cb.bssc_vector(cid)
            group = cb.stabilizer_of(cid)
            for g in group.generators():
                assert w.phase_offset(cb.pauli_apply_exact(g, w)) in (0, 2), \
                    "stabilizer generator moves the codeword"
            assert group.diagonal_count() == 1 << (m - cid.r), \
                "diagonal element count != 2^(m-r)"


def check_semigroup_closure(full: bool):
    m = 3 if full else 2
    words = [cb.bssc_vector(c) for c in cb.enumerate_codebook(m)]
    table = {w.canonical_key() for w in words}
    for i, w1 in enumerate(words):
        for w2 in words[i:]:
            prod = cb.pointwise_mul(w1, w2)
            assert prod is None or prod.canonical_key() in table, \
                "pointwise product left the codebook"
    assert {cb.conjugate(w).canonical_key() for w in words} == table, \
        "conjugation does not preserve the codebook"


def check_weyl_transform_oracle(_full: bool):
    rng = np.random.default_rng(2028)
    for m in (2, 3):
        n = 1 << m
        for _ in range(12):
            s = rng.normal(size=n) + 1j * rng.normal(size=n)
            t = decoder.weyl_diag(s)
            for x in (0, int(rng.integers(0, n))):
                got = decoder.weyl_offdiag(s, x)
                for y in range(n):
                    e = pauli.PauliElement(m, x, y)
                    want = np.vdot(s, pauli.apply(e, s))
                    assert abs(got[y] - want) < 1e-10, \
                        "fast Weyl transform disagrees with the quadratic form"
            assert np.allclose(t.values, decoder.weyl_offdiag(s, 0).real,
                               atol=1e-10), "diagonal spectrum mismatch"


def check_decode_roundtrip(full: bool):
    for m in (1, 2) if not full else (1, 2, 3, 4):
        for cid in cb.enumerate_codebook(m):
            res = decoder.decode_single(cb.bssc_vector(cid).to_complex())
            assert res.id == cid and res.residual < 1e-9, \
                f"noiseless decode failed at m={m}"


def check_kernel_backends_agree(_full: bool):
    rng = np.random.default_rng(2029)
    for m in (3, 6, 9):
        n = 1 << m
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        for stages in (1, m):
            assert np.allclose(_kernels.fwht_numpy(a.copy(), stages),
                               _kernels.fwht(a.copy(), stages=stages)), \
                "compiled and NumPy kernels disagree"


CHECKS = [
    ("gf2-schubert-identities", check_gf2_schubert_identities),
    ("symplectic-bruhat-roundtrip", check_bruhat_roundtrip),
    ("symplectic-group-counts", check_symplectic_group_counts),
    ("pauli-dense-oracle", check_pauli_dense_oracle),
    ("pauli-projector-laws", check_projector_laws),
    ("clifford-unitarity", check_clifford_actions),
    ("codebook-counts", check_codebook_counts),
    ("codebook-cross-construction", check_cross_construction),
    ("codebook-min-distance", check_min_distance),
    ("codebook-stabilizers", check_stabilizer_fixes_codewords),
    ("codebook-semigroup-closure", check_semigroup_closure),
    ("weyl-transform-oracle", check_weyl_transform_oracle),
    ("decoder-roundtrip", check_decode_roundtrip),
    ("kernel-backends-agree", check_kernel_backends_agree),
]


def run_checks(level: str, report=print) -> int:
    """Run every check; returns 0 if all pass, 1 otherwise."""
    full = level == "full"
    failures = 0
    for name, fn in CHECKS:
        try:
            fn(full)
        except AssertionError as exc:
            failures += 1
            report(f"FAIL {name}: {exc}")
        else:
            report(f"PASS {name}")
    if failures:
        report(f"{failures} invariant(s) violated")
    return 1 if failures else 0
