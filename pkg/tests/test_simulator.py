import numpy as np
import pytest

from bssc import codebook as cb, simulator as sim
from bssc.errors import ConfigError
from bssc.simulator import ExperimentConfig, TrialOutcome


class TestSampling:
    def test_bssc_rank_frequencies_m2(self):
        # expected shares (4, 24, 32)/60, checked within 3 sigma at 60k draws
        rng = np.random.default_rng(80)
        n = 60_000
        counts = [0, 0, 0]
        for _ in range(n):
            counts[cb.random_id(2, rng).r] += 1
        for r, share in enumerate((4 / 60, 24 / 60, 32 / 60)):
            sigma = (n * share * (1 - share)) ** 0.5
            assert abs(counts[r] - n * share) <= 3 * sigma

    def test_bc_kind_full_rank_only(self):
        rng = np.random.default_rng(81)
        for cid in sim.sample_codewords("bc", 3, 5, rng):
            assert cid.r == 3

    def test_distinctness_enforced(self):
        rng = np.random.default_rng(82)
        # m=1 has 6 codewords; asking for all of them forces resampling
        ids = sim.sample_codewords("bssc", 1, 6, rng)
        assert len(set(ids)) == 6

    def test_too_many_users_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(m=1, n_users=7, trials=1)

    def test_random_kind_unit_norm(self):
        rng = np.random.default_rng(83)
        for v in sim.sample_codewords("random", 3, 4, rng):
            assert abs(np.linalg.norm(v) - 1) < 1e-12

    def test_random_kind_m_bound(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(m=7, n_users=1, trials=1, kind="random")


class TestSynthesize:
    def test_single_user_no_noise_identity(self):
        rng = np.random.default_rng(84)
        cid = cb.random_id(3, rng)
        s = sim.synthesize([cid], h=[1.0])
        assert np.allclose(s, cb.bssc_vector(cid).to_complex())

    def test_noise_energy_calibration(self):
        # total noise energy 10^(-snr/10), per-component variance within 1%
        rng = np.random.default_rng(85)
        m, n = 3, 8
        snr_db = 7.0
        samples = 125_000  # 10^6 scalar noise components
        acc = 0.0
        zero = [np.zeros(n, dtype=complex)]
        for _ in range(samples):
            s = sim.synthesize(zero, h=[0.0], snr_db=snr_db, rng=rng)
            acc += float(np.sum(s.real ** 2 + s.imag ** 2))
        per_comp = acc / (samples * n)
        expect = sim.noise_sigma_sq(snr_db, n)
        assert abs(per_comp - expect) < 0.01 * expect

    def test_gains_drawn_when_missing(self):
        rng = np.random.default_rng(86)
        cid = cb.random_id(3, rng)
        s = sim.synthesize([cid], rng=rng)
        w = cb.bssc_vector(cid).to_complex()
        on = np.abs(w) > 0
        ratio = s[on] / w[on]
        assert np.allclose(ratio, ratio[0])


class TestOutcome:
    def test_multiset_hit_accounting(self):
        out = TrialOutcome(sent=(1, 2, 2), decoded=(2, 3, 1))
        assert out.hit_flags == (True, True, False)
        assert out.missed == 1


class TestRun:
    def test_noiseless_single_user_error_zero(self):
        for m in (2, 4):
            summary = sim.run(ExperimentConfig(m=m, n_users=1, trials=40, seed=5))
            assert summary.err_prob == 0.0

    def test_seed_determinism_and_parallel_equivalence(self):
        cfg = ExperimentConfig(m=4, n_users=2, trials=60, snr_db=15.0, seed=9)
        a = sim.run(cfg)
        b = sim.run(cfg)
        c = sim.run(ExperimentConfig(m=4, n_users=2, trials=60, snr_db=15.0,
                                     seed=9, parallelism=2))
        assert a.user_errors == b.user_errors == c.user_errors
        assert a.err_prob == c.err_prob

    def test_random_baseline_small(self):
        cfg = ExperimentConfig(m=2, n_users=1, trials=10, kind="random", seed=3)
        summary = sim.run(cfg)
        assert summary.err_prob == 0.0  # noiseless exhaustive search is exact

    def test_random_baseline_streams_match_trial(self):
        cfg = ExperimentConfig(m=2, n_users=2, trials=4, kind="random", seed=4)
        out = [sim.run_trial(cfg, t) for t in range(4)]
        assert all(len(o.sent) == 2 for o in out)
        rerun = [sim.run_trial(cfg, t) for t in range(4)]
        assert [o.decoded for o in out] == [o.decoded for o in rerun]

    def test_wilson_interval_shrinks(self):
        lo1, hi1 = sim.wilson_interval(10, 100)
        lo2, hi2 = sim.wilson_interval(100, 1000)
        assert (hi2 - lo2) < (hi1 - lo1)
        assert 0.0 <= lo1 < 0.1 < hi1 <= 1.0

    def test_sweep_over_users(self):
        base = ExperimentConfig(m=3, n_users=1, trials=20, seed=11)
        out = sim.sweep(base, n_users=[1, 2])
        assert [s.config.n_users for s in out] == [1, 2]


class TestNoisyOperatingPoint:
    @pytest.mark.slow
    def test_single_user_30db_error_below_one_percent(self):
        summary = sim.run(ExperimentConfig(m=8, n_users=1, trials=1000,
                                           snr_db=30.0, seed=88, parallelism=2))
        assert summary.err_prob < 0.01


class TestSpectrumDump:
    def test_magnitudes_of_codeword(self):
        rng = np.random.default_rng(87)
        cid = cb.random_id(4, rng)
        mags = sim.diag_spectrum_magnitudes(cb.bssc_vector(cid).to_complex())
        assert mags.shape == (16,)
        assert np.isclose(mags[0], 1.0)
        assert np.count_nonzero(mags > 1e-9) == 1 << (4 - cid.r)
