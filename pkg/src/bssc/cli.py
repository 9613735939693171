"""Command line front end: codebook, bruhat, decode, simulate, verify.

All subcommands are file-in/file-out and deterministic given their flags and
seeds; output is CSV or key=value text.  Exit codes: 0 success, 1 invariant
violation (verify), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import codebook as cb, decoder, gf2, simulator, symplectic as sp, verify
from .errors import BsscError, ConfigError

DECODE_COLUMNS = ["serial", "r", "pivots", "free_hex", "sr_hex", "b_hex",
                  "support", "residual", "coeff_re", "coeff_im"]


def _bounded_m(text: str) -> int:
    m = int(text)
    if not 1 <= m <= 12:
        raise argparse.ArgumentTypeError("m must be in [1, 12]")
    return m


def _id_row(cid) -> list:
    return [
        cb.serial_of(cid),
        cid.r,
        ";".join(str(p) for p in cid.h.pivots),
        hex(cid.h.free_bits()),
        hex(gf2.symmetric_to_bits(cid.sr)),
        hex(cid.b),
        1 << cid.r,
    ]


def cmd_codebook(args) -> int:
    m = args.m
    if args.dump:
        with open(args.dump, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["serial", "r", "pivots", "free_hex", "sr_hex",
                             "b_hex", "support"])
            for cid in cb.enumerate_codebook(m):
                writer.writerow(_id_row(cid))
        print(f"dumped={args.dump}")
    if args.stats or not args.dump:
        print(f"m={m}")
        print(f"total={cb.codebook_size(m)}")
        for r in range(m + 1):
            print(f"rank_{r}={cb.rank_size(m, r)}")
        print(f"bc_total={cb.bc_size(m)}")
        if m <= 3:
            worst = cb.max_pairwise_inner_sq(m)
            print(f"max_inner_sq={worst.numerator}/{worst.denominator}")
            print(f"min_distance={(1 - float(worst)) ** 0.5:.6f}")
    return 0


def cmd_bruhat(args) -> int:
    with open(args.infile) as fh:
        mat = gf2.Gf2Matrix.from_text(fh.read())
    if mat.nrows % 2 or mat.nrows != mat.ncols:
        raise BsscError("input must be a 2m x 2m binary matrix")
    f = sp.SymplecticElement(mat.nrows // 2, mat)
    fac = sp.bruhat_decompose(f)
    print(f"r={fac.r}")
    for label, block in (("P", fac.p), ("S_r", fac.sr), ("M", fac.m_mat),
                         ("S", fac.s)):
        print(f"{label}:")
        text = block.to_text()
        if text:
            print(text)
    ok = fac.recompose() == f
    print(f"recomposition={'ok' if ok else 'MISMATCH'}")
    return 0 if ok else 1


def _read_signal(path: str) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            re_part, im_part = line.split(",")
            rows.append(complex(float(re_part), float(im_part)))
    return np.array(rows, dtype=np.complex128)


def cmd_decode(args) -> int:
    s = _read_signal(args.infile)
    if s.shape[0] != 1 << args.m:
        raise BsscError(f"signal length {s.shape[0]} != 2^m = {1 << args.m}")
    writer = csv.writer(sys.stdout)
    writer.writerow(DECODE_COLUMNS)
    if args.multi:
        pairs = decoder.decode_multi(s, args.multi)
        w = np.stack([cb.bssc_vector(c).to_complex() for c, _ in pairs], axis=1)
        coeffs = np.array([h for _, h in pairs])
        residual = float(np.linalg.norm(s - w @ coeffs))
        for cid, coeff in pairs:
            writer.writerow(_id_row(cid) + [f"{residual:.12g}",
                                            f"{coeff.real:.12g}",
                                            f"{coeff.imag:.12g}"])
    else:
        res = decoder.decode_single(s, mode=args.mode)
        coeff = np.vdot(cb.bssc_vector(res.id).to_complex(), s)
        writer.writerow(_id_row(res.id) + [f"{res.residual:.12g}",
                                           f"{coeff.real:.12g}",
                                           f"{coeff.imag:.12g}"])
    return 0


def _parse_config(path: str) -> list[simulator.ExperimentConfig]:
    fields: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            if not _:
                raise ConfigError(f"bad config line: {line!r}")
            fields[key.strip().lower()] = value.strip()
    try:
        m = int(fields.pop("m"))
    except KeyError as exc:
        raise ConfigError(f"config missing required key {exc}") from exc
    trials = int(fields.pop("trials", "10000"))
    users = [int(x) for x in fields.pop("l", "1").split(",")]
    snrs = [None if x.lower() in ("", "none") else float(x)
            for x in fields.pop("snr_db", "none").split(",")]
    kind = fields.pop("kind", "bssc").lower()
    seed = int(fields.pop("seed", "0"))
    parallelism = int(fields.pop("parallelism", "1"))
    if fields:
        raise ConfigError(f"unknown config keys: {sorted(fields)}")
    return [
        simulator.ExperimentConfig(m=m, n_users=lu, trials=trials, snr_db=snr,
                                   kind=kind, seed=seed, parallelism=parallelism)
        for lu in users for snr in snrs
    ]


def cmd_simulate(args) -> int:
    configs = _parse_config(args.config)
    rows = [simulator.run(cfg) for cfg in configs]
    with open(args.out, "w", newline="") as fh:
        fh.write(f"# snr_convention={simulator.SNR_CONVENTION}\n")
        fh.write("# random_baseline=fresh codebook per trial, exhaustive search\n")
        writer = csv.writer(fh)
        writer.writerow(["m", "L", "snr_db", "kind", "trials", "err_prob",
                         "ci_lo", "ci_hi", "seconds"])
        for summary in rows:
            cfg = summary.config
            writer.writerow([
                cfg.m, cfg.n_users,
                "" if cfg.snr_db is None else cfg.snr_db,
                cfg.kind, cfg.trials,
                f"{summary.err_prob:.6g}", f"{summary.ci_lo:.6g}",
                f"{summary.ci_hi:.6g}", f"{summary.seconds:.3f}",
            ])
    print(f"wrote={args.out} rows={len(rows)}")
    if args.emit_spectrum:
        cfg = configs[0]
        rng = simulator._trial_rng(cfg.seed, 0)
        sent = simulator.sample_codewords(cfg.kind, cfg.m, cfg.n_users, rng)
        clean = simulator.synthesize(sent, snr_db=None, rng=rng)
        rng2 = simulator._trial_rng(cfg.seed, 0)
        sent2 = simulator.sample_codewords(cfg.kind, cfg.m, cfg.n_users, rng2)
        noisy = simulator.synthesize(sent2, snr_db=cfg.snr_db, rng=rng2)
        mags = simulator.diag_spectrum_magnitudes(clean)
        mags_noisy = simulator.diag_spectrum_magnitudes(noisy)
        with open(args.emit_spectrum, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["y", "mag_noiseless", "mag_observed"])
            for y in range(mags.shape[0]):
                writer.writerow([y, f"{mags[y]:.9g}", f"{mags_noisy[y]:.9g}"])
        print(f"spectrum={args.emit_spectrum}")
    return 0


def cmd_verify(args) -> int:
    return verify.run_checks(args.level)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bssc",
        description="binary subspace chirp codebooks, decoders and simulations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codebook", help="enumerate or summarize a codebook")
    p.add_argument("--m", type=_bounded_m, required=True)
    p.add_argument("--dump", metavar="OUT.CSV")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(fn=cmd_codebook)

    p = sub.add_parser("bruhat", help="factor a symplectic matrix")
    p.add_argument("--in", dest="infile", required=True, metavar="F.TXT")
    p.set_defaults(fn=cmd_bruhat)

    p = sub.add_parser("decode", help="decode a signal file (re,im per line)")
    p.add_argument("--m", type=_bounded_m, required=True)
    p.add_argument("--in", dest="infile", required=True, metavar="S.CSV")
    p.add_argument("--multi", type=int, metavar="L")
    p.add_argument("--mode", choices=["noiseless", "noisy"], default="noisy")
    p.set_defaults(fn=cmd_decode)

    p = sub.add_parser("simulate", help="run a Monte-Carlo experiment")
    p.add_argument("--config", required=True, metavar="EXP.CFG")
    p.add_argument("--out", required=True, metavar="RESULTS.CSV")
    p.add_argument("--emit-spectrum", metavar="SPECTRUM.CSV")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="run the invariant self-checks")
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
