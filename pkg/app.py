"""omegabar command line: Hilbert functions, point counts, invariants and verification suites."""
import argparse
import logging
import sys

from config import (FEASIBILITY_CAPS, LOG_LEVEL, OUTPUT_FORMATS, VARIETIES, VERIFY_SUITES)
from src.bvariety import bv_count_formula, bv_count_strata, bv_points, bv_points_bruteforce
from src.errors import InfeasibleError, OmegaBarError
from src.gfq import extension, field_of_size
from src.invariants import (INVARIANT_GROUPS, WEIGHT_CASES, invariant_hilbert_check, wp_regular,
                            wp_weights)
from src.linalg import gaussian_binomial
from src.modular import (omega_count, omega_points, pv_count_formula, pv_points,
                         qv_count_formula, qv_points, qv_points_bruteforce, strata_counts)
from src.reports import Report, RunConfig, emit
from src.rvring import RVRing, coh_dim, cohomology_identity, hilbert_h
from src.suites import VerificationRunner

logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omegabar", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=None, help="field size (a prime power)")
    common.add_argument("--r", type=int, default=None, help="dimension of V")
    common.add_argument("--m", type=int, default=None, help="extension degree of k over F_q")
    common.add_argument("--n", type=int, default=None, help="largest degree -n to tabulate")
    common.add_argument("--format", dest="fmt", choices=OUTPUT_FORMATS, default="text")
    common.add_argument("--output", default=None, help="write here (relative paths go under OUTPUT_DIR)")
    common.add_argument("--verify", action="store_true", help="cross-check formulas by enumeration")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--samples", type=int, default=None)
    for name, value in FEASIBILITY_CAPS.items():
        common.add_argument(f"--cap-{name.replace('_', '-')}", dest=f"cap_{name}", type=int, default=value)

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("hilbert", parents=[common], help="dim R_{V,-n}")
    count = sub.add_parser("count-points", parents=[common], help="points over F_{q^m}")
    count.add_argument("--variety", choices=VARIETIES, default="Q")
    verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("suite", choices=VERIFY_SUITES + ["all"])
    inv = sub.add_parser("invariants", parents=[common], help="invariant dimensions")
    inv.add_argument("--which", choices=list(INVARIANT_GROUPS), default="G")
    sub.add_parser("weights", parents=[common], help="regularity of the weighted projective quotients")
    sub.add_parser("cohomology", parents=[common], help="dim H^i(Q_V, O(n))")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, q=args.q, r=args.r, m=args.m, n=args.n, fmt=args.fmt,
                    output=args.output, verify=args.verify,
                    caps={name: getattr(args, f"cap_{name}") for name in FEASIBILITY_CAPS},
                    suite=getattr(args, "suite", None), variety=getattr(args, "variety", None),
                    which=getattr(args, "which", None))
    if args.seed is not None:
        cfg.seed = args.seed
    if args.samples is not None:
        cfg.samples = args.samples
    return cfg


def cmd_hilbert(cfg: RunConfig) -> Report:
    q, r = cfg.q or 2, cfg.r or 2
    n_max = cfg.n if cfg.n is not None else 5
    report = Report(f"h_{r}(n) for q={q}")
    ring = RVRing(field_of_size(q), r, seed=cfg.seed) if cfg.verify else None
    for n in range(n_max + 1):
        params = {"q": q, "r": r, "n": n}
        h = hilbert_h(r, q, n)
        if not cfg.verify:
            report.add(params, h, "formula")
            continue
        try:
            rank = ring.graded_basis(n).rank()
        except InfeasibleError as e:
            logger.warning(f"Rank verification skipped at n={n}: {e}")
            report.add(params, h, "formula", None)
        else:
            report.add(params, h, "formula+rank", rank == h)
    return report


def cmd_count_points(cfg: RunConfig) -> Report:
    q, r, m = cfg.q or 2, cfg.r or 2, cfg.m or 1
    field = field_of_size(q)
    ext = extension(field, m)
    params = {"q": q, "r": r, "m": m}
    variety = cfg.variety or "Q"
    cap = cfg.caps["brute_force"]
    report = Report(f"{variety}_V(F_{q}^{m}) for r={r}")

    if variety == "Omega":
        formula = omega_count(q, r, m)
        report.add(params, formula, "formula")
        if cfg.verify:
            found = len(omega_points(field, r, ext))
            report.add(params, found, "enumeration", found == formula)
        return report

    if variety == "P":
        for s in range(1, r + 1):
            report.add({**params, "stratum_dim": s},
                       gaussian_binomial(r, s, q) * omega_count(q, s, m), "formula")
        formula = pv_count_formula(q, r, m)
        report.add(params, formula, "formula")
        if cfg.verify:
            try:
                points = pv_points(field, r, ext, cap=cap)
            except InfeasibleError as e:
                report.add(params, f"skipped: {e}", "enumeration", None)
            else:
                report.add(params, len(points), "enumeration", len(points) == formula)
        return report

    if variety == "Q":
        for s in range(1, r + 1):
            report.add({**params, "stratum_dim": s},
                       gaussian_binomial(r, s, q) * omega_count(q, s, m), "formula")
        formula = qv_count_formula(q, r, m)
        report.add(params, formula, "formula")
        if cfg.verify:
            points = qv_points(field, r, ext)
            counts = strata_counts(points)
            ok = sum(counts.values()) == len(points) == formula
            report.add(params, len(points), "classification", ok)
            try:
                brute = qv_points_bruteforce(field, r, ext, cap=cap)
            except InfeasibleError as e:
                logger.warning(f"Brute-force count skipped: {e}")
                report.add(params, f"skipped: {e}", "bruteforce", None)
            else:
                report.add(params, len(brute), "bruteforce", set(brute) == set(points))
        return report

    formula = bv_count_formula(field, r, m)
    report.add(params, formula, "formula")
    if cfg.verify:
        points = bv_points(field, r, ext)
        strata = bv_count_strata(points)
        report.add({**params, "strata": len(strata)}, len(points), "flag products",
                   len(points) == formula == sum(strata.values()))
        try:
            brute = bv_points_bruteforce(field, r, ext, cap=cap)
        except InfeasibleError as e:
            logger.warning(f"Brute-force count skipped: {e}")
            report.add(params, f"skipped: {e}", "bruteforce", None)
        else:
            report.add(params, len(brute), "bruteforce", set(brute) == set(points))
    return report


def cmd_invariants(cfg: RunConfig) -> Report:
    q, r = cfg.q or 2, cfg.r or 2
    which = cfg.which or "G"
    n_max = cfg.n if cfg.n is not None else 2 * (q ** r - 1)
    ring = RVRing(field_of_size(q), r, seed=cfg.seed)
    report = Report(f"dim (R_V)^{which} for q={q}, r={r}")
    for row in invariant_hilbert_check(ring, which, n_max):
        report.add({"q": q, "r": r, "n": row["n"], "group": which}, row["monomials"],
                   "formula+bruteforce", row["ok"])
    return report


def cmd_weights(cfg: RunConfig) -> Report:
    q, r = cfg.q or 2, cfg.r or 3
    report = Report(f"weighted projective quotients for q={q}, r={r}")
    for case in WEIGHT_CASES:
        weights = wp_weights(case, r, q)
        report.add({"q": q, "r": r, "case": case}, {"weights": weights, "regular": wp_regular(weights)},
                   "formula")
    return report


def cmd_cohomology(cfg: RunConfig) -> Report:
    q, r = cfg.q or 2, cfg.r or 2
    n_max = cfg.n if cfg.n is not None else 5
    report = Report(f"dim H^i(Q_V, O(n)) for q={q}, r={r}")
    for n in range(-n_max, n_max + 1):
        for i in range(r):
            report.add({"q": q, "r": r, "n": n, "i": i}, coh_dim(i, n, r, q), "formula")
        if cfg.verify and n >= 0:
            lhs, rhs = cohomology_identity(r, q, n)
            report.add({"q": q, "r": r, "n": n}, lhs, "identity", lhs == rhs)
    return report


def cmd_verify(cfg: RunConfig) -> Report:
    runner = VerificationRunner(cfg)
    if cfg.suite == "all":
        return runner.run_all()
    return runner.run(cfg.suite)


COMMANDS = {
    "hilbert": cmd_hilbert,
    "count-points": cmd_count_points,
    "verify": cmd_verify,
    "invariants": cmd_invariants,
    "weights": cmd_weights,
    "cohomology": cmd_cohomology,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        if cfg.q is not None:
            field_of_size(cfg.q)
        report = COMMANDS[cfg.command](cfg)
    except OmegaBarError as e:
        logger.error(f"{cfg.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1
    emit(report, cfg)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
