"""Verification suites behind `app.py verify <suite>`.

Each suite walks a small grid of (q, r, m) parameters and records one row per
check.  A failing or crashing check becomes a failed row and the suite moves
on; an enumeration beyond the caps becomes a skipped row.
"""
from __future__ import annotations

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from config import VERIFY_SUITES
from src.bvariety import (blowup_fibers, boundary_orders_check, chart_roundtrip_check,
                          divisor_boundary_check, pi_Q_check, stratification_check)
from src.dualizing import (DualizingIdeal, ideal_closure_check, iv_dimension_check,
                           iv_generators, mr_orthogonality, pairing_table)
from src.errors import InfeasibleError
from src.gfq import extension, field_of_size
from src.invariants import (WEIGHT_CASES, coset_check, dickson, dickson_invariance, h_invariants,
                            h_polynomial_check, invariant_dim_bruteforce, invariant_rings_table,
                            k0_constant, unipotent_dim_formula, wp_regular, wp_weights)
from src.linalg import Subspace, gaussian_binomial, generating_set, group_elements, p_subgroups
from src.modular import (gf_compat_check, gf_composition_check, omega_count, omega_points,
                         pv_count_formula, pv_points, pv_stratum, pv_strata_formula,
                         qv_count_formula, qv_points, qv_points_bruteforce, singular_locus_check,
                         strange_bijection_check, strata_counts)
from src.reports import Report, RunConfig
from src.rvring import RVRing, cohomology_identity

logger = logging.getLogger(__name__)


def _summary(rows: Sequence[Dict]) -> Tuple[List[Dict], bool]:
    """Rows without their ok flags, and whether all of them passed."""
    return [{k: v for k, v in row.items() if k != "ok"} for row in rows], all(row["ok"] for row in rows)


def _tally(rows: Sequence[Dict]) -> Tuple[Dict, bool]:
    """Count of checked rows, failures and the first failing row."""
    bad = [row for row in rows if not row["ok"]]
    witness = {k: v for k, v in bad[0].items() if k != "ok"} if bad else None
    return {"checked": len(rows), "failures": len(bad), "witness": witness}, not bad


class VerificationRunner:
    """Runs the named suites and collects their rows in a Report."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.caps = cfg.caps
        logger.info(f"Initialized VerificationRunner with seed {cfg.seed}")

    # grids ------------------------------------------------------------

    def _grid_qr(self, default: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
        if self.cfg.q is not None or self.cfg.r is not None:
            return [(self.cfg.q or 2, self.cfg.r or 2)]
        return list(default)

    def _grid_qrm(self, default: Sequence[Tuple[int, int, int]]) -> List[Tuple[int, int, int]]:
        if self.cfg.q is not None or self.cfg.r is not None or self.cfg.m is not None:
            return [(self.cfg.q or 2, self.cfg.r or 2, self.cfg.m or 1)]
        return list(default)

    # checks -----------------------------------------------------------

    def _check(self, report: Report, params: Dict, method: str,
               fn: Callable[[], Tuple[object, Optional[bool]]]):
        """Run one check; fn returns (value, verified)."""
        try:
            value, verified = fn()
        except InfeasibleError as e:
            logger.warning(f"Skipping {params}: {e}")
            report.add(params, f"skipped: {e}", method, None)
        except Exception as e:
            logger.error(f"Check {method} at {params} raised {type(e).__name__}: {e}")
            report.add(params, f"{type(e).__name__}: {e}", method, False)
        else:
            report.add(params, value, method, verified)

    def run(self, suite: str) -> Report:
        if suite not in VERIFY_SUITES:
            raise ValueError(f"unknown suite {suite!r}, expected one of {VERIFY_SUITES}")
        report = Report(f"verify {suite}")
        logger.info(f"Running suite {suite}")
        getattr(self, "suite_" + suite.replace("-", "_"))(report)
        logger.info(f"Suite {suite}: {len(report.records)} rows, "
                    f"{len(report.failures)} failures")
        return report

    def run_all(self) -> Report:
        report = Report("verify all")
        for suite in VERIFY_SUITES:
            report.extend(self.run(suite))
        return report

    # suites -----------------------------------------------------------

    def suite_relations(self, report: Report):
        for q, r in self._grid_qr([(2, 2), (2, 3), (3, 2), (2, 4)]):
            def check(q=q, r=r):
                ring = RVRing(field_of_size(q), r, seed=self.cfg.seed)
                residues = ring.relation_residues()
                bad = [x for x in residues if not x.ok]
                value = {"checked": len(residues), "nonzero": len(bad),
                         "witness": bad[0].residual.to_text() if bad else None}
                return value, not bad
            self._check(report, {"q": q, "r": r}, "exact", check)

    def suite_freeness(self, report: Report):
        n_max = self.cfg.n if self.cfg.n is not None else 3
        for q, r in self._grid_qr([(2, 1), (2, 2), (3, 2), (2, 3), (3, 3)]):
            ring = RVRing(field_of_size(q), r, seed=self.cfg.seed)
            for row in self._rows_or_skip(report, {"q": q, "r": r}, "rank",
                                          lambda ring=ring: ring.freeness_check(n_max)):
                (value,), ok = _summary([row])
                report.add({"q": q, "r": r, "n": row["n"]}, value, "rank", ok)

    def suite_invariants(self, report: Report):
        n_max = self.cfg.n if self.cfg.n is not None else 5
        cap = self.caps["group_order"]
        for q, r in self._grid_qr([(2, 2), (3, 2), (2, 3)]):
            field = field_of_size(q)
            ring = RVRing(field, r, seed=self.cfg.seed)
            try:
                subgroups = p_subgroups(group_elements("GL", r, field, cap=cap))
            except InfeasibleError as e:
                report.add({"q": q, "r": r}, f"skipped: {e}", "bruteforce", None)
                continue
            for row in self._rows_or_skip(report, {"q": q, "r": r}, "cosets",
                                          lambda field=field, r=r: coset_check(r, field, cap)):
                (value,), ok = _summary([row])
                report.add({"q": q, "r": r, "s": row["s"]}, value, "cosets", ok)
            for idx, H in enumerate(subgroups):
                gens = generating_set(H)
                for n in range(n_max + 1):
                    def check(H=H, gens=gens, n=n):
                        formula = unipotent_dim_formula(H, n, r, field, cap=cap)
                        brute = invariant_dim_bruteforce(ring, H, n, gens=gens)
                        return {"order": len(H), "formula": formula, "bruteforce": brute}, formula == brute
                    self._check(report, {"q": q, "r": r, "n": n, "subgroup": idx}, "formula+bruteforce", check)

    def suite_dickson(self, report: Report):
        for q, r in self._grid_qr([(2, 1), (3, 1), (2, 2), (3, 2), (2, 3)]):
            field = field_of_size(q)
            ring = RVRing(field, r, seed=self.cfg.seed)
            params = {"q": q, "r": r}
            try:
                data = dickson(r, field)
            except Exception as e:
                logger.error(f"Dickson invariants at {params} raised {type(e).__name__}: {e}")
                report.add(params, f"{type(e).__name__}: {e}", "dickson", False)
                continue

            def invariance(data=data):
                return _tally(dickson_invariance(data, seed=self.cfg.seed))
            self._check(report, params, "dickson invariance", invariance)
            self._check(report, params, "k0 constant", lambda data=data: (k0_constant(data), True))

            def h_identity(ring=ring):
                return _tally(h_polynomial_check(ring, certify_membership=False))
            self._check(report, params, "h(T) identity", h_identity)

            for i, h in enumerate(h_invariants(r, field, data), start=1):
                def member(ring=ring, h=h, i=i):
                    coords = ring.coords_in_basis(h, q ** i - 1)
                    return {"h": i, "degree": q ** i - 1}, coords is not None
                self._check(report, {**params, "i": i}, "h_i membership", member)

            n_max = self.cfg.n if self.cfg.n is not None else 2 * (q ** r - 1)
            for row in self._rows_or_skip(report, params, "invariant rings",
                                          lambda ring=ring, n_max=n_max: invariant_rings_table(ring, n_max)):
                report.add({**params, "n": row["n"], "group": row["group"]},
                           {"bruteforce": row["bruteforce"], "monomials": row["monomials"]},
                           "invariant rings", row["ok"])

            for case in WEIGHT_CASES:
                weights = wp_weights(case, r, q)
                regular = wp_regular(weights)
                if case == "a" or r <= 2:
                    expected = True
                elif r == 3:
                    expected = False
                else:
                    expected = None
                report.add({**params, "case": case}, {"weights": weights, "regular": regular},
                           "weighted projective", None if expected is None else regular == expected)

    def _rows_or_skip(self, report: Report, params: Dict, method: str, fn) -> List[Dict]:
        try:
            return fn()
        except InfeasibleError as e:
            logger.warning(f"Skipping {method} at {params}: {e}")
            report.add(params, f"skipped: {e}", method, None)
        except Exception as e:
            logger.error(f"{method} at {params} raised {type(e).__name__}: {e}")
            report.add(params, f"{type(e).__name__}: {e}", method, False)
        return []

    def suite_dualizing(self, report: Report):
        n_max = self.cfg.n if self.cfg.n is not None else 5
        for q, r in self._grid_qr([(2, 1), (2, 2), (2, 3), (3, 2)]):
            field = field_of_size(q)
            ring = RVRing(field, r, seed=self.cfg.seed)
            params = {"q": q, "r": r}

            def pairing(ring=ring):
                result = pairing_table(ring)
                return {"size": len(result["labels"])}, result["ok"]
            self._check(report, params, "pairing table", pairing)
            self._check(report, params, "M_r orthogonality", lambda ring=ring: _tally(mr_orthogonality(ring)))
            for row in self._rows_or_skip(report, params, "I_V dimension",
                                          lambda ring=ring: iv_dimension_check(ring, n_max)):
                (value,), ok = _summary([row])
                report.add({**params, "n": row["n"]}, value, "I_V dimension", ok)

            def members(ring=ring):
                ideal = DualizingIdeal(ring)
                gens = iv_generators(r, field)
                missing = [g.to_text() for g in gens if ideal.membership(g.fraction, r + 1) is None]
                return {"generators": len(gens), "missing": missing[:1]}, not missing
            self._check(report, params, "generator membership", members)

            def closure(ring=ring):
                rows = ideal_closure_check(ring, samples=min(self.cfg.samples, 20), seed=self.cfg.seed)
                return {"samples": len(rows)}, all(row["ok"] for row in rows)
            self._check(report, params, "ideal closure", closure)

    def suite_strange_maps(self, report: Report):
        exhaustive = [(2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 1, 2)]
        sampled = [(2, 3, 1), (2, 3, 2), (2, 3, 3)]
        custom = self.cfg.q is not None or self.cfg.r is not None or self.cfg.m is not None
        grid = [(p, None) for p in self._grid_qrm(exhaustive)]
        if not custom:
            grid += [(p, self.cfg.samples) for p in sampled]
        for (q, r, m), samples in grid:
            field = field_of_size(q)
            ext = extension(field, m)
            params = {"q": q, "r": r, "m": m}
            method = "exhaustive" if samples is None else "sampled"
            for row in self._rows_or_skip(report, params, method,
                                          lambda: gf_composition_check(field, r, ext, samples, self.cfg.seed)):
                (value,), ok = _summary([row])
                report.add(params, value, f"{method} composite", ok)
            for s in range(1, r + 1):
                sub = Subspace.coordinate(field, r, s)
                for row in self._rows_or_skip(report, params, "compatibility",
                                              lambda sub=sub: gf_compat_check(sub, ext, samples, self.cfg.seed)):
                    (value,), ok = _summary([row])
                    report.add({**params, "s": s}, value, f"{method} compatibility", ok)
            self._check(report, params, "bijection",
                        lambda: _summary(strange_bijection_check(field, r, ext)))

    def suite_strata(self, report: Report):
        cap = self.caps["brute_force"]
        for q, r, m in self._grid_qrm([(2, 1, 3), (2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1)]):
            field = field_of_size(q)
            ext = extension(field, m)
            params = {"q": q, "r": r, "m": m}

            def q_count():
                points = qv_points(field, r, ext)
                formula = qv_count_formula(q, r, m)
                counts = strata_counts(points)
                per_stratum = all(c == omega_count(q, sub.dim, m) for sub, c in counts.items())
                ok = (len(points) == formula == sum(counts.values()) and len(set(points)) == len(points)
                      and per_stratum)
                return {"points": len(points), "formula": formula, "strata": len(counts)}, ok
            self._check(report, params, "classification", q_count)

            def brute():
                points = qv_points_bruteforce(field, r, ext, cap=cap)
                return {"points": len(points)}, set(points) == set(qv_points(field, r, ext))
            self._check(report, params, "bruteforce", brute)

            def p_count():
                points = pv_points(field, r, ext, cap=cap)
                by_codim = {}
                for lam in points:
                    d = r - pv_stratum(lam).dim
                    by_codim[d] = by_codim.get(d, 0) + 1
                formula = pv_count_formula(q, r, m)
                ok = len(points) == formula == pv_strata_formula(q, r, m)
                ok = ok and all(c == omega_count(q, s, m) * gaussian_binomial(r, s, q) for s, c in by_codim.items())
                return {"points": len(points), "formula": formula}, ok
            self._check(report, params, "P_V count", p_count)

            for s in range(1, r + 1):
                def omega(s=s):
                    found = len(omega_points(field, s, ext))
                    return {"points": found}, found == omega_count(q, s, m)
                self._check(report, {**params, "s": s}, "Omega count", omega)

    def suite_charts(self, report: Report):
        for q, r, m in self._grid_qrm([(2, 2, 1), (2, 2, 2), (2, 3, 1), (2, 3, 2)]):
            field = field_of_size(q)
            ext = extension(field, m)
            params = {"q": q, "r": r, "m": m}
            checks = [("strata", lambda: stratification_check(field, r, ext)),
                      ("charts", lambda: chart_roundtrip_check(field, r, ext)),
                      ("pi_Q", lambda: pi_Q_check(field, r, ext))]
            if r <= 3:
                checks.append(("blowup fibres", lambda: blowup_fibers(field, r, ext)))
            for method, fn in checks:
                rows = self._rows_or_skip(report, params, method, fn)
                if method == "blowup fibres" and rows:
                    bad = [row for row in rows if not row["ok"]]
                    report.add(params, {"points": len(rows), "witness": bad[0]["point"] if bad else None},
                               method, not bad)
                    continue
                for row in rows:
                    (value,), ok = _summary([row])
                    report.add(params, value, method, ok)

    def suite_singular_locus(self, report: Report):
        for q, r, m in self._grid_qrm([(2, 2, 2), (2, 3, 3)]):
            field = field_of_size(q)
            ext = extension(field, m)
            for row in self._rows_or_skip(report, {"q": q, "r": r, "m": m}, "jacobian",
                                          lambda: singular_locus_check(field, r, ext)):
                (value,), ok = _summary([row])
                report.add({"q": q, "r": r, "m": m}, value, "jacobian", ok)

    def suite_cohomology_identity(self, report: Report):
        n_max = self.cfg.n if self.cfg.n is not None else 20
        grid = self._grid_qr([(q, r) for r in range(1, 6) for q in (2, 3, 4)])
        for q, r in grid:
            def check(q=q, r=r):
                bad = [n for n in range(n_max + 1)
                       if cohomology_identity(r, q, n)[0] != cohomology_identity(r, q, n)[1]]
                return {"n_max": n_max, "witness": bad[:1]}, not bad
            self._check(report, {"q": q, "r": r}, "exact", check)

    def suite_boundary_orders(self, report: Report):
        for q, r in self._grid_qr([(2, 2), (2, 3), (3, 3)]):
            field = field_of_size(q)
            for row in self._rows_or_skip(report, {"q": q, "r": r}, "symbolic",
                                          lambda: boundary_orders_check(field, r)):
                (value,), ok = _summary([row])
                report.add({"q": q, "r": r}, value, "symbolic", ok)
            m = self.cfg.m or 2
            ext = extension(field, m)
            for row in self._rows_or_skip(report, {"q": q, "r": r, "m": m}, "chart",
                                          lambda: divisor_boundary_check(field, r, ext)):
                (value,), ok = _summary([row])
                report.add({"q": q, "r": r, "m": m}, value, "chart", ok)

