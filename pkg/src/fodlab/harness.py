"""Suite orchestration and the oracle cross-checks."""
from __future__ import annotations

import time

from .gen import GenParams, fd_error, gen_dim, gen_point, gen_polymap, rng_for
from .lens import corrupted_rho, rdc_axiom_suite, rho
from .linearity import DT_DEFAULTS, dT_axiom_suite
from .poly import dot, eval_dual, eval_point, jacobian_action
from .rdc2cdc import rdc2cdc_suite
from .report import AxiomReport, SuiteRecorder
from .simple import cdc_axiom_suite, corrupted_delta, gcdc_axiom_suite
from .tangent import TANGENT_DEFAULTS, tangent_axiom_suite

FD_STEP = 1e-4
FD_TOL = 1e-3

ORACLE_ANCHORS = {
    "dual-number": "f over dual numbers at p + εv has ε-part δf(p, v)",
    "transpose": "⟨δf(a, v), w⟩ = ⟨v, ρf(a, w)⟩",
    "finite-difference": f"|(f(p+hv) - f(p))/h - δf(p, v)|∞ <= {FD_TOL} at h = {FD_STEP}",
}


def oracle_suite(params: GenParams = GenParams(), suite: str = "oracle") -> AxiomReport:
    rec = SuiteRecorder(suite, ORACLE_ANCHORS)
    for t in range(params.trials):
        a, b = gen_dim(params, t, "a"), gen_dim(params, t, "b")
        f = gen_polymap(params, t, a, b, "f")
        p, v, w = gen_point(params, t, a, "p"), gen_point(params, t, a, "v"), gen_point(params, t, b, "w")

        _, eps = eval_dual(f, p, v)
        rec.check("dual-number", eps, eval_point(jacobian_action(f), p + v), [f])

        lhs = dot(eval_point(jacobian_action(f), p + v), w)
        rhs = dot(v, eval_point(rho(f), p + w))
        rec.check("transpose", lhs, rhs, [f])

        # half as many float trials as exact ones
        if t % 2 == 0:
            rng = rng_for(params, t, "fd")
            x = [rng.uniform(-1.0, 1.0) for _ in range(a)]
            u = [rng.uniform(-1.0, 1.0) for _ in range(a)]
            err = fd_error(f, x, u, FD_STEP)
            rec.holds("finite-difference", err <= FD_TOL, [f], lhs=f"error {err:.3e}", rhs=f"<= {FD_TOL}")
    return rec.report()


def _mutant_cdc(params: GenParams) -> AxiomReport:
    return cdc_axiom_suite(params, delta_op=corrupted_delta, suite="mutant-cdc")


def _mutant_rdc(params: GenParams) -> AxiomReport:
    return rdc_axiom_suite(params, rho_op=corrupted_rho, suite="mutant-rdc")


SUITES = {
    "cdc": (cdc_axiom_suite, GenParams()),
    "rdc": (rdc_axiom_suite, GenParams()),
    "gcdc": (gcdc_axiom_suite, GenParams()),
    "tangent": (tangent_axiom_suite, TANGENT_DEFAULTS),
    "dT": (dT_axiom_suite, DT_DEFAULTS),
    "rdc2cdc": (rdc2cdc_suite, GenParams()),
    "oracle": (oracle_suite, GenParams()),
}

MUTANTS = {
    "mutant-cdc": (_mutant_cdc, GenParams()),
    "mutant-rdc": (_mutant_rdc, GenParams()),
}

ALL = list(SUITES)


class UnknownSuite(KeyError):
    def __str__(self):
        known = ", ".join(ALL + ["all"] + list(MUTANTS))
        return f"unknown suite {self.args[0]!r} (known: {known})"


def default_params(suite_id: str) -> GenParams:
    table = {**SUITES, **MUTANTS}
    if suite_id not in table:
        raise UnknownSuite(suite_id)
    return table[suite_id][1]


def run(suite_id: str, params: GenParams | None = None) -> AxiomReport:
    """Run one suite; ``params`` falls back to the suite's defaults."""
    table = {**SUITES, **MUTANTS}
    if suite_id not in table:
        raise UnknownSuite(suite_id)
    fn, defaults = table[suite_id]
    t0 = time.perf_counter()
    report = fn(defaults if params is None else params)
    report.wall_time = time.perf_counter() - t0
    return report


def run_many(suite_id: str, params: GenParams | None = None) -> list[AxiomReport]:
    ids = ALL if suite_id == "all" else [suite_id]
    return [run(s, params) for s in ids]
