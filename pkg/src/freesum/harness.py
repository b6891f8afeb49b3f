"""Randomized invariant suites behind the ``selftest`` subcommand."""

from __future__ import annotations

import itertools
import logging
import random
import time
from dataclasses import dataclass, field

from .bkk import check_face_conditions, free_sum_supports
from .ehrhart import ehrhart_data, h_star_vector, lattice_point_count
from .generate import (
    ORIGIN_MODES,
    RandomInstanceSpec,
    cross_polytope,
    cube,
    derive_seed,
    gen_random,
    random_unimodular,
)
from .sums import free_sum, mixed_volume, verify_product_formula
from .volume import normalized_volume

log = logging.getLogger(__name__)

SUITES = ("product_formula", "ehrhart", "braun", "mixed_volume", "certificate")


@dataclass
class SelftestSummary:
    trials: int
    seed: int
    passed: dict = field(default_factory=lambda: {s: 0 for s in SUITES})
    failed: dict = field(default_factory=lambda: {s: 0 for s in SUITES})
    failures: list = field(default_factory=list)
    runtime: float = 0.0

    @property
    def ok(self) -> bool:
        return not any(self.failed.values())

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "suites": {s: {"passed": self.passed[s], "failed": self.failed[s]} for s in SUITES},
            "failures": self.failures[:20],
            "ok": self.ok,
            "runtime_seconds": round(self.runtime, 3),
        }


def _spec(rng: random.Random, dim: int, bound: int, mode: str | None = None, points=(4, 8)):
    return RandomInstanceSpec(
        ambient_dim=dim,
        num_points=rng.randint(*points),
        coordinate_bound=bound,
        origin_mode=mode or rng.choice(ORIGIN_MODES),
        seed=rng.getrandbits(64),
    )


def _product_formula(rng, fault):
    m, n = rng.randint(1, 3), rng.randint(1, 3)
    P = gen_random(_spec(rng, m, 4))
    Q = gen_random(_spec(rng, n, 4))
    report = verify_product_formula(P, Q)
    vol_sum = report.vol_sum + (1 if fault == "flip-volume" else 0)
    if vol_sum != report.vol_p * report.vol_q:
        return f"Vol(P+Q)={vol_sum} but Vol(P)Vol(Q)={report.vol_p * report.vol_q} for {P} and {Q}"
    return None


def _ehrhart(rng, fault):
    d = rng.randint(1, 3)
    P = gen_random(_spec(rng, d, 2))
    data = ehrhart_data(P)  # raises on any internal mismatch
    h = data.h_star
    if h[0] != 1 or any(x < 0 for x in h) or sum(h) != normalized_volume(P):
        return f"h* invariants fail for {P}: {h}"
    if d >= 1 and h[1] != lattice_point_count(P, 1) - (d + 1):
        return f"h*_1 != L(1) - (d+1) for {P}"
    return None


def _braun(rng, fault):
    m = rng.randint(1, 2)
    base = rng.choice((cube, cross_polytope))(m)
    P = base.linear_image(random_unimodular(m, rng))
    n = rng.randint(1, 2)
    Q = gen_random(_spec(rng, n, 2, "interior"))
    direct = h_star_vector(free_sum(P, Q))
    hp, hq = h_star_vector(P), h_star_vector(Q)
    product = [0] * (len(hp) + len(hq) - 1)
    for i, a in enumerate(hp):
        for j, b in enumerate(hq):
            product[i + j] += a * b
    if direct != product:
        return f"Braun's formula fails for {P} and {Q}: {direct} vs {product}"
    return None


def _mixed_volume(rng, fault):
    n = rng.randint(1, 3)
    Q = gen_random(_spec(rng, n, 3))
    if mixed_volume([Q] * n) != normalized_volume(Q):
        return f"MV diagonal fails for {Q}"
    if n >= 2:
        others = [gen_random(_spec(rng, n, 2)) for _ in range(n)]
        values = {mixed_volume(list(perm)) for perm in itertools.permutations(others)}
        if len(values) != 1:
            return f"MV not symmetric: {sorted(values)}"
    return None


def _certificate(rng, fault):
    m = rng.randint(1, 2)
    n = rng.randint(1, 3 - m + 1)
    P = gen_random(_spec(rng, m, 3))
    Q = gen_random(_spec(rng, n, 3))
    supports = free_sum_supports(P, Q)
    report = check_face_conditions(supports)
    if any(f.verdict not in ("A", "C") for f in report.faces):
        return f"free-sum face outside cases A/C for {P} and {Q}"
    vol_sum = normalized_volume(free_sum(P, Q))
    mv = mixed_volume(supports)
    if not vol_sum == mv == normalized_volume(P) * normalized_volume(Q):
        return f"chain of equalities broken for {P} and {Q}"
    return None


_RUNNERS = {
    "product_formula": _product_formula,
    "ehrhart": _ehrhart,
    "braun": _braun,
    "mixed_volume": _mixed_volume,
    "certificate": _certificate,
}


def selftest(trials: int, seed: int, fault: str | None = None) -> SelftestSummary:
    """Run every suite ``trials`` times; trial k of suite s uses sub-seed (seed, s, k).

    ``fault`` is a test-only hook: ``"flip-volume"`` corrupts the free-sum volume
    so that the product-formula suite must fail.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    summary = SelftestSummary(trials, seed)
    start = time.perf_counter()
    for suite in SUITES:
        runner = _RUNNERS[suite]
        for k in range(trials):
            rng = random.Random(derive_seed(seed, suite, k))
            try:
                problem = runner(rng, fault)
            except Exception as exc:  # every failure is reported, none aborts the run
                problem = f"{type(exc).__name__}: {exc}"
            if problem is None:
                summary.passed[suite] += 1
            else:
                summary.failed[suite] += 1
                summary.failures.append({"suite": suite, "trial": k, "detail": problem})
                log.warning("%s trial %d failed: %s", suite, k, problem)
    summary.runtime = time.perf_counter() - start
    return summary
