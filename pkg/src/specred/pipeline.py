"""Job runner: one command per invocation, demos with concurrent certification."""

from __future__ import annotations

import asyncio
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Awaitable, Callable, Hashable, Sequence

import numpy as np
from scipy import linalg

from specred.algebra.ratmat import RatMatrix
from specred.config import SolverConfig
from specred.errors import ParseError, SpecredError
from specred.formats import codec
from specred.formats.persist import load_document, parse_matrix
from specred.spectral import graphs, quantumwalk, reduction, trig, unfolding, walks
from specred.spectral.labeled import Frame, LabeledMatrix

logger = logging.getLogger("specred")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

# coupling singular values of the first four band blocks of the published weighted path
REFERENCE_COUPLINGS = (3.0, 4.47136, 5.56723, 6.40559)
REFERENCE_NEGATIVE_ENTRIES = 16


@dataclass
class Job:
    command: str
    inputs: list[Path] = field(default_factory=list)
    subset: list[str] | None = None
    frame: Path | None = None
    partition: list[list[str]] | None = None
    length: int = 6
    times: list[float] | None = None
    horizon: float = math.pi
    grid: int = 512
    limit: int = 4
    hermitian: bool = False
    out: Path | None = None
    config: SolverConfig = field(default_factory=SolverConfig)


@dataclass
class JobResult:
    exit_code: int
    document: dict[str, Any] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.exit_code == EXIT_OK


# Argument helpers

_PI_TIME = re.compile(r"^\s*([0-9.]*)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$")


def parse_time(token: str) -> float:
    """A float, or a multiple of pi such as "pi/2" or "3*pi/4"."""
    match = _PI_TIME.match(token)
    if match:
        factor = float(match.group(1)) if match.group(1) else 1.0
        divisor = float(match.group(2)) if match.group(2) else 1.0
        return factor * math.pi / divisor
    try:
        return float(token)
    except ValueError as exc:
        raise ParseError(f"bad time {token!r}", token=token) from exc


def resolve_labels(a: LabeledMatrix, tokens: Sequence[Any]) -> list[Hashable]:
    """Match command-line tokens to matrix labels by their string form."""
    lookup = {str(label): label for label in a.labels}
    out = []
    for token in tokens:
        key = str(token)
        if key not in lookup:
            raise ParseError(f"unknown vertex label {key!r}", label=key)
        out.append(lookup[key])
    return out


def _single_input(job: Job) -> LabeledMatrix | RatMatrix:
    if len(job.inputs) != 1:
        raise ParseError(f"{job.command} takes exactly one input file", inputs=len(job.inputs))
    return parse_matrix(job.inputs[0])


def _labeled_input(job: Job) -> LabeledMatrix:
    value = _single_input(job)
    if not isinstance(value, LabeledMatrix):
        raise ParseError(f"{job.command} needs a labeled scalar matrix")
    return value


def _subset(job: Job, a: LabeledMatrix, size: int | None = None) -> list[Hashable]:
    if not job.subset:
        raise ParseError(f"{job.command} needs --subset")
    labels = resolve_labels(a, job.subset)
    if size is not None and len(labels) != size:
        raise ParseError(f"{job.command} needs exactly {size} labels in --subset", got=len(labels))
    return labels


def _rational_input(job: Job) -> RatMatrix:
    value = _single_input(job)
    if isinstance(value, RatMatrix):
        return value
    if job.subset:
        return reduction.reduce(value, _subset(job, value), job.config)
    return value.to_ratmatrix(job.config.field())


# Commands


def cmd_reduce(job: Job) -> tuple[dict[str, Any], int]:
    a = _labeled_input(job)
    subset = _subset(job, a)
    r = reduction.reduce(a, subset, job.config)
    return {"subset": [codec.encode_label(x) for x in subset], "reduction": codec.encode_ratmatrix(r)}, EXIT_OK


def cmd_greduce(job: Job) -> tuple[dict[str, Any], int]:
    a = _labeled_input(job)
    if job.frame is None:
        raise ParseError("greduce needs --frame")
    selector = codec.decode_selector(load_document(job.frame))
    if not isinstance(selector, Frame):
        raise ParseError("the --frame document must hold a 'frame'")
    r = reduction.reduce_frame(a, selector, job.config)
    return {"frame": codec.encode_selector(selector), "reduction": codec.encode_ratmatrix(r)}, EXIT_OK


def cmd_pfd(job: Job) -> tuple[dict[str, Any], int]:
    r = _rational_input(job)
    return {"partial_fractions": codec.encode_pfd(r.partial_fractions(job.config))}, EXIT_OK


def cmd_unfold(job: Job) -> tuple[dict[str, Any], int]:
    r = _rational_input(job)
    if job.hermitian:
        u = unfolding.unfold_hermitian(r, job.config)
    else:
        u = unfolding.unfold_general(r, job.config)
    return {"unfolding": codec.encode_unfolding(u)}, EXIT_OK


def cmd_hollow(job: Job) -> tuple[dict[str, Any], int]:
    r = _rational_input(job)
    u = unfolding.hollow(unfolding.unfold_hermitian(r, job.config), job.config)
    return {"unfolding": codec.encode_unfolding(u)}, EXIT_OK


def cmd_compress(job: Job) -> tuple[dict[str, Any], int]:
    r = _rational_input(job)
    u = unfolding.unfold_hermitian(r, job.config)
    try:
        u = unfolding.hollow(u, job.config)
    except SpecredError as exc:
        logger.warning(f"Skipping hollowing: {exc}")
    u = unfolding.compress_band(u, job.config)
    if u.matrix.is_real:
        u = unfolding.sign_cleanup(u, job.config)
    return {"unfolding": codec.encode_unfolding(u)}, EXIT_OK


def cmd_qwalk(job: Job) -> tuple[dict[str, Any], int]:
    a = _labeled_input(job)
    subset = _subset(job, a)
    times = job.times or [0.0]
    return {"walk": codec.encode_walk_sample(quantumwalk.restricted_walk(a, subset, times))}, EXIT_OK


def cmd_pst(job: Job) -> tuple[dict[str, Any], int]:
    a = _labeled_input(job)
    u, v = _subset(job, a, size=2)
    if job.times:
        reports = [quantumwalk.pst_check(a, u, v, t) for t in job.times]
        certified = [r.certificate for r in reports if r.certified]
        document = {"reports": [codec.encode_pst_report(r) for r in reports]}
    else:
        certified = quantumwalk.pst_scan(a, u, v, job.horizon, job.grid)
        document = {"horizon": job.horizon, "grid": job.grid}
    document["certificates"] = [codec.encode_pst_certificate(c) for c in certified]
    return document, EXIT_OK if certified else EXIT_NEGATIVE


def cmd_divisor(job: Job) -> tuple[dict[str, Any], int]:
    a = _labeled_input(job)
    if job.partition:
        partition = graphs.VertexPartition(tuple(tuple(resolve_labels(a, c)) for c in job.partition))
    else:
        partition = graphs.distance_partition(a, _subset(job, a, size=1)[0])
    report = graphs.is_equitable(a, partition)
    document: dict[str, Any] = {
        "partition": [[codec.encode_label(x) for x in c] for c in partition.classes],
        "equitable": codec.encode_equitable(report),
    }
    if not report.equitable:
        return document, EXIT_NEGATIVE
    document["symmetrized_divisor"] = codec.encode_matrix(graphs.symmetrized_divisor(a, partition))
    document["divisor_is_reduction"] = graphs.divisor_is_reduction_check(a, partition, job.config)
    return document, EXIT_OK


def cmd_walkgen(job: Job) -> tuple[dict[str, Any], int]:
    a = _labeled_input(job)
    subset = _subset(job, a)
    returning = walks.walk_series_returning(a, subset, job.length, job.config)
    nonreturning = walks.walk_series_nonreturning(a, subset, max(job.length, 1), job.config)
    identity = walks.walk_identity_check(a, subset, job.length, job.config)
    document = {
        "returning": codec.encode_walk_series(returning),
        "nonreturning": codec.encode_walk_series(nonreturning),
        "identity_holds": identity,
    }
    return document, EXIT_OK if identity else EXIT_NEGATIVE


# Demos


async def _certify_all(
    jobs: Sequence[tuple[str, Callable[[], dict[str, Any]]]],
) -> tuple[list[dict[str, Any]], list[str]]:
    """Run certification callables concurrently; crashes are logged and reported."""

    async def run_one(name: str, fn: Callable[[], dict[str, Any]]) -> dict[str, Any]:
        logger.info(f"Certifying {name}...")
        result = await asyncio.to_thread(fn)
        logger.info(f"  {name}: {'ok' if result.get('passed') else 'FAILED'}")
        return {"name": name, **result}

    results = await asyncio.gather(*(run_one(name, fn) for name, fn in jobs), return_exceptions=True)
    documents, errors = [], []
    for (name, _), result in zip(jobs, results):
        if isinstance(result, Exception):
            logger.error(f"Certification of {name} crashed: {result}")
            errors.append(f"{name}: {result}")
            documents.append({"name": name, "passed": False, "error": str(result)})
            continue
        documents.append(result)
    return documents, errors


def _certify_variant(
    variant: graphs.Q4Variant, cube: LabeledMatrix, times: Sequence[float], config: SolverConfig
) -> dict[str, Any]:
    g = variant.graph
    partition = graphs.distance_partition(g, 1)
    report = quantumwalk.pst_check(g, 1, 16, math.pi / 2)
    equivalent = quantumwalk.walk_equivalence_check(
        cube, ["0000", "1111"], g, [1, 16], times, config=config.with_backend("exact")
    )
    checks = {
        "four_regular": bool(np.all(g.numeric.sum(axis=1) == 4)),
        "hollow": bool(np.all(np.diag(g.numeric) == 0)),
        "symmetric": g.hermitian,
        "divisor_matches": bool(np.array_equal(graphs.divisor_matrix(g, partition).astype(int), graphs.hypercube_divisor(4))),
        "pst": report.certified,
        "walk_equivalent": equivalent,
    }
    return {
        "upper": str(variant.upper),
        "lower": str(variant.lower),
        "graph": codec.encode_labeled(g),
        "certificate": codec.encode_pst_certificate(report.certificate) if report.certified else None,
        "checks": checks,
        "passed": all(checks.values()),
    }


async def demo_hypercube(job: Job) -> JobResult:
    """Hypercube Q4 and non-isomorphic 16-vertex graphs sharing its antipodal transfer."""
    config = job.config
    logger.info("Phase 1: Hypercube Q4...")
    cube = graphs.hypercube(4)
    partition = graphs.distance_partition(cube, "0000")
    cube_report = quantumwalk.pst_check(cube, "0000", "1111", math.pi / 2)
    cube_checks = {
        "distance_sizes": partition.sizes == [1, 4, 6, 4, 1],
        "divisor_tridiagonal": bool(
            np.array_equal(graphs.divisor_matrix(cube, partition).astype(int), graphs.hypercube_divisor(4))
        ),
        "divisor_is_reduction": graphs.divisor_is_reduction_check(cube, partition, config.with_backend("exact")),
        "pst": cube_report.certified,
    }

    logger.info("Phase 2: Enumerating variants...")
    variants = graphs.enumerate_q4_variants(job.limit)

    logger.info("Phase 3: Certifying variants...")
    times = list(np.linspace(0.0, math.pi, 50))
    documents, errors = await _certify_all(
        [(f"variant-{k + 1}", lambda v=v: _certify_variant(v, cube, times, config)) for k, v in enumerate(variants)]
    )

    summary = {
        "hypercube": all(cube_checks.values()),
        "variants_found": len(variants),
        "enough_variants": len(variants) >= job.limit,
        "all_variants_certified": bool(documents) and all(d.get("passed") for d in documents),
    }
    document = {
        "hypercube": {
            "certificate": codec.encode_pst_certificate(cube_report.certificate) if cube_report.certified else None,
            "checks": cube_checks,
        },
        "variants": documents,
        "summary": summary,
    }
    passed = all(summary[k] for k in ("hypercube", "enough_variants", "all_variants_certified"))
    if not passed:
        logger.error(f"Hypercube demo invariants failed: {summary}")
    return JobResult(EXIT_OK if passed else EXIT_NEGATIVE, document, errors)


def _band_blocks(matrix: np.ndarray, sizes: Sequence[int]) -> tuple[list[list[float]], list[list[float]]]:
    bounds = np.cumsum([0] + list(sizes))
    diagonal, coupling = [], []
    for k in range(len(sizes)):
        block = matrix[bounds[k] : bounds[k + 1], bounds[k] : bounds[k + 1]]
        diagonal.append([float(x) for x in linalg.eigvalsh(block)])
        if k + 1 < len(sizes):
            off = matrix[bounds[k] : bounds[k + 1], bounds[k + 1] : bounds[k + 2]]
            coupling.append([float(x) for x in linalg.svdvals(off)])
    return diagonal, coupling


async def demo_weighted_pst(job: Job) -> JobResult:
    """A weighted 16-vertex matrix whose first two vertices walk like the odd-power target."""
    config = job.config
    logger.info("Phase 1: Reduction from the target walk...")
    target = trig.odd_power_target()
    r = await asyncio.to_thread(quantumwalk.reduction_from_trig_walk, target, config.with_backend("exact"))
    feasibility = unfolding.check_hermitian_feasibility(r, config)

    logger.info("Phase 2: Unfolding pipeline...")
    u = unfolding.unfold_hermitian(r, config)
    u = unfolding.hollow(u, config)
    u = unfolding.compress_band(u, config)
    u = unfolding.sign_cleanup(u, config)
    final = u.matrix
    logger.info(f"  Final matrix: {final.n}x{final.n}, blocks {list(u.blocks)}")

    logger.info("Phase 3: Certifying...")
    times = list(np.linspace(0.0, math.pi, 50))
    odd = np.arange(-15, 16, 2, dtype=float)
    diagonal, coupling = _band_blocks(np.asarray(final.numeric, dtype=float), u.blocks)

    def spectrum() -> dict[str, Any]:
        w = linalg.eigvalsh(final.numeric)
        ok = len(w) == len(odd) and bool(np.max(np.abs(np.sort(w) - odd)) <= 1e-6)
        return {"eigenvalues": [float(x) for x in w], "passed": ok}

    def transfer() -> dict[str, Any]:
        report = quantumwalk.pst_check(final, 1, 2, math.pi / 2)
        return {"report": codec.encode_pst_report(report), "passed": report.certified}

    def walk() -> dict[str, Any]:
        sample = quantumwalk.restricted_walk(final, [1, 2], times)
        worst = max(float(np.max(np.abs(b - target.evaluate(t)))) for t, b in zip(times, sample.blocks))
        return {"max_deviation": worst, "passed": worst <= 1e-8}

    def band() -> dict[str, Any]:
        return {"blocks": list(u.blocks), "passed": unfolding.band_envelope_ok(u)}

    def hollowness() -> dict[str, Any]:
        worst = float(np.max(np.abs(np.diag(final.numeric))))
        return {"max_diagonal": worst, "passed": u.hollow and worst <= unfolding.HOLLOW_TOL}

    def couplings() -> dict[str, Any]:
        found = coupling[: len(REFERENCE_COUPLINGS)]
        worst = max(
            (abs(x - ref) for values, ref in zip(found, REFERENCE_COUPLINGS) for x in values), default=np.inf
        )
        ok = len(found) == len(REFERENCE_COUPLINGS) and worst <= 1e-3
        return {"reference": list(REFERENCE_COUPLINGS), "max_deviation": float(worst), "passed": ok}

    documents, errors = await _certify_all(
        [
            ("spectrum", spectrum),
            ("pst", transfer),
            ("walk", walk),
            ("band", band),
            ("hollow", hollowness),
            ("couplings", couplings),
        ]
    )
    negatives = u.provenance[-1]["params"]["negative_entries"]
    checks = {d["name"]: bool(d.get("passed")) for d in documents}
    checks["feasible"] = feasibility.feasible
    checks["hermitian"] = final.hermitian
    document = {
        "reduction": codec.encode_ratmatrix(r),
        "feasibility": feasibility.to_dict(),
        "unfolding": codec.encode_unfolding(u),
        "certificates": documents,
        "gauge_invariants": {"diagonal_block_spectra": diagonal, "coupling_singular_values": coupling},
        "gauge": {
            "negative_entries": negatives,
            "reference_negative_entries": REFERENCE_NEGATIVE_ENTRIES,
            "matches_reference": negatives == REFERENCE_NEGATIVE_ENTRIES,
            "note": "sign cleanup picks its own diagonal gauge; compare the gauge invariants, not entries",
        },
        "checks": checks,
    }
    passed = all(checks.values())
    if not passed:
        logger.error(f"Weighted transfer demo invariants failed: {checks}")
    return JobResult(EXIT_OK if passed else EXIT_NEGATIVE, document, errors)


COMMANDS: dict[str, Callable[[Job], tuple[dict[str, Any], int]]] = {
    "reduce": cmd_reduce,
    "greduce": cmd_greduce,
    "pfd": cmd_pfd,
    "unfold": cmd_unfold,
    "hollow": cmd_hollow,
    "compress": cmd_compress,
    "qwalk": cmd_qwalk,
    "pst": cmd_pst,
    "divisor": cmd_divisor,
    "walkgen": cmd_walkgen,
}

DEMOS: dict[str, Callable[[Job], Awaitable[JobResult]]] = {
    "demo-hypercube": demo_hypercube,
    "demo-weighted-pst": demo_weighted_pst,
}


async def run_job(job: Job) -> JobResult:
    """Run one job; module errors become an exit-2 error document."""
    logger.info(f"Running {job.command} (backend {job.config.backend})")
    try:
        if job.command in DEMOS:
            return await DEMOS[job.command](job)
        if job.command not in COMMANDS:
            raise ParseError(f"unknown command {job.command!r}", command=job.command)
        document, code = await asyncio.to_thread(COMMANDS[job.command], job)
        return JobResult(code, document)
    except SpecredError as exc:
        logger.error(f"{exc.name}: {exc}")
        return JobResult(EXIT_ERROR, exc.to_dict(), [str(exc)])
