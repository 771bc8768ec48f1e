"""Experiment configuration, dispatch, persistence, and plot-data emission.

Config files are flat key-value text: one `section.key = value` assignment
per line, full-line `#` comments, no nesting.  Sections: model, disorder,
interaction (optional), task, run.  Unknown keys, duplicate keys, syntax
errors and constraint violations are all collected with line numbers and
reported together.

Every run writes its CSV outputs atomically (temp file + rename) plus a
JSON manifest echoing the effective configuration, so a run can be
reproduced bit-for-bit from its output directory.  CSV bytes depend only on
(config, seed), never on the worker count or the wall clock.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from . import _parallel
from .disorder import (
    BERNOULLI,
    FINITE_DISCRETE,
    UNIFORM,
    DisorderSpec,
    sample,
    validate_assumption_P,
)
from .geometry import ConfigPoint, Cube, single_particle_sites, sites
from .hamiltonian import (
    FINITE_RANGE,
    SUB_EXPONENTIAL,
    InteractionSpec,
    build,
    validate_interaction_bound,
)
from .msa import EXACT_BERNOULLI, MONTE_CARLO, MsaParams, msa_report, scale_sequence
from .observables import (
    DEFAULT_SHELL_FLOOR,
    DEFAULT_VERTEX_LIMIT,
    DecayFit,
    DecayFitError,
    decay_fit,
    moment_samples,
)
from .spectral import DENSE_LIMIT, eigensolve

TASK_TYPES = ("msa", "decay", "moment", "spectrum")


class ConfigError(Exception):
    """Carries a structured list of (line, message) config problems."""

    def __init__(self, errors: list[tuple[int, str]]):
        self.errors = list(errors)
        summary = "; ".join(
            f"line {line}: {msg}" if line else msg for line, msg in self.errors
        )
        super().__init__(summary)


# ---------------------------------------------------------------------------
# Config model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelBlock:
    N: int = 1
    n: int = 1
    d: int = 1
    h: float = 0.0
    dense_limit: int = DENSE_LIMIT


@dataclass(frozen=True)
class TaskBlock:
    type: str
    # msa
    m: float | None = None
    p: float | None = None
    E_lo: float | None = None
    E_hi: float | None = None
    energy_grid_step: float | None = None
    L_values: tuple[int, ...] | None = None
    mode: str | None = None
    # decay / moment / spectrum
    L: int | None = None
    s: float | None = None
    K_radius: int | None = None
    vertex_limit: int | None = None
    shell_floor: float | None = None
    min_shells: int | None = None


@dataclass(frozen=True)
class RunBlock:
    master_seed: int = 0
    realizations: int = 1
    workers: int = 1
    out: str = "out"


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelBlock
    disorder: DisorderSpec
    task: TaskBlock
    run: RunBlock
    interaction: InteractionSpec | None = None


# key -> value converter name
_SCHEMA: dict[str, str] = {
    "model.N": "int",
    "model.n": "int",
    "model.d": "int",
    "model.h": "float",
    "model.dense_limit": "int",
    "disorder.kind": "str",
    "disorder.values": "float_list",
    "disorder.probabilities": "float_list",
    "disorder.q": "float",
    "disorder.amplitude": "float",
    "interaction.kind": "str",
    "interaction.C": "float",
    "interaction.c": "float",
    "interaction.tau": "float",
    "interaction.cutoff": "int",
    "task.type": "str",
    "task.m": "float",
    "task.p": "float",
    "task.E_lo": "float",
    "task.E_hi": "float",
    "task.energy_grid_step": "float",
    "task.L_values": "int_list",
    "task.L0": "int",
    "task.count": "int",
    "task.alpha": "float",
    "task.mode": "str",
    "task.L": "int",
    "task.s": "float",
    "task.K_radius": "int",
    "task.vertex_limit": "int",
    "task.shell_floor": "float",
    "task.min_shells": "int",
    "run.master_seed": "int",
    "run.realizations": "int",
    "run.workers": "int",
    "run.out": "str",
}

_TASK_KEYS: dict[str, set[str]] = {
    "msa": {
        "task.m",
        "task.p",
        "task.E_lo",
        "task.E_hi",
        "task.energy_grid_step",
        "task.L_values",
        "task.L0",
        "task.count",
        "task.alpha",
        "task.mode",
    },
    "decay": {"task.L", "task.shell_floor", "task.min_shells"},
    "moment": {
        "task.L",
        "task.E_lo",
        "task.E_hi",
        "task.s",
        "task.K_radius",
        "task.vertex_limit",
    },
    "spectrum": {"task.L"},
}


def _convert(kind: str, raw: str):
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    if kind == "float_list":
        return tuple(float(part) for part in raw.split(","))
    if kind == "int_list":
        return tuple(int(part) for part in raw.split(","))
    return raw


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a config; raises ConfigError listing all problems."""
    errors: list[tuple[int, str]] = []
    seen: dict[str, tuple[int, object]] = {}

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            errors.append((lineno, f"syntax error: expected 'section.key = value', got {stripped!r}"))
            continue
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _SCHEMA:
            errors.append((lineno, f"unknown key {key!r}"))
            continue
        if key in seen:
            errors.append(
                (lineno, f"duplicate key {key!r} (first set on line {seen[key][0]})")
            )
            continue
        try:
            value = _convert(_SCHEMA[key], raw)
        except ValueError:
            errors.append((lineno, f"bad value for {key!r}: {raw!r}"))
            continue
        seen[key] = (lineno, value)

    if errors:
        raise ConfigError(errors)

    values = {key: entry[1] for key, entry in seen.items()}
    lines = {key: entry[0] for key, entry in seen.items()}

    def bad(key: str, message: str) -> None:
        errors.append((lines.get(key, 0), f"{key}: {message}"))

    model = ModelBlock(
        N=values.get("model.N", 1),
        n=values.get("model.n", values.get("model.N", 1)),
        d=values.get("model.d", 1),
        h=values.get("model.h", 0.0),
        dense_limit=values.get("model.dense_limit", DENSE_LIMIT),
    )
    if model.N < 1:
        bad("model.N", "particle count must be >= 1")
    elif not 1 <= model.n <= model.N:
        bad("model.n", f"must satisfy 1 <= n <= N = {model.N}")
    if model.d < 1:
        bad("model.d", "dimension must be >= 1")
    if model.dense_limit < 1:
        bad("model.dense_limit", "dense limit must be >= 1")

    disorder = _parse_disorder(values, bad)
    interaction = _parse_interaction(values, bad)
    task = _parse_task(values, bad)
    run_block = RunBlock(
        master_seed=values.get("run.master_seed", 0),
        realizations=values.get("run.realizations", 1),
        workers=values.get("run.workers", 1),
        out=values.get("run.out", "out"),
    )
    if run_block.realizations < 1:
        bad("run.realizations", "must be >= 1")
    if run_block.workers < 0:
        bad("run.workers", "must be >= 0 (0 = auto)")

    if task is not None and task.type == "msa" and task.mode == EXACT_BERNOULLI:
        if disorder is not None and disorder.kind != BERNOULLI:
            bad("task.mode", "ExactBernoulli requires disorder.kind = Bernoulli")

    if errors:
        raise ConfigError(errors)
    return ExperimentConfig(
        model=model,
        disorder=disorder,
        task=task,
        run=run_block,
        interaction=interaction,
    )


def _parse_disorder(values: dict, bad) -> DisorderSpec | None:
    kind = values.get("disorder.kind")
    if kind is None:
        bad("disorder.kind", "missing required key")
        return None
    if kind not in (BERNOULLI, FINITE_DISCRETE, UNIFORM):
        bad("disorder.kind", f"unsupported kind {kind!r}")
        return None
    vals = values.get("disorder.values")
    if vals is None:
        bad("disorder.values", "missing required key")
        return None
    amplitude = values.get("disorder.amplitude", 1.0)
    spec: DisorderSpec | None = None
    if kind == BERNOULLI:
        if "disorder.probabilities" in values:
            bad("disorder.probabilities", "Bernoulli uses disorder.q instead")
        q = values.get("disorder.q", 0.5)
        if len(vals) != 2:
            bad("disorder.values", "Bernoulli takes exactly two values a,b")
            return None
        if not 0.0 <= q <= 1.0:
            bad("disorder.q", "must lie in [0, 1]")
            return None
        spec = DisorderSpec.bernoulli(vals[0], vals[1], q, amplitude)
    elif kind == FINITE_DISCRETE:
        if "disorder.q" in values:
            bad("disorder.q", "only valid for Bernoulli")
        probs = values.get("disorder.probabilities")
        if probs is None:
            bad("disorder.probabilities", "missing required key")
            return None
        spec = DisorderSpec.finite_discrete(vals, probs, amplitude)
    else:
        for key in ("disorder.q", "disorder.probabilities"):
            if key in values:
                bad(key, "not valid for Uniform")
        if len(vals) != 2:
            bad("disorder.values", "Uniform takes an interval a,b")
            return None
        spec = DisorderSpec.uniform(vals[0], vals[1], amplitude)
    try:
        spec.validate()
    except ValueError as exc:
        bad("disorder.values", str(exc))
        return None
    return spec


def _parse_interaction(values: dict, bad) -> InteractionSpec | None:
    present = [key for key in values if key.startswith("interaction.")]
    if not present:
        return None
    kind = values.get("interaction.kind", SUB_EXPONENTIAL)
    if kind not in (SUB_EXPONENTIAL, FINITE_RANGE):
        bad("interaction.kind", f"unsupported kind {kind!r}")
        return None
    try:
        return InteractionSpec(
            kind=kind,
            C=values.get("interaction.C", 1.0),
            c=values.get("interaction.c", 1.0),
            tau=values.get("interaction.tau", 0.5),
            cutoff=values.get("interaction.cutoff"),
        )
    except ValueError as exc:
        bad("interaction.kind", str(exc))
        return None


def _parse_task(values: dict, bad) -> TaskBlock | None:
    task_type = values.get("task.type")
    if task_type is None:
        bad("task.type", "missing required key")
        return None
    if task_type not in TASK_TYPES:
        bad("task.type", f"unknown task {task_type!r}; expected one of {TASK_TYPES}")
        return None
    allowed = _TASK_KEYS[task_type] | {"task.type"}
    for key in values:
        if key.startswith("task.") and key not in allowed:
            bad(key, f"not valid for task type {task_type!r}")

    if task_type == "msa":
        if values.get("task.m") is None:
            bad("task.m", "missing required key for msa")
            return None
        explicit = values.get("task.L_values")
        derived = None
        if "task.L0" in values or "task.count" in values:
            if explicit is not None:
                bad("task.L_values", "give either L_values or L0/count, not both")
                return None
            if "task.L0" not in values or "task.count" not in values:
                bad("task.L0", "scale recursion needs both task.L0 and task.count")
                return None
            try:
                derived = tuple(
                    scale_sequence(
                        values["task.L0"],
                        values["task.count"],
                        values.get("task.alpha", 1.5),
                    )
                )
            except ValueError as exc:
                bad("task.L0", str(exc))
                return None
        L_values = explicit if explicit is not None else derived
        if L_values is None:
            bad("task.L_values", "missing scales: give L_values or L0/count")
            return None
        if any(L < 1 for L in L_values):
            bad("task.L_values", "scales must be >= 1")
            return None
        mode = values.get("task.mode", MONTE_CARLO)
        if mode not in (MONTE_CARLO, EXACT_BERNOULLI):
            bad("task.mode", f"unknown mode {mode!r}")
            return None
        E_lo = values.get("task.E_lo", 0.0)
        E_hi = values.get("task.E_hi", 1.0)
        if E_lo > E_hi:
            bad("task.E_lo", "must satisfy E_lo <= E_hi")
            return None
        return TaskBlock(
            type="msa",
            m=values["task.m"],
            p=values.get("task.p", 7.0),
            E_lo=E_lo,
            E_hi=E_hi,
            energy_grid_step=values.get("task.energy_grid_step", 1e-3),
            L_values=L_values,
            mode=mode,
        )

    L = values.get("task.L")
    if L is None:
        bad("task.L", f"missing required key for {task_type}")
        return None
    if L < 0:
        bad("task.L", "cube radius must be >= 0")
        return None
    if task_type == "decay":
        return TaskBlock(
            type="decay",
            L=L,
            shell_floor=values.get("task.shell_floor", DEFAULT_SHELL_FLOOR),
            min_shells=values.get("task.min_shells", 3),
        )
    if task_type == "moment":
        missing = [k for k in ("task.E_lo", "task.E_hi", "task.s", "task.K_radius") if k not in values]
        if missing:
            bad(missing[0], "missing required key for moment")
            return None
        if values["task.E_lo"] > values["task.E_hi"]:
            bad("task.E_lo", "must satisfy E_lo <= E_hi")
            return None
        if values["task.s"] < 0:
            bad("task.s", "only s >= 0 is supported")
            return None
        return TaskBlock(
            type="moment",
            L=L,
            E_lo=values["task.E_lo"],
            E_hi=values["task.E_hi"],
            s=values["task.s"],
            K_radius=values["task.K_radius"],
            vertex_limit=values.get("task.vertex_limit", DEFAULT_VERTEX_LIMIT),
        )
    return TaskBlock(type="spectrum", L=L)


def dumps_config(config: ExperimentConfig) -> str:
    """Canonical text form; parse_config(dumps_config(c)) == c."""
    lines: list[str] = []

    def put(key: str, value) -> None:
        if value is None:
            return
        if isinstance(value, tuple):
            value = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")

    m = config.model
    put("model.N", m.N)
    put("model.n", m.n)
    put("model.d", m.d)
    put("model.h", m.h)
    put("model.dense_limit", m.dense_limit)

    dis = config.disorder
    put("disorder.kind", dis.kind)
    put("disorder.values", dis.values)
    if dis.kind == BERNOULLI:
        put("disorder.q", dis.probabilities[1])
    elif dis.kind == FINITE_DISCRETE:
        put("disorder.probabilities", dis.probabilities)
    put("disorder.amplitude", dis.amplitude)

    if config.interaction is not None:
        ispec = config.interaction
        put("interaction.kind", ispec.kind)
        put("interaction.C", ispec.C)
        put("interaction.c", ispec.c)
        put("interaction.tau", ispec.tau)
        put("interaction.cutoff", ispec.cutoff)

    t = config.task
    put("task.type", t.type)
    put("task.m", t.m)
    put("task.p", t.p)
    put("task.E_lo", t.E_lo)
    put("task.E_hi", t.E_hi)
    put("task.energy_grid_step", t.energy_grid_step)
    put("task.L_values", t.L_values)
    put("task.mode", t.mode)
    put("task.L", t.L)
    put("task.s", t.s)
    put("task.K_radius", t.K_radius)
    put("task.vertex_limit", t.vertex_limit)
    put("task.shell_floor", t.shell_floor)
    put("task.min_shells", t.min_shells)

    r = config.run
    put("run.master_seed", r.master_seed)
    put("run.realizations", r.realizations)
    put("run.workers", r.workers)
    put("run.out", r.out)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


@dataclass
class RunManifest:
    config_echo: str
    artifact_version: str
    timestamp: str
    outputs: list[str]
    wall_time_s: float


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + f".tmp.{os.getpid()}")
    try:
        tmp.write_text(text)
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def run(
    config: ExperimentConfig,
    cli_seed: int | None = None,
    cli_workers: int | None = None,
    out_override: str | None = None,
    plot: bool = False,
) -> RunManifest:
    """Dispatch the configured task, write outputs atomically, emit manifest."""
    start = time.perf_counter()
    if cli_seed is not None:
        config = replace(config, run=replace(config.run, master_seed=cli_seed))
    workers = _parallel.effective_workers(config.run.workers, cli_workers)
    out_dir = Path(out_override or config.run.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    task = config.task.type
    if task == "msa":
        outputs = _run_msa(config, workers, out_dir, plot)
    elif task == "decay":
        outputs = _run_decay(config, workers, out_dir, plot)
    elif task == "moment":
        outputs = _run_moment(config, workers, out_dir, plot)
    else:
        outputs = _run_spectrum(config, workers, out_dir, plot)

    manifest = RunManifest(
        config_echo=dumps_config(config),
        artifact_version=__version__,
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        outputs=[str(p) for p in outputs],
        wall_time_s=time.perf_counter() - start,
    )
    _atomic_write_text(
        out_dir / "run_manifest.json",
        json.dumps(manifest.__dict__, indent=2) + "\n",
    )
    return manifest


def _run_msa(config: ExperimentConfig, workers: int, out_dir: Path, plot: bool) -> list[Path]:
    t, m_block, r = config.task, config.model, config.run
    params = MsaParams(
        N=m_block.N,
        n=m_block.n,
        d=m_block.d,
        m=t.m,
        p=t.p,
        h=m_block.h,
        interval=(t.E_lo, t.E_hi),
        L_values=t.L_values,
        realizations=r.realizations,
        master_seed=r.master_seed,
        energy_grid_step=t.energy_grid_step,
        mode=t.mode,
        dense_limit=m_block.dense_limit,
    )
    estimates = msa_report(params, config.disorder, config.interaction, workers)
    constraint = 6 * params.N * params.d
    ok = "satisfied" if params.p > constraint else "NOT satisfied"
    header = (
        "# msa pair-singularity estimates (grid-relative)\n"
        f"# p = {_fmt(params.p)}; theory constraint p > 6*N*d = {constraint} is {ok}\n"
        "# L,n,N,estimate,ci_low,ci_high,target,samples,energy_points,seed\n"
    )
    rows = [
        f"{e.L},{params.n},{params.N},{_fmt(e.estimate)},{_fmt(e.ci_low)},"
        f"{_fmt(e.ci_high)},{_fmt(e.target)},{e.samples_used},{e.energy_points_used},"
        f"{params.master_seed}"
        for e in estimates
    ]
    csv_path = out_dir / "msa.csv"
    _atomic_write_text(csv_path, header + "\n".join(rows) + ("\n" if rows else ""))
    outputs = [csv_path]
    if plot:
        est_lines = [
            f"{e.L} {_fmt(math.log10(e.estimate))}" for e in estimates if e.estimate > 0
        ]
        tgt_lines = [f"{e.L} {_fmt(math.log10(e.target))}" for e in estimates]
        for name, lines in (("msa_estimate.dat", est_lines), ("msa_target.dat", tgt_lines)):
            path = out_dir / name
            _atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))
            outputs.append(path)
    return outputs


@dataclass(frozen=True)
class _DecayJob:
    config: ExperimentConfig


def _decay_worker(job: _DecayJob, index: int):
    config = job.config
    m_block, t = config.model, config.task
    region = Cube(ConfigPoint.origin(m_block.n, m_block.d), t.L)
    realization = sample(
        config.disorder, single_particle_sites(region), config.run.master_seed, index
    )
    hm = build(region, realization, config.interaction, m_block.h)
    spectrum = eigensolve(hm, m_block.dense_limit)
    rows = []
    fits: list[DecayFit | None] = []
    for j in range(spectrum.size):
        energy = spectrum.eigenvalues[j]
        try:
            fit = decay_fit(
                spectrum, j, min_shells=t.min_shells, floor=t.shell_floor
            )
            rows.append(
                f"{index},{j},{_fmt(energy)},{_fmt(fit.rate)},{_fmt(fit.r_squared)},"
                f"{fit.shells_used},ok"
            )
            fits.append(fit)
        except DecayFitError:
            rows.append(f"{index},{j},{_fmt(energy)},nan,nan,0,skip:too_few_shells")
            fits.append(None)
    return rows, fits if index == 0 else None


def _run_decay(config: ExperimentConfig, workers: int, out_dir: Path, plot: bool) -> list[Path]:
    results = _parallel.run_indexed(
        _decay_worker, _DecayJob(config), config.run.realizations, workers
    )
    header = "# eigenfunction decay fits\n# realization,eigen_index,energy,rate,r_squared,shells,status\n"
    rows = [line for worker_rows, _ in results for line in worker_rows]
    csv_path = out_dir / "decay.csv"
    _atomic_write_text(csv_path, header + "\n".join(rows) + ("\n" if rows else ""))
    outputs = [csv_path]
    if plot:
        fits = results[0][1] or []
        chosen: DecayFit | None = None
        for fit in fits:
            if fit is not None and (chosen is None or fit.r_squared > chosen.r_squared):
                chosen = fit
        shell_lines, line_lines = [], []
        if chosen is not None:
            shell_lines = [
                f"{_fmt(r)} {_fmt(v)}"
                for r, v in zip(chosen.shell_radii, chosen.shell_log_maxima)
            ]
            line_lines = [
                f"{_fmt(r)} {_fmt(chosen.intercept - chosen.rate * r)}"
                for r in chosen.shell_radii
            ]
        for name, lines in (("decay_shells.dat", shell_lines), ("decay_fitline.dat", line_lines)):
            path = out_dir / name
            _atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))
            outputs.append(path)
    return outputs


def _run_moment(config: ExperimentConfig, workers: int, out_dir: Path, plot: bool) -> list[Path]:
    m_block, t, r = config.model, config.task, config.run
    region = Cube(ConfigPoint.origin(m_block.n, m_block.d), t.L)
    K = [x for x in sites(region) if max(abs(c) for c in x.coords) <= t.K_radius]
    results = moment_samples(
        region,
        config.disorder,
        config.interaction,
        m_block.h,
        (t.E_lo, t.E_hi),
        t.s,
        K,
        r.realizations,
        r.master_seed,
        vertex_limit=t.vertex_limit,
        dense_limit=m_block.dense_limit,
        workers=workers,
    )
    mean = float(np.mean([res.value for res in results]))
    header = (
        "# Hilbert-Schmidt dynamical-localization moments\n"
        f"# disorder-averaged mean = {_fmt(mean)}\n"
        "# realization,seed,value,method\n"
    )
    rows = [
        f"{i},{r.master_seed},{_fmt(res.value)},{res.method}"
        for i, res in enumerate(results)
    ]
    csv_path = out_dir / "moment.csv"
    _atomic_write_text(csv_path, header + "\n".join(rows) + ("\n" if rows else ""))
    outputs = [csv_path]
    if plot:
        lines = [f"{i} {_fmt(res.value)}" for i, res in enumerate(results)]
        path = out_dir / "moment_values.dat"
        _atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))
        outputs.append(path)
    return outputs


@dataclass(frozen=True)
class _SpectrumJob:
    config: ExperimentConfig


def _spectrum_worker(job: _SpectrumJob, index: int) -> list[float]:
    config = job.config
    m_block = config.model
    region = Cube(ConfigPoint.origin(m_block.n, m_block.d), config.task.L)
    realization = sample(
        config.disorder, single_particle_sites(region), config.run.master_seed, index
    )
    hm = build(region, realization, config.interaction, m_block.h)
    spectrum = eigensolve(hm, m_block.dense_limit)
    return spectrum.eigenvalues.tolist()


def _run_spectrum(config: ExperimentConfig, workers: int, out_dir: Path, plot: bool) -> list[Path]:
    results = _parallel.run_indexed(
        _spectrum_worker, _SpectrumJob(config), config.run.realizations, workers
    )
    header = "# finite-volume eigenvalues\n# realization,index,eigenvalue\n"
    rows = [
        f"{i},{j},{_fmt(val)}"
        for i, eigenvalues in enumerate(results)
        for j, val in enumerate(eigenvalues)
    ]
    csv_path = out_dir / "spectrum.csv"
    _atomic_write_text(csv_path, header + "\n".join(rows) + ("\n" if rows else ""))
    outputs = [csv_path]
    if plot:
        lines = [f"{j} {_fmt(val)}" for j, val in enumerate(results[0])]
        path = out_dir / "spectrum_eigenvalues.dat"
        _atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))
        outputs.append(path)
    return outputs


def validate_report(config: ExperimentConfig) -> tuple[bool, list[str]]:
    """Model-assumption checks used by the `validate` CLI command."""
    lines: list[str] = []
    report = validate_assumption_P(config.disorder)
    status = "pass" if report.passed else "FAIL"
    lines.append(f"disorder bounded-measure check: {status} (bound M = {report.bound:g})")
    lines.extend(f"  violation: {v}" for v in report.violations)
    lines.extend(f"  warning: {w}" for w in report.warnings)
    lines.extend(f"  note: {n}" for n in report.notes)
    passed = report.passed
    if config.interaction is not None:
        bound = validate_interaction_bound(config.interaction, radius=64)
        status = "pass" if bound.passed else "FAIL"
        lines.append(
            f"interaction envelope check (distances 0..64): {status} "
            f"(max ratio {bound.max_ratio:.6g} at distance {bound.worst_distance})"
        )
        passed = passed and bound.passed
    else:
        lines.append("interaction: none configured")
    return passed, lines
