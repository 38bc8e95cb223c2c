"""Batch evaluation: WAV I/O, random gap placement, method matrix runs, SNR tables.

Randomness comes only from ``numpy.random.PCG64``, seeded per
(signal, gap length) from the experiment seed, so results reproduce across
platforms and do not depend on the order in which jobs finish.
"""

from __future__ import annotations

import csv
import itertools
import json
import logging
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .gaps import GapSpec, reliable_mask, snr
from .inpaint import FrameConfig, Method, Settings, context_extent, inpaint_gap
from .janssen import JanssenConfig
from .signals import synthetic
from .solvers import SolverConfig

log = logging.getLogger(__name__)

COLUMNS = ("signal", "gap_length_ms", "gap_index", "gap_start", "gap_length", "method",
           "offset", "snr_db", "iterations", "converged", "status", "wall_time_s")
TIMING_COLUMNS = ("wall_time_s",)
SUMMARY_COLUMNS = ("gap_length_ms", "method", "offset", "mean_snr_db", "count")
DEFAULT_GAP_LENGTHS_MS = (5, 10, 15, 20, 25, 30, 35, 40, 45, 50)
VARIANTS = ("plain", "reweighted", "gradual", "tdc")


class SpecError(ValueError):
    """Experiment description that cannot be turned into jobs."""


class PlacementError(ValueError):
    """The requested gaps do not fit into the signal."""


class MalformedCsvError(ValueError):
    pass


class NumericalError(RuntimeError):
    """A method produced non-finite samples."""


# -- audio and gap files ----------------------------------------------------

def read_wav(path) -> tuple[np.ndarray, int]:
    """Mono float64 samples in [-1, 1] and the sample rate."""
    rate, data = wavfile.read(path)
    if data.ndim > 1:
        warnings.warn(f"{path}: {data.shape[1]} channels, using the first one only",
                      stacklevel=2)
        data = data[:, 0]
    if data.dtype == np.int16:
        x = data / 32768.0
    elif data.dtype == np.int32:
        x = data / 2147483648.0
    elif data.dtype == np.uint8:
        x = (data.astype(float) - 128.0) / 128.0
    elif np.issubdtype(data.dtype, np.floating):
        x = data.astype(float)
    else:
        raise ValueError(f"{path}: unsupported sample type {data.dtype}")
    return np.asarray(x, dtype=float), int(rate)


def write_wav(path, signal, rate: int, sample_format: str = "float32") -> None:
    signal = np.asarray(signal, dtype=float)
    if sample_format == "pcm16":
        data = np.round(np.clip(signal, -1.0, 32767 / 32768) * 32768).astype(np.int16)
    elif sample_format == "float32":
        data = signal.astype(np.float32)
    else:
        raise ValueError(f"unknown sample format {sample_format!r}")
    wavfile.write(path, int(rate), data)


def wav_format(path) -> str:
    """``pcm16`` or ``float32``: the closest format we can write back."""
    _, data = wavfile.read(path, mmap=True)
    return "pcm16" if data.dtype in (np.int16, np.uint8) else "float32"


def parse_gap(text: str) -> GapSpec:
    """``"start:length"`` with a 1-based start."""
    try:
        start, length = (int(v) for v in text.split(":"))
    except ValueError:
        raise ValueError(f"gap must look like START:LENGTH, got {text!r}") from None
    return GapSpec.from_length(start, length)


def load_gap_file(path) -> tuple[list[GapSpec], int | None]:
    with open(path) as fh:
        doc = json.load(fh)
    try:
        gaps = [GapSpec.from_length(int(g["start"]), int(g["length"])) for g in doc["gaps"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: malformed gap file ({exc})") from None
    rate = doc.get("sample_rate")
    return gaps, None if rate is None else int(rate)


def save_gap_file(path, gaps, sample_rate: int | None = None) -> None:
    doc = {"gaps": [{"start": g.start, "length": g.length} for g in gaps],
           "sample_rate": sample_rate}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)


# -- experiment description -------------------------------------------------

def _build(cls, doc, what: str):
    if doc is None:
        return cls()
    if not isinstance(doc, dict):
        raise SpecError(f"{what} must be an object")
    names = {f.name for f in fields(cls)}
    unknown = set(doc) - names
    if unknown:
        raise SpecError(f"unknown {what} keys: {sorted(unknown)}")
    try:
        return cls(**doc)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"invalid {what}: {exc}") from None


def _method(doc) -> Method:
    if not isinstance(doc, dict):
        raise SpecError(f"method entries must be objects, got {doc!r}")
    return _build(Method, doc, "method")


def expand_matrix(doc: dict, gradual_step: float, tdc_gaps: int, tdc_segments: int) -> list[Method]:
    """Cartesian product of models, weights, offsets and variants.

    ``reweighted`` replaces the weighting scheme by ``iterative``; duplicates
    are dropped and ``janssen`` ignores weights and offsets.
    """
    allowed = {"models", "weights", "offsets", "variants"}
    unknown = set(doc) - allowed
    if unknown:
        raise SpecError(f"unknown matrix keys: {sorted(unknown)}")
    models = doc.get("models", ["ana"])
    schemes = doc.get("weights", ["none"])
    offsets = doc.get("offsets", ["half"])
    variants = doc.get("variants", ["plain"])
    for v in variants:
        if v not in VARIANTS:
            raise SpecError(f"unknown variant {v!r}; expected one of {VARIANTS}")
    out: list[Method] = []
    try:
        for model in models:
            if model == "janssen":
                candidates = [Method("janssen", offset="none")]
            else:
                candidates = []
                for scheme, offset, variant in itertools.product(schemes, offsets, variants):
                    m = Method(model, scheme, offset)
                    if variant == "reweighted":
                        m = replace(m, weights="iterative")
                    elif variant == "gradual":
                        m = replace(m, gradual_step=gradual_step)
                    elif variant == "tdc":
                        m = replace(m, tdc=True, tdc_gaps=tdc_gaps, tdc_segments=tdc_segments)
                    candidates.append(m)
            out.extend(m for m in candidates if m not in out)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    return out


@dataclass(frozen=True)
class ExperimentSpec:
    inputs: tuple[str, ...]
    methods: tuple[Method, ...] = ()
    gaps_per_signal: int = 8
    gap_lengths_ms: tuple[float, ...] = DEFAULT_GAP_LENGTHS_MS
    seed: int = 0
    settings: Settings = field(default_factory=Settings)
    output: str | None = None
    workers: int = 1
    synthetic_duration: float = 10.0
    synthetic_rate: int = 44100
    base_dir: str = "."

    def __post_init__(self):
        if self.gaps_per_signal < 1:
            raise SpecError("gaps_per_signal must be >= 1")
        if any(not v > 0 for v in self.gap_lengths_ms):
            raise SpecError("gap lengths must be positive")
        if self.workers < 1:
            raise SpecError("workers must be >= 1")

    @classmethod
    def from_dict(cls, doc: dict, base_dir: str = ".") -> "ExperimentSpec":
        known = {"inputs", "methods", "matrix", "gaps_per_signal", "gap_lengths_ms", "seed",
                 "solver", "frame", "reweight", "gradual", "tdc", "janssen", "context_windows",
                 "output", "workers", "synthetic_duration", "synthetic_rate"}
        unknown = set(doc) - known
        if unknown:
            raise SpecError(f"unknown experiment keys: {sorted(unknown)}")
        if not doc.get("inputs"):
            raise SpecError("experiment needs a non-empty 'inputs' list")

        reweight = doc.get("reweight", {})
        if set(reweight) - {"outer_iterations", "epsilon", "delta"}:
            raise SpecError(f"unknown reweight keys: {sorted(set(reweight))}")
        gradual = doc.get("gradual", {})
        if set(gradual) - {"step_fraction", "strict"}:
            raise SpecError(f"unknown gradual keys: {sorted(set(gradual))}")
        tdc = doc.get("tdc", {})
        if set(tdc) - {"num_artificial_gaps", "num_segments", "segment_length"}:
            raise SpecError(f"unknown tdc keys: {sorted(set(tdc))}")
        try:
            settings = Settings(
                frame=_build(FrameConfig, doc.get("frame"), "frame"),
                solver=_build(SolverConfig, doc.get("solver"), "solver"),
                outer_iterations=reweight.get("outer_iterations", 10),
                reweight_epsilon=reweight.get("epsilon", 1e-3),
                reweight_delta=reweight.get("delta", 1e-2),
                janssen=_build(JanssenConfig, doc.get("janssen"), "janssen"),
                tdc_segment_length=tdc.get("segment_length"),
                context_windows=doc.get("context_windows", 4),
                strict_gradual=gradual.get("strict", False),
            )
        except ValueError as exc:
            raise SpecError(str(exc)) from None

        methods = [_method(m) for m in doc.get("methods", [])]
        if "matrix" in doc:
            matrix = expand_matrix(doc["matrix"], gradual.get("step_fraction", 1 / 8),
                                   tdc.get("num_artificial_gaps", 4),
                                   tdc.get("num_segments", 10))
            methods.extend(m for m in matrix if m not in methods)
        if settings.strict_gradual and any(m.gradual_step is not None and m.weights == "none"
                                           for m in methods):
            raise SpecError("strict gradual mode rejects the 'none' weighting scheme")
        try:
            return cls(
                inputs=tuple(doc["inputs"]),
                methods=tuple(methods),
                gaps_per_signal=int(doc.get("gaps_per_signal", 8)),
                gap_lengths_ms=tuple(doc.get("gap_lengths_ms", DEFAULT_GAP_LENGTHS_MS)),
                seed=int(doc.get("seed", 0)),
                settings=settings,
                output=doc.get("output"),
                workers=int(doc.get("workers", 1)),
                synthetic_duration=float(doc.get("synthetic_duration", 10.0)),
                synthetic_rate=int(doc.get("synthetic_rate", 44100)),
                base_dir=str(base_dir),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, SpecError):
                raise
            raise SpecError(str(exc)) from None


def load_spec(path) -> ExperimentSpec:
    path = Path(path)
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise SpecError(f"{path}: top level must be an object")
    return ExperimentSpec.from_dict(doc, base_dir=str(path.parent))


def load_input(name: str, spec: ExperimentSpec) -> tuple[np.ndarray, int]:
    """A WAV path (relative to the spec file) or ``synthetic:<name>``."""
    if name.startswith("synthetic:"):
        signal = synthetic(name.split(":", 1)[1], spec.synthetic_duration, spec.synthetic_rate)
        return signal, spec.synthetic_rate
    path = Path(name)
    if not path.is_absolute():
        path = Path(spec.base_dir) / path
    return read_wav(path)


# -- gap placement ----------------------------------------------------------

def gap_rng(seed: int, signal_index: int, gap_length: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, signal_index,
                                                                        gap_length])))


def generate_gaps(signal_length: int, gap_length: int, count: int, margin: int,
                  rng: np.random.Generator | int) -> list[GapSpec]:
    """``count`` gaps of ``gap_length`` placed uniformly at random.

    At least ``margin`` reliable samples separate every gap from the signal
    edges and from its neighbours.  All admissible placements are equally
    likely (stars and bars over the free samples).
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.Generator(np.random.PCG64(int(rng)))
    if gap_length < 1 or count < 1 or margin < 0:
        raise ValueError("gap_length and count must be positive, margin non-negative")
    slack = signal_length - count * gap_length - (count + 1) * margin
    if slack < 0:
        raise PlacementError(f"{count} gaps of {gap_length} samples with {margin}-sample margins "
                             f"need {signal_length - slack} samples, signal has {signal_length}")
    # count bars among slack stars: sorted distinct positions in [0, slack + count)
    bars = np.sort(rng.choice(slack + count, size=count, replace=False)) - np.arange(count)
    starts = margin + bars + np.arange(count) * (gap_length + margin)
    return [GapSpec.from_length(int(s) + 1, gap_length) for s in starts]


def placement_margin(gap_length: int, spec: ExperimentSpec) -> int:
    settings = spec.settings
    base = settings.context_windows * settings.frame.window_length
    return max([base] + [context_extent(gap_length, m, settings) for m in spec.methods])


# -- running ----------------------------------------------------------------

@dataclass(frozen=True)
class Job:
    index: int
    signal: str
    signal_index: int
    gap_length_ms: float
    gaps: tuple[GapSpec, ...]
    gap_index: int
    method: Method


def plan_jobs(spec: ExperimentSpec, lengths: dict[str, tuple[int, int]]) -> list[Job]:
    """Jobs in output order: signal, gap length, method, gap.

    ``lengths`` maps each input name to ``(num_samples, sample_rate)``.
    """
    jobs = []
    for si, name in enumerate(spec.inputs):
        n, rate = lengths[name]
        for ms in spec.gap_lengths_ms:
            h = max(1, int(round(ms * rate / 1000)))
            gaps = tuple(generate_gaps(n, h, spec.gaps_per_signal, placement_margin(h, spec),
                                       gap_rng(spec.seed, si, h)))
            for method in spec.methods:
                for gi in range(len(gaps)):
                    jobs.append(Job(len(jobs), name, si, ms, gaps, gi, method))
    return jobs


_SIGNALS: dict[str, np.ndarray] = {}


def _init_worker(signals):
    _SIGNALS.clear()
    _SIGNALS.update(signals)


def run_job(job: Job, settings: Settings, signals=None) -> dict:
    """One CSV row; failures are reported in ``status`` rather than raised."""
    original = (signals if signals is not None else _SIGNALS)[job.signal]
    gap = job.gaps[job.gap_index]
    row = {"signal": job.signal, "gap_length_ms": f"{job.gap_length_ms:g}",
           "gap_index": job.gap_index, "gap_start": gap.start, "gap_length": gap.length,
           "method": job.method.label,
           "offset": "none" if job.method.model == "janssen" else job.method.offset,
           "snr_db": "", "iterations": "", "converged": "", "status": "ok", "wall_time_s": ""}
    mask = reliable_mask(len(original), job.gaps)
    observed = np.where(mask, original, 0.0)
    t0 = time.perf_counter()
    try:
        outcome = inpaint_gap(observed, mask, gap, job.method, settings)
        if not np.all(np.isfinite(outcome.signal[gap.slice])):
            raise NumericalError("non-finite samples in the filled gap")
        row["snr_db"] = repr(snr(original, outcome.signal, [gap]))
        row["iterations"] = outcome.iterations
        row["converged"] = int(outcome.converged)
    except Exception as exc:  # recorded per row, never fatal for the batch
        log.warning("job %d (%s, gap %d) failed: %s", job.index, job.method.label,
                    job.gap_index, exc)
        row["status"] = f"error: {type(exc).__name__}: {exc}".replace("\n", " ")
    row["wall_time_s"] = f"{time.perf_counter() - t0:.3f}"
    return row


def _run_indexed(args):
    job, settings = args
    return run_job(job, settings)


def run_experiment(spec: ExperimentSpec, output=None) -> list[dict]:
    """Run every (signal, gap, method) job and write the CSV row by row.

    Rows appear in job order whatever the worker count, and each row is
    flushed as soon as it and all earlier rows are done.
    """
    output = output if output is not None else spec.output
    signals, lengths = {}, {}
    for name in spec.inputs:
        x, rate = load_input(name, spec)
        signals[name] = x
        lengths[name] = (len(x), rate)
    jobs = plan_jobs(spec, lengths)
    rows = []
    fh = open(output, "w", newline="") if output is not None else None
    try:
        writer = csv.DictWriter(fh, fieldnames=COLUMNS) if fh else None
        if writer:
            writer.writeheader()
            fh.flush()
        if spec.workers > 1 and len(jobs) > 1:
            pool = ProcessPoolExecutor(spec.workers, initializer=_init_worker,
                                       initargs=(signals,))
            results = pool.map(_run_indexed, [(job, spec.settings) for job in jobs])
        else:
            pool = None
            results = (run_job(job, spec.settings, signals) for job in jobs)
        try:
            for row in results:
                rows.append(row)
                if writer:
                    writer.writerow(row)
                    fh.flush()
        finally:
            if pool is not None:
                pool.shutdown(cancel_futures=True)
    finally:
        if fh:
            fh.close()
    return rows


# -- aggregation ------------------------------------------------------------

def read_results(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise MalformedCsvError(f"{path}: empty file")
        missing = {"gap_length_ms", "method", "offset", "snr_db", "status"} - set(reader.fieldnames)
        if missing:
            raise MalformedCsvError(f"{path}: missing columns {sorted(missing)}")
        rows = list(reader)
    for i, row in enumerate(rows, start=2):
        if None in row or any(v is None for v in row.values()):
            raise MalformedCsvError(f"{path}: line {i} has the wrong number of fields")
    return rows


def summarize(path) -> list[dict]:
    """Mean SNR in dB per (gap length, method, offset), over successful rows."""
    groups: dict[tuple, list[float]] = {}
    for row in read_results(path):
        if row["status"] != "ok":
            continue
        try:
            key = (float(row["gap_length_ms"]), row["method"], row["offset"])
            value = float(row["snr_db"])
        except ValueError:
            raise MalformedCsvError(f"{path}: non-numeric value in row {row}") from None
        if math.isnan(value):
            raise MalformedCsvError(f"{path}: NaN SNR in row {row}")
        groups.setdefault(key, []).append(value)
    return [{"gap_length_ms": f"{ms:g}", "method": method, "offset": offset,
             "mean_snr_db": float(np.mean(vals)), "count": len(vals)}
            for (ms, method, offset), vals in sorted(groups.items())]


def write_summary(rows, fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(dict(row, mean_snr_db=f"{row['mean_snr_db']:.4f}"))
