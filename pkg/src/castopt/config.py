"""Experiment configuration files: flat ``key = value`` TOML documents.

Unknown keys are rejected, and errors point at the offending line when the
key can be found in the source text.
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .cooling import parse_cooling
from .engine import RunConfig
from .exchange import CastParams
from .explorer import ProposalKind
from .objective import available_objectives
from .sweep import PARAM_AXES, SweepPlan, spacing

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "load_document",
    "apply_overrides",
    "parse_experiment",
    "parse_compare",
    "parse_plan",
]

# defaults for the collective dynamics: the hand-tuned log-decay set at t_bar = 0.05
CAST_DEFAULTS = {"mu": 0.2, "lambda": 0.7, "kappa": 0.03, "gamma": 1.0, "t_var": 0.0075}


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where = f"{source}:{line}: " if line else f"{source}: "
        elif line:
            where = f"line {line}: "
        super().__init__(where + message)
        self.line = line


@dataclass
class Document:
    data: dict
    text: str = ""
    source: str | None = None

    def locate(self, key: str, section: str | None = None) -> int | None:
        """1-based line of ``key = ...`` (inside ``[section]`` if given)."""
        current = None
        pattern = re.compile(rf"^\s*{re.escape(key)}\s*=")
        for n, line in enumerate(self.text.splitlines(), 1):
            head = re.match(r"^\s*\[+\s*([^\]]+?)\s*\]+", line)
            if head:
                current = head.group(1)
                continue
            if pattern.match(line) and (section is None or current == section):
                return n
        return None

    def error(self, message: str, key: str | None = None, section: str | None = None):
        line = self.locate(key, section) if key else None
        return ConfigError(message, line, self.source)


def load_document(path) -> Document:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", source=str(path)) from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(exc), source=str(path)) from None
    return Document(data, text, str(path))


def _parse_value(raw: str):
    try:
        return tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        return raw


def apply_overrides(doc: Document, overrides) -> Document:
    """Apply ``key=value`` strings; dotted keys reach into tables."""
    for item in overrides or ():
        key, sep, raw = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"override {item!r} is not of the form key=value")
        *parents, leaf = key.strip().split(".")
        table = doc.data
        for p in parents:
            table = table.setdefault(p, {})
        table[leaf] = _parse_value(raw.strip())
    return doc


@dataclass
class ExperimentConfig:
    """Resolved settings for ``run`` and ``decay-study``."""

    objective: str
    d: int
    N: int
    steps: int
    seed: int = 0
    proposal: str = "cauchy"
    cooling: str = "cast"
    mu: float = CAST_DEFAULTS["mu"]
    lambda_: float = CAST_DEFAULTS["lambda"]
    kappa: float = CAST_DEFAULTS["kappa"]
    gamma: float = CAST_DEFAULTS["gamma"]
    t_var: float = CAST_DEFAULTS["t_var"]
    t_bar: float = 0.05
    noise_gated: bool = False
    repeats: int = 1
    hist_bins: int = 50
    stride: int = 1
    shrink: float = 0.5
    alpha: float = 0.999

    def run_config(self) -> RunConfig:
        if self.cooling == "cast":
            mode = CastParams(
                mu=self.mu,
                lambda_=self.lambda_,
                kappa=self.kappa,
                gamma=self.gamma,
                t_var=self.t_var,
                t_bar=self.t_bar,
                noise_gated=self.noise_gated,
            )
        else:
            mode = parse_cooling(self.cooling, self.t_bar)
        return RunConfig(
            objective=self.objective,
            d=self.d,
            n_particles=self.N,
            n_steps=self.steps,
            mode=mode,
            proposal=ProposalKind(self.proposal),
            seed=self.seed,
            hist_bins=self.hist_bins,
            stride=self.stride,
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lambda_")
        return out


_REQUIRED = ("objective", "d", "N", "steps")
_FIELD_TYPES = {
    "objective": str, "d": int, "N": int, "steps": int, "seed": int,
    "proposal": str, "cooling": str, "mu": float, "lambda": float,
    "kappa": float, "gamma": float, "t_var": float, "t_bar": float,
    "noise_gated": bool, "repeats": int, "hist_bins": int, "stride": int,
    "shrink": float, "alpha": float,
}


def _coerce(doc, key, value, kind, section=None):
    ok = (
        (kind is bool and isinstance(value, bool))
        or (kind is int and isinstance(value, int) and not isinstance(value, bool))
        or (kind is float and isinstance(value, (int, float)) and not isinstance(value, bool))
        or (kind is str and isinstance(value, str))
    )
    if not ok:
        raise doc.error(
            f"key {key!r} expects {kind.__name__}, got {value!r}", key, section
        )
    return kind(value)


def _collect(doc: Document, table: dict, allowed: dict, section=None) -> dict:
    values = {}
    for key, value in table.items():
        if key not in allowed:
            raise doc.error(f"unknown key {key!r}", key, section)
        values[key] = _coerce(doc, key, value, allowed[key], section)
    return values


def _check_experiment(doc: Document, cfg: ExperimentConfig, section=None):
    if cfg.objective.lower() not in available_objectives():
        raise doc.error(
            f"unknown objective {cfg.objective!r}; choose from {available_objectives()}",
            "objective", section,
        )
    if cfg.proposal not in ("cauchy", "gaussian"):
        raise doc.error(f"proposal must be 'cauchy' or 'gaussian', got {cfg.proposal!r}",
                        "proposal", section)
    if cfg.repeats < 1:
        raise doc.error("repeats must be at least 1", "repeats", section)
    if not 0 < cfg.shrink <= 1:
        raise doc.error("shrink must lie in (0, 1]", "shrink", section)
    try:
        cfg.run_config()
    except ValueError as exc:
        key = _guess_key(str(exc))
        raise doc.error(str(exc), key, section) from None


def _guess_key(message: str) -> str | None:
    for key in ("t_var", "t_bar", "lambda", "mu", "kappa", "gamma", "alpha",
                "steps", "N", "d", "stride", "hist_bins", "cooling"):
        if re.search(rf"\b{key}\b", message):
            return key
    return None


def _build(values: dict) -> ExperimentConfig:
    kwargs = dict(values)
    if "lambda" in kwargs:
        kwargs["lambda_"] = kwargs.pop("lambda")
    return ExperimentConfig(**kwargs)


def parse_experiment(doc: Document) -> ExperimentConfig:
    values = _collect(doc, doc.data, _FIELD_TYPES)
    for key in _REQUIRED:
        if key not in values:
            raise doc.error(f"missing required key {key!r}")
    cfg = _build(values)
    _check_experiment(doc, cfg)
    return cfg


# keys an arm may not change: every arm runs on the same budget
_SHARED_ONLY = ("objective", "d", "N", "steps", "repeats", "t_bar", "seed",
                "hist_bins", "stride", "shrink")


def parse_compare(doc: Document) -> tuple[ExperimentConfig, dict[str, ExperimentConfig]]:
    data = dict(doc.data)
    arms_table = data.pop("arms", None)
    if not isinstance(arms_table, dict) or len(arms_table) < 2:
        raise doc.error("compare needs at least two [arms.<name>] tables")
    shared = _collect(doc, data, _FIELD_TYPES)
    for key in _REQUIRED:
        if key not in shared:
            raise doc.error(f"missing required key {key!r}")
    base = _build(shared)
    _check_experiment(doc, base)
    arms = {}
    for name, table in arms_table.items():
        section = f"arms.{name}"
        if not isinstance(table, dict):
            raise doc.error(f"arm {name!r} must be a table")
        values = _collect(doc, table, _FIELD_TYPES, section)
        for key in _SHARED_ONLY:
            if key in values and values[key] != shared.get(key, getattr(base, key)):
                raise doc.error(
                    f"arm {name!r} sets mismatched {key!r} "
                    f"({values[key]!r} vs shared {getattr(base, key)!r})",
                    key, section,
                )
        merged = {**shared, **values}
        cfg = _build(merged)
        _check_experiment(doc, cfg, section)
        arms[name] = cfg
    return base, arms


_PLAN_TYPES = {
    "objective": str, "d": int, "N": int, "max_steps": int, "runs_per_cell": int,
    "t_bar": float, "proposal": str, "noise_gated": bool, "shrink": float,
    "seed": int,
}


def _axis_values(doc: Document, name: str, spec):
    if isinstance(spec, list):
        if not spec:
            raise doc.error(f"axis {name!r} has an empty value list", name, "axes")
        return [float(v) for v in spec]
    if isinstance(spec, dict) and len(spec) == 1:
        kind, args = next(iter(spec.items()))
        if kind in ("lin", "log") and isinstance(args, list) and len(args) == 3:
            a, b, count = args
            try:
                return spacing(float(a), float(b), int(count), kind)
            except ValueError as exc:
                raise doc.error(f"axis {name!r}: {exc}", name, "axes") from None
    raise doc.error(
        f"axis {name!r} must be a list or {{lin|log = [a, b, count]}}", name, "axes"
    )


def parse_plan(doc: Document) -> SweepPlan:
    data = dict(doc.data)
    axes_table = data.pop("axes", None)
    fixed_table = data.pop("fixed", {})
    if not isinstance(axes_table, dict) or not axes_table:
        raise doc.error("sweep plan needs a non-empty [axes] table")
    values = _collect(doc, data, _PLAN_TYPES)
    for key in ("objective", "d", "N", "max_steps"):
        if key not in values:
            raise doc.error(f"missing required key {key!r}")
    axes = {}
    for name, spec in axes_table.items():
        if name not in PARAM_AXES:
            raise doc.error(f"unknown sweep axis {name!r}", name, "axes")
        axes[name] = _axis_values(doc, name, spec)
    fixed = {}
    for name, value in fixed_table.items():
        if name not in PARAM_AXES:
            raise doc.error(f"unknown fixed parameter {name!r}", name, "fixed")
        fixed[name] = _coerce(doc, name, value, float, "fixed")
    for name, default in CAST_DEFAULTS.items():
        if name not in axes and name not in fixed:
            fixed[name] = default
    if values["objective"].lower() not in available_objectives():
        raise doc.error(f"unknown objective {values['objective']!r}", "objective")
    try:
        return SweepPlan(
            objective=values["objective"],
            d=values["d"],
            n_particles=values["N"],
            max_steps=values["max_steps"],
            axes=axes,
            fixed=fixed,
            runs_per_cell=values.get("runs_per_cell", 20),
            t_bar=values.get("t_bar", 0.05),
            proposal=ProposalKind(values.get("proposal", "cauchy")),
            noise_gated=values.get("noise_gated", False),
            shrink=values.get("shrink", 0.5),
            seed=values.get("seed", 0),
        )
    except ValueError as exc:
        raise doc.error(str(exc), _guess_key(str(exc))) from None


def plan_to_dict(plan: SweepPlan) -> dict:
    return {
        "objective": plan.objective,
        "d": plan.d,
        "N": plan.n_particles,
        "max_steps": plan.max_steps,
        "runs_per_cell": plan.runs_per_cell,
        "t_bar": plan.t_bar,
        "proposal": plan.proposal.value,
        "noise_gated": plan.noise_gated,
        "shrink": plan.shrink,
        "seed": plan.seed,
        "axes": {k: list(v) for k, v in plan.axes.items()},
        "fixed": dict(plan.fixed),
    }
