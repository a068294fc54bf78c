"""Flat ``key = value`` experiment configuration.

One pair per line, ``#`` starts a comment, blank lines are ignored. Which keys
are accepted depends on the ``experiment`` key; anything else is rejected so a
typo cannot silently fall back to a default.
"""

from dataclasses import dataclass, field
import math
from pathlib import Path

from .errors import ConfigError
from .two_qubit import Case

CASES = tuple(c.value for c in Case)


def _positive_float(name, text):
    x = _float(name, text)
    if not x > 0.0:
        raise ConfigError(name, f"must be positive, got {text}")
    return x


def _float(name, text):
    try:
        x = float(text)
    except ValueError:
        raise ConfigError(name, f"expected a number, got {text!r}") from None
    if not math.isfinite(x):
        raise ConfigError(name, f"must be finite, got {text}")
    return x


def _positive_int(name, text):
    try:
        x = int(text)
    except ValueError:
        raise ConfigError(name, f"expected an integer, got {text!r}") from None
    if x < 1:
        raise ConfigError(name, f"must be a positive integer, got {text}")
    return x


def _int_list(name, text):
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ConfigError(name, "empty list")
    return tuple(_positive_int(name, s) for s in items)


def _float_list(name, text):
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ConfigError(name, "empty list")
    return tuple(_float(name, s) for s in items)


def _cutoff(name, text):
    x = _float(name, text)
    if not 0.0 <= x < 1.0:
        raise ConfigError(name, f"must lie in [0, 1), got {text}")
    return x


def _case(name, text):
    if text not in CASES:
        raise ConfigError(name, f"unknown case {text!r}; choose from {', '.join(CASES)}")
    return text


def _snapshot_time(name, text):
    if text == "peak":
        return text
    x = _float(name, text)
    if x < 0.0:
        raise ConfigError(name, f"must be nonnegative or 'peak', got {text}")
    return x


def _text(name, text):
    if not text:
        raise ConfigError(name, "empty value")
    return text


_COMMON = {"experiment": _text, "output_dir": _text}
_TIME = {"gt_max": _positive_float, "gt_step": _positive_float}
_THETA_GRID = {"theta_min": _float, "theta_max": _float, "theta_step": _positive_float,
               "theta": _float_list}
_MULTI = {"weight_cutoff": _cutoff, "memory_budget": _positive_int}

SCHEMAS = {
    "two-qubit-series": {**_TIME, "case": _case, "theta": _float},
    "two-qubit-surface": {**_TIME, "case": _case, **_THETA_GRID},
    "two-qubit-maxc": {**_TIME, "case": _case, **_THETA_GRID},
    "snapshot": {**_TIME, "case": _case, "theta": _float, "gt": _snapshot_time},
    "multi-moments": {**_TIME, **_MULTI, "n_qubits": _positive_int, "theta_tilde": _float},
    "multi-maxc": {**_TIME, **_MULTI, "n_qubits": _int_list, "theta_tilde_min": _float,
                   "theta_tilde_max": _float, "theta_tilde_step": _positive_float,
                   "theta_tilde": _float_list},
}

REQUIRED = {
    "two-qubit-series": ("case", "theta"),
    "two-qubit-surface": ("case",),
    "two-qubit-maxc": ("case",),
    "snapshot": ("case", "theta"),
    "multi-moments": ("n_qubits", "theta_tilde"),
    "multi-maxc": ("n_qubits",),
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    output_dir: Path
    params: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.params.get(key, default)


def parse_config(text):
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected key = value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in raw:
            raise ConfigError(key, f"duplicate key on line {lineno}")
        raw[key] = value
    if "experiment" not in raw:
        raise ConfigError("experiment", "missing")
    name = raw.pop("experiment")
    if name not in SCHEMAS:
        raise ConfigError("experiment", f"unknown experiment {name!r}")
    if "output_dir" not in raw:
        raise ConfigError("output_dir", "missing")
    output_dir = Path(_text("output_dir", raw.pop("output_dir")))
    schema = SCHEMAS[name]
    params = {}
    for key, value in raw.items():
        if key not in schema:
            raise ConfigError(key, f"not a recognised key for {name}")
        params[key] = schema[key](key, value)
    for key in REQUIRED[name]:
        if key not in params:
            raise ConfigError(key, f"required by {name}")
    _check_grids(name, params)
    if params.get("gt_step", 0.0) > params.get("gt_max", math.inf):
        raise ConfigError("gt_step", "must not exceed gt_max")
    return ExperimentConfig(name, output_dir, params)


def _check_grids(name, params):
    for prefix in ("theta", "theta_tilde"):
        keys = [f"{prefix}_{s}" for s in ("min", "max", "step")]
        present = [k in params for k in keys]
        if any(present) and not all(present):
            missing = keys[present.index(False)]
            raise ConfigError(missing, f"grid needs {', '.join(keys)} together")
        if all(present):
            if prefix in params and name != "two-qubit-series" and name != "snapshot":
                raise ConfigError(prefix, f"give either a list or {prefix}_min/max/step, not both")
            if params[keys[1]] < params[keys[0]]:
                raise ConfigError(keys[1], f"must be at least {keys[0]}")


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)
