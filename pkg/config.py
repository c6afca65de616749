# config.py ---------------------------------------------------------------
"""Run configuration: defaults < `--config` file < command-line flags."""

from __future__ import annotations

import argparse
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from errors import ConfigError, MalformedNumberError, MissingFieldError, UnknownKeyError
from quantum_spectra import ModelParams

TOOL_VERSION = "1.0.0"
DEFAULT_PRECISION = 12

COMMANDS = ("spectrum", "stationary", "sweep", "grid", "critical", "correspond", "fidelity")
AXIS_ALIASES = {"U": "U", "u": "U", "J": "J", "j": "J", "epsilon": "epsilon", "eps": "epsilon"}
AXIS_FLAG = {"U": "u", "J": "j", "epsilon": "eps"}

REAL_KEYS = {"u", "j", "eps", "start", "stop", "u_start", "u_stop", "eps_start", "eps_stop", "tol", "cluster_tol"}
INT_KEYS = {"n", "steps", "n_max", "precision", "n_jobs"}
CHOICES = {
    "axis": tuple(AXIS_ALIASES),
    "quantity": ("n1", "n2", "n3", "energy", "occupations"),
    "family": ("J0", "eps0"),
    "levels": ("ground", "all"),
    "per": ("J", "eps", "none"),
    "format": ("csv", "json"),
    "log_level": ("DEBUG", "INFO", "WARNING", "ERROR"),
    "verify": ("true", "false"),
}

REQUIRED = {
    "spectrum": ("n", "u", "j", "eps"),
    "stationary": ("u", "j", "eps"),
    "sweep": ("n", "axis", "start", "stop", "steps"),
    "grid": (),
    "critical": ("family",),
    "correspond": ("u", "j", "eps"),
    "fidelity": ("n", "u", "j", "start", "stop", "steps"),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int | None = None
    u: float | None = None
    j: float | None = None
    eps: float | None = None
    axis: str | None = None
    start: float | None = None
    stop: float | None = None
    steps: int | None = None
    u_start: float = -3.0
    u_stop: float = 3.0
    eps_start: float = 0.0
    eps_stop: float = 1.0
    quantity: str | None = None
    family: str | None = None
    verify: bool = False
    tol: float = 1e-2
    n_max: int = 20
    cluster_tol: float = 1e-6
    levels: str = "ground"
    per: str = "none"
    format: str = "csv"
    output: str | None = None
    precision: int = DEFAULT_PRECISION
    n_jobs: int = 1
    log_level: str = "WARNING"

    def model_params(self, **overrides) -> ModelParams:
        values = {"U": self.u, "J": self.j, "epsilon": self.eps, "N": self.n if self.n is not None else 1}
        values.update(overrides)
        return ModelParams(**values)

    def meta(self) -> dict:
        return {**asdict(self), "version": TOOL_VERSION}


KEYS = tuple(f.name for f in fields(RunConfig) if f.name != "command")


# ────────────────────────────── parsing ─────────────────────────────────
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="trimer", description="Bosons in a tilted triple well: quantum and semiclassical analysis.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", dest="config_file", metavar="PATH")
    for key in KEYS:
        parser.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None, metavar=key.upper())
    return parser


def _prescan(argv: list[str], known: set[str]) -> None:
    # argparse would report unknown flags as one joined message; name the key instead
    for token in argv:
        if token.startswith("--"):
            name = token[2:].split("=", 1)[0]
            if name not in known:
                raise UnknownKeyError(name)


def _parse_real(key: str, text: str) -> float:
    try:
        value = float(str(text).strip())
    except ValueError:
        raise MalformedNumberError(key, text) from None
    if not math.isfinite(value):
        raise MalformedNumberError(key, text)
    return value


def _parse_int(key: str, text: str) -> int:
    value = _parse_real(key, text)
    if value != int(value):
        raise MalformedNumberError(key, text)
    return int(value)


def _convert(key: str, text: str):
    if key in REAL_KEYS:
        return _parse_real(key, text)
    if key in INT_KEYS:
        return _parse_int(key, text)
    text = str(text).strip()
    if key in CHOICES:
        if text not in CHOICES[key]:
            raise ConfigError(f"option '{key}': {text!r} is not one of {', '.join(CHOICES[key])}")
        if key == "axis":
            return AXIS_ALIASES[text]
        if key == "verify":
            return text == "true"
    return text


def read_config_file(path: str | Path) -> dict[str, str]:
    """Flat `key = value` lines; `#` comments and blank lines ignored."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    values: dict[str, str] = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            raise UnknownKeyError(key)
        values[key] = value
    return values


def _check_required(cfg: RunConfig) -> None:
    for key in REQUIRED[cfg.command]:
        if getattr(cfg, key) is None:
            raise MissingFieldError(key, cfg.command)
    if cfg.command == "sweep":
        for coupling, flag in AXIS_FLAG.items():
            if coupling != cfg.axis and getattr(cfg, flag) is None:
                raise MissingFieldError(flag, cfg.command)
    if cfg.command == "correspond" and cfg.axis is not None:
        for key in ("start", "stop", "steps"):
            if getattr(cfg, key) is None:
                raise MissingFieldError(key, cfg.command)
    if cfg.precision < 1:
        raise ConfigError(f"option 'precision' must be at least 1, got {cfg.precision}")


def parse_config(argv: list[str]) -> RunConfig:
    parser = _build_parser()
    known = {key.replace("_", "-") for key in KEYS} | {"config", "help"}
    _prescan(argv, known)
    args = parser.parse_args(argv)

    raw: dict[str, str] = {}
    if args.config_file:
        raw.update(read_config_file(args.config_file))
    raw.update({key: getattr(args, key) for key in KEYS if getattr(args, key) is not None})

    cfg = replace(RunConfig(command=args.command), **{key: _convert(key, text) for key, text in raw.items()})
    _check_required(cfg)
    return cfg
