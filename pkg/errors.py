# errors.py ---------------------------------------------------------------
"""Exception hierarchy shared by the numerical modules and the CLI.

ConfigError    → exit code 2 (bad command line / config file)
NumericalError → exit code 3 (solver did not deliver; also the default)
OutputError    → exit code 1 (result file not writable)
"""

from __future__ import annotations


class TrimerError(Exception):
    """Base class for everything this toolkit raises on purpose."""

    exit_code = 3


# ──────────────────────────── configuration ─────────────────────────────
class ConfigError(TrimerError):
    exit_code = 2


class UnknownKeyError(ConfigError):
    def __init__(self, key: str):
        self.key = key
        super().__init__(f"unknown option '{key}'")


class MissingFieldError(ConfigError):
    def __init__(self, key: str, command: str):
        self.key = key
        self.command = command
        super().__init__(f"command '{command}' requires '{key}'")


class MalformedNumberError(ConfigError):
    def __init__(self, key: str, text: str):
        self.key = key
        self.text = text
        super().__init__(f"option '{key}': cannot read {text!r} as a number")


# ──────────────────────────── numerics ──────────────────────────────────
class NumericalError(TrimerError):
    exit_code = 3


class EigensolverError(NumericalError):
    """Dense eigensolver failed to converge."""


class PolishingError(NumericalError):
    """Newton polishing of a stationary-point candidate diverged."""


class BranchUndefinedError(NumericalError):
    """A finite-difference stencil left the domain of a closed-form branch."""


# ──────────────────────────── bad inputs ────────────────────────────────
class ParameterError(TrimerError, ValueError):
    """Physical parameters outside an operation's domain."""


class BasisError(TrimerError, ValueError):
    """Fock state or basis inconsistent with the particle number."""


class FidelityError(TrimerError, ValueError):
    """State vectors of different length or not normalized."""


# ──────────────────────────── output ────────────────────────────────────
class OutputError(TrimerError):
    """Result file could not be written."""

    exit_code = 1
