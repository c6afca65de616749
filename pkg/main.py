# main.py ---------------------------------------------------------------
"""Command-line entry: `python main.py <command> [--flags]`.

Every module under commands/ exposes `run(config) -> CommandResult`.
Exit codes: 0 ok, 1 output not writable, 2 bad configuration, 3 numerical failure.
"""

from __future__ import annotations

import importlib
import logging
import sys

from config import parse_config
from emit import emit
from errors import ConfigError, ParameterError, TrimerError

logger = logging.getLogger("trimer")

# Map command → module inside commands/
COMMAND_MODULES = {
    "spectrum":   "spectrum",
    "stationary": "stationary",
    "sweep":      "sweep",
    "grid":       "grid",
    "critical":   "critical",
    "correspond": "correspond",
    "fidelity":   "fidelity",
}

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv

    # -------------------- Configuration ------------------------------
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        logging.basicConfig(level=logging.WARNING, format=LOG_FORMAT, stream=sys.stderr)
        logger.error("%s", exc)
        return exc.exit_code

    logging.basicConfig(level=cfg.log_level, format=LOG_FORMAT, stream=sys.stderr)
    logger.info("running %s", cfg.command)

    # -------------------- Dispatch -----------------------------------
    try:
        command = importlib.import_module(f"commands.{COMMAND_MODULES[cfg.command]}")
        emit(command.run(cfg), cfg)
    except ParameterError as exc:
        # bad physical input exits like bad configuration
        logger.error("%s", exc)
        return ConfigError.exit_code
    except TrimerError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
