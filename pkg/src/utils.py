"""
Console status lines, logging setup and layering of configuration dictionaries.
"""

import logging
from typing import Optional

from colorama import Fore, Style

logger = logging.getLogger(__name__)
_handler = logging.StreamHandler()
_formatter = logging.Formatter("%(message)s")
_handler.setFormatter(_formatter)
logger.addHandler(_handler)
logger.setLevel(logging.DEBUG)
logger.propagate = False

_PACKAGE = __name__.rsplit(".", 1)[0]

# outcome of a check -> (color, level); None is plain progress
_STATUS_STYLE = {
    None: (Fore.LIGHTBLUE_EX, logging.DEBUG),
    True: (Fore.GREEN, logging.DEBUG),
    False: (Fore.RED, logging.ERROR),
}


def configure_logging(verbose: bool = False) -> None:
    """
    Route the library loggers to stderr.

    Args:
        verbose: Show DEBUG messages (cache hits, precision refinements, germ fits);
            only warnings otherwise.
    """
    package_logger = logging.getLogger(_PACKAGE)
    # warnings reach stderr through logging's last resort handler without one
    if verbose and not package_logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        package_logger.addHandler(handler)
    package_logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def merge_config(*layers: Optional[dict]) -> dict:
    """
    Layer configuration dictionaries, later layers winning.

    Nested sections merge key by key. Missing layers and None values are skipped, so an
    option left unset on the command line keeps the value of the file or the defaults.

    Args:
        layers: Dictionaries from the lowest to the highest precedence.

    Returns:
        A new dictionary; the layers are not modified.
    """
    merged: dict = {}
    for layer in layers:
        for key, value in (layer or {}).items():
            if value is None:
                continue
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = merge_config(merged[key], value)
            elif isinstance(value, dict):
                merged[key] = merge_config(value)
            else:
                merged[key] = value
    return merged


def print_status(message: str, passed: Optional[bool] = None) -> None:
    """
    Print a colored status line of the workbench.

    Args:
        message: The text.
        passed: True or False colors the line as a passed or failed check and logs
            failures at ERROR; None marks progress such as a written report.
    """
    color, level = _STATUS_STYLE[passed]
    logger.log(level, f"{Style.BRIGHT}{Fore.YELLOW}[ptw]> {Style.NORMAL}{color}{message}{Style.RESET_ALL}")
