import logging
import os
import sys
from typing import Optional


def setup_logger(name: str, out_dir: Optional[str] = None, verbose: bool = False) -> logging.Logger:
    """Console logging on stderr (stdout carries JSON records), plus out_dir/logs/{name}.log."""
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    handlers = [logging.StreamHandler(sys.stderr)]
    if out_dir:
        os.makedirs(os.path.join(out_dir, "logs"), exist_ok=True)
        handlers.append(logging.FileHandler(os.path.join(out_dir, "logs", f"{name}.log"), encoding="utf-8"))
    fmt = logging.Formatter("[%(asctime)s] %(levelname)s %(name)s - %(message)s")
    for h in handlers:
        h.setFormatter(fmt)
        logger.addHandler(h)
    return logger


def get_logger(name: str) -> logging.Logger:
    """Get a logger under the 'topkvote' hierarchy so setup_logger('topkvote') covers it."""
    if name != "topkvote" and not name.startswith("topkvote."):
        name = f"topkvote.{name}"
    return logging.getLogger(name)
