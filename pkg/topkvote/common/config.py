import os
from typing import Mapping, Optional

from .errors import ValidationError
from .models import Method, RunConfig, TiePolicy


DEFAULT_ORACLE_CAP = 10 ** 6
DEFAULT_MAX_POINTS = 200_000
DEFAULT_MAX_K = 3
DEFAULT_WORKERS = 1

ENV_ORACLE_CAP = "TOPKVOTE_ORACLE_CAP"
ENV_MAX_POINTS = "TOPKVOTE_MAX_POINTS"
ENV_WORKERS = "TOPKVOTE_WORKERS"


def _int_or_default(val, default):
    try:
        return int(val)
    except Exception:
        return default


def _positive(name: str, val: int) -> int:
    if val < 1:
        raise ValidationError(f"{name} must be positive, got {val}")
    return val


def load_run_config(
    method: str = "auto",
    cap: Optional[int] = None,
    policy: str = "given",
    output: Optional[str] = None,
    max_points: Optional[int] = None,
    max_k: Optional[int] = None,
    workers: Optional[int] = None,
    verbose: bool = False,
    out_dir: Optional[str] = None,
    env: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Build a RunConfig: explicit values first, then environment, then defaults."""
    env = os.environ if env is None else env
    if cap is None:
        cap = _int_or_default(env.get(ENV_ORACLE_CAP), DEFAULT_ORACLE_CAP)
    if max_points is None:
        max_points = _int_or_default(env.get(ENV_MAX_POINTS), DEFAULT_MAX_POINTS)
    if workers is None:
        workers = _int_or_default(env.get(ENV_WORKERS), DEFAULT_WORKERS)
    if max_k is None:
        max_k = DEFAULT_MAX_K
    try:
        method_v = Method(method)
        policy_v = TiePolicy(policy)
    except ValueError as e:
        raise ValidationError(str(e)) from None
    return RunConfig(
        method=method_v,
        oracle_cap=_positive("oracle cap", cap),
        policy=policy_v,
        output=output,
        max_points=_positive("max points", max_points),
        max_k=_positive("max k", max_k),
        workers=max(1, workers),
        verbose=bool(verbose),
        out_dir=out_dir,
    )
