import os


def strict_mode() -> bool:
    return os.environ.get("WORKFLUCT_STRICT", "") == "1"


def tol(value: float) -> float:
    """Scale a stated tolerance; halved when ``WORKFLUCT_STRICT=1``."""
    return value / 2 if strict_mode() else value
