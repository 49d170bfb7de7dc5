import os

ENV_VAR = "NETDEPTH_THREADS"


def threads(requested: int | None = None) -> int:
    """Worker count: explicit request, else ``$NETDEPTH_THREADS``, else the CPU count."""
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get(ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {env!r}") from None
    return os.cpu_count() or 1
