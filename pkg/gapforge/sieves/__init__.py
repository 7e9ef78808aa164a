# Sieves package
"""Prime sieve backends for gapforge."""

from .base import SieveBackend
from .numpy_sieve import NumpySieve
from .python_sieve import PythonSieve

BACKENDS = {
    NumpySieve.backend_name: NumpySieve,
    PythonSieve.backend_name: PythonSieve,
}


def get_backend(name: str = "numpy", limit: int = 10**8) -> SieveBackend:
    """Instantiate a sieve backend by name."""
    try:
        return BACKENDS[name](limit)
    except KeyError:
        raise ValueError(f"unknown sieve backend {name!r}; choose from {sorted(BACKENDS)}") from None


__all__ = ["SieveBackend", "NumpySieve", "PythonSieve", "BACKENDS", "get_backend"]
