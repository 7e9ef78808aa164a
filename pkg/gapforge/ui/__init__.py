# UI package
"""Rich-based UI components for gapforge."""

from .components import (
    AuditPanel,
    CheckTable,
    ErrorPanel,
    LoadingSpinner,
    ParamsPanel,
)
from .interface import GapforgeInterface

__all__ = [
    "AuditPanel",
    "CheckTable",
    "ErrorPanel",
    "LoadingSpinner",
    "ParamsPanel",
    "GapforgeInterface",
]
