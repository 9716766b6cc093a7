"""Exact decision procedure for minimal hermitian metrics on nilpotent Lie algebras with complex structure."""
from __future__ import annotations

__version__ = "0.1.0"
