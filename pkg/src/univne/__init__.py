"""Exact solvers for virtual network embedding with uniform demands."""
from __future__ import annotations

__version__ = "0.1.0"
