"""Five-distance sets in three dimensions and the dodecahedral configurations."""
from __future__ import annotations

__version__ = "0.1.0"
