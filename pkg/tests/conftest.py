from __future__ import annotations

import sys
from pathlib import Path

from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("nilmin", deadline=None, derandomize=True, max_examples=40)
settings.load_profile("nilmin")

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"
