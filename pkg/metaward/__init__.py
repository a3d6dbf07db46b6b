"""The metaward toolkit: meta-conformal representations, their Ward identities and two-point functions."""
from __future__ import annotations

import json
from pathlib import Path

_MANIFEST = Path(__file__).with_name("manifest.json")

__version__: str = json.loads(_MANIFEST.read_text(encoding="utf-8"))["version"]
