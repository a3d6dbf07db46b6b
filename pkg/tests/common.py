"""Common test utilities."""

import json

import numpy as np

from metaward.cli import main
from metaward.metawardpy.correlators import FieldPoints


def random_points(seed: int, size: int, ratio_sign: int = 0, with_zeta: bool = False) -> FieldPoints:
    """Random sample points with |t| in [0.3, 3]; ratio_sign fixes the sign of r/t."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.3, 3.0, size) * rng.choice([-1.0, 1.0], size)
    r = rng.uniform(0.1, 2.0, size) * rng.choice([-1.0, 1.0], size)
    if ratio_sign:
        r = np.abs(r) * np.sign(t) * ratio_sign
    zeta1 = rng.uniform(0.5, 2.0, size) if with_zeta else None
    zeta2 = rng.uniform(0.5, 2.0, size) if with_zeta else None
    return FieldPoints(t, r, zeta1, zeta2)


def run_cli(capsys, *argv: str) -> tuple[int, str, str]:
    """Run the command line in-process and return (exit code, stdout, stderr)."""
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    """Run the command line with JSON output and decode the envelope."""
    code, out, _ = run_cli(capsys, *argv, "--format", "json")
    return code, json.loads(out)
