import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from geomech.errors import GeomechError

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


@dataclass
class PropertyResult:
    """Worst-case deviation of one property against its tolerance."""
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    details: dict = field(default_factory=dict)


def _plain(value):
    """Convert numpy scalars and arrays for JSON."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value


def measure(name, tolerance, fn, at_least=False):
    """Run ``fn() -> (deviation, details)`` and compare with ``tolerance``.

    With ``at_least`` the property passes when the value is at least the
    tolerance (used for convergence slopes). Errors raised by the engine turn
    into a failed result carrying the message.
    """
    try:
        deviation, details = fn()
    except GeomechError as err:
        log.warning("property %s raised: %s", name, err)
        return PropertyResult(name, False, float("inf"), tolerance, {"error": str(err)})
    deviation = float(deviation)
    passed = deviation >= tolerance if at_least else deviation <= tolerance
    return PropertyResult(name, bool(passed), deviation, tolerance, _plain(details or {}))


def exact(name, equal, details=None):
    return PropertyResult(name, bool(equal), 0.0 if equal else 1.0, 0.0, _plain(details or {}))


@dataclass
class CheckReport:
    seed: int
    trials: int
    suites: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for results in self.suites.values() for r in results)

    def to_dict(self):
        return {"schema_version": SCHEMA_VERSION, "seed": self.seed, "trials": self.trials, "passed": self.passed,
                "suites": {name: [asdict(r) for r in results] for name, results in self.suites.items()}}

    def lines(self):
        out = []
        for suite, results in self.suites.items():
            for r in results:
                status = "PASS" if r.passed else "FAIL"
                out.append(f"{status} {suite}/{r.name}: max deviation {r.max_deviation:.3e} (tolerance {r.tolerance:.1e})")
        out.append("PASS" if self.passed else "FAIL")
        return out

    def write(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = self.to_dict()
        with open(path, "w", encoding="utf-8") as fd:
            json.dump(payload, fd, indent=2, allow_nan=True)
        log.info("check report written to %s", path)
        return path
