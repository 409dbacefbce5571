"""Empirical constants for the asymptotic bounds, frozen to a JSON file.

The theorems only assert O/<< relations; desk-scale regression needs fixed
constants. Defaults below were fitted on the acceptance grid; `suite
--calibrate` refits them from measurements and rewrites the file.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, replace
from pathlib import Path

DEFAULT_FILENAME = "calibration.json"


@dataclass(frozen=True)
class Calibration:
    thm1_normalized_max: float = 5.0   # |lhs - Re rhs| / T^(3/4)
    thm1_slope_max: float = 0.85       # log|diff| vs log T regression slope
    im_leak_coeff: float = 5.0         # |Im rhs| <= coeff * T^(3/4)
    m1_ratio_max: float = 5.0          # |int_0^T Z| / T^(1/4)
    m4_ratio_lo: float = 0.7           # M4 / (T log^4 T / (2 pi^2))
    m4_ratio_hi: float = 1.3
    plain_sum_coeff: float = 50.0      # |T(alpha,N)| |alpha| / N^(1/3)
    t2_ratio_max: float = 1.0          # ms_exact / (N^(4/3) log^9 N)

    def as_dict(self) -> dict:
        return asdict(self)


def calibration_path(directory: Path | str | None = None) -> Path:
    base = Path(directory) if directory else Path(
        os.environ.get("HARDY_CACHE_DIR", "./cache"))
    return base / DEFAULT_FILENAME


def load_calibration(path: Path | None = None) -> Calibration:
    """Stored constants if the file exists, else the shipped defaults."""
    path = path or calibration_path()
    if not path.exists():
        return Calibration()
    with open(path) as fh:
        data = json.load(fh)
    known = {k: float(v) for k, v in data.items()
             if k in Calibration.__dataclass_fields__}
    return replace(Calibration(), **known)


def save_calibration(cal: Calibration, path: Path | None = None) -> Path:
    path = path or calibration_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(cal.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def fit_from_measurements(measured: dict, margin: float = 1.25) -> Calibration:
    """New calibration from raw suite measurements, padded by a safety margin.

    Expected keys (all optional; missing ones keep defaults):
    normalized_max, im_leak_ratio_max, m1_ratio_max, plain_ratio, t2_ratio_max.
    """
    base = Calibration()
    updates = {}
    if "normalized_max" in measured:
        updates["thm1_normalized_max"] = margin * measured["normalized_max"]
    if "im_leak_ratio_max" in measured:
        updates["im_leak_coeff"] = margin * measured["im_leak_ratio_max"]
    if "m1_ratio_max" in measured:
        updates["m1_ratio_max"] = margin * measured["m1_ratio_max"]
    if "plain_ratio" in measured:
        updates["plain_sum_coeff"] = margin * measured["plain_ratio"]
    if "t2_ratio_max" in measured:
        updates["t2_ratio_max"] = margin * measured["t2_ratio_max"]
    return replace(base, **updates)
