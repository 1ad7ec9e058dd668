"""Plain-text I/O: datasets, flat key-value configs, reports, curve tables.

Everything is comma-delimited or key=value text with LF line endings so the
artifacts diff cleanly and round-trip exactly (times are written with
shortest-repr precision, which reads back to the identical float64).
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import ConfigError, DataFormatError
from .sampling import SurvivalDataset

DAYS_PER_YEAR = 365.25


def read_config(path: str) -> dict[str, str]:
    """Flat key=value file; '#' starts a comment, blank lines ignored."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def apply_overrides(config: dict[str, str], overrides) -> dict[str, str]:
    out = dict(config)
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def get_float(config: dict[str, str], key: str, default=None) -> float:
    if key not in config:
        if default is None:
            raise ConfigError(f"missing required config key {key!r}")
        return default
    try:
        return float(config[key])
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from None


def get_int(config: dict[str, str], key: str, default=None) -> int:
    if key not in config:
        if default is None:
            raise ConfigError(f"missing required config key {key!r}")
        return default
    try:
        return int(config[key])
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from None


def write_dataset(path: str, data: SurvivalDataset) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("time,status\n")
        for t, d in zip(data.times, data.events):
            fh.write(f"{float(t)!r},{int(d)}\n")


def write_meta(path: str, meta: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key in sorted(meta):
            fh.write(f"{key}={meta[key]}\n")


def read_dataset(
    path: str,
    convention: str = "status01",
    time_unit: str = "native",
) -> SurvivalDataset:
    """Read a time,status table.

    convention "status01": 1=event, 0=censored (the writer's format);
    "status12": 1=censored, 2=dead, as shipped with the clinical source.
    time_unit "days-to-years" divides times by 365.25.
    """
    if convention not in ("status01", "status12"):
        raise DataFormatError(f"unknown status convention {convention!r}")
    if time_unit not in ("native", "days-to-years"):
        raise DataFormatError(f"unknown time unit {time_unit!r}")
    if not os.path.exists(path):
        raise DataFormatError(f"dataset file not found: {path}")
    times: list[float] = []
    events: list[int] = []
    dropped = 0
    bad_rows: list[str] = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        cols = [c.strip().lower() for c in header.strip().split(",")]
        if "time" not in cols or "status" not in cols:
            raise DataFormatError(
                f"{path}: header must contain 'time' and 'status', got {header.strip()!r}"
            )
        it, is_ = cols.index("time"), cols.index("status")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) <= max(it, is_):
                bad_rows.append(f"line {lineno}: {line!r}")
                continue
            t_field = parts[it].strip()
            if t_field in ("", "NA", "nan", "NaN"):
                dropped += 1
                continue
            try:
                t = float(t_field)
                status = int(float(parts[is_]))
            except ValueError:
                bad_rows.append(f"line {lineno}: {line!r}")
                continue
            if convention == "status01":
                if status not in (0, 1):
                    bad_rows.append(f"line {lineno}: status {status}")
                    continue
                delta = status
            else:
                if status not in (1, 2):
                    bad_rows.append(f"line {lineno}: status {status}")
                    continue
                delta = 1 if status == 2 else 0
            times.append(t)
            events.append(delta)
    if bad_rows:
        shown = "; ".join(bad_rows[:5])
        raise DataFormatError(f"{path}: {len(bad_rows)} malformed rows ({shown})")
    if not times:
        raise DataFormatError(f"{path}: no usable rows")
    t_arr = np.asarray(times, dtype=float)
    meta = {
        "source": path,
        "convention": convention,
        "time_unit": "native",
        "dropped_rows": dropped,
    }
    if time_unit == "days-to-years":
        t_arr = t_arr / DAYS_PER_YEAR
        meta["time_unit"] = f"years (days / {DAYS_PER_YEAR})"
    return SurvivalDataset(times=t_arr, events=np.asarray(events, dtype=np.int64), meta=meta)


def write_curves(path: str, t: np.ndarray, h: np.ndarray, H: np.ndarray) -> None:
    """t,h,S,H rows with S computed as exp(-H) so the file is self-consistent."""
    S = np.exp(-H)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,h,S,H\n")
        for row in zip(t, h, S, H):
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def write_report(path: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def write_mgf_sweep(path: str, results) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("s,value,divergent\n")
        for r in results:
            value = "inf" if math.isinf(r.value) else repr(float(r.value))
            fh.write(f"{float(r.s)!r},{value},{int(r.divergent)}\n")


def write_study_table(path: str, result) -> None:
    rows = result.table_rows()
    if not rows:
        raise ConfigError("empty study result")
    keys = list(rows[0].keys())
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(keys) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    repr(float(row[k])) if isinstance(row[k], float) else str(row[k])
                    for k in keys
                )
                + "\n"
            )
