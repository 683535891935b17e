from dataclasses import asdict, dataclass
import io
import logging
import re
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

COLUMNS = ["vehicle_id", "t", "x", "y", "vx", "vy"]
NUMERIC_COLUMNS = COLUMNS[1:]
TIMESTEP = 0.1           # native sampling interval (s)
TIMESTEP_TOL = 1e-6


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NonUniformTimestep(ValueError):
    """Consecutive samples of a vehicle are not one timestep apart"""


class MissingColumn(ValueError):
    """A required header column is absent"""


@dataclass(frozen=True)
class TrajectorySample:
    vehicle_id: str
    t: float
    x: float
    y: float
    vx: float
    vy: float


def _parse_numbers(raw: pd.DataFrame) -> pd.DataFrame:
    frame = raw.copy()
    for column in NUMERIC_COLUMNS:
        values = pd.to_numeric(frame[column].str.strip(), errors="coerce")
        bad = values.isna() | ~np.isfinite(values.fillna(0.0))
        if bad.any():
            row = bad.idxmax()
            # header is line 1, first data row line 2
            raise ParseError(int(row) + 2, f"{column}={raw.at[row, column]!r} is not a finite number")
        frame[column] = values.astype(float)
    return frame


def _read_table(path: Path) -> pd.DataFrame:
    """Every cell as text; malformed bytes and rows become ParseError with their line"""
    data = path.read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(data.count(b"\n", 0, e.start) + 1, f"invalid UTF-8 byte 0x{data[e.start]:02x}") from e
    try:
        return pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise MissingColumn(f"{path}: no header line") from e
    except pd.errors.ParserError as e:
        found = re.search(r"line (\d+)", str(e))
        raise ParseError(int(found.group(1)) if found else 0, str(e).split("C error: ")[-1]) from e


def load_csv(path: Union[str, Path], timestep: float = TIMESTEP) -> Dict[str, List[TrajectorySample]]:
    """Samples grouped per vehicle and sorted by time"""
    path = Path(path)
    raw = _read_table(path)
    missing = [c for c in COLUMNS if c not in raw.columns]
    if missing:
        raise MissingColumn(f"{path}: missing column(s) {', '.join(missing)}")
    if raw.empty:
        logger.warning(f"{path} holds no samples")
        return {}

    frame = _parse_numbers(raw[COLUMNS])
    frame["vehicle_id"] = frame["vehicle_id"].str.strip()
    frame = frame.sort_values(["vehicle_id", "t"], kind="mergesort")

    samples: Dict[str, List[TrajectorySample]] = {}
    for vehicle_id, group in frame.groupby("vehicle_id", sort=True):
        gaps = np.diff(group["t"].to_numpy())
        off = np.flatnonzero(np.abs(gaps - timestep) > TIMESTEP_TOL)
        if off.size:
            t_prev = group["t"].iloc[off[0]]
            raise NonUniformTimestep(
                f"vehicle {vehicle_id}: gap of {gaps[off[0]]:.6g}s after t={t_prev:.6g}s, expected {timestep}s"
            )
        samples[str(vehicle_id)] = [
            TrajectorySample(str(vehicle_id), row.t, row.x, row.y, row.vx, row.vy)
            for row in group.itertuples(index=False)
        ]

    logger.info(f"loaded {len(frame)} samples of {len(samples)} vehicles from {path}")
    return samples


def samples_frame(samples_by_vehicle: Dict[str, List[TrajectorySample]]) -> pd.DataFrame:
    rows = [asdict(s) for samples in samples_by_vehicle.values() for s in samples]
    return pd.DataFrame(rows, columns=COLUMNS)


def write_samples(samples_by_vehicle: Dict[str, List[TrajectorySample]], path: Union[str, Path]) -> None:
    samples_frame(samples_by_vehicle).to_csv(path, index=False, float_format="%.9g", lineterminator="\n")
