"""Tabular results: one record per computed value, rendered through pandas."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from config import DEFAULT_SAMPLES, DEFAULT_SEED, FEASIBILITY_CAPS, OUTPUT_DIR, OUTPUT_FORMATS

logger = logging.getLogger(__name__)

COLUMNS = ["params", "value", "method", "verified"]


@dataclass
class RunConfig:
    """Parsed command-line state."""
    command: str
    q: Optional[int] = None
    r: Optional[int] = None
    m: Optional[int] = None
    n: Optional[int] = None
    fmt: str = "text"
    output: Optional[str] = None
    verify: bool = False
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES
    caps: Dict[str, int] = field(default_factory=lambda: dict(FEASIBILITY_CAPS))
    suite: Optional[str] = None
    variety: Optional[str] = None
    which: Optional[str] = None

    def __post_init__(self):
        if self.fmt not in OUTPUT_FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}, expected one of {OUTPUT_FORMATS}")


def _plain(value: Any) -> Any:
    """JSON-friendly version of a cell."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, float) or value is None or isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


class Report:
    """Collects {"params", "value", "method", "verified"} records."""

    def __init__(self, title: str):
        self.title = title
        self.records: List[Dict] = []

    def add(self, params: Dict, value: Any, method: str, verified: Optional[bool] = None):
        record = {"params": _plain(params), "value": _plain(value), "method": method,
                  "verified": None if verified is None else bool(verified)}
        self.records.append(record)
        if verified is False:
            logger.error(f"{self.title}: check failed at {record['params']} with {record['value']}")
        return record

    def extend(self, other: "Report"):
        self.records.extend(other.records)

    @property
    def passed(self) -> bool:
        return all(rec["verified"] is not False for rec in self.records)

    @property
    def failures(self) -> List[Dict]:
        return [rec for rec in self.records if rec["verified"] is False]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.records, columns=COLUMNS)

    def render(self, fmt: str = "text") -> str:
        if fmt == "json":
            return json.dumps(self.records, indent=2, sort_keys=True)
        frame = self.to_frame()
        if fmt == "csv":
            frame = frame.assign(params=frame["params"].map(lambda p: json.dumps(p, sort_keys=True)),
                                 value=frame["value"].map(lambda v: json.dumps(v, sort_keys=True)))
            return frame.to_csv(index=False)
        if frame.empty:
            return f"{self.title}: no rows\n"
        lines = [self.title, frame.to_string(index=False)]
        status = "PASS" if self.passed else f"FAIL ({len(self.failures)} failing rows)"
        lines.append(status)
        return "\n".join(lines) + "\n"


def output_path(name: str) -> Path:
    """Relative paths are placed under OUTPUT_DIR."""
    path = Path(name)
    if not path.is_absolute():
        path = OUTPUT_DIR / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def emit(report: Report, cfg: RunConfig) -> str:
    text = report.render(cfg.fmt)
    if cfg.output:
        path = output_path(cfg.output)
        path.write_text(text)
        logger.info(f"Wrote {len(report.records)} rows to {path}")
    else:
        print(text, end="")
    return text
