"""
Result Tables

Rows are collected into pandas DataFrames with a fixed column order and
written as CSV (9 significant digits) or as JSON
{"columns": [...], "rows": [[...], ...]} holding the same values.
"""
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import pandas as pd

from .errors import InvalidConfigError

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
FLOAT_FORMAT = "%.9g"


def to_frame(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
    """Build a DataFrame with exactly `columns`, in that order."""
    return pd.DataFrame([{c: row.get(c) for c in columns} for row in rows], columns=list(columns))


def _json_value(value: Any) -> Any:
    if value is None:
        return None
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render_table(df: pd.DataFrame, fmt: str = "csv") -> str:
    """Render a table as CSV or JSON text."""
    if fmt == "csv":
        return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if fmt == "json":
        payload = {
            "columns": [str(c) for c in df.columns],
            "rows": [[_json_value(v) for v in row] for row in df.itertuples(index=False, name=None)],
        }
        return json.dumps(payload, indent=2) + "\n"
    raise InvalidConfigError(f"Unsupported output format '{fmt}'. Supported: {', '.join(FORMATS)}")


def write_table(df: pd.DataFrame, path: Optional[Union[str, Path]] = None, fmt: str = "csv") -> str:
    """
    Write a table to `path`, or to stdout when no path is given.

    Returns:
        The rendered text
    """
    text = render_table(df, fmt)
    if path is None:
        sys.stdout.write(text)
    else:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {len(df)} rows to {path}")
    return text


def _clean(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return _json_value(value)


def write_summary(summary: Dict[str, Any], path: Optional[Union[str, Path]] = None) -> str:
    """Write a JSON summary record; non-finite floats become null."""
    text = json.dumps(_clean(summary), indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote summary to {path}")
    return text
