from __future__ import annotations

import json
import logging
import os
from typing import Any, Optional

from app.utils.exceptions import ValidationError

logger = logging.getLogger(__name__)

# ============================================================================
# JSON I/O
# ============================================================================

def read_json(file_path: str) -> Any:
    """
    Load a JSON document (triangulation, flip program, cluster map).
    Missing files and malformed JSON are input errors.
    """
    if not os.path.exists(file_path):
        raise ValidationError("file not found", [file_path])
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError("malformed JSON", [f"{file_path}: line {e.lineno}: {e.msg}"]) from e


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False, allow_nan=False) + "\n"


def write_text(file_path: Optional[str], text: str) -> None:
    """Write to ``file_path``, or to stdout when it is None or '-'."""
    if file_path in (None, "-"):
        print(text, end="")
        return
    with open(file_path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info("wrote %s", file_path)


def looks_like_path(value: str) -> bool:
    return value.endswith(".json") or os.sep in value or os.path.exists(value)
