import json
import math
from pathlib import Path
from typing import Any, Dict, Optional

import jsonschema

from ..core.errors import SchemaError
from .logger import logger


def format_float(value: float) -> str:
    """Render a float with 17 significant digits (lossless, fixed width rule)"""
    if not math.isfinite(value):
        raise ValueError(f"Cannot serialize non-finite float: {value}")
    text = format(value, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def dumps_fixed(data: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text where every float is written with 17 significant digits.

    Key order is preserved, so identical inputs give byte-identical output.
    """
    pad = " " * (indent * (_level + 1))
    close = " " * (indent * _level)

    if isinstance(data, bool) or data is None or isinstance(data, str):
        return json.dumps(data)
    if isinstance(data, int):
        return str(data)
    if isinstance(data, float):
        return format_float(data)
    if hasattr(data, "item") and not isinstance(data, (list, tuple, dict)):
        # numpy scalars
        return dumps_fixed(data.item(), indent, _level)
    if isinstance(data, dict):
        if not data:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps_fixed(v, indent, _level + 1)}"
                 for k, v in data.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(data, (list, tuple)):
        if not data:
            return "[]"
        # Flat numeric arrays stay on one line
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in data):
            return "[" + ", ".join(dumps_fixed(v, indent, _level + 1) for v in data) + "]"
        items = [f"{pad}{dumps_fixed(v, indent, _level + 1)}" for v in data]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    raise TypeError(f"Object of type {type(data).__name__} is not JSON serializable")


def dump_json(data: Dict[str, Any], path: Path) -> Path:
    """Write data as fixed-precision JSON"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps_fixed(data))
        f.write("\n")
    logger.debug(f"Saved JSON to {path}")
    return path


def validate_document(data: Any, schema: Optional[Dict[str, Any]], source: str = "<data>") -> None:
    """Validate a decoded JSON document against a schema"""
    if schema is None:
        return
    try:
        jsonschema.validate(instance=data, schema=schema)
    except jsonschema.ValidationError as e:
        raise SchemaError(f"{source}: {e.message}") from e


def load_json(path: Path, schema: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Load a JSON file and validate it against a schema"""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise SchemaError(f"File not found: {path}") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"Failed to parse JSON from {path}: {e}") from e

    validate_document(data, schema, str(path))
    logger.debug(f"Loaded {path}")
    return data
