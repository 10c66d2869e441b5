import json
import math
from pathlib import Path
import numpy as np
from .config import SCHEMA_VERSION


def plain(value):
    """
    JSON-ready copy: numpy scalars and arrays become Python values,
    non-finite floats become null.
    """
    if isinstance(value, dict):
        return {str(k): plain(v) for (k, v) in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, complex):
        return {"re": plain(value.real), "im": plain(value.imag)}
    return value


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def write_csv(path, config, header, rows):
    """
    Two comment lines (schema version, resolved config), a header row, then
    one comma-separated line per row with floats at 17 significant digits.
    """
    path = Path(path)
    lines = [
        f"# schema_version={SCHEMA_VERSION}",
        "# config=" + json.dumps(plain(config.to_dict()), sort_keys=True, separators=(",", ":")),
        ",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json(path, config, body):
    path = Path(path)
    doc = {"schema_version": SCHEMA_VERSION, "config": config.to_dict()}
    doc.update(body)
    path.write_text(json.dumps(plain(doc), indent=2) + "\n")
    return path


def output_dir(config):
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    return out
