"""JSON/CSV output and run manifests."""
from __future__ import annotations

import csv
import datetime as _dt
import json
import platform
from pathlib import Path

import numpy as np

from . import __version__

CSV_SCHEMAS = {
    "entropy": ("xxquench.entropy/1", ["t", "S_block"]),
    "fef": ("xxquench.fef/1", ["t", "F_1N"]),
    "optimize": ("xxquench.optimize/1", ["N", "j_opt", "f_max", "t_star", "F"]),
    "noise": ("xxquench.noise/1", ["variant", "param", "pair", "t_prime", "F_mean", "F_stderr"]),
    "correlations": ("xxquench.correlations/1", ["t", "n", "m", "abs_C"]),
}


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    if hasattr(o, "value"):
        return o.value
    raise TypeError(f"cannot serialise {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, default=_default, indent=2, sort_keys=True)


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj) + "\n", encoding="utf-8", newline="\n")
    return path


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_csv(path, schema: str, rows) -> Path:
    path = Path(path)
    _, header = CSV_SCHEMAS[schema]
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return path


def read_csv(path):
    with Path(path).open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_manifest(out: Path, command: str, parameters: dict, outputs, seed=None) -> Path:
    """Record everything needed to re-run a command beside its output."""
    out = Path(out)
    manifest = {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "outputs": [str(p) for p in outputs],
        "schema": CSV_SCHEMAS.get(command, (None,))[0],
    }
    return write_json(out.with_name(out.name + ".manifest.json"), manifest)
