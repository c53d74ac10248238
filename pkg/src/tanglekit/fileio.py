"""JSON state files and CSV verification reports.

State file, format 1::

    {"format": 1, "dims": [d_A, d_B],
     "matrix": [[[re, im], ...], ...],
     "label": "...", "seed": 42}          # label/seed optional

Floats are written with Python's shortest round-trip repr, so a re-read
matrix is bit-identical to the one written.
"""
import csv
import json
from pathlib import Path

import numpy as np

from .states import DecompositionResult, DensityMatrix, validate_density

FORMAT_VERSION = 1
CSV_HEADER = ["id", "tau_closed", "tau_chord", "tau_decomp", "gap_chord", "gap_decomp",
              "eof_bound", "eof_oracle", "eof_gap", "status"]


class StateFileError(ValueError):
    """Malformed document (as opposed to a well-formed but invalid state)."""


def encode_matrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(rows) -> np.ndarray:
    try:
        M = np.array([[complex(float(re), float(im)) for re, im in row] for row in rows])
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"matrix entries must be [re, im] pairs: {exc}") from None
    if M.ndim != 2:
        raise StateFileError("matrix must be a list of equal-length rows")
    return M


def state_document(matrix, dims, label=None, seed=None, **extra) -> dict:
    doc = {"format": FORMAT_VERSION, "dims": [int(d) for d in dims],
           "matrix": encode_matrix(matrix)}
    if label is not None:
        doc["label"] = label
    if seed is not None:
        doc["seed"] = seed
    doc.update(extra)
    return doc


def decomposition_document(res: DecompositionResult) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "decomposition",
        "dims": [int(d) for d in res.dims],
        "weights": [float(q) for q in res.weights],
        "states": [[[float(z.real), float(z.imag)] for z in s] for s in res.states],
        "achieved": float(res.achieved),
    }


def parse_state(doc) -> tuple[np.ndarray, tuple[int, int], dict]:
    """Raw matrix, dims and metadata from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise StateFileError("state file must hold a JSON object")
    if doc.get("format") != FORMAT_VERSION:
        raise StateFileError(f"unsupported format {doc.get('format')!r}")
    try:
        d_a, d_b = (int(d) for d in doc["dims"])
        rows = doc["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFileError(f"missing or malformed field: {exc}") from None
    meta = {k: v for k, v in doc.items() if k not in ("format", "dims", "matrix")}
    return decode_matrix(rows), (d_a, d_b), meta


def read_state_file(path) -> tuple[DensityMatrix, dict]:
    """Load and validate a state file. ``OSError`` propagates for I/O trouble."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"not valid JSON: {exc}") from None
    M, dims, meta = parse_state(doc)
    return validate_density(M, dims), meta


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


def write_json(doc: dict, path) -> None:
    Path(path).write_text(dump_json(doc))


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(float(x))  # np.float64 repr is not a bare number
    return str(x)


def write_report_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([_cell(getattr(row, name)) for name in CSV_HEADER])
