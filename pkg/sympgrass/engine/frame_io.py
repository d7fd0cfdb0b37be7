# sympgrass/engine/frame_io.py
# Plain-text matrix files
#
#   rows cols
#   a11 a12 ...
#   a21 a22 ...
#
# Entries are written with 17 significant digits so a float64 survives a
# write/read cycle bit for bit.

from pathlib import Path

import numpy as np

from sympgrass.engine.errors import ExportError, InvalidInput
from sympgrass.engine.lagrangian import LagrangianSubspace, from_frame
from sympgrass.engine.numerics import Matrix, as_matrix

FLOAT_FORMAT = "%.17g"


def format_matrix(a: Matrix) -> str:
    arr = as_matrix(a)
    rows = [" ".join(FLOAT_FORMAT % x for x in row) for row in arr]
    return "\n".join([f"{arr.shape[0]} {arr.shape[1]}", *rows]) + "\n"


def parse_matrix(text: str) -> Matrix:
    tokens = text.split()
    if len(tokens) < 2:
        raise InvalidInput("matrix text is missing its 'rows cols' header")
    try:
        rows, cols = int(tokens[0]), int(tokens[1])
        values = np.array([float(t) for t in tokens[2:]])
    except ValueError as exc:
        raise InvalidInput(f"matrix text is malformed: {exc}") from exc
    if rows < 0 or cols < 0 or values.size != rows * cols:
        raise InvalidInput(
            f"matrix text declares {rows}x{cols} but holds {values.size} entries",
            value=values.size, limit=rows * cols,
        )
    return values.reshape(rows, cols)


def write_matrix(a: Matrix, path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_matrix(a))
    except OSError as exc:
        raise ExportError(f"cannot write matrix file {path}: {exc}") from exc
    return path


def read_matrix(path) -> Matrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ExportError(f"cannot read matrix file {path}: {exc}") from exc
    return parse_matrix(text)


def write_frame(L: LagrangianSubspace, path) -> Path:
    return write_matrix(L.frame, path)


def read_frame(path) -> LagrangianSubspace:
    return from_frame(read_matrix(path))
