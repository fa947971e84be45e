"""PGM (P2/P5) and SEM codecs for two-dimensional grey images.

PGM holds full rectangles only; its maxval becomes the image ceiling and
points are (row, col) with the top-left pixel at (0, 0). SEM is a small text
format for partial domains and structuring elements:

    SEM <rows> <cols> <origin_row> <origin_col> <maxval>
    <rows x cols tokens: an integer in [0, maxval] or '.' for not-in-domain>

Grid cell (r, c) holds the value at point (r - origin_row, c - origin_col).
Lines starting with '#' are comments.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from .errors import ImageFormatError, MorphError
from .grid import GreyImage

logger = logging.getLogger(__name__)

PGM_MAGICS = (b"P2", b"P5")
SEM_MAGIC = "SEM"
MAX_MAXVAL = 65535


# --- PGM ---


def _pgm_tokens(data: bytes, count: int, pos: int = 0) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping comments.

    Returns the tokens and the offset just past the last one.
    """
    tokens: list[bytes] = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= n:
            raise ImageFormatError("truncated PGM header")
        if data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def parse_pgm(data: bytes) -> GreyImage:
    """Decode a P2 or P5 file.

    Raises:
        ImageFormatError: on an unknown magic, bad header or short raster.
    """
    (magic, w, h, m), pos = _pgm_tokens(data, 4)
    if magic not in PGM_MAGICS:
        raise ImageFormatError(f"not a PGM file (magic {magic!r})")
    try:
        cols, rows, maxval = int(w), int(h), int(m)
    except ValueError as exc:
        raise ImageFormatError(f"bad PGM header: {exc}") from exc
    if cols < 1 or rows < 1:
        raise ImageFormatError(f"PGM size must be positive, got {cols}x{rows}")
    if not 1 <= maxval <= MAX_MAXVAL:
        raise ImageFormatError(f"PGM maxval must lie in [1, {MAX_MAXVAL}], got {maxval}")

    count = rows * cols
    if magic == b"P5":
        # exactly one whitespace byte separates maxval from the raster
        pos += 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
        needed = count * dtype.itemsize
        raster = data[pos : pos + needed]
        if len(raster) < needed:
            raise ImageFormatError(f"PGM raster too short: {len(raster)} of {needed} bytes")
        values = np.frombuffer(raster, dtype=dtype).astype(np.int64)
    else:
        body = b"\n".join(line.split(b"#", 1)[0] for line in data[pos:].splitlines())
        try:
            values = np.array([int(t) for t in body.split()], dtype=np.int64)
        except ValueError as exc:
            raise ImageFormatError(f"bad P2 sample: {exc}") from exc
        if values.size < count:
            raise ImageFormatError(f"P2 raster too short: {values.size} of {count} samples")
        values = values[:count]
    if values.size and values.max() > maxval:
        raise ImageFormatError(f"PGM sample {values.max()} exceeds maxval {maxval}")
    return GreyImage(values.reshape(rows, cols), ceiling=maxval)


def format_pgm(image: GreyImage, plain: bool = False) -> bytes:
    """Encode a full-rectangle 2-D image as P5 (or P2 when ``plain``).

    Raises:
        ImageFormatError: for empty, partial-domain or non-2-D images.
    """
    if image.dim != 2:
        raise ImageFormatError(f"PGM holds 2-D images only, got {image.dim}-D")
    if image.is_empty:
        raise ImageFormatError("cannot write an empty image as PGM")
    if not image.mask.all():
        raise ImageFormatError("PGM cannot hold a partial domain; write SEM instead")
    if image.ceiling > MAX_MAXVAL:
        raise ImageFormatError(f"ceiling {image.ceiling} exceeds the PGM maxval limit")
    if image.origin != (0, 0):
        logger.debug(f"PGM drops the image origin {image.origin}")
    rows, cols = image.shape
    maxval = image.ceiling
    if plain:
        width = len(str(maxval))
        lines = [" ".join(f"{v:>{width}d}" for v in row) for row in image.values.tolist()]
        return f"P2\n{cols} {rows}\n{maxval}\n".encode() + ("\n".join(lines) + "\n").encode()
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
    return f"P5\n{cols} {rows}\n{maxval}\n".encode() + image.values.astype(dtype).tobytes()


def read_pgm(path: Path | str) -> GreyImage:
    return parse_pgm(Path(path).read_bytes())


def write_pgm(image: GreyImage, path: Path | str, plain: bool = False) -> None:
    Path(path).write_bytes(format_pgm(image, plain))


# --- SEM ---


def parse_sem(text: str) -> GreyImage:
    """Decode SEM text.

    Raises:
        ImageFormatError: on a bad header, token count or value.
    """
    lines = [line.split("#", 1)[0] for line in text.splitlines()]
    tokens = " ".join(lines).split()
    if len(tokens) < 6 or tokens[0] != SEM_MAGIC:
        raise ImageFormatError("not a SEM file (expected 'SEM rows cols origin_row origin_col maxval')")
    try:
        rows, cols, orow, ocol, maxval = (int(t) for t in tokens[1:6])
    except ValueError as exc:
        raise ImageFormatError(f"bad SEM header: {exc}") from exc
    if rows < 1 or cols < 1:
        raise ImageFormatError(f"SEM size must be positive, got {rows}x{cols}")
    if not (0 <= orow < rows and 0 <= ocol < cols):
        raise ImageFormatError(f"SEM origin ({orow}, {ocol}) outside the {rows}x{cols} grid")
    if maxval < 1:
        raise ImageFormatError(f"SEM maxval must be positive, got {maxval}")
    cells = tokens[6:]
    if len(cells) != rows * cols:
        raise ImageFormatError(f"SEM needs {rows * cols} tokens, found {len(cells)}")
    values = np.zeros(rows * cols, dtype=np.int64)
    mask = np.zeros(rows * cols, dtype=bool)
    for i, token in enumerate(cells):
        if token == ".":
            continue
        try:
            v = int(token)
        except ValueError as exc:
            raise ImageFormatError(f"bad SEM token {token!r}") from exc
        if not 0 <= v <= maxval:
            raise ImageFormatError(f"SEM value {v} outside [0, {maxval}]")
        values[i], mask[i] = v, True
    try:
        return GreyImage(
            values.reshape(rows, cols), mask.reshape(rows, cols), (-orow, -ocol), maxval
        )
    except MorphError as exc:
        raise ImageFormatError(str(exc)) from exc


def format_sem(image: GreyImage) -> str:
    """Encode a 2-D image as SEM; the grid always contains the origin."""
    if image.dim != 2:
        raise ImageFormatError(f"SEM holds 2-D images only, got {image.dim}-D")
    if image.is_empty:
        lo, hi = (0, 0), (0, 0)
    else:
        lo = tuple(min(o, 0) for o in image.origin)
        hi = tuple(max(o + n - 1, 0) for o, n in zip(image.origin, image.shape))
    rows, cols = hi[0] - lo[0] + 1, hi[1] - lo[1] + 1
    width = len(str(image.ceiling))
    out = [f"{SEM_MAGIC} {rows} {cols} {-lo[0]} {-lo[1]} {image.ceiling}"]
    for r in range(rows):
        row = []
        for c in range(cols):
            v = image.value((lo[0] + r, lo[1] + c))
            row.append(f"{'.' if v is None else v:>{width}}")
        out.append(" ".join(row))
    return "\n".join(out) + "\n"


def read_sem(path: Path | str) -> GreyImage:
    return parse_sem(Path(path).read_text())


def write_sem(image: GreyImage, path: Path | str) -> None:
    Path(path).write_text(format_sem(image))


# --- Dispatch ---


def read_image(path: Path | str) -> GreyImage:
    """Read PGM or SEM, chosen by the file's leading bytes."""
    data = Path(path).read_bytes()
    head = data.lstrip()[:3]
    if head[:2] in PGM_MAGICS:
        image = parse_pgm(data)
    elif head == SEM_MAGIC.encode():
        try:
            image = parse_sem(data.decode("ascii"))
        except UnicodeDecodeError as exc:
            raise ImageFormatError(f"SEM files are ASCII: {exc}") from exc
    else:
        raise ImageFormatError(f"{path}: neither PGM nor SEM")
    logger.debug(f"Read {image!r} from {path}")
    return image


def write_image(image: GreyImage, path: Path | str, plain: bool = False) -> None:
    """Write ``.pgm`` paths as PGM (P5, or P2 when ``plain``), anything else as SEM."""
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        write_pgm(image, path, plain)
    else:
        write_sem(image, path)
    logger.debug(f"Wrote {image!r} to {path}")
