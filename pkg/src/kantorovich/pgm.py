"""Netpbm PGM (P2/P5) reader and writer with deterministic output bytes."""

from __future__ import annotations

from pathlib import Path

import numpy as np


class PgmParseError(ValueError):
    """Malformed PGM input; carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class _Tokenizer:
    """Whitespace-separated token reader that skips '#' comment lines."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_separators(self) -> None:
        while self.pos < len(self.data):
            c = self.data[self.pos:self.pos + 1]
            if c.isspace():
                self.pos += 1
            elif c == b"#":
                nl = self.data.find(b"\n", self.pos)
                self.pos = len(self.data) if nl < 0 else nl + 1
            else:
                return

    def token(self) -> bytes:
        self.skip_separators()
        if self.pos >= len(self.data):
            raise PgmParseError("unexpected end of header", self.pos)
        start = self.pos
        while self.pos < len(self.data) and not self.data[self.pos:self.pos + 1].isspace():
            self.pos += 1
        return self.data[start:self.pos]

    def integer(self, what: str) -> int:
        start = self.pos
        tok = self.token()
        try:
            return int(tok)
        except ValueError:
            raise PgmParseError(f"invalid {what}: {tok!r}", start) from None


def load_pgm(path: str | Path) -> np.ndarray:
    """Load a P2 or P5 PGM file as floats normalized to [0, 1]."""
    data = Path(path).read_bytes()
    tok = _Tokenizer(data)
    magic = tok.token()
    if magic not in (b"P2", b"P5"):
        raise PgmParseError(f"not a PGM file (magic {magic!r})", 0)
    width = tok.integer("width")
    height = tok.integer("height")
    maxval = tok.integer("maxval")
    if width < 1 or height < 1:
        raise PgmParseError("non-positive image dimensions", tok.pos)
    if not 1 <= maxval <= 65535:
        raise PgmParseError(f"maxval {maxval} outside [1, 65535]", tok.pos)
    count = width * height

    if magic == b"P2":
        values = np.empty(count, dtype=np.int64)
        for i in range(count):
            values[i] = tok.integer("pixel value")
    else:
        # Raw data begins after exactly one whitespace byte past the header.
        if tok.pos >= len(data) or not data[tok.pos:tok.pos + 1].isspace():
            raise PgmParseError("missing separator before raster data", tok.pos)
        start = tok.pos + 1
        per_pixel = 1 if maxval < 256 else 2
        need = count * per_pixel
        raw = data[start:start + need]
        if len(raw) < need:
            raise PgmParseError(
                f"truncated raster: expected {need} bytes, found {len(raw)}",
                start + len(raw),
            )
        dtype = np.dtype(">u2") if per_pixel == 2 else np.dtype("u1")
        values = np.frombuffer(raw, dtype=dtype).astype(np.int64)

    if np.any(values < 0) or np.any(values > maxval):
        bad = int(np.argmax((values < 0) | (values > maxval)))
        raise PgmParseError(f"pixel value exceeds maxval {maxval}", bad)
    return values.reshape(height, width).astype(np.float64) / maxval


def save_pgm(
    img: np.ndarray,
    path: str | Path,
    bits: int = 8,
    magic: str = "P5",
    comments: tuple[str, ...] = (),
) -> None:
    """Write an image, clipping to [0, 1] and quantizing round-half-up."""
    if bits not in (8, 16):
        raise ValueError("bits must be 8 or 16")
    if magic not in ("P2", "P5"):
        raise ValueError("magic must be P2 or P5")
    img = np.asarray(img, dtype=float)
    if img.ndim != 2:
        raise ValueError("image must be 2D")
    maxval = (1 << bits) - 1
    q = np.floor(np.clip(img, 0.0, 1.0) * maxval + 0.5).astype(np.int64)
    q = np.minimum(q, maxval)

    header = [magic.encode()]
    header += [b"# " + c.encode() for c in comments]
    header.append(f"{img.shape[1]} {img.shape[0]}".encode())
    header.append(str(maxval).encode())
    blob = b"\n".join(header) + b"\n"
    if magic == "P2":
        rows = (b" ".join(str(v).encode() for v in row) for row in q)
        blob += b"\n".join(rows) + b"\n"
    else:
        dtype = np.dtype(">u2") if bits == 16 else np.dtype("u1")
        blob += q.astype(dtype).tobytes()
    Path(path).write_bytes(blob)


def quantization_bound(bits: int) -> float:
    """Worst-case pixel error of a save/load round trip."""
    return 0.5 / ((1 << bits) - 1)
