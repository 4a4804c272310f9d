"""Binary netpbm (P5 graymap, P6 pixmap) reading and P5 writing.

Images are 2-D float64 arrays of shape (height, width) with intensities in
[0, 1], 1.0 being white paper and 0.0 ink.
"""
import numpy as np

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])
_WHITESPACE = b" \t\n\r\v\f"


class NetpbmError(ValueError):
    """Base class for netpbm parse failures; `offset` is the byte position."""

    def __init__(self, message, offset):
        super().__init__("%s (at byte offset %d)" % (message, offset))
        self.offset = offset


class UnsupportedFormatError(NetpbmError):
    pass


class MalformedHeaderError(NetpbmError):
    pass


class TruncatedPayloadError(NetpbmError):
    pass


def _next_token(data: bytes, pos: int):
    """Return `(token, start, end)` skipping whitespace and `#` comments."""
    n = len(data)
    while pos < n:
        byte = data[pos:pos + 1]
        if byte in _WHITESPACE:
            pos += 1
        elif byte == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            break
    if pos >= n:
        raise MalformedHeaderError("Header ended before all fields were read", pos)
    start = pos
    while pos < n and data[pos:pos + 1] not in _WHITESPACE and data[pos:pos + 1] != b"#":
        pos += 1
    return data[start:pos], start, pos


def _header_int(data, pos, field):
    token, start, end = _next_token(data, pos)
    if not token.isdigit():
        raise MalformedHeaderError(
            "Expected a decimal %s, got %r" % (field, token[:16]), start
        )
    return int(token), start, end


def decode_netpbm(data: bytes) -> np.ndarray:
    """Decode P5/P6 bytes into a gray image in [0, 1]."""
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise UnsupportedFormatError(
            "Unsupported magic %r, expected b'P5' or b'P6'" % magic, 0
        )
    width, start, pos = _header_int(data, 2, "width")
    if width < 1:
        raise MalformedHeaderError("Width must be >= 1", start)
    height, start, pos = _header_int(data, pos, "height")
    if height < 1:
        raise MalformedHeaderError("Height must be >= 1", start)
    maxval, start, pos = _header_int(data, pos, "maxval")
    if maxval < 1:
        raise MalformedHeaderError("Maxval must be >= 1", start)
    if maxval > 255:
        raise UnsupportedFormatError(
            "Maxval %d needs 16-bit samples, only maxval <= 255 is supported"
            % maxval,
            start,
        )
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
        raise MalformedHeaderError("Expected one whitespace byte after maxval", pos)
    pos += 1

    channels = 3 if magic == b"P6" else 1
    expected = width * height * channels
    payload = data[pos:pos + expected]
    if len(payload) < expected:
        raise TruncatedPayloadError(
            "Payload holds %d of %d expected bytes" % (len(payload), expected),
            pos + len(payload),
        )
    samples = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)
    if samples.max(initial=0) > maxval:
        bad = int(np.argmax(samples > maxval))
        raise MalformedHeaderError(
            "Sample value exceeds maxval %d" % maxval, pos + bad
        )
    samples /= maxval
    if channels == 3:
        img = samples.reshape(height, width, 3) @ LUMA_WEIGHTS
    else:
        img = samples.reshape(height, width)
    return np.clip(img, 0.0, 1.0)


def load_image(path) -> np.ndarray:
    """Load a binary PGM (P5) or PPM (P6) file as a gray image.

    P6 pixels are converted with the luminance weights 0.299 R + 0.587 G +
    0.114 B. Intensities are scaled by the file's maxval.
    """
    with open(path, "rb") as f:
        data = f.read()
    return decode_netpbm(data)


def encode_pgm(img: np.ndarray) -> bytes:
    img = check_image(img)
    height, width = img.shape
    header = b"P5\n%d %d\n255\n" % (width, height)
    payload = np.rint(img * 255.0).astype(np.uint8)
    return header + payload.tobytes()


def save_image(path, img: np.ndarray):
    """Write `img` as P5 with maxval 255, quantized by round(v * 255)."""
    with open(path, "wb") as f:
        f.write(encode_pgm(img))
    return path


def check_image(img) -> np.ndarray:
    """Validate a gray image: 2-D, at least 1x1, values in [0, 1]."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError("Expected a 2-D gray image, got %d dims" % img.ndim)
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("Image must be at least 1x1, got %s" % (img.shape,))
    if not np.all(np.isfinite(img)) or img.min() < 0.0 or img.max() > 1.0:
        raise ValueError("Image intensities must lie in [0, 1]")
    return img
