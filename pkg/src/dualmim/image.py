"""Grayscale rasters, PNG I/O, [0,1] normalization, and bilinear resizing.

Images live on disk as 8-bit grayscale PNGs and in memory as float64
fields in [0,1]. Everything downstream (masking, spectra, losses)
operates on :class:`FloatField`.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

# ITU-R BT.601 luma weights for color -> gray conversion.
_LUMA_R, _LUMA_G, _LUMA_B = 0.299, 0.587, 0.114


class MalformedPngError(ValueError):
    """File exists but is not a decodable PNG."""


class UnsupportedDepthError(ValueError):
    """PNG sample depth outside the supported 1..16 bit range."""


@dataclass(frozen=True)
class GrayImage:
    """8-bit grayscale raster; ``pixels`` is an (H, W) uint8 array."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"GrayImage needs a 2D raster, got shape {px.shape}")
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class FloatField:
    """Real-valued (H, W) field, float64, all values finite."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError(f"FloatField needs a 2D array, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("FloatField values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def _luma(rgb: np.ndarray) -> np.ndarray:
    """BT.601 luma, rounded half-up to the nearest integer level."""
    y = _LUMA_R * rgb[..., 0] + _LUMA_G * rgb[..., 1] + _LUMA_B * rgb[..., 2]
    return np.clip(np.floor(y + 0.5), 0, 255).astype(np.uint8)


def load_png(path: str | Path) -> GrayImage:
    """Decode an 8/16-bit grayscale or color PNG into a GrayImage.

    Color inputs are converted with BT.601 luma weights; 16-bit samples
    are rescaled to 8 bits. Raises FileNotFoundError for a missing path,
    MalformedPngError for undecodable or non-PNG content, and
    UnsupportedDepthError for sample formats deeper than 16 bits.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such image file: {path}")
    try:
        with Image.open(path) as im:
            if im.format != "PNG":
                raise MalformedPngError(f"not a PNG file: {path}")
            im.load()
            mode = im.mode
            if mode in ("1", "L"):
                arr = np.asarray(im.convert("L"), dtype=np.uint8)
            elif mode == "LA":
                arr = np.asarray(im, dtype=np.uint8)[..., 0]
            elif mode in ("P", "RGB", "RGBA"):
                rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
                arr = _luma(rgb)
            elif mode in ("I", "I;16", "I;16B", "I;16L", "I;16N"):
                raw = np.asarray(im, dtype=np.float64)
                if raw.max(initial=0) > 65535:
                    raise UnsupportedDepthError(
                        f"sample depth beyond 16 bits in {path}"
                    )
                arr = np.clip(np.floor(raw * (255.0 / 65535.0) + 0.5), 0, 255)
                arr = arr.astype(np.uint8)
            else:
                raise UnsupportedDepthError(f"unsupported PNG mode {mode!r}: {path}")
    except UnidentifiedImageError as exc:
        raise MalformedPngError(f"cannot decode PNG: {path}") from exc
    except OSError as exc:
        raise MalformedPngError(f"truncated or corrupt PNG: {path}") from exc
    return GrayImage(arr)


def save_png(img: GrayImage, path: str | Path) -> None:
    """Write an 8-bit grayscale PNG; load_png(save_png(x)) is bit-exact."""
    Image.fromarray(img.pixels, mode="L").save(Path(path), format="PNG")


def normalize(img: GrayImage) -> FloatField:
    """Map 8-bit levels to [0,1] by dividing by 255."""
    return FloatField(img.pixels.astype(np.float64) / 255.0)


def quantize(field: FloatField) -> GrayImage:
    """Clamp to [0,1] and round to the nearest 8-bit level."""
    levels = np.floor(np.clip(field.values, 0.0, 1.0) * 255.0 + 0.5)
    return GrayImage(np.clip(levels, 0, 255).astype(np.uint8))


def resize_bilinear(field: FloatField, out_h: int, out_w: int) -> FloatField:
    """Resize with bilinear interpolation, half-pixel centers, edge clamp."""
    if out_h < 1 or out_w < 1:
        raise ValueError(f"target shape must be positive, got {(out_h, out_w)}")
    src = field.values
    in_h, in_w = src.shape
    if (out_h, out_w) == (in_h, in_w):
        return FloatField(src.copy())

    ys = np.clip((np.arange(out_h) + 0.5) * (in_h / out_h) - 0.5, 0.0, in_h - 1.0)
    xs = np.clip((np.arange(out_w) + 0.5) * (in_w / out_w) - 0.5, 0.0, in_w - 1.0)
    y0 = np.floor(ys).astype(np.intp)
    x0 = np.floor(xs).astype(np.intp)
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    wy = (ys - y0)[:, None]
    wx = (xs - x0)[None, :]

    # a + w*(b - a) keeps constants exact and stays inside [min, max].
    top = src[y0][:, x0]
    bot = src[y1][:, x0]
    left = top + wy * (bot - top)
    top = src[y0][:, x1]
    bot = src[y1][:, x1]
    right = top + wy * (bot - top)
    return FloatField(left + wx * (right - left))


def field_mean(field: FloatField) -> float:
    """Arithmetic mean over all pixels."""
    return float(np.mean(field.values))
