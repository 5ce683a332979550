"""Spatial mean-fill patch masking and dual-mask composition.

The dual-masked image keeps the frequency-filtered reconstruction
outside the spatially masked patches and the whole-image mean inside
them, so masking reads as added noise rather than black holes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import FloatField, field_mean
from .spectral import FreqMask, apply_freq_mask, dft2, idft2


@dataclass(frozen=True)
class SpatialMask:
    """Patch-grid mask: masked[i, j] is True where patch (i, j) is masked."""

    masked: np.ndarray
    patch: int

    def __post_init__(self):
        m = np.asarray(self.masked, dtype=bool)
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
            raise ValueError(f"SpatialMask needs a 2D grid, got {m.shape}")
        if self.patch < 1:
            raise ValueError("patch size must be >= 1")
        object.__setattr__(self, "masked", m)

    @property
    def grid_h(self) -> int:
        return self.masked.shape[0]

    @property
    def grid_w(self) -> int:
        return self.masked.shape[1]

    @property
    def masked_count(self) -> int:
        return int(self.masked.sum())

    def pixel_mask(self) -> np.ndarray:
        """Expand the patch grid to a per-pixel boolean mask."""
        return np.kron(self.masked, np.ones((self.patch, self.patch), dtype=bool))


@dataclass(frozen=True)
class DualMaskRecord:
    """One dual-masking draw: the two masks plus the mean fill value."""

    spatial: SpatialMask
    freq: FreqMask
    fill_value: float


def sample_spatial_mask(
    rng: np.random.Generator, grid_h: int, grid_w: int, patch: int, ratio: float
) -> SpatialMask:
    """Mask exactly round(ratio * n_patches) patches, uniformly chosen.

    The count rounds half away from zero, so the masked-loss denominator
    is the same for every draw at a given ratio.
    """
    if not 0.0 <= ratio <= 1.0:
        raise ValueError(f"mask ratio must be in [0,1], got {ratio}")
    n = grid_h * grid_w
    k = int(math.floor(ratio * n + 0.5))
    masked = np.zeros(n, dtype=bool)
    if k > 0:
        masked[rng.choice(n, size=k, replace=False)] = True
    return SpatialMask(masked.reshape(grid_h, grid_w), patch)


def _check_geometry(field: FloatField, mask: SpatialMask) -> None:
    if (mask.grid_h * mask.patch, mask.grid_w * mask.patch) != field.shape:
        raise ValueError(
            f"mask geometry {mask.grid_h}x{mask.grid_w} patches of "
            f"{mask.patch}px does not tile field shape {field.shape}"
        )


def apply_spatial_mean_mask(field: FloatField, mask: SpatialMask) -> FloatField:
    """Replace pixels in masked patches with the whole-image mean."""
    _check_geometry(field, mask)
    out = field.values.copy()
    out[mask.pixel_mask()] = field_mean(field)
    return FloatField(out)


def dual_mask(
    field: FloatField, smask: SpatialMask, fmask: FreqMask
) -> tuple[FloatField, DualMaskRecord]:
    """Compose frequency band-stop filtering with spatial mean masking.

    Pixels outside masked patches come from the inverse transform of the
    band-stopped spectrum; pixels inside are the original image mean
    (stored bit-exactly, not recomputed through the transform).
    """
    _check_geometry(field, smask)
    filtered = idft2(apply_freq_mask(dft2(field), fmask))
    fill = field_mean(field)
    out = filtered.values.copy()
    out[smask.pixel_mask()] = fill
    return FloatField(out), DualMaskRecord(smask, fmask, fill)
