"""2D DFT analysis and radial band-stop frequency masks.

Conventions: the forward transform is unnormalized with kernel
exp(-i*2*pi*(u*x/H + v*y/W)); the inverse carries the 1/(H*W) factor.
Masks are built in centered layout (DC at (H//2, W//2)) and are always
conjugate-symmetric so that masked spectra of real images invert to
real images.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import FloatField

NATURAL = "natural"
CENTERED = "centered"

# Absolute bound on the imaginary residue idft2 may silently discard.
_IMAG_RESIDUE_TOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """Complex 2D frequency representation of an image.

    ``layout`` is "natural" (DC at index (0,0), the raw transform order)
    or "centered" (DC rolled to (H//2, W//2) for display and masking).
    """

    values: np.ndarray
    layout: str = NATURAL

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError(f"Spectrum needs a 2D array, got shape {v.shape}")
        if self.layout not in (NATURAL, CENTERED):
            raise ValueError(f"unknown layout {self.layout!r}")
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

    @property
    def center(self) -> tuple[int, int]:
        """Index of the DC bin in centered layout."""
        return self.values.shape[0] // 2, self.values.shape[1] // 2

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    @property
    def imag(self) -> np.ndarray:
        return self.values.imag


@dataclass(frozen=True)
class FreqMask:
    """Binary keep-mask over spectrum bins, in centered layout.

    keep[u, v] is True where the component passes, False where it is
    stopped. ``bands_stopped`` lists the annulus indices that were
    combined into this mask.
    """

    keep: np.ndarray
    bands_stopped: tuple[int, ...] = ()

    def __post_init__(self):
        k = np.asarray(self.keep, dtype=bool)
        if k.ndim != 2 or k.shape[0] < 1 or k.shape[1] < 1:
            raise ValueError(f"FreqMask needs a 2D keep array, got {k.shape}")
        object.__setattr__(self, "keep", k)
        object.__setattr__(self, "bands_stopped", tuple(self.bands_stopped))

    @property
    def height(self) -> int:
        return self.keep.shape[0]

    @property
    def width(self) -> int:
        return self.keep.shape[1]


@dataclass(frozen=True)
class FreqMaskConfig:
    """Shape and band parameters for frequency mask sampling."""

    height: int
    width: int
    n_bands: int = 7
    n_select: int = 2
    preserve: int = 10

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise ValueError("mask shape must be positive")
        if self.n_bands < 1:
            raise ValueError("n_bands must be >= 1")
        if not 0 <= self.n_select <= self.n_bands:
            raise ValueError(
                f"n_select must be in [0, n_bands], got {self.n_select}"
            )
        if self.preserve < 0:
            raise ValueError("preserve must be >= 0")


def dft2(field: FloatField) -> Spectrum:
    """Forward 2D DFT (unnormalized), natural layout."""
    return Spectrum(np.fft.fft2(field.values), NATURAL)


def idft2(spec: Spectrum) -> FloatField:
    """Inverse 2D DFT with 1/(H*W); returns the real part.

    Input must be in natural layout. The discarded imaginary residue is
    asserted small: spectra that reach this point are conjugate-symmetric
    by construction (real images, symmetric masks), so a large residue
    means the caller broke that contract.
    """
    if spec.layout != NATURAL:
        raise ValueError("idft2 expects natural layout; call inverse_shift first")
    h, w = spec.shape
    out = np.fft.ifft2(spec.values)
    # Scale the bound with the implied field magnitude so large fields
    # cannot mask a symmetry bug behind a fixed absolute tolerance.
    scale = max(1.0, float(np.abs(spec.values).max(initial=0.0)) / (h * w))
    residue = float(np.abs(out.imag).max())
    if residue > _IMAG_RESIDUE_TOL * scale:
        raise ValueError(
            f"imaginary residue {residue:.3e} exceeds tolerance; "
            "spectrum is not conjugate-symmetric"
        )
    return FloatField(out.real)


def amplitude(spec: Spectrum) -> FloatField:
    """Per-bin modulus sqrt(re^2 + im^2)."""
    return FloatField(np.abs(spec.values))


def phase(spec: Spectrum) -> FloatField:
    """Per-bin angle in (-pi, pi]; zero bins report phase 0."""
    # +0.0 flushes negative zeros so the branch cut lands on +pi.
    return FloatField(np.arctan2(spec.values.imag + 0.0, spec.values.real + 0.0))


def center_shift(spec: Spectrum) -> Spectrum:
    """Roll DC to (H//2, W//2) and toggle the layout flag."""
    h, w = spec.shape
    rolled = np.roll(spec.values, (h // 2, w // 2), axis=(0, 1))
    other = CENTERED if spec.layout == NATURAL else NATURAL
    return Spectrum(rolled, other)


def inverse_shift(spec: Spectrum) -> Spectrum:
    """Exact inverse of center_shift."""
    h, w = spec.shape
    rolled = np.roll(spec.values, (-(h // 2), -(w // 2)), axis=(0, 1))
    other = CENTERED if spec.layout == NATURAL else NATURAL
    return Spectrum(rolled, other)


def conjugate_flip(mask: np.ndarray) -> np.ndarray:
    """Map a centered-layout bin field through (u,v) -> (-u,-v).

    The negation is taken modulo the grid in natural coordinates, which
    is the symmetry a real image's spectrum obeys.
    """
    h, w = mask.shape
    nat = np.roll(mask, (-(h // 2), -(w // 2)), axis=(0, 1))
    neg = np.roll(nat[::-1, ::-1], (1, 1), axis=(0, 1))
    return np.roll(neg, (h // 2, w // 2), axis=(0, 1))


def is_conjugate_symmetric(mask: np.ndarray) -> bool:
    return bool(np.array_equal(mask, conjugate_flip(mask)))


def _radius_grid(h: int, w: int) -> tuple[np.ndarray, float]:
    cy, cx = h // 2, w // 2
    yy = np.arange(h, dtype=np.float64)[:, None] - cy
    xx = np.arange(w, dtype=np.float64)[None, :] - cx
    r = np.sqrt(yy * yy + xx * xx)
    r_max = float(np.hypot(cy, cx))
    return r, r_max


def _preserve_window(keep: np.ndarray, preserve: int) -> None:
    if preserve <= 0:
        return
    h, w = keep.shape
    cy, cx = h // 2, w // 2
    y0 = max(0, cy - preserve // 2)
    x0 = max(0, cx - preserve // 2)
    keep[y0 : min(h, y0 + preserve), x0 : min(w, x0 + preserve)] = True


def make_bandstop_filter(
    band_index: int, n_bands: int, h: int, w: int, preserve: int
) -> FreqMask:
    """Stop one radial annulus; always keep the central preserve window.

    Band k stops bins with f1 < r <= f2 where f1 = k*r_max/n_bands and
    f2 = (k+1)*r_max/n_bands, with r measured from the centered DC bin
    and r_max the center-to-corner distance. The half-open intervals
    partition the radial axis, so distinct bands stop disjoint bins.
    """
    if n_bands < 1:
        raise ValueError("n_bands must be >= 1")
    if not 0 <= band_index < n_bands:
        raise ValueError(f"band_index {band_index} out of range [0, {n_bands})")
    if preserve < 0:
        raise ValueError("preserve must be >= 0")
    r, r_max = _radius_grid(h, w)
    f1 = band_index * r_max / n_bands
    f2 = (band_index + 1) * r_max / n_bands
    keep = ~((r > f1) & (r <= f2))
    _preserve_window(keep, preserve)
    # Keeping the conjugate image of every kept bin makes the mask exactly
    # symmetric; the annuli already are, the even-sized window is not.
    keep |= conjugate_flip(keep)
    return FreqMask(keep, (band_index,))


def sample_freq_mask(rng: np.random.Generator, cfg: FreqMaskConfig) -> FreqMask:
    """Draw n_select distinct bands and stop the union of their annuli."""
    if cfg.n_select == 0:
        return FreqMask(np.ones((cfg.height, cfg.width), dtype=bool), ())
    picks = rng.choice(cfg.n_bands, size=cfg.n_select, replace=False)
    keep = np.ones((cfg.height, cfg.width), dtype=bool)
    for band in picks:
        keep &= make_bandstop_filter(
            int(band), cfg.n_bands, cfg.height, cfg.width, cfg.preserve
        ).keep
    return FreqMask(keep, tuple(sorted(int(b) for b in picks)))


def apply_freq_mask(spec: Spectrum, mask: FreqMask) -> Spectrum:
    """Zero stopped bins; kept bins pass unchanged. Layout is preserved."""
    if spec.shape != mask.keep.shape:
        raise ValueError(
            f"spectrum shape {spec.shape} != mask shape {mask.keep.shape}"
        )
    if not is_conjugate_symmetric(mask.keep):
        raise ValueError("frequency mask is not conjugate-symmetric")
    keep = mask.keep
    if spec.layout == NATURAL:
        h, w = spec.shape
        keep = np.roll(keep, (-(h // 2), -(w // 2)), axis=(0, 1))
    return Spectrum(np.where(keep, spec.values, 0.0 + 0.0j), spec.layout)
