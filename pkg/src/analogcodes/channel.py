"""Encoding, AWGN and erasure channels, and the closed-form ML decoder.

Noise convention: ``sigma2`` is the total variance per received symbol in
both field modes.  Real mode draws w_i ~ N(0, sigma2); complex mode draws
circularly symmetric noise with variance sigma2/2 per real and imaginary
part, so E[conj(w_i) w_i] = sigma2 either way.  That single convention makes
the analytic distortion formula sigma2 * sum(1/s_i^2) exact in both modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .validation import (
    RANK_RTOL,
    RankDeficientError,
    check_complex_matrix,
    check_seed,
    check_vector,
)

__all__ = [
    "NoiseModel",
    "Reception",
    "encode",
    "awgn",
    "ml_decode",
    "erase",
    "erasure_decode",
    "analytic_mse",
]

REAL = "real"
COMPLEX = "complex"


@dataclass(frozen=True)
class NoiseModel:
    """AWGN description: field mode, total per-symbol variance, stream seed."""

    field: str
    sigma2: float
    seed: int = 0

    def __post_init__(self):
        if self.field not in (REAL, COMPLEX):
            raise ValueError(f"field must be {REAL!r} or {COMPLEX!r}, got {self.field!r}")
        if not (isinstance(self.sigma2, (int, float)) and math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise ValueError(f"sigma2 must be a positive finite real, got {self.sigma2!r}")
        check_seed(self.seed)

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        """Draw noise of the given shape from an already-positioned stream."""
        if self.field == REAL:
            return (math.sqrt(self.sigma2) * rng.standard_normal(shape)).astype(np.complex128)
        scale = math.sqrt(self.sigma2 / 2.0)
        return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@dataclass(frozen=True)
class Reception:
    """Channel output: received vector plus the set of erased positions.

    Erased positions hold NaN so accidental use is loud; decoders must go
    through ``erasure_decode``, which looks only at the survivors.
    """

    r: np.ndarray
    erased: tuple = ()

    def __post_init__(self):
        r = np.asarray(self.r, dtype=np.complex128)
        object.__setattr__(self, "r", r)
        if r.ndim != 1:
            raise ValueError(f"reception must be a vector, got shape {r.shape}")
        erased = tuple(int(i) for i in self.erased)
        if len(set(erased)) != len(erased):
            raise ValueError(f"erased positions must be distinct, got {erased}")
        for i in erased:
            if not 0 <= i < r.size:
                raise ValueError(f"erased position {i} out of range [0, {r.size})")
        object.__setattr__(self, "erased", tuple(sorted(erased)))

    @property
    def survivors(self) -> np.ndarray:
        mask = np.ones(self.r.size, dtype=bool)
        mask[list(self.erased)] = False
        return np.flatnonzero(mask)


def _as_generator(g) -> np.ndarray:
    if hasattr(g, "generator_"):
        return g.generator_
    return check_complex_matrix(g, "generator")


def encode(g, u) -> np.ndarray:
    """v = G^H u."""
    g = _as_generator(g)
    u = check_vector(u, g.shape[0], "source vector")
    return u @ g.conj()


def awgn(v, noise: NoiseModel, trial: int = 0) -> Reception:
    """Add seeded white Gaussian noise to a codeword.

    The stream is determined by (noise.seed, trial), so repeated calls with
    the same pair reproduce the same reception and distinct trials are
    statistically independent.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1:
        raise ValueError(f"codeword must be a vector, got shape {v.shape}")
    rng = np.random.default_rng(np.random.SeedSequence((check_seed(noise.seed), int(trial))))
    return Reception(r=v + noise.sample(rng, v.shape))


def ml_decode(g, r) -> np.ndarray:
    """Least-squares source estimate (G G^H)^{-1} G r, the ML solution on AWGN."""
    if isinstance(r, Reception):
        if r.erased:
            raise ValueError("reception has erasures; use erasure_decode")
        r = r.r
    if hasattr(g, "generator_"):
        b = g.pseudo_inverse_
        n = g.n_
    else:
        g = check_complex_matrix(g, "generator")
        b = linalg.left_pseudo_inverse(g)
        n = g.shape[1]
    r = check_vector(r, n, "reception")
    return b @ r


def erase(v, positions) -> Reception:
    """Erase the given codeword positions; erased entries become NaN."""
    v = np.asarray(v, dtype=np.complex128).copy()
    if v.ndim != 1:
        raise ValueError(f"codeword must be a vector, got shape {v.shape}")
    rec = Reception(r=v, erased=tuple(positions))
    v[list(rec.erased)] = complex(math.nan, math.nan)
    return Reception(r=v, erased=rec.erased)


def erasure_decode(g, rec: Reception) -> np.ndarray:
    """Least-squares estimate from the surviving symbols.

    Noiseless survivors give exact recovery whenever their k-row submatrix of
    G^H is full rank; a singular submatrix (possible for non-MDS codes) is
    an error.
    """
    g = _as_generator(g)
    k, n = g.shape
    if not isinstance(rec, Reception):
        rec = Reception(r=rec)
    if rec.r.size != n:
        raise ValueError(f"reception length {rec.r.size} does not match n={n}")
    keep = rec.survivors
    if keep.size < k:
        raise RankDeficientError(
            f"{keep.size} surviving symbols cannot determine {k} source symbols"
        )
    a = g[:, keep].conj().T
    s = linalg.singular_values(a)
    if s[0] <= RANK_RTOL * s[-1]:
        raise RankDeficientError(
            f"surviving positions {tuple(int(i) for i in keep)} form a singular system "
            f"(smallest singular value {s[0]:.3e})"
        )
    estimate, *_ = np.linalg.lstsq(a, rec.r[keep], rcond=None)
    return estimate


def analytic_mse(g, sigma2) -> float:
    """Exact expected squared decoding error sigma2 * sum(1/s_i^2).

    The ML error is u_hat - u = B w, independent of the source, and its
    expected squared norm is sigma2 * trace(B^H B), which in terms of the
    singular values of G is the sum above.  This is the total across all k
    source symbols; divide by k for the per-symbol value.
    """
    g = _as_generator(g)
    sigma2 = float(sigma2)
    if not (math.isfinite(sigma2) and sigma2 >= 0.0):
        raise ValueError(f"sigma2 must be a finite nonnegative real, got {sigma2!r}")
    s = linalg.singular_values(g)
    if g.shape[0] > g.shape[1] or s[0] <= RANK_RTOL * s[-1]:
        raise RankDeficientError(
            f"analytic distortion requires full row rank (smallest singular value {s[0]:.3e})"
        )
    return sigma2 * float(np.sum(1.0 / (s * s)))
