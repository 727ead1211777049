"""Diagonalization of embedded Hamiltonians and spectral moment estimates."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .ensemble import EmbeddedHamiltonian, EnsembleSpec

Q_CAP = 1.0 - 1e-6


class DegenerateSpectrumError(ValueError):
    """Spectrum has zero width; moments are undefined."""


@dataclass(frozen=True)
class Spectrum:
    """Sorted eigenvalues of one ensemble member."""

    eigenvalues: np.ndarray
    spec: EnsembleSpec | None = None
    member: int | None = None

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class SpectralMoments:
    centroid: float
    variance: float
    skewness: float
    excess: float
    q_est: float


def eigenvalues(ham: EmbeddedHamiltonian | np.ndarray) -> Spectrum:
    """Full real spectrum of a symmetric matrix, ascending.

    Any dense symmetric eigensolver is acceptable provided eigenvalue sums
    reproduce the trace to relative 1e-10; LAPACK's divide-and-conquer driver
    comfortably satisfies that.
    """
    if isinstance(ham, EmbeddedHamiltonian):
        matrix, spec, member = ham.matrix, ham.spec, ham.member
    else:
        matrix, spec, member = np.asarray(ham, dtype=float), None, None
    if not np.all(np.isfinite(matrix)):
        raise ValueError("matrix has non-finite entries")
    vals = np.linalg.eigvalsh(matrix)
    return Spectrum(eigenvalues=vals, spec=spec, member=member)


def moments(spectrum: Spectrum) -> SpectralMoments:
    """Centroid, variance, skewness, excess, and the implied shape parameter q.

    Population normalization (divide by d) throughout; ``q_est`` is
    1 + excess clipped to [0, 1 - 1e-6].
    """
    e = spectrum.eigenvalues
    if len(e) < 4:
        raise ValueError("need at least 4 levels for spectral moments")
    centroid = float(np.mean(e))
    centered = e - centroid
    variance = float(np.mean(centered**2))
    if variance == 0.0:
        raise DegenerateSpectrumError("spectrum has zero variance")
    sigma = np.sqrt(variance)
    skewness = float(np.mean(centered**3) / sigma**3)
    excess = float(np.mean(centered**4) / variance**2 - 3.0)
    q_est = float(np.clip(1.0 + excess, 0.0, Q_CAP))
    return SpectralMoments(
        centroid=centroid,
        variance=variance,
        skewness=skewness,
        excess=excess,
        q_est=q_est,
    )


def standardize(spectrum: Spectrum) -> Spectrum:
    """Shift to zero centroid and scale to unit variance."""
    e = spectrum.eigenvalues
    centroid = float(np.mean(e))
    variance = float(np.mean((e - centroid) ** 2))
    if variance == 0.0:
        raise DegenerateSpectrumError("spectrum has zero variance")
    scaled = (e - centroid) / np.sqrt(variance)
    return replace(spectrum, eigenvalues=scaled)
