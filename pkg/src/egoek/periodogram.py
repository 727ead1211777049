"""Normalized Lomb-Scargle periodogram of level-motion series.

Quantifies whether a deviation series still carries a coherent long-wavelength
component (a residual smooth mode) or only noise-like fluctuations, through
the peak power and a percentage significance parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

DEFAULT_OVERSAMPLE = 4
DEFAULT_HIFAC = 1.0
MIN_SAMPLES = 16
_CHUNK = 256

#: Supported conventions for the percentage significance of the peak:
#: ``fap``   -- 100 * (1 - false-alarm probability), FAP = 1 - (1 - e^-P)^M
#:              with M the number of samples;
#: ``power_fraction`` -- 100 * 2 P_max / (M - 1), the fraction of the series
#:              variance captured by the best-fit sinusoid at the peak.
LAMBDA_CONVENTIONS = ("fap", "power_fraction")


class DegenerateSeriesError(ValueError):
    """Series has zero variance; the normalized periodogram is undefined."""


@dataclass(frozen=True)
class PeriodogramResult:
    frequency: np.ndarray
    power: np.ndarray
    peak_frequency: float
    peak_power: float
    significance: float
    n_samples: int
    convention: str

    @property
    def f_p(self) -> float:
        return self.peak_frequency


def lomb_scargle(
    abscissa: np.ndarray,
    values: np.ndarray,
    oversample: int = DEFAULT_OVERSAMPLE,
    hifac: float = DEFAULT_HIFAC,
    convention: str = "fap",
) -> PeriodogramResult:
    """Classical normalized periodogram of an unevenly sampled series.

    The per-frequency phase shift tau satisfies
    tan(2 w tau) = sum(sin 2 w t) / sum(cos 2 w t), and powers are normalized
    by the sample variance so that white noise gives unit-mean exponential
    powers.  The frequency grid runs from 1/(T * oversample) to
    hifac * n / (2 T) in steps of 1/(T * oversample).

    Parameters
    ----------
    abscissa, values : ndarray
        Sampling positions (normalized energies) and series values.  The mean
        of ``values`` is subtracted internally.
    convention : str
        Which significance convention to report; see LAMBDA_CONVENTIONS.
    """
    t = np.asarray(abscissa, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise ValueError("abscissa and values must be equal-length 1-d arrays")
    n = len(t)
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    if convention not in LAMBDA_CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    y = y - y.mean()
    variance = float(np.sum(y**2)) / (n - 1)
    if variance == 0.0:
        raise DegenerateSeriesError("series is constant")

    span = float(t.max() - t.min())
    if span <= 0.0:
        raise ValueError("abscissa has zero span")
    df = 1.0 / (span * oversample)
    n_freq = int(math.floor(0.5 * oversample * hifac * n))
    freqs = df * np.arange(1, n_freq + 1)

    power = np.empty(n_freq)
    for lo in range(0, n_freq, _CHUNK):
        omega = 2.0 * math.pi * freqs[lo : lo + _CHUNK, None]
        two_wt = 2.0 * omega * t[None, :]
        tau_phase = 0.5 * np.arctan2(np.sum(np.sin(two_wt), axis=1), np.sum(np.cos(two_wt), axis=1))
        arg = omega * t[None, :] - tau_phase[:, None]
        cos_arg = np.cos(arg)
        sin_arg = np.sin(arg)
        c_proj = cos_arg @ y
        s_proj = sin_arg @ y
        c_norm = np.sum(cos_arg**2, axis=1)
        s_norm = np.sum(sin_arg**2, axis=1)
        power[lo : lo + _CHUNK] = 0.5 / variance * (
            c_proj**2 / c_norm + s_proj**2 / s_norm
        )

    peak_index = int(np.argmax(power))
    peak_power = float(power[peak_index])
    return PeriodogramResult(
        frequency=freqs,
        power=power,
        peak_frequency=float(freqs[peak_index]),
        peak_power=peak_power,
        significance=significance(peak_power, n, convention),
        n_samples=n,
        convention=convention,
    )


def significance(peak_power: float, n_samples: int, convention: str = "fap") -> float:
    """Percentage significance of a peak power under the chosen convention."""
    if convention == "fap":
        # (1 - e^-P)^M through logs to survive large P without overflow to 1-.
        log_term = math.log1p(-math.exp(-min(peak_power, 700.0)))
        return 100.0 * math.exp(n_samples * log_term)
    if convention == "power_fraction":
        return min(100.0, 100.0 * 2.0 * peak_power / (n_samples - 1))
    raise ValueError(f"unknown convention {convention!r}")


@dataclass(frozen=True)
class SeparationRow:
    k: int
    order: int
    mean_significance: float
    mean_peak_frequency: float


def separation_report(
    grouped: Mapping[tuple[int, int], Sequence[PeriodogramResult]]
) -> list[SeparationRow]:
    """Ensemble means of (significance, peak frequency) per (k, order) group."""
    rows = []
    for (k, order), results in sorted(grouped.items()):
        if not results:
            continue
        rows.append(
            SeparationRow(
                k=k,
                order=order,
                mean_significance=float(np.mean([r.significance for r in results])),
                mean_peak_frequency=float(np.mean([r.peak_frequency for r in results])),
            )
        )
    return rows
