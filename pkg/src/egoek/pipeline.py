"""End-to-end driver tying generation, decomposition, and fluctuation analysis.

Members are pure functions of (spec, member index), so the thread count
changes wall time but never results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import decomposition as dc
from . import fluctuations as fl
from . import periodogram as pg
from .archive import MemberRecord, SpectrumArchive
from .ensemble import EnsembleSpec, build_member, member_seed
from .spectra import Spectrum, eigenvalues, moments


def _member_record(spec: EnsembleSpec, member: int) -> MemberRecord:
    ham = build_member(spec, member)
    return MemberRecord(
        member=member,
        seed=member_seed(spec.master_seed, member),
        eigenvalues=eigenvalues(ham).eigenvalues,
    )


def generate_archive(spec: EnsembleSpec, threads: int = 1) -> SpectrumArchive:
    """Build and diagonalize every member, in member order regardless of threads."""
    if threads < 1:
        raise ValueError("threads must be at least 1")
    indices = range(spec.members)
    if threads == 1:
        records = [_member_record(spec, i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda i: _member_record(spec, i), indices))
    return SpectrumArchive(spec=spec, records=tuple(records))


def archive_spectra(archive: SpectrumArchive) -> list[Spectrum]:
    return [
        Spectrum(eigenvalues=r.eigenvalues, spec=archive.spec, member=r.member)
        for r in archive.records
    ]


@dataclass(frozen=True)
class MemberAnalysis:
    member: int
    q: float
    decomposition: dc.MemberDecomposition


def decompose_archive(
    archive: SpectrumArchive, orders: tuple[int, ...], threads: int = 1
) -> list[MemberAnalysis]:
    """Per-member smooth fits and level-motion series for every order."""

    def one(spectrum: Spectrum) -> MemberAnalysis:
        q = moments(spectrum).q_est
        return MemberAnalysis(
            member=spectrum.member,
            q=q,
            decomposition=dc.decompose_member(spectrum, q, orders),
        )

    spectra_list = archive_spectra(archive)
    if threads == 1:
        return [one(s) for s in spectra_list]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, spectra_list))


def trimmed_motion(series: dc.LevelMotionSeries, trim: float) -> tuple[np.ndarray, np.ndarray]:
    """Central window of a level-motion series (trim/2 of the levels per end)."""
    n = len(series.delta)
    cut = int(math.floor(0.5 * trim * n))
    return series.e_hat[cut : n - cut], series.delta[cut : n - cut]


def periodograms_by_order(
    analyses: list[MemberAnalysis],
    orders: tuple[int, ...],
    trim: float = 0.10,
    oversample: int = 4,
    convention: str = "fap",
) -> dict[int, list[pg.PeriodogramResult]]:
    """Per-order Lomb-Scargle results over the central window of each member."""
    out: dict[int, list[pg.PeriodogramResult]] = {o: [] for o in orders}
    for analysis in analyses:
        for order in orders:
            e_hat, delta = trimmed_motion(analysis.decomposition.series[order], trim)
            out[order].append(
                pg.lomb_scargle(e_hat, delta, oversample=oversample, convention=convention)
            )
    return out


def unfolded_ensemble(
    archive: SpectrumArchive,
    order: int | None = None,
    trim: float = 0.10,
) -> list[fl.UnfoldedSpectrum]:
    """Unfold every member at the policy order (or an explicit one)."""
    spec = archive.spec
    if order is None:
        order = fl.unfolding_order(spec.statistics, spec.k)
    unfolded = []
    for spectrum in archive_spectra(archive):
        q = moments(spectrum).q_est
        model = dc.fit_smooth_model(spectrum, q, order)
        unfolded.append(fl.unfold(spectrum, model, trim=trim))
    return unfolded


@dataclass(frozen=True)
class MomentSummary:
    statistics: str
    m: int
    n_sites: int
    k: int
    members: int
    gamma1_mean: float
    gamma1_se: float
    gamma2_mean: float
    gamma2_se: float
    q_mean: float
    variance_mean: float


def moment_summary(archive: SpectrumArchive) -> MomentSummary:
    """Ensemble means and standard errors of the spectral shape parameters."""
    spec = archive.spec
    stats = [moments(s) for s in archive_spectra(archive)]
    g1 = np.array([s.skewness for s in stats])
    g2 = np.array([s.excess for s in stats])
    root_n = math.sqrt(len(stats))
    return MomentSummary(
        statistics=spec.statistics.value,
        m=spec.m,
        n_sites=spec.n_sites,
        k=spec.k,
        members=spec.members,
        gamma1_mean=float(g1.mean()),
        gamma1_se=float(g1.std(ddof=1) / root_n) if len(stats) > 1 else 0.0,
        gamma2_mean=float(g2.mean()),
        gamma2_se=float(g2.std(ddof=1) / root_n) if len(stats) > 1 else 0.0,
        q_mean=float(np.mean([s.q_est for s in stats])),
        variance_mean=float(np.mean([s.variance for s in stats])),
    )
