"""Sampling of k-particle GOE matrices and their embedding into m-particle space.

Per-member randomness is derived from a single master seed through a SplitMix64
mix, so members are independent yet bit-reproducible regardless of processing
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .fock import (
    Statistics,
    _fermion_attach,
    dimension,
    enumerate_basis,
    enumerate_kconfigs,
    kbme_count,
)

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(value: int) -> int:
    """One output step of the SplitMix64 mixer (Steele-Lea-Flood finalizer)."""
    z = (value + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def member_seed(master_seed: int, member: int) -> int:
    """64-bit seed for one ensemble member: SplitMix64 of master + member stride."""
    return splitmix64((master_seed + member * _GOLDEN) & _MASK64)


@dataclass(frozen=True)
class EnsembleSpec:
    """Parameters of one embedded ensemble: statistics, sizes, and seeding."""

    statistics: Statistics
    m: int
    n_sites: int
    k: int
    members: int = 50
    master_seed: int = 0
    nu2: float = 1.0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if not 1 <= self.k <= self.m:
            raise ValueError("require 1 <= k <= m")
        if self.statistics is Statistics.FERMION and self.m > self.n_sites:
            raise ValueError("fermions require m <= N")
        if self.n_sites < 1:
            raise ValueError("need at least one single-particle state")
        if self.members < 1:
            raise ValueError("members must be at least 1")
        if not self.nu2 > 0:
            raise ValueError("nu2 must be positive")

    @property
    def dimension(self) -> int:
        return dimension(self.n_sites, self.m, self.statistics)

    @property
    def k_dimension(self) -> int:
        return dimension(self.n_sites, self.k, self.statistics)

    @property
    def kbme_count(self) -> int:
        return kbme_count(self.n_sites, self.k, self.statistics)


@dataclass(frozen=True)
class KBodyMatrix:
    """Dense symmetric k-particle matrix of one member, with its seed."""

    matrix: np.ndarray
    member: int
    seed: int

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class EmbeddedHamiltonian:
    """Dense symmetric m-particle matrix with full provenance."""

    matrix: np.ndarray
    spec: EnsembleSpec
    member: int

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def sample_kbody(spec: EnsembleSpec, member: int) -> KBodyMatrix:
    """Draw the symmetric k-particle matrix of one member.

    Entries are independent zero-mean Gaussians with variance ``nu2`` off the
    diagonal and ``2 * nu2`` on it.  The free entries are drawn in row-major
    upper-triangle order from a PCG64 generator seeded with
    ``member_seed(master_seed, member)``, making the matrix a pure function of
    (spec, member).
    """
    if not 0 <= member < spec.members:
        raise ValueError(f"member {member} outside 0..{spec.members - 1}")
    seed = member_seed(spec.master_seed, member)
    rng = np.random.default_rng(seed)
    dk = spec.k_dimension
    nu = math.sqrt(spec.nu2)
    draws = rng.standard_normal(dk * (dk + 1) // 2)
    mat = np.zeros((dk, dk))
    iu = np.triu_indices(dk)
    mat[iu] = draws
    mat = mat + np.triu(mat, 1).T
    diag = np.arange(dk)
    mat[diag, diag] *= math.sqrt(2.0)
    mat *= nu
    return KBodyMatrix(matrix=mat, member=member, seed=seed)


@dataclass(frozen=True)
class EmbeddingPlan:
    """Precomputed transition structure shared by all members of one system.

    For each (m-k)-particle intermediate state the plan stores the k-configs
    that can be attached to it, the resulting m-state indices, and the
    attachment amplitudes; the embedded matrix is then a sum of small
    congruence updates, one per intermediate state.
    """

    statistics: Statistics
    m: int
    n_sites: int
    k: int
    dimension: int
    groups: tuple[tuple[np.ndarray, np.ndarray, np.ndarray], ...] = field(repr=False)


@lru_cache(maxsize=32)
def build_embedding_plan(
    statistics: Statistics, m: int, n_sites: int, k: int
) -> EmbeddingPlan:
    basis = enumerate_basis(n_sites, m, statistics)
    index = {cfg.occupations: i for i, cfg in enumerate(basis)}
    kconfigs = enumerate_kconfigs(n_sites, k, statistics)
    intermediates = enumerate_basis(n_sites, m - k, statistics)
    fermionic = statistics is Statistics.FERMION

    groups = []
    for inter in intermediates:
        a_idx, g_idx, weights = [], [], []
        for g, kcfg in enumerate(kconfigs):
            if fermionic:
                res = _fermion_attach(inter.bitmask, kcfg.indices)
                if res is None:
                    continue
                sign, mask = res
                occ = tuple((mask >> i) & 1 for i in range(n_sites))
                a_idx.append(index[occ])
                g_idx.append(g)
                weights.append(float(sign))
            else:
                occ = list(inter.occupations)
                norm_sq = 1
                for v, nu in kcfg.multiplicities().items():
                    norm_sq *= math.comb(occ[v] + nu, nu)
                    occ[v] += nu
                a_idx.append(index[tuple(occ)])
                g_idx.append(g)
                weights.append(math.sqrt(norm_sq))
        if a_idx:
            groups.append(
                (
                    np.asarray(a_idx, dtype=np.intp),
                    np.asarray(g_idx, dtype=np.intp),
                    np.asarray(weights),
                )
            )
    return EmbeddingPlan(
        statistics=statistics,
        m=m,
        n_sites=n_sites,
        k=k,
        dimension=len(basis),
        groups=tuple(groups),
    )


def embed(kmat: KBodyMatrix, spec: EnsembleSpec) -> EmbeddedHamiltonian:
    """Propagate a k-particle matrix into the m-particle space.

    Implements H[B, A] = sum over (alpha, gamma) of V[alpha, gamma] times the
    pair-transfer amplitude <B|A+(alpha) A(gamma)|A>.  The congruence-update
    form guarantees an exactly symmetric result, and for k = m the map is the
    identity on matrices.
    """
    dk = spec.k_dimension
    if kmat.matrix.shape != (dk, dk):
        raise ValueError(
            f"k-body matrix dimension {kmat.matrix.shape[0]} does not match d(N,k)={dk}"
        )
    plan = build_embedding_plan(spec.statistics, spec.m, spec.n_sites, spec.k)
    ham = np.zeros((plan.dimension, plan.dimension))
    v = kmat.matrix
    for a_idx, g_idx, w in plan.groups:
        block = v[np.ix_(g_idx, g_idx)] * w[:, None] * w[None, :]
        ham[np.ix_(a_idx, a_idx)] += block
    return EmbeddedHamiltonian(matrix=ham, spec=spec, member=kmat.member)


def build_member(spec: EnsembleSpec, member: int) -> EmbeddedHamiltonian:
    """Sample one member's k-particle matrix and embed it."""
    return embed(sample_kbody(spec, member), spec)


def spectral_variance_fermion(m: int, n_sites: int, k: int, nu2: float = 1.0) -> float:
    """Ensemble-averaged eigenvalue variance of a fermionic embedded member."""
    return math.comb(m, k) * (math.comb(n_sites - m + k, k) + 1) * nu2


def spectral_variance_boson(m: int, n_sites: int, k: int, nu2: float = 1.0) -> float:
    """Ensemble-averaged eigenvalue variance of a bosonic embedded member."""
    return math.comb(m, k) * math.comb(n_sites + m - 1, k) * nu2


def spectral_variance(spec: EnsembleSpec) -> float:
    if spec.statistics is Statistics.FERMION:
        return spectral_variance_fermion(spec.m, spec.n_sites, spec.k, spec.nu2)
    return spectral_variance_boson(spec.m, spec.n_sites, spec.k, spec.nu2)
