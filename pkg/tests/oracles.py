"""Brute-force second-quantization oracles built from explicit operator matrices.

Independent of the package's amplitude bookkeeping: fermion operators are
dense Jordan-Wigner matrices on the full 2^N space, boson operators live on
the total-occupation-truncated product space, and k-body operators are formed
by literal matrix products.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import sparse

from egoek.fock import Statistics, enumerate_basis


def fermion_operators(n_sites: int):
    """Annihilators and creators on the 2^N space; sign counts occupied lower bits."""
    dim = 1 << n_sites
    ann = []
    for v in range(n_sites):
        rows, cols, vals = [], [], []
        bit = 1 << v
        for state in range(dim):
            if state & bit:
                sign = (-1) ** bin(state & (bit - 1)).count("1")
                rows.append(state ^ bit)
                cols.append(state)
                vals.append(float(sign))
        ann.append(sparse.csr_matrix((vals, (rows, cols)), shape=(dim, dim)))
    cre = [a.T.tocsr() for a in ann]
    return cre, ann


def fermion_pair_operator(cre, ann, create_labels, annihilate_labels):
    """Pair-transfer operator: annihilate in decreasing label order, then create
    in increasing order (first-applied factor rightmost in the product)."""
    dim = cre[0].shape[0]
    op = sparse.identity(dim, format="csr")
    for v in sorted(annihilate_labels, reverse=True):
        op = ann[v] @ op
    for w in sorted(create_labels):
        op = cre[w] @ op
    return op


def fermion_pair_operator_literal(cre, ann, create_labels, annihilate_labels):
    """Same operator written as the literal normal-ordered product
    f+_{w1}..f+_{wk} f_{vk}..f_{v1}; equal to the sequential form because
    reversing each k-block contributes (-1)^(k(k-1)/2) twice."""
    dim = cre[0].shape[0]
    op = sparse.identity(dim, format="csr")
    for v in sorted(annihilate_labels):
        op = ann[v] @ op
    for w in sorted(create_labels, reverse=True):
        op = cre[w] @ op
    return op


def boson_basis(n_sites: int, max_total: int):
    """Occupation tuples with total <= max_total."""
    states: list[tuple[int, ...]] = []

    def rec(prefix, remaining):
        if len(prefix) == n_sites:
            states.append(tuple(prefix))
            return
        for n in range(remaining + 1):
            rec(prefix + [n], remaining - n)

    rec([], max_total)
    return states, {s: i for i, s in enumerate(states)}


def boson_operators(n_sites: int, max_total: int):
    states, index = boson_basis(n_sites, max_total)
    dim = len(states)
    ann, cre = [], []
    for v in range(n_sites):
        rows, cols, vals = [], [], []
        for i, s in enumerate(states):
            if s[v] > 0:
                t = list(s)
                t[v] -= 1
                rows.append(index[tuple(t)])
                cols.append(i)
                vals.append(math.sqrt(s[v]))
        a = sparse.csr_matrix((vals, (rows, cols)), shape=(dim, dim))
        ann.append(a)
        cre.append(a.T.tocsr())
    return states, index, cre, ann


def _multiset_norm(labels) -> float:
    mult: dict[int, int] = {}
    for v in labels:
        mult[v] = mult.get(v, 0) + 1
    out = 1.0
    for nu in mult.values():
        out *= math.factorial(nu)
    return out


def boson_pair_operator(cre, ann, create_labels, annihilate_labels):
    """Normalized pair-transfer operator; boson factors commute."""
    dim = cre[0].shape[0]
    op = sparse.identity(dim, format="csr")
    for v in annihilate_labels:
        op = ann[v] @ op
    for w in create_labels:
        op = cre[w] @ op
    return op / math.sqrt(_multiset_norm(create_labels) * _multiset_norm(annihilate_labels))


def sector_indices(n_sites: int, m: int, statistics: Statistics, index=None):
    """Full-space indices of the m-particle sector, in enumerate_basis order."""
    basis = enumerate_basis(n_sites, m, statistics)
    if statistics is Statistics.FERMION:
        return [cfg.bitmask for cfg in basis]
    return [index[cfg.occupations] for cfg in basis]


def identity_embedding_oracle(n_sites: int, k: int, statistics: Statistics, max_total: int = 6):
    """Full-space matrix of the summed diagonal pair-transfer operators.

    Restricted to an m-particle sector this must equal C(m, k) times the
    identity for every m.
    """
    from egoek.fock import enumerate_kconfigs

    kconfigs = enumerate_kconfigs(n_sites, k, statistics)
    if statistics is Statistics.FERMION:
        cre, ann = fermion_operators(n_sites)
        dim = cre[0].shape[0]
        total = sparse.csr_matrix((dim, dim))
        for kc in kconfigs:
            down = sparse.identity(dim, format="csr")
            for v in sorted(kc.indices, reverse=True):
                down = ann[v] @ down
            total = total + down.T @ down
        return total, None
    states, index, cre, ann = boson_operators(n_sites, max_total)
    dim = cre[0].shape[0]
    total = sparse.csr_matrix((dim, dim))
    for kc in kconfigs:
        down = sparse.identity(dim, format="csr")
        for v in kc.indices:
            down = ann[v] @ down
        down = down / math.sqrt(_multiset_norm(kc.indices))
        total = total + down.T @ down
    return total, index


def embed_oracle(v_matrix: np.ndarray, n_sites: int, m: int, k: int, statistics: Statistics):
    """m-sector matrix of sum_{alpha,gamma} V[alpha,gamma] A+_alpha A_gamma."""
    from egoek.fock import enumerate_kconfigs

    kconfigs = enumerate_kconfigs(n_sites, k, statistics)
    if statistics is Statistics.FERMION:
        cre, ann = fermion_operators(n_sites)
        index = None
        pair = lambda a, g: fermion_pair_operator(cre, ann, a.indices, g.indices)
    else:
        _states, index, cre, ann = boson_operators(n_sites, max_total=m)
        pair = lambda a, g: boson_pair_operator(cre, ann, a.indices, g.indices)
    dim = cre[0].shape[0]
    total = sparse.csr_matrix((dim, dim))
    for ia, alpha in enumerate(kconfigs):
        for ig, gamma in enumerate(kconfigs):
            if v_matrix[ia, ig] != 0.0:
                total = total + v_matrix[ia, ig] * pair(alpha, gamma)
    sector = sector_indices(n_sites, m, statistics, index)
    return np.asarray(total.todense())[np.ix_(sector, sector)]
