"""Self-describing binary archive of ensemble spectra.

Layout: 8 magic bytes, a little-endian uint32 header length, the header as
UTF-8 JSON, then one fixed-size record per member (uint32 member index,
uint64 member seed, ``dimension`` little-endian float64 eigenvalues in
ascending order).  Writing the same data twice produces identical bytes.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ensemble import EnsembleSpec
from .fock import Statistics

MAGIC = b"EGOEARC1"
FORMAT_VERSION = "1"


class ArchiveFormatError(RuntimeError):
    """File is not a readable spectrum archive."""


@dataclass(frozen=True)
class MemberRecord:
    member: int
    seed: int
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class SpectrumArchive:
    spec: EnsembleSpec
    records: tuple[MemberRecord, ...]
    format_version: str = FORMAT_VERSION

    @property
    def dimension(self) -> int:
        return self.spec.dimension


def _header_dict(spec: EnsembleSpec) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "statistics": spec.statistics.value,
        "m": spec.m,
        "N": spec.n_sites,
        "k": spec.k,
        "nu2": spec.nu2,
        "master_seed": spec.master_seed,
        "members": spec.members,
        "dimension": spec.dimension,
        # Reruns must be byte-identical, so no wall-clock value is recorded.
        "created_at": None,
    }


def write_archive(path: str | Path, archive: SpectrumArchive) -> None:
    spec = archive.spec
    if len(archive.records) != spec.members:
        raise ValueError("record count does not match member count")
    header = json.dumps(_header_dict(spec), sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        for record in archive.records:
            eig = np.ascontiguousarray(record.eigenvalues, dtype="<f8")
            if eig.shape != (spec.dimension,):
                raise ValueError(
                    f"member {record.member}: expected {spec.dimension} eigenvalues"
                )
            fh.write(struct.pack("<IQ", record.member, record.seed))
            fh.write(eig.tobytes())


def read_archive(path: str | Path) -> SpectrumArchive:
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ArchiveFormatError(f"{path}: bad magic {magic!r}")
        (header_len,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(header_len).decode("utf-8"))
        spec = EnsembleSpec(
            statistics=Statistics(header["statistics"]),
            m=header["m"],
            n_sites=header["N"],
            k=header["k"],
            members=header["members"],
            master_seed=header["master_seed"],
            nu2=header["nu2"],
        )
        dimension = header["dimension"]
        if dimension != spec.dimension:
            raise ArchiveFormatError(
                f"{path}: header dimension {dimension} inconsistent with spec"
            )
        records = []
        record_head = struct.Struct("<IQ")
        for _ in range(spec.members):
            head = fh.read(record_head.size)
            if len(head) != record_head.size:
                raise ArchiveFormatError(f"{path}: truncated record header")
            member, seed = record_head.unpack(head)
            payload = fh.read(8 * dimension)
            if len(payload) != 8 * dimension:
                raise ArchiveFormatError(f"{path}: truncated eigenvalue block")
            eig = np.frombuffer(payload, dtype="<f8").copy()
            records.append(MemberRecord(member=member, seed=seed, eigenvalues=eig))
        trailing = fh.read(1)
        if trailing:
            raise ArchiveFormatError(f"{path}: trailing bytes after last record")
    return SpectrumArchive(
        spec=spec, records=tuple(records), format_version=header["format_version"]
    )


def export_json(archive: SpectrumArchive, path: str | Path) -> None:
    """Human-readable dump of an archive."""
    payload = {
        "header": _header_dict(archive.spec),
        "members": [
            {
                "member": r.member,
                "seed": r.seed,
                "eigenvalues": [float(v) for v in r.eigenvalues],
            }
            for r in archive.records
        ],
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2))
