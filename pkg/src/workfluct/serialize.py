"""JSON and CSV encodings.

Complex numbers are ``[re, im]`` pairs; matrices are row-major lists of
rows. Floats are written with ``repr`` so output is round-trip exact and
byte-stable.
"""
from __future__ import annotations

import json

import numpy as np

from .core import HamiltonianSpec, UnitarySpec, as_matrix, eigh
from .errors import ValidationError
from .work import ProtocolSpec, WorkDistribution, WorkPoint


def encode_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def encode_matrix(m) -> list:
    a = np.asarray(m, dtype=complex)
    return [[encode_complex(z) for z in row] for row in a]


def decode_matrix(obj) -> np.ndarray:
    try:
        a = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"matrix is not numeric: {exc}") from exc
    if a.ndim == 3 and a.shape[2] == 2:
        a = a[..., 0] + 1j * a[..., 1]
    elif a.ndim != 2:
        raise ValidationError(f"matrix must be rows of [re, im] pairs, got shape {a.shape}")
    return as_matrix(a)


def encode_vectors(v) -> list:
    """Eigenvector columns, one list of [re, im] pairs per vector."""
    return [[encode_complex(z) for z in col] for col in np.asarray(v).T]


def hamiltonian_to_json(h: HamiltonianSpec) -> dict:
    return {"energies": h.energies.tolist(), "eigenvectors": encode_vectors(h.eigenvectors)}


def hamiltonian_from_json(obj) -> HamiltonianSpec:
    """Accepts either ``{"energies", "eigenvectors"}`` or a bare matrix."""
    if isinstance(obj, dict):
        if "energies" not in obj:
            raise ValidationError("Hamiltonian object needs an 'energies' field")
        vecs = obj.get("eigenvectors")
        if vecs is None:
            return HamiltonianSpec.from_energies(obj["energies"])
        cols = decode_matrix(vecs)  # rows here are vectors
        return HamiltonianSpec(np.asarray(obj["energies"], dtype=float), cols.T)
    return eigh(decode_matrix(obj))


def schedule_to_json(u: UnitarySpec) -> dict:
    if u.explicit is not None:
        return {"unitary": encode_matrix(u.explicit)}
    return {"segments": [{"h": encode_matrix(h), "dt": dt} for h, dt in u.schedule]}


def drive_from_json(obj, dim: int) -> UnitarySpec:
    if obj is None:
        return UnitarySpec.identity(dim)
    if not isinstance(obj, dict):
        return UnitarySpec(explicit=decode_matrix(obj))
    if "unitary" in obj:
        return UnitarySpec(explicit=decode_matrix(obj["unitary"]))
    if "segments" in obj:
        segs = [(decode_matrix(seg["h"]), float(seg["dt"])) for seg in obj["segments"]]
        return UnitarySpec(schedule=tuple(segs), size=dim)
    raise ValidationError("drive needs 'unitary' or 'segments'")


def protocol_to_json(p: ProtocolSpec) -> dict:
    return {
        "h_initial": hamiltonian_to_json(p.h_initial),
        "drive": schedule_to_json(p.drive),
        "h_final": hamiltonian_to_json(p.h_final),
    }


def protocol_from_json(obj) -> ProtocolSpec:
    try:
        h0 = hamiltonian_from_json(obj["h_initial"])
        ht = hamiltonian_from_json(obj["h_final"])
    except KeyError as exc:
        raise ValidationError(f"protocol is missing field {exc}") from exc
    return ProtocolSpec(h0, drive_from_json(obj.get("drive"), h0.dim), ht)


def distribution_to_json(d: WorkDistribution) -> dict:
    out: dict = {"kind": d.kind}
    if d.s is not None:
        out["s"] = d.s
    pts = []
    for pt in d.points:
        rec = {"w": pt.w, "i": pt.i, "j": pt.j, "value": pt.value}
        if pt.pairs:
            rec["pairs"] = [list(pr) for pr in pt.pairs]
        pts.append(rec)
    out["points"] = pts
    out["aggregated"] = d.aggregated
    if d.basis is not None:
        out["basis"] = encode_vectors(d.basis)
    return out


def distribution_from_json(obj) -> WorkDistribution:
    pts = tuple(
        WorkPoint(float(r["w"]), int(r["i"]), int(r["j"]), float(r["value"]),
                  tuple(tuple(pr) for pr in r.get("pairs", ())))
        for r in obj["points"]
    )
    return WorkDistribution(pts, obj["kind"], s=obj.get("s"), aggregated=bool(obj.get("aggregated", False)))


def distribution_to_csv(d: WorkDistribution) -> str:
    lines = ["w,i,j,value"]
    lines += [f"{float(pt.w)!r},{pt.i},{pt.j},{float(pt.value)!r}" for pt in d.points]
    return "\n".join(lines) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj) and obj.ndim == 2:
            return encode_matrix(obj)
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return encode_complex(obj)
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def report_to_json(rep, **meta) -> dict:
    """Field dictionary of a dataclass report plus metadata (seed, digest)."""
    from dataclasses import fields

    out = {f.name: getattr(rep, f.name) for f in fields(rep)}
    for name in ("gap", "weak_value"):
        if hasattr(type(rep), name):
            out[name] = getattr(rep, name)
    out.update(meta)
    return _plain(out)


def csv_rows(header: list[str], rows: list[dict]) -> str:
    def fmt(v):
        if isinstance(v, (bool, np.bool_)):
            return "true" if v else "false"
        if isinstance(v, (float, np.floating)):
            return repr(float(v))
        return str(v)

    lines = [",".join(header)]
    lines += [",".join(fmt(r.get(h, "")) for h in header) for r in rows]
    return "\n".join(lines) + "\n"
