"""Self-contained JSON instance files.

Files embed the explicit transition matrix, mask, motifs and certificate so an
instance can be rebuilt without replaying the random streams that made it.
Probabilities are written with 17 significant digits, which round-trips
IEEE doubles exactly, and the layout is canonical: saving a loaded instance
reproduces the original bytes.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .core import EhrlichError, LoadError
from .function import EhrlichInstance, _raw_values
from .markov import BandMask, TransitionMatrix, build_band_mask
from .motifs import MotifSet, SpacedMotif

FORMAT_VERSION = 1

_KEYS = (
    "version", "v", "L", "c", "k", "q", "temperature", "bandwidth", "seed", "negate",
    "permutation", "matrix", "mask", "motifs", "certificate",
)


def _compact(value) -> str:
    return json.dumps(value, separators=(", ", ": "))


def _rows(rows) -> str:
    return "[\n" + ",\n".join("    " + row for row in rows) + "\n  ]"


def dumps_instance(inst: EhrlichInstance) -> str:
    A = inst.transition
    fields = {
        "version": _compact(FORMAT_VERSION),
        "v": _compact(inst.num_states),
        "L": _compact(inst.length),
        "c": _compact(inst.num_motifs),
        "k": _compact(inst.motif_length),
        "q": _compact(inst.quantization),
        "temperature": format(A.temperature, ".17g"),
        "bandwidth": _compact(A.mask.bandwidth),
        "seed": _compact(inst.root_seed),
        "negate": _compact(inst.negate),
        "permutation": _compact(list(A.mask.permutation)),
        "matrix": _rows("[" + ", ".join(format(p, ".17g") for p in row) + "]" for row in A.probs.tolist()),
        "mask": _rows(_compact([int(b) for b in row]) for row in A.mask.entries),
        "motifs": _rows(
            _compact({"elements": list(m.elements), "offsets": list(m.offsets)}) for m in inst.motifs
        ),
        "certificate": _compact(inst.certificate.tolist()),
    }
    body = ",\n".join(f'  "{key}": {fields[key]}' for key in _KEYS)
    return "{\n" + body + "\n}\n"


def save_instance(inst: EhrlichInstance, path) -> Path:
    path = Path(path)
    path.write_text(dumps_instance(inst), encoding="utf-8")
    return path


def instance_digest(inst: EhrlichInstance) -> str:
    """SHA-256 of the canonical instance file."""
    return hashlib.sha256(dumps_instance(inst).encode("utf-8")).hexdigest()


def _int(data, key) -> int:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise LoadError(f"field {key!r} must be an integer")
    return value


def loads_instance(text: str) -> EhrlichInstance:
    """Parse and fully validate an instance file."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(f"instance file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise LoadError("instance file must hold a JSON object")
    missing = [key for key in _KEYS if key not in data]
    if missing:
        raise LoadError(f"instance file is missing fields: {missing}")
    if data["version"] != FORMAT_VERSION:
        raise LoadError(f"unsupported instance format version {data['version']!r}")
    try:
        v, length = _int(data, "v"), _int(data, "L")
        c, k, q = _int(data, "c"), _int(data, "k"), _int(data, "q")
        bandwidth, seed = _int(data, "bandwidth"), _int(data, "seed")
        if not isinstance(data["negate"], bool):
            raise LoadError("field 'negate' must be a boolean")
        probs = np.array(data["matrix"], dtype=float)
        mask_entries = np.array(data["mask"], dtype=np.int64)
        if probs.shape != (v, v) or mask_entries.shape != (v, v):
            raise LoadError("matrix and mask must be v x v")
        if not np.isin(mask_entries, (0, 1)).all():
            raise LoadError("mask entries must be 0 or 1")
        expected = build_band_mask(v, bandwidth, permutation=data["permutation"])
        if not np.array_equal(expected.entries, mask_entries.astype(bool)):
            raise LoadError("mask does not match its bandwidth and permutation")
        transition = TransitionMatrix(probs, expected, float(data["temperature"]))
        transition.check()
        motifs = tuple(SpacedMotif(m["elements"], m["offsets"]) for m in data["motifs"])
        certificate = np.array(data["certificate"], dtype=np.int64)
        if certificate.shape != (length,):
            raise LoadError("certificate must have length L")
        inst = EhrlichInstance(
            transition, MotifSet(motifs, certificate), length, v, c, k, q, data["negate"], seed
        )
    except LoadError:
        raise
    except (EhrlichError, KeyError, TypeError, ValueError) as exc:
        raise LoadError(f"invalid instance file: {exc}") from exc
    if certificate.min() < 0 or certificate.max() >= v or _raw_values(inst, certificate[None, :])[0] != 1.0:
        raise LoadError("embedded certificate is infeasible or not optimal")
    return inst


def load_instance(path) -> EhrlichInstance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read instance file {path}: {exc}") from exc
    return loads_instance(text)
