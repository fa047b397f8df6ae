"""JSON formats for state files, scheme files and reports."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .linalg import InvalidStateError, check_density
from .optics import Branch, LocalUnitary, MixingScheme, PartialPolarizer, SchemeError, Source

FORMAT_VERSION = 1


def state_to_dict(rho: np.ndarray, family: str | None = None) -> dict:
    n = int(rho.shape[0]).bit_length() - 1
    out = {
        "n_qubits": n,
        "matrix_re": rho.real.tolist(),
        "matrix_im": rho.imag.tolist(),
    }
    if family:
        out["family"] = family
    return out


def state_from_dict(data: dict) -> np.ndarray:
    """Parse a state file body; raises :class:`InvalidStateError` naming the broken invariant."""
    try:
        n = int(data["n_qubits"])
        re = np.asarray(data["matrix_re"], dtype=float)
        im = np.asarray(data["matrix_im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStateError("format", f"malformed state file ({exc})") from exc
    d = 1 << n
    if re.shape != (d, d) or im.shape != (d, d):
        raise InvalidStateError("shape", f"n_qubits={n} needs {d}x{d} matrices, got {re.shape} and {im.shape}")
    return check_density(re + 1j * im)


def write_state(path, rho: np.ndarray, family: str | None = None):
    Path(path).write_text(json.dumps(state_to_dict(rho, family)) + "\n")


def read_state(path) -> tuple[np.ndarray, dict]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidStateError("format", f"{path} is not valid JSON ({exc})") from exc
    return state_from_dict(data), data


def file_digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


# -- schemes -------------------------------------------------------------------


def _complex_vec(v) -> dict:
    v = np.asarray(v, dtype=complex)
    return {"re": v.real.tolist(), "im": v.imag.tolist()}


def _vec_from(d) -> np.ndarray:
    return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d.get("im", [0.0] * len(d["re"])), dtype=float)


def _source_to_dict(src: Source) -> dict:
    if src.kind == "single_photon":
        return {"kind": src.kind, **_complex_vec(src.params["state"])}
    return {"kind": src.kind, **src.params}


def _source_from_dict(d: dict) -> Source:
    kind = d.get("kind")
    if kind == "single_photon":
        return Source(kind, {"state": _vec_from(d).tolist()})
    return Source(kind, {k: v for k, v in d.items() if k != "kind"})


def scheme_to_dict(scheme: MixingScheme) -> dict:
    branches = []
    for b in scheme.branches:
        elements = []
        for el in b.elements:
            if isinstance(el, PartialPolarizer):
                elements.append({"kind": "partial_polarizer", "photon": el.photon, "t_h": el.t_h, "t_v": el.t_v})
            else:
                elements.append(
                    {
                        "kind": "local_unitary",
                        "photon": el.photon,
                        "label": el.label,
                        "matrix_re": el.matrix.real.tolist(),
                        "matrix_im": el.matrix.imag.tolist(),
                    }
                )
        branches.append(
            {
                "p": b.p,
                "source": _source_to_dict(b.source),
                "elements": elements,
                "extra_photons": [_complex_vec(v) for v in b.extra_photons],
            }
        )
    return {"n_qubits": scheme.n_qubits, "branches": branches}


def scheme_from_dict(data: dict) -> MixingScheme:
    try:
        branches = []
        for b in data["branches"]:
            elements = []
            for el in b.get("elements", []):
                if el["kind"] == "partial_polarizer":
                    elements.append(PartialPolarizer(int(el["photon"]), float(el["t_h"]), float(el["t_v"])))
                elif el["kind"] == "local_unitary":
                    m = np.asarray(el["matrix_re"], dtype=float) + 1j * np.asarray(el["matrix_im"], dtype=float)
                    elements.append(LocalUnitary(int(el["photon"]), m, el.get("label", "")))
                else:
                    raise SchemeError(f"unknown element kind {el['kind']!r}")
            extra = [_vec_from(v) for v in b.get("extra_photons", [])]
            branches.append(Branch(float(b["p"]), _source_from_dict(b["source"]), tuple(elements), tuple(extra)))
        return MixingScheme(tuple(branches), int(data["n_qubits"]))
    except (KeyError, TypeError) as exc:
        raise SchemeError(f"malformed scheme file ({exc!r})") from exc


def read_scheme(path) -> MixingScheme:
    return scheme_from_dict(json.loads(Path(path).read_text()))


def write_scheme(path, scheme: MixingScheme):
    Path(path).write_text(json.dumps(scheme_to_dict(scheme), indent=1) + "\n")


# -- reports -------------------------------------------------------------------


def to_jsonable(obj):
    """Recursively convert numpy scalars and arrays to plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def make_report(command: str, inputs: dict, results: dict, verdict: str | None, seed: int | None) -> dict:
    from . import __version__

    return {
        "command": command,
        "inputs": to_jsonable(inputs),
        "results": to_jsonable(results),
        "verdict": verdict,
        "seed": seed,
        "version": __version__,
    }


REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "inputs", "results", "verdict", "seed", "version"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "results": {"type": "object"},
        "verdict": {"type": ["string", "null"]},
        "seed": {"type": ["integer", "null"], "minimum": 0},
        "version": {"type": "string"},
    },
    "additionalProperties": False,
}

STATE_SCHEMA = {
    "type": "object",
    "required": ["n_qubits", "matrix_re", "matrix_im"],
    "properties": {
        "n_qubits": {"type": "integer", "minimum": 1},
        "matrix_re": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "matrix_im": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "family": {"type": "string"},
    },
}

SCHEME_SCHEMA = {
    "type": "object",
    "required": ["n_qubits", "branches"],
    "properties": {
        "n_qubits": {"type": "integer", "minimum": 1},
        "branches": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["p", "source"],
                "properties": {
                    "p": {"type": "number", "minimum": 0},
                    "source": {"type": "object", "required": ["kind"]},
                    "elements": {
                        "type": "array",
                        "items": {"type": "object", "required": ["kind", "photon"]},
                    },
                    "extra_photons": {"type": "array"},
                },
            },
        },
    },
}
