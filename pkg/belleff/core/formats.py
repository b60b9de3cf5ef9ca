# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""JSON file formats. Every reader validates against the shipped schema before building values.

Rationals are written as lowest-terms strings ("2", "1/2"); output is canonical (sorted keys,
two-space indent, trailing newline) so artifacts diff cleanly and re-read to equal values.
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from functools import cache
from pathlib import Path
from typing import Any

import numpy as np

from belleff.bounds.partition import FunctionTable
from belleff.bounds.result import BoundResult
from belleff.certificates import Certificate, CertificateKind, VerificationReport
from belleff.core.errors import InputError
from belleff.models.distributions import Dist, DistMetadata, QuantumSetup
from belleff.models.functional import BellFunctional
from belleff.models.strategies import ABORT_TOKEN, DetStrategy
from belleff.protocols.protocol import CommProtocol, ProtocolMixture, ProtocolReport
from belleff.utils import format_rat, to_rat


def get_schema_dir() -> Path:
    return Path(__file__).resolve().parent.parent / "config"


@cache
def _schema(name: str) -> dict[str, Any]:
    return json.loads((get_schema_dir() / f"{name}_schema.json").read_text())


def validate(raw: Any, name: str, path: Path | None = None) -> None:
    """Validate parsed JSON against ``config/<name>_schema.json``. Raises InputError."""
    import jsonschema

    try:
        jsonschema.validate(instance=raw, schema=_schema(name))
    except jsonschema.ValidationError as e:
        loc = f" ({path})" if path else ""
        raise InputError(f"{name} file failed schema validation{loc}: {e.message}") from e


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def read_json(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"Malformed JSON in {path}: {e}") from e


def write_json(obj: Any, path: Path) -> None:
    Path(path).write_text(canonical_json(obj))


def _rat_table(table: np.ndarray) -> list:
    return np.vectorize(format_rat, otypes=[object])(table).tolist()


def _parse_table(nested: Any, shape: tuple[int, ...], what: str) -> np.ndarray:
    try:
        raw = np.array(nested, dtype=object)
    except ValueError as e:
        raise InputError(f"{what} is ragged: {e}") from e
    if raw.shape != shape:
        raise InputError(f"{what} has shape {raw.shape}, expected {shape}")
    return np.vectorize(to_rat, otypes=[object])(raw) if raw.size else raw


# Distributions


def dist_to_json(p: Dist) -> dict[str, Any]:
    return {
        "x": list(p.x_labels),
        "y": list(p.y_labels),
        "a": list(p.a_labels),
        "b": list(p.b_labels),
        "probs": _rat_table(p.probs),
        "metadata": {"approximate": p.metadata.approximate, "source": p.metadata.source},
    }


def dist_from_json(raw: Any, path: Path | None = None) -> Dist:
    validate(raw, "dist", path)
    labels = [tuple(raw[k]) for k in ("x", "y", "a", "b")]
    probs = _parse_table(raw["probs"], tuple(len(ls) for ls in labels), "probs")
    meta = raw.get("metadata", {})
    return Dist(
        *labels,
        probs,
        DistMetadata(meta.get("approximate", False), meta.get("source", "")),
    )


def read_dist(path: Path) -> Dist:
    return dist_from_json(read_json(path), path)


# Strategies and certificates


def strategy_to_json(strategy: DetStrategy, labels: Sequence[Sequence[str]]) -> dict[str, Any]:
    _, _, a_labels, b_labels = labels
    return {
        "alice": [ABORT_TOKEN if a is None else a_labels[a] for a in strategy.alice],
        "bob": [ABORT_TOKEN if b is None else b_labels[b] for b in strategy.bob],
        "class": strategy.strategy_class.value,
    }


def certificate_to_json(cert: Certificate) -> dict[str, Any]:
    out: dict[str, Any] = {
        "kind": cert.kind.value,
        "claimed_value": format_rat(cert.claimed_value),
        "coeffs": _rat_table(cert.functional.coeffs),
    }
    if cert.epsilon:
        out["epsilon"] = format_rat(cert.epsilon)
    if cert.eta != 1:
        out["eta"] = format_rat(cert.eta)
    if cert.nonconstant:
        out["nonconstant"] = True
    return out


def certificate_from_json(raw: Any, path: Path | None = None) -> Certificate:
    validate(raw, "certificate", path)
    nested = raw["coeffs"]
    try:
        shape = np.array(nested, dtype=object).shape
    except ValueError as e:
        raise InputError(f"coeffs is ragged: {e}") from e
    if len(shape) != 4:
        raise InputError(f"coeffs must be nested four deep, got shape {shape}")
    return Certificate(
        functional=BellFunctional(_parse_table(nested, shape, "coeffs")),
        kind=CertificateKind.parse(raw["kind"]),
        claimed_value=to_rat(raw["claimed_value"]),
        epsilon=to_rat(raw.get("epsilon", "0")),
        eta=to_rat(raw.get("eta", "1")),
        nonconstant=raw.get("nonconstant", False),
    )


def read_certificate(path: Path) -> Certificate:
    return certificate_from_json(read_json(path), path)


def verification_to_json(
    report: VerificationReport, labels: Sequence[Sequence[str]]
) -> dict[str, Any]:
    out: dict[str, Any] = {
        "valid": report.valid,
        "max": format_rat(report.maximum),
        "value": format_rat(report.value),
        "witness": strategy_to_json(report.witness, labels),
        "violations": list(report.violations),
        "lower_bound_bits": report.communication_lower_bound,
    }
    if report.minimum is not None:
        out["min"] = format_rat(report.minimum)
        out["min_witness"] = strategy_to_json(report.minimum_witness, labels)
    return out


# Bound results


def _input_key(p: Dist, x: int, y: int) -> str:
    return f"{p.x_labels[x]}|{p.y_labels[y]}"


def bound_result_to_json(result: BoundResult, p: Dist | None = None) -> dict[str, Any]:
    """``zeta`` is the scalar efficiency, or the per-input table keyed "x|y"."""
    zeta: Any = None
    if result.zeta_by_input is not None and p is not None:
        zeta = {_input_key(p, x, y): format_rat(v) for (x, y), v in result.zeta_by_input.items()}
    elif result.zeta is not None:
        zeta = format_rat(result.zeta)
    weights = []
    for key, w in result.primal_weights.items():
        if isinstance(key, DetStrategy) and p is not None:
            entry: Any = strategy_to_json(key, p.labels)
        else:
            rows, cols, z = key
            entry = {"rows": list(rows), "cols": list(cols), "output": z}
        weights.append({"strategy": entry, "weight": format_rat(w)})
    weights.sort(key=lambda e: json.dumps(e["strategy"], sort_keys=True))
    out: dict[str, Any] = {
        "kind": result.kind,
        "bound": format_rat(result.bound_value),
        "parameters": {k: format_rat(v) for k, v in result.parameters.items()},
        "zeta": zeta,
        "weights": weights,
        "certificate": _rat_table(result.certificate.coeffs) if result.certificate else None,
        "lp": {
            "status": result.solution.status,
            "pivots": result.solution.pivots,
            "rows": result.solution.rows,
            "columns": result.solution.columns,
            "strategy_columns": result.columns,
        },
    }
    if result.strategy_class is not None:
        out["class"] = result.strategy_class.value
    if result.references:
        out["references"] = {k: format_rat(v) for k, v in result.references.items()}
        out["checks"] = dict(result.checks)
    return out


# Function tables


def function_from_json(raw: Any, path: Path | None = None) -> FunctionTable:
    validate(raw, "function", path)
    return FunctionTable(tuple(raw["x"]), tuple(raw["y"]), tuple(tuple(r) for r in raw["values"]))


# Protocols


def protocol_to_json(mixture: ProtocolMixture) -> dict[str, Any]:
    x_labels, y_labels, a_labels, b_labels = mixture.labels
    components = []
    for w, p in mixture.components:
        alice: dict[str, dict[str, str]] = {}
        for (x, t), a in sorted(p.alice_out.items()):
            alice.setdefault(x_labels[x], {})[t] = a_labels[a]
        bob: dict[str, dict[str, str]] = {}
        for (y, t), b in sorted(p.bob_out.items()):
            bob.setdefault(y_labels[y], {})[t] = b_labels[b]
        components.append(
            {
                "weight": format_rat(w),
                "protocol": {
                    "transcript": [list(row) for row in p.transcript],
                    "alice_out": alice,
                    "bob_out": bob,
                },
            }
        )
    return {
        "c": mixture.c,
        "x": list(x_labels),
        "y": list(y_labels),
        "a": list(a_labels),
        "b": list(b_labels),
        "source": mixture.source,
        "mixture": components,
    }


def _index(labels: Sequence[str], label: str, what: str) -> int:
    try:
        return labels.index(label)
    except ValueError:
        raise InputError(f"Unknown {what} label {label!r}") from None


def _outputs(
    table: Mapping[str, Mapping[str, str]],
    inputs: Sequence[str],
    outputs: Sequence[str],
    who: str,
) -> dict[tuple[int, str], int]:
    return {
        (_index(inputs, i, f"{who} input"), t): _index(outputs, o, f"{who} output")
        for i, row in table.items()
        for t, o in row.items()
    }


def protocol_from_json(raw: Any, path: Path | None = None) -> ProtocolMixture:
    validate(raw, "protocol", path)
    labels = tuple(tuple(raw[k]) for k in ("x", "y", "a", "b"))
    x_labels, y_labels, a_labels, b_labels = labels
    components = []
    for entry in raw["mixture"]:
        proto = entry["protocol"]
        components.append(
            (
                to_rat(entry["weight"]),
                CommProtocol(
                    c=raw["c"],
                    transcript=tuple(tuple(row) for row in proto["transcript"]),
                    alice_out=_outputs(proto["alice_out"], x_labels, a_labels, "Alice"),
                    bob_out=_outputs(proto["bob_out"], y_labels, b_labels, "Bob"),
                ),
            )
        )
    return ProtocolMixture(labels, tuple(components), raw.get("source", ""))


def read_protocol(path: Path) -> ProtocolMixture:
    return protocol_from_json(read_json(path), path)


def protocol_report_to_json(report: ProtocolReport) -> dict[str, Any]:
    return {
        "valid": report.valid,
        "violations": list(report.violations),
        "witness": list(report.witness) if report.witness else None,
    }


# Quantum setups


def _complex_array(nested: Any) -> np.ndarray:
    arr = np.array(nested, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def quantum_from_json(raw: Any, denominator_limit: int, path: Path | None = None) -> QuantumSetup:
    validate(raw, "quantum", path)
    try:
        alice = [_complex_array(basis) for basis in raw["alice"]]
        bob = [_complex_array(basis) for basis in raw["bob"]]
        state = _complex_array(raw["state"])
    except ValueError as e:
        raise InputError(f"Quantum setup has ragged arrays: {e}") from e
    return QuantumSetup(
        state,
        alice,
        bob,
        tuple(raw.get("a", ())),
        tuple(raw.get("b", ())),
        tuple(raw.get("x", ())),
        tuple(raw.get("y", ())),
        raw.get("denominator_limit", denominator_limit),
    )
