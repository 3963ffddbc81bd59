"""Assemble the pipeline report: raw matrices plus content digests.

The report is self-contained: group elements, action matrices, cocycle
values and witnesses are stored as raw entries so the verifier can re-check
every claim with field and matrix arithmetic alone.  All output is
canonical JSON; the payload digest binds every field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .build import (
    NonSplitSequence,
    ObstructionReport,
    TensorVanishing,
    ToyReport,
    assemble_obstruction_module,
    build_nonsplit_sequence,
    tensor_vanishing_witness,
    toy_example,
)
from .coh import SplitResult
from .gf import element_to_json, field_to_json
from .grp import MatrixGroup, group_to_json
from .jsonutil import atomic_write_text, canonical_json, digest_of
from .linalg import matrix_to_json
from .rep import module_descriptor

SCHEMA = "modcoh-report-v1"


def _split_result_to_json(res: SplitResult) -> dict:
    out = {
        "verdict": "Split" if res.split else "NonSplit",
        "generator_ids": list(res.generator_ids),
        "system": matrix_to_json(res.system),
        "rhs": matrix_to_json(res.rhs),
        "system_digest": digest_of(
            {"system": matrix_to_json(res.system), "rhs": matrix_to_json(res.rhs)}
        ),
    }
    if res.split:
        out["witness"] = matrix_to_json(res.witness)
        out["checked_elements"] = res.checked_elements
    else:
        out["inconsistency_row"] = matrix_to_json(res.certificate.row)
        out["equation"] = "y@system == 0 and y@rhs != 0"
    return out


def _certificate_to_json(seq: NonSplitSequence) -> dict:
    out = _split_result_to_json(seq.split_result)
    out["module"] = module_descriptor(seq.u_module)
    return out


def _toy_to_json(toy: ToyReport) -> dict:
    out = {
        "hypothesis_ok": toy.hypothesis.ok,
        "pattern_values": [element_to_json(a) for a in toy.hypothesis.values],
        "action": [matrix_to_json(m) for m in toy.sym2.actions()],
        "pi": matrix_to_json(toy.pi),
        "v0": matrix_to_json(toy.v0),
        "cocycle": [matrix_to_json(v) for v in toy.cocycle.values],
        "certificate": _split_result_to_json(toy.split_result),
    }
    if toy.intertwiner is not None:
        out["intertwiner"] = {
            "space_dim": toy.intertwiner.space_dim,
            "searched": toy.intertwiner.searched,
            "matrix": matrix_to_json(toy.intertwiner.matrix),
        }
        out["class_scalar"] = element_to_json(toy.scalar)
        out["coboundary_witness"] = matrix_to_json(toy.coboundary_witness)
    return out


@dataclass
class PipelineResult:
    sequence: NonSplitSequence
    witness: TensorVanishing
    obstruction: ObstructionReport
    toy: Optional[ToyReport]
    report: dict


def run_pipeline(group: MatrixGroup, params: dict, seed: int = 0) -> PipelineResult:
    """Run every stage on a built group and assemble the wrapped report."""
    seq = build_nonsplit_sequence(group)
    witness = tensor_vanishing_witness(seq)
    obstruction = assemble_obstruction_module(seq)
    toy = None
    if group.ctx.p == 2 and group.n == 2:
        dets_ok = all(
            (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) == group.ctx.one()
            for m in group.elements
        )
        if dets_ok:
            toy = toy_example(group, seed=seed, main=seq)

    payload = {
        "params": dict(params),
        "field": field_to_json(group.ctx),
        "group": group_to_json(group),
        "dims": seq.dims,
        "basis": [list(m) for m in seq.basis],
        "sym_action": [matrix_to_json(m) for m in seq.sym_module.actions()],
        "iota": matrix_to_json(seq.iota),
        "u_action": [matrix_to_json(m) for m in seq.u_module.actions()],
        "cocycle": [matrix_to_json(v) for v in seq.cocycle.values],
        "nonsplit_certificate": _certificate_to_json(seq),
        "tensor_vanishing": {
            "w_module": module_descriptor(witness.w_module),
            "w": matrix_to_json(witness.w),
            "witness": matrix_to_json(witness.witness),
            "class_of_g": [element_to_json(c) for c in witness.class_of_g],
            "z1_dim": witness.z1_dim,
            "b1_dim": witness.b1_dim,
            "h1_dim": witness.z1_dim - witness.b1_dim,
            "equation": "(kron(W(s), U(s)) - I) @ u == kron(w, g_s) for every element",
        },
        "obstruction": {
            "components": list(obstruction.components),
            "dim": obstruction.dim,
            "dim_by_formula": obstruction.dim_by_formula,
            "generator_action": [
                matrix_to_json(obstruction.x_module.action(i)) for i in group.generator_ids
            ],
        },
        "toy": _toy_to_json(toy) if toy is not None else None,
    }
    report = {"schema": SCHEMA, "payload": payload, "digest": digest_of(payload)}
    return PipelineResult(seq, witness, obstruction, toy, report)


def write_report(report: dict, path: str) -> None:
    atomic_write_text(path, canonical_json(report) + "\n")
