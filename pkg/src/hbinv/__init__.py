"""Exact invariants of handlebody-links from unimodular Hopf algebra data."""
from __future__ import annotations

from .scalar import Cyc, Matrix, Rational, cyclotomic_polynomial, euler_phi
from .linmap import LinMap, PipeState
from .hopf import (HopfDataError, HopfPresentation, QcqsBundle, build_qcqs,
                   compute_integrals, trace_s2, verify_hopf, verify_yd)
from .tangle import TangleExpr, arity, builtin, disk_sum, parse, to_text
from .zoo import (GroupTable, builtin_group, group_algebra, kac_b4m,
                  load_group, quantum_double, uq_sl2)
from .evaluate import (InvariantResult, SparseMap, check_horn_independence,
                       check_mirror, check_scaling, evaluate, invariant_F,
                       invariant_v, verify_relations)

__all__ = [
    "Cyc",
    "Matrix",
    "Rational",
    "cyclotomic_polynomial",
    "euler_phi",
    "LinMap",
    "PipeState",
    "HopfDataError",
    "HopfPresentation",
    "QcqsBundle",
    "build_qcqs",
    "compute_integrals",
    "trace_s2",
    "verify_hopf",
    "verify_yd",
    "TangleExpr",
    "arity",
    "builtin",
    "disk_sum",
    "parse",
    "to_text",
    "GroupTable",
    "builtin_group",
    "group_algebra",
    "kac_b4m",
    "load_group",
    "quantum_double",
    "uq_sl2",
    "InvariantResult",
    "SparseMap",
    "check_horn_independence",
    "check_mirror",
    "check_scaling",
    "evaluate",
    "invariant_F",
    "invariant_v",
    "verify_relations",
]
