"""Workbench for MaxRes, MaxResW and SubCubeSums proofs."""

from .core import (
    Assignment,
    Clause,
    ClauseMultiset,
    Cube,
    CubeMultiset,
    RangeError,
    TautologyError,
    Verdict,
    cube_hits,
    eval_clause,
    falsifying_cube,
    restrict,
    viol,
)
from .maxres import (
    InvalidStepError,
    MaxResStep,
    ProofLog,
    check_viol_invariant,
    maxres_step,
    replay,
    weaken_step,
)
from .subcubesums import ScsCertificate, check_certificate, from_pointwise, measures, viol_table

__version__ = "0.1.0"
