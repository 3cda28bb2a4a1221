"""Brute-force and exact-LP oracles."""

from .census import Census, tseitin_level_census
from .games import (
    STAR,
    ComposedDelayer,
    FixedDelayer,
    GameTranscript,
    OrderProver,
    PebblingAdversary,
    ProtocolError,
    TreeProver,
    pebbling_delayer,
    prover_delayer_play,
)
from .lp import (
    DegreeResult,
    JuntaResult,
    LPError,
    conical_junta_feasible,
    integral_feasible,
    junta_degree,
    phase1,
    scs_min_degree,
    scs_target,
    verify_farkas,
    verify_witness,
)
from .pebbling import PebbleOracle, PebblingError, bpeb, intermediate_inequality_sweep, subgraph_modulo
from .width import min_res_width, saturate
