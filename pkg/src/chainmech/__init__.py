"""chainmech: causal-state machines, statistical complexity, and proof-of-work simulation."""

from .blockmodel import (
    DifficultyReport,
    TwoStateModel,
    blockchain_machine,
    difficulty_report,
    mining_symbol_stream,
)
from .dynamics import (
    MapSpec,
    Orbit,
    bifurcation_scan,
    classify_regime,
    iterate,
    lyapunov,
)
from .powchain import (
    Block,
    BlockHeader,
    Chain,
    DifficultyTarget,
    Hash256,
    MineResult,
    collision_horizon,
    collision_probability,
    difficulty_to_target,
    header_hash,
    leading_zero_probability,
    merkle_root,
    mine,
    target_for_zeros,
    validate_block,
)
from .processes import crystal, fair_coin, golden_mean, tick_tock
from .symbolic import (
    CausalState,
    EpsilonMachine,
    InferenceConfig,
    ProbabilityDistribution,
    SymbolStream,
    entropy_term_precise,
    generate,
    infer_causal_states,
    log1m_shanks,
    shannon_entropy,
    stationary_distribution,
    statistical_complexity,
)

__version__ = "0.1.0"
