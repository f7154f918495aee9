"""Binary quadratic modeling, annealer-style samplers, Chimera minor
embedding, and annealing-based statistics applications.

The hot sampling kernels run on a compiled extension when available and on
a bit-identical numpy fallback otherwise; ``annealstat.kernel_lane()``
reports which one is active.
"""

from ._kernels import ACTIVE_LANE
from .chimera import ChimeraGraph, chimera, parse_topology
from .design import Design, decode_design, generate_design, nqueens_qubo
from .embedding import (
    Embedding,
    clique_embedding,
    embed_model,
    find_embedding,
    unembed,
    validate_embedding,
)
from .errors import (
    AnnealstatError,
    CapacityError,
    EmbeddingError,
    ExpansionPointError,
    QuboParseError,
)
from .matinv import MatInvProblem, MatInvResult, column_qubo, invert, precompute
from .mle import (
    NORMAL,
    BinaryEncoding,
    LikelihoodModel,
    MleProblem,
    MleTrace,
    decode,
    normal_model,
    run_mle,
    taylor_qubo,
)
from .models import (
    Assignment,
    HardwareRange,
    IsingModel,
    QuboModel,
    coefficient_matrix,
    energy,
    ising_to_qubo,
    qubo_to_ising,
    rescale_to_hardware,
)
from .qubofile import format_qubo, parse_qubo, read_qubo, write_qubo
from .samplers import (
    NoiseModel,
    SampleRecord,
    SampleSet,
    SamplerConfig,
    SamplerParams,
    batch_energies,
    convert_sampleset,
    exact_solve,
    noisy_boltzmann_sample,
    simulated_anneal,
)

__version__ = "0.1.0"


def kernel_lane() -> str:
    """Name of the kernel implementation in use: 'compiled' or 'pure'."""
    return ACTIVE_LANE
