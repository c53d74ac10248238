"""tanglekit: closed-form I-tangle for rank-2 bipartite qudit states.

    >>> from tanglekit import random_rank2, i_tangle_rank2
    >>> rho = random_rank2((2, 3), seed=1)
    >>> tau = i_tangle_rank2(rho)
"""
from .errors import (BadDims, BadSubspace, NotHermitian, NotPSD, NotReal,
                     NotSquare, OutOfRange, OutsideBall, OutsideSupport,
                     RankExceeded, TangleKitError, TraceNotOne)
from .inverter import (enumerate_subspaces, invert_via_subspaces, pure_tangle,
                       spin_flip_pure_2q, state_invert, theta_alpha_apply,
                       zeta_matrices)
from .linalg import hermitian_eig, kron, psd_sqrt
from .oracle import (ChordSearchConfig, DecompSearchConfig, VerifyConfig,
                     chord_minimize, decomposition_minimize, verify_batch)
from .rank2 import (eof_upper_bound, f_eval, g_eval, i_tangle_rank2,
                    m_matrix, optimal_decomposition, t_tensor)
from .states import (BipartiteDims, DecompositionResult, DensityMatrix,
                     Rank2Eigenbasis, bloch_to_density, density_to_bloch,
                     partial_trace, random_pure, random_rank2,
                     rank2_eigenbasis, validate_density)
from .wootters import (binary_entropy, concurrence_2q, eof_exact_2q,
                       eof_from_tangle, tangle_2q)

__version__ = "0.1.0"
