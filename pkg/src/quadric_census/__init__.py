"""Census of everywhere-locally-soluble diagonal quadric surfaces fibred
over the split quadric surface y0*y1 = y2*y3.

The package enumerates, for height bounds B, the base points t whose
diagonal fibre t0t2 x0^2 + t1t3 x1^2 + t1t2 x2^2 + t0t3 x3^2 = 0 is
soluble over every completion of Q, together with the character-sum
machinery behind the count's main term and the Euler products giving its
leading constant.
"""

from .arith import (
    CeilingExceeded,
    Factorization,
    SpfSieve,
    factorize,
    is_square,
    jacobi,
    mu_squared,
    odd_part,
    shared_sieve,
    squarefree_split,
    tau,
)
from .charsum import (
    CharsumInput,
    assemble_quadric,
    bilinear_hyperbolic_sum,
    identity_suite,
    indicator_via_charsum,
    sigma_r2,
    sigma_r3,
    sigma_table,
)
from .constant import (
    EulerProductResult,
    constant_cri,
    euler_factor,
    leading_constant,
    main_term,
    mu_power_sums,
    rho,
    rho_prime,
)
from .counting import (
    CensusResult,
    CountVariant,
    Decomposition,
    census,
    count_N,
    count_N1,
    count_N2,
    count_raw,
    decompose,
    fibre_quadric,
    height,
    hyperbola_split_check,
    region_count,
)
from .solubility import (
    REAL,
    Verdict,
    find_rational_point,
    has_rational_point,
    hilbert_symbol,
    is_everywhere_locally_soluble,
    local_indicator_2,
    local_indicator_odd,
    normalize,
    padic_oracle,
    solvable_real,
)

__version__ = "0.1.0"
