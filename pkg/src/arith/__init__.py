from .errors import *
from .ratfunc import (
    VARIABLES,
    Q,
    Z,
    U,
    W,
    ONE,
    ZERO,
    RatFunc,
    ShellExpansion,
    rf_normalize,
    rf_evaluate,
    rf_shell_expand,
)
from .scalar import (
    NUMERIC,
    SYMBOLIC,
    REGIMES,
    NumC,
    Scalar,
    check_finite,
    deviation,
    format_scalar,
    is_zero,
    normalize_scalar,
    regime_of,
    scalars_equal,
    scalar_from_json,
    scalar_to_json,
    to_exact,
    to_numeric,
)
