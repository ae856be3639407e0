"""L-function evaluation: reference values, truncated series, the approximate
functional equation at s = 1/2, and zero counting."""

from .afe import AfeConfig, QuadratureError, afe_eval_half, v_weight
from .hurwitz import PoleError, digamma, hurwitz_zeta, hurwitz_zeta_array
from .oracle import LValue, PrecisionError, l_oracle, l_values, l_values_grid
from .series import (
    euler_product_logs,
    finite_euler_product,
    gauss_sum,
    lambda_sum,
    mollifier_coeffs,
    mollifier_poly,
    prime_sum_S,
    prime_sums_all,
    root_number,
)
from .zeros import (
    ZeroCountError,
    ZeroCountReport,
    count_zeros,
    hardy_z,
    sign_change_count,
    zero_count_rect,
    zero_counts_set,
)

__all__ = [
    "AfeConfig",
    "LValue",
    "PoleError",
    "PrecisionError",
    "QuadratureError",
    "ZeroCountError",
    "ZeroCountReport",
    "afe_eval_half",
    "count_zeros",
    "digamma",
    "euler_product_logs",
    "finite_euler_product",
    "gauss_sum",
    "hardy_z",
    "hurwitz_zeta",
    "hurwitz_zeta_array",
    "l_oracle",
    "l_values",
    "l_values_grid",
    "lambda_sum",
    "mollifier_coeffs",
    "mollifier_poly",
    "prime_sum_S",
    "prime_sums_all",
    "root_number",
    "sign_change_count",
    "v_weight",
    "zero_count_rect",
    "zero_counts_set",
]
