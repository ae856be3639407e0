"""Resonance pipelines: resonators, quadratic forms and their inequality chains."""

from .forms import s2_character_form, s2_diagonal_lower_bound, s2_kernel_form
from .pipelines import (
    ResonanceReport,
    b_sigma,
    resonance_half_line,
    resonance_sigma1,
    resonance_sigma_interior,
)
from .resonator import (
    ResonanceConfig,
    ResonanceError,
    Resonator,
    build_resonator,
    log_nu,
    residue_mass,
    resonator_product,
    resonator_series,
)
from .sums import (
    ExceptionalSetReport,
    build_set_M,
    exceptional_set,
    gcd_lcm_correlation,
    largest_prime_envelope,
    lemma_q2_product,
)
from .weights import w0_moment, w0_weight

__all__ = [
    "ExceptionalSetReport",
    "ResonanceConfig",
    "ResonanceError",
    "ResonanceReport",
    "Resonator",
    "b_sigma",
    "build_resonator",
    "build_set_M",
    "exceptional_set",
    "gcd_lcm_correlation",
    "largest_prime_envelope",
    "lemma_q2_product",
    "log_nu",
    "residue_mass",
    "resonance_half_line",
    "resonance_sigma1",
    "resonance_sigma_interior",
    "resonator_product",
    "resonator_series",
    "s2_character_form",
    "s2_diagonal_lower_bound",
    "s2_kernel_form",
    "w0_moment",
    "w0_weight",
]
