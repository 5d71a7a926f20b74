"""Numerics for alpha(x)-multistable distributions.

Quasinorms on the variable-exponent space, the multistable
characteristic function, density and tail probabilities by Fourier
inversion, the explicit tail asymptote, exact stable-mixture sampling,
and numerical verification of the tail theorem's lemma chain.
"""

from .asymptote import (
    TailAsymptote,
    ratio,
    scaling_bounds_check,
    tail_asymptote,
    tail_constant,
)
from .charfn import cf, cf_multivariate
from .function_space import (
    ExponentFunction,
    MultistableSpec,
    StepFunction,
    modular_integral,
    normalize_to_sphere,
    quasinorm,
    refine,
)
from .inversion import density, interval_probability, tail_probability
from .mollifier import MollifierSpec, build_mollifier
from .prooflab import (
    eta,
    h_q,
    j0,
    rho,
    tau,
    verify_elementary_inequality,
    verify_lemma1,
    verify_lemma3,
    verify_lemma5,
    verify_lemma6,
    verify_parseval,
)
from .quadrature import AccuracyError, QuadratureConfig, oscillatory_integral
from .sampler import mc_tail, mixture_decompose, sample, sample_standard_stable

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ExponentFunction",
    "MollifierSpec",
    "MultistableSpec",
    "QuadratureConfig",
    "StepFunction",
    "TailAsymptote",
    "build_mollifier",
    "cf",
    "cf_multivariate",
    "density",
    "eta",
    "h_q",
    "interval_probability",
    "j0",
    "mc_tail",
    "mixture_decompose",
    "modular_integral",
    "normalize_to_sphere",
    "oscillatory_integral",
    "quasinorm",
    "ratio",
    "refine",
    "rho",
    "sample",
    "sample_standard_stable",
    "scaling_bounds_check",
    "tail_asymptote",
    "tail_constant",
    "tail_probability",
    "tau",
    "verify_elementary_inequality",
    "verify_lemma1",
    "verify_lemma3",
    "verify_lemma5",
    "verify_lemma6",
    "verify_parseval",
]
