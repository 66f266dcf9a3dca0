"""Exact hydrogenic radial matrix elements and angular-momentum coupling
coefficients, with analytic continuation beyond the physical projection
range and a mechanical identity-verification suite."""

from .exactnum import (
    CancellationError,
    DivergenceError,
    DomainError,
    EpsLeading,
    IncompatibleSurdError,
    PhasedSurd,
    Rational,
    eps_limit,
    eps_mul,
    eps_sqrt,
    eps_sum,
    factorial,
    gamma_eps,
    neg_factorial_ratio,
    parse_value,
    pochhammer,
    render_value,
    surd,
    surd_add,
    surd_mul,
    surd_sqrt,
)
from .hydrogenic import (
    RadialFunction,
    RadialState,
    expectation_rm4,
    kramers_check,
    matrix_element,
    me_power,
    ps_zero_predicted,
    radial_function,
)
from .hypergeom import F32Params, f3f2_terminating, vk_f, vk_parameters
from .verify import GridSpec, VerificationReport, run_suite
from .wigner import (
    AngMomentum,
    StretchedArgs,
    ThreeJArgs,
    clebsch_gordan,
    numeric_eps_oracle,
    regularized_cg_product,
    regularized_three_j,
    stretched_three_j_poly,
    three_j,
    triangle_ok,
)

__version__ = "0.1.0"
