"""Geometric-algebra adaptive filters: multivector arithmetic, GA-LMS,
steady-state theory and a Monte-Carlo system-identification harness."""
from .algebra import (
    COMPLEX,
    EVEN,
    FULL,
    G3,
    NAMED_MASKS,
    REAL,
    Multivector,
    Signature,
    SubalgebraMask,
    basis_vector,
    blade,
    blade_product,
    cayley_table,
    geometric_product,
    grade_projection,
    inner_product,
    magnitude,
    mask_by_name,
    outer_product,
    parse,
    project_subalgebra,
    pseudoscalar,
    quaternion_map,
    quaternion_unmap,
    render,
    reverse,
    rotate,
    rotor_from_vectors,
    scalar_product,
    vector,
    vector_inverse,
    versor_inverse,
)
from .arrays import (
    MultivectorArray,
    array_norm_sq,
    array_product_reversed,
    array_product_transpose,
    reverse_array,
    scale_left,
    scale_right,
)
from .filters import FilterState, compute_error, cost, general_step, gradient, lms_step
from .sim import ExperimentConfig, LearningCurve, run_experiment, steady_state, sweep_taps
from .theory import AlgebraDims, TheoryInputs, db, emse_theory, mse_theory

__version__ = "0.1.0"
