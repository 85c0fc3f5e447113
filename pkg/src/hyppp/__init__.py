"""Hyperdeterminantal point processes on finite weighted ground spaces."""
from ._backend import BACKEND
from .errors import (
    ArgumentError,
    ConditioningError,
    HypppError,
    InconsistentMoments,
    InvalidSignancy,
    RankError,
    ShapeError,
    SpectrumError,
    TooLarge,
)
from .hdpp import (
    CategoricalDist,
    ProcessSpec,
    conditional_next,
    density,
    marginalize_last_point,
    normalization_check,
    reduce_factor,
    sample,
    sample_many,
)
from .kernel import (
    GroundSpace,
    OrthonormalSystem,
    PointConfig,
    b_matrices,
    eval_kernel,
    gen_system,
    validate_orthonormal,
)
from .moments import (
    CountPMF,
    ProductSet,
    factorial_moment,
    h_matrix,
    pmf_bernoulli_sum_m1,
    pmf_from_factorial_moments,
)
from .multilinear import SignancySet, det, hyperdet_direct, hyperdet_factored, permanent
from .tensor import HypercubicArray, array_get, from_factored

__version__ = "0.1.0"
