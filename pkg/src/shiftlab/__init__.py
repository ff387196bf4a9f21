"""Exact computations around shifted multiplicative subgroups of prime fields."""

from .bounds_lab import (
    InequalityReport,
    cor44_min_tuple,
    cor51_report,
    cor56_report,
    corollary12_report,
    fourier_max,
    fourier_stats,
    garcia_voloch_check,
    iterated_sumset,
    lemma54_report,
    shifted_intersection,
    statement53_report,
    sumset,
    theorem11_check,
    theorem55_report,
)
from .certificate import dumps as certificate_dumps
from .certificate import verify_certificate
from .convolutions import (
    ConvolutionTable,
    TensorSet,
    check_section2,
    circ,
    convolution_k,
    energy,
    energy_k,
    fiber_set,
    higher_energy,
    star,
    tensor_set,
)
from .errors import *  # noqa: F401,F403
from .field_core import (
    PrimeField,
    ResidueSet,
    Subgroup,
    invariant_set,
    is_prime,
    make_field,
    subgroup_of_order,
)
from .poly import DensePoly, derivative, vanishing_order
from .stepanov import StepanovCertificate, build_certificate, weight_poly
from .wronskian import independent_by_rank, independent_by_wronskian, prop32_family, wronskian

__version__ = "0.1.0"
