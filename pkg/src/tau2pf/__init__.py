"""Exact and floating-point verification of the parafermion construction for
the inhomogeneous tau2 model.

Typical use::

    from tau2pf import RapiditySet, Tau2Model, gamma_iterate
    rap = RapiditySet.build(2, 1, [[0, 1, 0, 2], [0, 1, 0, 3]])
    model = Tau2Model(rap)
    model.H            # -6 X_1
"""

from .checks import REGISTRY, CheckResult
from .clock import ChainSpace, Operator, build_X, build_Z, commutator
from .errors import (CapacityError, ConfigError, DegeneracyError, LabelingError,
                     SingularModelError, Tau2Error)
from .parafermions import gamma_closed, gamma_iterate, q_sequence, s_scalars, truncation_check
from .scalars import ComplexField, CyclotomicField, make_field
from .tau2core import OperatorPolynomial, RapiditySet, Tau2Model

__version__ = "0.1.0"
