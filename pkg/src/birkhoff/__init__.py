"""Birkhoff factorization over F_q((pi)) and Weil's reduction over F_q(t).

Every g in GL(n, F_q((pi))) factors as gamma * pi^eta * k with gamma in
GL(n, F_q[1/pi]), k in GL(n, F_q[[pi]]) and a unique nondecreasing eta.
The package computes such factorizations exactly, reads splitting types of
bundles on P^1, and reduces adelic matrices over F_q(t).
"""

from .adele import AdeleMat, GlobalWitness, global_h0, global_reduce, peel_place, random_adele
from .bundle import BundleSpec, h0, splitting_from_h0, splitting_type
from .errors import (
    BirkhoffError,
    ConfigError,
    DivisionByZero,
    FieldMismatch,
    FlavorMismatch,
    NonUnitDeterminant,
    OracleMismatch,
    ParseError,
    PotentialStall,
    PrecisionExhausted,
    SingularInput,
    SizeMismatch,
    WitnessCheckFailed,
)
from .ff import FieldSpec, FqElem
from .iwasawa import ParabolicSpec, iwasawa_decompose, omega_member, phi_project, phi_torus
from .matgl import Cocharacter, MatG, random_gamma, random_k
from .reduce import Move, Witness, eta_of, local_reduce, phase1, phase2, verify_witness
from .series import LaurentPoly, LaurentSeries, Place, RatFun
from .textio import parse_instance, serialize_adele, serialize_matrix

__version__ = "0.1.0"
