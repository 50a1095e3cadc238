"""Exact classical orthogonal decompositions of sl_n over finite fields."""

from .classify import (CLASS_11, CLASS_1Z, case_check_48, classify_j3, j3_class_count,
                       lemma_conjugator, psi_verify, sl2_survey, sl3_survey,
                       uniqueness_certificate_sl3)
from .cod import (CodReport, Decomposition, PreconditionError, build_cod, build_cod_prime,
                  build_cod_prime_power, build_generators, build_J3, build_shift_X,
                  build_sl2_cod, symplectic_basis, verify_cod)
from .field import FieldElement, FiniteField, field_for_order, make_field
from .lie import CartanReport, Subalgebra, is_classical_cartan, killing, span_close
from .matrix import Mat, Polynomial

__all__ = [
    "CLASS_11", "CLASS_1Z", "CartanReport", "CodReport", "Decomposition", "FieldElement",
    "FiniteField", "Mat", "Polynomial", "PreconditionError", "Subalgebra", "build_J3",
    "build_cod", "build_cod_prime", "build_cod_prime_power", "build_generators",
    "build_shift_X", "build_sl2_cod", "case_check_48", "classify_j3", "field_for_order",
    "is_classical_cartan", "j3_class_count", "killing", "lemma_conjugator", "make_field",
    "psi_verify", "sl2_survey", "sl3_survey", "span_close", "symplectic_basis",
    "uniqueness_certificate_sl3", "verify_cod",
]
