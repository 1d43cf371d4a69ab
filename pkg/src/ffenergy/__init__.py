"""ffenergy: exact finite-field energies, low-energy set decomposition, and
triple character sums over the convolution ab+ac+bc.

Quick start::

    from ffenergy import build_field, interval, additive_energy
    ctx = build_field(1009)
    U = interval(ctx, 0, 50)
    print(additive_energy(U).value)

Heavy inner loops run as numba kernels by default; set FFENERGY_BACKEND=numpy
before import to force the pure-numpy fallbacks (see ffenergy.backend).
"""

from .backend import BACKEND
from .characters import (AdditiveCharacter, MultiplicativeCharacter,
                         additive_table, eval_additive, eval_multiplicative,
                         multiplicative_table)
from .charsums import (SumResult, WeightVector, bound_evaluators,
                       convolution_set, kloosterman_K, sum_S, sum_T,
                       sum_mixed, weight_norms)
from .decompose import (DecompositionResult, ExtractionTrace, IterationRecord,
                        ThresholdParams, extract_subset, larger_half, m_of_z,
                        partition)
from .energy import (EnergyReport, RepCounts, additive_energy, cross_energy,
                     f_energy, multiplicative_energy, rep_diff, rep_f,
                     rep_sum, sumset)
from .errors import (BadArgument, BadLambda, ConfigError, DegenerateFunction,
                     DivisionByZero, EmptyC, ExceptionalFunction, FFError,
                     FieldTooLarge, NonPrime, SetTooSmall, ZeroDenominator)
from .field import (FieldCtx, FieldElement, FieldParams, add, build_field,
                    dlog, inv, mul, neg, pow_elem, sub, trace)
from .harness import (ExperimentConfig, VerificationRecord, emit_csv,
                      run_experiment, run_suite, verify_lemma_prodsum,
                      verify_lemma_rich, verify_union_energy)
from .ratfunc import (POLE, Polynomial, RationalFunction, apply_to_set,
                      eval_at, eval_vec, is_exceptional, normalize,
                      parse_ratfunc, ratfunc)
from .sets import (FSubset, add_subspace, field_set, garaev_set,
                   geometric_progression, interval, inverse_set,
                   mult_subgroup, parse_set_spec, random_subset,
                   subset_for_params)

__version__ = "0.1.0"
