"""Structure of the join-irreducibles: k-sets, strata, J2 witnesses, one-point extensions."""
from .kenum import (KEnumeration, areminimal_violations, entails_in, enumerate_k, fragment_forces,
                    iter_k, refute_in_fragment, strictly_below_in)
from .triplets import (ASet, Triplet, build_aset, disjoint_triplets, find_triplets,
                       is_well_positioned, maximal_outside, reference_triplet, smallest_triplet)
from .j2 import build_j2_formula, j2_parts
from .classify import ClassLabel, classify
from .bqsl import Bqsl, NotABqsl, NotAnEmbedding, check_bqsl, is_embedding, one_point_chain
from .fraisse import (PostconditionFailed, PreconditionViolated, WitnessSearchFailed,
                      fraisse_extend, fraisse_extend_details, incomp_witness,
                      incomp_witness_details)
