"""Intuitionistic propositional logic in finitely many variables.

Formulas, Kripke semantics, lazily built fragments of the universal model,
a saturation-based decision procedure with verified countermodels, de Jongh
formulas, and the J1/J2/J3 structure of the join-irreducibles.
"""
from .budget import Budget, BudgetExceeded, default_budget
from .formula import (AtomOutOfRange, Formula, Kind, ParseError, atom, big_and, big_or, bottom,
                      conj, disj, implies, neg, parse, rn_ladder, top, to_text)
from .prover import (decompose, entails, equivalent, is_join_irreducible, maximal_lower_bounds,
                     mintype)
from .semantics import KripkeModel, brute_countermodel, force
from .universal import UFragment, complete_fragment, leaves

__version__ = "0.1.0"
