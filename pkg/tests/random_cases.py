"""Seeded random formulas and models for the large property runs."""
import numpy as np

from heyting.formula import atom, bottom, conj, disj, implies, neg, top
from heyting.semantics import KripkeModel

_BINARY = (conj, disj, implies)


def random_formula(rng: np.random.Generator, n: int = 2, size: int = 6, constants: bool = True):
    """A formula with exactly ``size`` connectives, built bottom-up."""
    leaves = [atom(i) for i in range(1, n + 1)] + ([bottom(), top()] if constants else [])
    if size == 0:
        return leaves[rng.integers(len(leaves))]
    if rng.random() < 0.2:
        return neg(random_formula(rng, n, size - 1, constants))
    k = int(rng.integers(size))
    op = _BINARY[rng.integers(3)]
    return op(random_formula(rng, n, k, constants), random_formula(rng, n, size - 1 - k, constants))


def random_model(rng: np.random.Generator, n: int = 2, max_nodes: int = 7, fan: int = 3):
    k = int(rng.integers(1, max_nodes + 1))
    succ = []
    for i in range(k):
        later = np.arange(i + 1, k)
        m = min(len(later), int(rng.integers(0, fan + 1)))
        succ.append(tuple(sorted(int(j) for j in rng.choice(later, m, replace=False))) if m else ())
    vals = [0] * k
    for i in reversed(range(k)):
        common = (1 << n) - 1
        for j in succ[i]:
            common &= vals[j]
        vals[i] = int(rng.integers(1 << n)) & common
    return KripkeModel(n, vals, succ)
