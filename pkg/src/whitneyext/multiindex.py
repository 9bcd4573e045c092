"""Multi-index helpers.

Multi-indices are plain tuples of non-negative ints of length n.  Iteration
order everywhere is graded lexicographic: first by total order, then lex.
"""

from math import factorial
from itertools import product


def mi_order(k):
    """Total order |k|."""
    return sum(k)


def mi_factorial(k):
    """k! = prod of component factorials."""
    out = 1
    for ki in k:
        out *= factorial(ki)
    return out


def mi_add(j, k):
    return tuple(a + b for a, b in zip(j, k))


def mi_sub(j, k):
    """j - k; raises if any component would go negative."""
    out = tuple(a - b for a, b in zip(j, k))
    if any(c < 0 for c in out):
        raise ValueError(f"multi-index subtraction {j} - {k} not defined")
    return out


def mi_le(j, k):
    """Componentwise j <= k."""
    return all(a <= b for a, b in zip(j, k))


def mi_binom(k, j):
    """Product of componentwise binomial coefficients C(k_i, j_i)."""
    out = 1
    for ki, ji in zip(k, j):
        if ji > ki:
            return 0
        out *= factorial(ki) // (factorial(ji) * factorial(ki - ji))
    return out


def indices_of_order(n, order):
    """All multi-indices of length n with |k| == order, lexicographically."""
    if n == 1:
        return [(order,)]
    out = []
    for head in range(order, -1, -1):
        for tail in indices_of_order(n - 1, order - head):
            out.append((head,) + tail)
    return sorted(out, reverse=True)


def multi_indices(n, max_order):
    """All multi-indices with |k| <= max_order, graded lexicographic."""
    out = []
    for order in range(max_order + 1):
        out.extend(sorted(indices_of_order(n, order), reverse=True))
    return out


def below(k):
    """All multi-indices j with j <= k componentwise (including 0 and k)."""
    ranges = [range(ki + 1) for ki in k]
    return [tuple(j) for j in product(*ranges)]


def mi_power(v, k):
    """v^k = prod v_i^{k_i} for a point v."""
    out = 1.0
    for vi, ki in zip(v, k):
        if ki:
            out *= float(vi) ** ki
    return out


def mi_to_key(k):
    """Comma-joined serialization key, e.g. (1, 0) -> "1,0"."""
    return ",".join(str(c) for c in k)


def mi_from_key(key):
    return tuple(int(c) for c in key.split(","))
