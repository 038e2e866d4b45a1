"""Independent brute-force oracles used to derive frozen test values.

None of these import the package's algorithms; they re-derive quantities
from first principles in the most naive way available.
"""

import itertools
import random
from math import factorial


def dyck_paths(p):
    """Number of +-1 sequences of length 2p with non-negative partial sums."""
    count = 0
    for steps in itertools.product((1, -1), repeat=2 * p):
        h = 0
        for s in steps:
            h += s
            if h < 0:
                break
        else:
            count += h == 0
    return count


def catalan_factorial(p):
    return factorial(2 * p) // (factorial(p) * factorial(p + 1))


def random_order_reduce(seq, inverse, rng):
    """Cancel adjacent inverse pairs chosen in a random order until none is left."""
    seq = list(seq)
    while True:
        spots = [i for i in range(len(seq) - 1) if inverse.get(seq[i]) == seq[i + 1]]
        if not spots:
            return tuple(seq)
        i = rng.choice(spots)
        del seq[i:i + 2]


def _mat_mul(a, b, p):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) % p for j in range(len(b[0]))]
            for i in range(len(a))]


def naive_rep_count(vertices, edges, tree, genus, p, t):
    """Count 1-dim representations with every unknown enumerated separately.

    Unknowns: x_a, y_a for each edge, z_a in F_p^* for each non-tree edge,
    alpha, beta in F_p^* per genus handle.  A tuple counts when
    z_a = 1 + y_a x_a for non-tree a and, at each vertex v,
    prod_{t(a)=v} (1 + x_a y_a) = t_v * prod_{s(a)=v} (1 + y_a x_a)
    (scalars commute, so commutators are 1).
    """
    nontree = [a for a in range(len(edges)) if a not in tree]
    handles = sum(genus)
    total = 0
    for xs in itertools.product(range(p), repeat=2 * len(edges)):
        x = xs[0::2]
        y = xs[1::2]
        for zs in itertools.product(range(1, p), repeat=len(nontree)):
            if any(z != (1 + y[a] * x[a]) % p for a, z in zip(nontree, zs)):
                continue
            good = True
            for v in range(1, vertices + 1):
                lhs, rhs = 1, t[v - 1] % p
                for a, (s, tt) in enumerate(edges):
                    if tt == v:
                        lhs = lhs * (1 + x[a] * y[a]) % p
                    if s == v:
                        rhs = rhs * (1 + y[a] * x[a]) % p
                if lhs != rhs:
                    good = False
                    break
            if good:
                total += (p - 1) ** (2 * handles)
    return total


def naive_leibniz(word, degree, diff):
    """``d`` of a word (tuple of names, leftmost first) from the Leibniz rule.

    ``diff(name)`` returns a list of (coeff, tuple_of_names_or_None); None
    encodes an idempotent (the empty word).  Result: dict names -> coeff,
    ignoring composability (callers use endo-only alphabets).
    """
    out = {}
    sign = 1
    for i, n in enumerate(word):
        for c, repl in diff(n):
            mid = () if repl is None else repl
            w = word[:i] + mid + word[i + 1:]
            out[w] = out.get(w, 0) + sign * c
        if degree(n) % 2:
            sign = -sign
    return {k: v for k, v in out.items() if v}
