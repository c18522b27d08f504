"""Independent reference computations used as test oracles.

None of these call the saturation engine; they recompute the same objects by
other routes (direct loops, relaxation over hyperedges, subset and string
enumeration).
"""

from functools import lru_cache
from itertools import product
from math import gcd

from recset.model import Lang, apply_operation


def recurrence_values(coeffs, constant, initial, horizon):
    """Direct loop: positions 1..horizon of a linear recurrence."""
    k = len(initial)
    vals = list(initial)
    while len(vals) < horizon:
        vals.append(sum(c * v for c, v in zip(coeffs, vals[-k:])) + constant)
    return vals[:horizon]


def powers_mod(g, m):
    """{g^1, g^2, ...} mod m by repeated multiplication."""
    seen = []
    x = g % m
    while x not in seen:
        seen.append(x)
        x = (x * g) % m
    return set(seen)


def cyclic_additive_size(g, m):
    return m // gcd(g, m)


def hyperedge_levels(instance, universe_elements):
    """Minimal derivation depth by Bellman-Ford relaxation over all hyperedges.

    Every defined application over the finite universe is an edge from its
    arguments to its result; a base element sits at level 1 and an edge fires
    at one more than the deepest of its arguments.
    """
    edges = []
    for op in instance.ops:
        for args in product(universe_elements, repeat=op.arity):
            r = apply_operation(op, args)
            if r is not None:
                edges.append((args, r))
    level = {b: 1 for b in instance.base}
    changed = True
    while changed:
        changed = False
        for args, r in edges:
            if all(a in level for a in args):
                cand = max(level[a] for a in args) + 1
                if cand < level.get(r, float("inf")):
                    level[r] = cand
                    changed = True
    return level


def naive_rounds(base, ops):
    """Hand-run fixpoint iteration with plain Python sets, one round per order."""
    strata = [set(base)]
    known = set(base)
    while True:
        new = set()
        for op in ops:
            for args in product(list(known), repeat=op.arity):
                r = apply_operation(op, args)
                if r is not None and r not in known:
                    new.add(r)
        if not new:
            return strata
        strata.append(new)
        known |= new


def span_combinations(modulus, generators):
    """{sum a_i g_i} over all coefficient vectors, as tuples of coordinates."""
    d = len(generators[0])
    out = set()
    for coeffs in product(range(modulus), repeat=len(generators)):
        out.add(tuple(sum(a * g[j] for a, g in zip(coeffs, generators)) % modulus for j in range(d)))
    return out


# -- languages ------------------------------------------------------------------------


def words(alphabet, max_len):
    out = [""]
    for n in range(1, max_len + 1):
        out += ["".join(p) for p in product(alphabet, repeat=n)]
    return out


class Expr:
    """Untruncated regular expression tree with a membership test by splitting."""

    def __init__(self, kind, *parts):
        self.kind = kind
        self.parts = parts
        self.member = lru_cache(maxsize=None)(self._member)

    def _member(self, w):
        k, p = self.kind, self.parts
        if k == "lit":
            return w in p[0]
        if k == "union":
            return p[0].member(w) or p[1].member(w)
        if k == "concat":
            return any(p[0].member(w[:i]) and p[1].member(w[i:]) for i in range(len(w) + 1))
        if k == "star":
            if w == "":
                return True
            return any(p[0].member(w[:i]) and self.member(w[i:]) for i in range(1, len(w) + 1))
        raise ValueError(k)

    def language(self, alphabet, max_len):
        return frozenset(w for w in words(alphabet, max_len) if self.member(w))


def expressions_from_witnesses(result):
    """Rebuild an untruncated expression for every element from its witness."""
    exprs = {}
    for stratum in result.strata:
        for e in stratum:
            w = result.witness_map[e]
            if w.is_base:
                exprs[e] = Expr("lit", frozenset(e.strings))
            else:
                name = result.instance.ops[w.op_id].name
                exprs[e] = Expr(name, *(exprs[a] for a in w.args))
    return exprs


def concat_by_split(pset, qset, candidates):
    return frozenset(
        w for w in candidates if any(w[:i] in pset and w[i:] in qset for i in range(len(w) + 1))
    )


def lang(strings, L):
    return Lang(tuple(strings), L)
