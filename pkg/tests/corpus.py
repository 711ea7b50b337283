"""Seeded corpora of small good semigroups shared by several test modules."""
from __future__ import annotations

import random
from functools import lru_cache
from math import gcd

from goodsemi.branch import enumerate_plane_sequences
from goodsemi.curve import CurveParam
from goodsemi.errors import GoodSemiError
from goodsemi.hn import synth_param
from goodsemi.semigroup import contains, numerical, product_many
from goodsemi.tree import admissible_values, check_compatibility, k_matrix
from goodsemi.valuation import value_semigroup


def _gens(rng):
    while True:
        g = sorted(set(rng.randint(2, 7) for _ in range(rng.randint(1, 3))))
        g0 = 0
        for x in g:
            g0 = gcd(g0, x)
        if g0 == 1 and numerical(g).conductor[0] <= 8:
            return g


def _curve2(rng):
    def branch():
        m = rng.randint(1, 3)
        n = rng.randint(m, m + 4)
        y = {n: 1}
        if gcd(m, n) > 1:
            y[next(k for k in range(n + 1, n + 20) if gcd(m, n, k) == 1)] = rng.randint(1, 3)
        return {m: 1}, y
    b1, b2 = branch(), branch()
    lam = rng.randint(2, 4)
    return CurveParam.of(b1, (b2[0], {k: v * lam for k, v in b2[1].items()}))


def _synth3(rng):
    seqs = [PS.prefix for PS in enumerate_plane_sequences(2, max_len=3)]
    E = [rng.choice(seqs) for _ in range(3)]
    for _ in range(20):
        K = [rng.choice(admissible_values(E[i], E[j], 2) or [-1]) for i, j in ((0, 1), (0, 2), (1, 2))]
        if min(K) >= 0 and check_compatibility(k_matrix(K, 3)).ok:
            return synth_param(E, K)
    return None


def _omega(rng, S):
    if rng.random() < 0.5:
        from goodsemi.semigroup import fine_multiplicity
        return fine_multiplicity(S)
    while True:
        w = tuple(rng.randint(1, c + 1) for c in S.conductor)
        if contains(S, w):
            return w


@lru_cache(maxsize=None)
def random_good_semigroups(n: int = 60, seed: int = 20240611, max_conductor: int = 8):
    """n pairs (S, omega) with d <= 3 and conductor coordinates <= max_conductor."""
    rng = random.Random(seed)
    out = []
    kinds = ["numerical", "product", "curve2", "synth3"]
    attempts = 0
    while len(out) < n and attempts < 50 * n:
        attempts += 1
        kind = kinds[len(out) % len(kinds)]
        try:
            if kind == "numerical":
                S = numerical(_gens(rng))
            elif kind == "product":
                S = product_many([numerical(_gens(rng)) for _ in range(rng.randint(2, 3))])
            elif kind == "curve2":
                S = value_semigroup(_curve2(rng))
            else:
                c = _synth3(rng)
                if c is None:
                    continue
                S = value_semigroup(c)
        except GoodSemiError:
            continue
        if max(S.conductor) > max_conductor:
            continue
        out.append((kind, S, _omega(rng, S)))
    return tuple(out)


def is_curve_semigroup(kind, S) -> bool:
    """Value semigroups of curves: computed from parametrizations, or products
    of plane branch semigroups."""
    if kind in ("curve2", "synth3"):
        return True
    from goodsemi.branch import sequence_from_semigroup
    from goodsemi.semigroup import project
    try:
        for i in range(S.dim):
            sequence_from_semigroup(project(S, [i]))
    except GoodSemiError:
        return False
    return True
