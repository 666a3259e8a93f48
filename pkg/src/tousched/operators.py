"""Variation operators for permutation genes.

Both operators are closed over the permutation group: given valid
permutations they return valid permutations, so the decoder never sees a
duplicated or missing code.
"""

from __future__ import annotations

import numpy as np


def pmx_pair(
    parent_a: tuple[int, ...],
    parent_b: tuple[int, ...],
    lo: int,
    hi: int,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Partially matched crossover with explicit inclusive cut points.

    The segment [lo, hi] is swapped between the parents, and genes outside
    the segment that now collide are chased through the segment mapping
    until they land on an unused value.
    """
    if len(parent_a) != len(parent_b):
        raise ValueError("parents must have equal length")
    size = len(parent_a)
    if not (0 <= lo <= hi < size):
        raise ValueError(f"cut points ({lo}, {hi}) out of range for length {size}")

    def build(host: tuple[int, ...], donor: tuple[int, ...]) -> tuple[int, ...]:
        child: list[int | None] = [None] * size
        child[lo : hi + 1] = donor[lo : hi + 1]
        segment = set(donor[lo : hi + 1])
        # donor value -> host value at the same locus, used to chase collisions
        mapping = {donor[i]: host[i] for i in range(lo, hi + 1)}
        for i in list(range(lo)) + list(range(hi + 1, size)):
            gene = host[i]
            while gene in segment:
                gene = mapping[gene]
            child[i] = gene
        return tuple(child)  # type: ignore[arg-type]

    return build(parent_a, parent_b), build(parent_b, parent_a)


def pmx_crossover(
    parent_a: tuple[int, ...],
    parent_b: tuple[int, ...],
    rng: np.random.Generator,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """PMX with two distinct cut points drawn uniformly at random."""
    size = len(parent_a)
    if size < 2:
        return parent_a, parent_b
    lo, hi = sorted(int(v) for v in rng.choice(size, size=2, replace=False))
    return pmx_pair(parent_a, parent_b, lo, hi)


def scramble_mutation(
    perm: tuple[int, ...],
    rng: np.random.Generator,
    max_len: int | None = None,
) -> tuple[int, ...]:
    """Shuffle a short random sub-list in place.

    A window [lo, hi] with at least two genes is drawn; when ``max_len`` is
    given the window is capped at that many genes, which keeps the mutation
    a local perturbation on long permutations.
    """
    size = len(perm)
    if size < 2:
        return perm
    cap = size if max_len is None else max(2, min(max_len, size))
    lo = int(rng.integers(0, size - 1))
    hi = int(rng.integers(lo + 1, min(lo + cap - 1, size - 1) + 1))
    window = list(perm[lo : hi + 1])
    rng.shuffle(window)
    out = list(perm)
    out[lo : hi + 1] = window
    return tuple(out)
