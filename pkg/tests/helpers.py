"""Shared generators for the test suite.

Sequences come from a block construction that satisfies the two-step gap
condition by design: free gaps of at least 1.05 gamma, and close pairs
(gap below gamma0) always fenced by gaps of at least 2.05 gamma, so
every window of two consecutive gaps sums to more than 2 gamma.
"""

from __future__ import annotations

import math

import numpy as np

from ingham import ExponentSequence, SamplingGrid


def block_sequence(
    rng: np.random.Generator,
    nmax: int = 12,
    nmin: int = 3,
    gamma_range=(0.8, 1.6),
    chain_prob: float = 0.4,
) -> ExponentSequence:
    """Random weak-gap sequence with chains, valid by construction."""
    n = int(rng.integers(nmin, nmax + 1))
    gamma = float(rng.uniform(*gamma_range))
    gamma0 = gamma * float(rng.uniform(0.35, 0.95))
    gaps: list[float] = []
    first = True
    while len(gaps) < n - 1:
        if rng.uniform() < chain_prob:
            s = float(rng.uniform(0.05, 0.9)) * gamma0
            big = float(rng.uniform(2.05, 2.6)) * gamma
            if first and rng.uniform() < 0.5:
                gaps.extend([s, big])
            else:
                gaps.extend([big, s, float(rng.uniform(2.05, 2.6)) * gamma])
        else:
            gaps.append(float(rng.uniform(1.05, 2.8)) * gamma)
        first = False
    gaps = gaps[: n - 1]
    omegas = [float(rng.uniform(-2.0, 2.0))]
    for g in gaps:
        omegas.append(omegas[-1] + g)
    return ExponentSequence(tuple(omegas), gamma, gamma0)


def admissible_grid(
    seq: ExponentSequence,
    rng: np.random.Generator | None = None,
    horizon_factor: float = 1.05,
    extra_samples: int = 1,
) -> SamplingGrid:
    """Grid with every exponent inside the band and J*delta above pi/gamma."""
    absmax = max(abs(w) for w in seq.omegas)
    delta = min(0.9 * math.pi / (absmax + seq.gamma / 2.0), 0.5 * math.pi / seq.gamma)
    if rng is not None:
        delta *= float(rng.uniform(0.6, 1.0))
    J = max(
        int(math.ceil(horizon_factor * math.pi / seq.gamma / delta)),
        len(seq) + extra_samples,
    )
    return SamplingGrid(delta, J)


def poisson_delta(seq: ExponentSequence, safety: float = 0.9) -> float:
    """Step small enough that periodization is invisible and the band holds.

    Exactness needs 2 pi/delta >= span + 2 gamma; the band condition needs
    delta <= pi/(max|omega| + gamma/2).
    """
    span = seq.omegas[-1] - seq.omegas[0]
    absmax = max(abs(w) for w in seq.omegas)
    return safety * min(
        2.0 * math.pi / (span + 2.0 * seq.gamma),
        math.pi / (absmax + seq.gamma / 2.0),
    )


def uniform_disc(rng: np.random.Generator) -> complex:
    r = math.sqrt(rng.uniform())
    phi = rng.uniform(0.0, 2.0 * math.pi)
    return complex(r * math.cos(phi), r * math.sin(phi))


def random_coeffs(rng: np.random.Generator, n: int, l1: float | None = None) -> tuple:
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    if l1 is not None:
        c = c * (l1 / np.sum(np.abs(c)))
    return tuple(c)
