"""
The trace-nonnegative polytope and its complex analogue.

``T^n = {x in [-1, 1]^n : 1 + sum(x) >= 0}`` holds the projections of all
normalized spectra of nonnegative matrices of order ``n + 1``. Its volume
is ``2^n * P(Y >= -1)`` with ``Y`` a sum of ``n`` U[-1, 1] variables, which
``exact_volume`` evaluates in closed form.

Monte Carlo estimators draw points on the midpoint lattice
``{(2u + 1 - 2^B) / 2^B : 0 <= u < 2^B}`` with ``B = LATTICE_BITS``. Each
coordinate is an exact dyadic rational, so the membership test runs in
integer arithmetic and agrees with ``contains`` on every sample. The
lattice departs from the continuous uniform law by at most ``2^-B`` per
coordinate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from ._rational import as_fraction
from .distributions import UniformSumParams, us_cdf

__all__ = [
    "GENERATOR",
    "LATTICE_BITS",
    "CHUNK",
    "TracePolytope",
    "ComplexRegionParams",
    "MCEstimate",
    "PiMultiple",
    "contains",
    "exact_volume",
    "ambient_volume",
    "mc_volume",
    "mc_volume_complex",
    "cube_chunks",
    "complex_chunks",
    "lattice_to_fraction",
]

GENERATOR = "PCG64"
LATTICE_BITS = 31
CHUNK = 1 << 17

_SCALE = 1 << LATTICE_BITS


@dataclass(frozen=True)
class TracePolytope:
    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise TypeError("n must be an int")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")


@dataclass(frozen=True)
class ComplexRegionParams:
    """``r`` real eigenvalues besides the Perron root and ``c`` conjugate pairs."""

    r: int
    c: int

    def __post_init__(self) -> None:
        if self.r < 0 or self.c < 0:
            raise ValueError("r and c must be nonnegative")
        if self.r + self.c < 1:
            raise ValueError("need r + c >= 1")


@dataclass(frozen=True)
class PiMultiple:
    """The exact number ``coefficient * pi**power``."""

    coefficient: Fraction
    power: int

    def __float__(self) -> float:
        return float(self.coefficient) * math.pi**self.power

    def __str__(self) -> str:
        if self.power == 0:
            return str(self.coefficient)
        pi = "pi" if self.power == 1 else f"pi^{self.power}"
        return pi if self.coefficient == 1 else f"{self.coefficient}*{pi}"


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    generator: str = GENERATOR
    hits: int = 0

    def within(self, target: float, k: float) -> bool:
        return abs(self.mean - target) <= k * self.std_error

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "samples": self.samples,
            "hits": self.hits,
            "seed": self.seed,
            "generator": self.generator,
        }


def contains(polytope: TracePolytope, point: Sequence) -> bool:
    """Closed membership test for ``T^n``."""
    if len(point) != polytope.n:
        raise ValueError(
            f"point has {len(point)} coordinates, polytope dimension is {polytope.n}"
        )
    xs = [as_fraction(v) for v in point]
    return all(abs(v) <= 1 for v in xs) and 1 + sum(xs) >= 0


def exact_volume(n: int) -> Fraction:
    """Exact volume of the ``n``-dimensional trace-nonnegative polytope."""
    TracePolytope(n)
    half = Fraction(n - 1, 2)
    tail = sum(
        (-1) ** k * math.comb(n, k) * (half - k) ** n for k in range((n - 1) // 2 + 1)
    )
    volume = 2**n * (1 - Fraction(tail) / math.factorial(n))
    via_cdf = 2**n * (1 - us_cdf(UniformSumParams(n, -1, 1), -1))
    assert volume == via_cdf, f"closed form disagrees with 2^n (1 - F(-1)) at n={n}"
    return volume


def ambient_volume(region) -> Fraction | PiMultiple:
    """Volume of the box (or box times disks) a region is sampled from.

    An int ``n`` or a ``TracePolytope`` means the cube ``[-1, 1]^n``; a
    ``ComplexRegionParams`` means ``[-1, 1]^r`` times ``c`` unit disks.
    """
    if isinstance(region, ComplexRegionParams):
        return PiMultiple(Fraction(2**region.r), region.c)
    n = region.n if isinstance(region, TracePolytope) else int(region)
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    return Fraction(2**n)


def lattice_to_fraction(m) -> Fraction:
    """Exact value of a lattice coordinate returned by the chunk iterators."""
    return Fraction(int(m), _SCALE)


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 1 << 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return seed


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    # one independent stream per chunk; merging is order-free
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _chunk_sizes(samples: int) -> list[int]:
    full, rest = divmod(samples, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _lattice(rng: np.random.Generator, shape) -> np.ndarray:
    u = rng.integers(0, _SCALE, size=shape, dtype=np.int64)
    return 2 * u + 1 - _SCALE


def _disk_lattice(rng: np.random.Generator, size: int) -> np.ndarray:
    # rejection from the square, closed disk: mu^2 + nu^2 <= 1
    out = np.empty((0, 2), dtype=np.int64)
    while len(out) < size:
        need = size - len(out)
        draw = _lattice(rng, (need + need // 3 + 64, 2))
        ok = draw[:, 0] * draw[:, 0] + draw[:, 1] * draw[:, 1] <= _SCALE * _SCALE
        out = np.concatenate([out, draw[ok]])
    return out[:size]


def _cube_chunk(n: int, seed: int, index: int, size: int):
    pts = _lattice(_chunk_rng(seed, index), (size, n))
    return pts, _SCALE + pts.sum(axis=1) >= 0


def _complex_chunk(params: ComplexRegionParams, seed: int, index: int, size: int):
    rng = _chunk_rng(seed, index)
    lam = _lattice(rng, (size, params.r))
    pairs = np.empty((size, params.c, 2), dtype=np.int64)
    for j in range(params.c):
        pairs[:, j, :] = _disk_lattice(rng, size)
    trace = _SCALE + lam.sum(axis=1) + 2 * pairs[:, :, 0].sum(axis=1)
    return lam, pairs, trace >= 0


def cube_chunks(n: int, samples: int, seed: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(lattice points, hit mask)`` per chunk, as ``mc_volume`` sees them.

    Coordinates are integers ``m`` standing for ``m / 2**LATTICE_BITS``.
    """
    seed = _check_seed(seed)
    for i, size in enumerate(_chunk_sizes(samples)):
        yield _cube_chunk(n, seed, i, size)


def complex_chunks(params: ComplexRegionParams, samples: int, seed: int):
    """Yield ``(real coords, (mu, nu) pairs, hit mask)`` per chunk."""
    seed = _check_seed(seed)
    for i, size in enumerate(_chunk_sizes(samples)):
        yield _complex_chunk(params, seed, i, size)


def _count_hits(job, count: int, workers: int | None) -> int:
    if workers is None or workers <= 1 or count <= 1:
        return sum(job(i) for i in range(count))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(job, range(count)))


def _estimate(hits: int, samples: int, seed: int, volume: float) -> MCEstimate:
    p = hits / samples
    return MCEstimate(
        mean=volume * p,
        std_error=volume * math.sqrt(p * (1 - p) / samples),
        samples=samples,
        seed=seed,
        hits=hits,
    )


def mc_volume(n: int, samples: int, seed: int, workers: int | None = None) -> MCEstimate:
    """Hit-or-miss estimate of ``vol(T^n)`` from uniform points in ``[-1, 1]^n``.

    The result depends only on ``(n, samples, seed)``, not on ``workers``.
    """
    TracePolytope(n)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    seed = _check_seed(seed)
    sizes = _chunk_sizes(samples)

    def job(i: int) -> int:
        return int(_cube_chunk(n, seed, i, sizes[i])[1].sum())

    hits = _count_hits(job, len(sizes), workers)
    return _estimate(hits, samples, seed, float(2**n))


def mc_volume_complex(
    params: ComplexRegionParams, samples: int, seed: int, workers: int | None = None
) -> MCEstimate:
    """Hit-or-miss estimate of the complex trace-nonnegative region's volume.

    Real coordinates are uniform on ``[-1, 1]``, each ``(mu, nu)`` pair is
    uniform on the closed unit disk, and a sample is a hit when
    ``1 + sum(lambda) + 2 sum(mu) >= 0``. The ``nu`` draws never enter the
    constraint.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    seed = _check_seed(seed)
    sizes = _chunk_sizes(samples)

    def job(i: int) -> int:
        return int(_complex_chunk(params, seed, i, sizes[i])[2].sum())

    hits = _count_hits(job, len(sizes), workers)
    return _estimate(hits, samples, seed, float(ambient_volume(params)))
