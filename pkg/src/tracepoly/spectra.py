"""
Real spectra, realizability conditions and nonnegative realizing matrices.

Everything here is exact: eigenvalues are ``Fraction`` values and the
characteristic polynomial of a candidate realizing matrix is computed by
rational Hessenberg reduction, never by a floating eigensolver.

Restricted class
----------------
A normalized spectrum whose value 1 has multiplicity ``k`` and whose other
values are all strictly negative is realizable exactly when it splits into
``k`` Suleimanova parts, i.e. when its negatives can be packed into ``k``
groups each summing to at least -1. ``decide_restricted_realizable``
settles that packing question by exhaustive branch and bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ._rational import as_fraction, parse_list

__all__ = [
    "Spectrum",
    "NecessaryReport",
    "PartitionCertificate",
    "NotRealizable",
    "NonnegMatrix",
    "RestrictedClassError",
    "s1",
    "spectral_radius",
    "check_necessary",
    "is_normalized",
    "normalize",
    "project",
    "is_suleimanova",
    "gen_odd_nonrealizable",
    "gen_even_nonrealizable",
    "restricted_class_violation",
    "decide_restricted_realizable",
    "elementary_symmetric",
    "poly_from_roots",
    "companion_matrix",
    "companion_realize",
    "realize_union",
    "charpoly",
    "verify_realization",
]


@dataclass(frozen=True, init=False)
class Spectrum:
    """A nonempty multiset of real eigenvalues, kept sorted nonincreasing."""

    values: tuple[Fraction, ...]

    def __init__(self, values: Iterable) -> None:
        vals = sorted((as_fraction(v) for v in values), reverse=True)
        if not vals:
            raise ValueError("a spectrum must be nonempty")
        object.__setattr__(self, "values", tuple(vals))

    @classmethod
    def parse(cls, text: str) -> "Spectrum":
        """Build from a comma-separated list such as ``"1,1,-2/3"``."""
        return cls(parse_list(text))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self.values) + "}"

    def to_json(self) -> list[str]:
        return [str(v) for v in self.values]


@dataclass(frozen=True)
class NecessaryReport:
    perron_ok: bool
    trace_ok: bool

    @property
    def ok(self) -> bool:
        return self.perron_ok and self.trace_ok


class RestrictedClassError(ValueError):
    """The spectrum lies outside the class the realizability decider covers.

    ``violation`` names the failed hypothesis: one of ``not_normalized``,
    ``perron``, ``positive_non_unit``, ``zero_eigenvalue`` or
    ``negative_trace``.
    """

    def __init__(self, violation: str, message: str) -> None:
        super().__init__(message)
        self.violation = violation


def s1(sigma: Spectrum) -> Fraction:
    """Trace sum of the spectrum."""
    return sum(sigma.values, Fraction(0))


def spectral_radius(sigma: Spectrum) -> Fraction:
    return max(abs(v) for v in sigma.values)


def check_necessary(sigma: Spectrum) -> NecessaryReport:
    """Perron condition (spectral radius is an eigenvalue) and trace condition."""
    return NecessaryReport(
        perron_ok=spectral_radius(sigma) in sigma.values,
        trace_ok=s1(sigma) >= 0,
    )


def is_normalized(sigma: Spectrum) -> bool:
    return sigma.values[0] == 1 and sigma.values[-1] >= -1


def normalize(sigma: Spectrum) -> Spectrum:
    """Scale by the spectral radius so the leading eigenvalue becomes 1."""
    rho = spectral_radius(sigma)
    if rho == 0:
        raise ValueError("cannot normalize the all-zero spectrum")
    if not check_necessary(sigma).perron_ok:
        raise ValueError(
            f"spectral radius {rho} is not an eigenvalue of {sigma}; "
            "scaling cannot produce a leading 1"
        )
    return Spectrum(v / rho for v in sigma.values)


def project(sigma: Spectrum) -> tuple[Fraction, ...]:
    """Drop the leading 1 of a normalized spectrum."""
    if not is_normalized(sigma):
        raise ValueError(f"{sigma} is not normalized")
    return sigma.values[1:]


def is_suleimanova(sigma: Spectrum) -> bool:
    """Normalized, nonnegative trace, and 1 is the only positive value."""
    vals = sigma.values
    return vals[0] == 1 and all(v <= 0 for v in vals[1:]) and s1(sigma) >= 0


def gen_odd_nonrealizable(k: int) -> Spectrum:
    """``k`` ones and ``k+1`` copies of ``-k/(k+1)``: trace zero, not realizable."""
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    return Spectrum([1] * k + [Fraction(-k, k + 1)] * (k + 1))


def gen_even_nonrealizable(k: int) -> Spectrum:
    """``k`` ones, ``-1/(2k+1)`` and ``k+1`` copies of ``(1-2k)/(2k+1)``."""
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    d = 2 * k + 1
    return Spectrum([1] * k + [Fraction(-1, d)] + [Fraction(1 - 2 * k, d)] * (k + 1))


# -- restricted-class decider -------------------------------------------------


@dataclass(frozen=True)
class PartitionCertificate:
    """A split of a spectrum into Suleimanova parts."""

    parts: tuple[Spectrum, ...]

    def union(self) -> Spectrum:
        return Spectrum(v for part in self.parts for v in part)

    def check(self, sigma: Spectrum) -> bool:
        """True iff the parts are Suleimanova and their union is ``sigma``."""
        return all(is_suleimanova(p) for p in self.parts) and self.union() == sigma

    def to_json(self) -> list[list[str]]:
        return [p.to_json() for p in self.parts]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]]) -> "PartitionCertificate":
        return cls(tuple(Spectrum(part) for part in data))


@dataclass(frozen=True)
class NotRealizable:
    """Exhaustive search found no Suleimanova partition."""

    spectrum: Spectrum
    groups: int
    negatives: int
    nodes: int

    def __bool__(self) -> bool:
        return False

    @property
    def reason(self) -> str:
        return (
            f"no split of {self.negatives} negative eigenvalues into "
            f"{self.groups} groups with each group sum >= -1"
        )


def restricted_class_violation(sigma: Spectrum) -> RestrictedClassError | None:
    """Return why ``sigma`` is outside the decider's class, or None if inside."""
    vals = sigma.values
    if vals[0] != 1:
        return RestrictedClassError("not_normalized", f"leading eigenvalue is {vals[0]}, not 1")
    if vals[-1] < -1:
        return RestrictedClassError(
            "perron", f"{vals[-1]} has modulus above 1, so 1 is not the spectral radius"
        )
    rest = [v for v in vals if v != 1]
    if any(v > 0 for v in rest):
        return RestrictedClassError(
            "positive_non_unit", "a positive eigenvalue other than 1 is present"
        )
    if any(v == 0 for v in rest):
        return RestrictedClassError("zero_eigenvalue", "zero eigenvalues are not allowed")
    if s1(sigma) < 0:
        return RestrictedClassError("negative_trace", f"trace sum {s1(sigma)} is negative")
    return None


def _pack(sizes: list[int], capacity: int, bins: int) -> tuple[list[int] | None, int]:
    """Assign integer ``sizes`` (nonincreasing) to ``bins`` bins of ``capacity``.

    Returns ``(assignment, nodes)``; the assignment is None when none exists.
    """
    m = len(sizes)
    loads = [0] * bins
    where = [0] * m
    suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] + sizes[i]
    nodes = 0

    def place(i: int) -> bool:
        nonlocal nodes
        nodes += 1
        if i == m:
            return True
        # space too small for the smallest remaining item is dead
        smallest = sizes[-1]
        usable = sum(capacity - ld for ld in loads if capacity - ld >= smallest)
        if usable < suffix[i]:
            return False
        size = sizes[i]
        seen = set()
        for j in range(bins):
            ld = loads[j]
            if ld in seen or ld + size > capacity:
                continue
            seen.add(ld)
            loads[j] = ld + size
            where[i] = j
            if place(i + 1):
                return True
            loads[j] = ld
        return False

    return (where if place(0) else None), nodes


def decide_restricted_realizable(sigma: Spectrum) -> PartitionCertificate | NotRealizable:
    """Decide realizability of a spectrum ``{1 x k, negatives}``.

    Returns a ``PartitionCertificate`` when the negatives split into ``k``
    groups with sums ``>= -1`` and ``NotRealizable`` when exhaustive search
    rules that out. Raises ``RestrictedClassError`` outside the class.
    """
    err = restricted_class_violation(sigma)
    if err is not None:
        raise err
    k = sigma.values.count(Fraction(1))
    if k == 1:
        return PartitionCertificate((sigma,))

    # largest magnitude first, scaled to integers
    negatives = sorted(v for v in sigma.values if v != 1)
    denom = math.lcm(*(v.denominator for v in negatives)) if negatives else 1
    sizes = [int(-v * denom) for v in negatives]
    where, nodes = _pack(sizes, denom, k)
    if where is None:
        return NotRealizable(sigma, groups=k, negatives=len(negatives), nodes=nodes)
    groups: list[list[Fraction]] = [[Fraction(1)] for _ in range(k)]
    for v, j in zip(negatives, where):
        groups[j].append(v)
    return PartitionCertificate(tuple(Spectrum(g) for g in groups))


# -- realizing matrices -------------------------------------------------------


@dataclass(frozen=True, init=False)
class NonnegMatrix:
    """Square matrix with exact nonnegative entries."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __init__(self, entries: Iterable[Iterable]) -> None:
        rows = tuple(tuple(as_fraction(x) for x in row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        if any(x < 0 for r in rows for x in r):
            raise ValueError("matrix has a negative entry")
        object.__setattr__(self, "entries", rows)

    @property
    def order(self) -> int:
        return len(self.entries)

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.entries]


def elementary_symmetric(values: Sequence) -> list[Fraction]:
    """``[e_0, e_1, ..., e_n]`` of the given values."""
    e = [Fraction(1)] + [Fraction(0)] * len(values)
    for j, v in enumerate(values, start=1):
        v = as_fraction(v)
        for i in range(j, 0, -1):
            e[i] += v * e[i - 1]
    return e


def poly_from_roots(roots: Sequence) -> list[Fraction]:
    """Coefficients of ``prod (t - r)``, highest degree first (monic)."""
    coeffs = [Fraction(1)]
    for r in roots:
        r = as_fraction(r)
        # multiply by (t - r)
        coeffs = [a - r * b for a, b in zip(coeffs + [Fraction(0)], [Fraction(0)] + coeffs)]
    return coeffs


def companion_matrix(coeffs: Sequence[Fraction]) -> list[list[Fraction]]:
    """Bottom-row companion of a monic polynomial given highest degree first.

    Ones on the superdiagonal; the last row is ``(-c_0, -c_1, ..., -c_{n-1})``
    for ``p(t) = t^n + c_{n-1} t^{n-1} + ... + c_0``.
    """
    if not coeffs or coeffs[0] != 1:
        raise ValueError("polynomial must be monic")
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("polynomial must have degree >= 1")
    low_first = list(reversed(coeffs[1:]))
    mat = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n - 1):
        mat[i][i + 1] = Fraction(1)
    mat[n - 1] = [-c for c in low_first]
    return mat


def companion_realize(sigma: Spectrum) -> NonnegMatrix:
    """Nonnegative companion matrix with spectrum ``sigma`` (Suleimanova only)."""
    if not is_suleimanova(sigma):
        raise ValueError(f"{sigma} is not a Suleimanova spectrum")
    mat = companion_matrix(poly_from_roots(sigma.values))
    if any(x < 0 for x in mat[-1]):
        raise AssertionError(f"companion matrix of Suleimanova spectrum {sigma} has a negative entry")
    return NonnegMatrix(mat)


def realize_union(cert: PartitionCertificate) -> NonnegMatrix:
    """Block-diagonal direct sum of each part's companion matrix."""
    blocks = [companion_realize(p).entries for p in cert.parts]
    n = sum(len(b) for b in blocks)
    mat = [[Fraction(0)] * n for _ in range(n)]
    offset = 0
    for b in blocks:
        for i, row in enumerate(b):
            mat[offset + i][offset : offset + len(row)] = row
        offset += len(b)
    return NonnegMatrix(mat)


def _hessenberg(a: list[list[Fraction]]) -> list[list[Fraction]]:
    # similarity reduction to upper Hessenberg form by Gaussian elimination
    n = len(a)
    h = [row[:] for row in a]
    for j in range(n - 2):
        pivot = next((i for i in range(j + 1, n) if h[i][j] != 0), None)
        if pivot is None:
            continue
        p = j + 1
        if pivot != p:
            h[pivot], h[p] = h[p], h[pivot]
            for row in h:
                row[pivot], row[p] = row[p], row[pivot]
        for r in range(j + 2, n):
            if h[r][j] == 0:
                continue
            m = h[r][j] / h[p][j]
            hr, hp = h[r], h[p]
            for c in range(j, n):
                if hp[c]:
                    hr[c] -= m * hp[c]
            for row in h:
                if row[r]:
                    row[p] += m * row[r]
    return h


def charpoly(matrix) -> list[Fraction]:
    """Exact characteristic polynomial ``det(tI - A)``, highest degree first."""
    rows = matrix.entries if isinstance(matrix, NonnegMatrix) else matrix
    a = [[as_fraction(x) for x in row] for row in rows]
    n = len(a)
    h = _hessenberg(a)
    # polys[k] = charpoly of the leading k x k block, stored low degree first
    polys: list[list[Fraction]] = [[Fraction(1)]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        d = h[k - 1][k - 1]
        p = [Fraction(0)] + prev
        for i, c in enumerate(prev):
            p[i] -= d * c
        prod = Fraction(1)
        for i in range(k - 1, 0, -1):
            prod *= h[i][i - 1]
            if prod == 0:
                break
            coef = h[i - 1][k - 1] * prod
            if coef:
                for t, c in enumerate(polys[i - 1]):
                    p[t] -= coef * c
        polys.append(p)
    return list(reversed(polys[n]))


def verify_realization(matrix: NonnegMatrix, sigma: Spectrum) -> bool:
    """True iff ``matrix`` has exactly the spectrum ``sigma``.

    Compares the characteristic polynomial against the signed elementary
    symmetric functions of the eigenvalues.
    """
    if matrix.order != len(sigma):
        raise ValueError(f"matrix order {matrix.order} != spectrum size {len(sigma)}")
    e = elementary_symmetric(sigma.values)
    expected = [(-1) ** j * ej for j, ej in enumerate(e)]
    return charpoly(matrix) == expected
