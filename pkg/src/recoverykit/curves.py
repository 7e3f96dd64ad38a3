"""Discount and hazard curves with closed-form credit integrals.

Both curve types are immutable and piecewise-exponential: the discount curve
interpolates log-linearly in the discount factor (constant instantaneous
forward rate on each pillar interval) and the hazard curve carries a
piecewise-constant default intensity. The product Z(u) * Q(u) is therefore a
single exponential on every interval of the merged time grid, so the two
integrals every pricer needs,

    risky_annuity(T)       = integral_0^T Z(u) * Q(u) du
    protection_integral(T) = integral_0^T Z(u) * h(u) * Q(u) du,

evaluate segment-by-segment in closed form. Time is a plain year fraction;
there are no calendars and valuation sits at time 0.
"""

from __future__ import annotations

import csv
import io
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import IO

from ._textio import read_text
from .errors import ConstructionError, DomainError, ParseError

DISCOUNT_CSV_HEADER = ("time_years", "discount_factor")


@dataclass(frozen=True)
class DiscountCurve:
    """Riskless zero-coupon discount factors Z(0, t) on year-fraction pillars.

    Pillars must start at (0, 1), have strictly increasing times and
    non-increasing factors in (0, 1], so instantaneous forward rates are
    never negative. A leading (0, 1) pillar is supplied automatically when
    the first given pillar has a positive time.
    """

    pillars: tuple[tuple[float, float], ...]

    def __post_init__(self):
        try:
            cleaned = tuple((float(t), float(df)) for t, df in self.pillars)
        except (TypeError, ValueError) as exc:
            raise ConstructionError(f"malformed discount pillars: {exc}") from exc
        if len(cleaned) < 1:
            raise ConstructionError("a discount curve needs at least one pillar")
        if cleaned[0][0] != 0.0:
            if cleaned[0][0] < 0.0:
                raise ConstructionError("pillar times must be non-negative")
            cleaned = ((0.0, 1.0),) + cleaned
        if cleaned[0][1] != 1.0:
            raise ConstructionError("the discount factor at time 0 must be exactly 1")
        for (t0, d0), (t1, d1) in zip(cleaned, cleaned[1:]):
            if not t1 > t0:
                raise ConstructionError(f"pillar times must be strictly increasing, got {t0} then {t1}")
            if not 0.0 < d1 <= 1.0:
                raise ConstructionError(f"discount factor {d1} at time {t1} outside (0, 1]")
            if d1 > d0:
                raise ConstructionError(
                    f"discount factors must be non-increasing (negative forward rate on [{t0}, {t1}])"
                )
        object.__setattr__(self, "pillars", cleaned)
        object.__setattr__(self, "_times", tuple(t for t, _ in cleaned))
        object.__setattr__(self, "_factors", tuple(d for _, d in cleaned))
        object.__setattr__(
            self,
            "_forwards",
            tuple(
                math.log(d0 / d1) / (t1 - t0)
                for (t0, d0), (t1, d1) in zip(cleaned, cleaned[1:])
            ),
        )

    @classmethod
    def flat(cls, rate: float, horizon: float) -> "DiscountCurve":
        """Curve with a single constant continuously-compounded rate out to *horizon*."""
        if horizon <= 0.0:
            raise ConstructionError("flat curve horizon must be positive")
        if rate < 0.0:
            raise ConstructionError("a negative flat rate would make discount factors increase")
        return cls(((0.0, 1.0), (float(horizon), math.exp(-rate * horizon))))

    @classmethod
    def from_csv(cls, source: str | bytes | IO) -> "DiscountCurve":
        """Parse pillars from CSV with header ``time_years,discount_factor``.

        The time-0 row is optional (implied as 1.0); non-monotone times are
        rejected by construction.
        """
        rows = list(csv.reader(io.StringIO(read_text(source))))
        if not rows or tuple(cell.strip() for cell in rows[0]) != DISCOUNT_CSV_HEADER:
            raise ParseError(
                f"discount CSV must start with header {','.join(DISCOUNT_CSV_HEADER)}"
            )
        pillars: list[tuple[float, float]] = []
        problems: list[str] = []
        for number, row in enumerate(rows[1:], start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                problems.append(f"row {number}: expected 2 fields, got {len(row)}")
                continue
            try:
                pillars.append((float(row[0]), float(row[1])))
            except ValueError:
                problems.append(f"row {number}: non-numeric field")
        if problems:
            raise ParseError("invalid discount CSV", problems)
        if not pillars:
            raise ParseError("discount CSV contains no pillars")
        return cls(tuple(pillars))

    @property
    def horizon(self) -> float:
        """Latest time the curve can be queried at."""
        return self._times[-1]

    def _require_in_domain(self, u: float) -> None:
        if not 0.0 <= u <= self.horizon:
            raise DomainError(f"time {u} outside discount curve domain [0, {self.horizon}]")

    def discount_factor(self, u: float) -> float:
        """Z(0, u); exact at pillars, constant-forward interpolated between them."""
        self._require_in_domain(u)
        index = bisect_right(self._times, u) - 1
        if index >= len(self._times) - 1 or u == self._times[index]:
            return self._factors[min(index, len(self._times) - 1)]
        return self._factors[index] * math.exp(-self._forwards[index] * (u - self._times[index]))

    def forward_rate(self, u: float) -> float:
        """Instantaneous forward rate on the pillar interval containing *u*."""
        self._require_in_domain(u)
        if not self._forwards:
            raise DomainError("a single-pillar curve has no forward interval")
        return self._forwards[min(bisect_right(self._times, u) - 1, len(self._forwards) - 1)]


@dataclass(frozen=True)
class HazardCurve:
    """Piecewise-constant default intensity; survival Q(0, u) = exp(-int_0^u h).

    Segments are (end_time, hazard) pairs with strictly increasing positive
    end times; the first segment starts at time 0. Queries beyond the last
    end time raise a DomainError unless the curve was built with
    ``extrapolate=True``, in which case the last hazard extends flat.
    """

    segments: tuple[tuple[float, float], ...]
    extrapolate: bool = False

    def __post_init__(self):
        try:
            cleaned = tuple((float(end), float(hz)) for end, hz in self.segments)
        except (TypeError, ValueError) as exc:
            raise ConstructionError(f"malformed hazard segments: {exc}") from exc
        if len(cleaned) < 1:
            raise ConstructionError("a hazard curve needs at least one segment")
        previous = 0.0
        for end, hazard in cleaned:
            if not end > previous:
                raise ConstructionError(f"segment end times must be strictly increasing, got {end} after {previous}")
            if not math.isfinite(hazard) or hazard < 0.0:
                raise ConstructionError(f"hazard {hazard} on segment ending {end} must be finite and >= 0")
            previous = end
        object.__setattr__(self, "segments", cleaned)
        object.__setattr__(self, "_ends", tuple(end for end, _ in cleaned))
        object.__setattr__(self, "_hazards", tuple(hz for _, hz in cleaned))
        cumulative: list[float] = []
        total = 0.0
        start = 0.0
        for end, hazard in cleaned:
            total += hazard * (end - start)
            cumulative.append(total)
            start = end
        object.__setattr__(self, "_cumulative", tuple(cumulative))

    @classmethod
    def flat(cls, hazard: float, horizon: float, extrapolate: bool = False) -> "HazardCurve":
        """Single-segment curve with constant intensity out to *horizon*."""
        return cls(((float(horizon), float(hazard)),), extrapolate)

    @property
    def horizon(self) -> float:
        """Last calibrated segment end time."""
        return self._ends[-1]

    def hazard_rate(self, u: float) -> float:
        """Intensity applying immediately after time *u*."""
        if u < 0.0:
            raise DomainError(f"time {u} is negative")
        index = bisect_right(self._ends, u)
        if index >= len(self._ends):
            if self.extrapolate:
                return self._hazards[-1]
            raise DomainError(f"time {u} beyond hazard curve horizon {self.horizon} (extrapolation off)")
        return self._hazards[index]

    def cumulative_hazard(self, u: float) -> float:
        """int_0^u h(s) ds in closed form over the piecewise-constant segments."""
        if u < 0.0:
            raise DomainError(f"time {u} is negative")
        if u > self.horizon:
            if not self.extrapolate:
                raise DomainError(f"time {u} beyond hazard curve horizon {self.horizon} (extrapolation off)")
            return self._cumulative[-1] + self._hazards[-1] * (u - self.horizon)
        index = bisect_left(self._ends, u)
        start = self._ends[index - 1] if index > 0 else 0.0
        base = self._cumulative[index - 1] if index > 0 else 0.0
        return base + self._hazards[index] * (u - start)

    def survival_probability(self, u: float) -> float:
        """Q(0, u) = exp(-cumulative_hazard(u)); 1 at time 0, non-increasing."""
        return math.exp(-self.cumulative_hazard(u))


@dataclass(frozen=True)
class TimeGrid:
    """Merged breakpoints of both curves' intervals covering [0, maturity]."""

    points: tuple[float, ...]

    def __post_init__(self):
        points = tuple(float(p) for p in self.points)
        if not points or points[0] != 0.0:
            raise ConstructionError("time grid must start at 0")
        if any(not b > a for a, b in zip(points, points[1:])):
            raise ConstructionError("time grid points must be strictly increasing")
        object.__setattr__(self, "points", points)

    @classmethod
    def merge(cls, discount: DiscountCurve, hazard: HazardCurve, maturity: float) -> "TimeGrid":
        """Union of curve breakpoints inside (0, maturity), plus both endpoints."""
        if maturity < 0.0:
            raise DomainError("maturity must be non-negative")
        points = {0.0, float(maturity)}
        points.update(t for t in discount._times if 0.0 < t < maturity)
        points.update(t for t in hazard._ends if 0.0 < t < maturity)
        return cls(tuple(sorted(points)))


def annuity_and_protection(
    discount: DiscountCurve, hazard: HazardCurve, maturity: float
) -> tuple[float, float]:
    """Risky annuity and unit-notional protection integral over [0, maturity].

    On each merged-grid interval the integrand is w * exp(-(f + h) * s) with
    w = Z * Q entering the interval, so both integrals close form as
    w * (1 - exp(-(f + h) * dt)) / (f + h), the protection leg carrying an
    extra factor h. The f + h = 0 interval uses the linear limit w * dt.
    """
    if maturity < 0.0:
        raise DomainError("maturity must be non-negative")
    if maturity > discount.horizon:
        raise DomainError(f"maturity {maturity} beyond discount curve horizon {discount.horizon}")
    if maturity > hazard.horizon and not hazard.extrapolate:
        raise DomainError(f"maturity {maturity} beyond hazard curve horizon {hazard.horizon} (extrapolation off)")
    grid = TimeGrid.merge(discount, hazard, maturity).points
    annuity = 0.0
    protection = 0.0
    weight = 1.0
    for start, end in zip(grid, grid[1:]):
        dt = end - start
        forward = discount.forward_rate(start)
        intensity = hazard.hazard_rate(start)
        decay = forward + intensity
        exponent = decay * dt
        piece = dt if exponent == 0.0 else -math.expm1(-exponent) / decay
        annuity += weight * piece
        protection += weight * intensity * piece
        weight *= math.exp(-exponent)
    return annuity, protection


def risky_annuity(discount: DiscountCurve, hazard: HazardCurve, maturity: float) -> float:
    """Present value of a 1/year premium stream paid while the name survives."""
    return annuity_and_protection(discount, hazard, maturity)[0]


def protection_integral(discount: DiscountCurve, hazard: HazardCurve, maturity: float) -> float:
    """Price of a unit-notional zero-recovery protection leg, continuous settlement."""
    return annuity_and_protection(discount, hazard, maturity)[1]
