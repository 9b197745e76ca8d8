"""Plane testers for tensor-power codes and their robustness.

The plane tester draws a uniformly random axis-aligned plane of an m-axis
word (m >= 3) and inspects its view, a candidate member of the (m-1)-fold
power. Composing testers stage by stage down to a two-axis view yields a
tester that reads only n^2 of the n^m coordinates; its rejection
probability against any word is at least a positive constant times the
word's relative distance from the code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from .errors import CapacityError, ShapeError
from .linear_code import LinearCode
from .tensor_code import PlaneIndex, TensorCode, TensorWord, all_planes

AXIS_MODES = ("all", "first-three")


def _tester_axes(level: int, axis_mode: str) -> tuple[int, ...]:
    if axis_mode not in AXIS_MODES:
        raise ValueError(f"axis_mode must be one of {AXIS_MODES}, got {axis_mode!r}")
    count = level if axis_mode == "all" else min(3, level)
    return tuple(range(1, count + 1))


def is_square_member(base: LinearCode, mat: np.ndarray) -> bool:
    """Membership of an n x n array in the 2-fold power of ``base``."""
    p = base.p
    return not ((mat @ base.H.T) % p).any() and not ((base.H @ mat) % p).any()


class PlaneTester:
    """Uniformly random plane of an m-axis word, m >= 3.

    ``axis_mode`` selects which axes the plane may be orthogonal to:
    "all" uses every axis (the reading the robustness analysis relies on),
    "first-three" restricts to axes 1..3 so both readings can be measured.
    """

    def __init__(self, code: TensorCode, axis_mode: str = "all"):
        if code.m < 3:
            raise ShapeError(f"the plane tester needs m >= 3, got m = {code.m}")
        self.code = code
        self.axis_mode = axis_mode
        self.axes = _tester_axes(code.m, axis_mode)

    def planes(self) -> list[PlaneIndex]:
        return all_planes(self.code.m, self.code.n, self.axes)

    def sample(self, rng: np.random.Generator) -> PlaneIndex:
        axis = self.axes[int(rng.integers(0, len(self.axes)))]
        coord = int(rng.integers(0, self.code.n))
        return PlaneIndex(axis, coord)


def robustness_lower_bound(code: TensorCode) -> Fraction:
    """Proven robustness of the plane tester: (d/n)^m / (2 m^2)."""
    d = code.base.minimum_distance()
    m, n = code.m, code.n
    return Fraction(d**m, 2 * m * m * n**m)


def composed_robustness_bound(code: TensorCode) -> Fraction:
    """Product of the per-stage robustness bounds for levels m down to 3."""
    if code.m < 3:
        raise ShapeError(f"composition needs m >= 3, got m = {code.m}")
    bound = Fraction(1)
    for level in range(3, code.m + 1):
        bound *= robustness_lower_bound(TensorCode(code.base, level))
    return bound


def robustness_exact(word: TensorWord, code: TensorCode, axis_mode: str = "all") -> Fraction:
    """Expected relative local distance of a random plane view, exactly.

    Every plane view's distance to the (m-1)-fold power is computed with
    the exhaustive nearest-codeword oracle on the flattened subcode.
    """
    code.check_shape(word)
    if code.m < 3:
        raise ShapeError(f"the plane tester needs m >= 3, got m = {code.m}")
    axes = _tester_axes(code.m, axis_mode)
    sub_flat = code.sub().flattened()
    views = np.stack(
        [
            np.take(word.entries, coord, axis=axis - 1).reshape(-1)
            for axis in axes
            for coord in range(code.n)
        ]
    )
    _, dists, _ = sub_flat.nearest_batch(views)
    return Fraction(int(dists.sum()), views.shape[0] * sub_flat.n)


@dataclass
class ViewOutcome:
    """One composed-tester draw: the surviving two-axis slice of the word.

    ``fixed`` maps each collapsed original axis to the chosen coordinate;
    ``free_axes`` are the two surviving original axes in ascending order.
    """

    fixed: dict[int, int]
    free_axes: tuple[int, int]
    view: TensorWord
    consistent: bool
    local_distance: Fraction | None = None

    def points(self) -> list[tuple[int, ...]]:
        """The n^2 absolute coordinates read by this draw."""
        m = len(self.fixed) + 2
        n = self.view.n
        out = []
        a, b = self.free_axes
        for i in range(n):
            for j in range(n):
                coords = [0] * m
                for axis, value in self.fixed.items():
                    coords[axis - 1] = value
                coords[a - 1] = i
                coords[b - 1] = j
                out.append(tuple(coords))
        return out


class ComposedTester:
    """Stagewise plane sampling from level m down to a two-axis view.

    Stage j applies the plane tester of the j-fold power to the current
    view, so after m - 2 stages the remaining view has n^2 points; it is
    accepted exactly when it belongs to the 2-fold power.
    """

    def __init__(self, code: TensorCode, axis_mode: str = "all"):
        if code.m < 3:
            raise ShapeError(f"composition needs m >= 3, got m = {code.m}")
        self.code = code
        self.axis_mode = axis_mode

    def stage_axis_counts(self) -> list[int]:
        """Number of admissible axes at each stage, levels m down to 3."""
        return [
            len(_tester_axes(level, self.axis_mode))
            for level in range(self.code.m, 2, -1)
        ]

    def sample_view(
        self,
        word: TensorWord,
        rng: np.random.Generator,
        with_distance: bool = False,
    ) -> ViewOutcome:
        self.code.check_shape(word)
        entries = word.entries
        remaining = list(range(1, self.code.m + 1))
        fixed: dict[int, int] = {}
        for level in range(self.code.m, 2, -1):
            axes = _tester_axes(level, self.axis_mode)
            rel = int(rng.integers(0, len(axes)))
            coord = int(rng.integers(0, self.code.n))
            fixed[remaining.pop(rel)] = coord
            entries = np.take(entries, coord, axis=rel)
        view = TensorWord(self.code.field, entries)
        consistent = is_square_member(self.code.base, entries)
        distance = None
        if with_distance:
            square = TensorCode(self.code.base, 2)
            dist = square.flattened().distance_to_code(entries.reshape(-1))
            distance = Fraction(dist, entries.size)
        return ViewOutcome(
            fixed=fixed,
            free_axes=(remaining[0], remaining[1]),
            view=view,
            consistent=consistent,
            local_distance=distance,
        )


def rejection_probability_exact(
    word: TensorWord, code: TensorCode, axis_mode: str = "all"
) -> Fraction:
    """Probability the composed tester rejects, by enumerating every path."""
    code.check_shape(word)
    if code.m < 3:
        raise ShapeError(f"composition needs m >= 3, got m = {code.m}")
    base = code.base
    n = code.n
    paths = 1
    for level in range(3, code.m + 1):
        paths *= len(_tester_axes(level, axis_mode)) * n
    if paths > (1 << 22):
        raise CapacityError(f"exact enumeration of {paths} tester paths exceeds the cap")

    def count(entries: np.ndarray, level: int) -> tuple[int, int]:
        if level == 2:
            return (0 if is_square_member(base, entries) else 1), 1
        rejected = total = 0
        for rel in range(len(_tester_axes(level, axis_mode))):
            for coord in range(n):
                r, t = count(np.take(entries, coord, axis=rel), level - 1)
                rejected += r
                total += t
        return rejected, total

    rejected, total = count(word.entries, code.m)
    return Fraction(rejected, total)


@dataclass(frozen=True)
class SampledRejection:
    """Monte Carlo estimate of the composed tester's rejection probability."""

    estimate: Fraction
    rejections: int
    trials: int
    seed: int

    @property
    def standard_error(self) -> float:
        phat = float(self.estimate)
        return sqrt(phat * (1.0 - phat) / self.trials)


def rejection_probability_sampled(
    word: TensorWord,
    code: TensorCode,
    trials: int,
    seed: int,
    axis_mode: str = "all",
) -> SampledRejection:
    """Estimate the rejection probability from seeded independent draws.

    All stage choices are drawn up front from one generator, so the result
    depends only on (word, trials, seed), not on evaluation order.
    """
    code.check_shape(word)
    if trials < 1:
        raise ValueError("need at least one trial")
    tester = ComposedTester(code, axis_mode)
    axis_counts = tester.stage_axis_counts()
    rng = np.random.default_rng(seed)
    axis_draws = np.column_stack(
        [rng.integers(0, c, size=trials) for c in axis_counts]
    )
    coord_draws = rng.integers(0, code.n, size=(trials, len(axis_counts)))
    base = code.base
    rejections = 0
    for t in range(trials):
        entries = word.entries
        for s in range(len(axis_counts)):
            entries = np.take(entries, coord_draws[t, s], axis=axis_draws[t, s])
        if not is_square_member(base, entries):
            rejections += 1
    return SampledRejection(
        estimate=Fraction(rejections, trials),
        rejections=rejections,
        trials=trials,
        seed=seed,
    )
