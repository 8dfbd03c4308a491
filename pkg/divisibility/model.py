"""The pairs (n, r) as points n*P1 + r*P2 of E(L)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from curve.group import CurvePoint, ec_add
from curve.ltower import LTower, combination_point

DEFAULT_WINDOW = 3


class WindowExceeded(ValueError):
    def __init__(self, pair: tuple[int, int] | None, window: int):
        where = f"pair {pair}" if pair is not None else "point"
        super().__init__(f"{where} lies outside the window |.| <= {window}")
        self.pair = pair
        self.window = window


@dataclass(frozen=True, eq=False)
class ModelElement:
    """n*P1 + r*P2 tagged with (n, r)."""

    n: int
    r: int
    point: CurvePoint
    tower: LTower

    @property
    def tag(self) -> tuple[int, int]:
        return self.n, self.r

    @property
    def is_identity(self) -> bool:
        return self.point.is_infinity

    def __add__(self, other: ModelElement) -> ModelElement:
        if other.tower is not self.tower:
            raise ValueError("model elements from different towers")
        point = ec_add(self.point, other.point, self.tower.params)
        return ModelElement(self.n + other.n, self.r + other.r, point, self.tower)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelElement):
            return NotImplemented
        return self.point == other.point

    __hash__ = None


def _check_window(pair: tuple[int, int], window: int) -> None:
    if max(abs(pair[0]), abs(pair[1])) > window:
        raise WindowExceeded(pair, window)


def encode_pair(n: int, r: int, tower: LTower, window: int = DEFAULT_WINDOW) -> ModelElement:
    _check_window((n, r), window)
    return ModelElement(n, r, combination_point(n, r, tower), tower)


def decode(element: ModelElement | CurvePoint, tower: LTower, window: int = DEFAULT_WINDOW) -> tuple[int, int]:
    """The unique (n, r) in the window whose point is the given one."""
    point = element.point if isinstance(element, ModelElement) else element
    if point.is_infinity:
        return 0, 0
    for n, r in _window_pairs(window):
        if (n, r) == (0, 0):
            continue
        candidate = tower.combination_point(n, r)
        if candidate == point:
            return n, r
    raise WindowExceeded(None, window)


def _window_pairs(window: int):
    span = sorted(range(-window, window + 1), key=lambda v: (abs(v), -v))
    return product(span, span)


def window_collisions(tower: LTower, window: int = DEFAULT_WINDOW) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Pairs in the window mapped to the same point; empty when the map is injective there."""
    seen: dict[str, tuple[int, int]] = {}
    collisions = []
    for n, r in _window_pairs(window):
        if (n, r) == (0, 0):
            key = "O"
        else:
            point = tower.combination_point(n, r)
            key = point.x.render() + "|" + point.y.render()
        if key in seen:
            collisions.append((seen[key], (n, r)))
        else:
            seen[key] = (n, r)
    return collisions


@dataclass(frozen=True)
class HalfLift:
    """k*P = 2*H + parity*P with H = j*P = (wx, h*wy); wx, wy in K, or H the identity."""

    k: int
    lane: int
    j: int
    parity: int
    wx: object
    wy: object
    identity: bool


def halve_in_lane(k: int, lane: int, tower: LTower) -> HalfLift:
    """Half-lift of k*P_lane, the witness of the lane membership encoding."""
    if lane not in (1, 2):
        raise ValueError(f"lane must be 1 or 2, got {lane}")
    j = k // 2
    parity = k - 2 * j
    if j == 0:
        return HalfLift(k, lane, 0, parity, tower.K.zero, tower.K.zero, True)
    point = tower.combination_point(j, 0) if lane == 1 else tower.combination_point(0, j)
    wx = point.x.base_value()
    wy = point.y.coords[lane]
    if any(bool(c) for i, c in enumerate(point.y.coords) if i != lane):
        raise ArithmeticError(f"y({j}P{lane}) is not a K-multiple of h{lane}")
    return HalfLift(k, lane, j, parity, wx, wy, False)
