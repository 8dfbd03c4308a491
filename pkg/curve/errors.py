"""Errors raised by the elliptic-curve layer."""


class ExceptionalPoint(ValueError):
    """nP1 + rP2 (or its pullback) is the point at infinity or has x = 0."""

    def __init__(self, pair: tuple[int, int], reason: str):
        super().__init__(f"exceptional combination {pair}: {reason}")
        self.pair = pair
        self.reason = reason
