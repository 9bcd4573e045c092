"""Space parameters (dimension, regularity, integrability)."""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SpaceParams:
    """Parameters (n, s, p) of the target space.

    s must be non-integer.  The embedding hypothesis n/p < frac(s) is what
    guarantees continuous top-order derivatives; it is enforced by default
    but can be relaxed for seminorm-only computations (e.g. estimator
    calibration at the borderline n/p == frac(s)).
    """

    n: int
    s: float
    p: float
    require_embedding: bool = True

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError("dimension n must be a positive integer")
        if self.s <= 0 or float(self.s) == math.floor(self.s):
            raise ValueError("regularity s must be positive and non-integer")
        if self.p < 1:
            raise ValueError("integrability p must be >= 1")
        if self.require_embedding and self.n / self.p >= self.s_frac:
            raise ValueError(
                f"embedding hypothesis violated: n/p = {self.n / self.p} "
                f"must be < frac(s) = {self.s_frac}"
            )

    @property
    def s_floor(self):
        """Integer part of s (the jet order)."""
        return int(math.floor(self.s))

    @property
    def s_frac(self):
        """Fractional part of s, in (0, 1)."""
        return self.s - math.floor(self.s)

    def to_json(self):
        return {"n": self.n, "s": self.s, "p": self.p}

    @classmethod
    def from_json(cls, obj, require_embedding=True):
        return cls(n=obj["n"], s=obj["s"], p=obj["p"],
                   require_embedding=require_embedding)
