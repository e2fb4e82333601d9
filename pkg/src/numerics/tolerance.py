"""
Tolerance value type shared by every numerical check
"""
from dataclasses import dataclass

from src.config.settings import settings

@dataclass(frozen=True)
class Tolerance:
    """Absolute and relative tolerances for residual checks"""
    abs_eps: float = settings.TOL_ABS
    rel_eps: float = settings.TOL_REL

    def __post_init__(self):
        if self.abs_eps < 0 or self.rel_eps < 0:
            raise ValueError(f"Tolerances must be nonnegative, got abs={self.abs_eps}, rel={self.rel_eps}")

    def bound(self, scale: float = 0.0) -> float:
        """Admissible residual for a quantity of magnitude `scale`"""
        return self.abs_eps + self.rel_eps * max(0.0, scale - 1.0)

    def allows(self, residual: float, scale: float = 0.0) -> bool:
        return residual <= self.bound(scale)

DEFAULT_TOLERANCE = Tolerance()
