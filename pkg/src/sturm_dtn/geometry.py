from dataclasses import dataclass
from typing import Tuple

from src.constants import Constants
from src.exceptions import DomainError
from src.spectra_closed import ClosedSpectrum

BOUNDARY_CONDITIONS = (Constants.STEKLOV, Constants.NEUMANN)


@dataclass(frozen=True)
class BaseGeometry:
    """
    Collar base B = Sigma x [0, collar_length]. Each end of the interval
    carries a Steklov or a Neumann condition; `cross_section` is the Laplace
    spectrum of Sigma.
    """
    cross_section: ClosedSpectrum
    collar_length: float
    left_bc: str = Constants.STEKLOV
    right_bc: str = Constants.STEKLOV

    def __post_init__(self):
        if not self.collar_length > 0.0:
            raise DomainError(f"collar_length must be positive, got {self.collar_length}")
        for side, bc in (('left_bc', self.left_bc), ('right_bc', self.right_bc)):
            if bc not in BOUNDARY_CONDITIONS:
                raise DomainError(f"{side} must be one of {BOUNDARY_CONDITIONS}, got {bc!r}")
        if Constants.STEKLOV not in (self.left_bc, self.right_bc):
            raise DomainError("at least one end of the collar must carry a Steklov condition")

    @property
    def steklov_ends(self) -> Tuple[int, ...]:
        return tuple(
            index for index, bc in enumerate((self.left_bc, self.right_bc)) if bc == Constants.STEKLOV
        )

    @property
    def component_count(self) -> int:
        """
        Number of connected components of the Steklov boundary.
        """
        return len(self.steklov_ends) * max(self.cross_section.zero_multiplicity, 1)


def collar_geometry(cross_section: ClosedSpectrum, collar_length: float, bc: str = 'both') -> BaseGeometry:
    """
    `bc` is 'both' (Steklov at both ends) or 'mixed' (Steklov at t = 0,
    Neumann at t = collar_length).
    """
    if bc == 'both':
        return BaseGeometry(cross_section, collar_length, Constants.STEKLOV, Constants.STEKLOV)
    if bc == 'mixed':
        return BaseGeometry(cross_section, collar_length, Constants.STEKLOV, Constants.NEUMANN)
    raise DomainError(f"bc must be 'both' or 'mixed', got {bc!r}")
