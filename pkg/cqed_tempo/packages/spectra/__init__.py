"""Linear response functions, absorption spectra and Rabi splittings."""

from .response import absorption_spectrum, find_splitting, response_function
from .spectra_types import DriveMode, ResponseSeries, Spectrum, SpectrumError, Splitting

__all__ = [
    # Types
    "DriveMode",
    "ResponseSeries",
    "Spectrum",
    "SpectrumError",
    "Splitting",
    # Operations
    "response_function",
    "absorption_spectrum",
    "find_splitting",
]
