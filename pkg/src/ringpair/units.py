"""Physical constants and unit-suffixed quantity parsing.

All package internals work in SI with angular frequencies (rad/s) and
lengths in meters.  Config files may quote values in any of the units
below; they are normalized once, on load.
"""

from __future__ import annotations

import math
import re

from .errors import ConfigError

C_VACUUM = 299792458.0  # speed of light [m/s]
HBAR = 1.054571817e-34  # reduced Planck constant [J s]
TWO_PI = 2.0 * math.pi

# Multipliers to the SI base unit of each dimension.
_LENGTH = {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6,
           "μm": 1e-6, "nm": 1e-9, "pm": 1e-12}
_INVERSE_LENGTH = {"/m": 1.0, "1/m": 1.0, "/cm": 1e2, "1/cm": 1e2,
                   "/mm": 1e3, "1/mm": 1e3, "/um": 1e6, "1/um": 1e6,
                   "/nm": 1e9, "1/nm": 1e9}
_FREQUENCY = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12}
_POWER = {"W": 1.0, "mW": 1e-3, "uW": 1e-6, "nW": 1e-9, "kW": 1e3}
_TIME = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12,
         "fs": 1e-15}

_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


def _split(text: str) -> tuple[float, str]:
    text = text.strip()
    m = _NUMBER.match(text)
    if not m:
        raise ConfigError(f"cannot parse number from {text!r}")
    return float(m.group(0)), text[m.end():].strip()


def parse_length(text: str) -> float:
    """Parse a length like ``"641 um"`` to meters."""
    value, unit = _split(text)
    if unit not in _LENGTH:
        raise ConfigError(f"unknown length unit {unit!r} in {text!r}")
    return value * _LENGTH[unit]


def parse_inverse_length(text: str) -> float:
    """Parse an attenuation/coupling constant like ``"0.23 /cm"`` to 1/m."""
    value, unit = _split(text)
    unit = unit.replace(" ", "")
    if unit not in _INVERSE_LENGTH:
        raise ConfigError(f"unknown inverse-length unit {unit!r} in {text!r}")
    return value * _INVERSE_LENGTH[unit]


def parse_angular_frequency(text: str) -> float:
    """Parse a spectral position to an angular frequency in rad/s.

    Accepts ordinary frequencies ("1215.2 THz"), explicit angular values
    ("1.2e15 rad/s"), or vacuum wavelengths ("1550.07 nm"), which are
    converted via w = 2*pi*c/lambda.
    """
    value, unit = _split(text)
    unit = unit.replace(" ", "")
    if unit in ("rad/s", "rads"):
        return value
    if unit in _FREQUENCY:
        return TWO_PI * value * _FREQUENCY[unit]
    if unit in _LENGTH:
        lam = value * _LENGTH[unit]
        if lam <= 0:
            raise ConfigError(f"non-positive wavelength in {text!r}")
        return TWO_PI * C_VACUUM / lam
    raise ConfigError(f"unknown frequency/wavelength unit {unit!r} in {text!r}")


def parse_power(text: str) -> float:
    value, unit = _split(text)
    if unit not in _POWER:
        raise ConfigError(f"unknown power unit {unit!r} in {text!r}")
    return value * _POWER[unit]


def parse_time(text: str) -> float:
    value, unit = _split(text)
    if unit not in _TIME:
        raise ConfigError(f"unknown time unit {unit!r} in {text!r}")
    return value * _TIME[unit]


def parse_angle(text: str) -> float:
    """Parse an angle to radians; bare multiples of pi are accepted."""
    text = text.strip()
    if text.endswith("pi"):
        head = text[:-2].strip()
        return (float(head) if head else 1.0) * math.pi
    value, unit = _split(text)
    if unit in ("", "rad"):
        return value
    if unit == "deg":
        return math.radians(value)
    raise ConfigError(f"unknown angle unit {unit!r} in {text!r}")


def parse_dimensionless(text: str) -> float:
    value, unit = _split(text)
    if unit:
        raise ConfigError(f"unexpected unit {unit!r} on dimensionless value {text!r}")
    return value
