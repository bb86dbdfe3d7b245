"""Physical constants (CODATA 2018 exact values) and unit helpers."""

import math

E_CHARGE = 1.602176634e-19  # C
H_PLANCK = 6.62607015e-34  # J s
HBAR = H_PLANCK / (2.0 * math.pi)  # J s

GHZ = 1e9
FF = 1e-15


def joule_to_ghz(energy):
    return energy / H_PLANCK / GHZ


def ghz_to_joule(freq_ghz):
    return freq_ghz * GHZ * H_PLANCK


def angular_to_ghz(omega):
    return omega / (2.0 * math.pi) / GHZ


def physical_constants():
    """Constants echoed in JSON summaries."""
    return {"e": E_CHARGE, "h": H_PLANCK, "hbar": HBAR}
