"""Physical constants (SI units)."""

# Planck constant, J*s (exact SI value)
PLANCK = 6.62607015e-34

# Default optical carrier: 1550 nm band, 193.4 THz
DEFAULT_CARRIER_HZ = 193.4e12
