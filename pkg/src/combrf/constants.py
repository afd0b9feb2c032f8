"""Physical constants used across the toolkit."""

SPEED_OF_LIGHT = 299_792_458.0  # vacuum, m/s
