"""Global constants used across the project."""

from datetime import timezone
from fractions import Fraction

UTC_TIMEZONE = timezone.utc

VERTEX_LETTERS = "abcdefghijklmnopqrstuvwxyz"

VANISHING_DENSITY = Fraction(1, 27)
FOUR_27_DENSITY = Fraction(4, 27)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2
EXIT_BOUNDS = 3
