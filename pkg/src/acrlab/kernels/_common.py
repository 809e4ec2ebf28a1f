"""Integer codes and constants shared by both kernel backends."""
import numpy as np

OBJ_SPHERE = 0
OBJ_RASTRIGIN = 1

STRAT_INVARIANT = 0
STRAT_ADAPTIVE_NORM = 1
STRAT_ADAPTIVE_COORD = 2

# SplitMix64 constants.
GAMMA = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
SH30 = np.uint64(30)
SH27 = np.uint64(27)
SH31 = np.uint64(31)
SH11 = np.uint64(11)
TWO_M53 = 2.0**-53
TWO_PI = 2.0 * np.pi


def draws_per_point(dim: int) -> int:
    """Uniform draws consumed by one Gaussian vector of length ``dim``."""
    return 2 * ((dim + 1) // 2)
