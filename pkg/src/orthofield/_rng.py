"""Counter-mode random word generation.

Every variate in this package is a pure function of (master seed,
stream labels, lattice position).  Replica r of stream q at site i
therefore does not depend on how work was batched, which thread drew
it, or what was drawn before it: Monte Carlo runs reduce
deterministically under any partition, and a field can be evaluated on
translated sites without materializing the untranslated part.

The word function is the splitmix64 finalizer chained over the input
words.  Each fold is a bijection of the 64-bit state for any fixed
word, with full avalanche, which is the standard construction for
counter-mode streams (same family as the SeedSequence entropy mixer).
All arithmetic is modular uint64; numpy array ops wrap silently, so
inputs are normalized to (possibly 0-d) uint64 arrays.
"""

from __future__ import annotations

import numpy as np

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_S63 = np.uint64(63)
_INV53 = float(2.0**-53)


def _as_words(x) -> np.ndarray:
    """Coerce ints / int arrays to uint64 words (two's complement for
    negatives, so shifted lattice coordinates below 1 stay injective)."""
    arr = np.asarray(x)
    if arr.dtype == np.uint64:
        return arr
    if not np.issubdtype(arr.dtype, np.integer):
        raise TypeError("rng words must be integers, got %s" % arr.dtype)
    return arr.astype(np.int64).view(np.uint64)


def mix64(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):  # modular wraparound is the algorithm
        x = x ^ (x >> _S30)
        x = x * _M1
        x = x ^ (x >> _S27)
        x = x * _M2
        return x ^ (x >> _S31)


def fold(h, word) -> np.ndarray:
    """Absorb one word into the running hash.  Broadcasts, so callers
    can fold a replica axis and then one coordinate axis at a time."""
    with np.errstate(over="ignore"):
        return mix64((_as_words(h) + _GAMMA) ^ _as_words(word))


def _label_word(label) -> np.uint64:
    """Short string labels hash through FNV-1a so stream names stay
    readable at call sites; integers pass through as words."""
    if isinstance(label, str):
        h = 0xCBF29CE484222325
        for byte in label.encode("utf-8"):
            h = ((h ^ byte) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
        return np.uint64(h)
    return _as_words(label)


def stream_key(master_seed: int, *labels) -> np.ndarray:
    """Hash a master seed plus integer or string labels into a stream key."""
    h = mix64(_as_words(master_seed) + _GAMMA)
    for lab in labels:
        h = fold(h, _label_word(lab))
    return h


def uniform01(h: np.ndarray) -> np.ndarray:
    """Map words to doubles in the open interval (0, 1)."""
    return ((h >> _S11).astype(np.float64) + 0.5) * _INV53


def sign_pm1(h: np.ndarray) -> np.ndarray:
    """Map words to +-1.0 from the top bit."""
    return 1.0 - 2.0 * (h >> _S63).astype(np.float64)
