"""Subshifts of finite type and finite truncations of countable Markov shifts.

Symbols are labelled ``1..k`` in every public interface (words are plain
tuples of ints). Internally, word arrays hold 0-based symbols so they can
index numpy arrays directly.
"""

from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .errors import (
    NoPrimitiveLevels,
    NotAdmissible,
    NotMixing,
    NotSquare,
    ValidationError,
    ZeroRowOrColumn,
)

Word = tuple

# rows per block when expanding the word tree; bounds peak memory
BLOCK_ROWS = 1 << 16


@dataclass(frozen=True, eq=False)
class ShiftSpace:
    """One-sided subshift of finite type.

    Attributes
    ----------
    transition : ndarray of int8, shape (k, k)
        ``transition[i, j] == 1`` iff symbol ``j + 1`` may follow ``i + 1``.
    mixing_witness : int or None
        Smallest ``N`` with ``transition ** N`` entrywise positive, or None
        when no such power exists below the search cap.
    """

    transition: np.ndarray
    mixing_witness: Optional[int] = None

    @property
    def alphabet_size(self):
        return self.transition.shape[0]

    @property
    def is_mixing(self):
        return self.mixing_witness is not None

    def allows(self, a, b):
        """True iff symbol ``b`` may follow symbol ``a`` (1-based)."""
        return bool(self.transition[a - 1, b - 1])

    def same_as(self, other):
        return self.transition.shape == other.transition.shape and bool(
            np.array_equal(self.transition, other.transition)
        )

    def __repr__(self):
        return "ShiftSpace(k=%d, mixing_witness=%r)" % (
            self.alphabet_size,
            self.mixing_witness,
        )


def _primitivity_index(t, cap):
    b = t.astype(bool)
    power = b.copy()
    for n in range(1, cap + 1):
        if power.all():
            return n
        power = (power.astype(np.int64) @ b.astype(np.int64)) > 0
    return None


def validate_shift(transition, cap=None):
    """Check a 0/1 transition matrix and compute its mixing witness.

    Powers are tested up to ``cap`` (default ``k**2``, which dominates the
    Wielandt bound ``(k - 1)**2 + 1``).

    Raises
    ------
    NotSquare, ZeroRowOrColumn, ValidationError
    """
    t = np.asarray(transition)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotSquare("transition matrix must be square and nonempty, got shape %r" % (t.shape,))
    if not np.isin(t, (0, 1)).all():
        raise ValidationError("transition entries must be 0 or 1")
    t = t.astype(np.int8)
    if (t.sum(axis=1) == 0).any() or (t.sum(axis=0) == 0).any():
        raise ZeroRowOrColumn("transition matrix has an all-zero row or column")
    k = t.shape[0]
    if cap is None:
        cap = k * k
    t.setflags(write=False)
    return ShiftSpace(t, _primitivity_index(t, cap))


def full_shift(k):
    return validate_shift(np.ones((k, k), dtype=np.int8))


def golden_mean_shift():
    return validate_shift([[1, 1], [1, 0]])


def is_admissible(shift, word):
    if any(not 1 <= s <= shift.alphabet_size for s in word):
        return False
    return all(shift.allows(a, b) for a, b in zip(word, word[1:]))


def check_word(shift, word):
    if not is_admissible(shift, word):
        raise NotAdmissible("word %r is not admissible" % (word,))
    return tuple(word)


def _check_depth(shift, n, anchor):
    if n < 1:
        raise ValidationError("depth must be >= 1")
    if anchor is not None and not 1 <= anchor <= shift.alphabet_size:
        raise ValidationError("anchor %r outside alphabet" % (anchor,))


def enumerate_words(shift, n, anchor=None):
    """Yield every admissible word of length ``n`` in lexicographic order.

    Depth-first, so memory stays O(n) whatever the number of words.
    """
    _check_depth(shift, n, anchor)
    k = shift.alphabet_size
    follow = [tuple(j + 1 for j in range(k) if shift.transition[i, j]) for i in range(k)]
    starts = (anchor,) if anchor is not None else tuple(range(1, k + 1))
    word = [0] * n

    def rec(pos):
        if pos == n:
            yield tuple(word)
            return
        for s in follow[word[pos - 1] - 1]:
            word[pos] = s
            yield from rec(pos + 1)

    for s in starts:
        word[0] = s
        yield from rec(1)


def enumerate_periodic_words(shift, n, anchor):
    """Yield anchored words labelling period-``n`` points in ``C_anchor``."""
    _check_depth(shift, n, anchor)
    for w in enumerate_words(shift, n, anchor):
        if shift.allows(w[-1], w[0]):
            yield w


def count_words(shift, n, anchor=None, periodic=False):
    t = shift.transition.astype(object)
    k = shift.alphabet_size
    p = np.identity(k, dtype=object)
    for _ in range(n - 1):
        p = p.dot(t)
    if periodic:
        p = p.dot(t)
        diag = [p[i, i] for i in range(k)]
        return int(sum(diag)) if anchor is None else int(diag[anchor - 1])
    return int(p.sum()) if anchor is None else int(p[anchor - 1].sum())


def iter_word_blocks(shift, n, anchor=None, periodic=False, potential=None, block_rows=BLOCK_ROWS):
    """Yield ``(words, state)`` blocks covering all admissible length-``n`` words.

    ``words`` is an int array of 0-based symbols, one word per row; blocks
    arrive in lexicographic order and each holds at most ``block_rows``
    rows. When a potential is given, ``state`` is its incremental product
    state for those rows (one multiplication per tree edge), otherwise None.
    """
    _check_depth(shift, n, anchor)
    t = shift.transition.astype(bool)
    k = shift.alphabet_size
    if anchor is None:
        first = np.arange(k, dtype=np.int16)
    else:
        first = np.array([anchor - 1], dtype=np.int16)
    words = first[:, None]
    state = potential._start(first) if potential is not None else None

    def expand(words, state, remaining):
        if remaining == 0:
            if periodic:
                keep = t[words[:, -1], words[:, 0]]
                words = words[keep]
                if state is not None:
                    state = potential._take(state, keep)
            if len(words):
                yield words, state
            return
        chunk = max(1, block_rows // k)
        if len(words) > chunk:
            for lo in range(0, len(words), chunk):
                sl = slice(lo, lo + chunk)
                sub = potential._take(state, sl) if state is not None else None
                yield from expand(words[sl], sub, remaining)
            return
        rows, cols = np.nonzero(t[words[:, -1]])
        cols = cols.astype(np.int16)
        nxt = np.hstack([words[rows], cols[:, None]])
        nstate = potential._extend(potential._take(state, rows), cols) if state is not None else None
        yield from expand(nxt, nstate, remaining - 1)

    yield from expand(words, state, n - 1)


def word_array(shift, n, anchor=None, periodic=False):
    """All admissible length-``n`` words as one lexicographically sorted array."""
    blocks = [w for w, _ in iter_word_blocks(shift, n, anchor, periodic)]
    if not blocks:
        return np.zeros((0, n), dtype=np.int16)
    return np.vstack(blocks)


def word_codes(words, k):
    """Base-``k`` integer code of each row; ascending code == lexicographic order."""
    words = np.asarray(words, dtype=np.int64)
    codes = np.zeros(len(words), dtype=np.int64)
    for j in range(words.shape[1]):
        codes = codes * k + words[:, j]
    return codes


def to_word(row):
    return tuple(int(s) + 1 for s in row)


def from_word(word):
    return np.array([s - 1 for s in word], dtype=np.int16)


@dataclass(frozen=True)
class ConnectivityData:
    """Connector words: for every pair ``(a, b)``, ``a + connectors[a, b] + b`` is admissible."""

    k: int
    connectors: dict = field(repr=False)

    @property
    def W(self):
        return sorted(set(self.connectors.values()))

    def connector(self, a, b):
        return self.connectors[(a, b)]


def connectivity_data(shift):
    """Smallest connector length ``k`` and the lexicographically smallest connector per pair.

    Raises
    ------
    NotMixing
        If the shift has no mixing witness.
    """
    if not shift.is_mixing:
        raise NotMixing("shift is not mixing (no primitive power found)")
    size = shift.alphabet_size
    t = shift.transition.astype(np.int64)
    power = t.copy()
    k = None
    for length in range(1, max(shift.mixing_witness, 1) + 1):
        power = (power @ t > 0).astype(np.int64)
        if power.all():
            k = length
            break
    if k is None:
        raise NotMixing("no connector length found up to the mixing witness")
    # lexicographic DFS finds the smallest connector for each pair
    connectors = {}
    for a in range(1, size + 1):
        needed = set(range(1, size + 1))
        for w in _words_after(shift, a, k):
            if not needed:
                break
            for b in list(needed):
                if shift.allows(w[-1], b):
                    connectors[(a, b)] = w
                    needed.discard(b)
    return ConnectivityData(k, connectors)


def _words_after(shift, a, k):
    for w in enumerate_words(shift, k + 1, a):
        yield w[1:]


@dataclass(frozen=True)
class CountableShift:
    """Countable-alphabet Markov shift given through its transition entries.

    ``entry(i, j)`` returns 1 iff ``j`` may follow ``i`` (both 1-based). Only
    finite prefixes are ever built.
    """

    entry: Callable
    name: str = "countable"

    def prefix(self, level):
        return np.array(
            [[1 if self.entry(i, j) else 0 for j in range(1, level + 1)] for i in range(1, level + 1)],
            dtype=np.int8,
        )


def countable_full_shift():
    return CountableShift(lambda i, j: 1, name="full")


@dataclass(frozen=True)
class TruncationFamily:
    levels: tuple
    shifts: tuple
    skipped: tuple = ()

    def __iter__(self) -> Iterator:
        return iter(zip(self.levels, self.shifts))

    def __len__(self):
        return len(self.levels)


def truncate(countable, levels: Sequence[int]):
    """Restrict a countable shift to ``{1..l}`` for each requested level.

    Levels whose restriction is invalid or not primitive are skipped and
    listed in ``skipped`` as ``(level, reason)`` pairs.
    """
    kept, shifts, skipped = [], [], []
    for level in sorted(set(int(l) for l in levels)):
        try:
            shift = validate_shift(countable.prefix(level))
        except ValidationError as err:
            skipped.append((level, err.name))
            continue
        if not shift.is_mixing:
            skipped.append((level, "NotPrimitive"))
            continue
        kept.append(level)
        shifts.append(shift)
    if not kept:
        raise NoPrimitiveLevels("no requested level has a primitive restriction: %r" % (skipped,))
    return TruncationFamily(tuple(kept), tuple(shifts), tuple(skipped))
