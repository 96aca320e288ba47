"""Digit words on a spherically symmetric tree.

Words are stored little-endian (``digits[0]`` is the rightmost digit) and
printed big-endian, so ``DigitWord.parse("0340020").digits[1] == 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class TreeShape:
    """Bounded sequence of alphabet sizes ``m_0, m_1, ...``.

    ``mode="repeat"`` cycles ``pattern`` forever (a constant shape is a
    pattern of length one); ``mode="pad"`` reads ``pattern`` once and then
    repeats its last entry.
    """

    pattern: tuple[int, ...]
    mode: str = "repeat"

    def __post_init__(self):
        pattern = tuple(int(m) for m in self.pattern)
        if not pattern:
            raise ValueError("empty shape")
        if any(m < 2 for m in pattern):
            raise ValueError(f"alphabet sizes must be >= 2, got {pattern}")
        if self.mode not in ("repeat", "pad"):
            raise ValueError(f"unknown shape mode {self.mode!r}")
        object.__setattr__(self, "pattern", pattern)

    @classmethod
    def constant(cls, m: int) -> TreeShape:
        return cls((m,))

    @classmethod
    def parse(cls, spec: str, mode: str = "repeat") -> TreeShape:
        """``"2"`` -> constant, ``"3,2,4"`` -> repeating pattern (or padded list)."""
        return cls(tuple(int(p) for p in spec.split(",") if p.strip()), mode)

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        if self.mode == "repeat":
            return self.pattern[i % len(self.pattern)]
        return self.pattern[min(i, len(self.pattern) - 1)]

    @property
    def bound(self) -> int:
        return max(self.pattern)

    @property
    def is_binary(self) -> bool:
        return self.bound == 2

    def sizes(self, n: int) -> tuple[int, ...]:
        return tuple(self[i] for i in range(n))

    def beta(self, i: int) -> Fraction:
        return Fraction(1, self[i] - 1)

    def spec(self) -> str:
        return ",".join(map(str, self.pattern))

    def __str__(self):
        if len(self.pattern) == 1:
            return f"m={self.pattern[0]}"
        return f"m=({self.spec()}{',...' if self.mode == 'repeat' else '+'})"


BINARY = TreeShape.constant(2)


@dataclass(frozen=True)
class DigitWord:
    """Finite word ``x_{n-1} ... x_0``; positions past the end read as zero."""

    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(x) for x in self.digits))
        if any(x < 0 for x in self.digits):
            raise ValueError("negative digit")

    @classmethod
    def parse(cls, text: str) -> DigitWord:
        text = text.strip()
        if not text:
            raise ValueError("empty word")
        return cls(tuple(_ALPHABET.index(c) for c in reversed(text.lower())))

    @classmethod
    def zeros(cls, n: int) -> DigitWord:
        return cls((0,) * n)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> DigitWord:
        """Binary word whose digit ``i`` is bit ``i`` of ``mask``."""
        if mask >> n:
            raise ValueError(f"mask {mask} does not fit in {n} digits")
        return cls(tuple((mask >> i) & 1 for i in range(n)))

    def __len__(self):
        return len(self.digits)

    def __getitem__(self, i: int) -> int:
        return self.digits[i] if 0 <= i < len(self.digits) else 0

    def __str__(self):
        return "".join(_ALPHABET[x] for x in reversed(self.digits))

    def __repr__(self):
        return f"DigitWord({str(self)!r})"

    @property
    def weight(self) -> int:
        """Hamming weight: number of nonzero digits."""
        return sum(1 for x in self.digits if x)

    @property
    def is_binary(self) -> bool:
        return all(x <= 1 for x in self.digits)

    def mask(self) -> int:
        """Bitmask of the nonzero positions."""
        return sum(1 << i for i, x in enumerate(self.digits) if x)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.digits) if x)

    def fits(self, shape: TreeShape) -> bool:
        return all(x < shape[i] for i, x in enumerate(self.digits))

    def padded(self, n: int) -> DigitWord:
        if n < len(self.digits):
            if any(self.digits[n:]):
                raise ValueError("cannot truncate nonzero digits")
            return DigitWord(self.digits[:n])
        return DigitWord(self.digits + (0,) * (n - len(self.digits)))

    def replace(self, k: int, value: int) -> DigitWord:
        digits = list(self.padded(max(len(self.digits), k + 1)).digits)
        digits[k] = value
        return DigitWord(tuple(digits))


def ell_position(x: DigitWord, t: int) -> float | int:
    """Position of the ``(t+1)``-th nonzero digit from the right.

    ``ell_position(x, -1) == -1``; returns ``math.inf`` when ``x`` has at
    most ``t`` nonzero digits.
    """
    if t < -1:
        raise ValueError("t must be >= -1")
    if t == -1:
        return -1
    seen = -1
    for i, digit in enumerate(x.digits):
        if digit:
            seen += 1
            if seen == t:
                return i
    return math.inf


def project_binary(x: DigitWord) -> DigitWord:
    return DigitWord(tuple(1 if digit else 0 for digit in x.digits))


def mask_to_position(mask: int) -> int:
    """Cumulative parity from the left: bit ``k`` is the parity of bits ``>= k``."""
    pos = mask
    shift = 1
    while mask >> shift:
        pos ^= mask >> shift
        shift += 1
    return pos


def position_to_mask(pos: int) -> int:
    return pos ^ (pos >> 1)


def linear_position(x: DigitWord) -> int:
    if not x.is_binary:
        raise ValueError(f"linear position needs a binary word, got {x}")
    return mask_to_position(x.mask())


def inverse_linear_position(p: int, n: int) -> DigitWord:
    if p < 0 or p >> n:
        raise ValueError(f"position {p} out of range for length {n}")
    return DigitWord.from_mask(position_to_mask(p), n)


def beta_weight(a: DigitWord, shape: TreeShape) -> Fraction:
    """Product of ``1/(m_i - 1)`` over the ones of ``a``."""
    if not a.is_binary:
        raise ValueError("beta weight is defined on binary words")
    out = Fraction(1)
    for i in a.support():
        out *= shape.beta(i)
    return out


def beta_weight_inverse(a: DigitWord, shape: TreeShape) -> int:
    out = 1
    for i in a.support():
        out *= shape[i] - 1
    return out


def mask_beta_inverse(mask: int, shape: TreeShape) -> int:
    out = 1
    i = 0
    while mask:
        if mask & 1:
            out *= shape[i] - 1
        mask >>= 1
        i += 1
    return out


def all_words(sizes: Sequence[int]) -> Iterable[DigitWord]:
    """All words with ``digits[i] < sizes[i]``, in mixed-radix order (digit 0 fastest)."""
    n = len(sizes)
    digits = [0] * n
    total = math.prod(sizes)
    for _ in range(total):
        yield DigitWord(tuple(digits))
        for i in range(n):
            digits[i] += 1
            if digits[i] < sizes[i]:
                break
            digits[i] = 0
