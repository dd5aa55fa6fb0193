"""Prime-power string codes and the remainder-based sequence encoder.

A string s_1..s_n over a registered alphabet codes as the product of
p_i ** code(s_i) over the first n primes, the empty string as 1.  Decoding
demands contiguous prime support starting at 2 with every exponent a
registered code; anything else is not a code and decodes to None.

Finite sequences of naturals travel as a pair (b, c): position i holds
b mod (1 + (i+1)*c).  beta_fit picks c as a factorial large enough to make
the moduli pairwise coprime and solves for b by the Chinese remainder
theorem, giving the least b that reproduces the sequence exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class CodecError(Exception):
    """Base for codec failures."""


class UnregisteredSymbolError(CodecError):
    """encode_string met a character outside the alphabet."""


class EmptySequenceError(CodecError):
    """beta_fit and friends need at least one element."""


class FitError(CodecError):
    """Internal consistency check of a fit failed; the fit is not faithful."""


class Alphabet:
    """Finite symbol set with positive codes 1..N assigned in given order."""

    def __init__(self, symbols: Iterable[str]):
        self._codes: dict[str, int] = {}
        self._chars: list[str] = []
        for ch in symbols:
            if len(ch) != 1:
                raise CodecError(f"alphabet entries are single characters, got {ch!r}")
            if ch in self._codes:
                raise CodecError(f"duplicate alphabet symbol {ch!r}")
            self._chars.append(ch)
            self._codes[ch] = len(self._chars)
        if not self._chars:
            raise CodecError("alphabet must not be empty")

    def __len__(self) -> int:
        return len(self._chars)

    def __contains__(self, ch: str) -> bool:
        return ch in self._codes

    def __iter__(self) -> Iterator[str]:
        return iter(self._chars)

    def code(self, ch: str) -> int:
        try:
            return self._codes[ch]
        except KeyError:
            raise UnregisteredSymbolError(repr(ch)) from None

    def char(self, code: int) -> str:
        if not 1 <= code <= len(self._chars):
            raise UnregisteredSymbolError(f"no symbol with code {code}")
        return self._chars[code - 1]


_PRIME_CACHE = [2, 3, 5, 7, 11, 13]


def primes() -> Iterator[int]:
    """The primes in order, extending a shared cache by trial division."""
    i = 0
    while True:
        while i >= len(_PRIME_CACHE):
            n = _PRIME_CACHE[-1] + 2
            while True:
                if all(n % p for p in _PRIME_CACHE if p * p <= n):
                    _PRIME_CACHE.append(n)
                    break
                n += 2
        yield _PRIME_CACHE[i]
        i += 1


def encode_string(s: str, alphabet: Alphabet) -> int:
    g = 1
    for p, ch in zip(primes(), s):
        g *= p ** alphabet.code(ch)
    return g


def decode_string(g: int, alphabet: Alphabet) -> str | None:
    """Inverse of encode_string; None when g codes nothing.

    Not a code: g < 1, a prime gap in the support, an exponent above the
    registered range, or leftover factors beyond the supported primes.
    """
    if g < 1:
        return None
    out = []
    for p in primes():
        if g == 1:
            return "".join(out)
        e = 0
        while g % p == 0:
            g //= p
            e += 1
        if e == 0 or e > len(alphabet):
            return None
        out.append(alphabet.char(e))


@dataclass(frozen=True)
class BetaParams:
    """A fitted (b, c) pair; fitted_len counts the positions it reproduces."""

    b: int
    c: int
    fitted_len: int

    def __post_init__(self):
        if self.b < 0 or self.c < 1 or self.fitted_len < 0:
            raise CodecError(f"bad beta parameters {self!r}")


def beta_value(b: int, c: int, i: int) -> int:
    return b % (1 + (i + 1) * c)


def beta_eval(params: BetaParams, i: int) -> int:
    return beta_value(params.b, params.c, i)


def _crt(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """Least non-negative x with x = r_i (mod m_i); moduli pairwise coprime."""
    x = 0
    m = 1
    for r, d in zip(residues, moduli):
        k = ((r - x) * pow(m, -1, d)) % d
        x += m * k
        m *= d
    return x


def beta_fit(seq: Sequence[int]) -> BetaParams:
    """Exact parameters for a finite sequence of naturals.

    c = s! with s = max(len(seq), max(seq)) + 1 makes the moduli
    1 + (i+1)*c pairwise coprime and larger than every element, so the
    Chinese remainder solution reproduces the sequence position by
    position.  Both properties are re-verified before returning; a failure
    raises FitError rather than handing back an unfaithful fit.
    """
    seq = list(seq)
    if not seq:
        raise EmptySequenceError("cannot fit an empty sequence")
    if any(v < 0 for v in seq):
        raise CodecError("sequence elements must be naturals")
    s = max(len(seq), max(seq)) + 1
    c = math.factorial(s)
    moduli = [1 + (i + 1) * c for i in range(len(seq))]
    for i, v in enumerate(seq):
        if v >= moduli[i]:
            raise FitError(f"element {v} at {i} does not fit below modulus {moduli[i]}")
    for i in range(len(moduli)):
        for j in range(i + 1, len(moduli)):
            if math.gcd(moduli[i], moduli[j]) != 1:
                raise FitError(f"moduli {i} and {j} share a factor")
    b = _crt(seq, moduli)
    params = BetaParams(b, c, len(seq))
    for i, v in enumerate(seq):
        if beta_eval(params, i) != v:
            raise FitError(f"fit does not reproduce position {i}")
    return params


def beta_enumerate_consistent(seq: Sequence[int], bound: int) -> list[tuple[int, int]]:
    """All pairs 0 <= b <= bound, 1 <= c <= bound that reproduce seq at
    every position, in lexicographic order.  Exhaustive within the box."""
    seq = list(seq)
    if not seq:
        raise EmptySequenceError("consistency needs at least one observation")
    if bound < 1:
        raise CodecError("bound must be at least 1")
    out = []
    for b in range(bound + 1):
        for c in range(1, bound + 1):
            if all(b % (1 + (i + 1) * c) == v for i, v in enumerate(seq)):
                out.append((b, c))
    return out
