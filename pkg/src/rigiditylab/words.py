"""Freely reduced words over named generators.

A word is a tuple of syllables ``(name, exponent)``. The string form is
space separated, e.g. ``"a^3 b^-2 z"``; ``""`` and ``"1"`` denote the empty
word. As a map, ``"a b"`` means ``a ∘ b``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

Syllable = Tuple[str, int]
Letter = Tuple[str, int]  # exponent is +1 or -1

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^\{?(-?\d+)\}?)?$")


def _reduce(syllables: Iterable[Syllable]) -> Tuple[Syllable, ...]:
    out: List[Syllable] = []
    for name, exp in syllables:
        if exp == 0:
            continue
        if out and out[-1][0] == name:
            e = out[-1][1] + exp
            out.pop()
            if e != 0:
                out.append((name, e))
        else:
            out.append((name, exp))
    return tuple(out)


class Word:
    __slots__ = ("syllables", "_hash")

    def __init__(self, syllables: Iterable[Syllable] = ()):
        object.__setattr__(self, "syllables", _reduce((str(n), int(e)) for n, e in syllables))
        object.__setattr__(self, "_hash", hash(self.syllables))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if text in ("", "1"):
            return cls(())
        syl = []
        for tok in text.split():
            m = _TOKEN.match(tok)
            if not m:
                raise ValueError(f"cannot parse word token {tok!r}")
            syl.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
        return cls(syl)

    @classmethod
    def from_letters(cls, letters: Iterable[Letter]) -> "Word":
        return cls(letters)

    @classmethod
    def generator(cls, name: str, exp: int = 1) -> "Word":
        return cls(((name, exp),))

    def letters(self) -> List[Letter]:
        out = []
        for name, exp in self.syllables:
            s = 1 if exp > 0 else -1
            out.extend([(name, s)] * abs(exp))
        return out

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def is_empty(self) -> bool:
        return not self.syllables

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word(self.syllables * n)

    def inverse(self) -> "Word":
        return Word((n, -e) for n, e in reversed(self.syllables))

    def names(self) -> set:
        return {n for n, _ in self.syllables}

    def exponent_sum(self, name: str) -> int:
        return sum(e for n, e in self.syllables if n == name)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.syllables == other.syllables

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return " ".join(n if e == 1 else f"{n}^{e}" for n, e in self.syllables)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


def as_word(w) -> Word:
    return w if isinstance(w, Word) else Word.parse(str(w))


class Alphabet:
    """Generator order used for shortlex: g1, g1^-1, g2, g2^-1, ..."""

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        self.letters: Tuple[Letter, ...] = tuple(
            (n, s) for n in self.names for s in (1, -1))
        self._index: Dict[Letter, int] = {l: i for i, l in enumerate(self.letters)}

    def letter_index(self, letter: Letter) -> int:
        return self._index[letter]

    def key(self, w: Word) -> Tuple[int, Tuple[int, ...]]:
        idx = tuple(self._index[l] for l in w.letters())
        return (len(idx), idx)

    def enumerate(self, max_length: int, include_empty: bool = False) -> Iterator[Word]:
        """All freely reduced words of length <= max_length in shortlex order."""
        if include_empty:
            yield Word(())
        layer: List[Tuple[Letter, ...]] = [()]
        for _ in range(max_length):
            nxt = []
            for seq in layer:
                for l in self.letters:
                    if seq and seq[-1] == (l[0], -l[1]):
                        continue
                    nxt.append(seq + (l,))
            layer = nxt
            for seq in layer:
                yield Word(seq)


def cyclic_reduce(w: Word) -> Word:
    letters = w.letters()
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == (letters[j][0], -letters[j][1]):
        i += 1
        j -= 1
    return Word(letters[i:j + 1])


def conjugacy_key(w: Word, alphabet: Alphabet, oriented: bool = False) -> Word:
    """Shortlex-least cyclic rotation of the cyclic reduction of ``w``.

    Unless ``oriented`` is set, ``w`` and ``w^-1`` get the same key.
    """
    idx = [alphabet.letter_index(l) for l in cyclic_reduce(w).letters()]
    if not idx:
        return Word(())
    # letters come in pairs (g, g^-1) at indices 2k, 2k + 1
    seqs = [idx]
    if not oriented:
        seqs.append([i ^ 1 for i in reversed(idx)])
    best = min(tuple(s[r:] + s[:r]) for s in seqs for r in range(len(s)))
    return Word(alphabet.letters[i] for i in best)


@lru_cache(maxsize=64)
def _class_keys(names: Tuple[str, ...], max_length: int, oriented: bool) -> Tuple[Word, ...]:
    alphabet = Alphabet(names)
    return tuple(w for w in alphabet.enumerate(max_length)
                 if conjugacy_key(w, alphabet, oriented) == w)


def class_keys(alphabet: Alphabet, max_length: int, oriented: bool = False) -> Tuple[Word, ...]:
    """Keys of all conjugacy classes of nontrivial words of length <= max_length, in shortlex order."""
    return _class_keys(alphabet.names, max_length, oriented)
