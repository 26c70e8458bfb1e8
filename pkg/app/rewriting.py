"""
Rewrite Engine - normal ordering of words in noncommuting letters

Used as the reference normalizer for the sphere algebra, the abstract
Podles algebra and the localized SU_q(2). The fast product formulas in the
algebra modules are tested against it.
"""

from __future__ import annotations
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple

from app.scalar import ONE, Scalar, ScalarLike, to_scalar

Word = Tuple[str, ...]
LinComb = Dict[Word, Scalar]

# A non-local rule inspects a whole word and yields (start, end, replacement)
Redex = Tuple[int, int, LinComb]
WordRule = Callable[[Word], Iterable[Redex]]

STRATEGIES = ("leftmost", "rightmost")


def lincomb(*terms: Tuple[ScalarLike, Iterable[str]]) -> LinComb:
    """Build {word: coeff} from (coeff, letters) pairs"""
    out: LinComb = {}
    for coeff, letters in terms:
        add_term(out, tuple(letters), to_scalar(coeff))
    return out


def add_term(target: Dict, key, coeff: Scalar) -> None:
    value = target.get(key)
    value = coeff if value is None else value + coeff
    if value:
        target[key] = value
    else:
        target.pop(key, None)


class RewriteSystem:
    """
    Terminating rewrite system over words.

    Args:
        pair_rules: (x, y) -> linear combination replacing the adjacent pair
        word_rules: callables locating non-local redexes
    """

    def __init__(self, pair_rules: Mapping[Tuple[str, str], LinComb], word_rules: Iterable[WordRule] = ()):
        self.pair_rules = dict(pair_rules)
        self.word_rules = list(word_rules)
        self._cache: Dict[Tuple[Word, str], LinComb] = {}

    def redexes(self, word: Word) -> Iterable[Redex]:
        for i in range(len(word) - 1):
            replacement = self.pair_rules.get((word[i], word[i + 1]))
            if replacement is not None:
                yield i, i + 2, replacement
        for rule in self.word_rules:
            yield from rule(word)

    def find_redex(self, word: Word, strategy: str = "leftmost") -> Optional[Redex]:
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy '{strategy}'")
        best = None
        for redex in self.redexes(word):
            if best is None:
                best = redex
            elif strategy == "leftmost" and redex[0] < best[0]:
                best = redex
            elif strategy == "rightmost" and redex[0] > best[0]:
                best = redex
        return best

    def normal_form(self, word: Word, strategy: str = "leftmost") -> LinComb:
        key = (word, strategy)
        cached = self._cache.get(key)
        if cached is not None:
            return cached

        redex = self.find_redex(word, strategy)
        if redex is None:
            result = {word: ONE}
        else:
            start, end, replacement = redex
            result = {}
            for piece, coeff in replacement.items():
                reduced = self.normal_form(word[:start] + piece + word[end:], strategy)
                for nf_word, nf_coeff in reduced.items():
                    add_term(result, nf_word, coeff * nf_coeff)

        self._cache[key] = result
        return result

    def normalize(self, comb: Mapping[Word, ScalarLike], strategy: str = "leftmost") -> LinComb:
        result: LinComb = {}
        for word, coeff in comb.items():
            coeff = to_scalar(coeff)
            for nf_word, nf_coeff in self.normal_form(tuple(word), strategy).items():
                add_term(result, nf_word, coeff * nf_coeff)
        return result

    def is_normal(self, word: Word) -> bool:
        return self.find_redex(word) is None
