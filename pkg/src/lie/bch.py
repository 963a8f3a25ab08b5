"""Baker-Campbell-Hausdorff series over the Lyndon basis.

The series log(exp(X) exp(Y)) is computed in the truncated free associative
algebra on the letters 0 (for X) and 1 (for Y), passed through the Dynkin
projection, and expanded on the Lyndon basis with standard bracketing.
Coordinates are then specialized into any concrete Lie algebra through its
structure constants. This path never touches the enveloping algebra, so it
cross-checks the PBW pipeline independently.
"""

import logging
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from sympy.polys.domains import QQ

from src.core.exact import Rational, to_rational
from src.lie.algebra import LieAlgebra


logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
FreeElement = Dict[Word, Rational]

DEFAULT_MAX_ORDER = 5


class BCHSeriesError(Exception):
    """Raised when the Lyndon expansion of a Lie element does not close."""

    pass


def _add_into(target: FreeElement, word: Word, value: Rational) -> None:
    total = target.get(word, QQ(0)) + value
    if total:
        target[word] = total
    else:
        target.pop(word, None)


def concatenate(a: FreeElement, b: FreeElement, max_length: int) -> FreeElement:
    """Concatenation product truncated at the given word length."""
    out: FreeElement = {}
    for u, cu in a.items():
        for v, cv in b.items():
            if len(u) + len(v) <= max_length:
                _add_into(out, u + v, cu * cv)
    return out


def commutator(a: FreeElement, b: FreeElement, max_length: int) -> FreeElement:
    out = concatenate(a, b, max_length)
    for w, c in concatenate(b, a, max_length).items():
        _add_into(out, w, -c)
    return out


def _letter_exponential(letter: int, max_length: int) -> FreeElement:
    out: FreeElement = {(): QQ(1)}
    factorial = 1
    for k in range(1, max_length + 1):
        factorial *= k
        out[(letter,) * k] = QQ(1, factorial)
    return out


def truncated_log(z: FreeElement, max_length: int) -> FreeElement:
    """log(z) for z with constant term one, truncated at max_length."""
    if z.get((), QQ(0)) != 1:
        raise BCHSeriesError("Logarithm needs constant term 1")
    w = {u: c for u, c in z.items() if u}
    out: FreeElement = {}
    power: FreeElement = {(): QQ(1)}
    for k in range(1, max_length + 1):
        power = concatenate(power, w, max_length)
        sign = 1 if k % 2 else -1
        for u, c in power.items():
            _add_into(out, u, c * QQ(sign, k))
    return out


def bch_word_series(max_length: int) -> FreeElement:
    """log(exp(X) exp(Y)) as a word series, X = letter 0, Y = letter 1."""
    product = concatenate(
        _letter_exponential(0, max_length),
        _letter_exponential(1, max_length),
        max_length,
    )
    return truncated_log(product, max_length)


def left_normed_bracket(word: Word, max_length: int) -> FreeElement:
    """Expansion of [...[[a1, a2], a3], ..., ak]."""
    out: FreeElement = {(word[0],): QQ(1)}
    for letter in word[1:]:
        out = commutator(out, {(letter,): QQ(1)}, max_length)
    return out


def dynkin_projection(series: FreeElement, max_length: int) -> FreeElement:
    """Apply w -> (1/|w|) left-normed bracket of w, term by term."""
    out: FreeElement = {}
    for word, c in series.items():
        if not word:
            continue
        for u, cu in left_normed_bracket(word, max_length).items():
            _add_into(out, u, c * cu * QQ(1, len(word)))
    return out


def lyndon_words(alphabet_size: int, max_length: int) -> List[Word]:
    """Lyndon words up to max_length, by Duval's algorithm.

    Returns:
        Words sorted by length, then lexicographically
    """
    words: List[Word] = []
    w = [-1]
    while w:
        w[-1] += 1
        words.append(tuple(w))
        m = len(w)
        while len(w) < max_length:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()
    return sorted(words, key=lambda u: (len(u), u))


def _is_lyndon(word: Word) -> bool:
    return all(word < word[i:] + word[:i] for i in range(1, len(word)))


def standard_factorization(word: Word) -> Tuple[Word, Word]:
    """Split w = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        if _is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise BCHSeriesError(f"Word {word} has no standard factorization")


@lru_cache(maxsize=None)
def _standard_bracketing(word: Word) -> Tuple[Tuple[Word, Rational], ...]:
    if len(word) == 1:
        return ((word, QQ(1)),)
    u, v = standard_factorization(word)
    pu = dict(_standard_bracketing(u))
    pv = dict(_standard_bracketing(v))
    return tuple(sorted(commutator(pu, pv, len(word)).items()))


def lie_polynomial(word: Word) -> FreeElement:
    """Standard bracketing of a Lyndon word, expanded into words."""
    return dict(_standard_bracketing(word))


def lyndon_coordinates(element: FreeElement, max_length: int) -> Dict[Word, Rational]:
    """Coordinates of a Lie element on the Lyndon basis.

    Uses that the bracketing of w equals w plus lexicographically larger
    words of the same length.

    Raises:
        BCHSeriesError: When the element is not in the span
    """
    residual = dict(element)
    coordinates: Dict[Word, Rational] = {}
    for word in lyndon_words(2, max_length):
        c = residual.get(word, QQ(0))
        if not c:
            continue
        coordinates[word] = c
        for u, cu in lie_polynomial(word).items():
            _add_into(residual, u, -c * cu)
    if residual:
        leftover = min(residual, key=lambda u: (len(u), u))
        raise BCHSeriesError(
            f"Lyndon reconstruction leaves residual at word {leftover}"
        )
    return coordinates


@lru_cache(maxsize=None)
def _bch_coordinates(max_order: int) -> Tuple[Tuple[Word, Rational], ...]:
    series = bch_word_series(max_order)
    projected = dynkin_projection(series, max_order)
    if projected != series:
        raise BCHSeriesError("Dynkin projection does not fix the BCH series")
    coordinates = lyndon_coordinates(projected, max_order)
    logger.debug(
        f"BCH series to order {max_order}: {len(coordinates)} Lyndon terms"
    )
    return tuple(sorted(coordinates.items(), key=lambda t: (len(t[0]), t[0])))


def bch_series(max_order: int = DEFAULT_MAX_ORDER) -> Dict[Word, Rational]:
    """Lyndon coordinates of log(exp(X) exp(Y)) through max_order."""
    return dict(_bch_coordinates(max_order))


def evaluate_bracketing(
    word: Word, letters: Sequence[Sequence[Rational]], algebra: LieAlgebra
) -> List[Rational]:
    """Value of the standard bracketing of ``word`` in ``algebra``."""
    if len(word) == 1:
        return [to_rational(v) for v in letters[word[0]]]
    u, v = standard_factorization(word)
    return algebra.bracket(
        evaluate_bracketing(u, letters, algebra),
        evaluate_bracketing(v, letters, algebra),
    )


def specialize_bch(
    algebra: LieAlgebra,
    x: Sequence[Rational],
    y: Sequence[Rational],
    max_order: int = DEFAULT_MAX_ORDER,
) -> Dict[int, List[Rational]]:
    """Homogeneous components H_j(x, y) of the BCH series in ``algebra``."""
    components: Dict[int, List[Rational]] = {}
    letters = [list(x), list(y)]
    for word, c in bch_series(max_order).items():
        value = evaluate_bracketing(word, letters, algebra)
        current = components.setdefault(len(word), [QQ(0)] * algebra.dim)
        for k, v in enumerate(value):
            current[k] += c * v
    return {j: components.get(j, [QQ(0)] * algebra.dim) for j in range(1, max_order + 1)}
