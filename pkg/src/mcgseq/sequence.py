"""The short exact sequence made executable.

Eduction projects a word to its effect on the disjoint union of the
irreducible summands: a type-preserving permutation plus one mapping-class
token per summand.  Slides, spins, twists and handle interchanges educe to
the identity; the kernel test and the discrepant factorization rest on
that.  A set-theoretic section (``lift``) realizes every element of the
image group, and a spotted variant handles manifolds with capped sphere
boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidWord, NotDiscrepant, OracleError, TypeMismatch
from .model import HomeoType, PrimeDecomposition
from . import words as w


@dataclass(frozen=True)
class EductionImage:
    """An element of H(V): permutation of summands plus per-summand tokens.

    ``perm[i-1]`` is the image of summand i; ``tokens[i-1]`` is the mcg
    oracle element attached at source summand i.
    """

    perm: tuple[int, ...]
    tokens: tuple

    def perm_of(self, i: int) -> int:
        return self.perm[i - 1]

    def token_of(self, i: int):
        return self.tokens[i - 1]


def identity_image(manifold: PrimeDecomposition) -> EductionImage:
    return EductionImage(
        tuple(range(1, manifold.k + 1)),
        tuple(manifold.type_of(i).mcg.identity for i in range(1, manifold.k + 1)),
    )


def check_image(manifold: PrimeDecomposition, image: EductionImage) -> None:
    k = manifold.k
    if sorted(image.perm) != list(range(1, k + 1)) or len(image.tokens) != k:
        raise TypeMismatch(f"not a valid eduction image for k={k}")
    for i in range(1, k + 1):
        if manifold.type_of(i) != manifold.type_of(image.perm_of(i)):
            raise TypeMismatch(
                f"permutation sends summand {i} to a non-homeomorphic summand "
                f"{image.perm_of(i)}"
            )
        manifold.type_of(i).mcg.check_element(image.token_of(i))


def compose_images(
    manifold: PrimeDecomposition, first: EductionImage, second: EductionImage
) -> EductionImage:
    """The image of "first, then second".

    Permutations compose pointwise; the token at source i is the token of
    ``first`` at i followed by the token of ``second`` at first.perm(i)
    (the wreath-product rule, written in apply-order).
    """
    k = manifold.k
    perm = tuple(second.perm_of(first.perm_of(i)) for i in range(1, k + 1))
    tokens = []
    for i in range(1, k + 1):
        mcg = manifold.type_of(i).mcg
        tokens.append(
            mcg.mul(first.token_of(i), second.token_of(first.perm_of(i)))
        )
    return EductionImage(perm, tuple(tokens))


def _letter_image(manifold: PrimeDecomposition, letter) -> EductionImage | None:
    """Eduction of a single letter; None for rel-V letters."""
    if w.is_discrepant_letter(letter):
        return None
    if isinstance(letter, w.Aut):
        image = identity_image(manifold)
        tokens = list(image.tokens)
        tokens[letter.summand - 1] = letter.token
        return EductionImage(image.perm, tuple(tokens))
    if isinstance(letter, w.SwapIrr):
        image = identity_image(manifold)
        perm = list(image.perm)
        perm[letter.a - 1], perm[letter.b - 1] = perm[letter.b - 1], perm[letter.a - 1]
        return EductionImage(tuple(perm), image.tokens)
    raise InvalidWord(f"unknown generator letter {letter!r}")


def educe(word: w.Word) -> EductionImage:
    """Project a word to H(V); slides, spins, twists and handle swaps vanish."""
    manifold = word.manifold
    acc = identity_image(manifold)
    for letter in word.letters:
        img = _letter_image(manifold, letter)
        if img is not None:
            acc = compose_images(manifold, acc, img)
    return acc


def perm_transpositions(perm: dict) -> list[tuple[int, int]]:
    """Write a permutation as transpositions, smallest cycle entry first.

    Applying the transpositions in the returned order (left to right)
    composes to the permutation.
    """
    seen = set()
    out = []
    for start in sorted(perm):
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cycle = [start]
        cur = perm[start]
        while cur != start:
            cycle.append(cur)
            cur = perm[cur]
        seen.update(cycle)
        for nxt in cycle[1:]:
            out.append((min(start, nxt), max(start, nxt)))
    return out


def lift(manifold: PrimeDecomposition, image: EductionImage) -> w.Word:
    """A fixed set-theoretic section: educe(lift(h)) = h.

    Transpositions realizing the permutation come first (smallest cycle
    entry first), then one aut letter per non-trivial token; the aut letter
    for the token at source i is placed at summand perm(i), which is where
    the wreath composition collects it.
    """
    check_image(manifold, image)
    perm = {i: image.perm_of(i) for i in range(1, manifold.k + 1)}
    letters: list = [w.SwapIrr(a, b) for a, b in perm_transpositions(perm)]
    auts = []
    for i in range(1, manifold.k + 1):
        token = image.token_of(i)
        if not manifold.type_of(i).mcg.is_identity(token):
            auts.append(w.Aut(image.perm_of(i), token))
    auts.sort(key=lambda lt: lt.summand)
    return w.Word.of(manifold, tuple(letters + auts))


def is_discrepant(word: w.Word) -> bool:
    """True iff the word educes to the identity of H(V)."""
    return educe(word) == identity_image(word.manifold)


def factor_discrepant(word: w.Word) -> w.Word:
    """Rewrite a kernel word over the discrepant alphabet only.

    Normalizes to (discrepant)(aut)(swapIrr), checks via the oracles that
    the trailing segment evaluates to the identity, and deletes it.
    """
    if not is_discrepant(word):
        raise NotDiscrepant("word does not educe to the identity")
    normal = w.normalize_word(word)
    split = next(
        (
            i
            for i, lt in enumerate(normal.letters)
            if isinstance(lt, (w.Aut, w.SwapIrr))
        ),
        len(normal.letters),
    )
    head, tail = normal.letters[:split], normal.letters[split:]
    tail_word = w.Word(word.manifold, tail)
    if educe(tail_word) != identity_image(word.manifold):
        raise OracleError(
            "normalize_word produced a non-trivial trailing segment for a "
            "kernel word"
        )
    return w.Word(word.manifold, head)


# ---------------------------------------------------------------------------
# spotted manifolds


@dataclass(frozen=True)
class SpottedMarking:
    """A capped manifold V0 with p >= 1 removed balls (spots)."""

    cap_type: HomeoType
    spots: int

    def __post_init__(self):
        if self.spots < 1:
            raise ValueError("a spotted manifold needs at least one spot")


@dataclass(frozen=True)
class SpotSlide:
    spot: int
    path: object  # element of pi1(V0)


@dataclass(frozen=True)
class SpotSwap:
    a: int
    b: int


@dataclass(frozen=True)
class SpotTwist:
    spot: int


@dataclass(frozen=True)
class CapAut:
    token: object  # element of mcg(V0)


def check_spotted_letter(marking: SpottedMarking, letter) -> None:
    p = marking.spots
    if isinstance(letter, SpotSlide):
        if not 1 <= letter.spot <= p:
            raise InvalidWord(f"spot index {letter.spot} out of range 1..{p}")
        marking.cap_type.pi1.check_element(letter.path)
    elif isinstance(letter, SpotSwap):
        if not (1 <= letter.a < letter.b <= p):
            raise InvalidWord(f"spotSwap({letter.a},{letter.b}) invalid")
    elif isinstance(letter, SpotTwist):
        if not 1 <= letter.spot <= p:
            raise InvalidWord(f"spot index {letter.spot} out of range 1..{p}")
    elif isinstance(letter, CapAut):
        marking.cap_type.mcg.check_element(letter.token)
    else:
        raise InvalidWord(f"unknown spotted letter {letter!r}")


def spotted_educe(marking: SpottedMarking, letters) -> tuple[object, tuple[int, ...]]:
    """Fold a spotted word to (capped mcg element, spot permutation).

    spotSlide and spotTwist are discrepant; spotSwap contributes a
    transposition; capAut contributes its token.
    """
    letters = tuple(letters)
    for letter in letters:
        check_spotted_letter(marking, letter)
    mcg = marking.cap_type.mcg
    cap = mcg.identity
    perm = list(range(1, marking.spots + 1))
    for letter in letters:
        if isinstance(letter, CapAut):
            cap = mcg.mul(cap, letter.token)
        elif isinstance(letter, SpotSwap):
            swap = {letter.a: letter.b, letter.b: letter.a}
            perm = [swap.get(v, v) for v in perm]
    return cap, tuple(perm)


def spotted_lift(
    marking: SpottedMarking, cap, perm: tuple[int, ...]
) -> list:
    """Explicit spotted word with spotted_educe == (cap, perm)."""
    mapping = {i + 1: perm[i] for i in range(marking.spots)}
    letters: list = [SpotSwap(a, b) for a, b in perm_transpositions(mapping)]
    if not marking.cap_type.mcg.is_identity(cap):
        letters.append(CapAut(cap))
    for letter in letters:
        check_spotted_letter(marking, letter)
    return letters
