"""Generator alphabet of H(W), word composition, inversion and rewriting.

Convention (used package-wide): words act left-to-right, so acting with
``compose(w1, w2)`` equals acting with w1 first, then w2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidWord, ManifoldMismatch
from .model import PrimeDecomposition
from . import fpgroup

# ---------------------------------------------------------------------------
# letters


@dataclass(frozen=True)
class SlideIrr:
    """Slide of the one-holed summand i along a closed path."""

    summand: int
    path: tuple  # FPWord; must avoid factor G_i letters


@dataclass(frozen=True)
class SlideEnd:
    """Slide of one end e(j, sign) of a non-separating sphere."""

    handle: int
    sign: int  # +1 or -1
    path: tuple  # FPWord; must avoid x_j letters


@dataclass(frozen=True)
class SlideHandle:
    """Slide of the capped holed S^2 x S^1 summand cut off by C(S_j)."""

    handle: int
    path: tuple  # FPWord; must avoid x_j letters


@dataclass(frozen=True)
class Spin:
    """Half Dehn twist on the separating sphere associated to handle j."""

    handle: int


@dataclass(frozen=True)
class Twist:
    """Dehn twist on a standard sphere; ref is ('sep',i)/('nonsep',j)/('assoc',j)."""

    ref: tuple


@dataclass(frozen=True)
class SwapHandles:
    """Interchanging slide of two S^2 x S^1 summands (a < b)."""

    a: int
    b: int


@dataclass(frozen=True)
class SwapIrr:
    """Interchanging slide of two homeomorphic irreducible summands (a < b)."""

    a: int
    b: int


@dataclass(frozen=True)
class Aut:
    """A mapping-class token of HomeoType(i) applied to summand i."""

    summand: int
    token: object  # mcg oracle element


DISCREPANT_KINDS = (SlideIrr, SlideEnd, SlideHandle, Spin, Twist, SwapHandles)


def is_discrepant_letter(letter) -> bool:
    return isinstance(letter, DISCREPANT_KINDS)


def check_letter(manifold: PrimeDecomposition, letter) -> None:
    k, ell = manifold.k, manifold.ell
    if isinstance(letter, SlideIrr):
        if not 1 <= letter.summand <= k:
            raise InvalidWord(f"slideIrr summand {letter.summand} out of range")
        if fpgroup.fp_reduce(manifold, letter.path) != letter.path:
            raise InvalidWord("slide path is not reduced")
        if any(lt[0] == "g" and lt[1] == letter.summand for lt in letter.path):
            raise InvalidWord(
                f"slideIrr({letter.summand}) path may not use factor "
                f"G_{letter.summand} letters"
            )
    elif isinstance(letter, (SlideEnd, SlideHandle)):
        if not 1 <= letter.handle <= ell:
            raise InvalidWord(f"slide handle {letter.handle} out of range")
        if isinstance(letter, SlideEnd) and letter.sign not in (1, -1):
            raise InvalidWord("slideEnd sign must be + or -")
        if fpgroup.fp_reduce(manifold, letter.path) != letter.path:
            raise InvalidWord("slide path is not reduced")
        if any(lt[0] == "x" and lt[1] == letter.handle for lt in letter.path):
            raise InvalidWord(
                f"slide of handle {letter.handle} may not use x{letter.handle} letters"
            )
    elif isinstance(letter, Spin):
        if not 1 <= letter.handle <= ell:
            raise InvalidWord(f"spin handle {letter.handle} out of range")
    elif isinstance(letter, Twist):
        kind, idx = letter.ref
        if kind == "sep":
            if not 1 <= idx <= k:
                raise InvalidWord(f"twist(sep{idx}) out of range")
        elif kind in ("nonsep", "assoc"):
            if not 1 <= idx <= ell:
                raise InvalidWord(f"twist({kind}{idx}) out of range")
        else:
            raise InvalidWord(f"bad twist ref {letter.ref!r}")
    elif isinstance(letter, SwapHandles):
        if not (1 <= letter.a < letter.b <= ell):
            raise InvalidWord(f"swapHandles({letter.a},{letter.b}) invalid")
    elif isinstance(letter, SwapIrr):
        if not (1 <= letter.a < letter.b <= k):
            raise InvalidWord(f"swapIrr({letter.a},{letter.b}) invalid")
        if manifold.type_of(letter.a) != manifold.type_of(letter.b):
            raise InvalidWord(
                f"swapIrr({letter.a},{letter.b}): summands are not homeomorphic"
            )
    elif isinstance(letter, Aut):
        if not 1 <= letter.summand <= k:
            raise InvalidWord(f"aut summand {letter.summand} out of range")
        manifold.type_of(letter.summand).mcg.check_element(letter.token)
    else:
        raise InvalidWord(f"unknown letter {letter!r}")


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class Word:
    manifold: PrimeDecomposition
    letters: tuple

    @classmethod
    def of(cls, manifold: PrimeDecomposition, letters) -> "Word":
        letters = tuple(letters)
        for letter in letters:
            check_letter(manifold, letter)
        return cls(manifold, letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)


def empty_word(manifold: PrimeDecomposition) -> Word:
    return Word(manifold, ())


def compose(w1: Word, w2: Word) -> Word:
    if w1.manifold != w2.manifold:
        raise ManifoldMismatch("cannot compose words over different manifolds")
    return Word(w1.manifold, w1.letters + w2.letters)


def _invert_letter(manifold: PrimeDecomposition, letter) -> tuple:
    if isinstance(letter, SlideIrr):
        return (SlideIrr(letter.summand, fpgroup.fp_inv(manifold, letter.path)),)
    if isinstance(letter, SlideEnd):
        return (
            SlideEnd(letter.handle, letter.sign, fpgroup.fp_inv(manifold, letter.path)),
        )
    if isinstance(letter, SlideHandle):
        return (SlideHandle(letter.handle, fpgroup.fp_inv(manifold, letter.path)),)
    if isinstance(letter, Spin):
        # spin^-1 = spin * twist(assoc); the half twist undone overshoots by
        # a full twist
        return (letter, Twist(("assoc", letter.handle)))
    if isinstance(letter, (Twist, SwapHandles, SwapIrr)):
        return (letter,)
    if isinstance(letter, Aut):
        mcg = manifold.type_of(letter.summand).mcg
        return (Aut(letter.summand, mcg.inv(letter.token)),)
    raise InvalidWord(f"unknown letter {letter!r}")


def invert(w: Word) -> Word:
    letters: list = []
    for letter in reversed(w.letters):
        letters.extend(_invert_letter(w.manifold, letter))
    return Word(w.manifold, tuple(letters))


# ---------------------------------------------------------------------------
# free reduction (rules R1-R4)


def _inverse_pair(manifold: PrimeDecomposition, a, b) -> bool:
    """R1: b is the letter inverse of a (slides and swaps only)."""
    if isinstance(a, SlideIrr) and isinstance(b, SlideIrr):
        return a.summand == b.summand and b.path == fpgroup.fp_inv(manifold, a.path)
    if isinstance(a, SlideEnd) and isinstance(b, SlideEnd):
        return (
            a.handle == b.handle
            and a.sign == b.sign
            and b.path == fpgroup.fp_inv(manifold, a.path)
        )
    if isinstance(a, SlideHandle) and isinstance(b, SlideHandle):
        return a.handle == b.handle and b.path == fpgroup.fp_inv(manifold, a.path)
    if isinstance(a, SwapHandles) and isinstance(b, SwapHandles):
        return a == b
    if isinstance(a, SwapIrr) and isinstance(b, SwapIrr):
        return a == b
    return False


def free_reduce(w: Word) -> Word:
    """Apply R1-R4 until fixpoint.

    R1 cancels adjacent letter/inverse pairs, R2 cancels twist^2, R3 turns
    spin^2 into the twist on the associated sphere, R4 merges adjacent aut
    letters through the mcg oracle and drops identity tokens.
    """
    m = w.manifold
    letters = list(w.letters)
    changed = True
    while changed:
        changed = False
        for idx, letter in enumerate(letters):
            if isinstance(letter, Aut) and m.type_of(letter.summand).mcg.is_identity(
                letter.token
            ):
                del letters[idx]
                changed = True
                break
        if changed:
            continue
        for idx in range(len(letters) - 1):
            a, b = letters[idx], letters[idx + 1]
            if _inverse_pair(m, a, b):
                del letters[idx : idx + 2]
                changed = True
                break
            if isinstance(a, Twist) and isinstance(b, Twist) and a.ref == b.ref:
                del letters[idx : idx + 2]
                changed = True
                break
            if isinstance(a, Spin) and isinstance(b, Spin) and a.handle == b.handle:
                letters[idx : idx + 2] = [Twist(("assoc", a.handle))]
                changed = True
                break
            if (
                isinstance(a, Aut)
                and isinstance(b, Aut)
                and a.summand == b.summand
            ):
                mcg = m.type_of(a.summand).mcg
                merged = mcg.mul(a.token, b.token)
                if mcg.is_identity(merged):
                    del letters[idx : idx + 2]
                else:
                    letters[idx : idx + 2] = [Aut(a.summand, merged)]
                changed = True
                break
            if (
                isinstance(a, Twist)
                and isinstance(b, Spin)
                and a.ref == ("assoc", b.handle)
            ):
                # twist(assoc j) = spin(j)^2 commutes with spin(j); ordering
                # spins first lets alternating runs collapse through R2/R3
                letters[idx : idx + 2] = [b, a]
                changed = True
                break
    return Word(m, tuple(letters))


# ---------------------------------------------------------------------------
# normal form: (discrepant letters) (aut letters) (swapIrr letters)


def _relabel_path_letters(manifold, path, letter):
    return fpgroup.act_letter_pi1(manifold, letter, path)


def _push_aut_right(manifold, aut: Aut, d):
    """Rewrite (aut, d) -> (d', aut) for a discrepant letter d."""
    if isinstance(d, (SlideIrr, SlideEnd, SlideHandle)):
        mcg = manifold.type_of(aut.summand).mcg
        inverse = Aut(aut.summand, mcg.inv(aut.token))
        new_path = _relabel_path_letters(manifold, d.path, inverse)
        if isinstance(d, SlideIrr):
            return SlideIrr(d.summand, new_path)
        if isinstance(d, SlideEnd):
            return SlideEnd(d.handle, d.sign, new_path)
        return SlideHandle(d.handle, new_path)
    # spins, twists and handle swaps act away from every summand
    return d


def _push_swapirr_right(manifold, swap: SwapIrr, d):
    """Rewrite (swapIrr, d) -> (d', swapIrr): relabel indices a<->b inside d."""
    a, b = swap.a, swap.b

    def sw(i):
        return b if i == a else a if i == b else i

    if isinstance(d, SlideIrr):
        return SlideIrr(sw(d.summand), _relabel_path_letters(manifold, d.path, swap))
    if isinstance(d, SlideEnd):
        return SlideEnd(d.handle, d.sign, _relabel_path_letters(manifold, d.path, swap))
    if isinstance(d, SlideHandle):
        return SlideHandle(d.handle, _relabel_path_letters(manifold, d.path, swap))
    if isinstance(d, Twist) and d.ref[0] == "sep":
        return Twist(("sep", sw(d.ref[1])))
    return d


def normalize_word(w: Word) -> Word:
    """Equivalent word of shape (discrepant)(aut)(swapIrr).

    Equivalence means identical pi1 action and identical eduction; the
    commutation rules rewrite slide paths through the relevant relabeling
    or inverse mcg action.
    """
    m = w.manifold
    letters = list(w.letters)
    # phase 1: move aut/swapIrr letters right past discrepant letters
    moved = True
    while moved:
        moved = False
        for idx in range(len(letters) - 1):
            a, b = letters[idx], letters[idx + 1]
            if isinstance(a, Aut) and is_discrepant_letter(b):
                letters[idx : idx + 2] = [_push_aut_right(m, a, b), a]
                moved = True
                break
            if isinstance(a, SwapIrr) and is_discrepant_letter(b):
                letters[idx : idx + 2] = [_push_swapirr_right(m, a, b), a]
                moved = True
                break
    # phase 2: inside the trailing segment, aut letters precede swapIrr letters
    moved = True
    while moved:
        moved = False
        for idx in range(len(letters) - 1):
            a, b = letters[idx], letters[idx + 1]
            if isinstance(a, SwapIrr) and isinstance(b, Aut):
                def sw(i):
                    return a.b if i == a.a else a.a if i == a.b else i

                letters[idx : idx + 2] = [Aut(sw(b.summand), b.token), a]
                moved = True
                break
    # phase 3: merge and sort the aut segment (auts on distinct summands commute)
    split = next(
        (i for i, lt in enumerate(letters) if isinstance(lt, (Aut, SwapIrr))),
        len(letters),
    )
    head = letters[:split]
    auts = [lt for lt in letters[split:] if isinstance(lt, Aut)]
    swaps = [lt for lt in letters[split:] if isinstance(lt, SwapIrr)]
    merged: dict[int, object] = {}
    for lt in auts:
        mcg = m.type_of(lt.summand).mcg
        if lt.summand in merged:
            merged[lt.summand] = mcg.mul(merged[lt.summand], lt.token)
        else:
            merged[lt.summand] = lt.token
    aut_letters = [
        Aut(i, tok)
        for i, tok in sorted(merged.items())
        if not m.type_of(i).mcg.is_identity(tok)
    ]
    return Word(m, tuple(head + aut_letters + list(swaps)))
