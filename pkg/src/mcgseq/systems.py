"""Action of words on laminar families and the slide normalization algorithm.

Slides act through crossing parity: reading the slide path as a walk
through the chambers of the laminar forest (with a teleport between the
two ends of a handle for each x_j letter), the slid label toggles its
membership exactly in the blocks crossed an odd number of times.  The
other letters relabel: spins swap e(j,+) and e(j,-) everywhere, handle and
summand interchanges swap label pairs, twists do nothing.

``normalize_system`` inverts this action: a breadth-first search over the
finite reachable state space produces the lexicographically least shortest
word carrying the standard system (with its duplicate tokens) onto a given
symmetric family with a given allowable assignment.
"""

from __future__ import annotations

import functools
import logging
from collections import deque
from dataclasses import dataclass

from .errors import (
    InvalidFamily,
    InvalidWord,
    NotAllowable,
    NotLaminarAfterSlide,
    NotSymmetric,
    Unreachable,
)
from . import words as w
from .model import (
    Assignment,
    Forest,
    LaminarFamily,
    PrimeDecomposition,
    ROOT,
    allowable,
    block_text,
    classify_system,
    e_label,
    label_text,
    s_label,
    summand_permutation,
    validate_laminar,
)

log = logging.getLogger("mcgseq.systems")


# ---------------------------------------------------------------------------
# chamber walks


@dataclass(frozen=True)
class ChamberWalk:
    """The chambers visited by a slide path and the per-block crossing counts."""

    chambers: tuple
    crossings: tuple[tuple[int, int], ...]  # (block index, count)

    def odd_blocks(self) -> frozenset:
        return frozenset(i for i, n in self.crossings if n % 2 == 1)


def walk_of_slide(
    manifold: PrimeDecomposition, blocks: tuple[frozenset, ...], letter
) -> ChamberWalk:
    """Trace the slide path of a slide letter through the chamber forest."""
    forest = Forest(manifold, blocks)
    if isinstance(letter, w.SlideIrr):
        start = forest.chamber_of_label(s_label(letter.summand))
    elif isinstance(letter, w.SlideEnd):
        start = forest.chamber_of_label(e_label(letter.handle, letter.sign))
    elif isinstance(letter, w.SlideHandle):
        start = forest.chamber_of_label(e_label(letter.handle, 1))
    else:
        raise InvalidWord(f"{letter!r} is not a slide letter")
    counts: dict[int, int] = {}
    visited = [start]
    cur = start

    def move_to(target: int):
        nonlocal cur
        for b in forest.path_between(cur, target):
            counts[b] = counts.get(b, 0) + 1
        cur = target
        visited.append(target)

    for lt in letter.path:
        if lt[0] == "g":
            # walk to the summand chamber and back: even crossings on the way
            there = forest.chamber_of_label(s_label(lt[1]))
            back = cur
            move_to(there)
            move_to(back)
        else:
            _, j, sign = lt
            move_to(forest.chamber_of_label(e_label(j, sign)))
            # teleport through the handle
            cur = forest.chamber_of_label(e_label(j, -sign))
            visited.append(cur)
    move_to(start)
    return ChamberWalk(tuple(visited), tuple(sorted(counts.items())))


def _slid_labels(letter) -> tuple:
    if isinstance(letter, w.SlideIrr):
        return (s_label(letter.summand),)
    if isinstance(letter, w.SlideEnd):
        return (e_label(letter.handle, letter.sign),)
    if isinstance(letter, w.SlideHandle):
        return (e_label(letter.handle, 1), e_label(letter.handle, -1))
    raise InvalidWord(f"{letter!r} is not a slide letter")


def _relabel_block(block: frozenset, mapping: dict) -> frozenset:
    return frozenset(mapping.get(lab, lab) for lab in block)


def act_letter_blocks(
    manifold: PrimeDecomposition, letter, blocks: tuple[frozenset, ...]
) -> tuple[frozenset, ...]:
    """Apply one generator letter to an ordered block tuple."""
    if isinstance(letter, (w.Twist, w.Aut)):
        return blocks
    if isinstance(letter, w.Spin):
        j = letter.handle
        mapping = {e_label(j, 1): e_label(j, -1), e_label(j, -1): e_label(j, 1)}
        return tuple(_relabel_block(b, mapping) for b in blocks)
    if isinstance(letter, w.SwapHandles):
        mapping = {}
        for s in (1, -1):
            mapping[e_label(letter.a, s)] = e_label(letter.b, s)
            mapping[e_label(letter.b, s)] = e_label(letter.a, s)
        return tuple(_relabel_block(b, mapping) for b in blocks)
    if isinstance(letter, w.SwapIrr):
        mapping = {
            s_label(letter.a): s_label(letter.b),
            s_label(letter.b): s_label(letter.a),
        }
        return tuple(_relabel_block(b, mapping) for b in blocks)
    if isinstance(letter, (w.SlideIrr, w.SlideEnd, w.SlideHandle)):
        walk = walk_of_slide(manifold, blocks, letter)
        odd = walk.odd_blocks()
        slid = _slid_labels(letter)
        new_blocks = []
        for idx, b in enumerate(blocks):
            if idx in odd:
                nb = set(b)
                for lab in slid:
                    if lab in nb:
                        nb.discard(lab)
                    else:
                        nb.add(lab)
                new_blocks.append(frozenset(nb))
            else:
                new_blocks.append(b)
        result = tuple(new_blocks)
        report = validate_laminar(manifold, result)
        if not report.ok:
            raise NotLaminarAfterSlide(
                f"slide {letter!r} breaks laminarity: "
                + report.violations[0].message
            )
        return result
    raise InvalidWord(f"unknown generator letter {letter!r}")


def act_system(
    manifold: PrimeDecomposition, word: w.Word, family: LaminarFamily
) -> LaminarFamily:
    """Fold the word's letters left-to-right over the family."""
    if word.manifold != manifold:
        raise InvalidWord("word belongs to a different manifold")
    report = validate_laminar(manifold, family.blocks)
    if not report.ok:
        raise InvalidFamily(report.violations[0].message)
    blocks = family.blocks
    for letter in word.letters:
        blocks = act_letter_blocks(manifold, letter, blocks)
    return LaminarFamily.of(blocks)


# ---------------------------------------------------------------------------
# duplicate tracking
#
# The standard duplicates ride the standard spheres: slot i (1..k) carries
# d(i); slot k+j carries d(j,+) on its 'in' side and d(j,-) on its 'out'
# side until spins exchange them.  Slides carry tokens along (no change),
# spins swap the two sides of their handle, and interchanges move tokens
# only through the relabeling of slot contents.


def _standard_slots(manifold: PrimeDecomposition) -> tuple[frozenset, ...]:
    slots = [frozenset({s_label(i)}) for i in range(1, manifold.k + 1)]
    slots += [
        frozenset({e_label(j, 1)}) for j in range(1, manifold.ell + 1)
    ]
    return tuple(slots)


def _fold_state(manifold: PrimeDecomposition, letters):
    """Fold letters over (slot tuple, spin bits); bits[j-1] flips on spin(j)."""
    slots = _standard_slots(manifold)
    bits = [False] * manifold.ell
    for letter in letters:
        if isinstance(letter, w.Spin):
            bits[letter.handle - 1] = not bits[letter.handle - 1]
        slots = act_letter_blocks(manifold, letter, slots)
    return slots, tuple(bits)


def _readout(manifold: PrimeDecomposition, slots, bits) -> Assignment:
    mapping = {}
    for i in range(1, manifold.k + 1):
        mapping[("d", i)] = (slots[i - 1], None)
    for j in range(1, manifold.ell + 1):
        block = slots[manifold.k + j - 1]
        if bits[j - 1]:
            mapping[("d", j, 1)] = (block, "out")
            mapping[("d", j, -1)] = (block, "in")
        else:
            mapping[("d", j, 1)] = (block, "in")
            mapping[("d", j, -1)] = (block, "out")
    return Assignment.of(mapping)


def trace_assignment(manifold: PrimeDecomposition, word: w.Word) -> Assignment:
    """The duplicate correspondence induced by a word on the standard system."""
    if word.manifold != manifold:
        raise InvalidWord("word belongs to a different manifold")
    slots, bits = _fold_state(manifold, word.letters)
    final = LaminarFamily.of(slots)
    if not classify_system(manifold, final).is_symmetric:
        raise NotSymmetric(
            "word does not carry the standard system to a symmetric system"
        )
    return _readout(manifold, slots, bits)


# ---------------------------------------------------------------------------
# normalization (Lemma-style slide factorization) via BFS


def _bfs_moves(manifold: PrimeDecomposition) -> list:
    """Single-handle-letter slides, spins and handle swaps, in canonical order."""
    from .textio import word_letter_text

    moves = []
    ell, k = manifold.ell, manifold.k
    paths = []
    for m in range(1, ell + 1):
        paths.append((("x", m, 1),))
        paths.append((("x", m, -1),))
    for i in range(1, k + 1):
        for p in paths:
            moves.append(w.SlideIrr(i, p))
    for j in range(1, ell + 1):
        allowed = [p for p in paths if p[0][1] != j]
        for sign in (1, -1):
            for p in allowed:
                moves.append(w.SlideEnd(j, sign, p))
        for p in allowed:
            moves.append(w.SlideHandle(j, p))
    for j in range(1, ell + 1):
        moves.append(w.Spin(j))
    for a in range(1, ell + 1):
        for b in range(a + 1, ell + 1):
            moves.append(w.SwapHandles(a, b))
    moves.sort(key=lambda mv: word_letter_text(manifold, mv))
    return moves


@functools.lru_cache(maxsize=None)
def _reachability(manifold: PrimeDecomposition) -> dict:
    """BFS the full (slots, bits) state space from the standard state.

    Returns state -> (parent state, move letter); the start state maps to
    (None, None).  Moves are tried in canonical text order, so the implied
    word for every state is the lexicographically least among the shortest.
    """
    moves = _bfs_moves(manifold)
    start = (_standard_slots(manifold), (False,) * manifold.ell)
    seen: dict = {start: (None, None)}
    queue = deque([start])
    while queue:
        slots, bits = queue.popleft()
        for mv in moves:
            nbits = list(bits)
            if isinstance(mv, w.Spin):
                nbits[mv.handle - 1] = not nbits[mv.handle - 1]
            try:
                nslots = act_letter_blocks(manifold, mv, slots)
            except NotLaminarAfterSlide:
                continue
            nstate = (nslots, tuple(nbits))
            if nstate not in seen:
                seen[nstate] = ((slots, bits), mv)
                queue.append(nstate)
    log.info(
        "reachability index: %d states from the standard system", len(seen)
    )
    return seen


def _target_state(manifold: PrimeDecomposition, assignment: Assignment):
    """The BFS lookup state matching the assignment's handle part.

    The summand part is realized by the swapIrr prefix; the search space
    keeps the summand slots at their standard singletons (discrepant moves
    never change them), so the lookup uses those.
    """
    k = manifold.k
    slots = [frozenset({s_label(i)}) for i in range(1, k + 1)]
    bits = []
    for j in range(1, manifold.ell + 1):
        block, side = assignment.target_of(("d", j, 1))
        slots.append(block)
        bits.append(side == "out")
    return (tuple(slots), tuple(bits))


def normalize_system(
    manifold: PrimeDecomposition, family: LaminarFamily, assignment: Assignment
) -> w.Word:
    """A word of slides/spins/handle swaps (plus a swapIrr prefix when the
    assignment permutes summands) carrying the standard system onto the
    family with the given duplicate correspondence."""
    cls = classify_system(manifold, family)
    if not cls.is_symmetric:
        raise NotSymmetric("normalization target must be a symmetric system")
    if not allowable(manifold, family, assignment):
        raise NotAllowable("assignment is not allowable onto the target family")
    perm = summand_permutation(manifold, family, assignment)
    from .sequence import perm_transpositions

    prefix = [w.SwapIrr(a, b) for a, b in perm_transpositions(perm)]
    # swapIrr letters do not touch handle labels or spin bits, so the search
    # index from the plain standard state answers every query
    index = _reachability(manifold)
    target = _target_state(manifold, assignment)
    if target not in index:
        raise Unreachable(
            "no slide/spin/swap word realizes the target family and "
            "assignment; model violation"
        )
    path = []
    state = target
    while True:
        parent, mv = index[state]
        if mv is None:
            break
        path.append(mv)
        state = parent
    path.reverse()
    return w.Word.of(manifold, tuple(prefix) + tuple(path))


# ---------------------------------------------------------------------------
# DOT rendering


def family_dot(manifold: PrimeDecomposition, family: LaminarFamily, name="family"):
    """Graphviz digraph of the laminar forest, labels as leaves."""
    forest = Forest(manifold, family.blocks)
    lines = [f"digraph {name} {{"]
    lines.append('  root [shape=point, xlabel="root"];')
    for i, b in enumerate(family.blocks):
        lines.append(f'  b{i} [shape=box, label="{block_text(b)}"];')
    for lab in manifold.labels():
        lines.append(
            f'  lab_{label_text(lab).replace("+", "p").replace("-", "m")} '
            f'[shape=ellipse, label="{label_text(lab)}"];'
        )
    for i in range(len(family.blocks)):
        parent = forest.parent[i]
        src = "root" if parent == ROOT else f"b{parent}"
        lines.append(f"  {src} -> b{i};")
    for lab in manifold.labels():
        c = forest.chamber_of_label(lab)
        src = "root" if c == ROOT else f"b{c}"
        node = f'lab_{label_text(lab).replace("+", "p").replace("-", "m")}'
        lines.append(f"  {src} -> {node} [style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"
