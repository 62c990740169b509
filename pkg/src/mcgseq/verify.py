"""Bundled verification suites behind the `verify` CLI subcommand.

Each suite returns a JSON-serializable report with case counts and a list
of failure descriptions (empty when the suite passes).  All randomized
suites are reproducible from their seed.
"""

from __future__ import annotations

import functools
import itertools
import random

from . import fpgroup, sequence, systems, textio
from . import words as w
from .errors import NotDiscrepant, NotLaminarAfterSlide
from .model import (
    LaminarFamily,
    PrimeDecomposition,
    classify_system,
    e_label,
    s_label,
    standard_system,
)
from .oracles import wreath_elements
from .sequence import EductionImage, SpottedMarking


# ---------------------------------------------------------------------------
# alphabets and samplers


def single_letter_paths(manifold: PrimeDecomposition, avoid_factor=None, avoid_handle=None):
    """All length-one pi1 words usable as slide paths under the restrictions."""
    paths = []
    for i in range(1, manifold.k + 1):
        if i == avoid_factor:
            continue
        for _, elem in manifold.type_of(i).pi1.generators():
            paths.append((("g", i, elem),))
    for j in range(1, manifold.ell + 1):
        if j == avoid_handle:
            continue
        paths.append((("x", j, 1),))
        paths.append((("x", j, -1),))
    return paths


def discrepant_alphabet(manifold: PrimeDecomposition) -> list:
    """Slides with single-letter paths, spins, twists and handle swaps."""
    letters = []
    for i in range(1, manifold.k + 1):
        for p in single_letter_paths(manifold, avoid_factor=i):
            letters.append(w.SlideIrr(i, p))
    for j in range(1, manifold.ell + 1):
        paths = single_letter_paths(manifold, avoid_handle=j)
        for sign in (1, -1):
            for p in paths:
                letters.append(w.SlideEnd(j, sign, p))
        for p in paths:
            letters.append(w.SlideHandle(j, p))
    for j in range(1, manifold.ell + 1):
        letters.append(w.Spin(j))
    for i in range(1, manifold.k + 1):
        letters.append(w.Twist(("sep", i)))
    for j in range(1, manifold.ell + 1):
        letters.append(w.Twist(("nonsep", j)))
        letters.append(w.Twist(("assoc", j)))
    for a in range(1, manifold.ell + 1):
        for b in range(a + 1, manifold.ell + 1):
            letters.append(w.SwapHandles(a, b))
    for letter in letters:
        w.check_letter(manifold, letter)
    return letters


def nondiscrepant_alphabet(manifold: PrimeDecomposition) -> list:
    letters = []
    for i in range(1, manifold.k + 1):
        mcg = manifold.type_of(i).mcg
        for elem in mcg.elements() if mcg.is_finite else [e for _, e in mcg.generators()]:
            if not mcg.is_identity(elem):
                letters.append(w.Aut(i, elem))
    for a in range(1, manifold.k + 1):
        for b in range(a + 1, manifold.k + 1):
            if manifold.type_of(a) == manifold.type_of(b):
                letters.append(w.SwapIrr(a, b))
    for letter in letters:
        w.check_letter(manifold, letter)
    return letters


def random_fpword(manifold: PrimeDecomposition, rng: random.Random, max_len=3):
    letters = []
    choices = single_letter_paths(manifold)
    for _ in range(rng.randint(0, max_len)):
        letters.extend(rng.choice(choices))
    return fpgroup.fp_word(manifold, letters)


def random_letter(manifold: PrimeDecomposition, rng: random.Random, mixed=True):
    kinds = ["slideIrr", "slideEnd", "slideHandle", "spin", "twist", "swapHandles"]
    if mixed:
        kinds += ["aut", "swapIrr"]
    while True:
        kind = rng.choice(kinds)
        if kind == "slideIrr" and manifold.k:
            i = rng.randint(1, manifold.k)
            path = random_fpword(manifold, rng)
            path = tuple(lt for lt in path if not (lt[0] == "g" and lt[1] == i))
            return w.SlideIrr(i, fpgroup.fp_reduce(manifold, path))
        if kind in ("slideEnd", "slideHandle") and manifold.ell:
            j = rng.randint(1, manifold.ell)
            path = random_fpword(manifold, rng)
            path = tuple(lt for lt in path if not (lt[0] == "x" and lt[1] == j))
            path = fpgroup.fp_reduce(manifold, path)
            if kind == "slideEnd":
                return w.SlideEnd(j, rng.choice((1, -1)), path)
            return w.SlideHandle(j, path)
        if kind == "spin" and manifold.ell:
            return w.Spin(rng.randint(1, manifold.ell))
        if kind == "twist":
            refs = [("sep", i) for i in range(1, manifold.k + 1)]
            refs += [
                (knd, j)
                for j in range(1, manifold.ell + 1)
                for knd in ("nonsep", "assoc")
            ]
            if refs:
                return w.Twist(rng.choice(refs))
        if kind == "swapHandles" and manifold.ell >= 2:
            a, b = sorted(rng.sample(range(1, manifold.ell + 1), 2))
            return w.SwapHandles(a, b)
        if kind == "aut" and manifold.k:
            i = rng.randint(1, manifold.k)
            mcg = manifold.type_of(i).mcg
            elems = [
                e for e in (mcg.elements() if mcg.is_finite else [g for _, g in mcg.generators()])
            ]
            return w.Aut(i, rng.choice(elems))
        if kind == "swapIrr":
            pairs = [
                (a, b)
                for a in range(1, manifold.k + 1)
                for b in range(a + 1, manifold.k + 1)
                if manifold.type_of(a) == manifold.type_of(b)
            ]
            if pairs:
                return w.SwapIrr(*rng.choice(pairs))


def random_word(manifold, rng, max_len=6, mixed=True) -> w.Word:
    letters = tuple(
        random_letter(manifold, rng, mixed) for _ in range(rng.randint(0, max_len))
    )
    return w.Word.of(manifold, letters)


# ---------------------------------------------------------------------------
# family enumeration


@functools.lru_cache(maxsize=None)
def enumerate_symmetric(manifold: PrimeDecomposition):
    """All symmetric laminar families over the manifold's labels.

    A symmetric system has exactly k+l blocks (classifier condition), so
    enumerating the (k+l)-subsets of pairwise-compatible blocks covers all
    laminar families that could classify symmetric; the classifier filters.
    Returns (families, number of laminar candidates examined).
    """
    labels = manifold.labels()
    blocks = []
    for r in range(1, len(labels)):
        for combo in itertools.combinations(labels, r):
            blocks.append(frozenset(combo))
    n = len(blocks)

    def compat(a, b):
        return a <= b or b <= a or not (a & b)

    size = manifold.k + manifold.ell
    laminar_count = 0
    out = []
    for combo in itertools.combinations(range(n), size):
        if all(compat(blocks[a], blocks[b]) for a, b in itertools.combinations(combo, 2)):
            laminar_count += 1
            fam = LaminarFamily.of([blocks[i] for i in combo])
            cls = classify_system(manifold, fam)
            if cls.is_symmetric:
                out.append((fam, cls))
    return tuple(out), laminar_count


def allowable_assignments(manifold: PrimeDecomposition, cls):
    """All allowable assignments onto a classified symmetric family."""
    from .model import Assignment

    type_classes = manifold.type_classes()
    class_perms = [list(itertools.permutations(c)) for c in type_classes]
    nonsep = list(cls.nonsep_blocks)
    for combo in itertools.product(*class_perms):
        perm = {}
        for cls_members, images in zip(type_classes, combo):
            perm.update(dict(zip(cls_members, images)))
        for block_order in itertools.permutations(nonsep):
            for sides in itertools.product(("in", "out"), repeat=manifold.ell):
                mapping = {}
                for i in range(1, manifold.k + 1):
                    mapping[("d", i)] = (frozenset({s_label(perm[i])}), None)
                for j in range(1, manifold.ell + 1):
                    block = block_order[j - 1]
                    side = sides[j - 1]
                    other = "out" if side == "in" else "in"
                    mapping[("d", j, 1)] = (block, side)
                    mapping[("d", j, -1)] = (block, other)
                yield Assignment.of(mapping)


# ---------------------------------------------------------------------------
# suites


def exactness_suite(manifold: PrimeDecomposition, max_len=4, mixed_len=3) -> dict:
    """Exact-sequence checks: kernel letters educe trivially, lift sections
    educe back, kernel membership matches discrepant factorization."""
    failures = []
    identity = sequence.identity_image(manifold)
    alphabet = discrepant_alphabet(manifold)
    words_checked = 0
    for length in range(0, max_len + 1):
        for combo in itertools.product(alphabet, repeat=length):
            words_checked += 1
            if sequence.educe(w.Word(manifold, combo)) != identity:
                failures.append(
                    "discrepant word educes non-trivially: "
                    + textio.word_text(w.Word(manifold, combo))
                )
    elements = 0
    oracles = [manifold.type_of(i).mcg for i in range(1, manifold.k + 1)]
    for perm, tokens in wreath_elements(oracles, manifold.type_classes()):
        elements += 1
        image = EductionImage(
            tuple(perm[i] for i in range(1, manifold.k + 1)),
            tuple(tokens[i] for i in range(1, manifold.k + 1)),
        )
        lifted = sequence.lift(manifold, image)
        if sequence.educe(lifted) != image:
            failures.append(
                f"educe(lift(h)) != h for {textio.image_to_jsonable(manifold, image)}"
            )
    mixed = alphabet + nondiscrepant_alphabet(manifold)
    std = standard_system(manifold)
    mixed_words = 0
    kernel_words = 0
    for length in range(0, mixed_len + 1):
        for combo in itertools.product(mixed, repeat=length):
            mixed_words += 1
            word = w.Word(manifold, combo)
            in_kernel = sequence.is_discrepant(word)
            if not in_kernel:
                try:
                    sequence.factor_discrepant(word)
                    failures.append(
                        "factor_discrepant accepted a non-kernel word: "
                        + textio.word_text(word)
                    )
                except NotDiscrepant:
                    pass
                continue
            kernel_words += 1
            factored = sequence.factor_discrepant(word)
            if any(not w.is_discrepant_letter(lt) for lt in factored.letters):
                failures.append(
                    "factor_discrepant left non-discrepant letters in "
                    + textio.word_text(word)
                )
                continue
            if factored.letters == word.letters:
                continue  # syntactically unchanged: actions trivially equal
            if fpgroup.aut_of_word(manifold, word) != fpgroup.aut_of_word(
                manifold, factored
            ):
                failures.append(
                    "pi1 action changed by factoring: " + textio.word_text(word)
                )
                continue
            if _system_outcome(manifold, word, std) != _system_outcome(
                manifold, factored, std
            ):
                failures.append(
                    "system action changed by factoring: " + textio.word_text(word)
                )
    return {
        "suite": "exactness",
        "discrepant_words": words_checked,
        "wreath_elements": elements,
        "mixed_words": mixed_words,
        "kernel_words": kernel_words,
        "failures": failures,
        "ok": not failures,
    }


def _system_outcome(manifold, word, family):
    try:
        return systems.act_system(manifold, word, family)
    except NotLaminarAfterSlide:
        return "not-laminar"


def normalization_suite(manifold: PrimeDecomposition) -> dict:
    """Every symmetric family and allowable assignment is realized exactly."""
    failures = []
    symmetric, laminar_count = enumerate_symmetric(manifold)
    std = standard_system(manifold)
    assignments = 0
    unreachable = 0
    for fam, cls in symmetric:
        for assignment in allowable_assignments(manifold, cls):
            assignments += 1
            try:
                word = systems.normalize_system(manifold, fam, assignment)
            except Exception as exc:  # Unreachable or any defect
                unreachable += 1
                failures.append(
                    f"normalize failed on {[textio.block_text(b) for b in fam.blocks]}: {exc}"
                )
                continue
            if systems.act_system(manifold, word, std) != fam:
                failures.append(
                    "normalized word misses the family: " + textio.word_text(word)
                )
            if systems.trace_assignment(manifold, word) != assignment:
                failures.append(
                    "normalized word induces the wrong assignment: "
                    + textio.word_text(word)
                )
            swapless = w.Word(
                manifold,
                tuple(lt for lt in word.letters if not isinstance(lt, w.SwapIrr)),
            )
            if not sequence.is_discrepant(swapless):
                failures.append(
                    "slide/spin/swap part is not discrepant: " + textio.word_text(word)
                )
    return {
        "suite": "normalization",
        "laminar_candidates": laminar_count,
        "symmetric_families": len(symmetric),
        "assignments": assignments,
        "unreachable": unreachable,
        "failures": failures[:20],
        "ok": not failures,
    }


def pi1_suite(manifold: PrimeDecomposition, seed=7, pairs=300, max_len=6) -> dict:
    """Homomorphism property plus the abelianization cross-check."""
    rng = random.Random(seed)
    failures = []
    gens = fpgroup.generator_words(manifold)
    for _ in range(pairs):
        w1 = random_word(manifold, rng, max_len=max_len // 2)
        w2 = random_word(manifold, rng, max_len=max_len - max_len // 2)
        combined = w.compose(w1, w2)
        for _, gen_word in gens:
            lhs = fpgroup.act_pi1(manifold, combined, gen_word)
            rhs = fpgroup.act_pi1(
                manifold, w2, fpgroup.act_pi1(manifold, w1, gen_word)
            )
            if lhs != rhs:
                failures.append(
                    "homomorphism violated: "
                    + textio.word_text(w1)
                    + " | "
                    + textio.word_text(w2)
                )
                break
    ab_checked = 0
    for _ in range(60):
        word = random_word(manifold, rng, max_len=max_len)
        ab_checked += 1
        direct = fpgroup.abelianized_action(manifold, word)
        via_table = fpgroup.abelianize_table(fpgroup.aut_of_word(manifold, word))
        if direct.images != via_table.images:
            failures.append("abelianization mismatch: " + textio.word_text(word))
    for j in range(1, manifold.ell + 1):
        spin_ab = fpgroup.abelianized_action(manifold, w.Word(manifold, (w.Spin(j),)))
        expected = [0] * manifold.ell
        expected[j - 1] = -1
        img = spin_ab.image_of(("x", j))
        if list(img[1]) != expected or any(
            not oracle_identity(manifold, i, img[0][i - 1])
            for i in range(1, manifold.k + 1)
        ):
            failures.append(f"spin({j}) does not abelianize to -1 on x{j}")
    refs = [("sep", i) for i in range(1, manifold.k + 1)]
    refs += [
        (kind, j)
        for j in range(1, manifold.ell + 1)
        for kind in ("nonsep", "assoc")
    ]
    for ref in refs:
        word = w.Word(manifold, (w.Twist(ref),))
        if (
            fpgroup.abelianized_action(manifold, word).images
            != fpgroup.identity_ab_action(manifold).images
        ):
            failures.append(f"twist({ref[0]}{ref[1]}) is not homologically trivial")
    return {
        "suite": "pi1",
        "pairs": pairs,
        "ab_cross_checks": ab_checked,
        "failures": failures[:20],
        "ok": not failures,
    }


def oracle_identity(manifold, i, elem):
    oracle, _ = manifold.type_of(i).pi1.abelianized()
    return oracle.is_identity(elem)


def relations_suite(manifold: PrimeDecomposition) -> dict:
    """twist^2 = 1, spin^2 = twist(assoc) with trivial action, spin swaps labels."""
    failures = []
    refs = [("sep", i) for i in range(1, manifold.k + 1)]
    refs += [
        (kind, j)
        for j in range(1, manifold.ell + 1)
        for kind in ("nonsep", "assoc")
    ]
    for ref in refs:
        word = w.Word.of(manifold, (w.Twist(ref), w.Twist(ref)))
        if w.free_reduce(word).letters != ():
            failures.append(f"twist({ref}) squared does not reduce to e")
    symmetric, _ = enumerate_symmetric(manifold)
    gens = fpgroup.generator_words(manifold)
    for j in range(1, manifold.ell + 1):
        spin2 = w.Word.of(manifold, (w.Spin(j), w.Spin(j)))
        reduced = w.free_reduce(spin2)
        if reduced.letters != (w.Twist(("assoc", j)),):
            failures.append(f"spin({j})^2 does not reduce to twist(assoc{j})")
        for _, gen_word in gens:
            if fpgroup.act_pi1(manifold, spin2, gen_word) != gen_word:
                failures.append(f"spin({j})^2 acts non-trivially on pi1")
                break
        spin_word = w.Word.of(manifold, (w.Spin(j),))
        swap = {e_label(j, 1): e_label(j, -1), e_label(j, -1): e_label(j, 1)}
        for fam, _cls in symmetric:
            if systems.act_system(manifold, spin2, fam) != fam:
                failures.append(f"spin({j})^2 moves a symmetric family")
                break
            image = systems.act_system(manifold, spin_word, fam)
            expected = LaminarFamily.of(
                frozenset(swap.get(lab, lab) for lab in b) for b in fam.blocks
            )
            if image != expected:
                failures.append(f"spin({j}) is not the e{j}+/e{j}- label swap")
                break
    return {
        "suite": "relations",
        "twist_refs": len(refs),
        "symmetric_families": len(symmetric),
        "failures": failures[:20],
        "ok": not failures,
    }


def spotted_suite(marking: SpottedMarking, max_len=3) -> dict:
    """Surjectivity of spotted eduction via explicit lifts; kernel match."""
    failures = []
    mcg = marking.cap_type.mcg
    perms = list(itertools.permutations(range(1, marking.spots + 1)))
    targets = [(cap, perm) for cap in mcg.elements() for perm in perms]
    for cap, perm in targets:
        lifted = sequence.spotted_lift(marking, cap, perm)
        if sequence.spotted_educe(marking, lifted) != (cap, perm):
            failures.append(f"spotted lift misses ({mcg.elem_to_text(cap)}, {perm})")
    alphabet = []
    for a in range(1, marking.spots + 1):
        for _, elem in marking.cap_type.pi1.generators():
            alphabet.append(sequence.SpotSlide(a, elem))
        alphabet.append(sequence.SpotTwist(a))
    for a in range(1, marking.spots + 1):
        for b in range(a + 1, marking.spots + 1):
            alphabet.append(sequence.SpotSwap(a, b))
    for elem in mcg.elements():
        if not mcg.is_identity(elem):
            alphabet.append(sequence.CapAut(elem))
    identity = (mcg.identity, tuple(range(1, marking.spots + 1)))
    words = 0
    kernel = 0
    for length in range(0, max_len + 1):
        for combo in itertools.product(alphabet, repeat=length):
            words += 1
            cap, perm = sequence.spotted_educe(marking, combo)
            trivial = (cap, perm) == identity
            expected_trivial = _spotted_expected_trivial(marking, combo)
            if trivial != expected_trivial:
                failures.append(f"kernel mismatch on {combo!r}")
            if trivial:
                kernel += 1
    return {
        "suite": "spotted",
        "surjectivity_targets": len(targets),
        "words": words,
        "kernel_words": kernel,
        "failures": failures[:20],
        "ok": not failures,
    }


def _spotted_expected_trivial(marking, letters) -> bool:
    """Independent kernel oracle: multiply components symbolically."""
    mcg = marking.cap_type.mcg
    cap = mcg.identity
    perm = {i: i for i in range(1, marking.spots + 1)}
    for lt in letters:
        if isinstance(lt, sequence.CapAut):
            cap = mcg.mul(cap, lt.token)
        elif isinstance(lt, sequence.SpotSwap):
            perm = {
                i: (lt.b if v == lt.a else lt.a if v == lt.b else v)
                for i, v in perm.items()
            }
    return mcg.is_identity(cap) and all(perm[i] == i for i in perm)


def roundtrip_suite(manifold: PrimeDecomposition, seed=7, cases=200) -> dict:
    """parse(serialize(x)) == x for manifolds, families, words, assignments."""
    rng = random.Random(seed)
    failures = []
    if textio.parse_manifold(textio.manifold_text(manifold)) != manifold:
        failures.append("manifold round-trip failed")
    symmetric, _ = enumerate_symmetric(manifold)
    for fam, cls in symmetric[: cases // 4]:
        if textio.parse_family(textio.family_text(fam)) != fam:
            failures.append(f"family round-trip failed: {fam}")
    for _ in range(cases):
        word = random_word(manifold, rng, max_len=5)
        text = textio.word_text(word)
        if textio.parse_word(manifold, text) != word:
            failures.append(f"word round-trip failed: {text}")
        u = random_fpword(manifold, rng, max_len=4)
        if textio.parse_fpword(manifold, textio.fpword_text(manifold, u)) != u:
            failures.append("pi1 word round-trip failed")
    for fam, cls in symmetric[:10]:
        for assignment in itertools.islice(
            allowable_assignments(manifold, cls), 4
        ):
            text = textio.assignment_text(assignment)
            if textio.parse_assignment(manifold, text) != assignment:
                failures.append("assignment round-trip failed")
    idx = 0
    oracles = [manifold.type_of(i).mcg for i in range(1, manifold.k + 1)]
    for perm, tokens in wreath_elements(oracles, manifold.type_classes()):
        image = EductionImage(
            tuple(perm[i] for i in range(1, manifold.k + 1)),
            tuple(tokens[i] for i in range(1, manifold.k + 1)),
        )
        data = textio.image_to_jsonable(manifold, image)
        if textio.image_from_jsonable(manifold, data) != image:
            failures.append("eduction image round-trip failed")
        idx += 1
        if idx >= 50:
            break
    return {
        "suite": "roundtrip",
        "cases": cases,
        "failures": failures[:20],
        "ok": not failures,
    }


SUITES = {
    "exactness": exactness_suite,
    "normalization": normalization_suite,
    "pi1": pi1_suite,
    "relations": relations_suite,
    "spotted": spotted_suite,
    "roundtrip": roundtrip_suite,
}
