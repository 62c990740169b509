"""Manifold description, boundary labels, sphere-system encoding and classifier.

A reducible 3-manifold W is described by its prime decomposition: k
irreducible summands (each an opaque :class:`HomeoType` carrying group
oracles) plus l handles (S^2 x S^1 summands).  Cutting W along the standard
symmetric system leaves a holed 3-sphere whose boundary spheres are the
label universe L: one label s(i) per summand and a pair e(j,+), e(j,-) per
handle.  A sphere system normalized into that holed sphere is encoded by
what each sphere encloses: a laminar multiset of subsets of L.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidFamily, NotReducible, NotSymmetric, OracleError
from .oracles import CyclicOracle, FreeAbelianOracle, GroupOracle, OracleAut

# ---------------------------------------------------------------------------
# labels

Label = tuple  # ('s', i) or ('e', j, +1/-1)


def s_label(i: int) -> Label:
    return ("s", i)


def e_label(j: int, sign: int) -> Label:
    return ("e", j, sign)


def label_key(lab: Label):
    if lab[0] == "s":
        return (0, lab[1], 0)
    return (1, lab[1], 0 if lab[2] == 1 else 1)


def label_text(lab: Label) -> str:
    if lab[0] == "s":
        return f"s{lab[1]}"
    return f"e{lab[1]}{'+' if lab[2] == 1 else '-'}"


def block_key(block: frozenset):
    return (len(block), sorted(label_key(l) for l in block))


def block_text(block: frozenset) -> str:
    inner = ",".join(label_text(l) for l in sorted(block, key=label_key))
    return "{" + inner + "}"


# ---------------------------------------------------------------------------
# homeomorphism types and prime decompositions


@dataclass(frozen=True)
class HomeoType:
    """An irreducible summand type: pi1 and mcg oracles plus the mcg action.

    ``act`` maps mcg elements to automorphism tables on the pi1 oracle.
    Every mcg generator must have a table, tables must extend to a
    homomorphism (kind-specific relation checks), and each table must be
    invertible through a declared or derivable inverse token.
    """

    name: str
    pi1: GroupOracle
    mcg: GroupOracle
    act: tuple[tuple[object, OracleAut], ...] = ()

    def __post_init__(self):
        declared = dict(self.act)
        for m, table in declared.items():
            self.mcg.check_element(m)
            if table.oracle != self.pi1:
                raise OracleError(
                    f"type {self.name}: action table of {self.mcg.elem_to_text(m)} "
                    "is not an automorphism of the pi1 oracle"
                )
        for gen_name, gen_elem in self.mcg.generators():
            if gen_elem not in declared:
                raise OracleError(
                    f"type {self.name}: mcg generator {gen_name} has no action table"
                )
        self._validate_relations(declared)
        for m in declared:
            table = self.pi1_table(m)
            inv_table = self.pi1_table(self.mcg.inv(m))
            if not table.then(inv_table).is_identity() or not inv_table.then(
                table
            ).is_identity():
                raise OracleError(
                    f"type {self.name}: action of {self.mcg.elem_to_text(m)} "
                    "is not invertible by its inverse token"
                )

    def _validate_relations(self, declared) -> None:
        mcg = self.mcg
        if isinstance(mcg, CyclicOracle):
            if mcg.order > 1:
                t = declared[mcg.generator("g1")]
                power = OracleAut.identity_aut(self.pi1)
                for _ in range(mcg.order):
                    power = power.then(t)
                if not power.is_identity():
                    raise OracleError(
                        f"type {self.name}: generator action does not have "
                        f"order dividing {mcg.order}"
                    )
        elif mcg.is_finite:  # table oracle: full homomorphism check
            for a, ta in declared.items():
                for b, tb in declared.items():
                    if self.pi1_table(mcg.mul(a, b)) != ta.then(tb):
                        raise OracleError(
                            f"type {self.name}: action tables are not a "
                            "homomorphism"
                        )
        elif isinstance(mcg, FreeAbelianOracle):
            tables = [declared[e] for _, e in mcg.generators()]
            for i, ti in enumerate(tables):
                for tj in tables[i + 1 :]:
                    if ti.then(tj) != tj.then(ti):
                        raise OracleError(
                            f"type {self.name}: abelian mcg actions do not commute"
                        )

    def pi1_table(self, m) -> OracleAut:
        """Automorphism table of an arbitrary mcg element."""
        declared = dict(self.act)
        if m in declared:
            return declared[m]
        out = OracleAut.identity_aut(self.pi1)
        for gen_name, sign in self.mcg.express(m):
            gen_elem = self.mcg.generator(gen_name)
            if sign > 0:
                step = declared[gen_elem]
            else:
                inv_elem = self.mcg.inv(gen_elem)
                step = declared.get(inv_elem)
                if step is None:
                    step = declared[gen_elem].inverse()
            out = out.then(step)
        return out


@dataclass(frozen=True)
class PrimeDecomposition:
    """W as an ordered list of irreducible summand types plus a handle count."""

    summands: tuple[HomeoType, ...]
    handles: int

    def __post_init__(self):
        if self.handles < 0:
            raise ValueError("handle count must be >= 0")
        if self.handles == 0 and len(self.summands) < 2:
            raise NotReducible(
                f"k={len(self.summands)}, l={self.handles}: W is not reducible"
            )

    @property
    def k(self) -> int:
        return len(self.summands)

    @property
    def ell(self) -> int:
        return self.handles

    def type_of(self, i: int) -> HomeoType:
        if not 1 <= i <= self.k:
            raise IndexError(f"summand index {i} out of range 1..{self.k}")
        return self.summands[i - 1]

    def labels(self) -> tuple[Label, ...]:
        labs = [s_label(i) for i in range(1, self.k + 1)]
        for j in range(1, self.ell + 1):
            labs.append(e_label(j, 1))
            labs.append(e_label(j, -1))
        return tuple(sorted(labs, key=label_key))

    def type_classes(self) -> list[list[int]]:
        """Summand indices grouped by shared HomeoType, in index order."""
        classes: list[tuple[HomeoType, list[int]]] = []
        for i in range(1, self.k + 1):
            t = self.type_of(i)
            for ct, members in classes:
                if ct == t:
                    members.append(i)
                    break
            else:
                classes.append((t, [i]))
        return [members for _, members in classes]


# ---------------------------------------------------------------------------
# laminar families


@dataclass(frozen=True)
class LaminarFamily:
    """A sphere system in the holed sphere: a canonical multiset of blocks."""

    blocks: tuple[frozenset, ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[Label]]) -> "LaminarFamily":
        canon = tuple(sorted((frozenset(b) for b in blocks), key=block_key))
        return cls(canon)

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)


@dataclass(frozen=True)
class Violation:
    code: str  # 'unknown-label' | 'empty-block' | 'full-block' | 'overlap'
    blocks: tuple[frozenset, ...]
    message: str


@dataclass(frozen=True)
class LaminarReport:
    ok: bool
    violations: tuple[Violation, ...]
    duplicates: tuple[frozenset, ...]


def validate_laminar(manifold: PrimeDecomposition, blocks) -> LaminarReport:
    """Check the laminar family invariants; returns diagnostics, never raises."""
    universe = set(manifold.labels())
    blocks = [frozenset(b) for b in blocks]
    violations: list[Violation] = []
    for b in blocks:
        stray = b - universe
        if stray:
            violations.append(
                Violation(
                    "unknown-label",
                    (b,),
                    f"block {block_text(b)} uses labels outside L: "
                    + ",".join(sorted(label_text(l) for l in stray)),
                )
            )
        if not b:
            violations.append(Violation("empty-block", (b,), "empty block"))
        if b == frozenset(universe):
            violations.append(
                Violation("full-block", (b,), f"block equals L: {block_text(b)}")
            )
    ordered = sorted(set(blocks), key=block_key)
    for idx, a in enumerate(ordered):
        for b in ordered[idx + 1 :]:
            inter = a & b
            if inter and not (a <= b or b <= a):
                violations.append(
                    Violation(
                        "overlap",
                        (a, b),
                        f"blocks {block_text(a)} and {block_text(b)} overlap "
                        "without nesting",
                    )
                )
                break
        if any(v.code == "overlap" for v in violations):
            break
    seen: dict[frozenset, int] = {}
    for b in blocks:
        seen[b] = seen.get(b, 0) + 1
    duplicates = tuple(
        sorted((b for b, n in seen.items() if n > 1), key=block_key)
    )
    return LaminarReport(not violations, tuple(violations), duplicates)


ROOT = -1  # chamber id of the root (basepoint) chamber


class Forest:
    """Nesting forest of a canonical block tuple plus chamber bookkeeping.

    Chambers are identified with block indices (the region between a block
    and its children) plus ``ROOT`` for the region outside all blocks.
    Equal (parallel) blocks are chained by index: the later copy nests
    inside the earlier one.
    """

    def __init__(self, manifold: PrimeDecomposition, blocks: tuple[frozenset, ...]):
        self.manifold = manifold
        self.blocks = tuple(blocks)
        n = len(self.blocks)
        self.parent: list[int] = [ROOT] * n
        for i, b in enumerate(self.blocks):
            candidates = [
                j
                for j in range(n)
                if j != i
                and b <= self.blocks[j]
                and (b != self.blocks[j] or j < i)
            ]
            if candidates:
                self.parent[i] = min(
                    candidates, key=lambda j: (len(self.blocks[j]), -j)
                )
        self.children: dict[int, list[int]] = {ROOT: []}
        for i in range(n):
            self.children.setdefault(i, [])
        for i, p in enumerate(self.parent):
            self.children.setdefault(p, []).append(i)

    def chamber_of_label(self, lab: Label) -> int:
        containing = [
            i for i, b in enumerate(self.blocks) if lab in b
        ]
        if not containing:
            return ROOT
        return min(containing, key=lambda i: (len(self.blocks[i]), -i))

    def census(self, chamber: int) -> frozenset:
        if chamber == ROOT:
            inside = set()
            for i, p in enumerate(self.parent):
                if p == ROOT:
                    inside |= self.blocks[i]
            return frozenset(set(self.manifold.labels()) - inside)
        covered = set()
        for c in self.children.get(chamber, []):
            covered |= self.blocks[c]
        return frozenset(self.blocks[chamber] - covered)

    def path_between(self, a: int, b: int) -> list[int]:
        """Block indices crossed walking from chamber a to chamber b."""

        def to_root(c: int) -> list[int]:
            out = []
            while c != ROOT:
                out.append(c)
                c = self.parent[c]
            return out

        pa, pb = to_root(a), to_root(b)
        sa, sb = set(pa), set(pb)
        crossings = [c for c in pa if c not in sb] + [c for c in pb if c not in sa]
        return crossings

    def depth(self, c: int) -> int:
        d = 0
        while c != ROOT:
            c = self.parent[c]
            d += 1
        return d


def is_separating(manifold: PrimeDecomposition, block: frozenset) -> bool:
    """True iff cutting W on this sphere disconnects W.

    A sphere separates iff no handle runs from inside to outside, i.e. the
    block contains both or neither end of every handle.
    """
    for j in range(1, manifold.ell + 1):
        if len(block & {e_label(j, 1), e_label(j, -1)}) == 1:
            return False
    return True


@dataclass(frozen=True)
class BlockInfo:
    block: frozenset
    separating: bool
    census: frozenset  # labels of the chamber between the block and its children


@dataclass(frozen=True)
class SystemClass:
    per_block: tuple[BlockInfo, ...]
    is_symmetric: bool
    summand_blocks: tuple[tuple[int, frozenset], ...] = ()  # (i, block) when symmetric
    nonsep_blocks: tuple[frozenset, ...] = ()

    def summand_block_of(self, i: int) -> frozenset:
        for idx, b in self.summand_blocks:
            if idx == i:
                return b
        raise KeyError(i)


def classify_system(manifold: PrimeDecomposition, family: LaminarFamily) -> SystemClass:
    """Classify a family; decide whether it is a symmetric system.

    Symmetric means: k+l blocks with no parallel pair; the separating blocks
    are exactly the singletons {s(i)}, one per summand (those cut off the
    one-holed summands); the other l blocks are non-separating; and cutting
    on all blocks then regluing e(j,+)~e(j,-) leaves a single connected
    holed-sphere piece.
    """
    report = validate_laminar(manifold, family.blocks)
    if not report.ok:
        raise InvalidFamily(report.violations[0].message)
    forest = Forest(manifold, family.blocks)
    infos = []
    for i, b in enumerate(family.blocks):
        infos.append(
            BlockInfo(b, is_separating(manifold, b), forest.census(i))
        )
    k, ell = manifold.k, manifold.ell
    symmetric = not report.duplicates and len(family.blocks) == k + ell
    summand_blocks: list[tuple[int, frozenset]] = []
    nonsep: list[frozenset] = []
    if symmetric:
        sep = [info.block for info in infos if info.separating]
        expected = {frozenset({s_label(i)}): i for i in range(1, k + 1)}
        if len(sep) != k or set(sep) != set(expected):
            symmetric = False
        else:
            summand_blocks = sorted(
                ((expected[b], b) for b in sep), key=lambda t: t[0]
            )
            nonsep = [info.block for info in infos if not info.separating]
    if symmetric and ell:
        # connectivity of the non-summand chambers under handle regluing
        sblocks = {b for _, b in summand_blocks}
        summand_idx = {
            i for i, b in enumerate(family.blocks) if b in sblocks
        }
        nodes = {ROOT} | {
            i for i in range(len(family.blocks)) if i not in summand_idx
        }
        adj: dict[int, set[int]] = {n: set() for n in nodes}
        ok = True
        for j in range(1, ell + 1):
            a = forest.chamber_of_label(e_label(j, 1))
            b = forest.chamber_of_label(e_label(j, -1))
            if a not in nodes or b not in nodes or a == b:
                ok = False
                break
            adj[a].add(b)
            adj[b].add(a)
        if ok:
            seen = {ROOT}
            stack = [ROOT]
            while stack:
                for nxt in adj[stack.pop()]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            ok = seen == nodes
        symmetric = ok
    return SystemClass(
        per_block=tuple(infos),
        is_symmetric=symmetric,
        summand_blocks=tuple(summand_blocks) if symmetric else (),
        nonsep_blocks=tuple(sorted(nonsep, key=block_key)) if symmetric else (),
    )


def standard_system(manifold: PrimeDecomposition) -> LaminarFamily:
    """The canonical symmetric system: singletons {s(i)} and {e(j,+)}."""
    blocks = [frozenset({s_label(i)}) for i in range(1, manifold.k + 1)]
    blocks += [frozenset({e_label(j, 1)}) for j in range(1, manifold.ell + 1)]
    return LaminarFamily.of(blocks)


def associated_separating(manifold: PrimeDecomposition, j: int) -> frozenset:
    """The separating sphere around both ends of handle j."""
    if not 1 <= j <= manifold.ell:
        raise IndexError(f"handle index {j} out of range 1..{manifold.ell}")
    return frozenset({e_label(j, 1), e_label(j, -1)})


# ---------------------------------------------------------------------------
# allowable assignments

# token: ('d', i) for summand duplicates, ('d', j, +1/-1) for handle duplicates
# target: (block, side) with side None for summand blocks, 'in'/'out' otherwise


@dataclass(frozen=True)
class Assignment:
    entries: tuple[tuple[tuple, tuple], ...]

    @classmethod
    def of(cls, mapping: dict) -> "Assignment":
        return cls(tuple(sorted(mapping.items())))

    def as_dict(self) -> dict:
        return dict(self.entries)

    def target_of(self, token):
        for tok, target in self.entries:
            if tok == token:
                return target
        raise KeyError(token)


def identity_assignment(manifold: PrimeDecomposition) -> Assignment:
    mapping = {}
    for i in range(1, manifold.k + 1):
        mapping[("d", i)] = (frozenset({s_label(i)}), None)
    for j in range(1, manifold.ell + 1):
        block = frozenset({e_label(j, 1)})
        mapping[("d", j, 1)] = (block, "in")
        mapping[("d", j, -1)] = (block, "out")
    return Assignment.of(mapping)


def allowable(
    manifold: PrimeDecomposition, family: LaminarFamily, assignment: Assignment
) -> bool:
    """True iff the assignment is allowable onto the (symmetric) family."""
    cls = classify_system(manifold, family)
    if not cls.is_symmetric:
        raise NotSymmetric("allowable assignments target symmetric systems only")
    mapping = assignment.as_dict()
    expected_tokens = {("d", i) for i in range(1, manifold.k + 1)} | {
        ("d", j, s)
        for j in range(1, manifold.ell + 1)
        for s in (1, -1)
    }
    if set(mapping) != expected_tokens:
        return False
    summand_of_block = {b: i for i, b in cls.summand_blocks}
    nonsep = set(cls.nonsep_blocks)
    hit = set()
    for i in range(1, manifold.k + 1):
        block, side = mapping[("d", i)]
        if side is not None or block not in summand_of_block:
            return False
        if manifold.type_of(summand_of_block[block]) != manifold.type_of(i):
            return False
        if (block, None) in hit:
            return False
        hit.add((block, None))
    for j in range(1, manifold.ell + 1):
        bp, sp = mapping[("d", j, 1)]
        bm, sm = mapping[("d", j, -1)]
        if bp != bm or bp not in nonsep:
            return False
        if {sp, sm} != {"in", "out"}:
            return False
        if (bp, sp) in hit or (bm, sm) in hit:
            return False
        hit.add((bp, sp))
        hit.add((bm, sm))
    return True


def summand_permutation(
    manifold: PrimeDecomposition, family: LaminarFamily, assignment: Assignment
) -> dict[int, int]:
    """The summand permutation induced by an allowable assignment.

    perm[i] = the summand whose one-holed piece the image of d(i) cuts off.
    """
    cls = classify_system(manifold, family)
    summand_of_block = {b: i for i, b in cls.summand_blocks}
    perm = {}
    for i in range(1, manifold.k + 1):
        block, _ = assignment.target_of(("d", i))
        perm[i] = summand_of_block[block]
    return perm


def build_manifold(text: str) -> PrimeDecomposition:
    """Parse a manifold description (see docs/formats.md for the grammar)."""
    from . import textio

    return textio.parse_manifold(text)
