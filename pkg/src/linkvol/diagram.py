"""Planar diagram (PD) codes and the face and twist-region data read off them.

A crossing is written ``X(a,b,c,d)``: the four edge labels listed
counterclockwise starting from the incoming under-strand.  Slots 0 and 2 are
therefore the under-strand, slots 1 and 3 the over-strand, and edge labels
are shared by exactly two slots.

Corners and faces
-----------------
Corner ``(x, i)`` of crossing ``x`` is the wedge between slots ``i`` and
``i + 1``.  Leaving a corner along the edge in slot ``i + 1`` keeps the
region on the right, and we arrive at the far end of that edge, slot ``j`` of
crossing ``y``, in corner ``(y, j)``.  Iterating this map partitions the
``4c`` corners into the faces of the diagram on the sphere.
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterator, Optional

__all__ = [
    "BigonChain",
    "DiagramError",
    "FaceDecomposition",
    "LinkDiagram",
    "TwistStats",
    "bigon_chain_stats",
    "bigon_chains",
    "borromean_detect",
    "compute_faces",
    "format_pd",
    "is_alternating",
    "iter_batch",
    "parse_pd",
    "reducedness_check",
    "shorten_chains",
    "twist_reduction_violations",
]

Corner = tuple[int, int]
Quad = tuple[int, int, int, int]


class DiagramError(ValueError):
    """Malformed PD input or inconsistent diagram data."""


def _union_find(items):
    parent = {x: x for x in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    return find, union


@dataclass(frozen=True)
class LinkDiagram:
    """A validated PD code.  Immutable; derived data is computed on construction."""

    crossings: tuple[Quad, ...]
    component_count: int = field(init=False)
    positions: dict[int, tuple[Corner, Corner]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.crossings) < 1:
            raise DiagramError("a diagram needs at least one crossing")
        crossings = tuple(tuple(int(v) for v in q) for q in self.crossings)
        if any(len(q) != 4 for q in crossings):
            raise DiagramError("every crossing needs exactly four edge labels")
        object.__setattr__(self, "crossings", crossings)

        occ: dict[int, list[Corner]] = defaultdict(list)
        for x, quad in enumerate(crossings):
            for i, label in enumerate(quad):
                if label <= 0:
                    raise DiagramError(f"edge labels must be positive, got {label}")
                occ[label].append((x, i))
        bad = sorted(lab for lab, where in occ.items() if len(where) != 2)
        if bad:
            lab = bad[0]
            raise DiagramError(
                f"edge label {lab} appears {len(occ[lab])} times (expected exactly 2)"
            )
        positions = {lab: (w[0], w[1]) for lab, w in occ.items()}
        object.__setattr__(self, "positions", positions)

        find, union = _union_find(range(len(crossings)))
        for (x, _), (y, _) in positions.values():
            union(x, y)
        if len({find(x) for x in range(len(crossings))}) != 1:
            raise DiagramError("diagram is disconnected")

        # strands continue straight through a crossing: slot i joins slot i+2
        find, union = _union_find(positions)
        for quad in crossings:
            union(quad[0], quad[2])
            union(quad[1], quad[3])
        object.__setattr__(self, "component_count", len({find(lab) for lab in positions}))

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def edge_count(self) -> int:
        return 2 * len(self.crossings)

    def other_end(self, x: int, i: int) -> Corner:
        """The slot at the far end of the edge in slot ``i`` of crossing ``x``."""
        a, b = self.positions[self.crossings[x][i]]
        return b if a == (x, i) else a


_TERM = r"X\(\d+,\d+,\d+,\d+\)"
_PD_RE = re.compile(rf"{_TERM}(?:,{_TERM})*")
_NUM_RE = re.compile(r"\d+")


def parse_pd(text: str) -> LinkDiagram:
    """Parse ``X(a,b,c,d),X(...),...`` (whitespace ignored) into a diagram."""
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise DiagramError("empty PD code")
    if not _PD_RE.fullmatch(compact):
        raise DiagramError(f"malformed PD code: {text.strip()!r}")
    terms = compact.split("),")
    quads = tuple(tuple(int(v) for v in _NUM_RE.findall(t)) for t in terms)
    return LinkDiagram(quads)


def format_pd(d: LinkDiagram) -> str:
    return ",".join("X({},{},{},{})".format(*q) for q in d.crossings)


def iter_batch(lines) -> Iterator[tuple[int, str, Optional[LinkDiagram], Optional[Exception]]]:
    """Yield ``(line_number, name, diagram, error)`` for each ``name: PD`` line.

    Blank lines and ``#`` comments are skipped.  Exactly one of ``diagram``
    and ``error`` is set.
    """
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, rest = line.partition(":")
        name = name.strip()
        if not sep or not name:
            yield lineno, name or f"line{lineno}", None, DiagramError(
                "expected 'name: X(...),...'"
            )
            continue
        try:
            yield lineno, name, parse_pd(rest), None
        except DiagramError as exc:
            yield lineno, name, None, exc


@dataclass(frozen=True)
class FaceDecomposition:
    """Complementary regions of a diagram on the sphere.

    ``faces[k]`` is the cyclic sequence of corners of face ``k`` and
    ``face_edges[k]`` the edge labels crossed between consecutive corners.
    ``corner_faces[x]`` lists the faces at corners 0..3 of crossing ``x``
    (counterclockwise), ``edge_faces[label]`` the faces on the two sides of
    an edge and ``edge_ends[label]`` the two (crossing, slot) ends of it.
    """

    faces: tuple[tuple[Corner, ...], ...]
    face_edges: tuple[tuple[int, ...], ...]
    corner_faces: tuple[tuple[int, int, int, int], ...]
    edge_faces: dict[int, tuple[int, int]]
    edge_ends: dict[int, tuple[Corner, Corner]]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.faces)

    @property
    def b(self) -> dict[int, int]:
        return dict(sorted(Counter(self.sizes).items()))

    @property
    def adjacency(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(p) for p in self.edge_faces.values() if p[0] != p[1])

    def euler_defect(self) -> int:
        """sum (4 - i) b_i, which is 8 for any connected diagram on the sphere."""
        return sum((4 - i) * k for i, k in self.b.items())


def compute_faces(d: LinkDiagram) -> FaceDecomposition:
    c = d.crossing_count
    face_of: dict[Corner, int] = {}
    faces: list[tuple[Corner, ...]] = []
    face_edges: list[tuple[int, ...]] = []
    for start in ((x, i) for x in range(c) for i in range(4)):
        if start in face_of:
            continue
        k = len(faces)
        corners, edges = [], []
        cur = start
        while cur not in face_of:
            face_of[cur] = k
            corners.append(cur)
            x, i = cur
            slot = (i + 1) % 4
            edges.append(d.crossings[x][slot])
            cur = d.other_end(x, slot)
        if cur != start:
            raise DiagramError(f"face traversal from {start} re-entered at {cur}")
        faces.append(tuple(corners))
        face_edges.append(tuple(edges))

    if len(faces) != c + 2:
        raise DiagramError(
            f"found {len(faces)} faces for {c} crossings (expected {c + 2}); "
            "the PD code is not a planar diagram"
        )
    corner_faces = tuple(tuple(face_of[(x, i)] for i in range(4)) for x in range(c))
    edge_faces = {}
    for label, ((x, i), _) in d.positions.items():
        edge_faces[label] = (face_of[(x, (i - 1) % 4)], face_of[(x, i)])
    return FaceDecomposition(
        tuple(faces), tuple(face_edges), corner_faces, edge_faces, dict(d.positions)
    )


def is_alternating(d: LinkDiagram) -> bool:
    """Every edge runs from an over-crossing to an under-crossing."""
    return all(a[1] % 2 != b[1] % 2 for a, b in d.positions.values())


def reducedness_check(d: LinkDiagram, f: FaceDecomposition) -> tuple[bool, list[int]]:
    """Flag nugatory crossings: the same face at two opposite corners."""
    offenders = [
        x for x, cf in enumerate(f.corner_faces) if cf[0] == cf[2] or cf[1] == cf[3]
    ]
    return not offenders, offenders


@dataclass(frozen=True)
class BigonChain:
    """A maximal end-to-end run of bigons (or a lone crossing).

    ``crossings`` are in order along the chain.  ``side_faces`` are the two
    faces running along the chain and ``end_faces`` the faces capping its two
    ends; both are None for a lone crossing, which has no preferred direction.
    """

    crossings: tuple[int, ...]
    bigons: tuple[int, ...]
    side_faces: Optional[tuple[int, int]]
    end_faces: Optional[tuple[int, int]]

    @property
    def length(self) -> int:
        return len(self.crossings)


def bigon_chains(d: LinkDiagram, f: FaceDecomposition) -> list[BigonChain]:
    """Maximal bigon chains, ordered by their smallest crossing.

    Raises DiagramError for configurations the chain definition does not
    cover: bigons side by side at a crossing, a bigon with both corners at one
    crossing, or a closed ring of bigons.
    """
    sizes = f.sizes
    bigon_at: dict[int, list[int]] = defaultdict(list)  # crossing -> bigon corners
    bigon_crossings: dict[int, list[int]] = defaultdict(list)
    for x, cf in enumerate(f.corner_faces):
        for i, face in enumerate(cf):
            if sizes[face] == 2:
                bigon_at[x].append(i)
                bigon_crossings[face].append(x)
    for face, xs in bigon_crossings.items():
        if len(set(xs)) != 2:
            raise DiagramError(f"bigon face {face} has both corners at crossing {xs[0]}")
    for x, corners in bigon_at.items():
        if len(corners) > 2 or (len(corners) == 2 and (corners[1] - corners[0]) % 2 == 1):
            raise DiagramError(f"side-by-side bigons at crossing {x}: ambiguous chain")

    find, union = _union_find(range(d.crossing_count))
    for x, y in bigon_crossings.values():
        union(x, y)
    groups: dict[int, list[int]] = defaultdict(list)
    for x in range(d.crossing_count):
        groups[find(x)].append(x)

    chains: list[BigonChain] = []
    for members in groups.values():
        if len(members) == 1:
            chains.append(BigonChain((members[0],), (), None, None))
            continue
        ends = [x for x in members if len(bigon_at[x]) == 1]
        if not ends:
            raise DiagramError(
                f"bigons through crossings {sorted(members)} close up into a ring"
            )
        start = min(ends)
        order, bigons = [start], []
        while True:
            here = order[-1]
            nxt = [f.corner_faces[here][i] for i in bigon_at[here]]
            nxt = [bg for bg in nxt if not bigons or bg != bigons[-1]]
            if not nxt:
                break
            bigons.append(nxt[0])
            order.append(next(z for z in bigon_crossings[nxt[0]] if z != here))
        first = bigon_at[start][0]
        cf = f.corner_faces[start]
        last = order[-1]
        sides = (cf[(first + 1) % 4], cf[(first + 3) % 4])
        ends_ = (cf[(first + 2) % 4], f.corner_faces[last][(bigon_at[last][0] + 2) % 4])
        chains.append(BigonChain(tuple(order), tuple(bigons), sides, ends_))
    chains.sort(key=lambda ch: min(ch.crossings))
    return chains


@dataclass(frozen=True)
class TwistStats:
    """Census of maximal bigon chains by crossing length."""

    chain_lengths: tuple[int, ...]

    @property
    def twist_number(self) -> int:
        return len(self.chain_lengths)

    @property
    def t(self) -> dict[int, int]:
        return dict(sorted(Counter(self.chain_lengths).items()))

    @property
    def g(self) -> dict[int, int]:
        top = max(self.chain_lengths, default=0)
        return {i: self.g_at(i) for i in range(1, top + 2)}

    def t_at(self, i: int) -> int:
        """Number of chains of crossing length exactly ``i``."""
        return sum(1 for k in self.chain_lengths if k == i)

    def g_at(self, i: int) -> int:
        """Number of chains of crossing length at least ``i``."""
        return sum(1 for k in self.chain_lengths if k >= i)

    @classmethod
    def from_counts(cls, t: dict[int, int]) -> "TwistStats":
        lengths = []
        for i, k in sorted(t.items()):
            if i < 1 or k < 0:
                raise ValueError(f"bad twist count t_{i} = {k}")
            lengths.extend([i] * k)
        return cls(tuple(lengths))


def bigon_chain_stats(d: LinkDiagram, f: FaceDecomposition) -> TwistStats:
    chains = bigon_chains(d, f)
    stats = TwistStats(tuple(sorted(ch.length for ch in chains)))
    assert sum(stats.chain_lengths) == d.crossing_count
    return stats


def twist_reduction_violations(
    d: LinkDiagram, f: FaceDecomposition, chains: Optional[list[BigonChain]] = None
) -> list[tuple[int, int]]:
    """Pairs of crossings in different chains that share two opposite faces.

    Such a pair is joined by a loop through the two faces that a flype could
    collapse into one twist region, so a twist-reduced diagram has none.  This
    only detects that direct configuration; an empty result does not prove the
    diagram twist reduced.
    """
    chains = bigon_chains(d, f) if chains is None else chains
    chain_of = {x: k for k, ch in enumerate(chains) for x in ch.crossings}
    by_pair: dict[frozenset[int], list[int]] = defaultdict(list)
    for x, cf in enumerate(f.corner_faces):
        for i in (0, 1):
            if cf[i] != cf[i + 2]:
                by_pair[frozenset((cf[i], cf[i + 2]))].append(x)
    out = set()
    for xs in by_pair.values():
        for a in xs:
            for b in xs:
                if a < b and chain_of[a] != chain_of[b]:
                    out.add((a, b))
    return sorted(out)


def shorten_chains(
    d: LinkDiagram, f: FaceDecomposition, chains: list[BigonChain]
) -> LinkDiagram:
    """Cut each chain down to two crossings joined by a single bigon.

    Interior crossings are smoothed so that the bigons on either side merge;
    the two side faces of a chain of length k lose k - 2 edges each.  The
    result is planar but in general no longer alternating.
    """
    sizes = f.sizes
    drop: set[int] = set()
    find, union = _union_find(d.positions)
    for ch in chains:
        bigons = set(ch.bigons)
        for x in ch.crossings[1:-1]:
            cf = f.corner_faces[x]
            i = next(k for k in range(4) if cf[k] in bigons and sizes[cf[k]] == 2)
            q = d.crossings[x]
            union(q[(i + 1) % 4], q[(i + 2) % 4])
            union(q[(i + 3) % 4], q[i])
            drop.add(x)
    if not drop:
        return d
    kept = [x for x in range(d.crossing_count) if x not in drop]
    return LinkDiagram(tuple(tuple(find(lab) for lab in d.crossings[x]) for x in kept))


def borromean_detect(d: LinkDiagram, f: FaceDecomposition) -> bool:
    """The standard six-crossing alternating Borromean rings diagram."""
    return (
        d.crossing_count == 6
        and d.component_count == 3
        and is_alternating(d)
        and f.b == {3: 8}
    )
