"""PD codes for test fixtures, built from braid and plat pictures.

Strands run downward at positions 0..m-1.  A crossing between positions i and
i+1 has top-left, top-right, bottom-left and bottom-right segments; read
counterclockwise from top-left these are TL, BL, BR, TR.  A positive letter
puts the TL-BR strand over, a negative letter the TR-BL strand.
"""

from __future__ import annotations

from itertools import count


class _Labels:
    def __init__(self):
        self.parent = {}
        self.fresh = count(1)

    def new(self):
        k = next(self.fresh)
        self.parent[k] = k
        return k

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def merge(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def _build(strands, word, labels, cur):
    quads = []
    for letter in word:
        i = abs(letter) - 1
        if not 0 <= i < strands - 1:
            raise ValueError(f"letter {letter} out of range")
        tl, tr = cur[i], cur[i + 1]
        bl, br = labels.new(), labels.new()
        cur[i], cur[i + 1] = bl, br
        if letter > 0:
            quads.append([tr, tl, bl, br])  # under strand TR-BL
        else:
            quads.append([tl, bl, br, tr])  # under strand TL-BR
    return quads


def _finish(quads, labels):
    quads = [[labels.find(v) for v in q] for q in quads]
    relabel = {}
    for q in quads:
        for v in q:
            relabel.setdefault(v, len(relabel) + 1)
    return orient([[relabel[v] for v in q] for q in quads])


def orient(quads):
    """Rotate quadruples by 180 degrees where needed so slot 0 is an incoming under-strand."""
    where = {}
    for x, q in enumerate(quads):
        for i, v in enumerate(q):
            where.setdefault(v, []).append((x, i))
    entry = {}
    done = set()
    for start in sorted(where):
        if start in done:
            continue
        x, i = where[start][0]
        # travel along `start` into crossing x at slot i
        lab = start
        while lab not in done:
            done.add(lab)
            if i % 2 == 0:
                entry[x] = i
            out = quads[x][(i + 2) % 4]
            a, b = where[out]
            x, i = b if a == (x, (i + 2) % 4) else a
            lab = out
    res = []
    for x, q in enumerate(quads):
        res.append(q[2:] + q[:2] if entry.get(x, 0) == 2 else list(q))
    return res


def braid_closure(strands, word):
    labels = _Labels()
    top = [labels.new() for _ in range(strands)]
    cur = list(top)
    quads = _build(strands, word, labels, cur)
    for a, b in zip(top, cur):
        labels.merge(a, b)
    return _finish(quads, labels)


def plat_closure(strands, word, caps):
    """Close with the same planar matching ``caps`` of positions at top and bottom."""
    labels = _Labels()
    cur = [None] * strands
    for p, q in caps:
        cur[p] = cur[q] = labels.new()
    quads = _build(strands, word, labels, cur)
    for p, q in caps:
        labels.merge(cur[p], cur[q])
    return _finish(quads, labels)


def rational(*cf):
    """Two-bridge link with all-positive continued fraction ``cf`` as a 4-plat.

    The plat needs an odd number of twist groups; [..., a] is rewritten as
    [..., a - 1, 1] when necessary.
    """
    cf = list(cf)
    if len(cf) % 2 == 0:
        cf[-1:] = [cf[-1] - 1, 1] if cf[-1] > 1 else []
        if len(cf) % 2 == 0:  # trailing 1 absorbed: [..., b, 1] == [..., b + 1]
            cf[-1] += 1
    word = []
    for k, a in enumerate(cf):
        word += [2] * a if k % 2 == 0 else [-1] * a
    return plat_closure(4, word, [(0, 1), (2, 3)])


def pretzel(*tw):
    """Pretzel link P(tw_1, ..., tw_n); a negative entry twists the other way."""
    n = len(tw)
    word = []
    for k, a in enumerate(tw):
        letter = 2 * k + 1
        word += [letter if a > 0 else -letter] * abs(a)
    caps = [(0, 2 * n - 1)] + [(2 * k + 1, 2 * k + 2) for k in range(n - 1)]
    return plat_closure(2 * n, word, caps)


def pd_text(quads):
    return ",".join("X({},{},{},{})".format(*q) for q in quads)


def determinant_of_cf(cf):
    """Numerator of the continued fraction [a1; a2, ...]."""
    p, q = 1, 0
    for a in reversed(cf):
        p, q = a * p + q, p
    return p
