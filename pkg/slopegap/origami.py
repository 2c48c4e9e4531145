"""
origami.py — Square-tiled surfaces as pairs of permutations.

Tiles are labelled 0..n-1 internally and 1..n in text. ``right[i]`` is the
tile glued to the right edge of tile i and ``up[i]`` the tile glued to its
top edge; left/down are derived inverses. All geometry in this module is
exact integer or rational arithmetic.

The SL(2,Z) action follows the cut-shear-paste picture:
    T  (horizontal shear)       (r, u) -> (r, u∘r⁻¹)
    S  (quarter turn, CCW)      (r, u) -> (u⁻¹, r)
so that the holonomy of M·o is M applied to the holonomy of o.
A word is a string over "S", "T", "s", "t" (lower case = inverse) read as a
matrix product; act_word applies the rightmost letter first.
"""

import logging
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from slopegap.errors import EmptySurface, HitConePoint, NonTransitive, OrigamiFormatError

logger = logging.getLogger(__name__)

Perm = Tuple[int, ...]
Rational = Union[int, Fraction]


# ── Permutation helpers ───────────────────────────────────────────────────────

def _inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def _cycles(p: Perm) -> List[List[int]]:
    """Nontrivial cycles of p, each starting at its smallest element."""
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cycle = []
        j = i
        while not seen[j]:
            seen[j] = True
            cycle.append(j)
            j = p[j]
        if len(cycle) > 1:
            out.append(cycle)
    return out


def _from_cycles(cycles: Iterable[Sequence[int]], n: int) -> Perm:
    """Build a 0-based permutation of size n from 1-based cycles."""
    images = list(range(n))
    touched = set()
    for cycle in cycles:
        for k, label in enumerate(cycle):
            if label in touched:
                raise OrigamiFormatError(f"label {label} appears twice in one permutation")
            touched.add(label)
            images[label - 1] = cycle[(k + 1) % len(cycle)] - 1
    return tuple(images)


# ── Domain types ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Origami:
    right: Perm
    up: Perm

    @property
    def n(self) -> int:
        return len(self.right)

    @cached_property
    def left(self) -> Perm:
        return _inverse(self.right)

    @cached_property
    def down(self) -> Perm:
        return _inverse(self.up)

    def __str__(self) -> str:
        return format_origami(self)


@dataclass(frozen=True)
class ConePoint:
    """A vertex class; tiles in ``representatives`` have it as lower-left corner."""

    representatives: FrozenSet[int]
    angle_turns: int

    @property
    def is_singular(self) -> bool:
        return self.angle_turns > 1


@dataclass(frozen=True)
class HolonomyVector:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if self.x == 0 and self.y == 0:
            raise ValueError("holonomy vector must be nonzero")

    def scaled(self, d: Fraction) -> "HolonomyVector":
        """Image under diag(1/d, d)."""
        return HolonomyVector(self.x / d, self.y * d)

    def unscaled(self, d: Fraction) -> "HolonomyVector":
        return HolonomyVector(self.x * d, self.y / d)

    @property
    def ratio(self) -> Fraction:
        """x/y, the quantity winners maximize (requires y > 0)."""
        return self.x / self.y

    def as_pair(self) -> Tuple[Fraction, Fraction]:
        return self.x, self.y

    def to_json(self) -> List[str]:
        return [str(self.x), str(self.y)]

    def __str__(self) -> str:
        return f"⟨{self.x},{self.y}⟩"


@dataclass(frozen=True)
class TraceRecord:
    tile: int
    offset: Tuple[Fraction, Fraction]
    end_vertex: Optional[ConePoint]
    next_tile: Optional[int]

    @property
    def lands_on_cone_point(self) -> bool:
        return self.end_vertex is not None and self.end_vertex.is_singular


# ── Construction, parsing and formatting ──────────────────────────────────────

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _parse_cycles(text: str) -> List[List[int]]:
    text = text.strip()
    if _CYCLE_RE.sub("", text).strip():
        raise OrigamiFormatError(f"unexpected characters in permutation {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        tokens = [tok for tok in re.split(r"[\s,]+", body.strip()) if tok]
        if not tokens:
            raise OrigamiFormatError(f"empty cycle in {text!r}")
        try:
            labels = [int(tok) for tok in tokens]
        except ValueError as exc:
            raise OrigamiFormatError(f"non-integer label in {text!r}") from exc
        if min(labels) < 1:
            raise OrigamiFormatError(f"labels must be positive in {text!r}")
        cycles.append(labels)
    return cycles


RawPermutation = Union[str, Sequence[int], Sequence[Sequence[int]]]


def _raw_to_cycles(raw: RawPermutation) -> Tuple[List[List[int]], int]:
    """Return 1-based cycles and the largest label mentioned."""
    if isinstance(raw, str):
        cycles = _parse_cycles(raw)
    elif all(isinstance(item, int) for item in raw):
        images = list(raw)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise OrigamiFormatError(f"one-line form {images} is not a permutation")
        cycles = [[i + 1 for i in c] for c in _cycles(tuple(v - 1 for v in images))]
        return cycles, len(images)
    else:
        cycles = [list(c) for c in raw]
        if any(not c or min(c) < 1 for c in cycles):
            raise OrigamiFormatError("cycles must be nonempty with positive labels")
    top = max((max(c) for c in cycles), default=0)
    return cycles, top


def validate(right: RawPermutation, up: RawPermutation) -> Origami:
    """Build a connected Origami from two permutations, restoring 1-cycles."""
    r_cycles, r_top = _raw_to_cycles(right)
    u_cycles, u_top = _raw_to_cycles(up)
    n = max(r_top, u_top)
    if n == 0:
        raise EmptySurface("origami has no tiles")
    o = Origami(_from_cycles(r_cycles, n), _from_cycles(u_cycles, n))
    if not is_transitive(o):
        raise NonTransitive(f"right/up permutations of {format_origami(o)} are not transitive")
    return o


def parse_origami(text: str) -> Origami:
    """Parse ``"(c1)(c2)...|(d1)(d2)..."``."""
    parts = text.split("|")
    if len(parts) != 2:
        raise OrigamiFormatError(f"expected exactly one '|' in {text!r}")
    return validate(parts[0], parts[1])


def _format_perm(p: Perm) -> str:
    return "".join("(" + ",".join(str(i + 1) for i in c) + ")" for c in _cycles(p))


def format_origami(o: Origami) -> str:
    """Text form "right|up" with 1-based cycles; fixed points omitted except the largest label."""
    r_text = _format_perm(o.right) or "(1)"
    u_text = _format_perm(o.up) or "(1)"
    mentioned = {int(tok) for tok in re.findall(r"\d+", r_text + u_text)}
    if o.n not in mentioned:
        r_text += f"({o.n})"
    return f"{r_text}|{u_text}"


def is_transitive(o: Origami) -> bool:
    """Whether right and up generate a transitive group (the surface is connected)."""
    seen = {0}
    queue = deque([0])
    while queue:
        t = queue.popleft()
        for nb in (o.right[t], o.up[t], o.left[t], o.down[t]):
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return len(seen) == o.n


def relabel(o: Origami, sigma: Sequence[int]) -> Origami:
    """Rename tile i to sigma[i] (0-based)."""
    right = [0] * o.n
    up = [0] * o.n
    for i in range(o.n):
        right[sigma[i]] = sigma[o.right[i]]
        up[sigma[i]] = sigma[o.up[i]]
    return Origami(tuple(right), tuple(up))


@lru_cache(maxsize=1 << 16)
def canonical_form(o: Origami) -> Origami:
    """Lexicographically least BFS relabelling over all start tiles."""
    best = None
    for start in range(o.n):
        label = {start: 0}
        order = [start]
        for t in order:
            for nb in (o.right[t], o.up[t]):
                if nb not in label:
                    label[nb] = len(order)
                    order.append(nb)
        right = tuple(label[o.right[t]] for t in order)
        up = tuple(label[o.up[t]] for t in order)
        if best is None or (right, up) < best:
            best = (right, up)
    return Origami(*best)


def is_isomorphic(a: Origami, b: Origami) -> bool:
    return a.n == b.n and canonical_form(a) == canonical_form(b)


def reflect(o: Origami) -> Origami:
    """Mirror in a vertical line: (r, u) -> (r⁻¹, u)."""
    return Origami(o.left, o.up)


# ── SL(2,Z) action ────────────────────────────────────────────────────────────

def act_T(o: Origami) -> Origami:
    """Horizontal shear [[1, 1], [0, 1]]."""
    return Origami(o.right, tuple(o.up[o.left[j]] for j in range(o.n)))


def act_T_inverse(o: Origami) -> Origami:
    return Origami(o.right, tuple(o.up[o.right[j]] for j in range(o.n)))


def act_S(o: Origami) -> Origami:
    """Quarter turn [[0, -1], [1, 0]]."""
    return Origami(o.down, o.right)


def act_S_inverse(o: Origami) -> Origami:
    return Origami(o.up, o.left)


_ACTIONS = {"S": act_S, "T": act_T, "s": act_S_inverse, "t": act_T_inverse}

_LETTER_MATRIX = {
    "S": np.array([[0, -1], [1, 0]], dtype=np.int64),
    "T": np.array([[1, 1], [0, 1]], dtype=np.int64),
    "s": np.array([[0, 1], [-1, 0]], dtype=np.int64),
    "t": np.array([[1, -1], [0, 1]], dtype=np.int64),
}


def _check_word(w: str) -> None:
    bad = set(w) - set(_ACTIONS)
    if bad:
        raise OrigamiFormatError(f"word {w!r} contains letters outside S, T, s, t")


def act_word(o: Origami, w: str) -> Origami:
    """Apply a word over S, T, s, t; the rightmost letter acts first."""
    _check_word(w)
    for letter in reversed(w):
        o = _ACTIONS[letter](o)
    return o


def invert_word(w: str) -> str:
    """Inverse word: reversed, with letter case swapped."""
    return "".join(letter.swapcase() for letter in reversed(w))


def word_matrix(w: str) -> np.ndarray:
    """Product of the letter matrices, as a 2×2 integer array."""
    _check_word(w)
    m = np.eye(2, dtype=np.int64)
    for letter in w:
        m = m @ _LETTER_MATRIX[letter]
    return m


def _power(letter: str, k: int) -> str:
    return letter * k if k >= 0 else letter.swapcase() * (-k)


def matrix_word(m: Union[np.ndarray, Sequence[Sequence[int]]]) -> str:
    """A word whose matrix is exactly m (det 1), by Euclid on the first column."""
    (a, b), (c, d) = ((int(v) for v in row) for row in m)
    if a * d - b * c != 1:
        raise ValueError(f"matrix {m} is not in SL(2,Z)")
    letters = []
    while c != 0:
        q = a // c
        letters.append(_power("T", q))
        a, b = a - q * c, b - q * d
        letters.append("S")
        a, b, c, d = c, d, -a, -b
    if a == 1:
        letters.append(_power("T", b))
    else:
        letters.append("SS" + _power("T", -b))
    return "".join(letters)


def act_matrix(o: Origami, m) -> Origami:
    """Act by an SL(2,Z) matrix through its S/T word."""
    return act_word(o, matrix_word(m))


_SUPERSCRIPT = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


def format_word(w: str) -> str:
    """Compress runs: "TTTsT" -> "T³S⁻¹T"; the empty word is "I"."""
    if not w:
        return "I"
    out = []
    for match in re.finditer(r"(S+|s+|T+|t+)", w):
        run = match.group(0)
        exponent = len(run) if run[0].isupper() else -len(run)
        sup = "" if exponent == 1 else str(exponent).translate(_SUPERSCRIPT)
        out.append(run[0].upper() + sup)
    return "".join(out)


# ── Vertices and cone points ──────────────────────────────────────────────────

@lru_cache(maxsize=4096)
def _vertex_table(o: Origami) -> Tuple[Tuple[ConePoint, ...], Tuple[int, ...]]:
    """All vertex classes and, per tile, the index of its lower-left vertex."""
    walk = (o.left, o.down, o.right, o.up)
    owner = [-1] * o.n
    classes: List[ConePoint] = []
    for start in range(o.n):
        if owner[start] >= 0:
            continue
        reps = {start}
        t, q = start, 0
        while True:
            t = walk[q % 4][t]
            q += 1
            if q % 4 == 0:
                if t == start:
                    break
                reps.add(t)
        for tile in reps:
            owner[tile] = len(classes)
        classes.append(ConePoint(frozenset(reps), q // 4))
    return tuple(classes), tuple(owner)


def vertices(o: Origami) -> List[ConePoint]:
    """All vertex classes, regular ones included."""
    return list(_vertex_table(o)[0])


def cone_points(o: Origami) -> List[ConePoint]:
    """Vertex classes with angle above one turn; empty on a torus cover without singularities."""
    return [v for v in vertices(o) if v.is_singular]


def vertex_at(o: Origami, tile: int) -> ConePoint:
    """The vertex at the lower-left corner of ``tile``."""
    classes, owner = _vertex_table(o)
    return classes[owner[tile]]


def _cone_tiles(o: Origami) -> List[int]:
    return sorted(t for c in cone_points(o) for t in c.representatives)


def genus(o: Origami) -> int:
    """Genus from 2 - 2g = n - 2n + #vertices."""
    return (2 + o.n - len(vertices(o))) // 2


# ── Straight-line tracing ─────────────────────────────────────────────────────

def trace(o: Origami, start: int, p: Rational, q: Rational) -> TraceRecord:
    """Follow the segment of displacement (p, q) from the lower-left corner of tile ``start``.

    Raises HitConePoint when a singular vertex is met strictly before the end.
    """
    p, q = Fraction(p), Fraction(q)
    if p <= 0 or q < 0:
        raise ValueError(f"direction ({p}, {q}) must have p > 0 and q >= 0")
    tile = start

    if q == 0:
        # Runs along bottom edges, meeting a vertex at every integer abscissa.
        x = 1
        while x < p:
            nxt = o.right[tile]
            if vertex_at(o, nxt).is_singular:
                raise HitConePoint((Fraction(x), Fraction(0)))
            tile = nxt
            x += 1
        offset = (p - (x - 1), Fraction(0))
        if offset[0] == 1:
            nxt = o.right[tile]
            return TraceRecord(tile, offset, vertex_at(o, nxt), nxt)
        return TraceRecord(tile, offset, None, None)

    den = p.denominator * q.denominator // gcd(p.denominator, q.denominator)
    big_p, big_q = int(p * den), int(q * den)
    i = j = 1  # next vertical / horizontal grid line
    while True:
        vertical_before_end = i * den < big_p
        horizontal_before_end = j * den < big_q
        if not vertical_before_end and not horizontal_before_end:
            break
        if not horizontal_before_end or (vertical_before_end and i * big_q < j * big_p):
            tile = o.right[tile]
            i += 1
        elif not vertical_before_end or j * big_p < i * big_q:
            tile = o.up[tile]
            j += 1
        else:
            nxt = o.up[o.right[tile]]
            if vertex_at(o, nxt).is_singular:
                raise HitConePoint((Fraction(i), Fraction(j)))
            tile = nxt
            i += 1
            j += 1
    offset = (p - (i - 1), q - (j - 1))
    if offset == (1, 1):
        nxt = o.up[o.right[tile]]
        return TraceRecord(tile, offset, vertex_at(o, nxt), nxt)
    return TraceRecord(tile, offset, None, None)


@lru_cache(maxsize=1 << 18)
def _first_hits(o: Origami, p: int, q: int) -> FrozenSet[int]:
    """Multiples k such that k·(p, q) is the first cone hit from some cone sector.

    (p, q) is primitive with p > 0, q >= 0, so segments between consecutive
    lattice points never cross a vertex.
    """
    hits = set()
    for start in _cone_tiles(o):
        tile = start
        for k in range(1, o.n + 2):
            rec = trace(o, tile, p, q)
            if rec.end_vertex.is_singular:
                hits.add(k)
                break
            tile = rec.next_tile
        else:
            raise RuntimeError(f"separatrix in direction ({p}, {q}) never closed")
    return frozenset(hits)


def _to_first_quadrant(o: Origami, x: int, y: int) -> Tuple[Origami, int, int]:
    while not (x > 0 and y >= 0):
        o = act_S_inverse(o)
        x, y = y, -x
    return o, x, y


def hit_multiples(o: Origami, x: int, y: int) -> Tuple[Tuple[int, int], FrozenSet[int]]:
    """Primitive direction of (x, y) and the saddle-connection multiples along it."""
    g = gcd(x, y)
    surface, p, q = _to_first_quadrant(o, x // g, y // g)
    return (x // g, y // g), _first_hits(surface, p, q)


def is_holonomy(o: Origami, v: Union[HolonomyVector, Tuple[Rational, Rational]]) -> bool:
    """True iff v is the holonomy of a saddle connection (closed geodesic on cone-free surfaces)."""
    x, y = v.as_pair() if isinstance(v, HolonomyVector) else (Fraction(v[0]), Fraction(v[1]))
    if x.denominator != 1 or y.denominator != 1 or (x == 0 and y == 0):
        return False
    if not cone_points(o):
        return True
    x, y = int(x), int(y)
    _, multiples = hit_multiples(o, x, y)
    return gcd(x, y) in multiples


def enumerate_holonomy(
    o: Origami,
    bound: int,
    window: Tuple[Rational, Rational] = (0, 1),
) -> List[HolonomyVector]:
    """Holonomy vectors with 0 < x, 0 <= y, max(x, y) <= bound and slope in window."""
    lo, hi = Fraction(window[0]), Fraction(window[1])
    cone_free = not cone_points(o)
    found = []
    for p in range(1, bound + 1):
        for q in range(0, bound + 1):
            if gcd(p, q) != 1 or not lo <= Fraction(q, p) <= hi:
                continue
            limit = bound // max(p, q)
            if cone_free:
                ks: Iterable[int] = range(1, limit + 1)
            else:
                ks = (k for k in _first_hits(o, p, q) if k <= limit)
            found.extend(HolonomyVector(k * p, k * q) for k in ks)
    found.sort(key=lambda v: (v.x, v.y))
    logger.debug("enumerated %d holonomy vectors up to %d", len(found), bound)
    return found


def horizontal_scaling(o: Origami) -> Fraction:
    """Length of the shortest horizontal holonomy vector (1 without cone points)."""
    if not cone_points(o):
        return Fraction(1)
    return Fraction(min(_first_hits(o, 1, 0)))


def holonomy_lattice_is_standard(o: Origami, bound: int = 6) -> bool:
    """Whether short holonomy vectors generate Z² (the surface is reduced)."""
    vectors = [(int(v.x), int(v.y)) for v in enumerate_holonomy(o, bound, (0, bound))]
    det_gcd = 0
    for i, (a, b) in enumerate(vectors):
        for c, d in vectors[i + 1:]:
            det_gcd = gcd(det_gcd, a * d - b * c)
            if det_gcd == 1:
                return True
    return det_gcd == 1
