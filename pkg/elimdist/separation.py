"""
separation.py - elimdist: (a,b)-Separating Families

Core Idea: "Replace the Coin Flips by a Short List"
===================================================
Random separation colors every vertex red or blue and hopes that a small
set A came out red while a set B came out blue. A separating family is the
deterministic replacement: a list of subsets R of U such that

    for all disjoint A, B with |A| <= a, |B| <= b:
        some R in the list has  A <= R  and  B & R == 0

Two constructions:

    greedy   set cover over the explicit (A, B) x (all 2^n subsets) matrix.
             Small families, exponential in n; used when the matrix fits
             into GREEDY_FAMILY_BUDGET cells.

    code     give each element a word of length L = 6ab*ceil(log2(n+1)) over
             the alphabet 0..2ab. Words are drawn from a seeded generator
             and kept only if they agree with every earlier word in fewer
             than L/(ab) positions. Then for any A, B at most ab element
             pairs each spoil fewer than L/(ab) positions, so some
             position j separates the letters of A from those of B, and

                 { u : word(u)[j] in S }    for |S| <= a

             contains A and misses B. Size <= L * sum_{s<=a} C(2ab+1, s).

Both are deterministic for a fixed seed. Families with a > b are built as
complements of the (b, a) family.

Text format (one member per line, "-" for the empty set):

    n a b m
    0 3 5
    -
    ...
"""

from dataclasses import dataclass
from itertools import combinations
from math import ceil, comb, log2
from pathlib import Path

import numpy as np

from . import config
from .errors import ElimDistError, GraphFormatError, PreconditionError, SizeCapExceeded
from .graph import bits, to_mask


# =============================================================================
# SeparatingFamily
# =============================================================================

@dataclass(frozen=True)
class SeparatingFamily:
    universe_size: int
    a: int
    b: int
    sets: tuple

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise PreconditionError("a and b must be non-negative")
        full = (1 << self.universe_size) - 1
        for member in self.sets:
            if member & ~full:
                raise PreconditionError(f"member {sorted(bits(member))} leaves the universe")

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    @property
    def universe(self) -> int:
        return (1 << self.universe_size) - 1

    def complement(self) -> "SeparatingFamily":
        """The (b, a) family: complements of every member."""
        full = self.universe
        return SeparatingFamily(self.universe_size, self.b, self.a,
                                _dedup(full & ~member for member in self.sets))

    def lift(self, elements: list[int]) -> list[int]:
        """Members as vertex masks, element i standing for vertices[i]."""
        return [to_mask(elements[i] for i in bits(member)) for member in self.sets]


def _dedup(members) -> tuple:
    seen, out = set(), []
    for member in members:
        if member not in seen:
            seen.add(member)
            out.append(member)
    return tuple(out)


# =============================================================================
# Constraints
# =============================================================================

def _constraints(n: int, a: int, b: int):
    """(A, B) masks: every |A| <= a, and every B of size min(b, n - |A|) outside A."""
    universe = range(n)
    for size_a in range(min(a, n) + 1):
        for sa in combinations(universe, size_a):
            rest = [u for u in universe if u not in sa]
            amask = to_mask(sa)
            for sb in combinations(rest, min(b, len(rest))):
                yield amask, to_mask(sb)


def _constraint_count(n: int, a: int, b: int) -> int:
    total = 0
    for size_a in range(min(a, n) + 1):
        total += comb(n, size_a) * comb(n - size_a, min(b, n - size_a))
    return total


def _separated(members: np.ndarray, amask: np.ndarray, bmask: np.ndarray) -> np.ndarray:
    """Boolean matrix [constraint, member]."""
    m = members[None, :]
    am = amask[:, None]
    bm = bmask[:, None]
    return ((m & am) == am) & ((m & bm) == 0)


# =============================================================================
# Constructions
# =============================================================================

def _greedy(n: int, a: int, b: int) -> tuple:
    pairs = list(_constraints(n, a, b))
    amask = np.array([p[0] for p in pairs], dtype=np.int64)
    bmask = np.array([p[1] for p in pairs], dtype=np.int64)
    candidates = np.arange(1 << n, dtype=np.int64)
    covers = _separated(candidates, amask, bmask)
    uncovered = np.ones(len(pairs), dtype=bool)
    chosen = []
    while uncovered.any():
        gain = covers[uncovered].sum(axis=0)
        pick = int(np.argmax(gain))
        chosen.append(pick)
        uncovered &= ~covers[:, pick]
    return tuple(sorted(chosen))


def code_length(n: int, a: int, b: int) -> int:
    return 6 * a * b * max(1, ceil(log2(n + 1)))


def _codewords(n: int, a: int, b: int, rng: np.random.Generator, attempts: int = 10_000) -> np.ndarray:
    alphabet = 2 * a * b + 1
    length = code_length(n, a, b)
    limit = ceil(length / (a * b)) - 1
    words = np.zeros((n, length), dtype=np.int64)
    for i in range(n):
        for _ in range(attempts):
            word = rng.integers(0, alphabet, size=length)
            if i == 0 or (words[:i] == word).sum(axis=1).max() <= limit:
                words[i] = word
                break
        else:
            raise ElimDistError(f"could not draw codeword {i} for n={n}, a={a}, b={b}")
    return words


def _mask_of(flags: np.ndarray) -> int:
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def _code(n: int, a: int, b: int, seed: int) -> tuple:
    words = _codewords(n, a, b, np.random.default_rng(seed))
    alphabet = 2 * a * b + 1
    members = []
    for column in words.T:
        for size in range(a + 1):
            for letters in combinations(range(alphabet), size):
                members.append(_mask_of(np.isin(column, letters)))
    return _dedup(members)


def code_bound(n: int, a: int, b: int) -> int:
    """Size bound of the code construction: L * sum_{s<=a} C(2ab+1, s)."""
    if a == 0 or b == 0:
        return 1
    lo, hi = min(a, b), max(a, b)
    return code_length(n, lo, hi) * sum(comb(2 * lo * hi + 1, s) for s in range(lo + 1))


def build_family(n: int, a: int, b: int, method: str = "auto", seed: int | None = None) -> SeparatingFamily:
    if not (0 <= a <= n and 0 <= b <= n):
        raise PreconditionError(f"need 0 <= a, b <= n, got n={n}, a={a}, b={b}")
    if method not in ("auto", "greedy", "code"):
        raise PreconditionError(f"unknown family method {method!r}")
    seed = config.DEFAULT_SEED if seed is None else seed
    if a == 0:
        return SeparatingFamily(n, a, b, (0,))
    if b == 0:
        return SeparatingFamily(n, a, b, ((1 << n) - 1,))
    fits = _constraint_count(n, a, b) << n <= config.GREEDY_FAMILY_BUDGET
    if method == "greedy" or (method == "auto" and fits):
        if not fits:
            raise SizeCapExceeded(f"greedy family for n={n}, a={a}, b={b} exceeds GREEDY_FAMILY_BUDGET")
        return SeparatingFamily(n, a, b, _greedy(n, a, b))
    if a > b:
        return SeparatingFamily(n, b, a, _code(n, b, a, seed)).complement()
    return SeparatingFamily(n, a, b, _code(n, a, b, seed))


# =============================================================================
# Verification
# =============================================================================

def verify_family(fam: SeparatingFamily, chunk: int = 4096) -> bool:
    n, a, b = fam.universe_size, fam.a, fam.b
    if n > config.FAMILY_VERIFY_MAX_N or a + b > config.FAMILY_VERIFY_MAX_AB:
        raise SizeCapExceeded(
            f"exhaustive verification is capped at n <= {config.FAMILY_VERIFY_MAX_N} "
            f"and a + b <= {config.FAMILY_VERIFY_MAX_AB}"
        )
    if not fam.sets:
        return False
    members = np.array(fam.sets, dtype=np.int64)
    batch = []
    for pair in _constraints(n, a, b):
        batch.append(pair)
        if len(batch) == chunk:
            if not _batch_ok(members, batch):
                return False
            batch = []
    return _batch_ok(members, batch) if batch else True


def _batch_ok(members: np.ndarray, batch: list) -> bool:
    amask = np.array([p[0] for p in batch], dtype=np.int64)
    bmask = np.array([p[1] for p in batch], dtype=np.int64)
    return bool(_separated(members, amask, bmask).any(axis=1).all())


# =============================================================================
# Text format
# =============================================================================

def format_family(fam: SeparatingFamily) -> str:
    lines = [f"{fam.universe_size} {fam.a} {fam.b} {len(fam)}"]
    for member in fam.sets:
        lines.append(" ".join(str(u) for u in bits(member)) or "-")
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> SeparatingFamily:
    lines = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise GraphFormatError("empty family file: expected a header 'n a b m'")
    try:
        n, a, b, m = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise GraphFormatError("family header must be 'n a b m'")
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header announces {m} members, found {len(lines) - 1}")
    members = []
    for number, line in enumerate(lines[1:], start=1):
        if line == "-":
            members.append(0)
            continue
        try:
            elems = [int(tok) for tok in line.split()]
        except ValueError:
            raise GraphFormatError(f"member {number}: expected element indices")
        if any(not 0 <= u < n for u in elems):
            raise GraphFormatError(f"member {number}: element outside 0..{n - 1}")
        members.append(to_mask(elems))
    return SeparatingFamily(n, a, b, tuple(members))


def load_family(path: str | Path) -> SeparatingFamily:
    return parse_family(Path(path).read_text(encoding="utf-8"))


def write_family(fam: SeparatingFamily, path: str | Path) -> None:
    Path(path).write_text(format_family(fam), encoding="utf-8")
