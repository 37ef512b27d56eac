"""Circular Florentine rectangles.

An r x N matrix of row permutations of {0..N-1} is a circular Florentine
rectangle (CFR) when, for every step m in {1..N-1}, no ordered symbol pair
(a, b) appears m positions apart (cyclically) in more than one place across
all rows. Row count is the scarce resource: even N admits only one row,
prime N admits N-1 via the multiplication table, and composite odd N sits
somewhere in between and is a search problem.
"""

from __future__ import annotations

from dataclasses import dataclass

# The largest known CFR for order 15 (four rows). Found by computer search;
# shipped because no generator reaches it: 15 is composite, so the
# multiplication-table construction does not apply.
CFR_N15_R4 = (
    (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14),
    (0, 7, 1, 8, 2, 12, 3, 11, 9, 4, 13, 5, 14, 6, 10),
    (0, 4, 11, 7, 10, 1, 13, 9, 5, 8, 3, 6, 2, 14, 12),
    (0, 13, 7, 2, 11, 6, 14, 10, 3, 5, 12, 9, 1, 4, 8),
)

FOUND = "found"
EXHAUSTED = "exhausted"
BUDGET_HIT = "budget_hit"


@dataclass(frozen=True)
class CfrViolation:
    """One concrete witness that the circular distinctness condition fails.

    rows/positions give (i, x) and (j, y) with row_i[x..x+step] and
    row_j[y..y+step] forming the same ordered pair. A non-permutation row is
    reported with both indices in that row and step None.
    """

    reason: str
    rows: tuple
    positions: tuple
    step: int | None


def _as_matrix(rows):
    mat = [list(int(v) for v in row) for row in rows]
    if not mat:
        raise ValueError("empty matrix")
    n = len(mat[0])
    for row in mat:
        if len(row) != n:
            raise ValueError("ragged matrix")
        for v in row:
            if v < 0 or v >= n:
                raise ValueError(f"symbol {v} out of range for order {n}")
    return mat, n


def verify_cfr(rows) -> CfrViolation | None:
    """Check the CFR axioms, returning None or one violating tuple.

    Raises ValueError for a ragged or out-of-range matrix; axiom failures
    are reported, not raised.
    """
    mat, n = _as_matrix(rows)
    for i, row in enumerate(mat):
        seen = {}
        for x, v in enumerate(row):
            if v in seen:
                return CfrViolation("row-not-permutation", (i, i), (seen[v], x), None)
            seen[v] = x
    # one global table: pair (a, b) at step m may occur once across all rows
    seen_pairs = {}
    for i, row in enumerate(mat):
        for m in range(1, n):
            for x in range(n):
                key = (m, row[x], row[(x + m) % n])
                if key in seen_pairs:
                    j, y = seen_pairs[key]
                    return CfrViolation("pair-collision", (j, i), (y, x), m)
                seen_pairs[key] = (i, x)
    return None


@dataclass(frozen=True)
class Cfr:
    """A verified circular Florentine rectangle."""

    order: int
    rows: tuple

    def __post_init__(self):
        mat, n = _as_matrix(self.rows)
        if n != self.order:
            raise ValueError("order does not match row length")
        bad = verify_cfr(mat)
        if bad is not None:
            raise ValueError(f"not a circular Florentine rectangle: {bad}")
        object.__setattr__(self, "rows", tuple(tuple(r) for r in mat))

    @property
    def num_rows(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class InverseRows:
    """Row-wise inverse permutations g_i = pi_i^{-1} of a CFR."""

    order: int
    rows: tuple

    def difference_row(self, i: int, r: int) -> tuple:
        """Pointwise difference g_i - g_r mod N; a permutation for i != r."""
        gi, gr = self.rows[i], self.rows[r]
        return tuple((a - b) % self.order for a, b in zip(gi, gr))


def inverse_rows(cfr: Cfr) -> InverseRows:
    inv = []
    for row in cfr.rows:
        g = [0] * cfr.order
        for x, v in enumerate(row):
            g[v] = x
        inv.append(tuple(g))
    return InverseRows(cfr.order, tuple(inv))


def count_alignments(cfr: Cfr, row_a: int, row_b: int, shift: int) -> int:
    """Count positions t with row_a[t] == row_b[t + shift mod N].

    For distinct rows of a CFR this is exactly 1 for every shift, which is
    what makes the downstream correlation sums collapse to a single term.
    """
    if row_a == row_b:
        raise ValueError("alignment count is defined for distinct rows")
    n = cfr.order
    a, b = cfr.rows[row_a], cfr.rows[row_b]
    return sum(1 for t in range(n) if a[t] == b[(t + shift) % n])


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def cfr_from_prime(p: int) -> Cfr:
    """The (p-1) x p CFR given by the multiplication table of Z_p.

    Row k is t -> k*t mod p for k = 1..p-1. Pair distinctness reduces to
    unique solvability of k*m = const in the field.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        raise ValueError("order 2 admits only the trivial single row")
    rows = tuple(tuple((k * t) % p for t in range(p)) for k in range(1, p))
    return Cfr(p, rows)


@dataclass(frozen=True)
class SearchResult:
    status: str
    cfr: Cfr | None
    nodes: int


def search_cfr(n: int, target_rows: int, node_budget: int = 10_000_000) -> SearchResult:
    """Depth-first search for a target_rows x n CFR.

    The search runs over canonical representatives only: row 0 is the
    identity, every row starts with 0 (cyclic row shifts preserve the
    circular pair multiset), and rows are in increasing lexicographic
    order. Any CFR can be brought to this form by relabeling symbols and
    shifting rows, so exhausting the canonical space proves nonexistence.

    A node is one attempted cell assignment. The same (n, target_rows,
    budget) always yields the same outcome; candidates are tried in
    ascending order, so a found rectangle is the lexicographically least
    canonical one.
    """
    if n < 1 or target_rows < 1:
        raise ValueError("order and row count must be positive")

    identity = list(range(n))
    if target_rows == 1:
        return SearchResult(FOUND, Cfr(n, (tuple(identity),)), 0)

    # pair table indexed (step, a, b); True = already used by some row
    used = bytearray(n * n * n)

    def commit(row, j, v, flag):
        # placing row[j] = v claims pairs against every earlier position,
        # in both cyclic directions; at j = n-1 this covers the wraparound
        for i in range(j):
            a = row[i]
            m = j - i
            used[m * n * n + a * n + v] = flag
            used[(n - m) * n * n + v * n + a] = flag

    def conflicts(row, j, v):
        for i in range(j):
            a = row[i]
            m = j - i
            if used[m * n * n + a * n + v] or used[(n - m) * n * n + v * n + a]:
                return True
        return False

    rows = [identity[:]]
    for j in range(1, n):
        commit(identity, j, identity[j], 1)

    nodes = 0
    budget_exceeded = False

    def extend(depth):
        # build row `depth`, position by position, then recurse
        nonlocal nodes, budget_exceeded
        if depth == target_rows:
            return True
        prev = rows[-1]
        row = [0] * n
        in_use = [False] * n
        in_use[0] = True

        def place(j, tied):
            # tied: row equals the previous row on positions < j, so the
            # candidate at j must not drop below prev[j] (lex ordering)
            nonlocal nodes, budget_exceeded
            if j == n:
                rows.append(row[:])
                if extend(depth + 1):
                    return True
                rows.pop()
                return False
            lo = prev[j] if tied else 1
            for v in range(lo, n):
                if in_use[v]:
                    continue
                nodes += 1
                if nodes > node_budget:
                    budget_exceeded = True
                    return False
                if conflicts(row, j, v):
                    continue
                row[j] = v
                in_use[v] = True
                commit(row, j, v, 1)
                if place(j + 1, tied and v == prev[j]):
                    return True
                commit(row, j, v, 0)
                in_use[v] = False
                if budget_exceeded:
                    return False
            return False

        return place(1, True)

    if extend(1):
        return SearchResult(FOUND, Cfr(n, tuple(tuple(r) for r in rows)), nodes)
    return SearchResult(BUDGET_HIT if budget_exceeded else EXHAUSTED, None, nodes)


# ---------------------------------------------------------------------------
# Text format: first line "N r", then r rows of N space-separated symbols.

def write_cfr(cfr: Cfr, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{cfr.order} {cfr.num_rows}\n")
        for row in cfr.rows:
            fh.write(" ".join(str(v) for v in row) + "\n")


def load_cfr(path) -> Cfr:
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ValueError("CFR file needs an 'N r' header")
    n, r = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != n * r:
        raise ValueError(f"expected {n * r} symbols, found {len(body)}")
    rows = tuple(tuple(int(v) for v in body[i * n:(i + 1) * n]) for i in range(r))
    return Cfr(n, rows)
