"""Existence of sphere branched covers with prescribed branch data.

A cover of degree ``n`` with branch partitions ``l_1, ..., l_k`` exists iff
there are permutations ``s_i`` of cycle type ``l_i`` with ``s_1...s_k = 1``
generating a transitive group, and Riemann-Hurwitz gives genus zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations


class SearchExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class HurwitzData:
    n: int
    branch_data: tuple  # tuple of partitions (each a sorted tuple)

    @classmethod
    def of(cls, n: int, data) -> "HurwitzData":
        parts = tuple(tuple(sorted(p, reverse=True)) for p in data)
        for p in parts:
            if sum(p) != n or min(p) < 1:
                raise ValueError(f"{list(p)} is not a partition of {n}")
        return cls(n, parts)

    def defect(self) -> int:
        """``sum(n - number of parts)``."""
        return sum(self.n - len(p) for p in self.branch_data)


@dataclass(frozen=True)
class Realizable:
    witness: tuple       # permutations as tuples (images of 0..n-1)
    branch_data: tuple = ()  # cycle types of the witness, in witness order


@dataclass(frozen=True)
class NotRealizable:
    reason: str


def cycle_type(p: tuple) -> tuple:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen:
            continue
        k, j = 0, i
        while j not in seen:
            seen.add(j)
            j = p[j]
            k += 1
        out.append(k)
    return tuple(sorted(out, reverse=True))


def compose(p: tuple, q: tuple) -> tuple:
    """Apply ``p`` first, then ``q``."""
    return tuple(q[p[i]] for i in range(len(p)))


def inverse(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def transitive(perms, n: int) -> bool:
    seen, todo = {0}, [0]
    while todo:
        i = todo.pop()
        for p in perms:
            j = p[i]
            if j not in seen:
                seen.add(j)
                todo.append(j)
    return len(seen) == n


@lru_cache(maxsize=None)
def _of_type(n: int, lam: tuple) -> tuple:
    return tuple(p for p in permutations(range(n)) if cycle_type(p) == lam)


def _representative(n: int, lam: tuple) -> tuple:
    p, start = list(range(n)), 0
    for k in lam:
        for i in range(k):
            p[start + i] = start + (i + 1) % k
        start += k
    return tuple(p)


def hurwitz_realizable(h: HurwitzData, bound: int = 8, budget: int = 2_000_000):
    """Decide realizability by exhaustive search (``n <= bound``).

    Parity and the Riemann-Hurwitz count are checked first; neither needs a
    search.  Raises :class:`SearchExceeded` above ``bound`` or when more
    than ``budget`` partial tuples are visited.
    """
    n = h.n
    data = [p for p in h.branch_data if any(k > 1 for k in p)]
    if h.defect() % 2:
        return NotRealizable("odd total parity")
    if h.defect() != 2 * n - 2:
        return NotRealizable(f"Riemann-Hurwitz: defect {h.defect()} != {2 * n - 2}")
    if n == 1:
        return Realizable(())
    if n > bound:
        raise SearchExceeded(f"degree {n} above search bound {bound}")
    if len(data) < 2:
        return NotRealizable("fewer than two branch points")
    # largest classes last: the final permutation is forced, so put the
    # biggest class there and fix the first by conjugation
    data.sort(key=lambda lam: len(_of_type(n, lam)))
    first, middle, last = data[0], data[1:-1], data[-1]
    s1 = _representative(n, first)
    ident = tuple(range(n))
    visited = 0
    stack = [(compose(ident, s1), (s1,))]
    while stack:
        prod, chosen = stack.pop()
        visited += 1
        if visited > budget:
            raise SearchExceeded(f"more than {budget} partial tuples")
        k = len(chosen) - 1
        if k == len(middle):
            sk = inverse(prod)
            if cycle_type(sk) == last and transitive(chosen + (sk,), n):
                return Realizable(chosen + (sk,), tuple(data))
            continue
        for p in _of_type(n, middle[k]):
            stack.append((compose(prod, p), chosen + (p,)))
    return NotRealizable("no transitive tuple with trivial product")


def product_is_identity(perms) -> bool:
    if not perms:
        return True
    acc = tuple(range(len(perms[0])))
    for p in perms:
        acc = compose(acc, p)
    return acc == tuple(range(len(acc)))
