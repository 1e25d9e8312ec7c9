"""Grading groups: finite multiplication tables, free abelian groups, products, quotients."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Sequence


class GroupError(ValueError):
    pass


class Group:
    kind = "abstract"
    identity: Any = None
    is_finite = False
    is_abelian = True

    def op(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def contains(self, g) -> bool:
        raise NotImplementedError

    def canon(self, raw):
        """Convert a JSON-ish value into an element, raising GroupError if it is not one."""
        raise NotImplementedError

    def to_json(self, g):
        raise NotImplementedError

    def fmt(self, g) -> str:
        return str(self.to_json(g))

    def ball(self, radius: int) -> list:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Group) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"<{self.kind} group {self._key()[1:]!r}>"


class FiniteGroup(Group):
    """Elements are 0..n-1; table[i][j] is the product i*j."""

    kind = "table"
    is_finite = True

    def __init__(self, table: Sequence[Sequence[int]], names: Sequence[str] | None = None):
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise GroupError("multiplication table must be square and non-empty")
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        for row in self.table:
            for v in row:
                if not 0 <= v < n:
                    raise GroupError(f"table entry {v} out of range")
        self.n = n
        ident = [e for e in range(n) if all(self.table[e][g] == g and self.table[g][e] == g for g in range(n))]
        if not ident:
            raise GroupError("table has no identity")
        self.identity = ident[0]
        self._inv = []
        for g in range(n):
            hs = [h for h in range(n) if self.table[g][h] == self.identity]
            if len(hs) != 1 or self.table[hs[0]][g] != self.identity:
                raise GroupError(f"element {g} has no two-sided inverse")
            self._inv.append(hs[0])
        if n <= 32:
            for a, b, c in itertools.product(range(n), repeat=3):
                if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                    raise GroupError(f"table is not associative at ({a},{b},{c})")
        self.is_abelian = all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))
        if names is not None:
            if len(names) != n or len(set(names)) != n:
                raise GroupError("names must be distinct, one per element")
            names = tuple(names)
        self.names = names

    def op(self, g, h):
        return self.table[g][h]

    def inv(self, g):
        return self._inv[g]

    def contains(self, g) -> bool:
        return isinstance(g, int) and not isinstance(g, bool) and 0 <= g < self.n

    def canon(self, raw):
        if isinstance(raw, str) and self.names is not None and raw in self.names:
            return self.names.index(raw)
        if self.contains(raw):
            return raw
        raise GroupError(f"{raw!r} is not an element of this group")

    def to_json(self, g):
        return self.names[g] if self.names is not None else g

    def fmt(self, g) -> str:
        return self.names[g] if self.names is not None else f"g{g}"

    def elements(self) -> list:
        return list(range(self.n))

    def ball(self, radius: int) -> list:
        return self.elements()

    def describe(self) -> dict:
        d = {"kind": "table", "table": [list(r) for r in self.table]}
        if self.names is not None:
            d["names"] = list(self.names)
        return d

    def _key(self):
        return ("table", self.table)


class FreeAbelianGroup(Group):
    """Z^k written additively. Rank 1 elements are plain ints, higher ranks are tuples."""

    kind = "free-abelian"

    def __init__(self, rank: int):
        if rank < 0:
            raise GroupError("rank must be non-negative")
        self.rank = rank
        self.identity = 0 if rank == 1 else (0,) * rank

    def op(self, g, h):
        if self.rank == 1:
            return g + h
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        if self.rank == 1:
            return -g
        return tuple(-a for a in g)

    def contains(self, g) -> bool:
        if self.rank == 1:
            return isinstance(g, int) and not isinstance(g, bool)
        return (isinstance(g, tuple) and len(g) == self.rank
                and all(isinstance(a, int) and not isinstance(a, bool) for a in g))

    def canon(self, raw):
        if self.rank == 1 and isinstance(raw, (list, tuple)) and len(raw) == 1:
            raw = raw[0]
        if self.rank != 1 and isinstance(raw, list):
            raw = tuple(raw)
        if self.contains(raw):
            return raw
        raise GroupError(f"{raw!r} is not an element of Z^{self.rank}")

    def to_json(self, g):
        return g if self.rank == 1 else list(g)

    def coords(self, g) -> tuple:
        return (g,) if self.rank == 1 else tuple(g)

    def from_coords(self, c):
        return c[0] if self.rank == 1 else tuple(c)

    def ball(self, radius: int) -> list:
        pts = itertools.product(range(-radius, radius + 1), repeat=self.rank)
        return [self.from_coords(p) for p in pts]

    def describe(self) -> dict:
        return {"kind": "free-abelian", "rank": self.rank}

    def _key(self):
        return ("free-abelian", self.rank)


class ProductGroup(Group):
    kind = "product"

    def __init__(self, factors: Sequence[Group]):
        self.factors = tuple(factors)
        self.identity = tuple(f.identity for f in self.factors)
        self.is_finite = all(f.is_finite for f in self.factors)
        self.is_abelian = all(f.is_abelian for f in self.factors)

    def op(self, g, h):
        return tuple(f.op(a, b) for f, a, b in zip(self.factors, g, h))

    def inv(self, g):
        return tuple(f.inv(a) for f, a in zip(self.factors, g))

    def contains(self, g) -> bool:
        return (isinstance(g, tuple) and len(g) == len(self.factors)
                and all(f.contains(a) for f, a in zip(self.factors, g)))

    def canon(self, raw):
        if not isinstance(raw, (list, tuple)) or len(raw) != len(self.factors):
            raise GroupError(f"{raw!r} is not an element of the product group")
        return tuple(f.canon(a) for f, a in zip(self.factors, raw))

    def to_json(self, g):
        return [f.to_json(a) for f, a in zip(self.factors, g)]

    def fmt(self, g) -> str:
        return "(" + ",".join(f.fmt(a) for f, a in zip(self.factors, g)) + ")"

    def elements(self) -> list:
        return list(itertools.product(*(f.elements() for f in self.factors)))

    def ball(self, radius: int) -> list:
        return list(itertools.product(*(f.ball(radius) for f in self.factors)))

    def describe(self) -> dict:
        return {"kind": "product", "factors": [f.describe() for f in self.factors]}

    def _key(self):
        return ("product",) + tuple(f._key() for f in self.factors)


def cyclic_group(n: int, names: Sequence[str] | None = None) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], names)


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], ["e"])


C2 = cyclic_group(2, ["e", "x"])
Z = FreeAbelianGroup(1)


def group_from_json(d: dict) -> Group:
    if not isinstance(d, dict) or "kind" not in d:
        raise GroupError(f"group description needs a 'kind': {d!r}")
    kind = d["kind"]
    if kind == "table":
        return FiniteGroup(d["table"], d.get("names"))
    if kind == "free-abelian":
        return FreeAbelianGroup(int(d["rank"]))
    if kind == "product":
        return ProductGroup([group_from_json(f) for f in d["factors"]])
    raise GroupError(f"unknown group kind {kind!r}")


# degree arithmetic

def _check(G: Group, *gs):
    for g in gs:
        if not G.contains(g):
            raise GroupError(f"{g!r} does not belong to the grading group")


def compose(G: Group, g, h):
    _check(G, g, h)
    return G.op(g, h)


def inverse(G: Group, g):
    _check(G, g)
    return G.inv(g)


def degree_of_entry(G: Group, a, b):
    """The degree a*b^{-1} an entry needs at a row of degree a and a column of degree b."""
    return G.op(a, G.inv(b))


def seq_concat(G: Group, a: Sequence, b: Sequence) -> tuple:
    _check(G, *a, *b)
    return tuple(a) + tuple(b)


def seq_translate(G: Group, a: Sequence, d) -> tuple:
    """Right translation: (a_1 d, ..., a_n d)."""
    _check(G, *a, d)
    return tuple(G.op(x, d) for x in a)


def seq_translate_left(G: Group, d, a: Sequence) -> tuple:
    _check(G, *a, d)
    return tuple(G.op(d, x) for x in a)


def seq_inverse(G: Group, a: Sequence) -> tuple:
    _check(G, *a)
    return tuple(G.inv(x) for x in a)


# quotients

@dataclass
class Quotient:
    """A quotient map Gamma -> Gamma/Omega with a concrete target group."""
    parent: Group
    target: Group
    project: Callable[[Any], Any]
    generators: tuple

    def __call__(self, g):
        if not self.parent.contains(g):
            raise GroupError(f"{g!r} is not in the source group")
        return self.project(g)

    def in_kernel(self, g) -> bool:
        return self(g) == self.target.identity


def _subgroup_closure(G: FiniteGroup, gens) -> set:
    H = {G.identity}
    frontier = [G.identity]
    gens = list(gens)
    while frontier:
        nxt = []
        for h in frontier:
            for s in gens:
                k = G.op(h, s)
                if k not in H:
                    H.add(k)
                    nxt.append(k)
        frontier = nxt
    return H


def _finite_quotient(G: FiniteGroup, gens) -> Quotient:
    H = _subgroup_closure(G, gens)
    for g in range(G.n):
        for h in H:
            if G.op(G.op(g, h), G.inv(g)) not in H:
                raise GroupError("subgroup is not normal")
    cosets: list[frozenset] = []
    which = {}
    for g in range(G.n):
        if g in which:
            continue
        c = frozenset(G.op(g, h) for h in H)
        for x in c:
            which[x] = len(cosets)
        cosets.append(c)
    m = len(cosets)
    reps = [min(c) for c in cosets]
    table = [[which[G.op(reps[i], reps[j])] for j in range(m)] for i in range(m)]
    names = None
    if G.names is not None:
        names = [G.names[r] for r in reps]
    target = FiniteGroup(table, names)
    return Quotient(G, target, lambda g: which[g], tuple(gens))


def smith_form(M: list[list[int]]) -> tuple[list[int], list[list[int]]]:
    """Diagonal d and unimodular U with U*M*V = diag(d) for some unimodular V."""
    k = len(M)
    m = len(M[0]) if k else 0
    A = [list(r) for r in M]
    U = [[int(i == j) for j in range(k)] for i in range(k)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def add_row(dst, src, q):
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]

    def add_col(dst, src, q):
        for row in A:
            row[dst] -= q * row[src]

    diag = []
    t = 0
    while t < min(k, m):
        cands = [(abs(A[i][j]), i, j) for i in range(t, k) for j in range(t, m) if A[i][j] != 0]
        if not cands:
            break
        _, i, j = min(cands)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            for i in range(t + 1, k):
                add_row(i, t, A[i][t] // A[t][t])
            for j in range(t + 1, m):
                add_col(j, t, A[t][j] // A[t][t])
            rest = [(abs(A[i][t]), i, "r") for i in range(t + 1, k) if A[i][t] != 0]
            rest += [(abs(A[t][j]), j, "c") for j in range(t + 1, m) if A[t][j] != 0]
            if rest:
                _, idx, side = min(rest)
                if side == "r":
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            bad = [i for i in range(t + 1, k) for j in range(t + 1, m) if A[i][j] % A[t][t] != 0]
            if bad:
                add_row(t, bad[0], -1)
                continue
            break
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        diag.append(A[t][t])
        t += 1
    return diag, U


def _free_quotient(G: FreeAbelianGroup, gens) -> Quotient:
    k = G.rank
    cols = [G.coords(G.canon(g)) for g in gens]
    if not cols:
        return Quotient(G, G, lambda g: g, ())
    M = [[c[i] for c in cols] for i in range(k)]
    diag, U = smith_form(M)
    parts = []  # (row of U, modulus or 0 for free)
    for i, d in enumerate(diag):
        if d != 1:
            parts.append((U[i], d))
    free_rows = [U[i] for i in range(len(diag), k)]
    torsion = [(row, d) for row, d in parts]
    comps: list[Group] = [cyclic_group(d) for _, d in torsion]
    if free_rows:
        comps.append(FreeAbelianGroup(len(free_rows)))

    def project(g):
        c = G.coords(g)
        vals = [sum(a * b for a, b in zip(row, c)) % d for row, d in torsion]
        if free_rows:
            fc = [sum(a * b for a, b in zip(row, c)) for row in free_rows]
            vals.append(fc[0] if len(fc) == 1 else tuple(fc))
        if len(comps) == 1:
            return vals[0]
        return tuple(vals)

    if not comps:
        target: Group = trivial_group()
        return Quotient(G, target, lambda g: 0, tuple(gens))
    target = comps[0] if len(comps) == 1 else ProductGroup(comps)
    return Quotient(G, target, project, tuple(gens))


def quotient(G: Group, gens: Sequence | str) -> Quotient:
    """Quotient by the normal subgroup generated by gens (or "all" for the whole group)."""
    if gens == "all":
        t = trivial_group()
        return Quotient(G, t, lambda g: 0, ("all",))
    gens = [G.canon(g) for g in gens]
    if isinstance(G, FiniteGroup):
        return _finite_quotient(G, gens)
    if isinstance(G, FreeAbelianGroup):
        return _free_quotient(G, gens)
    if isinstance(G, ProductGroup):
        per = [[] for _ in G.factors]
        for g in gens:
            moved = [i for i, (f, a) in enumerate(zip(G.factors, g)) if a != f.identity]
            if len(moved) > 1:
                raise NotImplementedError("quotients of product groups need generators inside single factors")
            if moved:
                per[moved[0]].append(g[moved[0]])
        qs = [quotient(f, p) for f, p in zip(G.factors, per)]
        target = ProductGroup([q.target for q in qs])
        return Quotient(G, target, lambda g: tuple(q.project(a) for q, a in zip(qs, g)), tuple(gens))
    raise GroupError(f"cannot form quotients of {G!r}")
