"""Exact integer matrix algebra and finitely generated abelian groups.

All arithmetic uses plain Python ints, so arbitrary precision is automatic.
Matrices are dense lists of row lists.  The Smith normal form routine keeps
unimodular witnesses U, V together with their inverses, which is what lets a
:class:`Presentation` translate between generator coordinates and canonical
coordinates of the quotient group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, lcm, prod

Matrix = list[list[int]]


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def mat_mul(a: Matrix, b: Matrix, n_cols_b: int | None = None) -> Matrix:
    """Product a*b.  n_cols_b disambiguates the shape of an empty b."""
    if n_cols_b is None:
        n_cols_b = len(b[0]) if b else 0
    out = []
    for row in a:
        if len(row) != len(b):
            raise ValueError("shape mismatch in mat_mul")
        out.append(
            [sum(row[k] * b[k][j] for k in range(len(b))) for j in range(n_cols_b)]
        )
    return out


def vec_mat(x: list[int], b: Matrix, n_cols_b: int | None = None) -> list[int]:
    return mat_mul([x], b, n_cols_b)[0]


def int_det(a: Matrix) -> int:
    """Determinant of a square integer matrix, by fraction-free elimination."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("int_det needs a square matrix")
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass
class SmithForm:
    """U * A * V = diag(diag), with U, V unimodular.

    diag has min(m, n) entries, is a divisibility chain, and may end in
    zeros when A has deficient rank.
    """

    m: int
    n: int
    diag: list[int]
    u: Matrix
    v: Matrix
    u_inv: Matrix
    v_inv: Matrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)


def smith_normal_form(rows: Matrix, n_cols: int | None = None) -> SmithForm:
    """Smith normal form with witnesses.

    Deterministic: the pivot is the nonzero entry of smallest absolute
    value, ties broken by lowest row index then lowest column index.
    """
    m = len(rows)
    if n_cols is None:
        n_cols = len(rows[0]) if rows else 0
    n = n_cols
    if any(len(row) != n for row in rows):
        raise ValueError("ragged matrix")
    a = [row[:] for row in rows]
    u = identity_matrix(m)
    u_inv = identity_matrix(m)
    v = identity_matrix(n)
    v_inv = identity_matrix(n)

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]
            for row in u_inv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]
            v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row[dst] += q * row[src]; inverse op recorded in u_inv columns
        if q == 0:
            return
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]
        for row in u_inv:
            row[src] -= q * row[dst]

    def add_col(dst: int, src: int, q: int) -> None:
        if q == 0:
            return
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]
        v_inv[src] = [x - q * y for x, y in zip(v_inv[src], v_inv[dst])]

    def negate_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for row in u_inv:
            row[i] = -row[i]

    def find_pivot(t: int) -> tuple[int, int] | None:
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0:
                    key = (abs(a[i][j]), i, j)
                    if best is None or key < best:
                        best = key
        return None if best is None else (best[1], best[2])

    t = 0
    while t < min(m, n):
        pos = find_pivot(t)
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        while True:
            # clear column t, re-pivoting on any nonzero remainder
            dirty = False
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            if any(a[i][t] != 0 for i in range(t + 1, m)):
                continue
            # pivot must divide every remaining entry to build the chain;
            # otherwise fold the offending row in and clear again
            d = a[t][t]
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % d != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    diag = [a[i][i] for i in range(min(m, n))]
    # internal consistency: witnesses really do transform A to diag
    check = mat_mul(mat_mul(u, rows, n), v, n)
    for i in range(m):
        for j in range(n):
            want = diag[i] if i == j and i < len(diag) else 0
            if check[i][j] != want:
                raise AssertionError("smith_normal_form witness check failed")
    return SmithForm(m=m, n=n, diag=diag, u=u, v=v, u_inv=u_inv, v_inv=v_inv)


@dataclass(frozen=True)
class FgAbGroup:
    """Z^free_rank plus cyclic factors Z/t for t in torsion.

    torsion is an ascending divisibility chain with every entry >= 2, so
    equal dataclasses mean isomorphic groups.  Element coordinates list the
    free coordinates first, then the torsion coordinates in chain order.
    """

    free_rank: int
    torsion: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for i, t in enumerate(self.torsion):
            if t < 2:
                raise ValueError("torsion factors must be >= 2")
            if i and t % self.torsion[i - 1] != 0:
                raise ValueError("torsion factors must form a divisibility chain")

    @property
    def n_coords(self) -> int:
        return self.free_rank + len(self.torsion)

    def order(self) -> int:
        """Group order, with 0 meaning infinite."""
        return 0 if self.free_rank else prod(self.torsion, start=1)

    def two_rank(self) -> int:
        """Rank of the group modulo doubled elements."""
        return self.free_rank + sum(1 for t in self.torsion if t % 2 == 0)

    def two_primary_exponents(self) -> tuple[int, ...]:
        """Orders of the 2-primary cyclic factors, ascending."""
        out = []
        for t in self.torsion:
            e = 1
            while t % 2 == 0:
                e *= 2
                t //= 2
            if e > 1:
                out.append(e)
        return tuple(out)

    def odd_part_order(self) -> int:
        out = 1
        for t in self.torsion:
            while t % 2 == 0:
                t //= 2
            out *= t
        return out

    def element(self, coords) -> "GroupElt":
        coords = tuple(coords)
        if len(coords) != self.n_coords:
            raise ValueError("coordinate count mismatch")
        return GroupElt(self, self._reduce(coords))

    def _reduce(self, coords: tuple[int, ...]) -> tuple[int, ...]:
        r = self.free_rank
        return coords[:r] + tuple(
            c % t for c, t in zip(coords[r:], self.torsion)
        )

    def zero(self) -> "GroupElt":
        return GroupElt(self, (0,) * self.n_coords)

    def unit(self, i: int) -> "GroupElt":
        coords = [0] * self.n_coords
        coords[i] = 1
        return self.element(coords)

    def elements(self):
        """All elements; only valid for finite groups."""
        if self.free_rank:
            raise ValueError("infinite group")
        for combo in itertools.product(*(range(t) for t in self.torsion)):
            yield GroupElt(self, combo)

    def torsion_elements(self):
        """All elements of finite order (free coordinates zero)."""
        r = self.free_rank
        for combo in itertools.product(*(range(t) for t in self.torsion)):
            yield GroupElt(self, (0,) * r + combo)

    def elements_of_order_dividing_2(self):
        r = self.free_rank
        choices = [(0, t // 2) if t % 2 == 0 else (0,) for t in self.torsion]
        for combo in itertools.product(*choices):
            yield GroupElt(self, (0,) * r + combo)

    def describe(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " x ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElt:
    group: FgAbGroup
    coords: tuple[int, ...]

    def __add__(self, other: "GroupElt") -> "GroupElt":
        if self.group != other.group:
            raise ValueError("elements of different groups")
        return self.group.element(
            tuple(x + y for x, y in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "GroupElt":
        return self.group.element(tuple(-x for x in self.coords))

    def __sub__(self, other: "GroupElt") -> "GroupElt":
        return self + (-other)

    def smul(self, k: int) -> "GroupElt":
        return self.group.element(tuple(k * x for x in self.coords))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def order(self) -> int:
        """Additive order, with 0 meaning infinite."""
        r = self.group.free_rank
        if any(self.coords[:r]):
            return 0
        out = 1
        for c, t in zip(self.coords[r:], self.group.torsion):
            if c:
                out = lcm(out, t // gcd(c, t))
        return out

    def is_torsion(self) -> bool:
        return self.order() != 0


@dataclass
class Presentation:
    """Quotient of Z^n_gens by the row space of a relation matrix."""

    n_gens: int
    relations: Matrix
    snf: SmithForm
    group: FgAbGroup
    _free_positions: list[int]
    _torsion_positions: list[int]

    def to_canonical(self, gen_vector: list[int]) -> GroupElt:
        """Image in the quotient of a Z-combination of generators."""
        if len(gen_vector) != self.n_gens:
            raise ValueError("generator vector length mismatch")
        y = vec_mat(gen_vector, self.snf.v, self.n_gens)
        coords = [y[j] for j in self._free_positions] + [
            y[j] for j in self._torsion_positions
        ]
        return self.group.element(coords)

    def generator_image(self, i: int) -> GroupElt:
        vec = [0] * self.n_gens
        vec[i] = 1
        return self.to_canonical(vec)

    def lift(self, elt: GroupElt) -> list[int]:
        """A generator vector mapping to elt under to_canonical."""
        if elt.group != self.group:
            raise ValueError("element of a different group")
        y = [0] * self.n_gens
        r = self.group.free_rank
        for k, j in enumerate(self._free_positions):
            y[j] = elt.coords[k]
        for k, j in enumerate(self._torsion_positions):
            y[j] = elt.coords[r + k]
        return vec_mat(y, self.snf.v_inv, self.n_gens)


def cokernel(rows: Matrix, n_gens: int) -> Presentation:
    """The abelian group Z^n_gens modulo the row space of rows."""
    snf = smith_normal_form(rows, n_gens)

    def diag_at(j: int) -> int:
        return snf.diag[j] if j < len(snf.diag) else 0

    free_positions = [j for j in range(n_gens) if diag_at(j) == 0]
    torsion_positions = [j for j in range(n_gens) if diag_at(j) >= 2]
    group = FgAbGroup(
        free_rank=len(free_positions),
        torsion=tuple(diag_at(j) for j in torsion_positions),
    )
    return Presentation(
        n_gens=n_gens,
        relations=[row[:] for row in rows],
        snf=snf,
        group=group,
        _free_positions=free_positions,
        _torsion_positions=torsion_positions,
    )


def solve_in_row_space(rows: Matrix, n_cols: int, target: list[int]) -> list[int] | None:
    """x with x*rows == target, or None.  Empty solution list when rows=[]."""
    if len(target) != n_cols:
        raise ValueError("target length mismatch")
    snf = smith_normal_form(rows, n_cols)
    bv = vec_mat(target, snf.v, n_cols)
    z = [0] * snf.m
    for j in range(n_cols):
        d = snf.diag[j] if j < len(snf.diag) else 0
        if d == 0:
            if bv[j] != 0:
                return None
        else:
            if bv[j] % d != 0:
                return None
            z[j] = bv[j] // d
    return vec_mat(z, snf.u, snf.m)


def left_kernel_basis(rows: Matrix, n_cols: int) -> Matrix:
    """Basis of {x : x*rows == 0} as rows."""
    snf = smith_normal_form(rows, n_cols)
    out = []
    for j in range(snf.m):
        d = snf.diag[j] if j < len(snf.diag) else 0
        if d == 0:
            out.append(snf.u[j][:])
    return out


def _stacked_relations(group: FgAbGroup, gens: list[GroupElt]) -> Matrix:
    rows = [list(g.coords) for g in gens]
    r = group.free_rank
    for i, t in enumerate(group.torsion):
        row = [0] * group.n_coords
        row[r + i] = t
        rows.append(row)
    return rows


def subgroup_contains(group: FgAbGroup, gens: list[GroupElt], target: GroupElt) -> bool:
    """Is target in the subgroup generated by gens?"""
    for g in gens:
        if g.group != group:
            raise ValueError("generator from a different group")
    if target.group != group:
        raise ValueError("target from a different group")
    sol = solve_in_row_space(
        _stacked_relations(group, gens), group.n_coords, list(target.coords)
    )
    return sol is not None


def subgroups_equal(group: FgAbGroup, gens_a: list[GroupElt], gens_b: list[GroupElt]) -> bool:
    return all(subgroup_contains(group, gens_b, g) for g in gens_a) and all(
        subgroup_contains(group, gens_a, g) for g in gens_b
    )


def quotient_by_subgroup(group: FgAbGroup, gens: list[GroupElt]) -> FgAbGroup:
    """Isomorphism type of group / <gens>."""
    return cokernel(_stacked_relations(group, gens), group.n_coords).group


def subgroup_type(group: FgAbGroup, gens: list[GroupElt]) -> FgAbGroup:
    """Isomorphism type of the subgroup generated by gens."""
    stacked = _stacked_relations(group, gens)
    kernel = left_kernel_basis(stacked, group.n_coords)
    coeff_rows = [row[: len(gens)] for row in kernel]
    return cokernel(coeff_rows, len(gens)).group


def minor_gcds(rows: Matrix, n_cols: int) -> list[int]:
    """gcd of all k x k minors for k = 1..min(m, n), by brute force."""
    m = len(rows)
    out = []
    for k in range(1, min(m, n_cols) + 1):
        g = 0
        for rsel in itertools.combinations(range(m), k):
            for csel in itertools.combinations(range(n_cols), k):
                sub = [[rows[i][j] for j in csel] for i in rsel]
                g = gcd(g, int_det(sub))
        out.append(g)
    return out
