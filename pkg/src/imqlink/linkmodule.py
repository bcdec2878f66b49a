"""The integral module presented by the crossing relations of a diagram.

Every crossing (over a, unders b, b') contributes the relation
2*a - b - b' over the free abelian group on the arcs; coinciding arcs
coalesce.  The cokernel carries two extra structures: the weight map w
(every arc class has weight 1) and the component-parity map p into
(Z/2)^mu.  The pair (w, p) drives all re-indexing and equivalence logic;
their asymmetric combined form (w, p_2..p_mu) is available as `marking`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from .abelian import (
    FgAbGroup,
    GroupElt,
    Matrix,
    Presentation,
    cokernel,
    int_det,
    subgroup_contains,
)
from .diagram import LinkDiagram, component_walk


def relation_matrix(d: LinkDiagram) -> Matrix:
    """One row per crossing: 2*over - under - under', coalesced."""
    rows = []
    for c in d.crossings:
        row = [0] * d.n_arcs
        row[c.over] += 2
        row[c.under[0]] -= 1
        row[c.under[1]] -= 1
        rows.append(row)
    return rows


@dataclass
class LinkModule:
    diagram: LinkDiagram
    pres: Presentation
    group: FgAbGroup
    arc_class: tuple[GroupElt, ...]

    @property
    def mu(self) -> int:
        return self.diagram.mu

    def weight(self, x: GroupElt) -> int:
        """The homomorphism to Z sending every arc class to 1."""
        return sum(self.pres.lift(x))

    def parity(self, x: GroupElt) -> tuple[int, ...]:
        """Mod-2 arc-coefficient sums per component; arc classes map to
        unit vectors."""
        vec = self.pres.lift(x)
        out = [0] * self.mu
        for arc, coeff in enumerate(vec):
            out[self.diagram.kappa[arc]] += coeff
        return tuple(v % 2 for v in out)

    def marking(self, x: GroupElt) -> tuple[int, ...]:
        """(weight, parity_2..parity_mu): the combined map whose first
        parity coordinate is dropped as redundant."""
        return (self.weight(x), *self.parity(x)[1:])


class InternalCheckError(AssertionError):
    """A structural fact guaranteed by the construction failed to hold."""


def build_link_module(d: LinkDiagram) -> LinkModule:
    rows = relation_matrix(d)
    # weight and parity must kill every relation row
    for i, row in enumerate(rows):
        if sum(row) != 0:
            raise InternalCheckError(f"relation row {i} has nonzero weight")
        per_comp = [0] * d.mu
        for arc, coeff in enumerate(row):
            per_comp[d.kappa[arc]] += coeff
        if any(v % 2 for v in per_comp):
            raise InternalCheckError(f"relation row {i} has odd component sum")
    pres = cokernel(rows, d.n_arcs)
    mod = LinkModule(
        diagram=d,
        pres=pres,
        group=pres.group,
        arc_class=tuple(pres.generator_image(a) for a in range(d.n_arcs)),
    )
    r = pres.group.free_rank
    k = sum(1 for t in pres.group.torsion if t % 2 == 0)
    if not (1 <= r <= d.mu and r + k == d.mu):
        raise InternalCheckError(
            f"module shape violated: free rank {r}, even factors {k}, mu {d.mu}"
        )
    for a in range(d.n_arcs):
        if mod.weight(mod.arc_class[a]) != 1:
            raise InternalCheckError(f"arc {a} has weight != 1")
        want = tuple(1 if i == d.kappa[a] else 0 for i in range(d.mu))
        if mod.parity(mod.arc_class[a]) != want:
            raise InternalCheckError(f"arc {a} has wrong parity vector")
    return mod


@dataclass
class WeightKernel:
    """ker(weight) presented by the crossing rows plus a unit row at
    base_arc; isomorphic to the first homology of the double branched
    cover."""

    group: FgAbGroup
    pres: Presentation
    base_arc: int
    module: LinkModule

    def project(self, x: GroupElt) -> GroupElt:
        """Image of a module element under the quotient killing the base
        arc class; restricted to ker(weight) this is the canonical
        isomorphism."""
        return self.pres.to_canonical(self.module.pres.lift(x))


def weight_kernel(mod: LinkModule, base_arc: int = 0) -> WeightKernel:
    if not 0 <= base_arc < mod.diagram.n_arcs:
        raise ValueError("base_arc out of range")
    rows = [row[:] for row in mod.pres.relations]
    unit = [0] * mod.diagram.n_arcs
    unit[base_arc] = 1
    rows.append(unit)
    pres = cokernel(rows, mod.diagram.n_arcs)
    return WeightKernel(group=pres.group, pres=pres, base_arc=base_arc, module=mod)


def link_determinant(mod: LinkModule) -> int:
    """|ker(weight)| when finite, else 0."""
    kw = weight_kernel(mod)
    return 0 if kw.group.free_rank else kw.group.order()


def determinant_by_minors(d: LinkDiagram, base_arc: int = 0) -> int:
    """Independent determinant computation: gcd of all maximal minors of
    the relation matrix avoiding the base arc's column."""
    rows = relation_matrix(d)
    n = d.n_arcs
    if len(rows) < n - 1:
        return 0
    cols = [j for j in range(n) if j != base_arc]
    g = 0
    for rsel in itertools.combinations(range(len(rows)), n - 1):
        sub = [[rows[i][j] for j in cols] for i in rsel]
        g = gcd(g, int_det(sub))
    return g


def longitudes(mod: LinkModule) -> list[GroupElt]:
    """Alternating over-arc sums along each component walk.

    Each result is 2-torsion, so the starting point and direction of the
    walk do not matter.
    """
    d = mod.diagram
    if not d.is_even():
        raise ValueError("diagram not even")
    out = []
    for i in range(d.mu):
        total = mod.group.zero()
        for j, (_, over) in enumerate(component_walk(d, i)):
            term = mod.arc_class[over]
            total = total + (term if j % 2 == 0 else -term)
        out.append(total)
    return out


def longitude_zero_subset(
    mod: LinkModule, longs: list[GroupElt]
) -> tuple[int, ...] | None:
    """Smallest nonempty proper component subset whose longitudes sum to
    zero; None when there is none.  Nonempty iff the determinant is 0."""
    mu = mod.mu
    if mu < 2:
        raise ValueError("needs at least 2 components")
    for size in range(1, mu):
        for combo in itertools.combinations(range(mu), size):
            total = mod.group.zero()
            for i in combo:
                total = total + longs[i]
            if total.is_zero():
                return combo
    return None


def torsion_parity_profile(mod: LinkModule) -> tuple[tuple[int, ...], ...]:
    """Sorted multiset of parity vectors of the nonzero finite-order
    elements, canonicalized to the least multiset over coordinate
    permutations (so it is invariant under component re-indexing)."""
    vectors = [
        mod.parity(t) for t in mod.group.torsion_elements() if not t.is_zero()
    ]
    best = None
    for perm in itertools.permutations(range(mod.mu)):
        cand = tuple(sorted(tuple(v[i] for i in perm) for v in vectors))
        if best is None or cand < best:
            best = cand
    return best if best is not None else ()


def double_kernel_subgroup_check(mod: LinkModule) -> bool:
    """{x : weight 0, parity 0} equals 2 * {x : weight 0}; needs finite
    ker(weight)."""
    kw_elements = [t for t in mod.group.torsion_elements() if mod.weight(t) == 0]
    if weight_kernel(mod).group.free_rank:
        raise ValueError("ker(weight) is infinite")
    joint = [t for t in kw_elements if not any(mod.parity(t))]
    doubled = [t.smul(2) for t in kw_elements]
    return set(joint) == set(doubled)
