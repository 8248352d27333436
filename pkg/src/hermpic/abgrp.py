"""Finitely generated abelian groups with an order-2 action.

Conventions used everywhere in this package:

* A group is stored in invariant-factor normal form: torsion orders
  ``d_1 | d_2 | ... | d_k`` (each >= 2) followed by ``rank`` free generators.
  Generator order is torsion first (ascending invariant factor), then free.
* Elements are integer coordinate vectors of length ``k + rank``; torsion
  coordinates are canonically reduced into ``[0, d_i)``.
* A homomorphism is an integer matrix with shape (target gens) x (source
  gens); column ``j`` is the image of source generator ``j``.
* The action of the involution is a square matrix in the same convention.
  ``action=None`` means the identity.

Every operation renormalizes its output, so equality of groups is plain
structural equality of the normal form.

>>> g = AbGroupWithAction.from_divisors(2, 3)
>>> str(g)
'Z/6'
>>> h = GroupHom(AbGroupWithAction.free(1), AbGroupWithAction.free(1), [[2]])
>>> str(cokernel(h).group)
'Z/2'
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod
from typing import Callable, Iterable, Iterator, Sequence

from ._intlinalg import (
    IMat,
    column_lattice_basis,
    smith_decompose,
    solve_integer,
    solve_integer_many,
)
from .errors import HomValidationError, InfiniteGroupError, InvalidGroupError


def smith_normal_form(matrix: Sequence[Sequence[int]]):
    """Smith normal form with transforms: ``left @ matrix @ right`` is diagonal.

    Returns ``(diagonal, left, right)`` where ``diagonal`` is the list of
    diagonal entries (nonnegative, each dividing the next, zeros last) and the
    transforms are unimodular integer matrices as lists of rows.  An empty
    matrix yields an empty diagonal.
    """
    rows = [list(r) for r in matrix]
    ncols = len(rows[0]) if rows else 0
    mat = IMat.from_rows(rows, ncols)
    dec = smith_decompose(mat)
    return list(dec.diag_entries), dec.left.to_lists(), dec.right.to_lists()


def _reduce_action(torsion, rank, action_rows):
    n = len(torsion) + rank
    reduced = []
    for i in range(n):
        row = action_rows[i]
        if i < len(torsion):
            reduced.append(tuple(int(x) % torsion[i] for x in row))
        else:
            reduced.append(tuple(int(x) for x in row))
    return tuple(reduced)


@dataclass(frozen=True)
class AbGroupWithAction:
    """Finitely generated abelian group with an involutive action.

    ``torsion`` is the invariant-factor chain, ``rank`` the free rank, and
    ``action`` an optional square matrix (None means identity).
    """

    torsion: tuple = ()
    rank: int = 0
    action: tuple | None = None

    def __post_init__(self):
        torsion = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", torsion)
        for d in torsion:
            if d < 2:
                raise InvalidGroupError(f"invariant factor {d} < 2")
        for a, b in zip(torsion, torsion[1:]):
            if b % a != 0:
                raise InvalidGroupError(f"divisibility chain broken: {a} does not divide {b}")
        if self.rank < 0:
            raise InvalidGroupError("negative free rank")
        if self.action is not None:
            n = self.ngens
            rows = [list(r) for r in self.action]
            if len(rows) != n or any(len(r) != n for r in rows):
                raise InvalidGroupError(f"action matrix must be {n}x{n}")
            reduced = _reduce_action(torsion, self.rank, rows)
            if reduced == tuple(IMat.identity(n).rows):
                object.__setattr__(self, "action", None)
                return
            object.__setattr__(self, "action", reduced)
            mat = IMat(reduced, n)
            self._check_preserves_relations(mat)
            sq = mat.mul(mat)
            for j in range(n):
                if self.reduce(sq.col(j)) != self.reduce(IMat.identity(n).col(j)):
                    raise InvalidGroupError("action squared is not the identity modulo relations")

    def _check_preserves_relations(self, mat: IMat):
        for j, d in enumerate(self.torsion):
            for i in range(self.ngens):
                v = d * mat.rows[i][j]
                if i < len(self.torsion):
                    if v % self.torsion[i] != 0:
                        raise InvalidGroupError(
                            f"action does not preserve relations: {d}*g{j} maps outside at row {i}")
                elif v != 0:
                    raise InvalidGroupError(
                        f"action does not preserve relations: {d}*g{j} has free component at row {i}")

    # -- structure ---------------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.rank

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    def order(self):
        """Group order, or None when infinite."""
        if self.rank > 0:
            return None
        return prod(self.torsion) if self.torsion else 1

    @staticmethod
    def trivial() -> "AbGroupWithAction":
        return AbGroupWithAction()

    @staticmethod
    def free(rank: int, action=None) -> "AbGroupWithAction":
        return AbGroupWithAction((), rank, action)

    @staticmethod
    def cyclic(n: int, action=None) -> "AbGroupWithAction":
        if n == 0:
            return AbGroupWithAction((), 1, action)
        return AbGroupWithAction((n,), 0, action)

    @staticmethod
    def from_divisors(*divisors: int) -> "AbGroupWithAction":
        """Normal form of ``Z/d_1 + ... + Z/d_m`` (``0`` meaning a ``Z`` summand).

        >>> str(AbGroupWithAction.from_divisors(2, 3))
        'Z/6'
        >>> str(AbGroupWithAction.from_divisors(0, 4, 6))
        'Z/2 x Z/12 x Z'
        """
        ds = [int(d) for d in divisors]
        n = len(ds)
        rel_cols = IMat.from_rows(
            [[ds[i] if i == j else 0 for j in range(n)] for i in range(n)], n)
        group, _, _ = normalize_presentation(n, rel_cols)
        return group

    def action_matrix(self) -> IMat:
        if self.action is None:
            return IMat.identity(self.ngens)
        return IMat(self.action, self.ngens)

    @property
    def has_nontrivial_action(self) -> bool:
        return self.action is not None

    def forget_action(self) -> "AbGroupWithAction":
        return AbGroupWithAction(self.torsion, self.rank)

    # -- elements ----------------------------------------------------------

    def reduce(self, vec: Sequence[int]) -> tuple:
        """Canonical coordinates: torsion entries into [0, d_i)."""
        if len(vec) != self.ngens:
            raise ValueError(f"element length {len(vec)} != {self.ngens} generators")
        out = []
        for i, x in enumerate(vec):
            if i < len(self.torsion):
                out.append(int(x) % self.torsion[i])
            else:
                out.append(int(x))
        return tuple(out)

    def add(self, v: Sequence[int], w: Sequence[int]) -> tuple:
        return self.reduce([a + b for a, b in zip(v, w)])

    def neg(self, v: Sequence[int]) -> tuple:
        return self.reduce([-a for a in v])

    def scale(self, n: int, v: Sequence[int]) -> tuple:
        return self.reduce([n * a for a in v])

    def zero(self) -> tuple:
        return (0,) * self.ngens

    def is_zero_element(self, v: Sequence[int]) -> bool:
        return self.reduce(v) == self.zero()

    def act(self, v: Sequence[int]) -> tuple:
        return self.reduce(self.action_matrix().mul_vec(self.reduce(v)))

    def generator(self, i: int) -> tuple:
        return tuple(1 if j == i else 0 for j in range(self.ngens))

    def elements(self) -> Iterator[tuple]:
        """All elements as coordinate tuples; rejects infinite groups."""
        if self.rank > 0:
            raise InfiniteGroupError(
                f"cannot enumerate elements of a group with free rank {self.rank}")
        return itertools.product(*(range(d) for d in self.torsion))

    def relation_lattice(self) -> IMat:
        """Columns d_i * e_i spanning the relation lattice in Z^ngens."""
        n = self.ngens
        cols = [tuple(self.torsion[j] if i == j else 0 for i in range(n))
                for j in range(len(self.torsion))]
        rows = tuple(tuple(col[i] for col in cols) for i in range(n))
        return IMat(rows, len(cols))

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {"torsion": list(self.torsion), "rank": self.rank}
        if self.action is not None:
            out["action"] = [list(r) for r in self.action]
        return out

    @staticmethod
    def from_json(data: dict) -> "AbGroupWithAction":
        if not isinstance(data, dict):
            raise InvalidGroupError(f"group JSON must be an object, got {type(data).__name__}")
        torsion = tuple(data.get("torsion", ()))
        rank = int(data.get("rank", 0))
        action = data.get("action")
        if action is not None:
            action = tuple(tuple(int(x) for x in row) for row in action)
        return AbGroupWithAction(torsion, rank, action)

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        return " x ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by an integer matrix on the canonical generators."""

    source: AbGroupWithAction
    target: AbGroupWithAction
    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.matrix)
        nt, ns = self.target.ngens, self.source.ngens
        if len(rows) != nt or any(len(r) != ns for r in rows):
            raise HomValidationError(
                f"matrix must be {nt}x{ns} (target gens x source gens), "
                f"got {len(rows)}x{len(rows[0]) if rows else 0}")
        # Canonicalize: row i is only meaningful modulo the target order d_i.
        rows = tuple(
            tuple(x % self.target.torsion[i] for x in row)
            if i < len(self.target.torsion) else row
            for i, row in enumerate(rows))
        object.__setattr__(self, "matrix", rows)
        # Well-definedness: each source relation d_j * e_j must land in the
        # target relation lattice.
        for j, d in enumerate(self.source.torsion):
            for i in range(nt):
                v = d * rows[i][j]
                if i < len(self.target.torsion):
                    if v % self.target.torsion[i] != 0:
                        raise HomValidationError(
                            f"ill-defined: relation {d}*g{j} maps to {v} in coordinate {i}, "
                            f"not divisible by {self.target.torsion[i]}")
                elif v != 0:
                    raise HomValidationError(
                        f"ill-defined: relation {d}*g{j} has nonzero free coordinate {i}")

    def imat(self) -> IMat:
        return IMat(self.matrix, self.source.ngens)

    def __call__(self, vec: Sequence[int]) -> tuple:
        return self.target.reduce(self.imat().mul_vec(self.source.reduce(vec)))

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self after inner (``self . inner``)."""
        if inner.target != self.source:
            raise HomValidationError("homs are not composable: target/source mismatch")
        return GroupHom(inner.source, self.target, self.imat().mul(inner.imat()).rows)

    def is_equivariant(self) -> bool:
        """Whether the matrix commutes with the two actions modulo relations."""
        left = self.target.action_matrix().mul(self.imat())
        right = self.imat().mul(self.source.action_matrix())
        return all(self.target.reduce(left.col(j)) == self.target.reduce(right.col(j))
                   for j in range(self.source.ngens))

    def is_zero(self) -> bool:
        return all(self.target.is_zero_element(self.imat().col(j))
                   for j in range(self.source.ngens))

    @staticmethod
    def zero(source: AbGroupWithAction, target: AbGroupWithAction) -> "GroupHom":
        return GroupHom(source, target, IMat.zeros(target.ngens, source.ngens).rows)

    @staticmethod
    def identity(group: AbGroupWithAction) -> "GroupHom":
        return GroupHom(group, group, IMat.identity(group.ngens).rows)

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "matrix": [list(r) for r in self.matrix]}

    @staticmethod
    def from_json(data: dict) -> "GroupHom":
        return GroupHom(AbGroupWithAction.from_json(data["source"]),
                        AbGroupWithAction.from_json(data["target"]),
                        data["matrix"])


# -- presentation normalization ---------------------------------------------


def normalize_presentation(ngens: int, relation_cols: IMat):
    """Normal form of ``Z^ngens / (column lattice of relation_cols)``.

    Returns ``(group, to_new, from_new)`` where ``to_new`` (new gens x ngens)
    sends old coordinates to normal-form coordinates and ``from_new`` embeds
    normal-form generators back into old coordinates.  ``to_new @ from_new``
    is the identity exactly; ``from_new @ to_new`` is the identity modulo the
    relation lattice.
    """
    if relation_cols.nrows != ngens:
        raise ValueError("relation matrix has wrong number of rows")
    dec = smith_decompose(relation_cols)
    orders = []
    for i in range(ngens):
        d = dec.diag_entries[i] if i < len(dec.diag_entries) else 0
        orders.append(abs(d))
    keep = [i for i in range(ngens) if orders[i] != 1]
    torsion = tuple(orders[i] for i in keep if orders[i] >= 2)
    rank = sum(1 for i in keep if orders[i] == 0)
    group = AbGroupWithAction(torsion, rank)
    to_new = dec.left.submatrix_rows(keep)
    from_new = dec.left_inv.submatrix_cols(keep)
    return group, to_new, from_new


def _with_action(group: AbGroupWithAction, action_mat: IMat | None) -> AbGroupWithAction:
    if action_mat is None:
        return group
    return AbGroupWithAction(group.torsion, group.rank, action_mat.rows)


def kernel_lattice(mat: IMat, target_relations: IMat) -> IMat:
    """Basis of ``{x : mat @ x lies in the column lattice of target_relations}``."""
    block = mat.hstack(target_relations)
    dec = smith_decompose(block)
    free = [j for j in range(block.ncols)
            if j >= len(dec.diag_entries) or dec.diag_entries[j] == 0]
    null = dec.right.submatrix_cols(free)
    xpart = null.submatrix_rows(range(mat.ncols))
    return column_lattice_basis(xpart)


@dataclass(frozen=True)
class SubgroupResult:
    """A subgroup in normal form together with its inclusion homomorphism."""

    group: AbGroupWithAction
    inclusion: GroupHom

    @property
    def ambient(self) -> AbGroupWithAction:
        return self.inclusion.target

    def lattice(self) -> IMat:
        """Sublattice of Z^ambient corresponding to this subgroup."""
        return self.inclusion.imat().hstack(self.ambient.relation_lattice())

    def coordinates_of(self, vec: Sequence[int]):
        """Subgroup coordinates of an ambient element, or None if outside."""
        sol = solve_integer(self.lattice(), self.ambient.reduce(vec))
        if sol is None:
            return None
        return self.group.reduce(sol[: self.group.ngens])


@dataclass(frozen=True)
class QuotientResult:
    group: AbGroupWithAction
    projection: GroupHom

    @property
    def ambient(self) -> AbGroupWithAction:
        return self.projection.source


def _descended_action(ambient: AbGroupWithAction, to_new: IMat, from_new: IMat,
                      group: AbGroupWithAction) -> IMat | None:
    if ambient.action is None:
        return None
    cand = to_new.mul(ambient.action_matrix()).mul(from_new)
    try:
        _with_action(group, cand)
    except InvalidGroupError:
        return None
    return cand


def subgroup_from_columns(ambient: AbGroupWithAction, gen_cols: IMat,
                          restrict_action: bool = True) -> SubgroupResult:
    """Subgroup of ``ambient`` generated by the given coordinate columns.

    The action restricts to the subgroup when the subgroup lattice is stable
    under it; otherwise the result carries the identity action.
    """
    rel = ambient.relation_lattice()
    basis = column_lattice_basis(gen_cols.hstack(rel))
    sub_rel = kernel_lattice(basis, rel)
    group, to_new, from_new = normalize_presentation(basis.ncols, sub_rel)
    incl_mat = basis.mul(from_new)
    action = None
    if restrict_action and ambient.action is not None:
        # Solve incl * A_sub = A_ambient * incl modulo relations, columnwise.
        lat = incl_mat.hstack(rel)
        target = ambient.action_matrix().mul(incl_mat)
        sol = solve_integer_many(lat, target)
        if sol is not None:
            action = sol.submatrix_rows(range(group.ngens))
            try:
                group_with = _with_action(group, action)
            except InvalidGroupError:
                group_with = group
            else:
                group = group_with
    incl = GroupHom(group, ambient, incl_mat.rows)
    return SubgroupResult(group, incl)


def kernel(h: GroupHom) -> SubgroupResult:
    """Kernel subgroup in normal form, with its inclusion into the source."""
    lat = kernel_lattice(h.imat(), h.target.relation_lattice())
    restrict = h.is_equivariant() if h.source.action is not None else True
    return subgroup_from_columns(h.source, lat, restrict_action=restrict)


def image(h: GroupHom) -> SubgroupResult:
    """Image subgroup of the target, in normal form, with inclusion."""
    restrict = h.is_equivariant() if h.target.action is not None else True
    return subgroup_from_columns(h.target, h.imat(), restrict_action=restrict)


def cokernel(h: GroupHom) -> QuotientResult:
    """Target modulo image, in normal form, with the quotient projection.

    The action descends exactly when ``h`` is equivariant.
    """
    rel = h.target.relation_lattice()
    cols = h.imat().hstack(rel)
    group, to_new, from_new = normalize_presentation(h.target.ngens, cols)
    if h.target.action is not None and h.is_equivariant():
        action = _descended_action(h.target, to_new, from_new, group)
        if action is not None:
            group = _with_action(group, action)
    proj = GroupHom(h.target, group, to_new.rows)
    return QuotientResult(group, proj)


def quotient_by_subgroup(ambient: AbGroupWithAction, gen_cols: IMat) -> QuotientResult:
    """Quotient of ``ambient`` by the subgroup generated by the given columns."""
    rel = ambient.relation_lattice()
    group, to_new, from_new = normalize_presentation(ambient.ngens, gen_cols.hstack(rel))
    action = _descended_action(ambient, to_new, from_new, group)
    if action is not None:
        group = _with_action(group, action)
    return QuotientResult(group, GroupHom(ambient, group, to_new.rows))


def factor_through(h: GroupHom, sub: SubgroupResult) -> GroupHom:
    """Rewrite ``h`` as a map into a subgroup of its target containing its image."""
    if sub.ambient != h.target:
        raise HomValidationError("subgroup does not live in the hom's target")
    lat = sub.lattice()
    sol = solve_integer_many(lat, h.imat())
    if sol is None:
        raise HomValidationError("image does not lie in the subgroup")
    return GroupHom(h.source, sub.group, sol.submatrix_rows(range(sub.group.ngens)).rows)


def fixed_and_twisted(m: AbGroupWithAction):
    """Fixed points ``{x : ax = x}`` and twisted fixed points ``{x : ax = -x}``.

    Both come back as subgroups with inclusion homs.
    """
    a = m.action_matrix()
    ident = IMat.identity(m.ngens)
    minus = IMat.from_rows([[a.rows[i][j] - ident.rows[i][j] for j in range(m.ngens)]
                            for i in range(m.ngens)], m.ngens)
    plus = IMat.from_rows([[a.rows[i][j] + ident.rows[i][j] for j in range(m.ngens)]
                           for i in range(m.ngens)], m.ngens)
    rel = m.relation_lattice()
    fixed = subgroup_from_columns(m, kernel_lattice(minus, rel))
    twisted = subgroup_from_columns(m, kernel_lattice(plus, rel))
    return fixed, twisted


def _lattice_quotient_group(num_basis: IMat, den_cols: IMat) -> AbGroupWithAction:
    """Group ``lattice(num_basis) / lattice(den_cols)`` in normal form."""
    expressed = solve_integer_many(num_basis, den_cols)
    if expressed is None:
        raise InvalidGroupError("denominator lattice is not contained in the numerator")
    group, _, _ = normalize_presentation(num_basis.ncols, expressed)
    return group


def tate_cohomology(m: AbGroupWithAction):
    """Tate cohomology of the order-2 action: ``(H^0, H^1)``.

    ``H^0`` is fixed points modulo norms ``x + ax``; ``H^1`` is the norm
    kernel modulo twisted coboundaries ``x - ax``.
    """
    a = m.action_matrix()
    n = m.ngens
    ident = IMat.identity(n)
    minus = IMat.from_rows([[a.rows[i][j] - ident.rows[i][j] for j in range(n)]
                            for i in range(n)], n)
    plus = IMat.from_rows([[a.rows[i][j] + ident.rows[i][j] for j in range(n)]
                           for i in range(n)], n)
    rel = m.relation_lattice()
    fixed = kernel_lattice(minus, rel)
    h0 = _lattice_quotient_group(fixed, plus.hstack(rel))
    norm_ker = kernel_lattice(plus, rel)
    h1 = _lattice_quotient_group(norm_ker, minus.hstack(rel))
    return h0, h1


@dataclass(frozen=True)
class JunctionReport:
    """Exactness verdict at one interior junction of a chain of homs."""

    index: int
    group: AbGroupWithAction
    is_exact: bool
    reason: str
    witness: tuple | None = None

    def __str__(self) -> str:
        mark = "exact" if self.is_exact else f"FAIL ({self.reason}, witness={self.witness})"
        return f"junction {self.index} at {self.group}: {mark}"


def check_exact(chain: Sequence[GroupHom]) -> list:
    """Exactness report at every interior junction of a composable chain.

    At each junction the image of the incoming hom is compared with the kernel
    of the outgoing one as subgroups (double inclusion on lattices); a witness
    element is produced on failure.
    """
    for h1, h2 in zip(chain, chain[1:]):
        if h1.target != h2.source:
            raise HomValidationError(
                f"chain not composable at {h1.target} vs {h2.source}")
    reports = []
    for idx, (h1, h2) in enumerate(zip(chain, chain[1:])):
        middle = h1.target
        rel = middle.relation_lattice()
        im_lat = column_lattice_basis(h1.imat().hstack(rel))
        ker_lat = kernel_lattice(h2.imat(), h2.target.relation_lattice())
        # ker_lat contains the relation lattice already (relations map to zero).
        im_in_ker = solve_integer_many(ker_lat, im_lat) is not None
        if not im_in_ker:
            witness = next(
                middle.reduce(im_lat.col(j)) for j in range(im_lat.ncols)
                if solve_integer(ker_lat, im_lat.col(j)) is None)
            reports.append(JunctionReport(idx, middle, False, "image not contained in kernel",
                                          witness))
            continue
        ker_in_im = solve_integer_many(im_lat, ker_lat) is not None
        if not ker_in_im:
            witness = next(
                middle.reduce(ker_lat.col(j)) for j in range(ker_lat.ncols)
                if solve_integer(im_lat, ker_lat.col(j)) is None)
            reports.append(JunctionReport(idx, middle, False, "kernel exceeds image", witness))
            continue
        reports.append(JunctionReport(idx, middle, True, "exact"))
    return reports


@dataclass(frozen=True)
class DirectSumResult:
    group: AbGroupWithAction
    inject_left: GroupHom
    inject_right: GroupHom
    project_left: GroupHom
    project_right: GroupHom


def direct_sum(left: AbGroupWithAction, right: AbGroupWithAction) -> DirectSumResult:
    """Direct sum in normal form with the four canonical homs.

    The action on the sum is the block action; it descends to the normal form.
    """
    n1, n2 = left.ngens, right.ngens
    n = n1 + n2
    rel_rows = []
    r1, r2 = left.relation_lattice(), right.relation_lattice()
    for i in range(n):
        row = []
        for j in range(r1.ncols):
            row.append(r1.rows[i][j] if i < n1 else 0)
        for j in range(r2.ncols):
            row.append(r2.rows[i - n1][j] if i >= n1 else 0)
        rel_rows.append(tuple(row))
    rel = IMat(tuple(rel_rows), r1.ncols + r2.ncols)
    group, to_new, from_new = normalize_presentation(n, rel)
    if left.action is not None or right.action is not None:
        a1, a2 = left.action_matrix(), right.action_matrix()
        block = []
        for i in range(n):
            row = []
            for j in range(n):
                if i < n1 and j < n1:
                    row.append(a1.rows[i][j])
                elif i >= n1 and j >= n1:
                    row.append(a2.rows[i - n1][j - n1])
                else:
                    row.append(0)
            block.append(tuple(row))
        action = to_new.mul(IMat(tuple(block), n)).mul(from_new)
        group = _with_action(group, action)
    i1 = GroupHom(left, group, to_new.submatrix_cols(range(n1)).rows)
    i2 = GroupHom(right, group, to_new.submatrix_cols(range(n1, n)).rows)
    p1 = GroupHom(group, left, from_new.submatrix_rows(range(n1)).rows)
    p2 = GroupHom(group, right, from_new.submatrix_rows(range(n1, n)).rows)
    return DirectSumResult(group, i1, i2, p1, p2)


# -- structure extraction from raw elements ----------------------------------


def _factorize(n: int) -> dict:
    out: dict = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def structure_from_elements(elements: Iterable, op: Callable, identity):
    """Basis of a finite abelian group given by raw elements and an operation.

    Returns ``[(generator, order), ...]`` with orders descending and each
    dividing the previous, found by picking a maximal-order element and
    recursing on the quotient by it.  Elements must be hashable and totally
    ordered (ties in order are broken toward the least element).
    """
    elems = sorted(set(elements))
    n = len(elems)
    if n == 1:
        return []
    primes = list(_factorize(n))

    def power(x, k):
        result = identity
        base = x
        while k > 0:
            if k & 1:
                result = op(result, base)
            base = op(base, base)
            k >>= 1
        return result

    def elem_order(x):
        o = n
        for p in primes:
            while o % p == 0 and power(x, o // p) == identity:
                o //= p
        return o

    orders = {x: elem_order(x) for x in elems}
    exponent = max(orders.values())
    gen = min(x for x in elems if orders[x] == exponent)

    # Cosets of <gen>, with the least member as representative.
    rep = {}
    for x in elems:
        if x in rep:
            continue
        orbit = [x]
        cur = op(x, gen)
        while cur != x:
            orbit.append(cur)
            cur = op(cur, gen)
        least = min(orbit)
        for y in orbit:
            rep[y] = least
    quotient_elems = sorted(set(rep.values()))
    sub_basis = structure_from_elements(quotient_elems,
                                        lambda a, b: rep[op(a, b)],
                                        rep[identity])
    # Lift each quotient generator to an element of exact order: if r^m lands
    # on gen^t then m divides t and r * gen^(-t/m) has honest order m.
    gen_log = {}
    cur = identity
    for i in range(exponent):
        gen_log[cur] = i
        cur = op(cur, gen)
    out = [(gen, exponent)]
    for r, m in sub_basis:
        t = gen_log[power(r, m)]
        if t % m != 0:
            raise AssertionError("lifting lemma violated; elements do not form a group")
        lifted = op(r, power(gen, (-(t // m)) % exponent))
        out.append((lifted, m))
    return out


def group_from_structure(basis) -> AbGroupWithAction:
    """Normal-form group for a ``structure_from_elements`` result."""
    return AbGroupWithAction(tuple(order for _, order in reversed(basis)))


def element_log_table(basis, op, identity) -> dict:
    """Discrete-log table element -> exponent tuple for a structure basis.

    Exponents follow the reversed (ascending invariant factor) order used by
    ``group_from_structure``.
    """
    gens = [g for g, _ in reversed(basis)]
    orders = [o for _, o in reversed(basis)]
    table = {identity: (0,) * len(gens)}
    for i, (g, o) in enumerate(zip(gens, orders)):
        current = dict(table)
        acc = identity
        vec_acc = (0,) * len(gens)
        for e in range(1, o):
            acc = op(acc, g)
            vec_acc = tuple(v + (1 if j == i else 0) for j, v in enumerate(vec_acc))
            for elem, vec in current.items():
                table[op(elem, acc)] = tuple(a + b for a, b in zip(vec, vec_acc))
    return table
