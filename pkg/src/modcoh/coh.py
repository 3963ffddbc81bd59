"""First cohomology of a finite matrix group by exact linear algebra.

Cocycles are maps g: G -> M with g_{st} = s(g_t) + g_s, stored as one
column vector per element id (identity forced to zero).  Z1 is cut out by
the pair equations, B1 is the image of v -> (s-1)v, and split tests solve
(s-1)u = g_s over the generators, returning either a witness u or an
inconsistency row that re-verifies without the solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import (
    BadProjection,
    GroupMismatch,
    ModcohError,
    NotACocycle,
    NotEquivariant,
    NotFixed,
)
from .gf import FieldElement
from .linalg import Matrix, hstack, kernel_basis, kron, rref, solve, vstack
from .rep import GModule, tensor

PAIRWISE_ORDER_LIMIT = 64


class Cocycle:
    """A 1-cocycle on a module; values indexed by group element id."""

    __slots__ = ("module", "values")

    def __init__(self, module: GModule, values: Sequence[Matrix]):
        if len(values) != module.group.order:
            raise ModcohError("need one value per group element")
        if not values[0].is_zero:
            raise NotACocycle("value at the identity must be zero")
        for v in values:
            if v.rows != module.dim or v.cols != 1:
                raise ModcohError("cocycle values must be dim x 1 columns")
        self.module = module
        self.values = list(values)

    @classmethod
    def zero(cls, module: GModule) -> "Cocycle":
        z = Matrix.zeros(module.group.ctx, module.dim, 1)
        return cls(module, [z] * module.group.order)

    @classmethod
    def coboundary(cls, module: GModule, v: Matrix) -> "Cocycle":
        """The cocycle s -> (s-1)v."""
        ident = Matrix.identity(module.group.ctx, module.dim)
        return cls(module, [(module.action(i) - ident) @ v for i in range(module.group.order)])

    def validate(self) -> None:
        """Exhaustive pair-identity check; raises NotACocycle on failure."""
        g = self.module.group
        for i in range(g.order):
            for j in range(g.order):
                lhs = self.values[g.mul(i, j)]
                rhs = self.module.action(i) @ self.values[j] + self.values[i]
                if lhs != rhs:
                    raise NotACocycle(f"pair identity fails at elements ({i}, {j})")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except NotACocycle:
            return False
        return True

    def vectorize(self) -> Matrix:
        """Stack the non-identity values into one long column."""
        return vstack([self.values[i] for i in range(1, self.module.group.order)])

    @classmethod
    def from_vector(cls, module: GModule, vec: Matrix) -> "Cocycle":
        d, m = module.dim, module.group.order
        if vec.rows != d * (m - 1) or vec.cols != 1:
            raise ModcohError("vector length does not match the module and group")
        vals = [Matrix.zeros(module.group.ctx, d, 1)]
        for i in range(m - 1):
            vals.append(vec.submatrix(i * d, (i + 1) * d, 0, 1))
        return cls(module, vals)

    def __add__(self, other: "Cocycle") -> "Cocycle":
        if other.module is not self.module:
            raise GroupMismatch("cocycles on different modules")
        return Cocycle(self.module, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "Cocycle") -> "Cocycle":
        if other.module is not self.module:
            raise GroupMismatch("cocycles on different modules")
        return Cocycle(self.module, [a - b for a, b in zip(self.values, other.values)])

    def scale(self, c: FieldElement) -> "Cocycle":
        return Cocycle(self.module, [v.scale(c) for v in self.values])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cocycle)
            and other.module is self.module
            and other.values == self.values
        )

    def __hash__(self) -> int:
        return hash(tuple(self.values))

    def __repr__(self) -> str:
        return f"Cocycle(on {self.module.label}, |G|={self.module.group.order})"


# ---------------------------------------------------------------------------
# cocycle and coboundary spaces
# ---------------------------------------------------------------------------


def _z1_system(module: GModule) -> Matrix:
    """Linear system cutting out Z1 in the stacked non-identity coordinates.

    All ordered non-identity pairs for small groups; generator x element
    spanning rows above PAIRWISE_ORDER_LIMIT (exact by induction on word
    length, revalidated after the kernel computation).
    """
    g = module.group
    ctx = g.ctx
    m, d = g.order, module.dim
    ncols = (m - 1) * d
    if m <= PAIRWISE_ORDER_LIMIT:
        pairs = [(i, j) for i in range(1, m) for j in range(1, m)]
    else:
        pairs = [(i, j) for i in g.generator_ids for j in range(1, m)]
    rows: list[list[int]] = []
    neg, sub = ctx.neg_i, ctx.sub_i
    for i, j in pairs:
        k = g.mul(i, j)
        block = [[0] * ncols for _ in range(d)]
        if k != 0:
            off = (k - 1) * d
            for r in range(d):
                block[r][off + r] = 1
        act = module.action(i)
        off = (j - 1) * d
        for r in range(d):
            for c in range(d):
                v = act.raw(r, c)
                if v:
                    block[r][off + c] = sub(block[r][off + c], v)
        off = (i - 1) * d
        for r in range(d):
            block[r][off + r] = sub(block[r][off + r], 1)
        rows.extend(block)
    data = [x for row in rows for x in row]
    return Matrix(ctx, len(rows), ncols, data)


def z1_space(module: GModule) -> list[Cocycle]:
    """Deterministic basis of Z1(G, M)."""
    if module.group.order == 1:
        return []
    basis = [Cocycle.from_vector(module, v) for v in kernel_basis(_z1_system(module))]
    if module.group.order > PAIRWISE_ORDER_LIMIT:
        for c in basis:
            c.validate()
    return basis


def b1_space(module: GModule) -> list[Cocycle]:
    """Deterministic basis of B1(G, M), the coboundaries."""
    g = module.group
    if g.order == 1:
        return []
    ident = Matrix.identity(g.ctx, module.dim)
    stacked = vstack([module.action(i) - ident for i in range(1, g.order)])
    reduced, _, r = rref(stacked.transpose())
    return [
        Cocycle.from_vector(module, reduced.submatrix(i, i + 1, 0, reduced.cols).transpose())
        for i in range(r)
    ]


def h1_dim(module: GModule) -> int:
    return len(z1_space(module)) - len(b1_space(module))


def h1_class(g: Cocycle) -> list[FieldElement]:
    """Coordinates of the class of g in a fixed complement of B1 inside Z1.

    Empty coordinates mean H1 = 0; the class is zero iff all coordinates
    are zero.  Raises NotACocycle for invalid input.
    """
    g.validate()
    module = g.module
    if module.group.order == 1:
        return []
    zb = z1_space(module)
    bb = b1_space(module)
    complement = _complement_basis(bb, zb)
    cols = [c.vectorize() for c in bb + complement]
    target = g.vectorize()
    if not cols:
        if not target.is_zero:
            raise NotACocycle("cocycle outside Z1")
        return []
    stacked = cols[0]
    for c in cols[1:]:
        stacked = hstack(stacked, c)
    res = solve(stacked, target)
    if not res.consistent:
        raise NotACocycle("cocycle outside Z1")
    return [res.solution[len(bb) + i, 0] for i in range(len(complement))]


def _complement_basis(bb: list[Cocycle], zb: list[Cocycle]) -> list[Cocycle]:
    """Greedy rref-based complement of span(bb) inside span(zb)."""
    picked: list[Cocycle] = []
    rows = [b.vectorize().transpose() for b in bb]
    current_rank = _rank_of_rows(rows)
    for z in zb:
        cand = rows + [z.vectorize().transpose()]
        r = _rank_of_rows(cand)
        if r > current_rank:
            picked.append(z)
            rows = cand
            current_rank = r
    return picked


def _rank_of_rows(rows: list[Matrix]) -> int:
    if not rows:
        return 0
    return rref(vstack(rows))[2]


# ---------------------------------------------------------------------------
# extensions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionClass:
    """A short exact sequence 0 -> base -> total -> K -> 0 in block form."""

    base: GModule
    cocycle: Cocycle
    total: GModule


def extension_from_cocycle(g: Cocycle) -> ExtensionClass:
    """Total module with action [[A_s, g_s], [0, 1]]."""
    g.validate()
    base = g.module
    ctx = base.group.ctx
    d = base.dim
    mats = []
    for i in range(base.group.order):
        act = base.action(i)
        val = g.values[i]
        data = []
        for r in range(d):
            data.extend(act.row_list(r))
            data.append(val.raw(r, 0))
        data.extend([0] * d + [1])
        mats.append(Matrix(ctx, d + 1, d + 1, data))
    total = GModule(base.group, d + 1, mats, f"ext({base.label})")
    return ExtensionClass(base, g, total)


def cocycle_from_extension(
    total: GModule, pi: Matrix, v0: Matrix
) -> tuple[Cocycle, GModule, list[Matrix]]:
    """Read the class of an extension off a preimage of 1.

    `pi` is a G-invariant surjection (1 x dim row) onto the trivial module,
    `v0` a column with pi @ v0 = 1.  Returns the cocycle s -> (s-1)v0 in
    the coordinates of a deterministic kernel basis, together with the
    kernel module and that basis.
    """
    ctx = total.group.ctx
    if pi.rows != 1 or pi.cols != total.dim:
        raise BadProjection(f"projection must be 1x{total.dim}")
    if pi.is_zero:
        raise BadProjection("projection must be surjective (nonzero)")
    for i in range(total.group.order):
        if pi @ total.action(i) != pi:
            raise BadProjection(f"projection not invariant at element {i}")
    if v0.rows != total.dim or v0.cols != 1 or (pi @ v0).raw(0, 0) != 1:
        raise BadProjection("v0 must be a preimage of 1")
    kb = kernel_basis(pi)
    kb_mat = kb[0]
    for col in kb[1:]:
        kb_mat = hstack(kb_mat, col)
    acts = []
    vals = []
    ident = Matrix.identity(ctx, total.dim)
    for i in range(total.group.order):
        act = total.action(i)
        res = solve(kb_mat, act @ kb_mat)
        if not res.consistent:
            raise BadProjection("kernel of the projection is not invariant")
        acts.append(res.solution)
        val = solve(kb_mat, (act - ident) @ v0)
        if not val.consistent:
            raise BadProjection("(s-1)v0 leaves the kernel of the projection")
        vals.append(val.solution)
    kernel_module = GModule(
        total.group, total.dim - 1, acts, f"ker(pi|{total.label})"
    )
    return Cocycle(kernel_module, vals), kernel_module, kb


# ---------------------------------------------------------------------------
# split testing with certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NonSplitCertificate:
    """Inconsistency witness for the generator system (s-1)u = g_s.

    `row` is y with y @ system = 0 and y @ rhs != 0; `verify` re-checks
    both equations by plain matrix products.
    """

    system: Matrix
    rhs: Matrix
    row: Matrix
    generator_ids: tuple[int, ...]
    module_label: str

    def verify(self) -> bool:
        return (self.row @ self.system).is_zero and not (self.row @ self.rhs).is_zero


@dataclass(frozen=True)
class SplitResult:
    split: bool
    witness: Optional[Matrix]
    certificate: Optional[NonSplitCertificate]
    system: Matrix
    rhs: Matrix
    generator_ids: tuple[int, ...]
    checked_elements: int = 0  # per-element verifications behind a Split verdict


def split_system(g: Cocycle) -> tuple[Matrix, Matrix, tuple[int, ...]]:
    """Generator-indexed system (s-1)u = g_s, one block of rows per generator."""
    module = g.module
    ctx = module.group.ctx
    gen_ids = tuple(module.group.generator_ids)
    ident = Matrix.identity(ctx, module.dim)
    if not gen_ids:
        return Matrix.zeros(ctx, 0, module.dim), Matrix.zeros(ctx, 0, 1), gen_ids
    system = vstack([module.action(i) - ident for i in gen_ids])
    rhs = vstack([g.values[i] for i in gen_ids])
    return system, rhs, gen_ids


def is_split(e: Union[Cocycle, ExtensionClass]) -> SplitResult:
    """Decide splitness over the generators; certify either way.

    Split: returns u with (s-1)u = g_s, verified over every element.
    NonSplit: returns the inconsistency row of the generator system.
    """
    g = e.cocycle if isinstance(e, ExtensionClass) else e
    module = g.module
    system, rhs, gen_ids = split_system(g)
    if system.rows == 0:
        return SplitResult(
            True,
            Matrix.zeros(module.group.ctx, module.dim, 1),
            None,
            system,
            rhs,
            gen_ids,
            module.group.order,
        )
    res = solve(system, rhs)
    if res.consistent:
        u = res.solution
        ident = Matrix.identity(module.group.ctx, module.dim)
        for i in range(module.group.order):
            if (module.action(i) - ident) @ u != g.values[i]:
                raise ModcohError(
                    "internal error: generator witness fails on the full group"
                )
        return SplitResult(True, u, None, system, rhs, gen_ids, module.group.order)
    cert = NonSplitCertificate(system, rhs, res.certificate, gen_ids, module.label)
    if not cert.verify():
        raise ModcohError("internal error: inconsistency certificate does not re-verify")
    return SplitResult(False, None, cert, system, rhs, gen_ids)


# ---------------------------------------------------------------------------
# pushforwards
# ---------------------------------------------------------------------------


def push_class(g: Cocycle, phi: Matrix, target: GModule) -> Cocycle:
    """Image cocycle s -> phi @ g_s along an equivariant map phi: M -> N."""
    if target.group is not g.module.group:
        raise GroupMismatch("target module over a different group")
    if phi.rows != target.dim or phi.cols != g.module.dim:
        raise ModcohError(f"map must be {target.dim}x{g.module.dim}")
    for i in g.module.group.generator_ids:
        if target.action(i) @ phi != phi @ g.module.action(i):
            raise NotEquivariant(f"map does not intertwine at generator id {i}")
    return Cocycle(target, [phi @ v for v in g.values])


def tensor_with_invariant(w_module: GModule, w: Matrix, g: Cocycle) -> Cocycle:
    """The cocycle s -> w (x) g_s on tensor(w_module, g.module).

    w = 0 is allowed and gives the zero cocycle; callers that need a
    nonzero invariant must reject it themselves.
    """
    if w_module.group is not g.module.group:
        raise GroupMismatch("invariant vector lives over a different group")
    if w.rows != w_module.dim or w.cols != 1:
        raise ModcohError(f"w must be a {w_module.dim}-dimensional column")
    for i in w_module.group.generator_ids:
        if w_module.action(i) @ w != w:
            raise NotFixed(f"w is not fixed by generator id {i}")
    t = tensor(w_module, g.module)
    return Cocycle(t, [kron(w, v) for v in g.values])
