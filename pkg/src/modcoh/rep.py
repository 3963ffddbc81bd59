"""G-modules over a finite matrix group and the standard constructions.

A module stores one action matrix per enumerated group element.  Tensor
products act by Kronecker products; Hom(M, N) is realized as
tensor(N, dual(M)) with matrices flattened row-major, so the action on an
(N.dim x M.dim) matrix F is F -> N(s) @ F @ M(s)^-1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product as iter_product
from typing import Optional, Sequence

from .errors import GroupMismatch, ModcohError
from .grp import MatrixGroup
from .linalg import Matrix, direct_sum, is_invertible, kernel_basis, kron, vstack
from .poly import Monomial, Polynomial, monomial_basis, substitute_linear

INTERTWINER_EXHAUST_CAP = 4096
INTERTWINER_SAMPLES = 1000


class GModule:
    """Finite-dimensional module: dimension plus one matrix per element id."""

    __slots__ = ("group", "dim", "label", "_act")

    def __init__(self, group: MatrixGroup, dim: int, action: Sequence[Matrix], label: str):
        if len(action) != group.order:
            raise ModcohError("need one action matrix per group element")
        self.group = group
        self.dim = dim
        self._act = list(action)
        self.label = label

    def action(self, i: int) -> Matrix:
        return self._act[i]

    def actions(self) -> list[Matrix]:
        return list(self._act)

    def _check(self, other: "GModule") -> None:
        if other.group is not self.group:
            raise GroupMismatch(f"{self.label} and {other.label} live over different groups")

    def __repr__(self) -> str:
        return f"GModule({self.label}, dim={self.dim})"


def action_is_homomorphism(mod: GModule) -> bool:
    """Exhaustive check action(i)@action(j) = action(i*j); identity at 0."""
    g = mod.group
    if mod.action(0) != Matrix.identity(mod.group.ctx, mod.dim):
        return False
    for i in range(g.order):
        for j in range(g.order):
            if mod.action(i) @ mod.action(j) != mod.action(g.mul(i, j)):
                return False
    return True


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def trivial_module(group: MatrixGroup, dim: int = 1) -> GModule:
    ident = Matrix.identity(group.ctx, dim)
    return GModule(group, dim, [ident] * group.order, f"trivial({dim})")


def natural_module(group: MatrixGroup) -> GModule:
    return GModule(group, group.n, list(group.elements), "natural")


def sym_power(group: MatrixGroup, d: int) -> tuple[GModule, list[Monomial]]:
    """Action on homogeneous degree-d polynomials, with its ordered basis."""
    ctx, n = group.ctx, group.n
    basis = monomial_basis(n, d, ctx.p)
    pos = {m: i for i, m in enumerate(basis)}
    N = len(basis)
    basis_polys = [
        Polynomial.from_monomial(ctx, m, ctx.one()) for m in basis
    ]
    mats = []
    for sigma in group.elements:
        data = [0] * (N * N)
        for j, f in enumerate(basis_polys):
            image = substitute_linear(f, sigma)
            for mono, coeff in image.terms.items():
                data[pos[mono] * N + j] = coeff
        mats.append(Matrix(ctx, N, N, data))
    return GModule(group, N, mats, f"sym({d})"), basis


def frobenius_twist(group: MatrixGroup) -> GModule:
    """Entrywise p-th power of the natural action."""
    ctx = group.ctx
    frob = ctx.frob_i
    mats = []
    for m in group.elements:
        data = [frob(m.raw(i, j)) for i in range(m.rows) for j in range(m.cols)]
        mats.append(Matrix(ctx, m.rows, m.cols, data))
    return GModule(group, group.n, mats, "twist")


def dual(mod: GModule) -> GModule:
    """Action phi -> phi o sigma^-1, i.e. transpose of the inverse matrix."""
    g = mod.group
    mats = [mod.action(g.inv[i]).transpose() for i in range(g.order)]
    return GModule(g, mod.dim, mats, f"dual({mod.label})")


def tensor(m: GModule, n: GModule) -> GModule:
    m._check(n)
    mats = [kron(m.action(i), n.action(i)) for i in range(m.group.order)]
    return GModule(m.group, m.dim * n.dim, mats, f"tensor({m.label},{n.label})")


def hom(m: GModule, n: GModule) -> GModule:
    """Hom(m, n) with maps flattened row-major; equals tensor(n, dual(m))."""
    t = tensor(n, dual(m))
    return GModule(m.group, t.dim, t.actions(), f"hom({m.label},{n.label})")


def direct_sum_mod(mods: Sequence[GModule]) -> GModule:
    if not mods:
        raise ModcohError("direct sum of no modules")
    first = mods[0]
    for other in mods[1:]:
        first._check(other)
    mats = []
    for i in range(first.group.order):
        acc = mods[0].action(i)
        for other in mods[1:]:
            acc = direct_sum(acc, other.action(i))
        mats.append(acc)
    label = "sum(" + ",".join(m.label for m in mods) + ")"
    return GModule(first.group, sum(m.dim for m in mods), mats, label)


def coordinate_submodule(mod: GModule, coords: Sequence[int]) -> GModule:
    """Restrict to the span of the given basis positions; must be invariant."""
    idx = list(coords)
    others = [i for i in range(mod.dim) if i not in set(idx)]
    for e, mat in enumerate(mod.actions()):
        for j in idx:
            for i in others:
                if mat.raw(i, j):
                    raise ModcohError(
                        f"coordinates {idx} do not span a submodule (element {e})"
                    )
    mats = []
    for mat in mod.actions():
        rows = [[mat[i, j] for j in idx] for i in idx]
        mats.append(Matrix.from_rows(mod.group.ctx, rows))
    label = f"restrict({mod.label},[" + ",".join(map(str, idx)) + "])"
    return GModule(mod.group, len(idx), mats, label)


def fixed_space(mod: GModule) -> list[Matrix]:
    """Deterministic basis of the invariants, from generator kernels."""
    ctx = mod.group.ctx
    gen_ids = mod.group.generator_ids
    if not gen_ids:
        return [Matrix.basis_column(ctx, mod.dim, i) for i in range(mod.dim)]
    ident = Matrix.identity(ctx, mod.dim)
    stacked = vstack([mod.action(i) - ident for i in gen_ids])
    return kernel_basis(stacked)


# ---------------------------------------------------------------------------
# intertwiners
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntertwinerResult:
    """Solution space of N(s) T = T M(s) plus an invertible pick, if any.

    `space_dim` is dim Hom_G(M, N); `matrix` is None either because the
    space is zero or because the (exhaustive or sampled) search found no
    invertible element; `searched` says which strategy ran.
    """

    space_dim: int
    basis: tuple[Matrix, ...]
    matrix: Optional[Matrix]
    searched: str  # "none", "exhaustive", or "sampled"


def find_intertwiner(m: GModule, n: GModule, seed: int = 0) -> IntertwinerResult:
    """Equivariant maps T: m -> n; searches the space for an invertible one."""
    m._check(n)
    ctx = m.group.ctx
    gen_ids = m.group.generator_ids
    rows = []
    ident_n = Matrix.identity(ctx, n.dim)
    ident_m = Matrix.identity(ctx, m.dim)
    for gid in gen_ids:
        rows.append(kron(n.action(gid), ident_m) - kron(ident_n, m.action(gid).transpose()))
    if rows:
        space = kernel_basis(vstack(rows))
    else:
        space = [
            Matrix.basis_column(ctx, n.dim * m.dim, i) for i in range(n.dim * m.dim)
        ]
    basis = tuple(vec.reshape(n.dim, m.dim) for vec in space)
    s = len(basis)
    if s == 0 or m.dim != n.dim:
        return IntertwinerResult(s, basis, None, "none")
    if ctx.q**s <= INTERTWINER_EXHAUST_CAP:
        for coeffs in iter_product(range(ctx.q), repeat=s):
            if not any(coeffs):
                continue
            cand = _combine(basis, coeffs)
            if is_invertible(cand):
                return IntertwinerResult(s, basis, cand, "exhaustive")
        return IntertwinerResult(s, basis, None, "exhaustive")
    rng = random.Random(seed)
    for _ in range(INTERTWINER_SAMPLES):
        coeffs = tuple(rng.randrange(ctx.q) for _ in range(s))
        if not any(coeffs):
            continue
        cand = _combine(basis, coeffs)
        if is_invertible(cand):
            return IntertwinerResult(s, basis, cand, "sampled")
    return IntertwinerResult(s, basis, None, "sampled")


def _combine(basis: Sequence[Matrix], coeffs: Sequence[int]) -> Matrix:
    ctx = basis[0].ctx
    acc = Matrix.zeros(ctx, basis[0].rows, basis[0].cols)
    for b, c in zip(basis, coeffs):
        if c:
            acc = acc + b.scale(ctx.el(c))
    return acc


def module_descriptor(mod: GModule) -> dict:
    return {"group_digest": mod.group.digest(), "recipe": mod.label, "dim": mod.dim}
