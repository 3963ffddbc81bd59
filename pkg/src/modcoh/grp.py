"""Finite matrix groups enumerated from generators.

Closure is breadth-first from the identity with generators applied in the
given order, so element ids are reproducible and can be cited by
certificates.  The named families used by the pipeline live here too.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    BadCharacteristic,
    MixedContexts,
    ModcohError,
    NotAdditivelyClosed,
    OrderCapExceeded,
    ShapeMismatch,
    SingularGenerator,
)
from .gf import FieldCtx, FieldElement, field_to_json
from .linalg import Matrix, inverse, is_invertible, matrix_to_json

DEFAULT_ORDER_CAP = 10_000


class MatrixGroup:
    """Finite subgroup of GL_n over a fixed field, with enumerated elements."""

    __slots__ = ("ctx", "n", "generators", "generator_ids", "elements", "index", "inv", "_mul")

    def __init__(self, ctx: FieldCtx, n: int, generators: list[Matrix], elements: list[Matrix]):
        self.ctx = ctx
        self.n = n
        self.generators = generators
        self.elements = elements
        self.index = {m: i for i, m in enumerate(elements)}
        self.generator_ids = [self.index[g] for g in generators]
        self.inv = [self.index[inverse(m)] for m in elements]
        self._mul: Optional[list[list[int]]] = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        """Index of elements[i] @ elements[j]."""
        if self._mul is None:
            if self.order <= 256:
                self._mul = [
                    [self.index[a @ b] for b in self.elements] for a in self.elements
                ]
            else:
                return self.index[self.elements[i] @ self.elements[j]]
        return self._mul[i][j]

    def digest(self) -> str:
        payload = {
            "field": field_to_json(self.ctx),
            "n": self.n,
            "elements": [matrix_to_json(m) for m in self.elements],
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def __repr__(self) -> str:
        return f"MatrixGroup(order={self.order}, n={self.n}, field={self.ctx!r})"


def closure(
    ctx: FieldCtx,
    n: int,
    generators: Sequence[Matrix],
    order_cap: int = DEFAULT_ORDER_CAP,
) -> MatrixGroup:
    """BFS closure of the generators; deterministic element order."""
    gens = list(generators)
    for g in gens:
        if g.ctx is not ctx:
            raise MixedContexts("generator over a different field")
        if g.rows != n or g.cols != n:
            raise ShapeMismatch(f"generator is {g.rows}x{g.cols}, expected {n}x{n}")
        if not is_invertible(g):
            raise SingularGenerator(f"singular generator {g!r}")
    identity = Matrix.identity(ctx, n)
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        new: list[Matrix] = []
        for m in frontier:
            for g in gens:
                prod = m @ g
                if prod not in seen:
                    seen.add(prod)
                    elements.append(prod)
                    new.append(prod)
                    if len(elements) > order_cap:
                        raise OrderCapExceeded(f"group order exceeds cap {order_cap}")
        frontier = new
    return MatrixGroup(ctx, n, gens, elements)


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------


def family_matrix(ctx: FieldCtx, a: FieldElement, n: int = 2) -> Matrix:
    """The 2x2 one-parameter block, embedded in the top-left of GL_n.

    Characteristic 2: [[a+1, a], [a, a+1]]; otherwise the shear [[1, a], [0, 1]].
    The parameter map is additive: A(a) @ A(b) = A(a+b).
    """
    if a.ctx is not ctx:
        raise MixedContexts("parameter from a different field")
    if n < 2:
        raise ShapeMismatch("family needs n >= 2")
    one = ctx.one()
    if ctx.p == 2:
        block = [[a + one, a], [a, a + one]]
    else:
        block = [[one, a], [ctx.zero(), one]]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < 2 and j < 2:
                row.append(block[i][j])
            else:
                row.append(one if i == j else ctx.zero())
        rows.append(row)
    return Matrix.from_rows(ctx, rows)


def additive_family(
    ctx: FieldCtx,
    params: Optional[Iterable[FieldElement]] = None,
    n: int = 2,
    order_cap: int = DEFAULT_ORDER_CAP,
) -> MatrixGroup:
    """Group {A(a) : a in U} for an additive subgroup U of the field.

    Defaults to U = the whole field.  The generators are the matrices of
    all nonzero parameters, in field encoding order, so certificate systems
    carry one block per parameter.
    """
    if params is None:
        vals = set(range(ctx.q))
    else:
        vals = set()
        for a in params:
            if a.ctx is not ctx:
                raise MixedContexts("parameter from a different field")
            vals.add(a.val)
        vals.add(0)
        for a in list(vals):
            if ctx.neg_i(a) not in vals:
                raise NotAdditivelyClosed(f"missing -a for a = {ctx.el(a)!r}")
            for b in vals:
                if ctx.add_i(a, b) not in vals:
                    raise NotAdditivelyClosed(
                        f"missing a+b for a = {ctx.el(a)!r}, b = {ctx.el(b)!r}"
                    )
    gens = [family_matrix(ctx, ctx.el(v), n) for v in sorted(vals) if v != 0]
    group = closure(ctx, n, gens, order_cap)
    if group.order != len(vals):
        raise ModcohError("family closure does not match the parameter set")
    return group


def paired_shear_family(ctx: FieldCtx, order_cap: int = DEFAULT_ORDER_CAP) -> MatrixGroup:
    """Order-p^2 group of 4x4 block pairs of shears over the prime subfield."""
    if ctx.p < 3:
        raise BadCharacteristic("the 4x4 paired-shear family needs p >= 3")
    zero, one = ctx.zero(), ctx.one()

    def element(a: FieldElement, b: FieldElement) -> Matrix:
        return Matrix.from_rows(
            ctx,
            [
                [one, a, zero, zero],
                [zero, one, zero, zero],
                [zero, zero, one, b],
                [zero, zero, zero, one],
            ],
        )

    gens = [element(one, zero), element(zero, one)]
    group = closure(ctx, 4, gens, order_cap)
    if group.order != ctx.p**2:
        raise ModcohError("paired-shear closure has unexpected order")
    return group


# ---------------------------------------------------------------------------
# hypothesis check for the extension construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypothesisReport:
    """Whether a group supports the non-split construction in degree p."""

    ok: bool
    case: str  # "involution-pattern" (p = 2) or "unipotent-shear" (p >= 3)
    values: tuple[FieldElement, ...]  # distinct pattern parameters found (p = 2)
    detail: str


def _matches_involution_pattern(m: Matrix) -> Optional[FieldElement]:
    """Matching a for [[a, a+1], [a+1, a]] + identity elsewhere, or None."""
    ctx = m.ctx
    a = m[0, 0]
    a1 = a + ctx.one()
    if m[0, 1] != a1 or m[1, 0] != a1 or m[1, 1] != a:
        return None
    for i in range(m.rows):
        for j in range(m.cols):
            if i < 2 and j < 2:
                continue
            want = 1 if i == j else 0
            if m.raw(i, j) != want:
                return None
    return a


def check_extension_hypothesis(group: MatrixGroup) -> HypothesisReport:
    """Scan the enumerated elements for the required pattern.

    p = 2: at least three distinct parameters a with [[a, a+1], [a+1, a]]
    (plus identity padding) in the group.  p >= 3: the specific unipotent
    shear [[1, 1], [0, 1]] (plus identity padding) is an element.
    """
    ctx = group.ctx
    if ctx.p == 2:
        found = []
        for m in group.elements:
            a = _matches_involution_pattern(m)
            if a is not None:
                found.append(a)
        found.sort(key=lambda x: x.val)
        ok = len(found) >= 3
        return HypothesisReport(
            ok,
            "involution-pattern",
            tuple(found),
            f"{len(found)} distinct pattern parameter(s); need >= 3",
        )
    target = family_matrix(ctx, ctx.one(), group.n)
    ok = target in group.index
    return HypothesisReport(
        ok,
        "unipotent-shear",
        (),
        "unipotent shear present" if ok else "unipotent shear missing",
    )


# -- serialization -------------------------------------------------------------


def group_to_json(group: MatrixGroup) -> dict:
    return {
        "field": field_to_json(group.ctx),
        "n": group.n,
        "generators": [matrix_to_json(g) for g in group.generators],
        "generator_ids": list(group.generator_ids),
        "elements": [matrix_to_json(m) for m in group.elements],
        "inverse": list(group.inv),
        "order": group.order,
        "digest": group.digest(),
    }


def group_spec_from_json(obj: dict, order_cap: int = DEFAULT_ORDER_CAP) -> MatrixGroup:
    """Build a group from a spec {field, n, generators}."""
    from .gf import field_from_json
    from .linalg import matrix_from_json

    try:
        ctx = field_from_json(obj["field"])
        n = obj["n"]
        gens = [matrix_from_json(ctx, g) for g in obj["generators"]]
    except KeyError as exc:
        raise ModcohError(f"bad group spec: missing {exc}") from exc
    return closure(ctx, n, gens, order_cap)
