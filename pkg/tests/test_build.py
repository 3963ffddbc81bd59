"""Pipeline stages: sequence construction, witnesses, assembly, toy, demo."""

from math import comb

import pytest

from modcoh.build import (
    assemble_obstruction_module,
    build_nonsplit_sequence,
    det_identity_demo,
    resolve_module,
    tensor_vanishing_witness,
    toy_example,
)
from modcoh.coh import h1_class
from modcoh.errors import BadCharacteristic, HypothesisNotSatisfied, ModcohError
from modcoh.gf import field_new
from modcoh.grp import additive_family, closure, paired_shear_family
from modcoh.linalg import Matrix, kron
from modcoh.rep import action_is_homomorphism

F2 = field_new(2)
F3 = field_new(3)
F4 = field_new(2, 2)

G4 = additive_family(F4)
G3 = closure(F3, 2, [Matrix.from_rows(F3, [[1, 1], [0, 1]])])


def test_dims_char2():
    seq = build_nonsplit_sequence(G4)
    assert seq.dims == {"N": 3, "V": 3, "W": 2, "U": 2, "U_ext": 3, "X": 11}
    assert not seq.split_result.split


def test_dims_char3():
    seq = build_nonsplit_sequence(G3)
    assert seq.dims == {"N": 4, "V": 4, "W": 2, "U": 4, "U_ext": 5, "X": 19}
    assert not seq.split_result.split


def test_hypothesis_rejected_over_gf2():
    with pytest.raises(HypothesisNotSatisfied):
        build_nonsplit_sequence(additive_family(F2))


def test_construction_without_hypothesis_flag():
    seq = build_nonsplit_sequence(additive_family(F2), require_hypothesis=False)
    assert seq.u_module.dim == 2
    assert not seq.hypothesis.ok


def test_cocycle_lands_in_u_and_validates():
    for group in (G4, G3):
        seq = build_nonsplit_sequence(group)
        seq.cocycle.validate()
        assert action_is_homomorphism(seq.u_module)
        assert action_is_homomorphism(seq.extension.total)


def test_iota_shape():
    seq = build_nonsplit_sequence(G4)
    assert seq.iota == Matrix.from_rows(F4, [[1, 0, 0], [0, 1, 0]])


def test_generator_system_char2_rows():
    # each generator block row reads (a^2+1)(z11 + z21) = a^2 + a
    seq = build_nonsplit_sequence(G4)
    A, b = seq.split_result.system, seq.split_result.rhs
    one = F4.one()
    for t, gid in enumerate(seq.split_result.generator_ids):
        a = G4.elements[gid][0, 0]
        coeff = a * a + one
        rhs = a * a + a
        for r in range(2):
            row = t * 2 + r
            assert A[row, 0] == coeff and A[row, 1] == coeff
            assert b[row, 0] == rhs


def test_generator_system_char3_rows():
    # row 0: z21 = -1; row 3: -2 z21 = 0
    seq = build_nonsplit_sequence(G3)
    A, b = seq.split_result.system, seq.split_result.rhs
    assert [A.raw(0, j) for j in range(4)] == [0, 0, 1, 0]
    assert b[0, 0] == -F3.one()
    assert [A.raw(3, j) for j in range(4)] == [0, 0, (-2) % 3, 0]
    assert b[3, 0].is_zero


@pytest.mark.parametrize("group", [G4, G3])
def test_tensor_vanishing_witness_all_elements(group):
    seq = build_nonsplit_sequence(group)
    tv = tensor_vanishing_witness(seq)
    # the ambient space is dual(uext) (x) u: 3*2 = 6 resp. 5*4 = 20 dimensional
    assert tv.tensor_cocycle.module.dim == (seq.u_module.dim + 1) * seq.u_module.dim
    assert any(not c.is_zero for c in tv.class_of_g)
    # independent verification of (s-1)u = w (x) g_s over every element
    t_mod = tv.tensor_cocycle.module
    ident = Matrix.identity(group.ctx, t_mod.dim)
    for i in range(group.order):
        lhs = (t_mod.action(i) - ident) @ tv.witness
        assert lhs == kron(tv.w, seq.cocycle.values[i])
    assert all(c.is_zero for c in h1_class(tv.tensor_cocycle))


def test_obstruction_dims():
    assert assemble_obstruction_module(build_nonsplit_sequence(G4)).dim == 11
    assert assemble_obstruction_module(build_nonsplit_sequence(G3)).dim == 19


def test_obstruction_dim_formula_n3():
    group = additive_family(F4, n=3)
    seq = build_nonsplit_sequence(group)
    rep = assemble_obstruction_module(seq)
    assert rep.dim == 4 * 3 * (comb(4, 2) - 3) + 3 == 39
    assert action_is_homomorphism(rep.x_module)


def test_obstruction_components():
    rep = assemble_obstruction_module(build_nonsplit_sequence(G4))
    assert rep.components == ["dual(u)", "ext(u)", "ext(u)", "ext(u)"]


def test_toy_nonsplit_and_equivalence():
    toy = toy_example(2)
    assert toy.hypothesis.ok
    assert not toy.split_result.split
    assert toy.intertwiner is not None and toy.intertwiner.matrix is not None
    assert toy.scalar is not None and not toy.scalar.is_zero
    # pushed class = scalar * main class + coboundary, on every element
    T, lam, v = toy.intertwiner.matrix, toy.scalar, toy.coboundary_witness
    main = toy.main
    ident = Matrix.identity(F4, 2)
    for i in range(toy.group.order):
        lhs = T @ toy.cocycle.values[i]
        rhs = main.cocycle.values[i].scale(lam) + (main.u_module.action(i) - ident) @ v
        assert lhs == rhs


def test_toy_without_hypothesis_records_verdict():
    toy = toy_example(1)
    assert not toy.hypothesis.ok
    assert toy.split_result.split  # over GF(2) the toy sequence degenerates
    assert toy.intertwiner is None


def test_toy_rejects_wrong_characteristic():
    with pytest.raises(BadCharacteristic):
        toy_example(G3)


def test_det_identity_demo():
    out = det_identity_demo(seed=0, trials=50)
    assert out["all_zero"] and out["structured_zero"]
    assert set(out["zero_counts"]) == {"GF(2)", "GF(3)", "GF(4)"}
    assert all(v == 50 for v in out["zero_counts"].values())


def test_resolve_module_recipes():
    assert resolve_module(G4, "natural").dim == 2
    assert resolve_module(G4, "trivial").dim == 1
    assert resolve_module(G4, "trivial(3)").dim == 3
    assert resolve_module(G4, "sym(2)").dim == 3
    assert resolve_module(G4, "twist").dim == 2
    assert resolve_module(G4, "u").dim == 2
    assert resolve_module(G4, "uext").dim == 3
    assert resolve_module(G4, "dual(uext)").dim == 3
    assert resolve_module(G4, "tensor(twist,u)").dim == 4
    assert resolve_module(G4, "hom(natural,twist)").dim == 4
    assert resolve_module(G4, "sum(natural,trivial,u)").dim == 5


def test_resolve_module_errors():
    with pytest.raises(ModcohError):
        resolve_module(G4, "nope")
    with pytest.raises(ModcohError):
        resolve_module(G4, "sym(2")
    with pytest.raises(ModcohError):
        resolve_module(G4, "dual(natural,twist)")


def test_paired_shear_pipeline_smoke():
    group = paired_shear_family(F3)
    seq = build_nonsplit_sequence(group)
    assert seq.dims["N"] == comb(6, 3) == 20
    assert not seq.split_result.split
    assert assemble_obstruction_module(seq).dim == 4 * 4 * (20 - 4) + 3


def test_tensor_stage_guards_desk_scale():
    # the 4x4 family's tensor stage would need |G| * 4160^2 stored entries
    seq = build_nonsplit_sequence(paired_shear_family(F3))
    with pytest.raises(ModcohError, match="desk scale"):
        tensor_vanishing_witness(seq)
