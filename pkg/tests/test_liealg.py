import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from topoforms.epsilon import levi_civita
from topoforms.liealg import (PAULI, ClosureError, LieAlgebraSpec, SymmetricPairSpec,
                              algebra_from_json, builtin, check_symmetric_pair, gell_mann,
                              load_algebra, structure_constants, su2, su3, u1)


def gell_mann_f():
    """Textbook route: f_abc = tr([l_a, l_b] l_c) / 4i."""
    lam = gell_mann()
    f = np.zeros((8, 8, 8))
    for a in range(8):
        for b in range(8):
            com = lam[a] @ lam[b] - lam[b] @ lam[a]
            for c in range(8):
                f[a, b, c] = (np.trace(com @ lam[c]) / 4j).real
    return f


def test_su2_structure_constants_are_epsilon():
    sc = structure_constants(su2())
    np.testing.assert_allclose(sc.f, levi_civita(3), atol=1e-12)


def test_u1_is_abelian():
    assert np.all(structure_constants(u1()).f == 0)


def test_su3_against_textbook_oracle():
    f = structure_constants(su3()).f
    np.testing.assert_allclose(f, gell_mann_f(), atol=1e-12)
    assert f[0, 1, 2] == pytest.approx(1.0, abs=1e-12)
    assert f[3, 4, 7] == pytest.approx(np.sqrt(3) / 2, abs=1e-12)


@pytest.mark.parametrize("name", ["su2", "su3", "u1"])
def test_structure_constant_invariants(name):
    sc = structure_constants(builtin(name))
    assert sc.antisymmetry_residual < 1e-12
    assert sc.jacobi_residual < 1e-10


@given(st.floats(0.1, 10.0))
def test_uniform_rescale_scales_f(c):
    f = structure_constants(su3()).f
    fc = structure_constants(LieAlgebraSpec("scaled", c * su3().generators)).f
    np.testing.assert_allclose(fc, c * f, atol=1e-12 * max(1.0, c))


def test_generator_validation():
    with pytest.raises(ValueError, match="anti-Hermitian"):
        LieAlgebraSpec("bad", PAULI)
    with pytest.raises(ClosureError) as exc:
        LieAlgebraSpec("open", (PAULI / 2j)[:2])
    assert exc.value.pair == (0, 1)
    assert exc.value.residual > 0.1
    with pytest.raises(ValueError):
        builtin("so5")


def test_su2_u1_pair_passes():
    rep = check_symmetric_pair(SymmetricPairSpec(su2(), [2]), tol=1e-12)
    assert rep.passed
    assert rep.t_closure_residual < 1e-12
    assert rep.s_representation_residual < 1e-12
    assert rep.s_closure_residual < 1e-12
    assert rep.dimension_condition is False
    assert rep.to_dict()["dimension_condition"]["enforced"] is False


def test_full_algebra_pair_passes_vacuously():
    pair = SymmetricPairSpec(su3(), list(range(8)))
    assert pair.S_indices == ()
    assert check_symmetric_pair(pair).passed


def test_su3_lambda3_fails_s_closure():
    rep = check_symmetric_pair(SymmetricPairSpec(su3(), [2]))
    assert rep.t_closure and rep.s_representation
    assert not rep.s_closure
    assert rep.s_closure_residual > 0.5
    # [l4, l5] = i(l3 + sqrt3 l8): the worst pair is one that produces l8
    com = gell_mann()[3] @ gell_mann()[4] - gell_mann()[4] @ gell_mann()[3]
    np.testing.assert_allclose(com, 1j * (gell_mann()[2] + np.sqrt(3) * gell_mann()[7]),
                               atol=1e-12)
    assert not rep.passed


def test_partition_is_validated():
    with pytest.raises(ValueError):
        SymmetricPairSpec(su2(), [0], [0, 1])
    with pytest.raises(ValueError):
        SymmetricPairSpec(su2(), [])


def test_json_round_trip(tmp_path):
    doc = su2().to_json(([2], [0, 1]))
    p = tmp_path / "pair.json"
    p.write_text(json.dumps(doc))
    alg, pair = load_algebra(p)
    np.testing.assert_allclose(alg.generators, su2().generators)
    assert pair.T_indices == (2,) and pair.S_indices == (0, 1)
    alg2, pair2 = algebra_from_json({"builtin": "su3", "pair": {"T": [2]}})
    assert alg2.dim == 8 and pair2 is not None


def test_components_and_metric():
    alg = su2()
    np.testing.assert_allclose(alg.metric, -0.5 * np.eye(3), atol=1e-15)
    coeffs, res = alg.components(0.3 * alg.generators[0] - 2 * alg.generators[2])
    np.testing.assert_allclose(coeffs, [0.3, 0, -2], atol=1e-14)
    assert res < 1e-14
    assert alg.is_orthogonal()
