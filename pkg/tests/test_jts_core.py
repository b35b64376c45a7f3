import numpy as np
import pytest

from jordan_domains import jts_core

SYSTEMS = [jts_core.ball(2), jts_core.typeI(2, 2), jts_core.typeII(4), jts_core.typeIII(2),
           jts_core.typeIV(4), jts_core.polydisc(2)]

def complexGaussian(rng, shape):
    return rng.standard_normal(shape) + 1j*rng.standard_normal(shape)

def test_disc_product_is_twice_the_cube():
    T = jts_core.disc()
    np.testing.assert_allclose(jts_core.tripleProduct(T, [1], [1], [1]), [2])
    np.testing.assert_allclose(jts_core.tripleProduct(T, [0.5j], [2], [1]), [2*0.5j*2])

def test_ball_product_formula(rng):
    T = jts_core.ball(3)
    x, y, z = complexGaussian(rng, (3, 3))
    expected = np.vdot(y, x)*z + np.vdot(y, z)*x
    np.testing.assert_allclose(jts_core.tripleProduct(T, x, y, z), expected, atol=1e-12)

def test_type_IV_product_formula(rng):
    T = jts_core.typeIV(5)
    x, y, z = complexGaussian(rng, (3, 5))
    expected = np.vdot(y, x)*z + np.vdot(y, z)*x - np.sum(x*z)*np.conj(y)
    np.testing.assert_allclose(jts_core.tripleProduct(T, x, y, z), expected, atol=1e-12)

@pytest.mark.parametrize('T', SYSTEMS, ids=lambda T: T.label)
def test_jordan_identity(T, rng):
    x, y, u, v, w = complexGaussian(rng, (5, 1000, T.dimension))
    residual = jts_core.jordanIdentityResidual(T, x, y, u, v, w)
    scale = np.prod([np.linalg.norm(a, axis=1) for a in (x, y, u, v, w)], axis=0)
    assert residual.shape == (1000,)
    assert np.max(residual/scale) <= 1e-10

@pytest.mark.parametrize('T', SYSTEMS, ids=lambda T: T.label)
def test_operators_match_products(T, rng):
    x, y, z = complexGaussian(rng, (3, T.dimension))
    np.testing.assert_allclose(jts_core.operatorD(T, x, y) @ z, jts_core.tripleProduct(T, x, y, z), atol=1e-10)
    np.testing.assert_allclose(jts_core.operatorQ(T, x) @ np.conj(y), jts_core.applyQ(T, x, y), atol=1e-10)
    # Q(x)Q(y)z as a complex-linear matrix
    QQ = jts_core.composeConjugateLinear(jts_core.operatorQ(T, x), jts_core.operatorQ(T, y))
    np.testing.assert_allclose(QQ @ z, jts_core.applyQ(T, x, jts_core.applyQ(T, y, z)), atol=1e-10)

def test_structure_tensor_entries():
    T = jts_core.typeI(2, 2)
    S = jts_core.structureTensor(T)
    I = np.eye(T.dimension)
    for i, j, k in [(0, 0, 0), (0, 1, 3), (2, 2, 1)]:
        np.testing.assert_allclose(S[i, j, k], jts_core.tripleProduct(T, I[i], I[j], I[k]))

def test_batched_product_broadcasts(rng):
    T = jts_core.typeIII(2)
    x = complexGaussian(rng, (7, T.dimension))
    y = complexGaussian(rng, T.dimension)
    batched = jts_core.tripleProduct(T, x, y, x)
    for k in range(7):
        np.testing.assert_allclose(batched[k], jts_core.tripleProduct(T, x[k], y, x[k]))

def test_bergman_operator_disc():
    T = jts_core.disc()
    z, w = 0.3+0.2j, -0.5+0.1j
    np.testing.assert_allclose(jts_core.bergmanOperator(T, [z], [w]), [[(1 - z*np.conj(w))**2]])

def test_bergman_determinant_ball(rng):
    T = jts_core.ball(3)
    z, w = 0.4*complexGaussian(rng, (2, 3))/np.sqrt(6)
    det = np.linalg.det(jts_core.bergmanOperator(T, z, w))
    np.testing.assert_allclose(det, (1 - np.vdot(w, z))**4, rtol=1e-10)

@pytest.mark.parametrize('T', SYSTEMS, ids=lambda T: T.label)
def test_trace_form_is_hermitian_positive(T, rng):
    G = jts_core.traceFormMatrix(T)
    np.testing.assert_allclose(G, np.conj(G.T))
    assert np.min(np.linalg.eigvalsh(G)) > 0
    x, y = complexGaussian(rng, (2, T.dimension))
    np.testing.assert_allclose(jts_core.traceForm(T, x, y), np.conj(jts_core.traceForm(T, y, x)))
    np.testing.assert_allclose(jts_core.traceForm(T, x, y), np.trace(jts_core.operatorD(T, x, y)), rtol=1e-10)

@pytest.mark.parametrize('T', SYSTEMS, ids=lambda T: T.label)
def test_D_adjoint_under_trace_form(T, rng):
    x, y = complexGaussian(rng, (2, T.dimension))
    np.testing.assert_allclose(jts_core.adjoint(T, jts_core.operatorD(T, x, y)), jts_core.operatorD(T, y, x),
                               atol=1e-9)

@pytest.mark.parametrize('T', SYSTEMS, ids=lambda T: T.label)
def test_bergman_adjoint_under_trace_form(T, rng):
    for i in range(10):
        x, y = 0.5*complexGaussian(rng, (2, T.dimension))/np.sqrt(T.dimension)
        np.testing.assert_allclose(jts_core.adjoint(T, jts_core.bergmanOperator(T, x, y)),
                                   jts_core.bergmanOperator(T, y, x), atol=1e-9)
        u, v = complexGaussian(rng, (2, T.dimension))
        left = jts_core.traceForm(T, jts_core.bergmanOperator(T, x, y) @ u, v)
        right = jts_core.traceForm(T, u, jts_core.bergmanOperator(T, y, x) @ v)
        assert abs(left - right) <= 1e-9*max(1.0, abs(left))

def test_orthonormal_basis_change_round_trip(rng):
    T = jts_core.typeII(4)
    A = complexGaussian(rng, (T.dimension, T.dimension))
    np.testing.assert_allclose(jts_core.fromOrthonormal(T, jts_core.toOrthonormal(T, A)), A, atol=1e-10)
    x = complexGaussian(rng, T.dimension)
    # D(x,x) is self-adjoint, so Hermitian in orthonormal coordinates
    H = jts_core.toOrthonormal(T, jts_core.operatorD(T, x, x))
    np.testing.assert_allclose(H, np.conj(H.T), atol=1e-10)

def test_odd_powers():
    T = jts_core.disc()
    np.testing.assert_allclose(jts_core.oddPower(T, [0.5], 0), [0.5])
    np.testing.assert_allclose(jts_core.oddPower(T, [0.5], 2), [0.5**5])
    with pytest.raises(ValueError):
        jts_core.oddPower(T, [0.5], -1)
    with pytest.raises(ValueError):
        jts_core.oddPower(T, [0.5], 1.5)

def test_tripotents_and_orthogonality():
    assert jts_core.isTripotent(jts_core.disc(), [1j])
    assert not jts_core.isTripotent(jts_core.disc(), [0.5])
    assert jts_core.isTripotent(jts_core.typeIV(3), [np.sqrt(2), 0, 0])
    assert jts_core.isTripotent(jts_core.typeIV(3), np.array([1, 1j, 0])/np.sqrt(2))

    T = jts_core.typeI(2, 2)
    E11, E12, E22 = np.eye(4)[0], np.eye(4)[1], np.eye(4)[3]
    assert jts_core.areOrthogonal(T, E11, E22)
    assert not jts_core.areOrthogonal(T, E11, E12)
    with pytest.raises(ValueError):
        jts_core.isTripotent(T, E11, tol=0)

def test_matrix_charts():
    T = jts_core.typeII(3)
    X = jts_core.vectorToMatrix(T, [1, 2, 3])
    np.testing.assert_allclose(X, -X.T)
    np.testing.assert_allclose(jts_core.matrixToVector(T, X), [1, 2, 3])
    T = jts_core.typeIII(2)
    X = jts_core.vectorToMatrix(T, [1, 2, 3])
    np.testing.assert_allclose(X, [[1, 2], [2, 3]])
    with pytest.raises(ValueError):
        jts_core.matrixShape(jts_core.typeIV(3))

def test_system_validation_and_labels():
    with pytest.raises(ValueError):
        jts_core.tripleSystem('V', (2,))
    with pytest.raises(ValueError):
        jts_core.typeII(1)
    with pytest.raises(ValueError):
        jts_core.typeI(2, 0)
    with pytest.raises(ValueError):
        jts_core.productSystem([])

    T = jts_core.productSystem([jts_core.typeI(2, 2), jts_core.typeIV(3)])
    assert T.dimension == 7
    assert T.label == 'prod(I(2,2);IV(3))'
    assert jts_core.systemFromLabel(T.label) == T
    assert jts_core.systemFromLabel('III(3)').dimension == 6
    with pytest.raises(ValueError):
        jts_core.systemFromLabel('I(2,x)')

def test_dimension_mismatch_is_rejected():
    T = jts_core.typeI(2, 2)
    with pytest.raises(ValueError):
        jts_core.tripleProduct(T, np.ones(3), np.ones(4), np.ones(4))
