import numpy as np
import pytest

from jordan_domains import classical_domains, automorphisms, jts_core
from jordan_domains import ExtensionDomainError, NumericalBreakdownError

def ballMobius(a, z):
    a = np.asarray(a, dtype=complex)
    inner = np.sum(z*np.conj(a))
    P = inner*a/np.vdot(a, a)
    s = np.sqrt(1 - np.vdot(a, a).real)
    return (a + P + s*(z - P))/(1 + inner)

def test_disc_transvection_is_mobius():
    g = automorphisms.transvection(('disc',), np.array([0.5]))
    for z in [0, 0.3j, -0.7, 0.2+0.5j]:
        np.testing.assert_allclose(g.apply(np.array([z])), [(z + 0.5)/(1 + 0.5*z)], atol=1e-12)
    np.testing.assert_allclose(g.derivative(np.zeros(1)), [[0.75]], atol=1e-12)

def test_ball_transvection_closed_form(rng):
    a = np.array([0.3+0.1j, -0.2j])
    g = automorphisms.transvection(('ball', 2), a)
    for z in classical_domains.randomPoint(('ball', 2), rng, size=50):
        np.testing.assert_allclose(g.apply(z), ballMobius(a, z), atol=1e-12)

def test_transvection_basic_properties(domain, rng):
    n = domain.dimension
    origin = np.zeros(n)
    z = classical_domains.randomPoint(domain, rng, radius=0.9, size=100)
    for i in range(50):
        a = classical_domains.randomPoint(domain, rng, radius=0.9)
        g = automorphisms.transvection(domain, a)
        np.testing.assert_allclose(g.apply(origin), a, atol=1e-10)
        np.testing.assert_allclose(g.inverse().apply(a), 0, atol=1e-9)

        images = g.apply(z)
        assert np.all(classical_domains.spectralNorm(domain, images) < 1)
        np.testing.assert_allclose(g.inverse().apply(images), z, atol=1e-8)

        h = 1e-6
        J = np.zeros((n, n), dtype=complex)
        for k in range(n):
            J[:, k] = (g.apply(z[i] + h*np.eye(n)[k]) - g.apply(z[i] - h*np.eye(n)[k]))/(2*h)
        np.testing.assert_allclose(g.derivative(z[i]), J, atol=1e-5)

def test_bergman_operator_positive_on_the_diagonal(domain, rng):
    for a in classical_domains.randomPoint(domain, rng, radius=0.95, size=50):
        H = jts_core.toOrthonormal(domain.system, jts_core.bergmanOperator(domain.system, a, a))
        np.testing.assert_allclose(H, np.conj(H.T), atol=1e-10)
        assert np.min(np.linalg.eigvalsh(0.5*(H + np.conj(H.T)))) > 0

def test_transvection_maps_boundary_to_boundary(domain, rng):
    a = 0.5*classical_domains.randomPoint(domain, rng)
    g = automorphisms.transvection(domain, a)
    x = classical_domains.randomBoundaryPoint(domain, rng, size=50)
    np.testing.assert_allclose(classical_domains.spectralNorm(domain, g.apply(x)), 1, atol=1e-8)

def test_transvection_derivative_matches_differences(rng):
    D = classical_domains.makeDomain(('I', 2, 2))
    g = automorphisms.transvection(D, 0.5*classical_domains.randomPoint(D, rng))
    z = 0.5*classical_domains.randomPoint(D, rng)
    h = 1e-6
    J = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        step = np.zeros(4, dtype=complex)
        step[k] = h
        J[:, k] = (g.apply(z + step) - g.apply(z - step))/(2*h)
    np.testing.assert_allclose(g.derivative(z), J, atol=1e-7)

def test_transvection_rejections():
    with pytest.raises(ValueError):
        automorphisms.transvection(('ball', 2), np.array([0.6, 0.8]))
    with pytest.raises(ValueError):
        automorphisms.transvection(('ball', 2), np.array([0.1]))
    g = automorphisms.transvection(('disc',), np.array([0.5]))
    with pytest.raises(ExtensionDomainError):
        g.apply(np.array([-2.0]))
    assert issubclass(ExtensionDomainError, ValueError)

def test_transvection_dictionary():
    g = automorphisms.makeTransvection(('I', 2, 2), np.array([0.1, 0.2j, 0, -0.3]))
    data = g.toDict()
    assert data['kind'] == 'I(2,2)'
    h = automorphisms.transvection.fromDict(data)
    z = np.array([0.2, 0, 0.1j, 0.4])
    np.testing.assert_allclose(h.apply(z), g.apply(z), atol=1e-14)
    assert repr(g).startswith('transvection(I(2,2)')

def test_positive_square_root(rng):
    D = classical_domains.makeDomain(('III', 2))
    a = 0.7*classical_domains.randomPoint(D, rng)
    B = jts_core.bergmanOperator(D.system, a, a)
    S = automorphisms.positiveSquareRoot(D.system, B)
    np.testing.assert_allclose(S @ S, B, atol=1e-12)
    with pytest.raises(NumericalBreakdownError):
        automorphisms.positiveSquareRoot(D.system, -np.eye(3))

def test_map_a_to_b(domain, rng):
    a = 0.7*classical_domains.randomPoint(domain, rng)
    b = 0.7*classical_domains.randomPoint(domain, rng)
    chain = automorphisms.mapAtoB(domain, a, b)
    np.testing.assert_allclose(chain(a), b, atol=1e-9)
    np.testing.assert_allclose(chain.inverse()(b), a, atol=1e-9)
    assert len(chain) == 2

def test_map_chain_steps():
    g = automorphisms.transvection(('ball', 2), np.array([0.3, 0.2]))
    U = np.array([[0, 1], [1j, 0]])
    chain = automorphisms.mapChain([('transvection', g), ('linear', U)])
    z = np.array([0.1, -0.4j])
    np.testing.assert_allclose(chain.apply(z), U @ g.apply(z))
    np.testing.assert_allclose(chain.derivative(z), U @ g.derivative(z), atol=1e-12)
    np.testing.assert_allclose(chain.inverse().apply(chain.apply(z)), z, atol=1e-12)

    rows = chain.describe()
    assert [row['step'] for row in rows] == ['transvection', 'linear']
    assert rows[0]['transvection']['kind'] == 'I(1,2)'

def test_map_chain_holomorphic_step():
    square = lambda z: z**2
    chain = automorphisms.mapChain([('holomorphic', square)])
    z = np.array([0.3+0.1j, -0.2])
    np.testing.assert_allclose(chain(z), z**2)
    np.testing.assert_allclose(chain.derivative(z), np.diag(2*z), atol=1e-8)
    assert chain.describe() == [{'step': 'holomorphic', 'label': '<lambda>'}]
    with pytest.raises(ValueError):
        chain.inverse()

    exact = automorphisms.mapChain([('holomorphic', (square, lambda z: np.diag(2*z), 'square'))])
    np.testing.assert_allclose(exact.derivative(z), np.diag(2*z))

def test_map_chain_rejections():
    with pytest.raises(ValueError):
        automorphisms.mapChain([('rotation', np.eye(2))])
    with pytest.raises(ValueError):
        automorphisms.mapChain([('transvection', np.eye(2))])
    with pytest.raises(ValueError):
        automorphisms.mapChain([('linear', np.ones(2))])
