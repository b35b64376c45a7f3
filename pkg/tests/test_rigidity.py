import numpy as np
import pytest

from jordan_domains import classical_domains, automorphisms, rigidity

def scaleChain(c, n):
    return automorphisms.mapChain([('linear', c*np.eye(n))])

@pytest.mark.parametrize('kind, parameters', [('ball', (1,)), ('ball', (2,)), ('polydisc', (2,)), ('I', (2, 2))])
def test_kernel_recovers_triple_product(kind, parameters):
    report = rigidity.compareKernelTensor(rigidity.kernelSpec(kind, parameters))
    assert report['max_error'] <= 1e-4
    n = rigidity.kernelSpec(kind, parameters).dimension
    assert report['tensor_shape'] == [n]*4

def test_kernel_values_and_volumes():
    K = rigidity.kernelSpec('ball', (2,))
    assert rigidity.kernelLog(K, np.zeros(2), np.zeros(2)) == 0
    K = rigidity.kernelSpec('ball', (2,), normalization='volume')
    assert np.real(rigidity.kernelLog(K, np.zeros(2), np.zeros(2))) == pytest.approx(np.log(2/np.pi**2))
    K = rigidity.kernelSpec('I', (2, 2), normalization='volume')
    assert K.logVolume() == pytest.approx(np.log(np.pi**4/12))
    K = rigidity.kernelSpec('polydisc', (2,))
    value = rigidity.kernelLog(K, np.array([0.5, 0]), np.array([0.5, 0]))
    assert value == pytest.approx(-2*np.log(0.75))

def test_kernel_rejections():
    with pytest.raises(ValueError):
        rigidity.kernelSpec('IV', (3,))
    with pytest.raises(ValueError):
        rigidity.kernelSpec('ball', (2,), normalization='bergman')
    K = rigidity.kernelSpec('ball', (2,))
    with pytest.raises(ValueError):
        rigidity.kernelLog(K, np.array([0.6, 0.8]), np.zeros(2))
    with pytest.raises(ValueError):
        rigidity.tripleFromKernel(K, step=1e-4)
    with pytest.raises(ValueError):
        rigidity.tripleFromKernel(K, step=0.5)

def test_kernel_from_system():
    from jordan_domains import jts_core
    assert rigidity.kernelSpecFromSystem(jts_core.ball(3)).kind == 'ball'
    assert rigidity.kernelSpecFromSystem(jts_core.polydisc(2)).kind == 'polydisc'
    assert rigidity.kernelSpecFromSystem(jts_core.typeI(2, 3)).parameters == (2, 3)
    with pytest.raises(ValueError):
        rigidity.kernelSpecFromSystem(jts_core.typeIV(3))

def test_schwarz_check():
    ball = classical_domains.makeDomain(('ball', 2))
    report = rigidity.schwarzBalancedCheck(ball, ball, scaleChain(0.5, 2))
    assert report['passed'] and report['monotone']
    assert report['derivative_max_norm'] == pytest.approx(0.5)
    assert [row['r'] for row in report['levels']] == [0.25, 0.5, 0.75, 0.9]

    report = rigidity.schwarzBalancedCheck(ball, ball, scaleChain(2, 2))
    assert not report['passed']
    assert {v['test'] for v in report['violations']} == {'derivative', 'level'}

    with pytest.raises(ValueError):
        g = automorphisms.transvection(ball, np.array([0.3, 0]))
        rigidity.schwarzBalancedCheck(ball, ball, automorphisms.mapChain([('transvection', g)]))

def test_schwarz_check_between_different_domains():
    bidisc = classical_domains.makeDomain(('polydisc', 2))
    disc = classical_domains.makeDomain(('disc',))
    F = automorphisms.mapChain([('linear', np.array([[0.5, 0.5]]))])
    report = rigidity.schwarzBalancedCheck(bidisc, disc, F)
    assert report['passed']
    assert report['derivative_max_norm'] <= 1 + 1e-12

def test_norm_equality_premise():
    ball = classical_domains.makeDomain(('ball', 2))
    rotation = automorphisms.mapChain([('linear', np.array([[0, 1j], [1, 0]]))])
    report = rigidity.keyLemmaScenario(ball, rotation)
    assert report['status'] == 'CERTIFIED-AUTOMORPHISM-PREMISE'
    assert report['samples'] == 200 and report['failures'] == 0

    report = rigidity.keyLemmaScenario(ball, scaleChain(0.5, 2))
    assert report['status'] == 'PREMISE-FAILED'
    assert report['max_deviation'] > 0.1

    with pytest.raises(ValueError):
        rigidity.keyLemmaScenario(('polydisc', 2), scaleChain(1, 2))

def test_orbit_convergence_disc():
    run = rigidity.orbitConvergenceRun(('disc',), np.array([1]))
    data = run['data']
    assert list(data['k']) == list(range(2, 401))
    assert run['reached_target']
    assert run['final_sup_distance'] <= 0.01
    assert run['max_k_times_s'] <= 3.1
    assert run['eventually_decreasing']

def test_orbit_convergence_type_I(rng):
    D = classical_domains.makeDomain(('I', 2, 2))
    p = classical_domains.referenceMaximalTripotent(D)
    run = rigidity.orbitConvergenceRun(D, p, k_values=[10, 100, 1000], grid_size=50)
    distances = run['data']['sup_distance'].values
    assert np.all(np.diff(distances) < 0)
    assert distances[-1] <= 0.01

def test_orbit_requires_shilov_point():
    with pytest.raises(ValueError):
        rigidity.orbitConvergenceRun(('polydisc', 2), np.array([1, 0.3]))
    with pytest.raises(ValueError):
        rigidity.orbitConvergenceRun(('disc',), np.array([1]), a0=np.array([1.0]))

def test_fit_grid_size():
    assert len(rigidity.fitGrid(('ball', 2))) == 32
    assert len(rigidity.fitGrid(('I', 2, 2))) == 64
    with pytest.raises(ValueError):
        rigidity.fitGrid(('I', 2, 2), size=10)

def test_rescaling_transvection_is_linear_isometry():
    ball = classical_domains.makeDomain(('ball', 2))
    g = automorphisms.transvection(ball, np.array([0.3, 0.2]))
    F = automorphisms.mapChain([('transvection', g)])
    run = rigidity.rescalingPipeline(ball, ball, F, np.array([1, 0]), k_values=[10, 50, 100, 200, 400])
    # L_k still moves by more than 1e-6 between the sampled k
    assert run.verdict == 'LINEAR_NOT_CONVERGED'
    assert run.converged_at is None
    assert 'not settled' in run.message
    assert max(row['rho'] for row in run.rows) <= 1e-8
    assert run.isometry_defect <= 1e-6
    assert run.final_L.shape == (2, 2)
    assert max(row['derivative_gap'] for row in run.rows) <= 1e-8
    np.testing.assert_allclose(run.derivatives[-1], run.final_L, atol=1e-8)

    df = run.toDataFrame()
    assert list(df['k']) == [10, 50, 100, 200, 400]
    data = run.toDict()
    assert data['verdict'] == 'LINEAR_NOT_CONVERGED'
    assert data['inputs']['D1'] == 'I(1,2)'
    assert data['inputs']['F'][0]['step'] == 'transvection'
    assert len(data['final_derivative']) == 2

def test_rescaling_rotation_converges():
    ball = classical_domains.makeDomain(('ball', 2))
    run = rigidity.rescalingPipeline(ball, ball, scaleChain(1j, 2), np.array([1, 0]), k_values=[10, 50, 100, 200])
    assert run.verdict == 'LINEAR_LIMIT'
    assert run.converged_at == 50
    np.testing.assert_allclose(run.final_L, 1j*np.eye(2), atol=1e-9)
    np.testing.assert_allclose(run.derivatives[-1], 1j*np.eye(2), atol=1e-9)

def test_rescaling_identity_converges():
    D = classical_domains.makeDomain(('I', 2, 2))
    p = classical_domains.referenceMaximalTripotent(D)
    run = rigidity.rescalingPipeline(D, D, automorphisms.mapChain(), p, k_values=[10, 20, 40])
    assert run.verdict == 'LINEAR_LIMIT'
    assert run.converged_at == 20
    np.testing.assert_allclose(run.final_L, np.eye(4), atol=1e-9)

def test_rescaling_single_step_is_not_converged():
    ball = classical_domains.makeDomain(('ball', 2))
    run = rigidity.rescalingPipeline(ball, ball, scaleChain(1j, 2), np.array([1, 0]), k_values=[100])
    assert run.verdict == 'LINEAR_NOT_CONVERGED'
    assert run.converged_at is None

@pytest.mark.parametrize('kind', [('ball', 2), ('I', 2, 2)])
def test_rescaling_random_transvections(kind, rng):
    D = classical_domains.makeDomain(kind)
    p = classical_domains.referenceMaximalTripotent(D)
    for i in range(20):
        a = classical_domains.randomPoint(D, rng, radius=0.9)
        F = automorphisms.mapChain([('transvection', automorphisms.transvection(D, a))])
        run = rigidity.rescalingPipeline(D, D, F, p, k_values=[100, 400], seed=i)
        assert run.verdict in ['LINEAR_LIMIT', 'LINEAR_NOT_CONVERGED']
        assert run.rows[-1]['rho'] <= 1e-5
        assert run.isometry_defect <= 1e-5

def test_rescaling_contraction_fails():
    ball = classical_domains.makeDomain(('ball', 2))
    run = rigidity.rescalingPipeline(ball, ball, scaleChain(0.5, 2), np.array([1, 0]), k_values=[10, 20, 40])
    assert run.verdict == 'FAILED'
    assert run.message

def test_rescaling_detects_maps_leaving_the_target():
    ball = classical_domains.makeDomain(('ball', 2))
    run = rigidity.rescalingPipeline(ball, ball, scaleChain(2, 2), np.array([1, 0]), k_values=[10, 20])
    assert run.verdict == 'NOT_SELF_MAP'
    assert run.rows == []

def test_truncated_prism():
    D = classical_domains.makeDomain(('I', 2, 2))
    W = np.array([[1, 0, 0, 0.5], [1, 0, 0, 0.4]])
    report = rigidity.truncatedPrismCheck(D, W, angles=8)
    assert report['passed']
    assert report['points'] == 2*8*4
    with pytest.raises(ValueError):
        rigidity.truncatedPrismCheck(D, W, levels=(0.5, 1.5))
    with pytest.raises(ValueError):
        rigidity.truncatedPrismCheck(D, W, s=1)

def test_truncated_prism_rejects_discs_outside_the_levels():
    D = classical_domains.makeDomain(('I', 2, 2))
    W = np.array([[1, 0, 0, 0.5]])
    # discs through the unit level reach radii 0.6 and 0.9 outside both the prism and 0.5*closure(D)
    report = rigidity.truncatedPrismCheck(D, W, levels=(1.0,), s=2, angles=8)
    assert not report['disc_absorption']
    assert not report['passed']
    assert report['circle_invariance'] and report['radial_closure'] and report['boundary_trace']
    report = rigidity.truncatedPrismCheck(D, W, levels=(0.5, 1.0), s=2, angles=8)
    assert report['disc_absorption']
    with pytest.raises(ValueError):
        rigidity.truncatedPrismCheck(D, np.array([1, 0, 0, 1]))

def test_schwarz_check_coordinate_squares():
    bidisc = classical_domains.makeDomain(('polydisc', 2))
    squares = automorphisms.mapChain([('holomorphic', (lambda z: z**2, None, 'squares'))])
    report = rigidity.schwarzBalancedCheck(bidisc, bidisc, squares)
    assert report['passed']
    assert report['derivative_max_norm'] <= 1e-6
    for row in report['levels']:
        assert row['max_norm'] <= row['r']**2 + 1e-12
