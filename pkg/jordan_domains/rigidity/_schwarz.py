import numpy as np

from .. import classical_domains

def _checkOrigin(F, n, tol=1e-10):
    image = F.apply(np.zeros(n, dtype=complex))
    if np.linalg.norm(image) > tol:
        raise ValueError('The map must fix the origin; |F(0)| = %.3e' % np.linalg.norm(image))

def schwarzBalancedCheck(D1, D2, F, grid=200, levels=(0.25, 0.5, 0.75, 0.9), seed=0, tol=1e-8):
    """
    Test the Schwarz lemma containments for F: D1 -> D2 with F(0) = 0.

    F'(0) must map the unit sphere of D1 into the closed unit ball of D2 and
    F must map the level r sphere of D1 into the closed r ball of D2.

    Parameters
    ==========
    D1, D2 : classical_domains.boundedSymmetricDomain
        Source and target domains
    F : automorphisms.mapChain
        Map evaluated on stacks of points
    grid : int
        Number of random directions on the unit sphere of D1
    levels : tuple
        Radii r at which F(r x) is measured

    Returns
    =======
    report : dict
        'passed', 'derivative_max_norm', 'levels' (one row per r),
        'monotone' and 'violations'
    """
    T1 = classical_domains._system(D1)
    T2 = classical_domains._system(D2)
    _checkOrigin(F, T1.dimension)

    rng = np.random.default_rng(seed)
    directions = classical_domains.randomBoundaryPoint(T1, rng, size=grid)
    violations = []

    L = F.derivative(np.zeros(T1.dimension, dtype=complex))
    derivative_norms = classical_domains.spectralNorm(T2, directions @ L.T)
    for index in np.where(derivative_norms > 1 + tol)[0]:
        violations.append({'test': 'derivative', 'point': directions[index],
                           'norm': float(derivative_norms[index])})

    rows = []
    for r in sorted(levels):
        norms = classical_domains.spectralNorm(T2, F.apply(r*directions))
        rows.append({'r': float(r), 'max_norm': float(np.max(norms))})
        for index in np.where(norms > r + tol)[0]:
            violations.append({'test': 'level', 'r': float(r), 'point': r*directions[index],
                               'norm': float(norms[index])})

    monotone = all(rows[i]['max_norm'] <= rows[i+1]['max_norm'] + 1e-10 for i in range(len(rows)-1))

    return {'passed': len(violations) == 0,
            'derivative_max_norm': float(np.max(derivative_norms)),
            'levels': rows,
            'monotone': monotone,
            'violations': violations}

def keyLemmaScenario(D, F, samples=None, n_samples=200, radius=0.9, seed=0, tol=1e-7):
    """
    Check the norm equality premise |F(z)| = |z| (spectral norms) on samples.

    Only the premise is verified: when it holds on an open set for an
    origin-preserving self-map of an irreducible domain, F is an automorphism.

    Returns
    =======
    report : dict
        'status' is 'CERTIFIED-AUTOMORPHISM-PREMISE' or 'PREMISE-FAILED'
    """
    T = classical_domains._system(D)
    if not classical_domains.domainIrreducible(T):
        raise ValueError('The norm equality premise is stated for irreducible domains; %s is not.' % T.label)
    _checkOrigin(F, T.dimension)

    if samples is None:
        rng = np.random.default_rng(seed)
        samples = classical_domains.randomPoint(T, rng, radius=radius, size=n_samples)
    samples = np.asarray(samples, dtype=complex)

    deviation = np.abs(classical_domains.spectralNorm(T, F.apply(samples)) - classical_domains.spectralNorm(T, samples))
    failures = int(np.sum(deviation > tol))
    status = 'CERTIFIED-AUTOMORPHISM-PREMISE' if failures == 0 else 'PREMISE-FAILED'
    return {'status': status,
            'samples': len(samples),
            'failures': failures,
            'max_deviation': float(np.max(deviation))}
