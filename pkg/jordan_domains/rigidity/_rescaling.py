import numpy as np
import pandas as pd
from scipy import linalg

from .. import classical_domains
from .. import boundary_geometry
from ..automorphisms import transvection, mapChain, mapAtoB
from .._methods import complexArrayToList

def compactGrid(D, radius, size, seed=0):
    """
    Points of the compact set radius*closure(D): half inside, half on its
    boundary sphere.
    """
    T = classical_domains._system(D)
    rng = np.random.default_rng(seed)
    inner = classical_domains.randomPoint(T, rng, radius=radius, size=size//2)
    outer = radius*classical_domains.randomBoundaryPoint(T, rng, size=size - size//2)
    return np.concatenate([inner, outer])

def fitGrid(D, radius=0.5, size=None, seed=0):
    """
    Interior grid for the linear fits, with at least 4n^2 points.
    """
    T = classical_domains._system(D)
    if size is None:
        size = max(4*T.dimension**2, 32)
    if size < 4*T.dimension**2:
        raise ValueError('Linear fits need at least %s points, got %s' % (4*T.dimension**2, size))
    rng = np.random.default_rng(seed)
    return classical_domains.randomPoint(T, rng, radius=radius, size=size)

def _checkShilov(T, p):
    shilov, evidence = boundary_geometry.isShilov(T, p, samples=10)
    if not shilov:
        raise ValueError('p must be a Shilov boundary point (stratum rank %s, maximal %s)'
                         % (evidence['stratum_rank'], evidence['maximal_tripotent']))

def orbitConvergenceRun(D, p, a0=None, k_max=400, k_values=None, compact_radius=0.5, grid_size=200,
                        target=0.01, seed=0, verbose=False):
    """
    Sup distance on a compact grid between phi_k, the chain sending a0 to
    a_k = (1 - 1/k)p, and the constant map p.

    Parameters
    ==========
    D : classical_domains.boundedSymmetricDomain
        Domain
    p : numpy.ndarray
        Shilov boundary point
    a0 : numpy.ndarray
        Interior starting point (origin by default)
    k_max : int
        Last index (used when k_values is None; k runs over 2..k_max)
    compact_radius : float
        The grid lies in compact_radius*closure(D)
    target : float
        Reported through 'reached_target' for the last k

    Returns
    =======
    run : dict
        'data' (pandas.DataFrame with k and sup_distance), 'reached_target',
        'final_sup_distance', 'max_k_times_s' (over k >= 50) and
        'eventually_decreasing'
    """
    T = classical_domains._system(D)
    p = np.asarray(p, dtype=complex)
    _checkShilov(T, p)
    if a0 is None:
        a0 = np.zeros(T.dimension, dtype=complex)
    a0 = np.asarray(a0, dtype=complex)
    if classical_domains.spectralNorm(T, a0) >= 1:
        raise ValueError('a0 must be an interior point.')
    if k_values is None:
        k_values = range(2, k_max+1)
    k_values = sorted(int(k) for k in k_values)

    grid = compactGrid(T, compact_radius, grid_size, seed)
    distances = []
    for k in k_values:
        phi = mapAtoB(T, a0, (1 - 1/k)*p)
        distances.append(float(np.max(np.linalg.norm(phi.apply(grid) - p, axis=1))))
        if verbose and k % 50 == 0:
            print('Orbit step k=%s sup distance %.6g' % (k, distances[-1]))

    data = pd.DataFrame({'k': k_values, 'sup_distance': distances})
    tail = data[data['k'] >= 50]
    half = data.iloc[len(data)//2:]['sup_distance'].values
    return {'data': data,
            'final_sup_distance': distances[-1],
            'reached_target': bool(distances[-1] <= target),
            'max_k_times_s': float(np.max(tail['k']*tail['sup_distance'])) if len(tail) else None,
            'eventually_decreasing': bool(np.all(np.diff(half) <= 1e-12))}

class rescalingRun:
    """
    Record of a rescaling pipeline run.

    Attributes
    ==========
    rows : list
        One dictionary per k: k, rho (max linear-fit residual), delta_L,
        sup_distance (of g_{a_k} to p on the compact grid), derivative_gap
        (spectral distance between L_k and G_k'(0)), norm_a, norm_b
    derivatives : list
        Jacobians G_k'(0) computed by the chain rule
    final_L : numpy.ndarray
        Last fitted linear map
    verdict : str
        'LINEAR_LIMIT', 'LINEAR_NOT_CONVERGED', 'FAILED' or 'NOT_SELF_MAP'
    converged_at : int
        First k from which rho and the change of L stay within tolerance up
        to the last k; None when the last step misses it
    """

    def __init__(self, D1, D2, F, p, k_values):
        self.D1 = D1
        self.D2 = D2
        self.F = F
        self.p = p
        self.k_values = k_values
        self.rows = []
        self.linear_maps = []
        self.derivatives = []
        self.final_L = None
        self.verdict = None
        self.converged_at = None
        self.isometry_defect = None
        self.message = ''

    def toDataFrame(self):
        return pd.DataFrame(self.rows)

    def toDict(self):
        return {'schema': 1,
                'inputs': {'D1': self.D1.label, 'D2': self.D2.label,
                           'p': complexArrayToList(self.p),
                           'F': self.F.describe(),
                           'k_values': list(self.k_values)},
                'rows': self.rows,
                'final_L': None if self.final_L is None else complexArrayToList(self.final_L),
                'final_derivative': complexArrayToList(self.derivatives[-1]) if self.derivatives else None,
                'verdict': self.verdict,
                'converged_at': self.converged_at,
                'isometry_defect': self.isometry_defect,
                'message': self.message}

def _nonexpansive(T_in, T_out, L, samples, tol):
    norms = classical_domains.spectralNorm(T_out, samples @ L.T)
    return float(np.max(norms)) <= 1 + tol, norms

def rescalingPipeline(D1, D2, F, p, k_max=400, k_values=None, fit_points=None, fit_radius=0.5,
                      compact_radius=0.5, tol=1e-6, linear_tol=1e-5, samples=200, seed=0, verbose=False):
    """
    Rescale F near the Shilov point p and test whether the rescaled maps are
    linear.

    For each k, a_k = (1 - 1/k)p, b_k = F(a_k) and
    G_k = g_{b_k}^(-1) o F o g_{a_k}, which fixes the origin. A complex
    linear map L_k is fitted to G_k on the fit grid by least squares and
    rho_k is the largest residual.

    Parameters
    ==========
    D1, D2 : classical_domains.boundedSymmetricDomain
        Source and target domains
    F : automorphisms.mapChain
        Candidate map D1 -> D2
    p : numpy.ndarray
        Shilov point of D1
    k_values : list
        Indexes to run (2..k_max by default)
    fit_points : numpy.ndarray
        Fit grid; at least 4n^2 interior points of radius fit_radius by default
    tol : float
        Convergence threshold for rho_k and for the change of L_k
    linear_tol : float
        Threshold on the final rho and on the nonexpansion checks of L and
        L^(-1) for a LINEAR_LIMIT verdict

    The verdict is LINEAR_LIMIT when the final fit is linear within
    linear_tol, L is a spectral isometry onto D2 and the run converged;
    LINEAR_NOT_CONVERGED when only the convergence test fails.

    Returns
    =======
    run : rescalingRun
    """
    D1 = classical_domains.makeDomain(D1)
    D2 = classical_domains.makeDomain(D2)
    T1, T2 = D1.system, D2.system
    p = np.asarray(p, dtype=complex)
    _checkShilov(T1, p)

    if k_values is None:
        k_values = range(2, k_max+1)
    k_values = sorted(int(k) for k in k_values)
    if fit_points is None:
        fit_points = fitGrid(T1, fit_radius, seed=seed)
    fit_points = np.asarray(fit_points, dtype=complex)
    compact = compactGrid(T1, compact_radius, 64, seed)

    run = rescalingRun(D1, D2, F, p, k_values)
    origin = np.zeros(T1.dimension, dtype=complex)
    previous = None
    for k in k_values:
        a = (1 - 1/k)*p
        b = F.apply(a)
        norm_b = classical_domains.spectralNorm(T2, b)
        if norm_b >= 1:
            run.verdict = 'NOT_SELF_MAP'
            run.message = 'F(a_k) leaves the target domain at k=%s (spectral norm %.12g)' % (k, norm_b)
            return run

        ga = transvection(T1, a)
        G = mapChain([('transvection', ga)] + list(F.steps) + [('inverse', transvection(T2, b))])
        values = G.apply(fit_points)
        Lt = linalg.lstsq(fit_points, values)[0]
        L = Lt.T
        derivative = G.derivative(origin)
        rho = float(np.max(np.linalg.norm(values - fit_points @ Lt, axis=1)))
        delta = None if previous is None else float(np.linalg.norm(L - previous, 2))
        sup_distance = float(np.max(np.linalg.norm(ga.apply(compact) - p, axis=1)))

        run.rows.append({'k': k, 'rho': rho, 'delta_L': delta, 'sup_distance': sup_distance,
                         'derivative_gap': float(np.linalg.norm(L - derivative, 2)),
                         'norm_a': 1 - 1/k, 'norm_b': float(norm_b)})
        run.linear_maps.append(L)
        run.derivatives.append(derivative)
        if verbose:
            print('Running rescaling step k=%s rho=%.3e' % (k, rho))
        previous = L

    # convergence must hold from converged_at up to the last k
    for row in reversed(run.rows):
        if row['delta_L'] is None or row['rho'] > tol or row['delta_L'] > tol:
            break
        run.converged_at = row['k']

    run.final_L = previous
    final_rho = run.rows[-1]['rho']
    if final_rho > linear_tol:
        run.verdict = 'FAILED'
        run.message = 'Rescaled maps are not linear (rho=%.3e)' % final_rho
        return run

    if T1.dimension != T2.dimension or abs(np.linalg.det(run.final_L)) < 1e-12:
        run.verdict = 'FAILED'
        run.message = 'The limit linear map is singular.'
        return run

    rng = np.random.default_rng(seed)
    x = classical_domains.randomBoundaryPoint(T1, rng, size=samples)
    y = classical_domains.randomBoundaryPoint(T2, rng, size=samples)
    forward, norms = _nonexpansive(T1, T2, run.final_L, x, linear_tol)
    backward = _nonexpansive(T2, T1, np.linalg.inv(run.final_L), y, linear_tol)[0]
    run.isometry_defect = float(np.max(np.abs(norms - 1)))

    if not (forward and backward):
        run.verdict = 'FAILED'
        run.message = 'The limit linear map does not send D1 onto D2.'
    elif run.converged_at is None:
        last = run.rows[-1]['delta_L']
        run.verdict = 'LINEAR_NOT_CONVERGED'
        run.message = ('Rescaled maps are linear isometries but L_k has not settled within tol=%.1e '
                       '(last change %s)' % (tol, 'n/a' if last is None else '%.3e' % last))
    else:
        run.verdict = 'LINEAR_LIMIT'
    return run

def _inPrism(T, point, W_patch, levels, tol):
    r = classical_domains.spectralNorm(T, point)
    if r < levels[0] - tol or r > levels[-1] + tol:
        return False
    unit = point/r
    phases = np.exp(1j*np.angle(np.conj(W_patch) @ unit))
    return bool(np.min(np.linalg.norm(phases[:, None]*W_patch - unit, axis=1)) <= 1e-8)

def truncatedPrismCheck(D, W_patch, levels=(0.25, 0.5, 0.75, 1.0), angles=16, s=4, tol=1e-9):
    """
    Build V = {t exp(i theta) w} over a patch W of rank-one stratum points
    and check circle invariance, the boundary trace at t = 1, radial
    closure, and disc absorption.

    Disc absorption asks every disc {zeta z : |zeta| <= 1} through a point z
    of V to lie in (1 - 1/s)closure(D) or in the prism
    V' = {r exp(i phi) w : w in W, min(levels) <= r <= max(levels)}. Each
    disc is sampled on the radii 0.3, 0.6, 0.9 and 1 and on the radii that
    land on the levels.

    Returns
    =======
    report : dict
        One boolean per property, 'passed' and 'points'
    """
    T = classical_domains._system(D)
    W_patch = np.atleast_2d(np.asarray(W_patch, dtype=complex))
    levels = sorted(levels)
    if not all(0 < t <= 1 for t in levels):
        raise ValueError('Prism levels must lie in (0, 1].')
    if s <= 1:
        raise ValueError('The shrinking factor s must be larger than 1, got %s' % s)

    for w in W_patch:
        c = boundary_geometry.classifyBoundaryPoint(T, w, tol)
        if c.stratum_rank != 1:
            raise ValueError('Prism base points must lie in the rank-one stratum (got rank %s)' % c.stratum_rank)

    thetas = 2*np.pi*np.arange(angles)/angles
    circle_invariance = True
    boundary_trace = True
    radial_closure = True
    disc_absorption = True
    points = 0

    shrunken = 1 - 1/s
    for w in W_patch:
        base_rank = boundary_geometry.classifyBoundaryPoint(T, w, tol).stratum_rank
        for theta in thetas:
            rotated = np.exp(1j*theta)*w
            if boundary_geometry.classifyBoundaryPoint(T, rotated, tol).stratum_rank != base_rank:
                circle_invariance = False
            for t in levels:
                z = t*rotated
                points += 1
                norm = classical_domains.spectralNorm(T, z)
                if abs(norm - t) > tol:
                    radial_closure = False
                location = classical_domains.contains(T, z, tol)
                if (t == 1) != (location == 'Boundary'):
                    boundary_trace = False

                radii = sorted(set([0.3, 0.6, 0.9, 1.0] + [l/t for l in levels if l <= t]))
                zetas = np.concatenate([r*np.exp(1j*thetas) for r in radii])
                disc = zetas[:, None]*z[None, :]
                inside = classical_domains.spectralNorm(T, disc) <= shrunken + tol
                for point in disc[~inside]:
                    if not _inPrism(T, point, W_patch, levels, tol):
                        disc_absorption = False

    return {'circle_invariance': circle_invariance,
            'boundary_trace': boundary_trace,
            'radial_closure': radial_closure,
            'disc_absorption': disc_absorption,
            'passed': circle_invariance and boundary_trace and radial_closure and disc_absorption,
            'points': points}
