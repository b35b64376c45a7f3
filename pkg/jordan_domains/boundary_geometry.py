import numpy as np
import pandas as pd
from scipy import linalg
from multiprocessing import Pool, cpu_count

from . import jts_core
from . import classical_domains
from ._exceptions import DegeneracyError, NumericalBreakdownError, SearchExhaustedError, VerificationError

class boundaryClassification:
    """
    Boundary point written as x = e + v with e a tripotent and v in V0(e) of
    spectral norm < 1.

    Attributes
    ==========
    e : numpy.ndarray
        Tripotent part
    v : numpy.ndarray
        Part in the Pierce 0-space of e
    stratum_rank : int
        Rank of e
    interior_norm : float
        Spectral norm of v
    """

    def __init__(self, e, v, stratum_rank, interior_norm):
        self.e = e
        self.v = v
        self.stratum_rank = stratum_rank
        self.interior_norm = interior_norm

    def __repr__(self):
        return 'boundaryClassification(stratum_rank=%s, interior_norm=%.6g)' % (self.stratum_rank, self.interior_norm)

def classifyBoundaryPoint(D, x, tol=1e-9):
    """
    Split a boundary point into its tripotent part and its Pierce 0-space part.

    Spectral values >= 1 - tol/10 are assigned to the tripotent, values
    <= 1 - tol to v; values in between are rejected.

    Parameters
    ==========
    D : classical_domains.boundedSymmetricDomain
        Domain
    x : numpy.ndarray
        Boundary point
    tol : float
        Boundary tolerance

    Returns
    =======
    classification : boundaryClassification
    """
    T = classical_domains._system(D)
    x = np.asarray(x, dtype=complex)
    location = classical_domains.contains(T, x, tol)
    if location != 'Boundary':
        raise ValueError('Point is not on the boundary (%s, spectral norm %.12g)'
                         % (location, classical_domains.spectralNorm(T, x)))

    sd = classical_domains.decompose(T, x, tol=tol)
    e = np.zeros(T.dimension, dtype=complex)
    v = np.zeros(T.dimension, dtype=complex)
    for l, f in zip(sd.lambdas, sd.frame):
        if l >= 1 - tol/10:
            e += f
        elif l <= 1 - tol:
            v += l*f
        else:
            raise DegeneracyError('Spectral value %.15g is too close to 1 to classify (tol=%s)' % (l, tol))

    leak = np.linalg.norm(jts_core.operatorD(T, e, e) @ v)
    if leak > 10*tol*max(1.0, np.linalg.norm(v)):
        raise NumericalBreakdownError('v is not in V0(e): |D(e,e)v| = %.3e' % leak)

    rank = classical_domains.tripotentRank(T, e, tol=max(tol, 1e-8))
    interior_norm = classical_domains.spectralNorm(T, v) if np.linalg.norm(v) > 0 else 0.0
    return boundaryClassification(e, v, rank, interior_norm)

def isShilov(D, x, tol=1e-9, samples=200, seed=0):
    """
    Decide whether x belongs to the Shilov boundary (x is a maximal tripotent).

    The evidence dictionary compares the trace-form norm of x with the common
    trace-form norm of the maximal tripotents, and reports the largest value
    found on random boundary samples (which must not exceed it).

    Returns
    =======
    shilov : bool
    evidence : dict
    """
    T = classical_domains._system(D)
    c = classifyBoundaryPoint(T, x, tol)
    maximal = classical_domains.isMaximal(T, c.e, max(tol, 1e-8))
    shilov = bool(maximal and np.linalg.norm(c.v) <= tol)

    radius = classical_domains.shilovRadius(T)
    rng = np.random.default_rng(seed)
    sample = classical_domains.randomBoundaryPoint(T, rng, size=samples)
    evidence = {'trace_norm': float(jts_core.traceFormNorm(T, x)),
                'shilov_radius': radius,
                'sample_max_trace_norm': float(np.max(jts_core.traceFormNorm(T, sample))),
                'stratum_rank': c.stratum_rank,
                'maximal_tripotent': bool(maximal)}
    evidence['at_maximal_distance'] = bool(abs(evidence['trace_norm'] - radius) <= 1e-6*radius)
    return shilov, evidence

def arcComponentBasis(D, x, tol=1e-9):
    """
    Basis of V0(e) for the classification x = e + v. The holomorphic arc
    component through x is {e + w : w in V0(e), spectral norm of w < 1};
    the basis is empty exactly at Shilov points.
    """
    T = classical_domains._system(D)
    c = classifyBoundaryPoint(T, x, tol)
    pd = classical_domains.pierce(T, c.e, max(tol, 1e-8))
    return list(pd.bases[0])

def discInBoundaryCheck(D, x, samples=16, radius=None, tol=1e-9):
    """
    Sample discs x + zeta*w, w in V0(e), and check they stay on the boundary.

    Parameters
    ==========
    samples : int
        Angles per circle
    radius : float
        Outer circle radius; defaults to half the distance from v to the unit
        sphere of V0(e).

    Returns
    =======
    report : dict
        'discs' (False for Shilov points), 'passed', 'checked', 'failures'
    """
    T = classical_domains._system(D)
    x = np.asarray(x, dtype=complex)
    c = classifyBoundaryPoint(T, x, tol)
    basis = classical_domains.pierce(T, c.e, max(tol, 1e-8)).bases[0]
    if len(basis) == 0:
        return {'discs': False, 'passed': True, 'checked': 0, 'failures': [],
                'message': 'no discs: x is a Shilov point'}

    if radius is None:
        radius = (1 - c.interior_norm)/2

    thetas = 2*np.pi*np.arange(samples)/samples
    failures = []
    checked = 0
    for w in basis:
        w = w/classical_domains.spectralNorm(T, w)
        for r in (radius/2, radius):
            zeta = r*np.exp(1j*thetas)
            points = x[None, :] + zeta[:, None]*w[None, :]
            labels = classical_domains.contains(T, points, tol)
            checked += len(points)
            for point, label in zip(points, labels):
                if label != 'Boundary':
                    failures.append({'point': point, 'location': str(label)})
    return {'discs': True, 'passed': len(failures) == 0, 'checked': checked, 'failures': failures}

def tripotentTangentSpace(D, e, tol=1e-9):
    """
    Real basis (rows) of the tangent space iA(e) + V1(e) to the manifold of
    tripotents at e, where A(e) = {x in V2(e) : Q(e)x = x}.
    """
    T = classical_domains._system(D)
    e = np.asarray(e, dtype=complex)
    pd = classical_domains.pierce(T, e, tol)

    V2 = pd.bases[2]
    real_basis = np.concatenate([V2, 1j*V2])
    images = jts_core.applyQ(T, e[None, :], real_basis) - real_basis
    R = np.concatenate([np.real(images), np.imag(images)], axis=1).T
    kernel = linalg.null_space(R, rcond=1e-8)
    A = kernel.T @ real_basis

    V1 = pd.bases[1]
    return np.concatenate([1j*A, V1, 1j*V1]).reshape(-1, T.dimension)

def stratumDimension(D, e, tol=1e-9):
    """
    Real dimension of the boundary stratum through the tripotent e.
    """
    T = classical_domains._system(D)
    pd = classical_domains.pierce(T, e, tol)
    return len(tripotentTangentSpace(T, e, tol)) + 2*pd.dimensions[0]

class peakFunction:
    """
    Peak function h(z) = (1 + tf(z, p)/tf(p, p))/2 at a Shilov point p.

    Attributes
    ==========
    p : numpy.ndarray
        Shilov point
    functional : numpy.ndarray
        Vector l with l @ z = tf(z, p)/tf(p, p)
    """

    def __init__(self, D, p, tol=1e-9, verify=True, samples=10000, exclusion=1e-2, margin=1e-6, seed=0):

        self.system = classical_domains._system(D)
        self.p = np.asarray(p, dtype=complex)
        shilov, evidence = isShilov(self.system, self.p, tol, samples=10)
        if not shilov:
            raise ValueError('Peak functions are built at Shilov points only (stratum rank %s, maximal %s)'
                             % (evidence['stratum_rank'], evidence['maximal_tripotent']))

        G = jts_core.traceFormMatrix(self.system)
        norm2 = float(np.real(jts_core.traceForm(self.system, self.p, self.p)))
        self.functional = G.T @ np.conj(self.p)/norm2

        if verify:
            self.verify(samples=samples, exclusion=exclusion, margin=margin, seed=seed)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        return 0.5*(1 + z @ self.functional)

    def verify(self, samples=10000, exclusion=1e-2, margin=1e-6, seed=0):
        """
        Check |h| <= 1 - margin on random points of the closed domain outside
        a ball of radius ``exclusion`` around p. Half the sample lies on the
        boundary. Raises VerificationError carrying the worst sample.
        """
        rng = np.random.default_rng(seed)
        half = samples//2
        points = np.concatenate([classical_domains.randomPoint(self.system, rng, size=samples - half),
                                 classical_domains.randomBoundaryPoint(self.system, rng, size=half)])
        points = points[np.linalg.norm(points - self.p, axis=1) >= exclusion]
        values = np.abs(self.evaluate(points))
        worst = int(np.argmax(values))
        if values[worst] > 1 - margin:
            raise VerificationError('Peak function reaches |h| = %.12g away from p' % values[worst],
                                    sample=points[worst])
        return float(values[worst])

def peakEval(pf, z):
    return pf.evaluate(z)

def _scanChunk(arguments):
    T, w, p, thetas = arguments
    points = np.exp(1j*thetas)[:, None]*w[None, :]
    B = jts_core.bergmanOperator(T, points, p)
    return np.abs(np.linalg.det(B))

def scanBergmanDeterminant(D, w, p, grid_size=720, cpus=1, verbose=False):
    """
    Evaluate |det B(exp(i theta) w, p)| on a uniform grid of theta in [0, 2 pi).

    Parameters
    ==========
    D : classical_domains.boundedSymmetricDomain
        Domain
    w : numpy.ndarray
        Non-zero point defining the circle
    p : numpy.ndarray
        Boundary point
    grid_size : int
        Number of angles
    cpus : int
        Worker processes; None uses all cores. Chunks are reassembled in
        theta order.

    Returns
    =======
    scan : dict
        'min_abs', 'argmin_theta' (smallest theta on ties) and 'data', a
        pandas.DataFrame with columns theta and abs_det_B.
    """
    T = classical_domains._system(D)
    w = np.asarray(w, dtype=complex)
    p = np.asarray(p, dtype=complex)
    if np.linalg.norm(w) == 0:
        raise ValueError('The circle needs a non-zero point w.')
    if classical_domains.contains(T, p, 1e-8) != 'Boundary':
        raise ValueError('p must be a boundary point.')
    if grid_size < 1:
        raise ValueError('grid_size must be positive, got %s' % grid_size)

    thetas = 2*np.pi*np.arange(grid_size)/grid_size

    if cpus == None:
        cpus = cpu_count()

    if cpus > 1:
        chunks = np.array_split(thetas, cpus)
        jobs = [(T, w, p, chunk) for chunk in chunks if len(chunk)]
        if verbose:
            print('Scanning %s angles in %s chunks' % (grid_size, len(jobs)))
        # workers are terminated even when a chunk raises
        with Pool(cpus) as pool:
            results = pool.map(_scanChunk, jobs)
        values = np.concatenate(results)
    else:
        values = _scanChunk((T, w, p, thetas))

    index = int(np.argmin(values))
    data = pd.DataFrame({'theta': thetas, 'abs_det_B': values})
    if verbose:
        print('Minimum |det B| = %.6g at theta = %.6f' % (values[index], thetas[index]))
    return {'min_abs': float(values[index]), 'argmin_theta': float(thetas[index]), 'data': data}

def findGoodCircle(D, z0, p, search_radius=0.1, floor=1e-3, budget=200, grid_size=360, seed=0,
                   tol=1e-9, verbose=False):
    """
    Find w in the dense boundary stratum whose circle {zeta w} keeps
    |det B(zeta w, p)| >= floor, starting from z0.

    z0 itself is tried first. Candidate k then moves the tripotent part of z0
    to a primitive tripotent of e + eps*xi and replaces v by the V0 projection
    of shrink*(v + eps*eta), capped below spectral norm one. The radius eps
    grows from search_radius to 2 and shrink falls from 1 to 0 over the
    budget, so late candidates are close to random primitive tripotents.

    Parameters
    ==========
    D : classical_domains.boundedSymmetricDomain
        Domain
    z0 : numpy.ndarray
        Boundary point of rank one
    p : numpy.ndarray
        Boundary point defining B(., p)
    search_radius : float
        Perturbation radius of the first candidate
    floor : float
        Required minimum of |det B| on the circle
    budget : int
        Number of candidates

    Returns
    =======
    w : numpy.ndarray

    Raises SearchExhaustedError when ``budget`` candidates fail.
    """
    T = classical_domains._system(D)
    z0 = np.asarray(z0, dtype=complex)
    if floor <= 0:
        raise ValueError('floor must be positive, got %s' % floor)
    if search_radius <= 0:
        raise ValueError('search_radius must be positive, got %s' % search_radius)

    c = classifyBoundaryPoint(T, z0, tol)
    if c.stratum_rank != 1:
        raise ValueError('Starting point must lie in the rank-one stratum (got rank %s)' % c.stratum_rank)

    scan = scanBergmanDeterminant(T, z0, p, grid_size=grid_size)
    if scan['min_abs'] >= floor:
        return z0

    rng = np.random.default_rng(seed)
    best = scan['min_abs']
    for attempt in range(budget):
        fraction = attempt/max(budget - 1, 1)
        radius = search_radius + max(2.0 - search_radius, 0.0)*fraction
        eps = radius*rng.uniform(0.5, 1.0)
        shrink = 1.0 - fraction
        xi = rng.standard_normal(T.dimension) + 1j*rng.standard_normal(T.dimension)
        eta = rng.standard_normal(T.dimension) + 1j*rng.standard_normal(T.dimension)
        xi = eps*xi/np.linalg.norm(xi)
        eta = eps*eta/np.linalg.norm(eta)

        try:
            e = classical_domains.decompose(T, c.e + xi).frame[0]
            if classical_domains.tripotentRank(T, e, tol=1e-6) != 1:
                continue
            P0 = classical_domains.pierce(T, e, 1e-8).projector(0)
        except ValueError:
            continue
        v = shrink*(P0 @ (c.v + eta))
        if np.linalg.norm(v) > 0:
            norm = classical_domains.spectralNorm(T, v)
            if norm >= 0.99:
                v = 0.99*v/norm
        w = e + v

        scan = scanBergmanDeterminant(T, w, p, grid_size=grid_size)
        best = max(best, scan['min_abs'])
        if scan['min_abs'] >= floor:
            if verbose:
                print('Good circle found after %s perturbations (min |det B| = %.6g)' % (attempt+1, scan['min_abs']))
            return w

    raise SearchExhaustedError('No circle with min |det B| >= %s found in %s attempts (best %.3e)'
                               % (floor, budget, best))
