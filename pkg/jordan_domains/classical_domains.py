import numpy as np
from scipy import linalg

from . import jts_core
from ._exceptions import DegeneracyError, NumericalBreakdownError

class boundedSymmetricDomain:
    """
    Classical bounded symmetric domain realized as the open unit ball of the
    spectral norm of a triple system.

    Attributes
    ==========
    system : jts_core.tripleSystem
        Triple system of the domain
    rank : int
        Rank of the triple system
    dimension : int
        Complex dimension
    """

    def __init__(self, system):
        self.system = system
        self.dimension = system.dimension
        self.rank = domainRank(system)

    @property
    def label(self):
        return self.system.label

    @property
    def irreducible(self):
        if self.system.kind == 'product':
            return len(self.system.factors) == 1 and domainIrreducible(self.system.factors[0])
        return domainIrreducible(self.system)

    def __repr__(self):
        return 'boundedSymmetricDomain(%s, n=%s, rank=%s)' % (self.label, self.dimension, self.rank)

class spectralDecomposition:
    """
    Spectral decomposition x = lambdas[0]*frame[0] + ... with strictly
    decreasing positive lambdas and pairwise orthogonal tripotents.

    Attributes
    ==========
    lambdas : numpy.ndarray
        Spectral values, shape (s,)
    frame : numpy.ndarray
        Tripotents as rows, shape (s, n)
    """

    def __init__(self, lambdas, frame, dimension):
        self.lambdas = np.asarray(lambdas, dtype=float)
        self.frame = np.asarray(frame, dtype=complex).reshape(len(self.lambdas), dimension)

    @property
    def s(self):
        return len(self.lambdas)

    def reconstruct(self):
        return self.lambdas @ self.frame

class pierceDecomposition:
    """
    Eigenspaces V0, V1, V2 of D(e, e) for a tripotent e. Bases are trace-form
    orthonormal and stored as rows.

    Attributes
    ==========
    e : numpy.ndarray
        The tripotent
    bases : dict
        {0: array (d0, n), 1: array (d1, n), 2: array (d2, n)}
    eigenvalues : numpy.ndarray
        Raw eigenvalues of D(e, e) before clustering
    """

    def __init__(self, system, e, bases, eigenvalues):
        self.system = system
        self.e = e
        self.bases = bases
        self.eigenvalues = eigenvalues

    @property
    def dimensions(self):
        return {j: self.bases[j].shape[0] for j in (0, 1, 2)}

    def projector(self, j):
        """
        Trace-form orthogonal projector onto V_j (zero for j outside {0, 1, 2}).
        """
        n = self.system.dimension
        if j not in self.bases:
            return np.zeros((n, n), dtype=complex)
        C = self.bases[j].T
        return C @ np.conj(C.T) @ jts_core.traceFormMatrix(self.system)

def domainRank(T):
    """
    Rank of a classical triple system.
    """
    if T.kind == 'I':
        return min(T.parameters)
    elif T.kind == 'II':
        return T.parameters[0]//2
    elif T.kind == 'III':
        return T.parameters[0]
    elif T.kind == 'IV':
        return 2 if T.parameters[0] >= 2 else 1
    return sum(domainRank(f) for f in T.factors)

def domainIrreducible(T):
    # IV(2) is a bidisc in rotated coordinates
    if T.kind == 'product':
        return False
    if T.kind == 'IV':
        return T.parameters[0] != 2
    return True

def makeDomain(kind):
    """
    Build a classical domain.

    Parameters
    ==========
    kind : tuple or jts_core.tripleSystem
        Either a triple system or a tuple: ('I', p, q), ('II', m), ('III', m),
        ('IV', m), ('ball', n), ('disc',), ('polydisc', n) or
        ('product', [kind, kind, ...]).

    Returns
    =======
    domain : boundedSymmetricDomain
    """
    if isinstance(kind, boundedSymmetricDomain):
        return kind
    if isinstance(kind, jts_core.tripleSystem):
        return boundedSymmetricDomain(kind)
    return boundedSymmetricDomain(_systemFromKind(kind))

def _systemFromKind(kind):

    if isinstance(kind, jts_core.tripleSystem):
        return kind
    if isinstance(kind, boundedSymmetricDomain):
        return kind.system
    if not isinstance(kind, (tuple, list)) or len(kind) == 0:
        raise ValueError('Domain kind %s not understood.' % (kind,))

    name = kind[0]
    arguments = list(kind[1:])
    try:
        if name == 'I':
            return jts_core.typeI(*arguments)
        elif name == 'II':
            return jts_core.typeII(*arguments)
        elif name == 'III':
            return jts_core.typeIII(*arguments)
        elif name == 'IV':
            return jts_core.typeIV(*arguments)
        elif name == 'ball':
            return jts_core.ball(*arguments)
        elif name == 'disc':
            return jts_core.disc()
        elif name == 'polydisc':
            return jts_core.polydisc(*arguments)
        elif name == 'product':
            factors = arguments[0] if len(arguments) == 1 else arguments
            return jts_core.productSystem([_systemFromKind(f) for f in factors])
    except TypeError:
        raise ValueError('Wrong number of parameters for domain kind %s' % (kind,))
    raise ValueError('Domain kind %s not valid. Valid options are: I II III IV ball disc polydisc product' % name)

def _system(D):
    return _systemFromKind(D)

def _clusters(values, gap):
    """
    Group indexes of descending values whose neighbours are within gap.
    """
    groups = []
    for i, v in enumerate(values):
        if groups and values[groups[-1][-1]] - v <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups

def _matrixPairs(T, x, tol, merge_gap):

    X = jts_core.vectorToMatrix(T, x)
    U, s, Vh = np.linalg.svd(X)
    s_max = s[0]
    keep = [i for i in range(len(s)) if s[i] > tol*s_max]
    pairs = []
    for group in _clusters(s[keep], merge_gap*s_max):
        idx = [keep[i] for i in group]
        E = U[:, idx] @ Vh[idx, :]
        # Types II and III must stay in their chart after merging
        if T.kind == 'II':
            defect = np.linalg.norm(E + E.T)
        elif T.kind == 'III':
            defect = np.linalg.norm(E - E.T)
        else:
            defect = 0.0
        if defect > 1e-6*max(1.0, np.linalg.norm(E)):
            raise DegeneracyError('Merged singular vectors of %s leave the chart (defect %.3e); '
                                  'singular values %s are too close to separate.' % (T.label, defect, s[idx]))
        pairs.append((float(np.mean(s[idx])), jts_core.matrixToVector(T, E)))
    return pairs

def _typeIVValues(x):
    """
    Spectral values of Type IV points along the last axis.

    The gap between the two values comes from the wedge of the real and
    imaginary parts, so points close to a maximal tripotent keep full
    relative accuracy in the smaller value.

    Parameters
    ==========
    x : numpy.ndarray
        Points of shape (..., n).

    Returns
    =======
    l1, l2 : numpy.ndarray
        Largest and smallest spectral values.
    gap : numpy.ndarray
        l1 - l2, computed without cancellation.
    """

    x = np.asarray(x, dtype=complex)
    u = np.real(x)
    v = np.imag(x)
    W = u[..., :, None]*v[..., None, :] - v[..., :, None]*u[..., None, :]
    wedge2 = np.sum(W**2, axis=(-2, -1))/2
    norm2 = np.sum(u**2 + v**2, axis=-1)
    t = np.abs(np.sum(x*x, axis=-1))
    upper = norm2 + t
    a = np.sqrt(upper)
    # norm2 - t = 4 wedge2/(norm2 + t)
    gap = np.sqrt(np.divide(4*wedge2, upper, out=np.zeros_like(upper), where=upper > 0))
    l1 = (a + gap)/2
    l2 = np.divide(t, a + gap, out=np.zeros_like(upper), where=(a + gap) > 0)
    return l1, l2, gap

def _typeIVPairs(T, x, tol, merge_gap):

    norm2 = float(np.real(np.vdot(x, x)))
    xx = np.sum(x*x)
    t = abs(xx)
    l1, l2, gap = (float(value) for value in _typeIVValues(x))

    if l2 <= tol*l1:
        return [(float(np.sqrt(norm2)), x/np.sqrt(norm2))]
    if gap <= merge_gap*l1:
        l = (l1 + l2)/2
        return [(float(l), x/l)]

    x_tilde = (xx/t)*np.conj(x)
    d = (l1 + l2)*gap
    e1 = (l1*x - l2*x_tilde)/d
    e2 = (l1*x_tilde - l2*x)/d
    return [(float(l1), e1), (float(l2), e2)]

def _chartPairs(T, x, tol, merge_gap):

    if np.linalg.norm(x) == 0:
        return []
    if T.kind in ['I', 'II', 'III']:
        return _matrixPairs(T, x, tol, merge_gap)
    elif T.kind == 'IV':
        return _typeIVPairs(T, x, tol, merge_gap)

    pairs = []
    for f, o, xf in zip(T.factors, T.offsets, jts_core.splitFactors(T, x)):
        for l, ef in _chartPairs(f, xf, tol, merge_gap):
            e = np.zeros(T.dimension, dtype=complex)
            e[o:o+f.dimension] = ef
            pairs.append((l, e))
    return pairs

def _realRows(vectors):
    V = np.array(vectors)
    return np.concatenate([np.real(V), np.imag(V)], axis=1)

def _genericPairs(T, x, tol, rank_tol=1e-9):
    """
    Spectral pairs from odd powers only: find the dimension s of the real span
    of the odd powers, solve the degree-s relation among them for the squared
    spectral values, then the Vandermonde system for the frame.
    """
    scale = float(jts_core.traceFormNorm(T, x))
    y = x/scale
    powers = [y]
    s = None
    for p in range(1, 2*T.dimension+2):
        powers.append(jts_core.applyQ(T, y, powers[-1]))
        rows = _realRows(powers)
        rows = rows/np.linalg.norm(rows, axis=1)[:, None]
        sv = np.linalg.svd(rows, compute_uv=False)
        r = int(np.sum(sv > rank_tol*sv[0]))
        if r < len(powers):
            s = r
            break
    if s is None:
        raise NumericalBreakdownError('Odd powers did not stabilize for %s' % T.label)

    A = _realRows(powers[:s]).T
    b = _realRows([powers[s]])[0]
    c = linalg.lstsq(A, b)[0]

    # mu^s - c[s-1] mu^(s-1) - ... - c[0] = 0, roots via the companion matrix
    mu = np.roots(np.concatenate([[1.0], -c[::-1]]))
    mu = np.sort(np.clip(np.real(mu), 0.0, None))[::-1]
    lambdas = np.sqrt(mu)
    if np.any(lambdas <= tol*lambdas[0]):
        raise DegeneracyError('Generic decomposition found a vanishing spectral value for %s' % T.label)

    V = np.array([[l**(2*p+1) for l in lambdas] for p in range(s)])
    E = np.linalg.solve(V, np.array(powers[:s]))
    return [(float(l*scale), E[i]) for i, l in enumerate(lambdas)]

def decompose(D, x, tol=1e-9, merge_gap=1e-7, method='chart', check=True):
    """
    Spectral decomposition of x.

    Parameters
    ==========
    D : boundedSymmetricDomain or jts_core.tripleSystem
        Domain (or its triple system)
    x : numpy.ndarray
        Point of C^n
    tol : float
        Relative threshold under which spectral values count as zero
    merge_gap : float
        Relative gap under which neighbouring spectral values are merged into
        one tripotent
    method : str
        'chart' uses the singular value decomposition in the matrix chart (Types
        I-III), the closed two-term form (Type IV) and componentwise evaluation
        for products. 'generic' uses only odd powers of x.
    check : bool
        Verify tripotency and orthogonality of the frame.

    Returns
    =======
    decomposition : spectralDecomposition
    """
    T = _system(D)
    x = np.asarray(x, dtype=complex)
    if x.shape != (T.dimension,):
        raise ValueError('Point of shape %s does not match dimension %s' % (x.shape, T.dimension))

    if np.linalg.norm(x) == 0:
        return spectralDecomposition([], np.zeros((0, T.dimension)), T.dimension)

    if method == 'chart':
        pairs = _chartPairs(T, x, tol, merge_gap)
    elif method == 'generic':
        pairs = _genericPairs(T, x, tol)
    else:
        raise ValueError('Decomposition method %s not valid. Use "chart" or "generic".' % method)

    pairs = sorted(pairs, key=lambda v: -v[0])
    values = np.array([v[0] for v in pairs])
    lambdas = []
    frame = []
    for group in _clusters(values, merge_gap*values[0]):
        lambdas.append(float(np.mean(values[group])))
        frame.append(np.sum([pairs[i][1] for i in group], axis=0))

    decomposition = spectralDecomposition(lambdas, frame, T.dimension)

    if check:
        check_tol = 1e-6
        for i, e in enumerate(decomposition.frame):
            if not jts_core.isTripotent(T, e, check_tol):
                raise DegeneracyError('Frame element %s with lambda %.12g is not a tripotent' % (i, lambdas[i]))
            for j in range(i):
                if not jts_core.areOrthogonal(T, e, decomposition.frame[j], check_tol):
                    raise DegeneracyError('Frame elements %s and %s are not orthogonal' % (j, i))

    return decomposition

def spectralNorm(D, x, method='chart'):
    """
    Spectral norm (largest spectral value) of one point or a stack of points.

    Parameters
    ==========
    D : boundedSymmetricDomain or jts_core.tripleSystem
        Domain
    x : numpy.ndarray
        Shape (n,) or (N, n)
    method : str
        'chart' for the closed forms, 'generic' to go through decompose()

    Returns
    =======
    norm : float or numpy.ndarray
    """
    T = _system(D)
    x = np.asarray(x, dtype=complex)

    if method == 'generic':
        flat = x.reshape(-1, T.dimension)
        values = []
        for v in flat:
            sd = decompose(T, v, method='generic', check=False)
            values.append(sd.lambdas[0] if sd.s else 0.0)
        values = np.array(values).reshape(x.shape[:-1])
        return float(values) if values.ndim == 0 else values

    if x.shape[-1:] != (T.dimension,):
        raise ValueError('Point of shape %s does not match dimension %s' % (x.shape, T.dimension))

    if T.kind in ['I', 'II', 'III']:
        X = jts_core.vectorToMatrix(T, x)
        values = np.linalg.svd(X, compute_uv=False)[..., 0]
    elif T.kind == 'IV':
        values = _typeIVValues(x)[0]
    else:
        values = np.max([spectralNorm(f, xf) for f, xf in zip(T.factors, jts_core.splitFactors(T, x))], axis=0)

    if np.ndim(values) == 0:
        return float(values)
    return values

def contains(D, x, tol=1e-9):
    """
    Locate x with respect to the domain: 'Interior', 'Boundary' or 'Exterior'.
    Stacks of points return an array of labels.
    """
    norm = spectralNorm(D, x)
    labels = np.where(norm < 1 - tol, 'Interior', np.where(np.abs(norm - 1) <= tol, 'Boundary', 'Exterior'))
    if labels.ndim == 0:
        return str(labels)
    return labels

def minkowskiFunctional(D, z, membership=None, tol=1e-12, max_iterations=200):
    """
    Minkowski functional inf{t > 0 : z/t in D} by bisection on a membership
    test. For the classical domains it coincides with the spectral norm.

    Parameters
    ==========
    D : boundedSymmetricDomain
        Domain (used when membership is None)
    z : numpy.ndarray
        Point
    membership : callable
        Optional test returning True for points of a balanced domain.
    """
    z = np.asarray(z, dtype=complex)
    if membership is None:
        membership = lambda w: spectralNorm(D, w) < 1

    if np.linalg.norm(z) == 0:
        return 0.0

    upper = 1.0
    while not membership(z/upper):
        upper *= 2.0
        if upper > 1e300:
            raise ValueError('Membership test never accepts multiples of z; domain is not bounded-balanced.')
    lower = 0.0
    for i in range(max_iterations):
        middle = (lower + upper)/2
        if membership(z/middle):
            upper = middle
        else:
            lower = middle
        if upper - lower <= tol*upper:
            break
    return upper

def pierce(D, e, tol=1e-9):
    """
    Pierce decomposition of C^n with respect to the tripotent e.

    D(e, e) is self-adjoint for the trace form; it is diagonalized in a
    trace-form orthonormal basis and its eigenvalues are assigned to the
    nearest of 0, 1, 2.

    Parameters
    ==========
    D : boundedSymmetricDomain or jts_core.tripleSystem
        Domain
    e : numpy.ndarray
        Tripotent
    tol : float
        Tripotent tolerance; eigenvalues farther than 10*tol from {0, 1, 2}
        are rejected.

    Returns
    =======
    decomposition : pierceDecomposition
    """
    T = _system(D)
    e = np.asarray(e, dtype=complex)
    if not jts_core.isTripotent(T, e, tol):
        raise ValueError('Pierce decomposition needs a tripotent; e^(3) - e is too large.')

    A = jts_core.toOrthonormal(T, jts_core.operatorD(T, e, e))
    A = 0.5*(A + np.conj(A.T))
    w, U = linalg.eigh(A)
    labels = np.clip(np.rint(w), 0, 2).astype(int)
    distance = np.max(np.abs(w - labels)) if len(w) else 0.0
    if distance > 10*tol*max(1.0, np.max(np.abs(w))):
        raise NumericalBreakdownError('D(e,e) has an eigenvalue %.3e away from {0,1,2}' % distance)

    vectors = jts_core.vectorsFromOrthonormal(T, U)
    bases = {}
    for j in (0, 1, 2):
        bases[j] = vectors[:, labels == j].T
    return pierceDecomposition(T, e, bases, w)

def pierceRelationResidual(D, e, tol=1e-9):
    """
    Largest violation of {V_a, V_b, V_c} in V_(a-b+c) over Pierce basis triples.
    """
    T = _system(D)
    pd = pierce(T, e, tol)
    n = T.dimension
    residual = 0.0
    for a in (0, 1, 2):
        for b in (0, 1, 2):
            for c in (0, 1, 2):
                if min(pd.dimensions[a], pd.dimensions[b], pd.dimensions[c]) == 0:
                    continue
                target = a - b + c
                outside = np.eye(n) - pd.projector(target)
                X, Y, Z = pd.bases[a], pd.bases[b], pd.bases[c]
                products = jts_core.tripleProduct(T, X[:, None, None, :], Y[None, :, None, :], Z[None, None, :, :])
                leak = np.einsum('mk,...k->...m', outside, products)
                residual = max(residual, float(np.max(np.abs(leak))))
    return residual

def pierceSubsystemResidual(D, e, tol=1e-9):
    """
    Largest violation of {V_j, V_j, V_j} in V_j for j = 0, 1, 2.
    """
    T = _system(D)
    pd = pierce(T, e, tol)
    n = T.dimension
    residual = 0.0
    for j in (0, 1, 2):
        if pd.dimensions[j] == 0:
            continue
        B = pd.bases[j]
        products = jts_core.tripleProduct(T, B[:, None, None, :], B[None, :, None, :], B[None, None, :, :])
        leak = np.einsum('mk,...k->...m', np.eye(n) - pd.projector(j), products)
        residual = max(residual, float(np.max(np.abs(leak))))
    return residual

def tripotentRank(D, e, tol=1e-9, method='chart'):
    """
    Rank of a non-zero tripotent. Matrix kinds use the rank of the chart matrix
    (halved for Type II), Type IV the value of e^T e, products add factor ranks.
    The 'generic' method returns None: no primitive splitting is attempted.
    """
    T = _system(D)
    e = np.asarray(e, dtype=complex)
    if np.linalg.norm(e) == 0:
        raise ValueError('The rank is defined for non-zero tripotents only.')
    if not jts_core.isTripotent(T, e, tol):
        raise ValueError('Tripotent rank requested for a point that is not a tripotent.')
    if method == 'generic':
        return None
    return _chartRank(T, e)

def _chartRank(T, e):

    if np.linalg.norm(e) < 1e-6:
        return 0
    if T.kind in ['I', 'III']:
        # singular values of a tripotent are 0 or 1
        return int(np.linalg.matrix_rank(jts_core.vectorToMatrix(T, e), tol=0.5))
    elif T.kind == 'II':
        return int(np.linalg.matrix_rank(jts_core.vectorToMatrix(T, e), tol=0.5))//2
    elif T.kind == 'IV':
        if T.parameters[0] == 1:
            return 1
        return 2 if abs(np.sum(e*e)) > 1.0 else 1
    return sum(_chartRank(f, ef) for f, ef in zip(T.factors, jts_core.splitFactors(T, e)))

def isMaximal(D, e, tol=1e-9):
    return pierce(D, e, tol).dimensions[0] == 0

def isPrimitive(D, e, tol=1e-9):
    return pierce(D, e, tol).dimensions[2] == 1

def isDominated(D, e, e_prime, tol=1e-9):
    """
    Tripotent partial order: e is dominated by e_prime when e_prime - e is a
    tripotent orthogonal to e.
    """
    T = _system(D)
    e1 = np.asarray(e_prime, dtype=complex) - np.asarray(e, dtype=complex)
    if np.linalg.norm(e1) <= tol:
        return True
    return jts_core.isTripotent(T, e1, tol) and jts_core.areOrthogonal(T, e, e1, tol)

def referenceMaximalTripotent(D):
    """
    A fixed maximal tripotent: [I 0] for Type I, blocks [[0,1],[-1,0]] for
    Type II, the identity for Type III, sqrt(2)*e_1 for Type IV.
    """
    T = _system(D)
    if T.kind == 'I':
        p, q = T.parameters
        E = np.eye(p, q)
        return jts_core.matrixToVector(T, E)
    elif T.kind == 'II':
        m = T.parameters[0]
        E = np.zeros((m, m))
        for i in range(0, m - 1, 2):
            E[i, i+1] = 1.0
            E[i+1, i] = -1.0
        return jts_core.matrixToVector(T, E)
    elif T.kind == 'III':
        return jts_core.matrixToVector(T, np.eye(T.parameters[0]))
    elif T.kind == 'IV':
        e = np.zeros(T.dimension, dtype=complex)
        e[0] = np.sqrt(2.0)
        return e
    return np.concatenate([referenceMaximalTripotent(f) for f in T.factors])

def shilovRadius(D):
    """
    Trace-form norm shared by all maximal tripotents.
    """
    T = _system(D)
    return float(jts_core.traceFormNorm(T, referenceMaximalTripotent(T)))

def _randomDirections(T, rng, size):
    shape = (T.dimension,) if size is None else (size, T.dimension)
    return rng.standard_normal(shape) + 1j*rng.standard_normal(shape)

def randomBoundaryPoint(D, rng, size=None):
    """
    Random point(s) of spectral norm one.
    """
    T = _system(D)
    x = _randomDirections(T, rng, size)
    norm = spectralNorm(T, x)
    return x/np.asarray(norm)[..., None] if size is not None else x/norm

def randomPoint(D, rng, radius=1.0, size=None):
    """
    Random point(s) with spectral norm uniform in [0, radius).
    """
    T = _system(D)
    x = randomBoundaryPoint(T, rng, size)
    t = radius*rng.uniform(0.0, 1.0, size=None if size is None else (size, 1))
    return t*x

def randomTripotent(D, rng, rank=None):
    """
    Random tripotent of the given rank (maximal when rank is None), built as a
    sum of frame elements of a random point.
    """
    T = _system(D)
    sd = decompose(T, _randomDirections(T, rng, None))
    if rank is None:
        return np.sum(sd.frame, axis=0)
    if rank < 1 or rank > sd.s:
        raise ValueError('Requested rank %s but a random frame has %s elements.' % (rank, sd.s))
    return np.sum(sd.frame[:rank], axis=0)
