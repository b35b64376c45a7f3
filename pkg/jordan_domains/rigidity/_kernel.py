import numpy as np
from scipy.special import gammaln

from .. import jts_core

class kernelSpec:
    """
    Closed-form Bergman kernel of a ball, a polydisc or a Type I domain.

    Attributes
    ==========
    kind : str
        'ball', 'polydisc' or 'I'
    parameters : tuple
        (n,) for 'ball' and 'polydisc', (p, q) for 'I'
    normalization : str
        'unit' gives K(0, 0) = 1; 'volume' gives K(0, 0) = 1/volume
    system : jts_core.tripleSystem
        Triple system of the same domain (same chart)
    """

    def __init__(self, kind, parameters, normalization='unit'):

        kinds = ['ball', 'polydisc', 'I']
        if kind not in kinds:
            raise ValueError('Kernel kind %s not valid. Valid options are: %s' % (kind, ' '.join(kinds)))
        if normalization not in ['unit', 'volume']:
            raise ValueError('Normalization %s not valid. Use "unit" or "volume".' % normalization)

        self.kind = kind
        self.parameters = tuple(int(p) for p in parameters)
        self.normalization = normalization

        if kind == 'ball':
            self.system = jts_core.ball(*self.parameters)
        elif kind == 'polydisc':
            self.system = jts_core.polydisc(*self.parameters)
        else:
            self.system = jts_core.typeI(*self.parameters)

    @property
    def dimension(self):
        return self.system.dimension

    def logVolume(self):
        """
        Logarithm of the Euclidean volume of the domain, from the Type I
        volume formula (the ball is I(1, n), the polydisc a product of discs).
        """
        if self.kind == 'polydisc':
            return self.parameters[0]*np.log(np.pi)
        if self.kind == 'ball':
            p, q = 1, self.parameters[0]
        else:
            p, q = self.parameters
        # sum of log(k!) for k < m
        superfactorial = lambda m: np.sum(gammaln(np.arange(1, m) + 1))
        return (superfactorial(p) + superfactorial(q) - superfactorial(p + q)
                + p*q*np.log(np.pi))

    def logConstant(self):
        if self.normalization == 'unit':
            return 0.0
        return -self.logVolume()

def kernelSpecFromSystem(T, normalization='unit'):
    """
    Kernel of the domain of a triple system, when a closed form is available.
    """
    if T.kind == 'I':
        if T.parameters[0] == 1:
            return kernelSpec('ball', (T.parameters[1],), normalization)
        return kernelSpec('I', T.parameters, normalization)
    if T.kind == 'product' and all(f.kind == 'I' and f.parameters == (1, 1) for f in T.factors):
        return kernelSpec('polydisc', (len(T.factors),), normalization)
    raise ValueError('No closed-form kernel available for %s' % T.label)

def _logKernel(K, z, w):
    # Holomorphic in z and in conj(w); every logarithm has an argument with
    # positive real part inside the domain, so principal branches are continuous.
    if K.kind == 'ball':
        return -(K.parameters[0] + 1)*np.log(1 - np.sum(z*np.conj(w)))
    elif K.kind == 'polydisc':
        return -2*np.sum(np.log(1 - z*np.conj(w)))
    p, q = K.parameters
    Z = z.reshape(p, q)
    W = w.reshape(p, q)
    mu = np.linalg.eigvals(Z @ np.conj(W.T))
    return -(p + q)*np.sum(np.log(1 - mu))

def kernelLog(K, z, w):
    """
    log K(z, w) on the principal branch.

    Parameters
    ==========
    K : kernelSpec
        Kernel
    z, w : numpy.ndarray
        Interior points

    Returns
    =======
    value : complex
    """
    from .. import classical_domains

    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    for point in (z, w):
        if point.shape != (K.dimension,):
            raise ValueError('Point of shape %s does not match dimension %s' % (point.shape, K.dimension))
        if classical_domains.spectralNorm(K.system, point) >= 1:
            raise ValueError('The kernel is evaluated at interior points only.')
    return complex(_logKernel(K, z, w) + K.logConstant())

def _mixedSecond(K, i, l, h):
    n = K.dimension
    total = 0.0
    for s1 in (1, -1):
        for s2 in (1, -1):
            x = np.zeros(n, dtype=complex)
            u = np.zeros(n, dtype=complex)
            x[i] += s1*h
            u[l] += s2*h
            total += s1*s2*_logKernel(K, x, u)
    return total/(4*h**2)

def _mixedFourth(K, i, j, k, l, h):
    n = K.dimension
    total = 0.0
    for s1 in (1, -1):
        for s3 in (1, -1):
            x = np.zeros(n, dtype=complex)
            x[i] += s1*h
            x[k] += s3*h
            for s2 in (1, -1):
                for s4 in (1, -1):
                    u = np.zeros(n, dtype=complex)
                    u[j] += s2*h
                    u[l] += s4*h
                    total += s1*s2*s3*s4*_logKernel(K, x, u)
    return total/(16*h**4)

def _richardson(function, h):
    return (4*function(h/2) - function(h))/3

def tripleFromKernel(K, step=1e-2):
    """
    Triple product tensor recovered from fourth derivatives of log K at 0.

    log K(x, u) at real x and u is a holomorphic function of (x, conj(u)), so
    the mixed z / conj(z) derivatives at the origin equal real partial
    derivatives in x and u. Central differences (error O(h^2)) are
    Richardson-extrapolated. The metric at 0 comes from the second
    derivatives and T[i, j, k, :] solves h^T T[i, j, k, :] = F4[i, j, k, :].

    Parameters
    ==========
    K : kernelSpec
        Kernel
    step : float
        Finite difference step, within [1e-3, 1e-1]

    Returns
    =======
    tensor : numpy.ndarray
        Shape (n, n, n, n); tensor[i, j, k, m] is the e_m coefficient of
        {e_i, e_j, e_k}
    """
    if step < 1e-3:
        raise ValueError('Step %s is too small: fourth differences are dominated by rounding noise.' % step)
    if step > 1e-1:
        raise ValueError('Step %s is too large for the extrapolated stencil.' % step)

    n = K.dimension
    metric = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for l in range(n):
            metric[i, l] = _richardson(lambda h: _mixedSecond(K, i, l, h), step)

    fourth = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    fourth[i, j, k, l] = _richardson(lambda h: _mixedFourth(K, i, j, k, l, h), step)

    return np.linalg.solve(metric.T, fourth.reshape(-1, n).T).T.reshape(n, n, n, n)

def compareKernelTensor(K, step=1e-2):
    """
    Entrywise comparison of tripleFromKernel() with the closed-form product.

    Returns
    =======
    report : dict
        'max_error', 'step', 'kernel' and 'tensor_shape'
    """
    recovered = tripleFromKernel(K, step)
    exact = jts_core.structureTensor(K.system)
    return {'kernel': K.kind, 'parameters': list(K.parameters), 'step': step,
            'max_error': float(np.max(np.abs(recovered - exact))),
            'tensor_shape': list(recovered.shape)}
