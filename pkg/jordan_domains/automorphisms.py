import numpy as np

from . import jts_core
from . import classical_domains
from ._exceptions import ExtensionDomainError, NumericalBreakdownError
from ._methods import complexArrayToList, listToComplexArray

def positiveSquareRoot(T, B, negative_tol=1e-10):
    """
    Positive square root of an operator that is self-adjoint and positive
    semi-definite for the trace form.

    The operator is moved to a trace-form orthonormal basis, where it is a
    Hermitian matrix, square-rooted through eigh and moved back.

    Parameters
    ==========
    T : jts_core.tripleSystem
        Triple system
    B : numpy.ndarray
        Operator matrix
    negative_tol : float
        Eigenvalues below -negative_tol are rejected; the rest are clipped at 0.

    Returns
    =======
    S : numpy.ndarray
        Square root with S @ S = B
    """
    Bt = jts_core.toOrthonormal(T, B)
    Bt = 0.5*(Bt + np.conj(Bt.T))
    w, U = np.linalg.eigh(Bt)
    if np.min(w) < -negative_tol:
        raise NumericalBreakdownError('Operator has a negative eigenvalue %.3e' % np.min(w))
    St = (U*np.sqrt(np.clip(w, 0.0, None))) @ np.conj(U.T)
    return jts_core.fromOrthonormal(T, St)

class transvection:
    """
    Automorphism g_a of the domain with g_a(0) = a.

    g_a(z) = a + B(a,a)^(1/2) B(z,-a)^(-1) (z + Q(z)a)

    Attributes
    ==========
    system : jts_core.tripleSystem
        Triple system of the domain
    a : numpy.ndarray
        Image of the origin
    sqrt_B : numpy.ndarray
        Positive square root of B(a, a)
    """

    condition_limit = 1e12

    def __init__(self, D, a):

        self.system = classical_domains._system(D)
        self.a = np.asarray(a, dtype=complex)
        if self.a.shape != (self.system.dimension,):
            raise ValueError('Point of shape %s does not match dimension %s' % (self.a.shape, self.system.dimension))

        norm = classical_domains.spectralNorm(self.system, self.a)
        if norm >= 1:
            raise ValueError('Transvections need an interior point; spectral norm of a is %.12g' % norm)

        self.sqrt_B = positiveSquareRoot(self.system, jts_core.bergmanOperator(self.system, self.a, self.a))

    def _resolvent(self, z):
        B = jts_core.bergmanOperator(self.system, z, -self.a)
        condition = np.linalg.cond(B)
        # nan marks an exactly singular operator
        if np.any(~(condition <= self.condition_limit)):
            raise ExtensionDomainError('B(z,-a) is singular or ill-conditioned (condition %.3e)' % np.max(condition))
        return B

    def apply(self, z):
        """
        Evaluate g_a at one point (shape (n,)) or a stack (shape (N, n)).
        """
        z = np.asarray(z, dtype=complex)
        B = self._resolvent(z)
        rhs = z + jts_core.applyQ(self.system, z, self.a)
        quasi = np.linalg.solve(B, rhs[..., None])[..., 0]
        return self.a + quasi @ self.sqrt_B.T

    def derivative(self, z):
        """
        Complex Jacobian B(a,a)^(1/2) B(z,-a)^(-1) at z.
        """
        z = np.asarray(z, dtype=complex)
        B = self._resolvent(z)
        return self.sqrt_B @ np.linalg.inv(B)

    def inverse(self):
        return transvection(self.system, -self.a)

    def toDict(self):
        return {'kind': self.system.label, 'a': complexArrayToList(self.a)}

    @classmethod
    def fromDict(cls, data):
        """
        Rebuild a transvection stored with toDict(); the square root is recomputed.
        """
        return cls(jts_core.systemFromLabel(data['kind']), listToComplexArray(data['a']))

    def __repr__(self):
        return 'transvection(%s, a=%s)' % (self.system.label, np.array2string(self.a, precision=4))

def makeTransvection(D, a):
    return transvection(D, a)

class mapChain:
    """
    Symbolic composition of maps, evaluated left to right.

    Steps are (kind, payload) pairs:

    - ('transvection', g) with g a transvection
    - ('inverse', g), stored as ('transvection', g.inverse())
    - ('linear', M) for z -> M z
    - ('holomorphic', (f, df, label)) for a holomorphic callable f with an
      optional Jacobian callable df (central differences when None)
    """

    step_kinds = ['transvection', 'inverse', 'linear', 'holomorphic']

    def __init__(self, steps=None):
        self.steps = []
        for kind, payload in (steps or []):
            self.append(kind, payload)

    def append(self, kind, payload):
        if kind not in self.step_kinds:
            raise ValueError('Step kind %s not valid. Valid options are: %s' % (kind, ' '.join(self.step_kinds)))
        if kind in ['transvection', 'inverse'] and not isinstance(payload, transvection):
            raise ValueError('%s steps need a transvection, got %s' % (kind, type(payload).__name__))
        if kind == 'inverse':
            kind, payload = 'transvection', payload.inverse()
        elif kind == 'linear':
            payload = np.asarray(payload, dtype=complex)
            if payload.ndim != 2:
                raise ValueError('Linear steps need a matrix.')
        elif kind == 'holomorphic':
            if callable(payload):
                payload = (payload, None, getattr(payload, '__name__', 'holomorphic'))
            f, df, label = payload
            if not callable(f) or (df is not None and not callable(df)):
                raise ValueError('Holomorphic steps need callables (f, df or None, label).')
        self.steps.append((kind, payload))
        return self

    def __len__(self):
        return len(self.steps)

    def _applyStep(self, step, z):
        kind, payload = step
        if kind == 'transvection':
            return payload.apply(z)
        elif kind == 'linear':
            return z @ payload.T
        return np.asarray(payload[0](z), dtype=complex)

    def _stepDerivative(self, step, z, h=1e-6):
        kind, payload = step
        if kind == 'transvection':
            return payload.derivative(z)
        elif kind == 'linear':
            return payload
        f, df, label = payload
        if df is not None:
            return np.asarray(df(z), dtype=complex)
        n = len(z)
        J = np.zeros((len(f(z)), n), dtype=complex)
        for k in range(n):
            step_k = np.zeros(n, dtype=complex)
            step_k[k] = h
            J[:, k] = (np.asarray(f(z + step_k)) - np.asarray(f(z - step_k)))/(2*h)
        return J

    def apply(self, z):
        w = np.asarray(z, dtype=complex)
        for step in self.steps:
            w = self._applyStep(step, w)
        return w

    def __call__(self, z):
        return self.apply(z)

    def derivative(self, z):
        """
        Jacobian of the chain at a single point by the chain rule.
        """
        w = np.asarray(z, dtype=complex)
        J = np.eye(len(w), dtype=complex)
        for step in self.steps:
            J = self._stepDerivative(step, w) @ J
            w = self._applyStep(step, w)
        return J

    def inverse(self):
        """
        Chain of the inverse steps in reverse order. Holomorphic steps have no
        symbolic inverse.
        """
        steps = []
        for kind, payload in reversed(self.steps):
            if kind == 'transvection':
                steps.append(('transvection', payload.inverse()))
            elif kind == 'linear':
                steps.append(('linear', np.linalg.inv(payload)))
            else:
                raise ValueError('Holomorphic step %s cannot be inverted.' % payload[2])
        return mapChain(steps)

    def describe(self):
        rows = []
        for kind, payload in self.steps:
            if kind == 'transvection':
                rows.append({'step': kind, 'transvection': payload.toDict()})
            elif kind == 'linear':
                rows.append({'step': kind, 'matrix': complexArrayToList(payload)})
            else:
                rows.append({'step': kind, 'label': payload[2]})
        return rows

def mapAtoB(D, a, b):
    """
    Chain g_b o g_(-a) sending a to b.
    """
    ga = transvection(D, a)
    gb = transvection(D, b)
    return mapChain([('inverse', ga), ('transvection', gb)])
