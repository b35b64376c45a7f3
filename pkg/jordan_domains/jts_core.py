import numpy as np
from scipy import linalg

class tripleSystem:
    """
    Positive Hermitian Jordan triple system of a classical bounded symmetric
    domain written in its Harish-Chandra chart.

    Points are complex numpy vectors of length ``dimension``. Matrix kinds are
    flattened row-major; Type II keeps the strict upper triangle and Type III
    the upper triangle including the diagonal.

    Attributes
    ==========
    kind : str
        One of 'I', 'II', 'III', 'IV' or 'product'.
    parameters : tuple
        (p, q) for Type I, (m,) for Types II, III and IV, () for products.
    factors : list
        Factor systems of a product (empty for irreducible kinds).
    dimension : int
        Complex dimension n of the ambient space.
    """

    def __init__(self, kind, parameters=(), factors=None):

        kinds = ['I', 'II', 'III', 'IV', 'product']
        if kind not in kinds:
            raise ValueError('Triple system kind %s not valid. Valid options are: %s' % (kind, ' '.join(kinds)))

        self.kind = kind
        self.parameters = tuple(int(p) for p in parameters)
        self.factors = []
        self.offsets = []

        if kind == 'product':
            if not factors:
                raise ValueError('A product system needs at least one factor.')
            self.factors = list(factors)
            offset = 0
            for f in self.factors:
                if not isinstance(f, tripleSystem):
                    raise ValueError('Product factors must be tripleSystem objects.')
                self.offsets.append(offset)
                offset += f.dimension
            self.dimension = offset
        else:
            for p in self.parameters:
                if p < 1:
                    raise ValueError('Parameters for Type %s must be positive integers, got %s' % (kind, self.parameters))
            if kind == 'I':
                if len(self.parameters) != 2:
                    raise ValueError('Type I needs two parameters (p, q).')
                p, q = self.parameters
                self.dimension = p*q
            else:
                if len(self.parameters) != 1:
                    raise ValueError('Type %s needs a single parameter m.' % kind)
                m = self.parameters[0]
                if kind == 'II':
                    if m < 2:
                        raise ValueError('Type II needs m >= 2 (m=%s gives an empty space).' % m)
                    self.dimension = m*(m-1)//2
                elif kind == 'III':
                    self.dimension = m*(m+1)//2
                elif kind == 'IV':
                    self.dimension = m

        # Lazily built caches
        self._structure_tensor = None
        self._trace_form_matrix = None
        self._trace_form_factor = None

    @property
    def label(self):
        if self.kind == 'product':
            return 'prod('+';'.join(f.label for f in self.factors)+')'
        return self.kind+'('+','.join(str(p) for p in self.parameters)+')'

    def __repr__(self):
        return 'tripleSystem(%s, n=%s)' % (self.label, self.dimension)

    def __eq__(self, other):
        if not isinstance(other, tripleSystem):
            return NotImplemented
        return self.label == other.label

    def __hash__(self):
        return hash(self.label)

    def __getstate__(self):
        # Caches are rebuilt on demand in worker processes
        state = self.__dict__.copy()
        state['_structure_tensor'] = None
        state['_trace_form_matrix'] = None
        state['_trace_form_factor'] = None
        return state

def typeI(p, q):
    return tripleSystem('I', (p, q))

def typeII(m):
    return tripleSystem('II', (m,))

def typeIII(m):
    return tripleSystem('III', (m,))

def typeIV(m):
    return tripleSystem('IV', (m,))

def productSystem(factors):
    return tripleSystem('product', factors=factors)

def ball(n):
    """
    The Euclidean unit ball of C^n as the Type I(1, n) system.
    """
    return typeI(1, n)

def disc():
    return typeI(1, 1)

def polydisc(n):
    return productSystem([disc() for i in range(n)])

def matrixShape(T):
    """
    Shape of the matrix chart of a Type I, II or III system.
    """
    if T.kind == 'I':
        return T.parameters
    elif T.kind in ['II', 'III']:
        m = T.parameters[0]
        return (m, m)
    raise ValueError('Type %s has no matrix chart.' % T.kind)

def _triangleIndexes(T):
    m = T.parameters[0]
    if T.kind == 'II':
        return np.triu_indices(m, 1)
    return np.triu_indices(m)

def vectorToMatrix(T, x):
    """
    Unflatten chart coordinates (shape (..., n)) into matrices (shape (..., p, q)).

    Parameters
    ==========
    T : tripleSystem
        A Type I, II or III system.
    x : numpy.ndarray
        Chart coordinates. Leading dimensions are kept as batch dimensions.

    Returns
    =======
    X : numpy.ndarray
        Complex matrices; antisymmetric for Type II and symmetric for Type III.
    """
    x = np.asarray(x, dtype=complex)
    shape = matrixShape(T)
    if T.kind == 'I':
        return x.reshape(x.shape[:-1]+shape)

    rows, cols = _triangleIndexes(T)
    X = np.zeros(x.shape[:-1]+shape, dtype=complex)
    X[..., rows, cols] = x
    if T.kind == 'II':
        X[..., cols, rows] = -x
    else:
        X[..., cols, rows] = x
    return X

def matrixToVector(T, X):
    """
    Flatten chart matrices back to coordinates; inverse of vectorToMatrix() on
    the chart's matrix space.
    """
    X = np.asarray(X, dtype=complex)
    if T.kind == 'I':
        return X.reshape(X.shape[:-2]+(T.dimension,))
    matrixShape(T)
    rows, cols = _triangleIndexes(T)
    return X[..., rows, cols]

def splitFactors(T, x):
    """
    Split product coordinates into the list of factor coordinates.
    """
    x = np.asarray(x)
    pieces = []
    for f, o in zip(T.factors, T.offsets):
        pieces.append(x[..., o:o+f.dimension])
    return pieces

def _checkDimension(T, *vectors):
    for v in vectors:
        if np.shape(v)[-1:] != (T.dimension,):
            raise ValueError('Vector of shape %s does not match the dimension %s of %s'
                             % (np.shape(v), T.dimension, T.label))

def tripleProduct(T, x, y, z):
    """
    Evaluate the triple product {x, y, z}. Linear in x and z, conjugate-linear in y.

    Type I-III (as matrices): x y* z + z y* x.
    Type IV: <x,y> z + <z,y> x - (x^T z) conj(y).
    Products: componentwise.

    Leading dimensions broadcast, so stacks of points can be evaluated at once.

    Parameters
    ==========
    T : tripleSystem
        System defining the product
    x, y, z : numpy.ndarray
        Points of shape (..., n)

    Returns
    =======
    w : numpy.ndarray
        The triple product, shape (..., n)
    """
    x, y, z = [np.asarray(v, dtype=complex) for v in (x, y, z)]
    _checkDimension(T, x, y, z)
    x, y, z = np.broadcast_arrays(x, y, z)

    if T.kind == 'product':
        pieces = []
        for f, xf, yf, zf in zip(T.factors, splitFactors(T, x), splitFactors(T, y), splitFactors(T, z)):
            pieces.append(tripleProduct(f, xf, yf, zf))
        return np.concatenate(pieces, axis=-1)

    if T.kind == 'IV':
        xy = np.sum(x*np.conj(y), axis=-1)[..., None]
        zy = np.sum(z*np.conj(y), axis=-1)[..., None]
        xz = np.sum(x*z, axis=-1)[..., None]
        return xy*z + zy*x - xz*np.conj(y)

    X = vectorToMatrix(T, x)
    Ys = np.conj(vectorToMatrix(T, y)).swapaxes(-1, -2)
    Z = vectorToMatrix(T, z)
    return matrixToVector(T, X @ Ys @ Z + Z @ Ys @ X)

def structureTensor(T):
    """
    Coefficients S[i, j, k, m] of the basis vector e_m in {e_i, e_j, e_k}.

    The tensor is computed once per system and reused by every operator builder.
    """
    if T._structure_tensor is None:
        n = T.dimension
        I = np.eye(n, dtype=complex)
        T._structure_tensor = tripleProduct(T, I[:, None, None, :], I[None, :, None, :], I[None, None, :, :])
    return T._structure_tensor

def operatorD(T, x, y):
    """
    Matrix of the linear map z -> {x, y, z}. Batches of (x, y) give stacks of
    matrices.
    """
    x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    _checkDimension(T, x, y)
    return np.einsum('ijkm,...i,...j->...mk', structureTensor(T), x, np.conj(y))

def operatorQ(T, x):
    """
    Complex-linear part M of the conjugate-linear map Q(x)y = {x, y, x}/2.

    The map is recovered as Q(x)y = M @ conj(y). Composing two such maps gives
    a complex-linear map: Q(x)Q(y)z = M_x @ conj(M_y) @ z (see
    composeConjugateLinear()).
    """
    x = np.asarray(x, dtype=complex)
    _checkDimension(T, x)
    return 0.5*np.einsum('ijkm,...i,...k->...mj', structureTensor(T), x, x)

def applyQ(T, x, y):
    """
    Evaluate Q(x)y = {x, y, x}/2.
    """
    return 0.5*tripleProduct(T, x, y, x)

def composeConjugateLinear(M1, M2):
    """
    Complex-linear matrix of (v -> M1 conj(v)) o (v -> M2 conj(v)).
    """
    return M1 @ np.conj(M2)

def oddPower(T, x, p):
    """
    Odd power x^(2p+1), with x^(1) = x and x^(2p+1) = Q(x) x^(2p-1).

    Parameters
    ==========
    T : tripleSystem
        Triple system
    x : numpy.ndarray
        Point
    p : int
        Non-negative integer

    Returns
    =======
    power : numpy.ndarray
        x^(2p+1)
    """
    if int(p) != p or p < 0:
        raise ValueError('Odd power index must be a non-negative integer, got %s' % p)
    power = np.asarray(x, dtype=complex)
    _checkDimension(T, power)
    for i in range(int(p)):
        power = applyQ(T, x, power)
    return power

def bergmanOperator(T, x, y):
    """
    Bergman operator B(x, y) = id - D(x, y) + Q(x)Q(y) as a complex matrix.
    """
    n = T.dimension
    Mx = operatorQ(T, x)
    My = operatorQ(T, y)
    return np.eye(n) - operatorD(T, x, y) + composeConjugateLinear(Mx, My)

def traceFormMatrix(T):
    """
    Hermitian positive definite Gram matrix G of the trace form, so that
    traceForm(x, y) = y^H G x.
    """
    if T._trace_form_matrix is None:
        tau = np.einsum('ijkk->ij', structureTensor(T))
        G = tau.T
        T._trace_form_matrix = 0.5*(G + np.conj(G.T))
    return T._trace_form_matrix

def traceForm(T, x, y):
    """
    Trace form Tr[D(x, y)]; linear in x, conjugate-linear in y.
    """
    x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    _checkDimension(T, x, y)
    return np.einsum('ab,...b,...a->...', traceFormMatrix(T), x, np.conj(y))

def traceFormNorm(T, x):
    return np.sqrt(np.maximum(np.real(traceForm(T, x, x)), 0.0))

def traceFormFactor(T):
    """
    Lower Cholesky factor L of the trace form Gram matrix (G = L L^H). Raises
    numpy's LinAlgError when the trace form is not positive definite.
    """
    if T._trace_form_factor is None:
        T._trace_form_factor = linalg.cholesky(traceFormMatrix(T), lower=True)
    return T._trace_form_factor

def toOrthonormal(T, A):
    """
    Express an operator in a trace-form orthonormal basis: L^H A L^-H.
    Self-adjoint operators become Hermitian matrices.
    """
    L = traceFormFactor(T)
    right = np.conj(linalg.solve_triangular(L, np.conj(A.T), lower=True).T)
    return np.conj(L.T) @ right

def fromOrthonormal(T, A):
    """
    Inverse of toOrthonormal(): L^-H A L^H.
    """
    L = traceFormFactor(T)
    LH = np.conj(L.T)
    return linalg.solve_triangular(LH, A @ LH, lower=False)

def vectorsFromOrthonormal(T, V):
    """
    Map orthonormal-basis coordinates (columns of V) back to chart coordinates.
    """
    L = traceFormFactor(T)
    return linalg.solve_triangular(np.conj(L.T), V, lower=False)

def adjoint(T, A):
    """
    Adjoint of an operator with respect to the trace form: G^-1 A^H G.
    """
    G = traceFormMatrix(T)
    return np.linalg.solve(G, np.conj(A.T) @ G)

def isTripotent(T, e, tol=1e-9):
    """
    Check e^(3) = e under the trace form norm, relative to the size of e.
    """
    e = np.asarray(e, dtype=complex)
    if tol <= 0:
        raise ValueError('Tolerance must be positive.')
    residual = traceFormNorm(T, oddPower(T, e, 1) - e)
    return bool(residual <= tol*max(1.0, traceFormNorm(T, e)))

def areOrthogonal(T, e1, e2, tol=1e-9):
    """
    Check D(e1, e2) = 0 in operator norm.
    """
    if tol <= 0:
        raise ValueError('Tolerance must be positive.')
    scale = max(1.0, np.linalg.norm(e1)*np.linalg.norm(e2))
    return bool(np.linalg.norm(operatorD(T, e1, e2), 2) <= tol*scale)

def jordanIdentityResidual(T, x, y, u, v, w):
    """
    Norm of {x,y,{u,v,w}} - {u,v,{x,y,w}} - {{x,y,u},v,w} + {u,{y,x,v},w}.
    Batches return one residual per sample.
    """
    P = lambda a, b, c: tripleProduct(T, a, b, c)
    r = P(x, y, P(u, v, w)) - P(u, v, P(x, y, w)) - P(P(x, y, u), v, w) + P(u, P(y, x, v), w)
    return np.linalg.norm(r, axis=-1)

def _splitTopLevel(text, separator):
    pieces = []
    depth = 0
    current = ''
    for character in text:
        if character == '(':
            depth += 1
        elif character == ')':
            depth -= 1
        if character == separator and depth == 0:
            pieces.append(current)
            current = ''
        else:
            current += character
    pieces.append(current)
    return pieces

def systemFromLabel(label):
    """
    Rebuild a system from its label, e.g. 'I(2,2)' or 'prod(I(1,1);I(1,1))'.
    """
    label = label.replace(' ', '')
    if not label.endswith(')') or '(' not in label:
        raise ValueError('System label %s not understood.' % label)
    name, inside = label.split('(', 1)
    inside = inside[:-1]
    if name == 'prod':
        return productSystem([systemFromLabel(piece) for piece in _splitTopLevel(inside, ';')])
    try:
        parameters = tuple(int(v) for v in inside.split(','))
    except ValueError:
        raise ValueError('System label %s has non-integer parameters.' % label)
    return tripleSystem(name, parameters)
