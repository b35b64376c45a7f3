import argparse
import contextlib
import re
import sys

import numpy as np

from . import jts_core
from . import classical_domains
from . import boundary_geometry
from . import automorphisms
from . import rigidity
from ._methods import reportToJson, readJsonFile

class usageError(ValueError):
    """
    Raised for command-line input that cannot be parsed.
    """

def parseDomain(text):
    """
    Parse a domain spec: ball:n, disc, polydisc:n, I:p,q, II:m, III:m, IV:m or
    prod(spec;spec;...).
    """
    text = text.replace(' ', '')
    try:
        if text.startswith('prod(') and text.endswith(')'):
            pieces = jts_core._splitTopLevel(text[5:-1], ';')
            return jts_core.productSystem([parseDomain(piece) for piece in pieces])
        if text == 'disc':
            return jts_core.disc()
        name, _, values = text.partition(':')
        parameters = [int(v) for v in values.split(',')] if values else []
        if name == 'ball':
            return jts_core.ball(*parameters)
        elif name == 'polydisc':
            return jts_core.polydisc(*parameters)
        elif name in ['I', 'II', 'III', 'IV']:
            return jts_core.tripleSystem(name, parameters)
    except (ValueError, TypeError) as error:
        raise usageError('Invalid domain spec %s: %s' % (text, error))
    raise usageError('Invalid domain spec %s' % text)

def parseComplex(token):
    token = token.strip().replace('i', 'j')
    token = re.sub(r'(^|[+-])j', r'\g<1>1j', token)
    try:
        return complex(token)
    except ValueError:
        raise usageError('Cannot read %s as a complex number' % token)

def parsePoint(T, text):
    """
    Parse a point: comma separated complex numbers (a+bi), rows separated by
    ';', or diag(...) for matrix charts. Types II and III accept either the
    chart coordinates or the full m x m matrix.
    """
    text = text.replace(' ', '')
    if text.startswith('diag(') and text.endswith(')'):
        values = [parseComplex(v) for v in text[5:-1].split(',')]
        if T.kind not in ['I', 'II', 'III']:
            raise usageError('diag(...) needs a matrix domain, got %s' % T.label)
        shape = jts_core.matrixShape(T)
        if len(values) > min(shape):
            raise usageError('diag(...) has %s entries for a %sx%s matrix' % (len(values), shape[0], shape[1]))
        X = np.zeros(shape, dtype=complex)
        X[np.arange(len(values)), np.arange(len(values))] = values
        if T.kind == 'II' and np.any(X != 0):
            raise usageError('Type II matrices are antisymmetric; a diagonal point must vanish.')
        return jts_core.matrixToVector(T, X)

    values = np.array([parseComplex(v) for row in text.split(';') for v in row.split(',') if v != ''])
    if len(values) == T.dimension:
        return values
    if T.kind in ['II', 'III'] and len(values) == T.parameters[0]**2:
        X = values.reshape(T.parameters[0], T.parameters[0])
        sign = -1 if T.kind == 'II' else 1
        if np.max(np.abs(X - sign*X.T)) > 1e-12:
            raise usageError('Matrix is not %s' % ('antisymmetric' if sign < 0 else 'symmetric'))
        return jts_core.matrixToVector(T, X)
    raise usageError('Point has %s entries but %s has dimension %s' % (len(values), T.label, T.dimension))

def parseChain(D, text):
    """
    Parse a map chain: steps separated by '|', each one of identity,
    scale:c, transvection:<point> or inverse:<point>.
    """
    T = classical_domains._system(D)
    chain = automorphisms.mapChain()
    for step in text.split('|'):
        name, _, value = step.strip().partition(':')
        try:
            if name == 'identity':
                continue
            elif name == 'scale':
                chain.append('linear', parseComplex(value)*np.eye(T.dimension))
            elif name in ['transvection', 'inverse']:
                chain.append(name, automorphisms.transvection(T, parsePoint(T, value)))
            else:
                raise usageError('Unknown chain step %s' % name)
        except usageError:
            raise
        except ValueError as error:
            raise usageError('Invalid chain step %s: %s' % (step, error))
    return chain

def _emit(args, report):
    text = reportToJson(report)
    if args.out:
        with open(args.out, 'w') as of:
            of.write(text+'\n')
    else:
        print(text, file=args.report_stream)

def _writeTable(args, data, summary):
    """
    CSV goes to --csv (summary JSON to stdout or --out) or, without --csv, to
    stdout with the summary JSON on stderr.
    """
    if args.csv:
        data.to_csv(args.csv, index=False)
        _emit(args, summary)
    else:
        args.report_stream.write(data.to_csv(index=False))
        if args.out:
            _emit(args, summary)
        else:
            print(reportToJson(summary), file=sys.stderr)

def _required(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise usageError('Missing --%s (give it on the command line or in --config)' % name.replace('_', '-'))

def cmdDecompose(args):
    _required(args, 'domain', 'point')
    T = parseDomain(args.domain)
    x = parsePoint(T, args.point)
    sd = classical_domains.decompose(T, x, tol=args.tol, method=args.method)
    tripotent = [float(jts_core.traceFormNorm(T, jts_core.oddPower(T, e, 1) - e)) for e in sd.frame]
    orthogonality = [float(np.linalg.norm(jts_core.operatorD(T, sd.frame[i], sd.frame[j]), 2))
                     for i in range(sd.s) for j in range(i)]
    residuals = {'reconstruction': float(np.linalg.norm(x - sd.reconstruct())),
                 'tripotent': max(tripotent, default=0.0),
                 'orthogonality': max(orthogonality, default=0.0)}
    _emit(args, {'domain': T.label, 'lambdas': sd.lambdas, 'frame': sd.frame, 'residuals': residuals})
    return 0 if max(residuals.values()) <= 1e-8 else 1

def cmdClassify(args):
    _required(args, 'domain', 'point')
    T = parseDomain(args.domain)
    x = parsePoint(T, args.point)
    location = classical_domains.contains(T, x, args.tol)
    if location != 'Boundary':
        print('Point is %s (spectral norm %.12g); classification needs a boundary point.'
              % (location, classical_domains.spectralNorm(T, x)), file=sys.stderr)
        return 1
    c = boundary_geometry.classifyBoundaryPoint(T, x, args.tol)
    shilov, evidence = boundary_geometry.isShilov(T, x, args.tol, seed=args.seed)
    _emit(args, {'domain': T.label, 'stratum': c.stratum_rank, 'e': c.e, 'v': c.v,
                 'interior_norm': c.interior_norm, 'shilov': shilov, 'evidence': evidence,
                 'arc_component_dimension': len(boundary_geometry.arcComponentBasis(T, x, args.tol))})
    return 0

def cmdPierce(args):
    _required(args, 'domain', 'point')
    T = parseDomain(args.domain)
    e = parsePoint(T, args.point)
    pd = classical_domains.pierce(T, e, args.tol)
    _emit(args, {'domain': T.label, 'dimensions': pd.dimensions, 'eigenvalues': pd.eigenvalues,
                 'rank': classical_domains.tripotentRank(T, e, args.tol),
                 'maximal': pd.dimensions[0] == 0,
                 'relation_residual': classical_domains.pierceRelationResidual(T, e, args.tol)})
    return 0

def cmdScan(args):
    _required(args, 'domain', 'w', 'p')
    T = parseDomain(args.domain)
    w = parsePoint(T, args.w)
    p = parsePoint(T, args.p)
    scan = boundary_geometry.scanBergmanDeterminant(T, w, p, grid_size=args.grid, cpus=args.cpus,
                                                     verbose=args.verbose)
    _writeTable(args, scan['data'], {'domain': T.label, 'min_abs': scan['min_abs'],
                                     'argmin_theta': scan['argmin_theta'], 'grid': args.grid})
    return 0

def cmdCircle(args):
    _required(args, 'domain', 'z0', 'p')
    T = parseDomain(args.domain)
    z0 = parsePoint(T, args.z0)
    p = parsePoint(T, args.p)
    w = boundary_geometry.findGoodCircle(T, z0, p, search_radius=args.radius, floor=args.floor,
                                         budget=args.budget, grid_size=args.grid, seed=args.seed,
                                         tol=args.tol, verbose=args.verbose)
    scan = boundary_geometry.scanBergmanDeterminant(T, w, p, grid_size=args.grid)
    _emit(args, {'domain': T.label, 'w': w, 'min_abs': scan['min_abs'], 'argmin_theta': scan['argmin_theta']})
    return 0

def cmdApply(args):
    _required(args, 'domain', 'a', 'point')
    T = parseDomain(args.domain)
    g = automorphisms.transvection(T, parsePoint(T, args.a))
    if args.inverse:
        g = g.inverse()
    z = parsePoint(T, args.point)
    image = g.apply(z)
    _emit(args, {'domain': T.label, 'transvection': g.toDict(), 'image': image,
                 'derivative': g.derivative(z),
                 'image_norm': classical_domains.spectralNorm(T, image)})
    return 0

def cmdOrbit(args):
    _required(args, 'domain', 'p')
    T = parseDomain(args.domain)
    p = parsePoint(T, args.p)
    a0 = parsePoint(T, args.a0) if args.a0 else None
    run = rigidity.orbitConvergenceRun(T, p, a0=a0, k_max=args.k_max, compact_radius=args.radius,
                                       seed=args.seed, verbose=args.verbose)
    summary = {key: value for key, value in run.items() if key != 'data'}
    summary['domain'] = T.label
    if args.csv:
        run['data'].to_csv(args.csv, index=False)
    _emit(args, summary)
    return 0

def cmdKernel(args):
    _required(args, 'domain')
    T = parseDomain(args.domain)
    K = rigidity.kernelSpecFromSystem(T)
    report = rigidity.compareKernelTensor(K, args.step)
    report['tolerance'] = 1e-4
    _emit(args, report)
    return 0 if report['max_error'] <= 1e-4 else 1

def cmdPeak(args):
    _required(args, 'domain', 'p')
    T = parseDomain(args.domain)
    p = parsePoint(T, args.p)
    pf = boundary_geometry.peakFunction(T, p, samples=args.samples, seed=args.seed)
    _emit(args, {'domain': T.label, 'p': p, 'functional': pf.functional,
                 'max_abs_away_from_p': pf.verify(samples=args.samples, seed=args.seed)})
    return 0

def cmdRigidity(args):
    _required(args, 'domain', 'chain')
    T1 = parseDomain(args.domain)
    T2 = parseDomain(args.target) if args.target else T1
    F = parseChain(T1, args.chain)
    if args.p:
        p = parsePoint(T1, args.p)
    else:
        p = classical_domains.referenceMaximalTripotent(T1)
    k_values = [int(k) for k in args.k_values.split(',')] if args.k_values else None
    run = rigidity.rescalingPipeline(T1, T2, F, p, k_max=args.k_max, k_values=k_values,
                                     seed=args.seed, verbose=args.verbose)
    if args.csv:
        run.toDataFrame().to_csv(args.csv, index=False)
    _emit(args, run.toDict())
    return 0 if run.verdict == 'LINEAR_LIMIT' else 1

def buildParser():

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default=None, help='JSON file whose keys mirror the long options.')
    common.add_argument('--seed', default=0, type=int, help='Random seed for every sampled quantity.')
    common.add_argument('--tol', default=1e-9, type=float, help='Spectral tolerance.')
    common.add_argument('--out', default=None, help='Write the JSON report to this file.')
    common.add_argument('--csv', default=None, help='Write tabular output to this CSV file.')
    common.add_argument('--verbose', default=False, action='store_true', help='Progress messages on stderr.')
    common.add_argument('--domain', default=None, help='Domain spec, e.g. ball:2, I:2,2, prod(ball:1;ball:1).')

    parser = argparse.ArgumentParser(prog='jordan-domains',
                                     description='Numerical geometry of classical bounded symmetric domains.')
    subparsers = parser.add_subparsers(dest='command')

    sub = subparsers.add_parser('decompose', parents=[common], help='Spectral decomposition of a point.')
    sub.add_argument('--point', default=None)
    sub.add_argument('--method', default='chart', choices=['chart', 'generic'])
    sub.set_defaults(function=cmdDecompose)

    sub = subparsers.add_parser('classify', parents=[common], help='Boundary stratum and Shilov test.')
    sub.add_argument('--point', default=None)
    sub.set_defaults(function=cmdClassify)

    sub = subparsers.add_parser('pierce', parents=[common], help='Pierce decomposition of a tripotent.')
    sub.add_argument('--point', default=None, help='Tripotent.')
    sub.set_defaults(function=cmdPierce)

    sub = subparsers.add_parser('scan', parents=[common], help='|det B(zeta w, p)| on the unit circle.')
    sub.add_argument('--w', default=None)
    sub.add_argument('--p', default=None)
    sub.add_argument('--grid', default=720, type=int)
    sub.add_argument('--cpus', default=1, type=int)
    sub.set_defaults(function=cmdScan)

    sub = subparsers.add_parser('circle', parents=[common], help='Search a circle avoiding det B = 0.')
    sub.add_argument('--z0', default=None)
    sub.add_argument('--p', default=None)
    sub.add_argument('--floor', default=1e-3, type=float)
    sub.add_argument('--radius', default=0.1, type=float)
    sub.add_argument('--budget', default=200, type=int)
    sub.add_argument('--grid', default=360, type=int)
    sub.set_defaults(function=cmdCircle)

    sub = subparsers.add_parser('apply', parents=[common], help='Evaluate a transvection.')
    sub.add_argument('--a', default=None)
    sub.add_argument('--point', default=None)
    sub.add_argument('--inverse', default=False, action='store_true')
    sub.set_defaults(function=cmdApply)

    sub = subparsers.add_parser('orbit', parents=[common], help='Orbit convergence to a Shilov point.')
    sub.add_argument('--p', default=None)
    sub.add_argument('--a0', default=None)
    sub.add_argument('--k-max', default=400, type=int)
    sub.add_argument('--radius', default=0.5, type=float)
    sub.set_defaults(function=cmdOrbit)

    sub = subparsers.add_parser('kernel', parents=[common], help='Triple product from the Bergman kernel.')
    sub.add_argument('--step', default=1e-2, type=float)
    sub.set_defaults(function=cmdKernel)

    sub = subparsers.add_parser('peak', parents=[common], help='Peak function at a Shilov point.')
    sub.add_argument('--p', default=None)
    sub.add_argument('--samples', default=10000, type=int)
    sub.set_defaults(function=cmdPeak)

    sub = subparsers.add_parser('rigidity', parents=[common], help='Rescaling pipeline for a map chain.')
    sub.add_argument('--target', default=None, help='Target domain spec (defaults to --domain).')
    sub.add_argument('--chain', default=None, help='Steps separated by |: identity, scale:c, transvection:a, inverse:a.')
    sub.add_argument('--p', default=None)
    sub.add_argument('--k-max', default=400, type=int)
    sub.add_argument('--k-values', default=None, help='Comma separated k indexes.')
    sub.set_defaults(function=cmdRigidity)

    parser.subcommands = subparsers.choices
    return parser

def main(argv=None):
    """
    Entry point. Exit codes: 0 success, 1 failed mathematical check,
    2 usage or parse error.
    """
    if argv is None:
        argv = sys.argv[1:]
    parser = buildParser()

    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument('--config', default=None)
    known = pre.parse_known_args(argv)[0]
    if known.config:
        try:
            config = readJsonFile(known.config)
        except (OSError, ValueError) as error:
            print('Cannot read config %s: %s' % (known.config, error), file=sys.stderr)
            return 2
        config = {str(k).replace('-', '_'): v for k, v in config.items()}
        for sub in parser.subcommands.values():
            sub.set_defaults(**config)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exit:
        return exit.code if isinstance(exit.code, int) else 2
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2

    # library progress prints go to stderr, reports keep stdout
    args.report_stream = sys.stdout
    try:
        if args.verbose:
            with contextlib.redirect_stdout(sys.stderr):
                return args.function(args)
        return args.function(args)
    except usageError as error:
        print('Usage error: %s' % error, file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as error:
        print('%s: %s' % (type(error).__name__, error), file=sys.stderr)
        return 1

if __name__ == '__main__':
    sys.exit(main())
