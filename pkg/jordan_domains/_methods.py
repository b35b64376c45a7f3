import json
import numpy as np
import pandas as pd

def complexArrayToList(array):
    """
    Convert a complex array into nested lists of [real, imag] pairs.

    Parameters
    ----------
    array : numpy.ndarray
        Complex array of any shape

    Returns
    -------
    values : list
        Nested lists with the shape of ``array`` plus a trailing axis of 2.
    """
    array = np.asarray(array, dtype=complex)
    return np.stack([array.real, array.imag], axis=-1).tolist()

def listToComplexArray(values):
    """
    Inverse of complexArrayToList().
    """
    values = np.asarray(values, dtype=float)
    if values.shape[-1:] != (2,):
        raise ValueError('Complex values must be stored as [real, imag] pairs.')
    return values[..., 0] + 1j*values[..., 1]

def toJsonable(value):
    """
    Recursively convert numpy arrays, numpy scalars and complex numbers into
    JSON serializable objects. Complex values become [real, imag] pairs.
    """
    if isinstance(value, dict):
        return {str(k): toJsonable(v) for k, v in value.items()}
    elif isinstance(value, (list, tuple)):
        return [toJsonable(v) for v in value]
    elif isinstance(value, pd.DataFrame):
        return toJsonable(value.to_dict(orient='list'))
    elif isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return complexArrayToList(value)
        return value.tolist()
    elif isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    elif isinstance(value, np.bool_):
        return bool(value)
    elif isinstance(value, np.integer):
        return int(value)
    elif isinstance(value, np.floating):
        return float(value)
    return value

def reportToJson(report):
    """
    Serialize a report dictionary; the schema version is always included.
    """
    report = dict(report)
    report.setdefault('schema', 1)
    return json.dumps(toJsonable(report), indent=2, sort_keys=True)

def saveReportAsJson(report, output_file):
    """
    Write a report dictionary to a JSON file.

    Parameters
    ----------
    report : dict
        Report to store
    output_file : str
        Path to the output JSON file
    """
    with open(output_file, 'w') as of:
        of.write(reportToJson(report)+'\n')

def readJsonFile(json_file):
    with open(json_file) as jf:
        return json.load(jf)
