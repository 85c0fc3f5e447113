"""JSON encodings of the library's data types.

Complex numbers are ``[re, im]`` pairs, matrices nested row-major lists
of them. Floats go through ``repr`` so every value round-trips exactly.
"""
import json

import numpy as np

from .errors import ShapeError
from .kernel import GroundSpace, OrthonormalSystem, PointConfig
from .tensor import HypercubicArray


def complex_to_json(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def complex_from_json(v):
    if isinstance(v, (int, float)):
        return complex(v)
    if len(v) != 2:
        raise ShapeError(f"complex number must be [re, im], got {v!r}")
    return complex(float(v[0]), float(v[1]))


def matrix_to_json(a):
    a = np.asarray(a, dtype=np.complex128)
    return [[complex_to_json(z) for z in row] for row in a]


def matrix_from_json(rows):
    return np.array([[complex_from_json(v) for v in row] for row in rows], dtype=np.complex128)


def array_to_json(a):
    return {"m": a.m, "n": a.n, "entries": [complex_to_json(z) for z in a.flat()]}


def array_from_json(obj):
    flat = [complex_from_json(v) for v in obj["entries"]]
    return HypercubicArray.from_flat(int(obj["m"]), int(obj["n"]), flat)


def system_to_json(sys):
    return {
        "m": sys.m,
        "sizes": list(sys.space.sizes),
        "weights": [w.tolist() for w in sys.space.weights],
        "l": sys.rank,
        "psi": [matrix_to_json(p) for p in sys.psi],
    }


def system_from_json(obj):
    sizes = tuple(int(s) for s in obj["sizes"])
    if int(obj["m"]) != len(sizes):
        raise ShapeError(f"m={obj['m']} but {len(sizes)} sizes given")
    space = GroundSpace(sizes, obj.get("weights"))
    psi = tuple(matrix_from_json(rows) for rows in obj["psi"])
    sys = OrthonormalSystem(space, psi)
    if "l" in obj and int(obj["l"]) != sys.rank:
        raise ShapeError(f"l={obj['l']} but psi matrices have {sys.rank} columns")
    return sys


def points_to_json(pts):
    return {"coords": [list(pt) for pt in pts.coords]}


def points_from_json(obj):
    if isinstance(obj, dict):
        obj = obj["coords"]
    return PointConfig(tuple(tuple(int(x) for x in pt) for pt in obj))


def load_system(path):
    with open(path) as fh:
        return system_from_json(json.load(fh))


def save_system(sys, path):
    with open(path, "w") as fh:
        json.dump(system_to_json(sys), fh, indent=1)
        fh.write("\n")
