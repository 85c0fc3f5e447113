"""Finite weighted ground spaces, orthonormal families and the kernel.

Factor m of the ground space is the point set {1, ..., S_m} carrying
positive weights w_m. Each factor has L functions psi_{m,l}, stored as
the columns of an S_m x L matrix, orthonormal for the weighted inner
product. All point coordinates are 1-based.
"""
from dataclasses import dataclass
import itertools

import numpy as np

from .errors import RankError, ShapeError
from .tensor import HypercubicArray, as_matrix


@dataclass(frozen=True, eq=False)
class GroundSpace:
    """Product of finite factors with strictly positive weights."""

    sizes: tuple
    weights: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes:
            raise ShapeError("ground space needs at least one factor")
        if any(s < 1 for s in sizes):
            raise ShapeError(f"factor sizes must be >= 1, got {sizes}")
        if self.weights is None:
            weights = tuple(np.ones(s) for s in sizes)
        else:
            weights = tuple(np.array(w, dtype=np.float64) for w in self.weights)
        if len(weights) != len(sizes):
            raise ShapeError("one weight vector per factor is required")
        for s, w in zip(sizes, weights):
            if w.shape != (s,):
                raise ShapeError(f"weight vector of shape {w.shape} for a factor of size {s}")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise ValueError("weights must be finite and strictly positive")
            w.flags.writeable = False
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, sizes):
        return cls(tuple(sizes), None)

    @property
    def m(self):
        return len(self.sizes)

    @property
    def n_points(self):
        return int(np.prod(self.sizes))

    def points(self):
        """All points of the product space in lexicographic order."""
        return list(itertools.product(*(range(1, s + 1) for s in self.sizes)))

    def point_weights(self):
        """Product weight of every point, aligned with ``points()``."""
        w = np.ones(1)
        for wm in self.weights:
            w = np.outer(w, wm).reshape(-1)
        return w

    def weight(self, point):
        return float(np.prod([self.weights[m][x - 1] for m, x in enumerate(point)]))

    def check_point(self, point):
        if len(point) != self.m:
            raise IndexError(f"point {point} needs {self.m} coordinates")
        for m, x in enumerate(point):
            if not 1 <= x <= self.sizes[m]:
                raise IndexError(f"coordinate {x} of factor {m + 1} outside 1..{self.sizes[m]}")


@dataclass(frozen=True, eq=False)
class OrthonormalSystem:
    """L functions on each factor, column l of ``psi[m]`` being psi_{m,l}.

    Orthonormality is not enforced here; see ``validate_orthonormal``.
    """

    space: GroundSpace
    psi: tuple

    def __post_init__(self):
        psi = tuple(as_matrix(p, "psi").copy() for p in self.psi)
        if len(psi) != self.space.m:
            raise ShapeError(f"expected {self.space.m} psi matrices, got {len(psi)}")
        ell = psi[0].shape[1]
        if ell < 1:
            raise RankError("rank L must be >= 1")
        for s, p in zip(self.space.sizes, psi):
            if p.shape != (s, ell):
                raise ShapeError(f"psi matrix of shape {p.shape}, expected {(s, ell)}")
            p.flags.writeable = False
        if ell > min(self.space.sizes):
            raise RankError(f"L={ell} exceeds the smallest factor size {min(self.space.sizes)}")
        object.__setattr__(self, "psi", psi)

    @property
    def m(self):
        return self.space.m

    @property
    def rank(self):
        return self.psi[0].shape[1]

    def drop_last_factor(self):
        space = GroundSpace(self.space.sizes[:-1], self.space.weights[:-1])
        return OrthonormalSystem(space, self.psi[:-1])


@dataclass(frozen=True)
class PointConfig:
    """An ordered list of N points, each an M-tuple of 1-based coordinates."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(tuple(int(x) for x in pt) for pt in self.coords)
        if coords and len({len(pt) for pt in coords}) != 1:
            raise ShapeError("all points need the same number of coordinates")
        object.__setattr__(self, "coords", coords)

    @property
    def n(self):
        return len(self.coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def append(self, point):
        return PointConfig(self.coords + (tuple(point),))

    def prefix(self, n):
        return PointConfig(self.coords[:n])

    def permuted(self, order):
        return PointConfig(tuple(self.coords[i] for i in order))

    def check(self, space):
        for pt in self.coords:
            space.check_point(pt)


def validate_orthonormal(sys):
    """Largest deviation of the weighted Gram matrices from the identity.

    Returns
    -------
    dict
        ``{"per_factor": [...], "max": float}``
    """
    devs = []
    for w, p in zip(sys.space.weights, sys.psi):
        gram = p.T @ (w[:, None] * p.conj())
        devs.append(float(np.max(np.abs(gram - np.eye(p.shape[1])))))
    return {"per_factor": devs, "max": max(devs)}


def haar_unitary(size, rng):
    """Haar-distributed unitary via QR with a positive real R diagonal."""
    z = (rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phase = d / np.abs(d)
    return q * phase[None, :]


def dft_unitary(size):
    k = np.arange(size)
    return np.exp(-2j * np.pi * np.outer(k, k) / size) / np.sqrt(size)


KINDS = ("haar", "dft", "identity")


def gen_system(m, sizes, rank, kind="haar", seed=0, weights=None):
    """Generate an orthonormal system on a finite ground space.

    Each factor takes the first ``rank`` columns of a unitary (Haar, DFT
    or identity) and divides row s by sqrt(w_m(s)), which makes the
    columns orthonormal for the weighted inner product.
    """
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) != m:
        raise ShapeError(f"got {len(sizes)} sizes for M={m}")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; choose from {KINDS}")
    if rank < 1:
        raise RankError("rank L must be >= 1")
    for s in sizes:
        if rank > s:
            raise RankError(f"L={rank} exceeds factor size {s}")
    space = GroundSpace(sizes, weights)
    rng = np.random.default_rng(seed)
    psi = []
    for s, w in zip(sizes, space.weights):
        if kind == "haar":
            u = haar_unitary(s, rng)
        elif kind == "dft":
            u = dft_unitary(s)
        else:
            u = np.eye(s, dtype=np.complex128)
        psi.append(u[:, :rank] / np.sqrt(w)[:, None])
    return OrthonormalSystem(space, tuple(psi))


def eval_kernel(sys, y, z):
    """K(y; z) = sum_l prod_m psi_{m,l}(y_m) conj(psi_{m,l}(z_m))."""
    sys.space.check_point(y)
    sys.space.check_point(z)
    acc = np.ones(sys.rank, dtype=np.complex128)
    for p, a, b in zip(sys.psi, y, z):
        acc = acc * p[a - 1] * p[b - 1].conj()
    return complex(acc.sum())


def b_matrices(sys, pts):
    """Per-factor N x L matrices B_m[n, l] = psi_{m,l}(coords[n][m])."""
    pts.check(sys.space)
    if pts.n == 0:
        return [np.zeros((0, sys.rank), dtype=np.complex128) for _ in range(sys.m)]
    idx = np.array(pts.coords, dtype=np.intp) - 1
    return [p[idx[:, m]] for m, p in enumerate(sys.psi)]


def kernel_array(sys, pts):
    """The 2M-way array B(i_1..i_M; j_1..j_M) = K(x_{i_1,1}, ..., x_{i_M,M}; x_{j_1,1}, ...).

    Built entry by entry from ``eval_kernel``; used as an independent
    route to the densities.
    """
    pts.check(sys.space)
    m, n = sys.m, pts.n
    entries = np.empty((n,) * (2 * m), dtype=np.complex128)
    for index in itertools.product(range(n), repeat=2 * m):
        y = tuple(pts.coords[index[k]][k] for k in range(m))
        z = tuple(pts.coords[index[m + k]][k] for k in range(m))
        entries[index] = eval_kernel(sys, y, z)
    return HypercubicArray(m, n, entries)
