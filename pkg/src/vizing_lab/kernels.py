"""Hot kernels with a compiled implementation and a pure-Python fallback.

``layered_mass`` computes, for every vertex ``x`` of a graph given in CSR form,

    acc[x] = sum over z != x in the component of x of weight[z] * coef[d(x, z)]

together with the eccentricity of ``x``.  The compiled version is a
bit-parallel BFS over 64 sources at a time; the fallback runs scipy's BFS in
batches.  ``BACKEND`` names the implementation picked at import time; set
``VIZING_LAB_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

_BATCH = 256


def layered_mass_python(indptr: np.ndarray, indices: np.ndarray, weight: np.ndarray, coef: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(indptr) - 1
    acc = np.zeros(n, dtype=np.float64)
    ecc = np.zeros(n, dtype=np.int64)
    if n == 0:
        return acc, ecc
    adj = csr_matrix((np.ones(len(indices)), indices, indptr), shape=(n, n))
    table = np.append(np.asarray(coef, dtype=np.float64), 0.0)
    for lo in range(0, n, _BATCH):
        src = np.arange(lo, min(n, lo + _BATCH))
        dist = shortest_path(adj, directed=False, unweighted=True, indices=src)
        reach = np.isfinite(dist)
        d = np.where(reach, dist, len(table) - 1).astype(np.int64)
        d[d >= len(table)] = len(table) - 1
        d[np.arange(len(src)), src] = len(table) - 1
        acc[src] = (table[d] * weight[None, :]).sum(axis=1)
        ecc[src] = np.where(reach, dist, 0).max(axis=1).astype(np.int64)
    return acc, ecc


try:
    if os.environ.get("VIZING_LAB_PURE"):
        raise ImportError("pure mode requested")
    from ._kernels import layered_mass as _layered_mass_compiled

    BACKEND = "compiled"
except ImportError:
    _layered_mass_compiled = None
    BACKEND = "python"


def layered_mass_compiled(indptr, indices, weight, coef):
    if _layered_mass_compiled is None:
        raise RuntimeError("compiled kernels are not built")
    return _layered_mass_compiled(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(weight, dtype=np.float64),
        np.ascontiguousarray(coef, dtype=np.float64),
    )


def layered_mass(indptr, indices, weight, coef) -> tuple[np.ndarray, np.ndarray]:
    """Dispatch to the selected backend; ``coef`` is padded so every distance is covered."""
    n = len(indptr) - 1
    coef = np.asarray(coef, dtype=np.float64)
    if len(coef) < n + 1:
        coef = np.concatenate([coef, np.zeros(n + 1 - len(coef))])
    if _layered_mass_compiled is not None:
        return layered_mass_compiled(indptr, indices, weight, coef)
    return layered_mass_python(np.asarray(indptr), np.asarray(indices), np.asarray(weight, dtype=np.float64), coef)
