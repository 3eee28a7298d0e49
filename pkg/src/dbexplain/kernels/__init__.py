"""Scan-kernel backend selection.

The participation scan (the O(|D|^k) inner loop behind the polynomial
repair-core computation) exists twice: a Cython extension built at install
time and a pure-Python fallback with identical semantics.  The compiled
backend is preferred when the import succeeds; everything else in the
package is backend-agnostic.  ``benchmarks/bench_kernels.py`` compares the
two implementations.
"""

from __future__ import annotations

from . import _scan_py

try:  # compiled extension is optional
    from . import _scan_c  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on the build environment
    _scan_c = None

__all__ = ["participation_masks", "backend_name", "available_backends"]

Row = tuple[int, ...]
PairEqs = list[list[tuple[tuple[int, int], ...]]]


def backend_name() -> str:
    return "compiled" if _scan_c is not None else "python"


def available_backends() -> tuple[str, ...]:
    return ("python", "compiled") if _scan_c is not None else ("python",)


def _masks_compiled(rows: list[list[Row]], pair_eqs: PairEqs) -> list[list[bool]]:
    import numpy as np

    k = len(rows)
    width = max([len(r) for atom in rows for r in atom], default=0)
    width = max(width, 1)
    total = sum(len(atom) for atom in rows)
    big = np.zeros((max(total, 1), width), dtype=np.int32)
    offs = np.zeros(k + 1, dtype=np.int32)
    pos = 0
    for j, atom in enumerate(rows):
        offs[j] = pos
        for r in atom:
            big[pos, : len(r)] = r
            pos += 1
    offs[k] = pos

    cstart = np.zeros(k * k, dtype=np.int32)
    clen = np.zeros(k * k, dtype=np.int32)
    ca: list[int] = []
    cb: list[int] = []
    for i in range(k):
        for j in range(k):
            cstart[i * k + j] = len(ca)
            pairs = pair_eqs[i][j]
            clen[i * k + j] = len(pairs)
            for a, b in pairs:
                ca.append(a)
                cb.append(b)
    ca_arr = np.asarray(ca or [0], dtype=np.int32)
    cb_arr = np.asarray(cb or [0], dtype=np.int32)

    flat = _scan_c.participation_masks_c(big, offs, cstart, clen, ca_arr, cb_arr)
    out: list[list[bool]] = []
    for j in range(k):
        out.append([bool(flat[r]) for r in range(offs[j], offs[j + 1])])
    return out


def participation_masks(rows: list[list[Row]], pair_eqs: PairEqs,
                        backend: str | None = None) -> list[list[bool]]:
    """Per atom position, a mask over its candidate rows: True iff the row
    occurs in some full satisfying combination pinned at that position."""
    if backend is None:
        backend = backend_name()
    if backend == "compiled":
        if _scan_c is None:
            raise RuntimeError("compiled kernel is not available")
        return _masks_compiled(rows, pair_eqs)
    if backend == "python":
        return _scan_py.participation_masks(rows, pair_eqs)
    raise ValueError(f"unknown backend {backend!r}")
