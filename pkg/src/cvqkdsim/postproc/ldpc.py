"""Sparse LDPC codes: alist I/O, syndrome computation, BP decoding.

Codes are stored in the standard alist text interchange format and held
in memory as flat edge arrays grouped by check node, which is what the
decoding kernels consume.  Decoding is sum-product in the syndrome
formulation with a flooding schedule: deterministic given inputs, and
non-convergence is a result rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .._accel import bp_decode_kernel

MAX_CHECK_DEGREE = 63   # kernel work-array bound


@dataclass(frozen=True)
class LdpcCode:
    """Parity-check structure H (m x n) as edges grouped by check row."""

    n: int
    m: int
    check_ptr: np.ndarray        # int64, len m+1
    edge_var: np.ndarray         # int64, len E: column of each edge

    def __post_init__(self):
        if self.m >= self.n:
            raise ValueError("code must have m < n")
        object.__setattr__(self, "check_ptr",
                           np.ascontiguousarray(self.check_ptr, dtype=np.int64))
        object.__setattr__(self, "edge_var",
                           np.ascontiguousarray(self.edge_var, dtype=np.int64))
        degs = np.diff(self.check_ptr)
        if len(degs) != self.m or self.check_ptr[-1] != len(self.edge_var):
            raise ValueError("inconsistent check_ptr/edge_var structure")
        if degs.max(initial=0) > MAX_CHECK_DEGREE:
            raise ValueError(f"check degree above kernel limit {MAX_CHECK_DEGREE}")
        counts = np.bincount(self.edge_var, minlength=self.n)
        if counts.min(initial=1) == 0:
            raise ValueError("every column must have at least one nonzero entry")

    @property
    def rate(self) -> float:
        return 1.0 - self.m / self.n

    @property
    def n_edges(self) -> int:
        return int(len(self.edge_var))

    def column_lists(self):
        """1-based row indices per column (alist orientation)."""
        cols = [[] for _ in range(self.n)]
        for c in range(self.m):
            for e in range(self.check_ptr[c], self.check_ptr[c + 1]):
                cols[self.edge_var[e]].append(c + 1)
        return cols

    @classmethod
    def from_row_lists(cls, n: int, rows) -> "LdpcCode":
        """Build from per-check 0-based column index lists."""
        degs = np.array([len(r) for r in rows], dtype=np.int64)
        check_ptr = np.concatenate([[0], np.cumsum(degs)])
        edge_var = np.concatenate([np.asarray(sorted(r), dtype=np.int64) for r in rows])
        return cls(n=n, m=len(rows), check_ptr=check_ptr, edge_var=edge_var)


def ldpc_syndrome(code: LdpcCode, bits) -> np.ndarray:
    """s = H x over GF(2)."""
    bits = np.asarray(bits, dtype=np.uint8)
    if len(bits) != code.n:
        raise ValueError(f"bit vector length {len(bits)} != n = {code.n}")
    sums = np.add.reduceat(bits[code.edge_var].astype(np.int64), code.check_ptr[:-1])
    return (sums & 1).astype(np.uint8)


def bp_decode(code: LdpcCode, llrs, target_syndrome, max_iters: int = 200,
              force_backend: str | None = None):
    """Sum-product decode toward a target syndrome.

    Returns (bits, converged, iters); converged means H bits == syndrome.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    target_syndrome = np.asarray(target_syndrome, dtype=np.uint8)
    if len(llrs) != code.n:
        raise ValueError(f"llr length {len(llrs)} != n = {code.n}")
    if len(target_syndrome) != code.m:
        raise ValueError(f"syndrome length {len(target_syndrome)} != m = {code.m}")
    bits, converged, iters = bp_decode_kernel(
        llrs, code.check_ptr, code.edge_var, target_syndrome, max_iters,
        force_backend=force_backend)
    return bits, bool(converged), int(iters)


def load_alist(path) -> LdpcCode:
    """Read an alist file (n m / max degs / col degs / row degs / index lists)."""
    tokens = Path(path).read_text().split()
    it = iter(tokens)

    def nxt():
        return int(next(it))

    n, m = nxt(), nxt()
    _max_col, _max_row = nxt(), nxt()
    col_degs = [nxt() for _ in range(n)]
    row_degs = [nxt() for _ in range(m)]
    # column lists (1-based, may be zero-padded to max_col)
    cols = []
    for j in range(n):
        entries = []
        for _ in range(col_degs[j]):
            entries.append(nxt())
        cols.append(entries)
        # tolerate zero padding
        rest = _max_col - col_degs[j]
        for _ in range(rest):
            pad = next(it, None)
            if pad is None:
                break
            if int(pad) != 0:
                raise ValueError("alist column padding must be zero")
    rows = [[] for _ in range(m)]
    for j, entries in enumerate(cols):
        for r in entries:
            if not 1 <= r <= m:
                raise ValueError(f"alist row index {r} out of range")
            rows[r - 1].append(j)
    for i, deg in enumerate(row_degs):
        if len(rows[i]) != deg:
            raise ValueError(f"row {i} degree mismatch: {len(rows[i])} != {deg}")
    return LdpcCode.from_row_lists(n, rows)


def save_alist(code: LdpcCode, path) -> None:
    """Write the standard alist format (zero-padded index lists)."""
    cols = code.column_lists()
    rows = [[] for _ in range(code.m)]
    for c in range(code.m):
        for e in range(code.check_ptr[c], code.check_ptr[c + 1]):
            rows[c].append(int(code.edge_var[e]) + 1)
    max_col = max(len(c) for c in cols)
    max_row = max(len(r) for r in rows)
    lines = [f"{code.n} {code.m}", f"{max_col} {max_row}"]
    lines.append(" ".join(str(len(c)) for c in cols))
    lines.append(" ".join(str(len(r)) for r in rows))
    for c in cols:
        lines.append(" ".join(str(v) for v in c + [0] * (max_col - len(c))))
    for r in rows:
        lines.append(" ".join(str(v) for v in r + [0] * (max_row - len(r))))
    Path(path).write_text("\n".join(lines) + "\n")
