"""Integer displacement-field containers and their plain-text formats.

All fields carry the hard bound ``rho``: construction fails if any entry
exceeds it in magnitude.  The text formats are:

* line displacement: one integer per line, ``n`` lines;
* scalar field: header ``"m n"``, then ``n`` rows of ``m`` integers;
* vector field: header ``"m n"``, then ``n`` rows of ``m`` comma-separated
  ``d1,d2`` pairs.

Files do not store ``rho``; loading reports the tightest bound, i.e. the
maximum magnitude present.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _as_int_array(values, shape_desc: str) -> np.ndarray:
    arr = np.asarray(values)
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(np.asarray(arr, dtype=np.float64))
        if not np.array_equal(rounded, arr):
            raise ValueError(f"{shape_desc} must be integer-valued")
        arr = rounded
    return arr.astype(np.int64)


def _check_rho(arr: np.ndarray, rho: int) -> None:
    if rho < 0:
        raise ValueError(f"rho must be non-negative, got {rho}")
    if arr.size and int(np.max(np.abs(arr))) > rho:
        raise ValueError(
            f"displacement magnitude {int(np.max(np.abs(arr)))} exceeds rho={rho}"
        )


@dataclass(frozen=True, eq=False)
class LineDisplacement:
    """One integer horizontal shift per row, bounded by rho."""

    values: np.ndarray
    rho: int

    def __post_init__(self):
        arr = _as_int_array(self.values, "line displacements")
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError(f"expected a 1-D displacement vector, got shape {arr.shape}")
        _check_rho(arr, self.rho)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True, eq=False)
class ScalarField:
    """One integer horizontal shift per pixel, shape (n, m), bounded by rho."""

    values: np.ndarray
    rho: int

    def __post_init__(self):
        arr = _as_int_array(self.values, "scalar field")
        if arr.ndim != 2 or arr.size < 1:
            raise ValueError(f"expected a 2-D field, got shape {arr.shape}")
        _check_rho(arr, self.rho)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class VectorField:
    """One integer (d1, d2) shift per pixel, shape (n, m, 2), each component bounded by rho."""

    values: np.ndarray
    rho: int

    def __post_init__(self):
        arr = _as_int_array(self.values, "vector field")
        if arr.ndim != 3 or arr.shape[2] != 2 or arr.size < 1:
            raise ValueError(f"expected a field of shape (n, m, 2), got {arr.shape}")
        _check_rho(arr, self.rho)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def dx(self) -> np.ndarray:
        return self.values[:, :, 0]

    @property
    def dy(self) -> np.ndarray:
        return self.values[:, :, 1]


@dataclass(frozen=True)
class EnergyParams:
    """Energy weights: alpha >= 0, exponent p > 0, derivative order in {1, 2}, bound rho >= 0.

    The pixel-jitter energy uses first-order differences only and ignores
    ``order``.
    """

    alpha: float
    p: float
    order: int = 1
    rho: int = 0

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if self.p <= 0:
            raise ValueError(f"p must be positive, got {self.p}")
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")
        if self.rho < 0:
            raise ValueError(f"rho must be non-negative, got {self.rho}")

    @property
    def num_labels(self) -> int:
        return 2 * self.rho + 1


def labels_for(rho: int) -> np.ndarray:
    """The label table {-rho, ..., rho} in index order."""
    return np.arange(-rho, rho + 1, dtype=np.int64)


# ---------------------------------------------------------------------------
# text serialisation


def save_line_displacement(d: LineDisplacement, path) -> None:
    with open(path, "w") as fh:
        for v in d.values:
            fh.write(f"{int(v)}\n")


def load_line_displacement(path) -> LineDisplacement:
    with open(path) as fh:
        values = [int(line) for line in fh.read().split()]
    if not values:
        raise ValueError(f"{path}: empty displacement file")
    arr = np.asarray(values, dtype=np.int64)
    return LineDisplacement(arr, rho=int(np.max(np.abs(arr))))


def save_scalar_field(f: ScalarField, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{f.width} {f.height}\n")
        for row in f.values:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")


def load_scalar_field(path) -> ScalarField:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: expected header 'm n'")
        m, n = int(header[0]), int(header[1])
        rows = []
        for _ in range(n):
            row = [int(v) for v in fh.readline().split()]
            if len(row) != m:
                raise ValueError(f"{path}: expected {m} integers per row")
            rows.append(row)
    arr = np.asarray(rows, dtype=np.int64)
    return ScalarField(arr, rho=int(np.max(np.abs(arr))))


def save_vector_field(f: VectorField, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{f.width} {f.height}\n")
        for row in f.values:
            fh.write(" ".join(f"{int(d1)},{int(d2)}" for d1, d2 in row) + "\n")


def load_vector_field(path) -> VectorField:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: expected header 'm n'")
        m, n = int(header[0]), int(header[1])
        rows = []
        for _ in range(n):
            pairs = fh.readline().split()
            if len(pairs) != m:
                raise ValueError(f"{path}: expected {m} pairs per row")
            rows.append([[int(p) for p in pair.split(",")] for pair in pairs])
    arr = np.asarray(rows, dtype=np.int64)
    return VectorField(arr, rho=int(np.max(np.abs(arr))))
