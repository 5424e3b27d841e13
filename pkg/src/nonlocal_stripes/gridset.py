"""Periodic sets on a uniform cell lattice of the torus [0, L)^d, plus a text format."""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FormatError
from .onedim import PeriodicSet1D

_MAGIC = "# gridset v1"


@dataclass(frozen=True, eq=False)
class GridSet:
    """Boolean occupancy of ``n^d`` cells of side ``L/n``; cell ``j`` covers ``[j s, (j+1) s)``."""

    L: float
    occupancy: np.ndarray

    def __post_init__(self):
        occ = np.array(self.occupancy, dtype=bool)
        if occ.ndim not in (1, 2, 3):
            raise DomainError("only d in {1, 2, 3} is supported")
        if len(set(occ.shape)) != 1 or occ.shape[0] < 1:
            raise DomainError("occupancy must be a cube array with n >= 1")
        if not float(self.L) > 0:
            raise DomainError("period must be positive")
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)
        object.__setattr__(self, "L", float(self.L))

    @property
    def d(self) -> int:
        return self.occupancy.ndim

    @property
    def n(self) -> int:
        return self.occupancy.shape[0]

    @property
    def cell(self) -> float:
        return self.L / self.n

    def __eq__(self, other):
        return (
            isinstance(other, GridSet)
            and self.L == other.L
            and np.array_equal(self.occupancy, other.occupancy)
        )

    __hash__ = None

    def complement(self) -> "GridSet":
        return GridSet(self.L, ~self.occupancy)

    def rolled(self, shift) -> "GridSet":
        """Translate by whole cells (one integer per axis)."""
        return GridSet(self.L, np.roll(self.occupancy, shift, axis=tuple(range(self.d))))

    def column(self, axis, index) -> np.ndarray:
        """The 0/1 column along ``axis`` through the perpendicular cell ``index`` (d-1 ints)."""
        moved = np.moveaxis(self.occupancy, axis, -1)
        return moved[tuple(index)]

    def slice1d(self, axis, index) -> PeriodicSet1D:
        """The 1D slice along ``axis`` as a periodic set with boundaries on cell faces."""
        return profile_to_set(self.column(axis, index), self.L)


def profile_to_set(column, L) -> PeriodicSet1D:
    """Cell column of booleans to a PeriodicSet1D (boundary k sits at the left face of cell k)."""
    v = np.asarray(column, dtype=bool)
    n = v.size
    jumps = np.flatnonzero(v != np.roll(v, 1))
    return PeriodicSet1D(L, tuple(jumps * (L / n)), bool(v[0]))


def per1_dir(S: GridSet, axis: int) -> float:
    """Length of the boundary faces orthogonal to ``axis``."""
    occ = S.occupancy
    flips = int(np.count_nonzero(occ != np.roll(occ, 1, axis=axis)))
    return flips * S.cell ** (S.d - 1)


def per1(S: GridSet) -> float:
    """Anisotropic 1-perimeter per period cell."""
    return sum(per1_dir(S, i) for i in range(S.d))


def format_gridset(S: GridSet, meta=None) -> str:
    lines = [_MAGIC, f"d {S.d}", f"L {S.L!r}", f"n {S.n}"]
    for key, value in (meta or {}).items():
        lines.append(f"{key} {value!r}" if isinstance(value, float) else f"{key} {value}")
    lines.append("data")
    rows = S.occupancy.reshape(-1, S.n)
    lines.extend("".join("1" if c else "0" for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def parse_gridset(text: str):
    """Return ``(GridSet, meta)``; ``meta`` holds extra header keys such as alpha or tau."""
    stream = io.StringIO(text)
    first = stream.readline().strip()
    if first != _MAGIC:
        raise FormatError("not a gridset file (missing header line)")
    header = {}
    for line in stream:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line == "data":
            break
        key, _, value = line.partition(" ")
        header[key] = value.strip()
    else:
        raise FormatError("gridset file has no data section")
    try:
        d, n, L = int(header.pop("d")), int(header.pop("n")), float(header.pop("L"))
    except KeyError as exc:
        raise FormatError(f"gridset header is missing {exc.args[0]!r}") from None
    except ValueError:
        raise FormatError("gridset header has a malformed d, n or L") from None
    if d not in (1, 2, 3) or n < 1 or not L > 0:
        raise FormatError(f"gridset header out of range: d={d}, n={n}, L={L}")
    rows = [ln.strip() for ln in stream if ln.strip()]
    if len(rows) != n ** (d - 1) or any(len(r) != n or set(r) - {"0", "1"} for r in rows):
        raise FormatError("gridset data does not match the header dimensions")
    occ = np.array([[c == "1" for c in r] for r in rows], dtype=bool).reshape((n,) * d)
    meta = {}
    for key, value in header.items():
        try:
            meta[key] = float(value)
        except ValueError:
            meta[key] = value
    return GridSet(L, occ), meta


def read_gridset(path):
    with open(path, encoding="ascii") as fh:
        return parse_gridset(fh.read())


def write_gridset(path, S: GridSet, meta=None):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_gridset(S, meta))
