"""Phase-space geometry, Fourier transforms along x, and velocity moments.

The computational domain is a periodic interval of length ``lx`` in space
(nodes ``x_j = j*dx``) times a truncated Cartesian velocity box
``[-v1max, v1max] x [-v2max, v2max]``.  The distribution function is stored
as a 3D array of cell-averaged values with shape ``(nx, nv1, nv2)``; the
velocity axes carry cell-center coordinates so midpoint quadrature doubles
as the cell-average representation.
"""

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft


def fft_workers() -> int:
    """Worker count for batched FFTs, capped by the VLASOV_THREADS env var.

    ``VLASOV_THREADS=0`` (or unset) lets scipy use all available cores;
    the FFT batching is over independent velocity columns, so the result
    is bit-identical for any worker count.
    """
    raw = os.environ.get("VLASOV_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else -1


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Static phase-space geometry shared by every operation.

    Parameters
    ----------
    nx : int
        Number of spatial nodes (even; powers of two recommended).
    lx : float
        Spatial period, ``lx = 2*pi/k0`` for fundamental wavenumber k0.
    nv1, nv2 : int
        Velocity cells per direction, at least 4 each.
    v1max, v2max : float
        Half-widths of the velocity box.
    """

    nx: int
    lx: float
    nv1: int
    nv2: int
    v1max: float
    v2max: float

    dx: float = field(init=False)
    dv1: float = field(init=False)
    dv2: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)
    v1c: np.ndarray = field(init=False, repr=False)
    v2c: np.ndarray = field(init=False, repr=False)
    wavenumbers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.nx < 4 or self.nx % 2 != 0:
            raise ValueError("nx must be an even integer >= 4")
        if self.nv1 < 4 or self.nv2 < 4:
            raise ValueError("velocity cell counts must be >= 4")
        if self.lx <= 0 or self.v1max <= 0 or self.v2max <= 0:
            raise ValueError("domain extents must be positive")
        object.__setattr__(self, "dx", self.lx / self.nx)
        object.__setattr__(self, "dv1", 2.0 * self.v1max / self.nv1)
        object.__setattr__(self, "dv2", 2.0 * self.v2max / self.nv2)
        object.__setattr__(self, "x", self.dx * np.arange(self.nx))
        # centers built antisymmetrically so v[-i] == -v[i] to the last bit
        object.__setattr__(
            self, "v1c", (np.arange(self.nv1) - (self.nv1 - 1) / 2.0) * self.dv1
        )
        object.__setattr__(
            self, "v2c", (np.arange(self.nv2) - (self.nv2 - 1) / 2.0) * self.dv2
        )
        k = 2.0 * np.pi * np.fft.fftfreq(self.nx, d=self.dx)
        k.setflags(write=False)
        object.__setattr__(self, "wavenumbers", k)

    @property
    def k0(self) -> float:
        """Fundamental spatial wavenumber 2*pi/lx."""
        return 2.0 * np.pi / self.lx

    def shape(self) -> tuple[int, int, int]:
        return (self.nx, self.nv1, self.nv2)


def forward_transform(g: np.ndarray, nx: int | None = None) -> np.ndarray:
    """Fourier coefficients ghat_m with g(x_j) = sum_m ghat_m exp(i k_m x_j).

    Works on a bare spatial profile of length nx or on any array whose
    leading axis is the spatial one (e.g. a full distribution function).
    """
    n = g.shape[0] if nx is None else nx
    if g.shape[0] != n:
        raise ValueError(f"expected leading axis of length {n}, got {g.shape[0]}")
    return scipy.fft.fft(g, axis=0, workers=fft_workers()) / n


def inverse_transform(ghat: np.ndarray) -> np.ndarray:
    """Real-space profile from coefficients produced by forward_transform."""
    n = ghat.shape[0]
    return scipy.fft.ifft(ghat * n, axis=0, workers=fft_workers()).real


def spectral_derivative(g: np.ndarray, grid: PhaseSpaceGrid) -> np.ndarray:
    """d/dx of a periodic nodal profile, exact for resolvable trig polynomials."""
    if g.shape[0] != grid.nx:
        raise ValueError("profile length does not match grid")
    ghat = forward_transform(g)
    k = grid.wavenumbers.reshape((grid.nx,) + (1,) * (g.ndim - 1))
    return inverse_transform(1j * k * ghat)


_WEIGHTS = ("1", "v1", "v2", "vsq")


def moment(f: np.ndarray, grid: PhaseSpaceGrid, weight: str = "1") -> np.ndarray:
    """Velocity moment sum_cells w(v1,v2) f dv1 dv2, one value per x node.

    ``weight`` selects w from {"1", "v1", "v2", "vsq"} where "vsq" is
    v1^2 + v2^2.  Midpoint quadrature on cell centers; this is the single
    quadrature rule used wherever a velocity integral appears, which is
    what makes the discrete charge-conservation identity exact.
    """
    if f.shape != grid.shape():
        raise ValueError("distribution shape does not match grid")
    cell = grid.dv1 * grid.dv2
    # plain pairwise sums keep the reduction order fixed (bit-reproducible)
    if weight == "1":
        return f.sum(axis=(1, 2)) * cell
    if weight == "v1":
        return (f.sum(axis=2) * grid.v1c[None, :]).sum(axis=1) * cell
    if weight == "v2":
        return (f.sum(axis=1) * grid.v2c[None, :]).sum(axis=1) * cell
    if weight == "vsq":
        w = grid.v1c[:, None] ** 2 + grid.v2c[None, :] ** 2
        return (f * w[None, :, :]).sum(axis=(1, 2)) * cell
    raise ValueError(f"unknown weight {weight!r}, expected one of {_WEIGHTS}")
