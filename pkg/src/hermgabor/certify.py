"""Constructive frame certificates from oscillation of the ambiguity function.

The chain: F = V_f f is the reproducing kernel of the transform range under
twisted convolution (G = G # F there), oscillation of F controls oscillation
of every G in the range, and an oscillation ratio R = ||osc_r(F)||_1 < 1 at
r = ||M|| certifies the two-sided sampling estimate, hence frame bounds

    A_cert = (1 - R)^2 / |det M|,   B_cert = (1 + R)^2 / |det M|

for any window with orthonormal components.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import next_fast_len

from .errors import GaborError, PreconditionError, ResolutionError
from .grid import DEFAULT_STEP, GridSpec
from .hermite import VectorWindow, hermite_window
from .lattice import LatticeMatrix, box_norm, covolume
from .timefreq import (Region, SampledField, default_region, field_l2,
                       signal_from_window, stft)

BOUNDARY_DECAY_TOL = 1e-8
# columns this far (relatively) below the field maximum cannot move any
# float64 digit of the result
NEGLIGIBLE_COLUMN = 1e-200


@dataclass(frozen=True, eq=False)
class AmbiguityField:
    """F = V_f f on a region grid; mass_check is the discrete ||F||^2
    (isometry target: number of window components)."""

    field: SampledField
    window_degree: int
    mass_check: float


def certification_grid(d: int, region: Region = None,
                       step: float = DEFAULT_STEP) -> GridSpec:
    """Real-line grid wide enough to translate (h_0..h_d) across the region."""
    if region is None:
        region = default_region(d)
    half = region.x_half + math.sqrt(2 * d + 1) + 8.0
    count = int(math.ceil(2.0 * half / step))
    grid = GridSpec(half_width=count * step / 2.0, step=step, count=count)
    grid.check_nyquist(region.xi_half, d)
    return grid


def certification_window(d: int, region: Region = None,
                         step: float = DEFAULT_STEP) -> VectorWindow:
    """The window (h_0,...,h_d) on a grid sized by ``certification_grid``."""
    return hermite_window(d, certification_grid(d, region, step))


def _center_value(f: SampledField) -> complex:
    ix = int(np.argmin(np.abs(f.x_axis)))
    ij = int(np.argmin(np.abs(f.xi_axis)))
    return complex(f.values[ix, ij])


def ambiguity(w: VectorWindow, region: Region = None) -> AmbiguityField:
    """Ambiguity function of the vector window over the region grid.

    Values carry the symmetric time-frequency gauge, F(x,xi) =
    e^{-i*pi*x*xi} <f, T_x M_xi f>: in this gauge (and only in it) the range
    of the transform is reproduced by twisted convolution with F, which is
    the identity the certificate chain rests on.
    """
    if region is None:
        region = default_region(w.degree)
    f = signal_from_window(w)
    field = stft(w, f, region)
    gauge = np.exp(-1j * math.pi * np.outer(field.x_axis, field.xi_axis))
    field = SampledField(x_axis=field.x_axis, xi_axis=field.xi_axis,
                         values=field.values * gauge)
    mass = field_l2(field) ** 2
    center = _center_value(field)
    if abs(center - w.n_components) > 1e-6:
        raise GaborError(
            f"ambiguity center {center} differs from component count "
            f"{w.n_components}; grid or region capacity is insufficient")
    return AmbiguityField(field=field, window_degree=w.degree, mass_check=mass)


def _check_boundary_decay(f: SampledField, name: str) -> None:
    vmax = float(np.max(np.abs(f.values)))
    if vmax == 0.0:
        return
    ring = max(np.abs(f.values[0, :]).max(), np.abs(f.values[-1, :]).max(),
               np.abs(f.values[:, 0]).max(), np.abs(f.values[:, -1]).max())
    if ring > BOUNDARY_DECAY_TOL * vmax:
        raise PreconditionError(
            f"{name} does not decay below {BOUNDARY_DECAY_TOL} at the region "
            f"boundary (relative ring maximum {ring / vmax:.3g})")


def twisted_convolve(G: SampledField, F: SampledField) -> SampledField:
    """(G # F)(x,xi) = sum G(x',xi') F(x-x', xi-xi') e^{i*pi*(x*xi' - x'*xi)} h^2.

    The symplectic phase splits as e^{i*pi*x*xi'} * e^{-i*pi*x'*xi}, so for
    each source column xi' the remaining sum is an ordinary convolution in x
    of a chirped copy of that column against the rows of F; those are done
    with FFTs, which reproduces the direct Riemann sum to rounding.
    """
    if G.values.shape != F.values.shape or \
            not np.allclose(G.x_axis, F.x_axis) or \
            not np.allclose(G.xi_axis, F.xi_axis):
        raise ValueError("twisted convolution requires identical axes")
    _check_boundary_decay(G, "first field")
    _check_boundary_decay(F, "second field")
    x = G.x_axis
    xi = G.xi_axis
    nx, nxi = G.values.shape
    hx, hxi = G.x_step, G.xi_step
    ic = int(np.argmin(np.abs(x)))   # index of x = 0
    jc = int(np.argmin(np.abs(xi)))  # index of xi = 0
    nfft = next_fast_len(2 * nx)

    W = np.exp(-1j * math.pi * np.outer(x, xi))     # e^{-i pi x' xi}
    Fhat = np.fft.fft(F.values, n=nfft, axis=0)     # per xi column
    out = np.zeros((nx, nxi), dtype=complex)
    gmax = float(np.max(np.abs(G.values)))
    col_max = np.max(np.abs(G.values), axis=0)
    for j in range(nxi):
        if col_max[j] <= NEGLIGIBLE_COLUMN * gmax:
            continue
        U = G.values[:, j][:, None] * W             # (nx, nxi)
        Uhat = np.fft.fft(U, n=nfft, axis=0)
        # output column i_xi needs F column i_xi - (j - jc)
        s = j - jc
        Fsh = np.zeros((nfft, nxi), dtype=complex)
        if s >= 0:
            Fsh[:, s:] = Fhat[:, :nxi - s]
        else:
            Fsh[:, :nxi + s] = Fhat[:, -s:]
        conv = np.fft.ifft(Uhat * Fsh, axis=0)[ic:ic + nx, :]
        out += np.exp(1j * math.pi * xi[j] * x)[:, None] * conv
    out *= hx * hxi
    return SampledField(x_axis=x.copy(), xi_axis=xi.copy(), values=out,
                        flags=("boundary_ring",))


def _disc_offsets(hx: float, hxi: float, r: float):
    dx_max = int(math.ceil(r / hx))
    dj_max = int(math.ceil(r / hxi))
    offs = []
    for di in range(-dx_max, dx_max + 1):
        for dj in range(-dj_max, dj_max + 1):
            if di == 0 and dj == 0:
                continue
            if (di * hx) ** 2 + (dj * hxi) ** 2 < r * r:
                offs.append((di, dj))
    return offs


def oscillation(F: SampledField, r: float) -> SampledField:
    """Pointwise sup of |F(p) - F(q)| over grid nodes q within distance < r."""
    hx, hxi = F.x_step, F.xi_step
    offs = _disc_offsets(hx, hxi, r)
    if not offs:
        raise ResolutionError(
            f"radius {r} is below the grid resolution ({hx} x {hxi}); "
            "the discrete ball contains no neighbor")
    nx, nxi = F.values.shape
    out = np.zeros((nx, nxi))
    for (di, dj) in offs:
        s0, s1 = max(di, 0), max(-di, 0)
        t0, t1 = max(dj, 0), max(-dj, 0)
        a = F.values[s0:nx - s1, t0:nxi - t1]
        b = F.values[s1:nx - s0, t1:nxi - t0]
        diff = np.abs(a - b)
        view = out[s0:nx - s1, t0:nxi - t1]
        np.maximum(view, diff, out=view)
    return SampledField(x_axis=F.x_axis.copy(), xi_axis=F.xi_axis.copy(),
                        values=out.astype(complex))


def osc_l1(F: SampledField, r: float) -> float:
    """Riemann L1 norm of the oscillation field; the ratio R(r)."""
    osc = oscillation(F, r)
    return float(F.x_step * F.xi_step * np.sum(osc.values.real))


@dataclass(frozen=True)
class Certificate:
    """Guaranteed frame-bound interval from a measured oscillation ratio.

    ``eps_disc`` is a reported additive discretization error bar
    (2 * step * TV(F) / |det M|); it is not folded into the bounds.
    """

    radius: float
    ratio: float
    A_cert: float
    B_cert: float
    valid: bool
    matrix: LatticeMatrix
    window_degree: int
    eps_disc: float

    def __post_init__(self):
        if self.valid and not (0.0 < self.A_cert <= self.B_cert):
            raise ValueError("valid certificate must satisfy 0 < A_cert <= B_cert")


def _check_orthonormal(w: VectorWindow, tol: float = 1e-8) -> None:
    comps = np.vstack(w.components)
    gram = w.grid.step * (comps @ comps.T)
    if np.max(np.abs(gram - np.eye(len(w.components)))) > tol:
        raise PreconditionError(
            "window components are not orthonormal within 1e-8")


def _tv_estimate(F: SampledField) -> float:
    gx, gxi = np.gradient(F.values, F.x_axis, F.xi_axis)
    return float(F.x_step * F.xi_step * np.sum(np.abs(gx) + np.abs(gxi)))


def certificate(w: VectorWindow, M: LatticeMatrix,
                region: Region = None) -> Certificate:
    """Oscillation certificate for G(w, M(Z^2)) at radius r = ||M||."""
    _check_orthonormal(w)
    r = box_norm(M)
    amb = ambiguity(w, region)
    R = osc_l1(amb.field, r)
    det = covolume(M)
    valid = R < 1.0
    A = (1.0 - R) ** 2 / det if valid else 0.0
    B = (1.0 + R) ** 2 / det
    eps = 2.0 * amb.field.x_step * _tv_estimate(amb.field) / det
    return Certificate(radius=r, ratio=R, A_cert=A, B_cert=B, valid=valid,
                       matrix=M, window_degree=w.degree, eps_disc=eps)


def c_lower_estimate(w: VectorWindow, r_list, region: Region = None) -> float:
    """min over probed radii of r / R(r): the largest constant C with
    R(r) <= r/C on the probed set (a lower-bound estimator, up to
    discretization error)."""
    r_list = list(r_list)
    if not r_list:
        raise ValueError("r_list must be nonempty")
    _check_orthonormal(w)
    amb = ambiguity(w, region)
    best = math.inf
    for r in r_list:
        if r <= 0:
            raise ValueError("radii must be positive")
        R = osc_l1(amb.field, r)
        if R == 0.0:
            raise GaborError(
                f"R({r}) = 0 for a nonzero window: grid failure")
        best = min(best, r / R)
    return best


# ---------------------------------------------------------------------------
# serialization


def certificate_to_json(cert: Certificate) -> str:
    record = {
        "r": cert.radius,
        "R": cert.ratio,
        "A_cert": cert.A_cert,
        "B_cert": cert.B_cert,
        "valid": cert.valid,
        "eps_disc": cert.eps_disc,
        "det": cert.matrix.determinant,
        "d": cert.window_degree,
        "matrix": [[cert.matrix.m11, cert.matrix.m12],
                   [cert.matrix.m21, cert.matrix.m22]],
    }
    return json.dumps(record, indent=2)


def certificate_from_json(text: str) -> Certificate:
    record = json.loads(text)
    return Certificate(radius=record["r"], ratio=record["R"],
                       A_cert=record["A_cert"], B_cert=record["B_cert"],
                       valid=record["valid"],
                       matrix=LatticeMatrix.from_array(record["matrix"]),
                       window_degree=record["d"], eps_disc=record["eps_disc"])
