"""Galerkin frame operator assembly and frame-bound estimation.

The frame operator of G(w, M(Z^2)) is compressed to the orthonormal test
system { h_{m,a} placed in component i : m < K, i = 0..c-1 }; its extremal
eigenvalues bracket the optimal frame bounds from inside (A_est >= A_true,
B_est <= B_true), with the bracket closing as K grows.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import ConvergenceError
from .grid import GridSpec
from .lattice import (DEFAULT_POINT_BUDGET, LatticeMatrix, box_norm, covolume,
                      enumerate_points)
from .hermite import dilated_hermite_all

DEFAULT_GALERKIN_DIM = 64
REFUTATION_GALERKIN_DIM = 128
TRUNCATION_MARGIN = 10.0
CONVERGENCE_REL_TOL = 0.05
TWO_PI = 2.0 * math.pi


def default_truncation_radius(galerkin_dim: int, max_window_index: int,
                              dilation: float = 1.0) -> float:
    """Cross-ambiguity decays like a Gaussian past the joint effective support;
    the +10 margin puts the omitted tail below 1e-12."""
    stretch = max(math.sqrt(abs(dilation)), 1.0 / math.sqrt(abs(dilation)))
    joint = math.sqrt(2 * galerkin_dim + 1) + math.sqrt(2 * max_window_index + 1)
    return joint * stretch + TRUNCATION_MARGIN


@dataclass(frozen=True)
class GaborSystemSpec:
    """A Gabor system G(window, M(Z^2)) together with its Galerkin test space.

    The window is (h_0,...,h_d) by default; ``component_indices`` overrides
    the component list (e.g. (1,) for the scalar h_1 system, (0, 0) for the
    degenerate duplicated-Gaussian window). ``window_dilation`` applies D_a
    to window and test basis alike, keeping the Galerkin compression
    unitarily covariant.
    """

    window_degree: int
    matrix: LatticeMatrix
    truncation_radius: Optional[float] = None
    galerkin_dim: int = DEFAULT_GALERKIN_DIM
    window_dilation: float = 1.0
    component_indices: Optional[tuple] = None
    point_budget: int = DEFAULT_POINT_BUDGET

    def __post_init__(self):
        if self.window_degree < 0:
            raise ValueError("window degree must be nonnegative")
        if self.galerkin_dim <= self.max_window_index:
            raise ValueError("galerkin_dim must exceed the largest window index")
        if self.window_dilation <= 0:
            raise ValueError("window dilation must be positive")
        if self.truncation_radius is not None and \
                self.truncation_radius < box_norm(self.matrix):
            raise ValueError("truncation_radius below box_norm(matrix)")

    @property
    def indices(self) -> tuple:
        if self.component_indices is not None:
            return tuple(int(i) for i in self.component_indices)
        return tuple(range(self.window_degree + 1))

    @property
    def max_window_index(self) -> int:
        if self.component_indices is not None:
            return max(int(i) for i in self.component_indices)
        return self.window_degree

    @property
    def radius(self) -> float:
        if self.truncation_radius is not None:
            return self.truncation_radius
        return default_truncation_radius(self.galerkin_dim, self.max_window_index,
                                         self.window_dilation)

    def freq_cutoff(self) -> float:
        """Modulations beyond this couple the window to the test space only
        through Gaussian tails below 1e-12 (squared in the frame matrix)."""
        root_a = math.sqrt(self.window_dilation)
        joint = (math.sqrt(2 * self.galerkin_dim + 1)
                 + math.sqrt(2 * self.max_window_index + 1))
        return (joint + TRUNCATION_MARGIN) / (TWO_PI * root_a)

    def time_cutoff(self) -> float:
        root_a = math.sqrt(self.window_dilation)
        joint = (math.sqrt(2 * self.galerkin_dim + 1)
                 + math.sqrt(2 * self.max_window_index + 1))
        return (joint + TRUNCATION_MARGIN) * root_a

    def grid(self) -> GridSpec:
        return GridSpec.build(max_index=max(self.galerkin_dim - 1, self.max_window_index),
                              max_modulation=self.freq_cutoff(),
                              dilation=self.window_dilation)

    def with_dim(self, K: int) -> "GaborSystemSpec":
        return GaborSystemSpec(window_degree=self.window_degree, matrix=self.matrix,
                               truncation_radius=self.truncation_radius,
                               galerkin_dim=K, window_dilation=self.window_dilation,
                               component_indices=self.component_indices,
                               point_budget=self.point_budget)


@dataclass(frozen=True)
class FrameBounds:
    """Galerkin estimates of the optimal frame bounds.

    A_est overestimates the true A and B_est underestimates the true B
    (restriction to a subspace shrinks the spectrum bracket from inside).
    """

    A_est: float
    B_est: float
    galerkin_dim: int
    converged: bool
    tail_bound: float

    def __post_init__(self):
        if not (0.0 <= self.A_est <= self.B_est):
            raise ValueError("frame bounds must satisfy 0 <= A_est <= B_est")


def _assemble(spec: GaborSystemSpec):
    """Frame matrix plus a trace bound on the outermost-shell contribution."""
    grid = spec.grid()
    x = grid.points
    step = grid.step
    a = spec.window_dilation
    idxs = spec.indices
    K = spec.galerkin_dim
    c = len(idxs)

    basis = dilated_hermite_all(max(K - 1, spec.max_window_index), a, x)
    H = basis[:K]                       # (K, N) orthonormal test functions
    r_cut = spec.radius
    pts = enumerate_points(spec.matrix, r_cut, budget=spec.point_budget)
    g = pts.points
    keep = (np.abs(g[:, 0]) <= spec.time_cutoff()) & \
           (np.abs(g[:, 1]) <= spec.freq_cutoff())
    g = g[keep]
    norms = np.hypot(g[:, 0], g[:, 1])
    in_shell = norms > r_cut - 1.0

    dim = c * K
    S = np.zeros((dim, dim), dtype=complex)
    tail_sq = 0.0
    chunk = 128
    max_idx = spec.max_window_index
    for start in range(0, g.shape[0], chunk):
        g1 = g[start:start + chunk, 0]
        g2 = g[start:start + chunk, 1]
        xs = x[None, :] - g1[:, None]                       # (n, N)
        table = dilated_hermite_all(max_idx, a, xs)         # (max_idx+1, n, N)
        P = table[list(idxs)]                               # (c, n, N)
        phase = np.exp(-1j * TWO_PI * g2[:, None] * xs)     # (n, N)
        V = P.transpose(1, 0, 2) * phase[:, None, :]        # (n, c, N)
        n = V.shape[0]
        A = step * (V.reshape(n * c, x.size) @ H.T)         # (n*c, K)
        A = A.reshape(n, dim)
        S += A.conj().T @ A
        shell = in_shell[start:start + chunk]
        if shell.any():
            tail_sq += float(np.sum(np.abs(A[shell]) ** 2))
    S = 0.5 * (S + S.conj().T)
    return S, tail_sq


def assemble_frame_matrix(spec: GaborSystemSpec) -> np.ndarray:
    """Hermitian PSD Galerkin compression of the frame operator."""
    S, _ = _assemble(spec)
    return S


def _extremal(spec: GaborSystemSpec):
    S, tail_sq = _assemble(spec)
    try:
        w = scipy.linalg.eigvalsh(S)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover
        raise ConvergenceError(f"dense eigensolver failed: {exc}") from exc
    return max(float(w[0]), 0.0), float(w[-1]), tail_sq


def frame_bounds(spec: GaborSystemSpec, check_convergence: bool = True) -> FrameBounds:
    """Extremal Galerkin eigenvalues; ``converged`` compares against a run
    at half the test dimension (relative change below 5%, measured in
    units of B_est)."""
    A, B, tail_sq = _extremal(spec)
    converged = False
    if check_convergence:
        K_half = max(spec.galerkin_dim // 2, spec.max_window_index + 1)
        if K_half < spec.galerkin_dim:
            A2, B2, _ = _extremal(spec.with_dim(K_half))
            ref = max(B, 1e-300)
            converged = (abs(A - A2) / ref < CONVERGENCE_REL_TOL
                         and abs(B - B2) / ref < CONVERGENCE_REL_TOL)
    return FrameBounds(A_est=A, B_est=B, galerkin_dim=spec.galerkin_dim,
                       converged=converged, tail_bound=tail_sq)


def is_frame(spec: GaborSystemSpec, tol: float = 1e-3) -> str:
    """Numerical tri-state frame decision: 'frame', 'not_frame' or 'inconclusive'.

    A refutation additionally requires the ratio A/B not to recover under
    K-refinement; candidate refutations at small K are re-run at K=128.
    """
    if not (0.0 < tol < 1.0):
        raise ValueError("tol must lie in (0, 1)")
    work = spec
    A, B, _ = _extremal(work)
    ratio = A / B if B > 0 else 0.0
    if ratio < tol and work.galerkin_dim < REFUTATION_GALERKIN_DIM:
        work = work.with_dim(REFUTATION_GALERKIN_DIM)
        A, B, _ = _extremal(work)
        ratio = A / B if B > 0 else 0.0
    K_half = max(work.galerkin_dim // 2, work.max_window_index + 1)
    A2, B2, _ = _extremal(work.with_dim(K_half))
    ratio_half = A2 / B2 if B2 > 0 else 0.0
    ref = max(B, 1e-300)
    converged = (abs(A - A2) / ref < CONVERGENCE_REL_TOL
                 and abs(B - B2) / ref < CONVERGENCE_REL_TOL)
    if converged and ratio > tol:
        return "frame"
    if converged and ratio < tol / 10.0 and ratio <= ratio_half + 1e-9:
        return "not_frame"
    return "inconclusive"


def component_bound_aggregate(spec: GaborSystemSpec) -> dict:
    """Vector bound vs per-component scalar bounds at the same K.

    slack = n_components * sum(B_i) - B_vec, nonnegative by Cauchy-Schwarz
    (the printed inequality uses the actual component count).
    """
    if len(spec.indices) < 2:
        raise ValueError("aggregate check needs at least two components")
    full = frame_bounds(spec, check_convergence=False)
    per_component = []
    for idx in spec.indices:
        sub = GaborSystemSpec(window_degree=spec.window_degree, matrix=spec.matrix,
                              truncation_radius=spec.truncation_radius,
                              galerkin_dim=spec.galerkin_dim,
                              window_dilation=spec.window_dilation,
                              component_indices=(idx,),
                              point_budget=spec.point_budget)
        per_component.append(frame_bounds(sub, check_convergence=False))
    n = len(spec.indices)
    b_sum = sum(fb.B_est for fb in per_component)
    return {
        "A_vec": full.A_est,
        "B_vec": full.B_est,
        "per_component_A": [fb.A_est for fb in per_component],
        "per_component_B": [fb.B_est for fb in per_component],
        "inequality_slack": n * b_sum - full.B_est,
    }


def gl_predicate(M: LatticeMatrix, d: int) -> bool:
    """Sufficient determinant criterion for the SCALAR system with window h_d:
    |det M| < 1/(d+1)."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    return covolume(M) < 1.0 / (d + 1)


def theorem1_predicted_bounds(M: LatticeMatrix, C: float):
    """Predicted bounds (1 -/+ ||M||/C)^2 / |det M| for a window constant C."""
    if not (0.0 < C <= 1.0):
        raise ValueError("C must lie in (0, 1]")
    r = box_norm(M)
    if r > C:
        raise ValueError(
            f"outside guarantee region: box_norm {r:.6g} exceeds C = {C:.6g}")
    det = covolume(M)
    return ((1.0 - r / C) ** 2 / det, (1.0 + r / C) ** 2 / det)


# ---------------------------------------------------------------------------
# serialization


def bounds_to_json(spec: GaborSystemSpec, fb: FrameBounds) -> str:
    record = {
        "A_est": fb.A_est,
        "B_est": fb.B_est,
        "K": fb.galerkin_dim,
        "converged": fb.converged,
        "tail_bound": fb.tail_bound,
        "det": spec.matrix.determinant,
        "box_norm": box_norm(spec.matrix),
    }
    return json.dumps(record, indent=2)


def bounds_from_json(text: str) -> FrameBounds:
    record = json.loads(text)
    return FrameBounds(A_est=record["A_est"], B_est=record["B_est"],
                       galerkin_dim=record["K"], converged=record["converged"],
                       tail_bound=record["tail_bound"])
