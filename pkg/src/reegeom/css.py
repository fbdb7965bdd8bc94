"""Constructive closest-separable-state computation.

Three solvable families admit a geometric construction: Bell-diagonal
states, one-Bell-state mixtures with non-orthogonal separable parts
(generalized Vedral-Plenio), and with orthogonal separable parts
(generalized Horodecki).  `classify` detects the family after reducing an
input state to its diagonal-correlation canonical frame; `css_auto`
dispatches and maps the result back through the inverse local unitary.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import geometry
from .qstate import (
    BELL_STATES,
    DiagonalPauliForm,
    LocalUnitary,
    bell_diagonal,
    canonicalize,
    from_diagonal_pauli,
    min_pt_eigenvalue,
    signed_permutation_frames,
    su2_from_rotation,
    to_pauli,
    validate_density_matrix,
)
from .ree import relative_entropy

CLASSIFY_TOL = 1e-8


class FamilyKind(Enum):
    BELL_DIAGONAL = "BellDiagonal"
    GENERALIZED_VP = "GeneralizedVP"
    GENERALIZED_HORODECKI = "GeneralizedHorodecki"
    OTHER = "Other"


@dataclass(frozen=True)
class FamilyTag:
    kind: FamilyKind
    lambdas: tuple[float, float, float] | None = None


@dataclass
class CssResult:
    css: np.ndarray
    tau: np.ndarray
    family: FamilyTag
    ree: float
    residuals: dict = field(default_factory=dict)
    separable: bool = False
    geometric: bool = True


def _vp_state(lam) -> np.ndarray:
    l1, l2, l3 = lam
    return l1 * BELL_STATES[0] + np.diag([l2, 0, 0, l3]).astype(complex)


def _horodecki_state(lam) -> np.ndarray:
    l1, l2, l3 = lam
    return l1 * BELL_STATES[0] + np.diag([0, l2, l3, 0]).astype(complex)


def _match_templates(dpf: DiagonalPauliForm, tol: float = CLASSIFY_TOL):
    """Family tag plus the signed-permutation frame reaching the template.

    Returns (tag, P_A, P_B) with P_A, P_B in SO(3); identity frames for
    Bell-diagonal and Other.
    """
    eye = np.eye(3)
    if np.linalg.norm(dpf.r) <= tol and np.linalg.norm(dpf.s) <= tol:
        return FamilyTag(FamilyKind.BELL_DIAGONAL), eye, eye

    for pa, pb in signed_permutation_frames():
        r2, s2 = pa @ dpf.r, pb @ dpf.s
        q2 = np.diag(pa @ np.diag(dpf.q) @ pb.T)
        if max(abs(r2[0]), abs(r2[1]), abs(s2[0]), abs(s2[1])) > tol:
            continue
        if abs(q2[0] + q2[1]) > tol:
            continue
        l1 = q2[0]
        if l1 < -tol:
            continue
        if abs(r2[2] - s2[2]) <= tol and abs(q2[2] - 1.0) <= tol:
            w = (r2[2] + s2[2]) / 2
            l2, l3 = (1 - l1 + w) / 2, (1 - l1 - w) / 2
            if l2 >= -tol and l3 >= -tol:
                lam = _clip_weights(l1, l2, l3)
                return FamilyTag(FamilyKind.GENERALIZED_VP, lam), pa, pb
        if abs(r2[2] + s2[2]) <= tol and abs(q2[2] - (2 * q2[0] - 1)) <= tol:
            w = (r2[2] - s2[2]) / 2
            l2, l3 = (1 - l1 + w) / 2, (1 - l1 - w) / 2
            if l2 >= -tol and l3 >= -tol:
                lam = _clip_weights(l1, l2, l3)
                return FamilyTag(FamilyKind.GENERALIZED_HORODECKI, lam), pa, pb
    return FamilyTag(FamilyKind.OTHER), eye, eye


def _clip_weights(l1, l2, l3):
    lam = np.clip([l1, l2, l3], 0.0, None)
    return tuple(lam / lam.sum())


def classify(rho: np.ndarray, tol: float = CLASSIFY_TOL) -> FamilyTag:
    """Family of rho after local-unitary canonicalization."""
    validate_density_matrix(rho)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dpf, _ = canonicalize(rho)
    tag, _, _ = _match_templates(dpf, tol)
    return tag


def css_bell_diagonal(t, psd_tol: float = 1e-10) -> CssResult:
    """Closest separable state of the Bell-diagonal state with correlation
    vector t: the crossing of the ray from the nearest tetrahedron vertex
    through t with the nearest octahedron face."""
    t = np.asarray(t, dtype=float)
    rho = bell_diagonal(t)
    tag = FamilyTag(FamilyKind.BELL_DIAGONAL)
    if np.sum(np.abs(t)) <= 1.0 + psd_tol:
        return _finish(rho, rho, t, tag, separable=True)
    v = geometry.nearest_vertex(t)
    n = v.coords  # the nearest octahedron face lies in the plane n.q = 1
    if np.linalg.norm(t - v.coords) < 1e-12:
        tau = v.coords / 3.0  # vertex limit of the ray construction
    else:
        w = 2.0 / (3.0 - float(n @ t))
        tau = v.coords + w * (t - v.coords)
    return _finish(rho, bell_diagonal(tau), tau, tag)


def css_vp(lam) -> CssResult:
    """Theorem construction for generalized Vedral-Plenio weights."""
    l1, l2, l3 = lam
    rho = _vp_state(lam)
    tag = FamilyTag(FamilyKind.GENERALIZED_VP, (l1, l2, l3))
    if l1 <= 0:
        return _finish(rho, rho, np.array([0.0, 0.0, 1.0]), tag, separable=True)
    css = np.diag([l1 / 2 + l2, 0, 0, l1 / 2 + l3]).astype(complex)
    return _finish(rho, css, np.array([0.0, 0.0, 1.0]), tag)


def css_horodecki(lam) -> CssResult:
    """Theorem construction for generalized Horodecki weights."""
    l1, l2, l3 = lam
    rho = _horodecki_state(lam)
    tag = FamilyTag(FamilyKind.GENERALIZED_HORODECKI, (l1, l2, l3))
    t = np.array([l1, -l1, 2 * l1 - 1])
    if l1 ** 2 <= 4 * l2 * l3:
        return _finish(rho, rho, t, tag, separable=True)
    q1 = 0.5 * (l1 + 2 * l2) * (l1 + 2 * l3)
    tau = np.array([q1, -q1, 2 * q1 - 1])
    w = l2 - l3
    css = from_diagonal_pauli((0, 0, w), (0, 0, -w), tau)
    return _finish(rho, css, tau, tag)


def _finish(rho, css, tau, tag, separable=False) -> CssResult:
    p_rho, p_css = to_pauli(rho), to_pauli(css)
    residuals = {
        "bloch_gap": float(max(np.linalg.norm(p_css.r - p_rho.r),
                               np.linalg.norm(p_css.s - p_rho.s))),
        "edge_gap": abs(min_pt_eigenvalue(css)),
        "recovery_gap": float("nan"),
    }
    ree = 0.0 if separable else relative_entropy(rho, css)
    res = CssResult(css=css, tau=np.asarray(tau, float), family=tag, ree=ree,
                    residuals=residuals, separable=separable)
    if not separable:
        res.residuals["recovery_gap"] = _recovery_gap(rho, res)
    return res


def _recovery_gap(rho, res: CssResult) -> float:
    """Max-entry error of rebuilding rho from its CSS via the reverse map."""
    from . import revmap

    try:
        if res.family.kind is FamilyKind.GENERALIZED_VP:
            back = revmap.recover_vp(res.family.lambdas)
        elif res.family.kind is FamilyKind.GENERALIZED_HORODECKI:
            back = revmap.recover_horodecki(res.family.lambdas)
        else:
            g = revmap.g_matrix(res.css)
            diff = res.css - rho
            x = float(np.real(np.trace(g.matrix.conj().T @ diff))
                      / np.real(np.trace(g.matrix.conj().T @ g.matrix)))
            back = res.css - x * g.matrix
        return float(np.max(np.abs(back - rho)))
    except Exception:
        return float("nan")


def css_auto(rho: np.ndarray, numeric_fallback: bool = True,
             tol: float = CLASSIFY_TOL) -> CssResult:
    """Classify, construct in the template frame, map back through the
    inverse local unitary.  For states outside the solvable families the
    numerical oracle supplies a (non-geometric) result."""
    validate_density_matrix(rho)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dpf, lu = canonicalize(rho)
    tag, pa, pb = _match_templates(dpf, tol)

    if tag.kind is FamilyKind.OTHER:
        if not numeric_fallback:
            return CssResult(css=None, tau=None, family=tag, ree=float("nan"),
                             geometric=False)
        from .ree import OracleConfig, ree_numeric

        if min_pt_eigenvalue(rho) >= -1e-10:
            return _finish(rho, rho, to_pauli(rho).g.diagonal(), tag,
                           separable=True)
        rep = ree_numeric(rho, OracleConfig())
        res = _finish(rho, rep.css_numeric, to_pauli(rep.css_numeric).g.diagonal(),
                      tag)
        res.geometric = False
        res.ree = rep.value
        return res

    frame = LocalUnitary(su2_from_rotation(pa), su2_from_rotation(pb)).compose(lu)
    if tag.kind is FamilyKind.BELL_DIAGONAL:
        template = css_bell_diagonal(dpf.q)
    elif tag.kind is FamilyKind.GENERALIZED_VP:
        template = css_vp(tag.lambdas)
    else:
        template = css_horodecki(tag.lambdas)

    css_global = frame.inverse().apply(template.css)
    res = CssResult(css=css_global, tau=template.tau, family=tag,
                    ree=template.ree, residuals=dict(template.residuals),
                    separable=template.separable)
    p_rho, p_css = to_pauli(rho), to_pauli(css_global)
    res.residuals["bloch_gap"] = float(max(np.linalg.norm(p_css.r - p_rho.r),
                                           np.linalg.norm(p_css.s - p_rho.s)))
    return res
