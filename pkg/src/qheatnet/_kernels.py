"""Hot inner loops over frequency samples.

Every kernel exists as a plain numpy function (``*_numpy``) and, when numba
is importable, as an ``@njit`` twin (``*_numba``) compiled from an explicit
loop. The module-level names without suffix point at the active backend,
chosen once at import time:

    QHEATNET_BACKEND=numpy   force the numpy path
    QHEATNET_BACKEND=numba   use numba (falls back to numpy if missing)

Both paths must agree to rounding; the test-suite checks that.
"""

import logging
import math
import os

import numpy as np

from .constants import H, K_B

log = logging.getLogger(__name__)

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None


def _jit(func):
    if numba is None:  # pragma: no cover
        return None
    return numba.njit(cache=True, nogil=True)(func)


# -- ABCD cascade -----------------------------------------------------------


def cascade_numpy(stack):
    """Ordered product of ``stack[0] @ stack[1] @ ...`` per frequency.

    ``stack`` has shape (K, N, 2, 2); the result has shape (N, 2, 2).
    """
    out = np.empty(stack.shape[1:], dtype=np.complex128)
    out[...] = np.eye(2)
    for m in stack:
        out = out @ m
    return out


def _cascade_loop(stack):
    k = stack.shape[0]
    n = stack.shape[1]
    out = np.empty((n, 2, 2), dtype=np.complex128)
    for i in range(n):
        a = 1.0 + 0.0j
        b = 0.0j
        c = 0.0j
        d = 1.0 + 0.0j
        for j in range(k):
            m00 = stack[j, i, 0, 0]
            m01 = stack[j, i, 0, 1]
            m10 = stack[j, i, 1, 0]
            m11 = stack[j, i, 1, 1]
            a, b, c, d = (
                a * m00 + b * m10,
                a * m01 + b * m11,
                c * m00 + d * m10,
                c * m01 + d * m11,
            )
        out[i, 0, 0] = a
        out[i, 0, 1] = b
        out[i, 1, 0] = c
        out[i, 1, 1] = d
    return out


cascade_numba = _jit(_cascade_loop)


# -- ABCD -> S21 denominators -----------------------------------------------


def s21_numpy(m, r1, r2):
    """S21 of (N, 2, 2) chain matrices between real terminations."""
    a = m[:, 0, 0]
    b = m[:, 0, 1]
    c = m[:, 1, 0]
    d = m[:, 1, 1]
    den = a + b / r2 + c * r1 + (r1 / r2) * d
    with np.errstate(divide="ignore", invalid="ignore"):
        return 2.0 * np.sqrt(r1 / r2) / den


def _s21_loop(m, r1, r2):
    n = m.shape[0]
    out = np.empty(n, dtype=np.complex128)
    num = 2.0 * math.sqrt(r1 / r2)
    ratio = r1 / r2
    for i in range(n):
        den = m[i, 0, 0] + m[i, 0, 1] / r2 + m[i, 1, 0] * r1 + ratio * m[i, 1, 1]
        if den == 0:
            out[i] = complex(np.inf, 0.0)
        else:
            out[i] = num / den
    return out


s21_numba = _jit(_s21_loop)


# -- Landauer integrand -----------------------------------------------------


def _bose_scalar(x_over_t, t):
    # x_over_t = h f / k_B; returns 1/(exp(x/t) - 1) with t = 0 -> 0
    if t <= 0.0:
        return 0.0
    return 1.0 / math.expm1(x_over_t / t)


def net_psd_numpy(f, tau, t1, t2):
    """h f tau (n1 - n2) for f > 0."""
    f = np.asarray(f, dtype=np.float64)
    x = H * f / K_B
    with np.errstate(over="ignore"):
        n1 = 1.0 / np.expm1(x / t1) if t1 > 0 else np.zeros_like(f)
        n2 = 1.0 / np.expm1(x / t2) if t2 > 0 else np.zeros_like(f)
    return H * f * tau * (n1 - n2)


def _net_psd_loop(f, tau, t1, t2):
    n = f.shape[0]
    out = np.empty(n, dtype=np.float64)
    hk = H / K_B
    for i in range(n):
        x = hk * f[i]
        n1 = 0.0
        n2 = 0.0
        if t1 > 0.0 and x / t1 < 700.0:
            n1 = 1.0 / math.expm1(x / t1)
        if t2 > 0.0 and x / t2 < 700.0:
            n2 = 1.0 / math.expm1(x / t2)
        out[i] = H * f[i] * tau[i] * (n1 - n2)
    return out


net_psd_numba = _jit(_net_psd_loop)


# -- Gauss-Kronrod panel reduction --------------------------------------------

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1]
GK_NODES = np.array(
    [
        -0.991455371120812639206854697526329,
        -0.949107912342758524526189684047851,
        -0.864864423359769072789712788640926,
        -0.741531185599394439863864773280788,
        -0.586087235467691130294144845693013,
        -0.405845151377397166906606412076961,
        -0.207784955007898467600689403773245,
        0.0,
        0.207784955007898467600689403773245,
        0.405845151377397166906606412076961,
        0.586087235467691130294144845693013,
        0.741531185599394439863864773280788,
        0.864864423359769072789712788640926,
        0.949107912342758524526189684047851,
        0.991455371120812639206854697526329,
    ]
)
_WK_HALF = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
]
GK_KRONROD_WEIGHTS = np.array(
    _WK_HALF + [0.209482141084727828012999174891714] + _WK_HALF[::-1]
)
_WG_HALF = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
]
GK_GAUSS_WEIGHTS = np.array(
    [0.0, _WG_HALF[0], 0.0, _WG_HALF[1], 0.0, _WG_HALF[2], 0.0,
     0.417959183673469387755102040816327,
     0.0, _WG_HALF[2], 0.0, _WG_HALF[1], 0.0, _WG_HALF[0], 0.0]
)


def gk_reduce_numpy(y, half_width):
    """Kronrod estimate and QUADPACK error estimate per panel.

    ``y`` has shape (P, 15): integrand at the mapped nodes of each panel.
    """
    kron = y @ GK_KRONROD_WEIGHTS
    gauss = y @ GK_GAUSS_WEIGHTS
    mean = kron / 2.0
    resasc = np.abs(y - mean[:, None]) @ GK_KRONROD_WEIGHTS
    resabs = np.abs(y) @ GK_KRONROD_WEIGHTS
    raw = np.abs(kron - gauss)
    err = raw.copy()
    nz = (resasc != 0.0) & (raw != 0.0)
    err[nz] = resasc[nz] * np.minimum(1.0, (200.0 * raw[nz] / resasc[nz]) ** 1.5)
    # roundoff floor as in QUADPACK dqk15
    floor = 50.0 * np.finfo(float).eps * resabs
    err = np.where(resabs > np.finfo(float).tiny / (50 * np.finfo(float).eps),
                   np.maximum(err, floor), err)
    return kron * half_width, err * half_width


def _gk_reduce_loop(y, half_width):
    p = y.shape[0]
    kron_out = np.empty(p, dtype=np.float64)
    err_out = np.empty(p, dtype=np.float64)
    eps = 2.220446049250313e-16
    tiny = 2.2250738585072014e-308
    for i in range(p):
        kron = 0.0
        gauss = 0.0
        resabs = 0.0
        for j in range(15):
            kron += GK_KRONROD_WEIGHTS[j] * y[i, j]
            gauss += GK_GAUSS_WEIGHTS[j] * y[i, j]
            resabs += GK_KRONROD_WEIGHTS[j] * abs(y[i, j])
        mean = kron / 2.0
        resasc = 0.0
        for j in range(15):
            resasc += GK_KRONROD_WEIGHTS[j] * abs(y[i, j] - mean)
        raw = abs(kron - gauss)
        err = raw
        if resasc != 0.0 and raw != 0.0:
            err = resasc * min(1.0, (200.0 * raw / resasc) ** 1.5)
        if resabs > tiny / (50.0 * eps):
            err = max(err, 50.0 * eps * resabs)
        kron_out[i] = kron * half_width[i]
        err_out[i] = err * half_width[i]
    return kron_out, err_out


gk_reduce_numba = _jit(_gk_reduce_loop)


# -- backend selection ------------------------------------------------------

_KERNELS = ("cascade", "s21", "net_psd", "gk_reduce")


def _select_backend():
    wanted = os.environ.get("QHEATNET_BACKEND", "numba").strip().lower()
    if wanted not in ("numba", "numpy"):
        raise ValueError(f"QHEATNET_BACKEND must be 'numba' or 'numpy', got {wanted!r}")
    if wanted == "numba" and not HAVE_NUMBA:  # pragma: no cover
        log.warning("numba not importable; using numpy kernels")
        wanted = "numpy"
    return wanted


BACKEND = _select_backend()

cascade = globals()[f"cascade_{BACKEND}"]
s21 = globals()[f"s21_{BACKEND}"]
net_psd = globals()[f"net_psd_{BACKEND}"]
gk_reduce = globals()[f"gk_reduce_{BACKEND}"]


def kernels(backend):
    """Return a dict of the kernels for ``backend`` ('numba' or 'numpy')."""
    return {name: globals()[f"{name}_{backend}"] for name in _KERNELS}


def warm_up():
    """Trigger JIT compilation of every numba kernel (no-op on numpy)."""
    if BACKEND != "numba":
        return
    stack = np.tile(np.eye(2, dtype=np.complex128), (2, 3, 1, 1))
    m = cascade(stack)
    s21(m, 50.0, 50.0)
    f = np.linspace(1e9, 2e9, 3)
    net_psd(f, np.ones(3), 0.2, 0.1)
    gk_reduce(np.ones((2, 15)), np.ones(2))
