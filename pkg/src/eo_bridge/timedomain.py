"""Time-domain oracle for the coupled-mode Langevin equations.

Nothing here uses the closed-form transfer functions of :mod:`red` and
:mod:`blue`; it integrates the mean-field equations of motion directly and
solves the steady-state covariance equation, so the two routes can be
compared.

The state vector is (a, b) for the red sideband and (a, b^dagger) for the
blue sideband. Blue drives and outputs on the microwave port therefore
refer to B^dagger and B_out^dagger amplitudes.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DivergenceError, DomainError
from .model import SystemParams

SIDEBANDS = ("red", "blue")
PORTS = ("A", "B", "A'", "B'")

#: Largest allowed dt in units of 1/(fastest rate).
DT_FACTOR = 0.01
#: Default integration time in units of 1/|Re(slowest pole)|.
SETTLE_FACTOR = 30.0


@dataclass(frozen=True)
class DriftMatrix:
    m: np.ndarray
    input_couplings: np.ndarray
    sideband: str

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.m)


def drift_matrix(p: SystemParams, sideband: str) -> DriftMatrix:
    g = p.g_alpha
    if sideband == "red":
        m = [[-0.5 * p.Gamma_a, 1j * g], [1j * g.conjugate(), -0.5 * p.Gamma_b]]
    elif sideband == "blue":
        m = [[-0.5 * p.Gamma_a, 1j * g], [-1j * g.conjugate(), -0.5 * p.Gamma_b]]
    else:
        raise DomainError("sideband", sideband, f"must be one of {SIDEBANDS}")
    couplings = np.array(
        [
            [math.sqrt(p.gamma_a), 0.0, math.sqrt(p.gamma_a_p), 0.0],
            [0.0, math.sqrt(p.gamma_b), 0.0, math.sqrt(p.gamma_b_p)],
        ]
    )
    return DriftMatrix(np.array(m, dtype=complex), couplings, sideband)


@dataclass(frozen=True)
class Drive:
    """Classical tone ``amplitude * exp(-i omega t)`` on one input port."""

    port: str
    amplitude: complex
    omega: float = 0.0

    def __post_init__(self):
        if self.port not in PORTS:
            raise DomainError("port", self.port, f"must be one of {PORTS}")


@dataclass
class MeanFieldResult:
    t: np.ndarray
    a: np.ndarray
    b: np.ndarray
    A_out: np.ndarray
    B_out: np.ndarray
    steady: np.ndarray | None
    ratio: np.ndarray | None
    residual: float
    dt: float

    def to_csv(self, fh):
        """Trajectory dump: t, Re a, Im a, Re b, Im b (b is b^dagger for blue)."""
        fh.write("t,re_a,im_a,re_b,im_b\n")
        for t, a, b in zip(self.t, self.a, self.b):
            fh.write(",".join(format(v, ".17g") for v in (t, a.real, a.imag, b.real, b.imag)) + "\n")


def settle_time(p: SystemParams, sideband: str) -> float:
    """SETTLE_FACTOR / |Re(slowest eigenvalue)| of the drift matrix."""
    lam = drift_matrix(p, sideband).eigenvalues()
    slowest = float(np.max(lam.real))
    if slowest >= 0:
        raise DivergenceError(
            f"{sideband} drift has an eigenvalue with Re = {slowest:.3e} >= 0; no steady state"
        )
    return SETTLE_FACTOR / -slowest


def max_step(p: SystemParams, omega: float = 0.0) -> float:
    return DT_FACTOR / max(p.Gamma_a, p.Gamma_b, abs(p.g_alpha), abs(omega))


def integrate_mean_field(
    p: SystemParams,
    sideband: str,
    drive: Drive | list[Drive] | None = None,
    a0: complex = 0j,
    b0: complex = 0j,
    t_final: float | None = None,
    dt: float | None = None,
    record_every: int | None = None,
    tol: float = 1e-7,
) -> MeanFieldResult:
    """Integrate the mean-field equations with fixed-step RK4.

    With a drive, the steady-state output/drive ratio for both output
    ports is extracted by projecting the tail of the output signal onto
    exp(-i omega t), over the last ten drive periods (a quarter of the run
    when that is shorter). ``residual`` is the relative change of that
    projection between the two halves of the window; above ``tol`` a
    :class:`ConvergenceError` is raised.

    ``drive`` may be a list of tones sharing one frequency; ``steady``
    then holds the summed (A_out, B_out) amplitudes and ``ratio`` is only
    set for a single tone.

    ``b0`` and the microwave outputs are b^dagger amplitudes for blue.
    """
    dm = drift_matrix(p, sideband)
    drives = [] if drive is None else [drive] if isinstance(drive, Drive) else list(drive)
    omegas = {d.omega for d in drives}
    if len(omegas) > 1:
        raise DomainError("drive", sorted(omegas), "all tones must share one frequency")
    omega = omegas.pop() if omegas else 0.0
    bound = max_step(p, omega)
    if dt is None:
        dt = bound
    elif dt > bound * (1 + 1e-12):
        raise DomainError("dt", dt, f"must not exceed {bound:.3e}")
    if t_final is None:
        t_final = settle_time(p, sideband)
    n_steps = max(int(math.ceil(t_final / dt)), 1)
    h = t_final / n_steps

    (m11, m12), (m21, m22) = dm.m.tolist()
    ka, kb, kap, kbp = (math.sqrt(p.gamma_a), math.sqrt(p.gamma_b),
                        math.sqrt(p.gamma_a_p), math.sqrt(p.gamma_b_p))
    fa = fb = 0j
    direct_a = direct_b = 0j
    for d in drives:
        amp = complex(d.amplitude)
        fa += {"A": ka, "A'": kap}.get(d.port, 0.0) * amp
        fb += {"B": kb, "B'": kbp}.get(d.port, 0.0) * amp
        direct_a += amp if d.port == "A" else 0j
        direct_b += amp if d.port == "B" else 0j

    if omega != 0:
        window = min(10 * 2 * math.pi / abs(omega), 0.25 * t_final)
    else:
        window = 0.25 * t_final
    n_window = max(int(window / h), 2)
    n_window -= n_window % 2
    start_window = n_steps - n_window

    scale = abs(a0) + abs(b0) + sum(abs(d.amplitude) for d in drives)
    limit = 1e12 * max(scale, 1e-300) * max(1.0, p.max_rate / min(p.Gamma_a, p.Gamma_b))

    ts, xa, xb, oa, ob = [], [], [], [], []
    proj_a = [0j, 0j]
    proj_b = [0j, 0j]
    half_h = 0.5 * h
    x1, x2 = complex(a0), complex(b0)
    rot_half = cmath.exp(-1j * omega * half_h)
    phase = 1 + 0j  # exp(-i omega t) at the current step

    def record(n, t, x1, x2, ph):
        out_a = ka * x1 - direct_a * ph
        out_b = kb * x2 - direct_b * ph
        if record_every and n % record_every == 0:
            ts.append(t)
            xa.append(x1)
            xb.append(x2)
            oa.append(out_a)
            ob.append(out_b)
        if n > start_window:
            k = 0 if n <= start_window + n_window // 2 else 1
            back = ph.conjugate()
            proj_a[k] += out_a * back
            proj_b[k] += out_b * back

    record(0, 0.0, x1, x2, phase)
    for n in range(1, n_steps + 1):
        t = (n - 1) * h
        # forcing phases at t, t + h/2, t + h, recomputed to avoid drift
        u0 = cmath.exp(-1j * omega * t) if omega else 1.0
        u1 = u0 * rot_half
        u2 = cmath.exp(-1j * omega * (t + h)) if omega else 1.0
        k1a = m11 * x1 + m12 * x2 + fa * u0
        k1b = m21 * x1 + m22 * x2 + fb * u0
        y1, y2 = x1 + half_h * k1a, x2 + half_h * k1b
        k2a = m11 * y1 + m12 * y2 + fa * u1
        k2b = m21 * y1 + m22 * y2 + fb * u1
        y1, y2 = x1 + half_h * k2a, x2 + half_h * k2b
        k3a = m11 * y1 + m12 * y2 + fa * u1
        k3b = m21 * y1 + m22 * y2 + fb * u1
        y1, y2 = x1 + h * k3a, x2 + h * k3b
        k4a = m11 * y1 + m12 * y2 + fa * u2
        k4b = m21 * y1 + m22 * y2 + fb * u2
        x1 += h / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a)
        x2 += h / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b)
        if not (abs(x1) + abs(x2) < limit):
            raise DivergenceError(
                f"{sideband} mean field diverged at t={n * h:.4g} (|x| = {abs(x1) + abs(x2):.3e})"
            )
        record(n, n * h, x1, x2, u2)

    steady = ratio = None
    residual = 0.0
    if drives:
        half = n_window // 2
        first = np.array([proj_a[0], proj_b[0]]) / half
        second = np.array([proj_a[1], proj_b[1]]) / half
        residual = float(np.max(np.abs(second - first)) / max(np.max(np.abs(second)), 1e-300))
        if np.max(np.abs(second)) == 0:
            residual = float(np.max(np.abs(first)))
        if residual > tol:
            raise ConvergenceError(
                f"steady state not reached by t_final={t_final:.4g}; increase t_final", residual
            )
        steady = second
        if len(drives) == 1:
            ratio = second / complex(drives[0].amplitude)
    return MeanFieldResult(
        t=np.array(ts), a=np.array(xa, dtype=complex), b=np.array(xb, dtype=complex),
        A_out=np.array(oa, dtype=complex), B_out=np.array(ob, dtype=complex),
        steady=steady, ratio=ratio, residual=residual, dt=h,
    )


def steady_state_ratio(p: SystemParams, sideband: str, port: str, omega: float, **kw):
    """Steady-state (A_out, B_out) / drive amplitude for a unit tone on ``port``."""
    return integrate_mean_field(p, sideband, Drive(port, 1.0, omega), **kw).ratio


@dataclass(frozen=True)
class Moments:
    """Normal-ordered steady-state moments <a^dag a>, <b^dag b>, <a b>."""

    n_a: float
    n_b: float
    ab: complex


def _solve_sylvester(m, n, q):
    """Solve m X + X n + q = 0 for small dense matrices by elimination."""
    dim = m.shape[0]
    eye = np.eye(dim)
    # column-major vec: vec(m X) = (I kron m) vec X, vec(X n) = (n^T kron I) vec X
    op = np.kron(eye, m) + np.kron(n.T, eye)
    x = np.linalg.solve(op, -q.reshape(-1, order="F"))
    return x.reshape(dim, dim, order="F")


def lyapunov_steady_state(p: SystemParams, sideband: str) -> Moments:
    """Steady-state second moments with vacuum on every input.

    For x = (a, b) [red] or (a, b^dagger) [blue] driven by white noise with
    <xi(t) xi^dagger(t')> = Q delta(t - t'), P = <x x^dagger> obeys
    M P + P M^dagger + Q = 0. Vacuum gives <A A^dagger> = 1 and
    <A^dagger A> = 0, so Q = diag(Gamma_a, Gamma_b) for red and
    diag(Gamma_a, 0) for blue. The anomalous block X = <x x^T> has no
    vacuum source and obeys M X + X M^T = 0.
    """
    m = drift_matrix(p, sideband).m
    if np.max(np.linalg.eigvals(m).real) >= 0:
        raise DivergenceError(f"{sideband} drift is unstable; no steady state")
    if sideband == "red":
        q = np.diag([p.Gamma_a, p.Gamma_b]).astype(complex)
        P = _solve_sylvester(m, m.conj().T, q)
        X = _solve_sylvester(m, m.T, np.zeros((2, 2), dtype=complex))
        return Moments(float(P[0, 0].real - 1.0), float(P[1, 1].real - 1.0), complex(X[0, 1]))
    q = np.diag([p.Gamma_a, 0.0]).astype(complex)
    P = _solve_sylvester(m, m.conj().T, q)
    return Moments(float(P[0, 0].real - 1.0), float(P[1, 1].real), complex(P[0, 1]))
