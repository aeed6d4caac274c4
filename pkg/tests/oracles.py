"""Independent reference solvers used by the tests."""

import numpy as np
from scipy.integrate import solve_ivp


def spectral_quintic_amplitude(t_eval, n=1024, L=20.0, amp=1.6):
    """Max |u| of ``i u_t + u_xx + |u|^4 u = 0`` from ``amp*exp(-x^2)`` on a periodic box.

    Fourier in space, DOP853 in time. Integration stops once the amplitude
    passes 8, so later entries are ``nan``.
    """
    x = -L / 2 + L * np.arange(n) / n
    k = 2 * np.pi * np.fft.fftfreq(n, d=L / n)
    u0 = amp * np.exp(-x**2) + 0j

    def rhs(t, y):
        u = y[:n] + 1j * y[n:]
        uxx = np.fft.ifft(-(k**2) * np.fft.fft(u))
        du = 1j * (uxx + np.abs(u) ** 4 * u)
        return np.concatenate((du.real, du.imag))

    def too_big(t, y):
        return np.max(y[:n] ** 2 + y[n:] ** 2) - 64.0

    too_big.terminal = True
    sol = solve_ivp(rhs, (0, max(t_eval)), np.concatenate((u0.real, u0.imag)), method="DOP853",
                    rtol=1e-9, atol=1e-11, t_eval=t_eval, events=too_big)
    out = np.full(len(t_eval), np.nan)
    amps = np.sqrt(sol.y[:n] ** 2 + sol.y[n:] ** 2).max(axis=0)
    out[: len(amps)] = amps
    t_hit = sol.t_events[0][0] if len(sol.t_events[0]) else None
    return out, t_hit
