import numpy as np

from errors import NonPositiveStd
from .DiffusionSchedule import DiffusionSchedule


class GaussianBridge:
    """
    Closed-form Schrödinger bridge between N(m0, s0^2) and N(m1, s1^2) under a
    Brownian reference with schedule g(t).

    Endpoints are coupled with the entropic-OT covariance
        c = (sqrt(4 s0^2 s1^2 + e^2) - e) / 2,     e = int_0^1 g(t)^2 dt,
    and, on the clock s = s(t) of the schedule, the marginal at time t is Gaussian with
        mean      (1-s) m0 + s m1
        variance  (1-s)^2 s0^2 + s^2 s1^2 + 2 s(1-s) c + e s(1-s).
    The Markov drift reproducing these marginals is
        b(x, t) = s'(t) [ (m1 - m0) + (dv/ds - e) / (2 v) (x - m_t) ].
    At e = 0 this is the Monge displacement field of the map x -> m1 + (s1/s0)(x - m0).

    All parameters broadcast, so one object can carry per-sample (conditional)
    endpoints. `cross_cov` overrides c to build a sub-optimal coupling with the
    same marginals.
    """
    def __init__(self, m0, s0, m1, s1, sigma=0.0, kind='constant', cross_cov=None):
        self.m0 = np.asarray(m0, dtype=float)
        self.s0 = np.asarray(s0, dtype=float)
        self.m1 = np.asarray(m1, dtype=float)
        self.s1 = np.asarray(s1, dtype=float)
        if np.any(self.s0 <= 0) or np.any(self.s1 <= 0):
            raise NonPositiveStd(f'Gaussian bridge needs s0, s1 > 0 (got s0={s0}, s1={s1}).')
        self.schedule = DiffusionSchedule(sigma, kind)
        self.eps = self.schedule.total_variance()

        optimal = 0.5 * (np.sqrt(4.0 * self.s0 ** 2 * self.s1 ** 2 + self.eps ** 2) - self.eps)
        if cross_cov is None:
            self.c = optimal
        else:
            self.c = np.asarray(cross_cov, dtype=float)
            bound = self.s0 * self.s1
            if np.any(self.c > bound + 1e-12) or np.any(self.c <= -bound):
                raise ValueError('cross_cov must lie in (-s0 s1, s0 s1].')

    @property
    def sigma(self) -> float:
        return self.schedule.sigma

    @property
    def coupling_correlation(self):
        return self.c / (self.s0 * self.s1)

    def mean(self, t):
        s = self.schedule.clock(t)
        return (1.0 - s) * self.m0 + s * self.m1

    def variance(self, t):
        s = self.schedule.clock(t)
        return ((1.0 - s) ** 2 * self.s0 ** 2 + s ** 2 * self.s1 ** 2
                + 2.0 * s * (1.0 - s) * self.c + self.eps * s * (1.0 - s))

    def _dvar_ds(self, s):
        return (-2.0 * (1.0 - s) * self.s0 ** 2 + 2.0 * s * self.s1 ** 2
                + 2.0 * (1.0 - 2.0 * s) * self.c + self.eps * (1.0 - 2.0 * s))

    def gain(self, t):
        """k(t) in b(x, t) = m'(t) + k(t) (x - m_t)."""
        s = self.schedule.clock(t)
        return self.schedule.clock_rate(t) * (self._dvar_ds(s) - self.eps) / (2.0 * self.variance(t))

    def drift(self, x, t):
        rate = self.schedule.clock_rate(t)
        return rate * (self.m1 - self.m0) + self.gain(t) * (x - self.mean(t))

    def monge_map(self, x0):
        return self.m1 + (self.s1 / self.s0) * (x0 - self.m0)

    def inverse_monge_map(self, x1):
        return self.m0 + (self.s0 / self.s1) * (x1 - self.m1)

    def analytic_energy(self, n_quad: int = 2001) -> np.ndarray:
        """int_0^1 1/2 E|b(X_t, t)|^2 dt, by trapezoid quadrature in t."""
        t = np.linspace(0.0, 1.0, n_quad)
        vals = []
        for tk in t:
            rate = self.schedule.clock_rate(tk)
            vals.append(0.5 * ((rate * (self.m1 - self.m0)) ** 2 + self.gain(tk) ** 2 * self.variance(tk)))
        return np.trapezoid(np.asarray(vals), t, axis=0)

    def sample_source(self, n, rng: np.random.Generator):
        return self.m0 + self.s0 * rng.standard_normal(n)


def solve_gaussian_bridge(m0, s0, m1, s1, sigma=0.0, kind='constant') -> GaussianBridge:
    return GaussianBridge(m0, s0, m1, s1, sigma=sigma, kind=kind)
