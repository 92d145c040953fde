"""Realized-volatility roughness and multifractality toolkit.

Tick data -> intraday returns -> daily realized volatility -> log-RV
increments -> MFDFA generalized Hurst exponents -> finite-sample ansatz
H(delta) = H0 * n / (n + a) -> multifractality strength metrics.
"""

__version__ = "0.1.0"

from .errors import DataError, NumericError, RoughscaleError  # noqa: F401
