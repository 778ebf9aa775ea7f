"""Temperature derivatives under a mean-reverting Gamma-time-changed model.

Library layout:

- `seasonal`  : seasonal mean/volatility functions and exponential-kernel integrals
- `charfun`   : cumulant exponents and characteristic functions (spot and CAT)
- `esscher`   : martingale-measure selection by exponential tilting
- `cosine`    : Fourier-cosine density recovery and strangle pricing
- `simulate`  : exact-law path simulation and Monte Carlo oracles
- `data`      : CSV ingestion, repair, descriptive statistics
- `calibrate` : seasonal OLS, mean-reversion and time-change estimation
- `cli`       : batch command line (fit / price / simulate / density / stats)
"""

from .calibrate import (AlphaFit, FitReport, TimeChangeFit, fit_alpha, fit_seasonal,
                        fit_timechange, innovation_charfun, innovations,
                        log_likelihood, timechange_cumulants)
from .charfun import (GammaTimeChange, ModelParams, a1, cat_cumulants, charfun_T,
                      charfun_cat, cumulant_V, laplace_exponent_gamma)
from .cosine import (ContractSpec, CosGrid, PricingWarning, cos_coefficients,
                     density_from_charfun, leg_value, payoff_cos_integrals,
                     price_strangle, truncation_bounds)
from .data import (DailySeries, KsResult, SummaryStats, ingest_csv, ks_normality,
                   log_returns, summary_stats)
from .errors import (CalibrationError, DomainError, IngestError, NoBracketError,
                     QuadratureError, TempDerivError)
from .esscher import (MarketParams, ThetaSolution, cumulant_V_prime,
                      martingale_residual, solve_theta, transformed_timechange)
from .seasonal import FourCoeffs, eval_seasonal, k1, k2, quad_exp_kernel
from .simulate import (SimConfig, empirical_charfun, gamma_increment, mc_price_cat,
                       simulate_cat, simulate_paths)

__version__ = "0.1.0"

__all__ = [
    "AlphaFit", "CalibrationError", "ContractSpec", "CosGrid", "DailySeries",
    "DomainError", "FitReport", "FourCoeffs", "GammaTimeChange", "IngestError",
    "KsResult", "MarketParams", "ModelParams", "NoBracketError", "PricingWarning",
    "QuadratureError", "SimConfig", "SummaryStats", "TempDerivError",
    "ThetaSolution", "TimeChangeFit", "a1", "cat_cumulants", "charfun_T",
    "charfun_cat", "cos_coefficients", "cumulant_V", "cumulant_V_prime",
    "density_from_charfun", "empirical_charfun", "eval_seasonal", "fit_alpha",
    "fit_seasonal", "fit_timechange", "gamma_increment", "ingest_csv",
    "innovation_charfun", "innovations", "k1", "k2", "ks_normality",
    "laplace_exponent_gamma", "leg_value", "log_likelihood", "log_returns",
    "martingale_residual", "mc_price_cat", "payoff_cos_integrals",
    "price_strangle", "quad_exp_kernel", "simulate_cat", "simulate_paths",
    "solve_theta", "summary_stats", "transformed_timechange", "truncation_bounds",
]
