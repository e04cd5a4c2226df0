"""Stability boundary, dispersion roots, neutral-mode census and index counts."""
from .boundary import (TABLE1_BETAS, BoundaryPoint, boundary_sweep, capital_lambda,
                       find_beta_minus, lambda_beta_profile)
from .census import (CensusEntry, IndexCount, NMinus, census_mode, index_counts,
                     n_minus_L_alpha, neutral_nonresonant_census, singular_mode_signature)
from .dispersion import (Mode, Residuals, build_mode, count_unstable, dispersion,
                         find_unstable_mode, quadratic_form, verify_mode_identities,
                         winding_number)
