"""Workbench for regression-derandomized lattice noise over star networks.

Subpackages by concern:

* channel: star topologies, Gaussian channels, exchange rounds, seed agreement
* regression: period grid search, transforms, global refit
* oracle: deterministic per-residue error tables and their statistics
* lwlr: samples (a, <a,s> + e_<a,s>) and the rounding baseline
* prf: gadget-tree star-specific key-homomorphic PRF and its harnesses
* setfam: intersecting set families, bounds, and brute-force oracle
* mutualinfo: mutual information between overlapping regression fits
"""

from .channel import (ChannelParams, Dataset, DatasetMeta, FuncSpec,
                      StarTopology, agree_secret, simulate_exchange, stream,
                      transmit, xor_fold)
from .lwlr import LwlrSample, lwlr_vs_lwr_report, round_lwr, sample_lwlr
from .mutualinfo import (MiSummary, OverlapDesign, closed_form_mi,
                         covariance_oracle, marginal_entropy, monte_carlo_mi)
from .oracle import (ErrorOracle, build_error_oracle, error_statistics,
                     eval_error)
from .prf import (PrfKey, PrfParams, TreeShape, collision_probability_bound,
                  eval_AT, gadget_decompose, gadget_matrix,
                  gadget_matrix_decompose, gadget_vector, homomorphism_gap,
                  key_add, prf_eval, star_collision_rate)
from .regression import (Hypothesis, SingularDesignError, TransformedDataset,
                         fit_dataset, fit_least_squares,
                         grid_search_hypothesis, refine_hypothesis,
                         transform_dataset)
from .setfam import (FANO_PLANE, FamilyReport, SetFamily, add_distinguished,
                     bound_one_more, bound_simple, bound_small_n,
                     brute_force_max, construct_exact_t, construct_small_n,
                     double_family, feasibility_check, max_sskh_prfs,
                     strip_distinguished, verify_family)
from .statcheck import sigma_hat
from .transforms import Transform

__version__ = "0.1.0"
