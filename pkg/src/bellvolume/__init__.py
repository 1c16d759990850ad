"""Volume-of-violation estimates for Bell tests on spherically symmetric boxes."""

from .estimation import (ConfigSample, CrossoverResult, SweepPoint, VolumeEstimate,
                         estimate_volume, find_crossover, sweep_lambda)
from .geometry import (ChshConfig, Direction, I3322Config, RandomStream, angle_between,
                       coplanar_chsh_config, sample_chsh_config, sample_direction,
                       sample_i3322_config)
from .inequalities import CHSH, I3322, Scenario, chsh_value, i3322_value, violates
from .models import (PiecewiseLinear, PiecewiseNode, Singlet, eval_correlation,
                     joint_outcome_probabilities, lambda_box_model, load_model,
                     pr_box_model, single_party_marginal, singlet_model, validate_model)
from .search import MaxViolationResult, search_max_violation

__version__ = "0.1.0"
