"""Uniform edge sampling with sublinear query complexity."""

from .analysis import (EdgeDistribution, chi_square_gof, chi_square_uniform, empirical_distribution,
                       exact_attempt_distribution, pointwise_distance, tv_distance)
from .approx import (AttemptOutcome, EdgeSample, SampleBatch, SamplerConfig, SamplerError, ell_of,
                     sample_edge, sample_edges, sampling_attempt)
from .emulation import CouplingReport, ExtendedOracle, MaximalCoupling, coupled_run, make_extended
from .exact import CorrectionDistribution, ExactSampler, build_correction, sample_exactly
from .graph import (EdgeClassification, Graph, GraphFormatError, GraphValidationError, classify, generate,
                    load_graph, save_graph)
from .htable import HTable, compute_h, h_walk_oracle
from .oracle import QueryCounts, QueryError, QueryOracle

__version__ = "0.1.0"
