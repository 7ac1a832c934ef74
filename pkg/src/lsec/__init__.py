"""Large-scale spectral ensemble clustering.

Base clusterings come from landmark-based spectral clustering with reused
K-nearest-landmark searches; they are fused by partitioning the bipartite
graph between points and clusters.
"""
from ._backend import BACKEND, get_num_threads, set_num_threads
from .consensus import ConsensusResult, build_indicator, consensus_cluster, consensus_embedding, lsec
from .ensemble import Ensemble, EnsembleParams, generate_ensemble
from .errors import (ConvergenceError, DegenerateGraph, DimMismatch, FormatError, LengthMismatch,
                     LSECError, MalformedEnsemble, ParamError)
from .kmeans import assign_nearest, kmeans, light_kmeans
from .landmarks import gen_landmark_sets, select_landmarks
from .metrics import acc, nmi
from .synthetic import gen_synthetic

__version__ = "0.1.0"
