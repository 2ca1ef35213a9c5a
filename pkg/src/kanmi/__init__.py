"""k-ANMI clustering of categorical data by direct ANMI maximization."""
from .algorithm import (ClusterState, EmptyClusterError, KanmiConfig, KanmiResult,
                        evaluate_move, initialize, run, state_anmi, sweep)
from .core import (Dataset, Histogram, HistogramSet, Labeling, attribute_labeling,
                   build_histograms, histogram_add, histogram_remove)
from .information import anmi, contingency, nmi, nmi_from_histograms
from .kernels import BACKEND

__version__ = "0.1.0"
