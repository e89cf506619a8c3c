"""Local causal structure discovery around user-chosen target nodes.

The package learns the neighborhood structure of multiple targets jointly
(algorithm name: CML), with a single-neighborhood baseline (SNL), a global
PC baseline, oracle and Fisher-z conditional-independence testing, a linear
Gaussian simulator, evaluation metrics, and a cross-validation harness.
"""

from .backend import active_backend, available_backends, use_backend
from .graphs import ARROW, CIRCLE, TAIL, CyclicInputError, Dag, GraphError, Mark, MixedGraph
from .separation import ancestors, d_separated, inducing_path_exists, m_separated

__version__ = "0.1.0"
