"""Concentration of graph matrices: bounds, simulators, and experiments.

Subpackages by topic:

* :mod:`graphconc.linalg` - symmetric eigen-decomposition, PSD order,
  matrix exponential, eigen-range projectors, interlacing;
* :mod:`graphconc.concentration` - matrix tail bounds and the martingale
  simulator that validates them;
* :mod:`graphconc.graphs` - independent-edge random graphs, typical
  matrices, deviation experiments, spectral gap;
* :mod:`graphconc.quasirandom` - numeric quasi-randomness checks;
* :mod:`graphconc.graphon` - kernel-driven inhomogeneous random graphs,
  step kernels, cut/operator norms, spectrum estimation;
* :mod:`graphconc.perturbation` - multiplicity transfer, projector
  perturbation bound, resolvent contour projector;
* :mod:`graphconc.cli` - the reproducible experiment runner.
"""

from . import (  # noqa: F401
    concentration,
    errors,
    graphon,
    graphs,
    linalg,
    perturbation,
    quasirandom,
    rng,
)

__version__ = "0.1.0"
