"""Entanglement of qubits driven by a single photon in the resonant Tavis-Cummings model.

Modules
-------
measures
    Concurrence, entanglement of formation and l1 coherence.
two_qubit
    Closed-form reduced dynamics of two qubits and one photon.
collective
    N identical qubits through excitation-sector diagonalisation.
oracle
    Brute-force reference evolutions and the cross-check battery.
experiments, cli
    Parameter sweeps written to CSV, and the ``tc-entangle`` command.
"""

from .errors import (ConfigError, DimensionError, DomainError, InvariantViolation,
                     NumericalFailure, TCEntangleError, TruncationError)
from .measures import (binary_entropy, check_density_matrix, concurrence,
                       entanglement_of_formation, l1_coherence, qubit_state_coherence, spin_flip)
from .two_qubit import (Case, CaseLabel, ConcurrenceSeries, QubitAmplitudes, TimeKernels,
                        TwoQubitInitialState, concurrence_series, max_concurrence,
                        reduced_density_case, reduced_density_general, time_kernels)
from .collective import (CollectiveMoments, PairwiseElements, SectorBasis, SectorEigensystem,
                         SpinCoherentExpansion, collective_moments, dicke_coefficients,
                         evolve_component, pairwise_density, pairwise_max_concurrence,
                         sector_basis, sector_eigensystem)

__version__ = "0.1.0"
