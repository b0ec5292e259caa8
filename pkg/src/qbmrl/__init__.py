"""Free-energy reinforcement learning with Boltzmann machines on maze MDPs,
sampled by simulated annealing and simulated quantum annealing."""

__version__ = "0.1.0"

from .ising import (  # noqa: F401
    IsingModel,
    build_effective_model,
    classical_energy,
    effective_energy,
    slice_coupling,
)
from .samplers import (  # noqa: F401
    SampleSet,
    SaSchedule,
    SqaSchedule,
    sa_sample,
    slice_expectations,
    sqa_sample,
)
from .machines import (  # noqa: F401
    BoltzmannMachine,
    FreeEnergyEstimate,
    VisibleAssignment,
    clamp,
    classical_free_energy,
    dbm,
    exact_free_energy,
    exact_quantum_free_energy,
    gbm,
    quantum_free_energy,
    rbm,
    rbm_free_energy,
    rbm_hidden_activations,
)
from .maze import (  # noqa: F401
    Action,
    Cell,
    Maze,
    OptimalPolicySet,
    TransitionKernel,
    admissible_actions,
    generate_nx5,
    parse_maze,
    step,
    value_iteration,
)
from .training import (  # noqa: F401
    PolicyTrace,
    Trainer,
    TrainingConfig,
    default_config,
    generate_samples,
    train,
)
from .harness import (  # noqa: F401
    ExperimentSpec,
    FidelityTrace,
    average_fidelity,
    fidelity,
    random_policy_fidelity,
    run_experiment,
)
