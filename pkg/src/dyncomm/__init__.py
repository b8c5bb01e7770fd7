"""Dynamic community detection on evolving graphs.

Core pieces: weighted graphs evolved by edge-change streams, greedy
multi-level optimization of modularity or a cluster-volume entropy, local
re-clustering around changed regions, a planted-community stream
generator, and a static-versus-dynamic benchmark harness.
"""

from .bench import ExperimentConfig, StepRecord, run_experiment, summarize, write_csv
from .dynamic import (
    UNBOUNDED,
    DynamicState,
    StepMetrics,
    frontier,
    noise_filter,
    reset_partition,
    run_dynamic_step,
)
from .engine import Dendrogram, Objective, SweepConfig, flatten, induced_graph, one_level, run_static
from .generator import (
    GeneratorConfig,
    GraphStepSpec,
    barabasi_albert,
    distribute_evenly,
    generate_dyn_graph,
    generate_graph,
    minimal_merge,
    predefined_step_graphs,
    random_step_specs,
    varied_step_specs,
)
from .graph import (
    ChangeKind,
    ChangeSet,
    DynamicGraph,
    EdgeChange,
    Graph,
    add,
    apply_changes,
    diff,
    graph_from_edges,
    load_stream,
    remove,
    reweight,
    save_stream,
)
from .objectives import (
    ClusterStats,
    MoveContext,
    Partition,
    modularity,
    modularity_gain,
    wlogv,
    wlogv_gain,
)

__version__ = "0.1.0"
