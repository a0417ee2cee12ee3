"""orsplit: decision trees whose splits are exact-optimal boolean OR-clauses.

Each node split selects a set of yes/no questions, joined by OR, that
exactly maximizes the node's Gini reduction.  The selection problem is
solved by a bounded breadth-first implicit enumeration; an LP exporter
and a brute-force oracle let any external solver verify the optima.
"""

from orsplit._kernel import BACKEND as KERNEL_BACKEND
from orsplit.binarize import (
    BinarizeConfig,
    BinaryMatrix,
    Question,
    SeparableSplit,
    binarize_categorical,
    binarize_numeric,
    build_matrix,
    find_separable_column,
)
from orsplit.dataset import (
    BinaryTarget,
    Column,
    Dataset,
    binarize_target,
    load_binary_features,
    load_csv,
    write_csv,
)
from orsplit.lpwriter import LpSummary, write_error_lp, write_gini_lp
from orsplit.metrics import (
    ConfusionResult,
    Prediction,
    RocResult,
    confusion_accuracy,
    predict_case,
    predict_dataset,
    predict_multiclass,
    roc_auc,
    vote_ensemble,
)
from orsplit.solver import (
    SolveResult,
    SolverConfig,
    brute_force_solve,
    enum_solve,
    resolve_min_node_size,
    worst_case_evals,
)
from orsplit.splitcore import (
    NodeStats,
    SplitEval,
    delta_gini,
    error_objective,
    error_objective_raw,
    eval_ruleset,
    gini,
    make_split_eval,
    tau_bound,
)
from orsplit.tree import (
    Ensemble,
    Tree,
    TreeConfig,
    TreeNode,
    grow,
    grow_multiclass,
    load_model,
    prune_to_max_leaves,
    save_model,
    summarize,
    to_dot,
)

__version__ = "0.1.0"
