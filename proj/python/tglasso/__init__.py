"""Tree-guided group lasso for multi-output regression."""

from ._core import (
    ConfigError,
    DimensionError,
    Error,
    InputError,
    IoError,
    OutputTree,
    SolverError,
    __version__,
    auc,
    balanced_tree,
    cluster,
    cross_validate,
    fit,
    l1l2_tree,
    lasso_tree,
    learn_tree,
    log_grid,
    objective,
    penalty,
    predict,
    roc,
    simulate,
    star_tree,
    test_mse,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
