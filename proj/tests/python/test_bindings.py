import json

import numpy as np
import pytest

import tglasso as tg


def small_sim(**kw):
    args = dict(n_train=60, n_test=20, j_inputs=30, k_outputs=8, branching=[2, 2, 2], active_levels=[1, 2])
    args.update(kw)
    return tg.simulate(**args)


def test_tree_weights_sum_to_one_per_leaf():
    tree = tg.balanced_tree([3, 2, 2], 0.3)
    w = tree.weights()
    for leaf in range(tree.num_outputs):
        total, v = 0.0, leaf
        while v != -1:
            total += w[v]
            v = tree.parent(v)
        assert total == pytest.approx(1.0, abs=1e-12)
    assert tree.is_valid()


def test_tree_json_round_trip():
    tree = tg.balanced_tree([2, 2], 0.5)
    back = tg.OutputTree.from_json(tree.to_json())
    assert back.weights() == tree.weights()
    assert json.loads(back.to_json())["num_outputs"] == 4


def test_degenerate_penalties():
    rng = np.random.default_rng(0)
    b = rng.normal(size=(5, 4))
    assert tg.penalty(b, tg.lasso_tree(4)) == pytest.approx(np.abs(b).sum(), rel=1e-12)
    assert tg.penalty(b, tg.l1l2_tree(4)) == pytest.approx(np.linalg.norm(b, axis=1).sum(), rel=1e-12)


def test_fit_zero_lambda_matches_least_squares():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(40, 5))
    y = x @ rng.normal(size=(5, 3)) + 0.1 * rng.normal(size=(40, 3))
    res = tg.fit(x, y, tg.lasso_tree(3), lam=0.0)
    xc, yc = x - x.mean(0), y - y.mean(0)
    ols = np.linalg.lstsq(xc, yc, rcond=None)[0]
    assert res["converged"]
    np.testing.assert_allclose(res["b"], ols, atol=1e-8)
    pred = tg.predict(x, res["b"], res["x_means"], res["y_means"])
    np.testing.assert_allclose(pred, xc @ ols + y.mean(0), atol=1e-8)


def test_objective_trace_descends():
    sim = small_sim()
    res = tg.fit(sim["x_train"], sim["y_train"], sim["tree"], lam=2.0)
    trace = np.asarray(res["objective_trace"])
    assert np.all(np.diff(trace) <= 1e-10)
    assert trace[-1] == pytest.approx(
        tg.objective(sim["x_train"], sim["y_train"], res["b"], sim["tree"], 2.0), rel=1e-12
    )


def test_simulation_and_evaluation():
    sim = small_sim(noise_sd=0.0, n_train=80)
    res = tg.fit(sim["x_train"], sim["y_train"], sim["tree"], lam=0.0)
    np.testing.assert_allclose(res["b"], sim["b_true"], atol=1e-8)
    assert tg.auc(res["b"], sim["b_true"]) == 1.0
    fpr, tpr, _ = tg.roc(sim["b_true"], sim["b_true"])
    assert fpr[0] == 0.0 and tpr[-1] == 1.0
    assert tg.test_mse(sim["y_test"], sim["y_test"]) == 0.0


def test_learned_tree_and_cross_validation():
    sim = small_sim()
    tree = tg.learn_tree(sim["y_train"], 0.9)
    assert tree.num_outputs == 8 and tree.is_valid()
    merges, heights = tg.cluster(sim["y_train"])
    assert len(merges) == 7 and heights[-1] == pytest.approx(1.0)
    grid = tg.log_grid(0.1, 10.0, 3)
    best, means = tg.cross_validate(sim["x_train"], sim["y_train"], tree, grid, folds=3)
    assert best in grid and len(means) == 3


def test_errors_are_typed():
    with pytest.raises(tg.DimensionError):
        tg.fit(np.ones((5, 2)), np.ones((4, 1)), tg.lasso_tree(1))
    with pytest.raises(tg.ConfigError):
        tg.fit(np.ones((5, 2)), np.ones((5, 1)), tg.lasso_tree(1), lam=-1.0)
    with pytest.raises(tg.InputError):
        tg.OutputTree.from_json("{not json")
    assert issubclass(tg.ConfigError, tg.Error)
