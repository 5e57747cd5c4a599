#include <doctest.h>

#include <tglasso/errors.hpp>
#include <tglasso/study.hpp>

using namespace tglasso;

namespace {

StudyConfig tiny()
{
    StudyConfig c;
    c.base.n_train = 40;
    c.base.n_test = 10;
    c.base.j_inputs = 30;
    c.base.k_outputs = 8;
    c.base.branching = {2, 2, 2};
    c.base.active_levels = {1, 2};
    c.signals = {0.5};
    c.replicates = 3;
    c.lambda_grid = log_grid(1e-1, 1e1, 3);
    c.folds = 3;
    return c;
}

} // namespace

TEST_SUITE("study")
{
    TEST_CASE("method names round-trip")
    {
        for (Method m : all_methods()) CHECK(parse_method(method_name(m)) == m);
        CHECK_THROWS_AS(parse_method("ridge"), ConfigError);
    }

    TEST_CASE("every method yields a valid weighted tree")
    {
        const SimulatedData d = generate_dataset(tiny().base);
        for (Method m : all_methods()) {
            const OutputTree t = tree_for_method(m, d);
            CHECK(validate_tree(t).ok());
            CHECK(t.num_outputs() == 8);
        }
    }

    TEST_CASE("study outcomes are complete and independent of the job count")
    {
        StudyConfig c = tiny();
        const StudyResult a = run_study(c);
        c.jobs = 3;
        const StudyResult b = run_study(c);
        CHECK(a.outcomes.size() == 3 * all_methods().size());
        CHECK(a.lambdas.size() == all_methods().size());
        for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
            CHECK(a.outcomes[i].auc == b.outcomes[i].auc);
            CHECK(a.outcomes[i].mse == b.outcomes[i].mse);
            CHECK(a.outcomes[i].auc >= 0.0);
            CHECK(a.outcomes[i].auc <= 1.0);
        }
        const ScalarSummary s = a.auc_summary(Method::kTree, 0.5);
        CHECK(s.count == 3);
        CHECK(a.mean_roc(Method::kLasso, 0.5).fpr.size() == 101);
    }

    TEST_CASE("fixed lambda skips cross-validation")
    {
        StudyConfig c = tiny();
        c.fixed_lambda = 0.7;
        c.replicates = 1;
        c.methods = {Method::kTree};
        const StudyResult r = run_study(c);
        CHECK(r.lambda_for(Method::kTree, 0.5) == 0.7);
        CHECK(r.lambdas.front().cv.table.empty());
    }

    TEST_CASE("snapshot holds every method's estimate")
    {
        StudyConfig c = tiny();
        c.fixed_lambda = 1.0;
        const CoefficientSnapshot s = coefficient_snapshot(c);
        CHECK(s.estimates.size() == all_methods().size());
        CHECK(s.b_true.rows() == 30);
    }

    TEST_CASE("config validation")
    {
        StudyConfig c = tiny();
        c.replicates = 0;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c = tiny();
        c.signals.clear();
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c = tiny();
        c.methods.clear();
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
}
