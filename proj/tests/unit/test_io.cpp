#include <doctest.h>

#include "test_support.hpp"

#include <tglasso/errors.hpp>
#include <tglasso/io.hpp>
#include <tglasso/simgen.hpp>

#include <filesystem>
#include <random>

using namespace tglasso;
namespace fs = std::filesystem;

namespace {

struct TempDir
{
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("tglasso_io_" + std::to_string(Rng(std::random_device{}()).next()));
        fs::create_directories(path);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

} // namespace

TEST_SUITE("io")
{
    TEST_CASE("numbers round-trip through text")
    {
        Rng rng(1);
        for (int i = 0; i < 1000; ++i) {
            const double v = rng.normal() * std::pow(10.0, static_cast<double>(rng.below(40)) - 20.0);
            CHECK(std::stod(io::format_number(v)) == v);
        }
        CHECK(io::format_number(0.0) == "0");
        CHECK(io::format_number(0.4) == "0.4");
    }

    TEST_CASE("matrices round-trip with headers")
    {
        TempDir tmp;
        Rng rng(2);
        const Matrix m = tgtest::random_matrix(rng, 7, 4);
        io::write_matrix(tmp.path / "m.csv", m, io::indexed_header("x", 4));
        const io::Table t = io::read_table(tmp.path / "m.csv");
        CHECK(t.header == std::vector<std::string>{"x0", "x1", "x2", "x3"});
        CHECK(t.values == m);
    }

    TEST_CASE("delimiters, comments and errors")
    {
        TempDir tmp;
        io::write_text(tmp.path / "tab.txt", "# note\na\tb\n1\t2\n3\t4\n");
        io::write_text(tmp.path / "space.txt", "1  2 3\n4 5   6\n");
        io::write_text(tmp.path / "ragged.csv", "1,2\n3\n");
        io::write_text(tmp.path / "text.csv", "1,2\n3,x\n");
        const Matrix tab = io::read_matrix(tmp.path / "tab.txt");
        CHECK(tab.rows() == 2);
        CHECK(tab(1, 1) == 4.0);
        const Matrix sp = io::read_matrix(tmp.path / "space.txt");
        CHECK(sp.cols() == 3);
        CHECK(sp(1, 2) == 6.0);
        CHECK_THROWS_AS(io::read_matrix(tmp.path / "ragged.csv"), InputError);
        CHECK_THROWS_AS(io::read_matrix(tmp.path / "text.csv"), InputError);
        CHECK_THROWS_AS(io::read_matrix(tmp.path / "missing.csv"), IoError);
    }

    TEST_CASE("tree documents")
    {
        const OutputTree t = generate_true_structure(SimulationSpec{}).tree;
        const OutputTree back = compute_group_weights(io::tree_from_json(io::tree_to_json(t)));
        CHECK(validate_tree(back).ok());
        CHECK(io::tree_to_json(back) == io::tree_to_json(t));
        for (int v = 0; v < t.num_nodes(); ++v) CHECK(back.node(v).w == t.node(v).w);

        const std::string minimal = R"({"num_outputs": 3, "nodes": [
            {"id": 0}, {"id": 1}, {"id": 2},
            {"id": 3, "children": [0, 1], "s": 0.5},
            {"id": 4, "children": [3, 2], "s": 0.25, "g": 0.7500000000001}]})";
        const OutputTree m = io::tree_from_json(minimal);
        CHECK(m.root() == 4);
        CHECK(m.node(3).group == std::vector<int>{0, 1});
        CHECK(m.node(4).g == 0.75);
        CHECK(validate_tree(m).ok());

        const std::string edited = R"({"num_outputs": 3, "root": 4, "nodes": [
            {"id": 0, "group": [0]}, {"id": 1, "group": [1]}, {"id": 2, "group": [2]},
            {"id": 3, "children": [0, 1], "s": 0.5, "group": [0, 2]},
            {"id": 4, "children": [3, 2], "s": 0.5, "group": [0, 1, 2]}]})";
        CHECK(validate_tree(io::tree_from_json(edited)).has(IssueKind::kGroupMismatch));

        CHECK_THROWS_AS(io::tree_from_json("{not json"), InputError);
        CHECK_THROWS_AS(io::tree_from_json(R"({"nodes": []})"), InputError);
    }

    TEST_CASE("dendrogram and fit result documents")
    {
        TempDir tmp;
        Dendrogram d;
        d.num_leaves = 3;
        d.merges = {{0, 1, 0.1, 2}, {2, 3, 0.7, 3}};
        io::write_dendrogram(tmp.path / "d.csv", d);
        const Dendrogram back = io::read_dendrogram(tmp.path / "d.csv");
        CHECK(back.num_leaves == 3);
        REQUIRE(back.merges.size() == 2);
        CHECK(back.merges[1].left == 2);
        CHECK(back.merges[1].height == 0.7);
        CHECK(back.normalized_heights[0] == doctest::Approx(0.1 / 0.7));

        FitResult f;
        f.b = Matrix::Constant(3, 2, 0.25);
        f.lambda = 0.5;
        f.iterations = 7;
        f.converged = true;
        f.objective_trace = {3.0, 2.0};
        io::write_fit_result(tmp.path / "fit.csv", f);
        const auto meta = io::read_metadata(tmp.path / "fit.csv");
        CHECK(meta.at("lambda") == "0.5");
        CHECK(meta.at("iterations") == "7");
        CHECK(meta.at("converged") == "true");
        CHECK(meta.at("final_objective") == "2");
        CHECK(io::read_matrix(tmp.path / "fit.csv") == f.b);
    }

    TEST_CASE("unwritable path")
    {
        TempDir tmp;
        io::write_text(tmp.path / "file", "x");
        CHECK_THROWS_AS(io::write_text(tmp.path / "file" / "sub" / "y.csv", "z"), IoError);
    }
}
