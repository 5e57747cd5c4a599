#pragma once
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <tglasso/data.hpp>
#include <tglasso/solver.hpp>
#include <tglasso/tree.hpp>
#include <tglasso/treelearn.hpp>

namespace tglasso::io {

namespace fs = std::filesystem;

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

/**
 * Delimiter-separated matrix text.
 *
 * One sample per row. The delimiter is a comma, a tab, or runs of spaces,
 * detected from the first data line. A first line with any non-numeric
 * field is taken as a header. Lines starting with '#' are metadata and are
 * skipped by read_matrix.
 */
struct Table
{
    Matrix values;
    std::vector<std::string> header;
};

Table read_table(const fs::path& path);
Matrix read_matrix(const fs::path& path);

/// Comma-separated, with `header` as the first line when non-empty.
void write_matrix(const fs::path& path, const Matrix& m, const std::vector<std::string>& header = {});

/// prefix0, prefix1, ... prefix{n-1}.
std::vector<std::string> indexed_header(const std::string& prefix, Eigen::Index n);

/**
 * Tree documents are JSON:
 *
 *   {"num_outputs": K, "root": r,
 *    "nodes": [{"id": 0, "children": [], "group": [0]}, ...,
 *              {"id": K, "children": [0, 1], "s": 0.5, "g": 0.5, "group": [0, 1]}]}
 *
 * Leaf id k is output k. Internal nodes carry s and g (or "w" to supply a
 * weight directly). "group" is optional on input: when present it is kept
 * as written so validate_tree can cross-check it against the topology,
 * otherwise it is derived. s + g within 1e-12 of one is snapped to g = 1 - s.
 */
OutputTree tree_from_json(const std::string& text);
std::string tree_to_json(const OutputTree& tree);
OutputTree read_tree(const fs::path& path);
void write_tree(const fs::path& path, const OutputTree& tree);

/// Merge table with header left,right,height,size,normalized_height.
void write_dendrogram(const fs::path& path, const Dendrogram& dend);
Dendrogram read_dendrogram(const fs::path& path);

/**
 * Fit result document: "# key: value" metadata lines (lambda, iterations,
 * converged, final_objective, num_inputs, num_outputs) followed by the J×K
 * coefficient block with a y0..y{K-1} header. read_matrix reads the block
 * directly.
 */
void write_fit_result(const fs::path& path, const FitResult& fit);
std::map<std::string, std::string> read_metadata(const fs::path& path);

/// Writes `text` to `path`, creating parent directories. IoError on failure.
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

} // namespace tglasso::io
