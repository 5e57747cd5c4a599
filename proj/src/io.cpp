#include <tglasso/io.hpp>
#include <tglasso/errors.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tglasso::io {
namespace {

using json = nlohmann::json;

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line, char delim)
{
    std::vector<std::string> out;
    if (delim == ' ') {
        std::istringstream is(line);
        std::string tok;
        while (is >> tok) out.push_back(tok);
        return out;
    }
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, delim)) out.push_back(trim(field));
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

bool parse_double(const std::string& text, double& out)
{
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec == std::errc() && ptr == last) return true;
    // from_chars rejects "inf"/"nan" spellings some tools write; strtod does not.
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size();
}

char detect_delimiter(const std::string& line)
{
    if (line.find(',') != std::string::npos) return ',';
    if (line.find('\t') != std::string::npos) return '\t';
    return ' ';
}

std::ifstream open_in(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    return in;
}

} // namespace

std::string format_number(double value)
{
    if (value == 0.0) return "0";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw Error("number formatting failed");
    return std::string(buf, ptr);
}

Table read_table(const fs::path& path)
{
    std::ifstream in = open_in(path);
    Table table;
    std::vector<std::vector<double>> rows;
    char delim = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (delim == 0) delim = detect_delimiter(t);
        const auto fields = split_fields(t, delim);
        std::vector<double> values(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size() && numeric; ++i) numeric = parse_double(fields[i], values[i]);
        if (!numeric) {
            if (rows.empty() && table.header.empty()) {
                table.header = fields;
                continue;
            }
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
        }
        const std::size_t width = !rows.empty() ? rows.front().size() : table.header.size();
        if (width != 0 && values.size() != width) {
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(width)
                             + " fields, found " + std::to_string(values.size()));
        }
        rows.push_back(std::move(values));
    }
    const Eigen::Index cols = !rows.empty() ? static_cast<Eigen::Index>(rows.front().size())
                                            : static_cast<Eigen::Index>(table.header.size());
    table.values.resize(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return table;
}

Matrix read_matrix(const fs::path& path) { return read_table(path).values; }

void write_matrix(const fs::path& path, const Matrix& m, const std::vector<std::string>& header)
{
    std::ostringstream os;
    if (!header.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << '\n';
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << format_number(m(i, j));
        os << '\n';
    }
    write_text(path, os.str());
}

std::vector<std::string> indexed_header(const std::string& prefix, Eigen::Index n)
{
    std::vector<std::string> h;
    h.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) h.push_back(prefix + std::to_string(i));
    return h;
}

OutputTree tree_from_json(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("tree document is not valid JSON: ") + e.what());
    }
    try {
        const int num_outputs = doc.at("num_outputs").get<int>();
        std::vector<TreeNode> nodes;
        bool has_groups = true;
        int max_id = -1;
        for (const auto& jn : doc.at("nodes")) {
            TreeNode node;
            node.id = jn.at("id").get<int>();
            node.children = jn.value("children", std::vector<int>{});
            if (jn.contains("group")) {
                node.group = jn.at("group").get<std::vector<int>>();
            } else {
                has_groups = false;
            }
            if (jn.contains("w")) node.fixed_w = jn.at("w").get<double>();
            if (jn.contains("s") && !jn.at("s").is_null()) node.s = jn.at("s").get<double>();
            if (jn.contains("g") && !jn.at("g").is_null()) node.g = jn.at("g").get<double>();
            if (node.is_leaf() && std::isnan(node.s)) {
                node.s = 1.0;
                node.g = 0.0;
            }
            if (!std::isnan(node.s) && std::isnan(node.g)) node.g = 1.0 - node.s;
            if (!std::isnan(node.s) && !std::isnan(node.g) && std::abs(node.s + node.g - 1.0) <= 1e-12) {
                node.g = 1.0 - node.s;
            }
            max_id = std::max(max_id, node.id);
            nodes.push_back(std::move(node));
        }
        const int root = doc.contains("root") ? doc.at("root").get<int>() : max_id;
        OutputTree tree(std::move(nodes), root, num_outputs);
        if (!has_groups && tree.topology_ok()) tree = tree.with_derived_groups();
        return tree;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed tree document: ") + e.what());
    }
}

std::string tree_to_json(const OutputTree& tree)
{
    json doc;
    doc["num_outputs"] = tree.num_outputs();
    doc["root"] = tree.root();
    json nodes = json::array();
    for (const auto& node : tree.nodes()) {
        json jn;
        jn["id"] = node.id;
        jn["children"] = node.children;
        jn["group"] = node.group;
        if (!node.is_leaf()) {
            if (!std::isnan(node.s)) jn["s"] = node.s;
            if (!std::isnan(node.g)) jn["g"] = node.g;
        }
        if (node.fixed_w) jn["w"] = *node.fixed_w;
        nodes.push_back(std::move(jn));
    }
    doc["nodes"] = std::move(nodes);
    return doc.dump(1) + "\n";
}

OutputTree read_tree(const fs::path& path) { return tree_from_json(read_text(path)); }

void write_tree(const fs::path& path, const OutputTree& tree) { write_text(path, tree_to_json(tree)); }

void write_dendrogram(const fs::path& path, const Dendrogram& dend)
{
    const Dendrogram normalized = dend.normalized_heights.empty() ? normalize_heights(dend) : dend;
    std::ostringstream os;
    os << "# num_leaves: " << dend.num_leaves << '\n';
    os << "left,right,height,size,normalized_height\n";
    for (std::size_t i = 0; i < normalized.merges.size(); ++i) {
        const auto& m = normalized.merges[i];
        os << m.left << ',' << m.right << ',' << format_number(m.height) << ',' << m.size << ','
           << format_number(normalized.normalized_heights[i]) << '\n';
    }
    write_text(path, os.str());
}

Dendrogram read_dendrogram(const fs::path& path)
{
    const auto meta = read_metadata(path);
    const Table t = read_table(path);
    Dendrogram d;
    const auto it = meta.find("num_leaves");
    d.num_leaves = it != meta.end() ? std::stoi(it->second) : static_cast<int>(t.values.rows()) + 1;
    if (t.values.rows() > 0 && t.values.cols() < 3) {
        throw InputError(path.string() + ": merge table needs left,right,height columns");
    }
    for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
        Merge m;
        m.left = static_cast<int>(t.values(i, 0));
        m.right = static_cast<int>(t.values(i, 1));
        m.height = t.values(i, 2);
        m.size = t.values.cols() > 3 ? static_cast<int>(t.values(i, 3)) : 0;
        d.merges.push_back(m);
        if (t.values.cols() > 4) d.normalized_heights.push_back(t.values(i, 4));
    }
    return d;
}

void write_fit_result(const fs::path& path, const FitResult& fit)
{
    std::ostringstream os;
    os << "# lambda: " << format_number(fit.lambda) << '\n';
    os << "# iterations: " << fit.iterations << '\n';
    os << "# converged: " << (fit.converged ? "true" : "false") << '\n';
    os << "# final_objective: " << format_number(fit.final_objective()) << '\n';
    os << "# num_inputs: " << fit.b.rows() << '\n';
    os << "# num_outputs: " << fit.b.cols() << '\n';
    const auto header = indexed_header("y", fit.b.cols());
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (Eigen::Index i = 0; i < fit.b.rows(); ++i) {
        for (Eigen::Index j = 0; j < fit.b.cols(); ++j) os << (j ? "," : "") << format_number(fit.b(i, j));
        os << '\n';
    }
    write_text(path, os.str());
}

std::map<std::string, std::string> read_metadata(const fs::path& path)
{
    std::ifstream in = open_in(path);
    std::map<std::string, std::string> meta;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() != '#') break;
        const auto colon = t.find(':');
        if (colon == std::string::npos) continue;
        meta[trim(t.substr(1, colon - 1))] = trim(t.substr(colon + 1));
    }
    return meta;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const fs::path& path)
{
    std::ifstream in = open_in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace tglasso::io
