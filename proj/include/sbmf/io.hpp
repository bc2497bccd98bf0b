#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sbmf/assignment.hpp"
#include "sbmf/errors.hpp"
#include "sbmf/graph.hpp"
#include "sbmf/variational.hpp"

namespace sbmf {

/// Edge-list format: first line `n k`, then one `i j` per line with
/// 0-based node ids and i < j.
inline void write_edgelist(std::ostream& out, const AdjacencyMatrix& A, int k) {
    out << A.size() << ' ' << k << '\n';
    A.for_each_edge([&](int i, int j) { out << i << ' ' << j << '\n'; });
}

inline void write_edgelist(const std::string& path, const AdjacencyMatrix& A, int k) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_edgelist: cannot open " + path);
    write_edgelist(out, A, k);
}

struct EdgelistGraph {
    AdjacencyMatrix A;
    int k;
};

inline EdgelistGraph read_edgelist(std::istream& in) {
    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) throw ParseError("read_edgelist: empty file", 1);
    ++lineno;
    int n = 0, k = 0;
    {
        std::istringstream header(line);
        std::string extra;
        if (!(header >> n >> k) || (header >> extra))
            throw ParseError("read_edgelist: malformed header, expected `n k`", lineno);
        if (n < 0 || k < 1) throw ParseError("read_edgelist: invalid header values", lineno);
    }
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        int i = 0, j = 0;
        std::string extra;
        if (!(row >> i >> j) || (row >> extra))
            throw ParseError("read_edgelist: malformed edge line", lineno);
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw ParseError("read_edgelist: endpoint out of range", lineno);
        if (i == j) throw ParseError("read_edgelist: self-loop", lineno);
        if (i > j)
            throw ParseError("read_edgelist: edges must satisfy i < j (upper triangle only)",
                             lineno);
        edges.emplace_back(i, j);
    }
    {
        auto sorted = edges;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ParseError("read_edgelist: duplicate edge", lineno);
    }
    return {AdjacencyMatrix(n, edges), k};
}

inline EdgelistGraph read_edgelist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_edgelist: cannot open " + path);
    return read_edgelist(in);
}

/// Assignment file: one 0-based label per line.
inline void write_labels(std::ostream& out, const HardAssignment& z) {
    for (const int label : z.labels()) out << label << '\n';
}

inline void write_labels(const std::string& path, const HardAssignment& z) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_labels: cannot open " + path);
    write_labels(out, z);
}

inline HardAssignment read_labels(std::istream& in, int k) {
    std::vector<int> labels;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        int z = 0;
        std::string extra;
        if (!(row >> z) || (row >> extra)) throw ParseError("read_labels: malformed line", lineno);
        if (z < 0 || z >= k) throw ParseError("read_labels: label out of range", lineno);
        labels.push_back(z);
    }
    return HardAssignment(std::move(labels), k);
}

inline HardAssignment read_labels(const std::string& path, int k) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_labels: cannot open " + path);
    return read_labels(in, k);
}

/// Shortest-roundtrip double formatting, stable across runs of the same
/// binary; used by all trace writers.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// One newline-delimited JSON object per iteration. Wall-clock timing is
/// deliberately excluded so reruns are byte-identical.
inline void write_trace_ndjson(std::ostream& out, int replication, const IterationTrace& trace) {
    for (const IterationRecord& r : trace.records) {
        out << "{\"replication\":" << replication << ",\"iteration\":" << r.iteration
            << ",\"loss\":" << format_double(r.loss) << ",\"misclustered\":" << r.misclustered
            << ",\"elbo\":" << format_double(r.elbo) << ",\"t\":" << format_double(r.t)
            << ",\"lambda\":" << format_double(r.lambda)
            << ",\"p_mean\":" << format_double(r.p_mean)
            << ",\"q_mean\":" << format_double(r.q_mean)
            << ",\"non_assortative\":" << (r.non_assortative ? "true" : "false") << "}\n";
    }
}

}  // namespace sbmf
