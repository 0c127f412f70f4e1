#pragma once

#include "rdpg/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rdpg {

struct EdgeListOptions {
  // Drop u == v lines and produce a hollow graph.
  bool drop_self_loops = false;
};

/// Parses "u v" lines into an undirected graph.
///
/// Ids are integers; the base (0 or 1) is taken from the smallest id seen.
/// Blank lines and lines starting with '#' or '%' are skipped, duplicates and
/// reversed duplicates collapse to one edge. The result includes self-loops
/// iff some line has u == v (and drop_self_loops is off).
AdjacencyMatrix read_edge_list(std::istream& in, const EdgeListOptions& options = {});
AdjacencyMatrix read_edge_list(const std::filesystem::path& path, const EdgeListOptions& options = {});

/// Writes each edge once as "u v" with 0-based ids, u <= v.
void write_edge_list(std::ostream& out, const AdjacencyMatrix& Y);

/// One integer label per line.
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

/// Comma-separated rows of numbers; an optional header line is skipped when
/// its first field is not numeric.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& M,
                      const std::vector<std::string>& header = {});

}  // namespace rdpg
