#include "rdpg/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

namespace rdpg {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#' || line[pos] == '%';
}

bool parse_double(std::string_view field, double& value) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\r' || field.back() == '\t'))
    field.remove_suffix(1);
  if (field.empty()) return false;
  // from_chars for double is available in libstdc++ 11.
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc{} && ptr == field.data() + field.size();
}

}  // namespace

AdjacencyMatrix read_edge_list(std::istream& in, const EdgeListOptions& options) {
  std::set<std::pair<long long, long long>> edges;
  long long min_id = std::numeric_limits<long long>::max();
  long long max_id = std::numeric_limits<long long>::min();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::istringstream fields(line);
    long long u = 0, v = 0;
    if (!(fields >> u >> v)) throw std::runtime_error("edge list line " + std::to_string(line_no) + ": expected \"u v\"");
    if (u < 0 || v < 0) throw std::runtime_error("edge list line " + std::to_string(line_no) + ": negative vertex id");
    min_id = std::min({min_id, u, v});
    max_id = std::max({max_id, u, v});
    if (u == v && options.drop_self_loops) continue;
    edges.emplace(std::min(u, v), std::max(u, v));
  }
  if (max_id < 0) throw std::runtime_error("edge list is empty");

  const long long base = min_id == 0 ? 0 : 1;
  const auto n = static_cast<Eigen::Index>(max_id - base + 1);
  Matrix Y = Matrix::Zero(n, n);
  bool loops = false;
  for (const auto& [u, v] : edges) {
    Y(u - base, v - base) = 1.0;
    Y(v - base, u - base) = 1.0;
    loops |= u == v;
  }
  return {std::move(Y), loops};
}

AdjacencyMatrix read_edge_list(const std::filesystem::path& path, const EdgeListOptions& options) {
  auto in = open_input(path);
  return read_edge_list(in, options);
}

void write_edge_list(std::ostream& out, const AdjacencyMatrix& Y) {
  const auto n = Y.n();
  for (Eigen::Index u = 0; u < n; ++u)
    for (Eigen::Index v = u; v < n; ++v)
      if (Y.edge(u, v)) out << u << ' ' << v << '\n';
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (skip_line(line)) continue;
    labels.push_back(std::stoi(line));
  }
  return labels;
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  auto out = open_output(path);
  for (int label : labels) out << label << '\n';
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (skip_line(line)) continue;
    std::vector<double> row;
    std::string_view rest(line);
    bool numeric = true;
    while (true) {
      const auto comma = rest.find(',');
      double value = 0.0;
      if (!parse_double(rest.substr(0, comma), value)) {
        numeric = false;
        break;
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw std::runtime_error("non-numeric field in " + path.string());
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged rows in " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("no data rows in " + path.string());
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = rows[i][j];
  return M;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& M,
                      const std::vector<std::string>& header) {
  auto out = open_output(path);
  out << std::setprecision(17);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  if (!header.empty()) out << '\n';
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) out << (j ? "," : "") << M(i, j);
    out << '\n';
  }
}

}  // namespace rdpg
