#include "rsobolev/io.hpp"

#include "rsobolev/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rsobolev {

namespace {

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

std::string strip_comment(std::string line) {
  if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
  return line;
}

}  // namespace

Eigen::MatrixXd parse_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(strip_comment(line));
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ValidationError("bad matrix entry '" + tok + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("matrix file is empty");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ValidationError("matrix rows have different lengths");
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
  auto in = open(path);
  return parse_matrix(in);
}

Graph parse_edge_list(std::istream& in) {
  std::stringstream body;
  for (std::string line; std::getline(in, line);) body << strip_comment(line) << '\n';
  long long v = -1, e = -1;
  if (!(body >> v >> e) || v < 1 || e < 0) throw ValidationError("edge list must start with '|V| |E|'");
  std::vector<std::pair<int, int>> edges;
  for (long long i = 0; i < e; ++i) {
    long long a, b;
    if (!(body >> a >> b)) throw ValidationError("edge list ended early or has a bad entry");
    edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  std::string extra;
  if (body >> extra) throw ValidationError("unexpected trailing entry '" + extra + "' in edge list");
  return Graph::from_edges(static_cast<int>(v), edges);
}

Graph read_edge_list(const std::string& path) {
  auto in = open(path);
  return parse_edge_list(in);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_curves_csv(std::ostream& out, const std::vector<SampledCurve>& curves) {
  out << "alpha,value,kind,q,p,n\n";
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.grid.size(); ++i)
      out << format_double(c.grid[i]) << ',' << format_double(c.values[i]) << ',' << to_string(c.kind) << ','
          << format_double(c.q) << ',' << format_double(c.p) << ',' << c.n << '\n';
}

}  // namespace rsobolev
