#pragma once

#include "rsobolev/graph.hpp"
#include "rsobolev/sobolev.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace rsobolev {

// Whitespace-separated rows; '#' starts a comment. Rows must have equal length.
Eigen::MatrixXd parse_matrix(std::istream& in);
Eigen::MatrixXd read_matrix_file(const std::string& path);

// First line "|V| |E|", then |E| lines "u v" (0-indexed).
Graph parse_edge_list(std::istream& in);
Graph read_edge_list(const std::string& path);

// Header "alpha,value,kind,q,p,n" followed by one row per grid point.
void write_curves_csv(std::ostream& out, const std::vector<SampledCurve>& curves);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace rsobolev
