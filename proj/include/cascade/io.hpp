#pragma once

#include <string>
#include <vector>

#include "cascade/solvers.hpp"

namespace cascade {

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// Parses a full double; throws ConfigError on trailing garbage.
double parse_double(const std::string& s);

// Solution CSV: header "lambda,v1,...,vn,P,abs_err_est", one row per
// (lambda, point), canonical number formatting.
std::string solution_csv(const SolutionField& field, int n);

// Generic CSV: header + numeric rows, canonical formatting.
std::string make_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvData parse_csv(const std::string& text);

// Writes via a temporary file in the same directory, then renames.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace cascade
