#pragma once

#include <string>
#include <vector>

#include "soscert/certificate.hpp"

namespace soscert {

// Problem file:
//   variables: x, y
//   f: <poly>
//   g: <poly>          (zero or more)
//   h: <poly>          (one or more)
//   radical: true|false
//   [options]
//   mode = strict|nonneg
//   engine = constructive|sdp
//   order = l0, l1, ...   (a single value applies to every block)
//   precision-start = N
//   max-bits = N
//   seed = N
//   tol = x
// Lines starting with '#' are comments. Errors are ParseError with the line.
ProblemInstance parse_problem(const std::string& text);
std::string write_problem(const ProblemInstance& inst);

// Certificate file:
//   mode: strict|nonneg
//   variables: x, y
//   block <i>
//   weight <rational> square <poly>
//   cofactor <j> <poly>              (j is 1-based)
//   witness <i> <k> <poly>           (k is 1-based)
//   nu0 <k> <integer>
//   nu1 <integer>
//   nu2 <integer>
Certificate parse_certificate(const std::string& text);
std::string write_certificate(const Certificate& cert);

// Throws ParseError on I/O failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

Mode parse_mode(const std::string& s);
Engine parse_engine(const std::string& s);
std::vector<unsigned> parse_order(const std::string& s);

}  // namespace soscert
