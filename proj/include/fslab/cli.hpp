#ifndef FSLAB_CLI_HPP
#define FSLAB_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

#include <fslab/types.hpp>

namespace fslab
{

/// Parses "1", "-0.5", "2+3i", "1-i", "4i" or "[re,im]".
cplx parse_complex(const std::string &text);
/// Comma-separated list of parse_complex items.
std::vector<cplx> parse_complex_list(const std::string &text);
std::vector<double> parse_real_list(const std::string &text);

/// Runs one command line (without the program name). Reports go to `out` unless --out is
/// given; diagnostics go to `err`. Returns 0 on success, 2 when a checked inequality or
/// membership fails, 1 on configuration errors.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace fslab

#endif
