#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dopfac {

// args excludes the program name. Exit codes: 0 ok, 1 domain error,
// 2 usage or syntax error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            std::istream& in);
int run_cli(int argc, char** argv);

}  // namespace dopfac
