#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dopfac {

// Session-wide, append-only table of variable names. The index of a
// variable fixes its position in exponent vectors and in the term order
// (earlier registration = more significant in lex tie-breaks).
std::size_t var(std::string_view name);
std::optional<std::size_t> find_var(std::string_view name);
std::string var_name(std::size_t index);
std::size_t var_count();
std::vector<std::string> var_names();

}  // namespace dopfac
