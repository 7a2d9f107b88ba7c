#pragma once

#include <ostream>
#include <span>
#include <string>

namespace dcpoly {

/// args excludes the program name. Exit codes: 0 certified, 2 stopped by an
/// iteration or time cap, 1 usage/domain error or a failed bench cell.
int parse_and_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace dcpoly
