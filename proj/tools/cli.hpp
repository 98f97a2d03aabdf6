#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mksys::cli {

// Exit codes: 0 ok, 1 validation or law failure, 2 usage or parse error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mksys::cli
