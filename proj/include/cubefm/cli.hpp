#pragma once

#include <iosfwd>

namespace cubefm {

// Exit codes: 0 success, 1 usage error, 2 data error (unreadable or invalid
// input, estimation failure, failed certificate).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cubefm
