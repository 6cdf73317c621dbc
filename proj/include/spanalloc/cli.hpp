#pragma once

#include <ostream>

namespace spanalloc::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kIncumbentOnly = 3,  // node budget hit; best allocation found so far was written
};

/// Entry point shared by the spanalloc executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spanalloc::cli
