#pragma once
#include <string>

namespace crg::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 verdict pass (or no verdict), 2 verdict fail, 1 usage or argument error.
enum Exit { kPass = 0, kUsage = 1, kFail = 2 };

int run(int argc, char** argv);

}  // namespace crg::cli
