#pragma once

#include <string>
#include <vector>

namespace subforge {

/// CLI entry point. Exit codes: 0 = certified success or verdict produced,
/// 2 = best-effort miss, 3 = precondition or parse error.
int run_cli(const std::vector<std::string> &args);

} // namespace subforge
