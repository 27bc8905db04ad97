#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lexpalo::cli {

/// Runs one `lexpalo` invocation. `args` excludes the program name. Returns the
/// process exit status: 0 on success, 2 on a usage error, the library's
/// ErrorCode value on a pipeline error and 1 on anything unexpected.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lexpalo::cli
