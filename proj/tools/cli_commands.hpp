#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sptrsv::cli {

/// Exit codes: 0 success, 1 a verification failed, 2 usage or input error.
/// Errors are reported on `err` as one JSON line
/// {"status":"error","kind":...,"message":...}.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace sptrsv::cli
