#pragma once

#include <iosfwd>

namespace kmsgraph {

/// Full command line driver.  Returns the process exit code: 0 success,
/// 1 internal failure, 2 usage or input parse error, 3 inadmissible
/// request (temperature at or below critical, measure not subinvariant,
/// graph shape outside a construction's preconditions, basis cap), 4 a
/// verification that ran to completion and rejected.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kmsgraph
