#pragma once

namespace qsumm::cli {

/// Entry point of the qsumm command line tool. Returns 0 on success, 1 on
/// data errors, 2 on usage errors; errors print one machine-parsable line
/// "error: <category>: <message>" on stderr.
int run(int argc, const char* const* argv);

} // namespace qsumm::cli
