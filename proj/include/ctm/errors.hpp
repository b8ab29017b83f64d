#ifndef CTM_ERRORS_HPP
#define CTM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ctm {

/// Anything wrong with user-supplied files or configuration. The CLI maps
/// this to exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Emit a warning line on stderr. Used for recoverable data issues
/// (monotonicity glitches in ingested tables, silent renormalization).
void warn(const std::string& message);

} // namespace ctm

#endif
