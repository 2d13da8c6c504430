#pragma once

#include <functional>
#include <string>

namespace weaklab {

// Non-fatal conditions (tied clusters, empty loss regions) are reported
// through a process-wide sink. The default sink writes to stderr.
using WarningSink = std::function<void(const std::string&)>;

void warn(const std::string& message);

/// Installs a new sink and returns the previous one.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace weaklab
