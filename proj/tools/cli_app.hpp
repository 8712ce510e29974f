#pragma once

namespace fockscope::cli {

/// Parse the command line (calibrate | sensitivity | image | reproduce-all)
/// and run the selected command. Returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace fockscope::cli
