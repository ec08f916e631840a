#pragma once

namespace pw {

// exit codes: 0 success, 1 usage, 2 config, 3 numerical failure
int cli_main(int argc, const char *const *argv);

} // namespace pw
