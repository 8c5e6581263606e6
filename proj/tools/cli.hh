// SPDX-License-Identifier: MIT
// Command-line front end; main() forwards to run_cli.
#pragma once

#include <ostream>

namespace hornlog
{
  /// Exit statuses: 0 decision true or success, 1 decision false, 2 usage
  /// or input error, 3 cap exceeded or verdict unknown.
  int run_cli(int argc, const char* const* argv, std::ostream& out,
              std::ostream& err);
}
