#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "latticegen/multilingual.hpp"
#include "latticegen/suite.hpp"
#include "latticegen/trace.hpp"

namespace latticegen {

/// Runs one command line. 0 on success, 1 on resource errors, 2 on usage
/// errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

std::string format_text(const SuiteReport& report);
std::string format_text(const SharingReport& report);
std::string format_text(const TraceDiff& diff);
std::string format_text(const FocusReport& report);
std::string format_text(const ValidationReport& report);

}  // namespace latticegen
