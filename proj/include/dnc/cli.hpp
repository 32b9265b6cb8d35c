#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dnc {

/*!
 * Command-line front end: gen / analyze / compare / count / bench.
 * Exit codes: 0 ok, 2 bad arguments, 3 generation failure,
 * 4 parse or validation failure of an input file.
 */
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dnc
