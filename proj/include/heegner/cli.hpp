#ifndef HEEGNER_CLI_HPP
#define HEEGNER_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace heegner {

// Runs the command line: analyze, embed, oracle-verify, batch.
// Exit codes: analyze 0 = points exist, 2 = none, 3 = blocked on undetermined
// signs, 1 = input error. embed 0/1 per existence. oracle-verify nonzero on
// any mismatch. batch 0 iff no malformed rows.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heegner

#endif
