#ifndef SCORING_DELIMITED_HPP
#define SCORING_DELIMITED_HPP

#include <string>
#include <vector>

namespace scoring {

// Splits one line of delimited text; supports double-quoted fields with
// doubled-quote escapes and strips trailing carriage returns.
std::vector<std::string> split_delimited(const std::string &line,
                                         char delimiter);

} // namespace scoring

#endif
