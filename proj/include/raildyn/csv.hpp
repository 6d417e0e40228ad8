#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace raildyn::csv {

/// Fixed-precision scientific with 9 significant digits.
std::string cell(double v);

/// RFC-4180 quoting: wraps and doubles quotes only when the text needs it.
std::string quote(const std::string& s);

/// One CSV record terminated by '\n'.
void write_row(std::ostream& out, const std::vector<std::string>& cells);

} // namespace raildyn::csv
