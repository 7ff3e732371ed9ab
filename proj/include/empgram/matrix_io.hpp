#pragma once

#include <map>
#include <string>
#include <string_view>

#include "empgram/matrix.hpp"

namespace empgram {

/// Reads named matrix blocks: a header line holding the block name, then one
/// row of whitespace-separated numbers per line; a blank line (or end of
/// input) closes the block. Lines starting with '#' are ignored.
std::map<std::string, Matrix> parse_matrix_blocks(std::string_view text);

/// Writes one block in the same format, numbers in shortest round-trip form.
std::string format_matrix_block(std::string_view name, const Matrix& m);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

}  // namespace empgram
