#include "empgram/matrix_io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "empgram/error.hpp"

namespace empgram {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_row(std::string_view line, Vector& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos == line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    std::string_view tok = line.substr(pos, end - pos);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) return false;
    out.push_back(v);
    pos = end;
  }
  return true;
}

}  // namespace

std::map<std::string, Matrix> parse_matrix_blocks(std::string_view text) {
  std::map<std::string, Matrix> blocks;
  std::string current;
  std::vector<Vector> rows;
  std::size_t block_line = 0;

  auto close_block = [&](std::size_t line_no) {
    if (current.empty()) return;
    if (rows.empty()) throw ParseError(block_line, "block '" + current + "' has no rows");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    if (blocks.contains(current)) throw ParseError(line_no, "duplicate block '" + current + "'");
    blocks.emplace(current, std::move(m));
    current.clear();
    rows.clear();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (!line.empty() && line.front() == '#') continue;
    if (line.empty()) {
      close_block(line_no);
      continue;
    }
    if (current.empty()) {
      const char c = line.front();
      if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_'))
        throw ParseError(line_no, "expected a block name, found '" + std::string(line) + "'");
      current = std::string(line);
      block_line = line_no;
      continue;
    }
    Vector row;
    if (!parse_row(line, row) || row.empty())
      throw ParseError(line_no, "block '" + current + "' row " + std::to_string(rows.size() + 1) + ": malformed number");
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(line_no, "block '" + current + "' row " + std::to_string(rows.size() + 1) + " has " +
                                    std::to_string(row.size()) + " entries, expected " +
                                    std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  close_block(line_no);
  return blocks;
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ec == std::errc() ? ptr : buf.data());
}

std::string format_matrix_block(std::string_view name, const Matrix& m) {
  std::string out(name);
  out += '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_number(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace empgram
