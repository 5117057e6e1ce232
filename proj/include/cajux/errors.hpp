#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cajux {

/// Malformed text input. Line and column are 1-based; column 0 means the
/// whole line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, int line, int column, const std::string& message);

  const std::string& source() const noexcept { return source_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string source_;
  int line_;
  int column_;
};

/// The juxtaposition search needs a library of CA(size; t, k, v) for each of
/// `sizes` and none was supplied.
class MissingLibrary : public std::runtime_error {
 public:
  MissingLibrary(std::vector<int> sizes, int t, int k, int v);

  const std::vector<int>& sizes() const noexcept { return sizes_; }
  int strength() const noexcept { return t_; }
  int columns() const noexcept { return k_; }
  int order() const noexcept { return v_; }

 private:
  std::vector<int> sizes_;
  int t_;
  int k_;
  int v_;
};

}  // namespace cajux
