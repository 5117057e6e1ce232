#include "cajux/errors.hpp"

#include <sstream>
#include <utility>

namespace cajux {

namespace {

std::string parse_message(const std::string& source, int line, int column, const std::string& message) {
  std::ostringstream os;
  os << source << ':' << line;
  if (column > 0) os << ':' << column;
  os << ": " << message;
  return os.str();
}

std::string missing_message(const std::vector<int>& sizes, int t, int k, int v) {
  std::ostringstream os;
  os << "missing library for";
  for (int n : sizes) os << " CA(" << n << ';' << t << ',' << k << ',' << v << ')';
  return os.str();
}

}  // namespace

ParseError::ParseError(std::string source, int line, int column, const std::string& message)
    : std::runtime_error(parse_message(source, line, column, message)),
      source_(std::move(source)),
      line_(line),
      column_(column) {}

MissingLibrary::MissingLibrary(std::vector<int> sizes, int t, int k, int v)
    : std::runtime_error(missing_message(sizes, t, k, v)), sizes_(std::move(sizes)), t_(t), k_(k), v_(v) {}

}  // namespace cajux
