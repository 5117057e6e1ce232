#include "cajux/store.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cajux/canonical.hpp"
#include "cajux/coverage.hpp"
#include "cajux/errors.hpp"

#ifndef CAJUX_VERSION
#define CAJUX_VERSION "unknown"
#endif

namespace cajux {

namespace {

void write_body(const CoveringArray& a, std::ostream& out) {
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) {
      if (c) out << ' ';
      out << static_cast<int>(a(r, c));
    }
    out << '\n';
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Next line without its newline; false at end of input.
  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (in_.eof()) missing_newline_ = true;
    return true;
  }

  std::string require(const std::string& what) {
    std::string line;
    if (!next(line)) fail(0, "unexpected end of input, expected " + what);
    if (missing_newline_) fail(0, "missing final newline");
    return line;
  }

  void expect_end() {
    std::string line;
    if (next(line)) fail(0, "unexpected content after the last row");
  }

  [[noreturn]] void fail(int column, const std::string& message) const {
    throw ParseError(source_, line_, column, message);
  }

  int line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  int line_ = 0;
  bool missing_newline_ = false;
};

struct Token {
  std::string_view text;
  int column;  // 1-based
};

std::vector<Token> split_tokens(const LineReader& reader, const std::string& line) {
  std::vector<Token> tokens;
  if (line.empty()) return tokens;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = line.find(' ', pos);
    const std::size_t stop = end == std::string::npos ? line.size() : end;
    if (stop == pos) reader.fail(static_cast<int>(pos) + 1, "expected a single space between fields");
    tokens.push_back({std::string_view(line).substr(pos, stop - pos), static_cast<int>(pos) + 1});
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return tokens;
}

int parse_int(const LineReader& reader, const Token& tok, const char* what) {
  int value = 0;
  const auto* first = tok.text.data();
  const auto* last = first + tok.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || tok.text.empty() || (tok.text.size() > 1 && tok.text[0] == '0'))
    reader.fail(tok.column, std::string("expected ") + what + ", got '" + std::string(tok.text) + "'");
  return value;
}

Params parse_params(const LineReader& reader, const std::vector<Token>& tokens, std::size_t first) {
  Params p{parse_int(reader, tokens[first], "N"), parse_int(reader, tokens[first + 1], "t"),
           parse_int(reader, tokens[first + 2], "k"), parse_int(reader, tokens[first + 3], "v")};
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    reader.fail(0, e.what());
  }
  return p;
}

CoveringArray parse_body(LineReader& reader, const Params& p) {
  std::vector<Symbol> cells;
  cells.reserve(static_cast<std::size_t>(p.N) * p.k);
  for (int r = 0; r < p.N; ++r) {
    const std::string line = reader.require("row " + std::to_string(r + 1));
    const auto tokens = split_tokens(reader, line);
    if (static_cast<int>(tokens.size()) != p.k)
      reader.fail(0, "row " + std::to_string(r + 1) + " has " + std::to_string(tokens.size()) + " symbols, expected " +
                         std::to_string(p.k));
    for (int c = 0; c < p.k; ++c) {
      const int s = parse_int(reader, tokens[c], "a symbol");
      if (s >= p.v)
        reader.fail(tokens[c].column, "cell (" + std::to_string(r + 1) + ", " + std::to_string(c + 1) + "): symbol " +
                                          std::to_string(s) + " out of range for v=" + std::to_string(p.v));
      cells.push_back(static_cast<Symbol>(s));
    }
  }
  return CoveringArray(p, std::move(cells));
}

}  // namespace

void write_ca(const CoveringArray& a, std::ostream& out) {
  const Params& p = a.params();
  out << "CA " << p.N << ' ' << p.t << ' ' << p.k << ' ' << p.v << '\n';
  write_body(a, out);
}

void write_ca(const CoveringArray& a, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_ca(a, out);
  finish(out, path);
}

std::string format_ca(const CoveringArray& a) {
  std::ostringstream out;
  write_ca(a, out);
  return out.str();
}

CoveringArray read_ca(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  const std::string header = reader.require("header");
  const auto tokens = split_tokens(reader, header);
  if (tokens.size() != 5 || tokens[0].text != "CA") reader.fail(1, "expected header 'CA N t k v'");
  const Params p = parse_params(reader, tokens, 1);
  auto a = parse_body(reader, p);
  reader.expect_end();
  return a;
}

CoveringArray read_ca(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_ca(in, path.string());
}

void write_library(const CaLibrary& lib, std::ostream& out) {
  const Params& p = lib.params();
  out << "CALIB " << lib.size() << ' ' << p.N << ' ' << p.t << ' ' << p.k << ' ' << p.v << '\n';
  bool first = true;
  for (const auto& m : lib.members()) {
    if (!first) out << '\n';
    first = false;
    write_body(m.array(), out);
  }
}

void write_library(const CaLibrary& lib, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_library(lib, out);
  finish(out, path);
}

CaLibrary read_library(std::istream& in, const std::string& source, LibraryValidation check) {
  LineReader reader(in, source);
  const std::string header = reader.require("header");
  const auto tokens = split_tokens(reader, header);
  if (tokens.size() != 6 || tokens[0].text != "CALIB") reader.fail(1, "expected header 'CALIB count N t k v'");
  const int count = parse_int(reader, tokens[1], "a member count");
  const Params p = parse_params(reader, tokens, 2);

  std::vector<CanonicalForm> members;
  std::set<LexVector> seen;
  for (int m = 0; m < count; ++m) {
    if (m > 0 && !reader.require("blank separator").empty()) reader.fail(1, "expected a blank line between members");
    const int start = reader.line() + 1;
    auto a = parse_body(reader, p);
    const std::string where = "member " + std::to_string(m + 1) + " (line " + std::to_string(start) + ")";
    if (check.strength && !verify_strength(a, p.t))
      throw ParseError(source, start, 0, where + " is not a covering array of strength " + std::to_string(p.t));
    if (check.minimal && !is_canonical(a)) throw ParseError(source, start, 0, where + " is not a class minimum");
    auto form = CanonicalForm::trusted(std::move(a));
    if (!seen.insert(form.lex()).second) throw ParseError(source, start, 0, where + " duplicates an earlier member");
    members.push_back(std::move(form));
  }
  reader.expect_end();
  return CaLibrary(p, std::move(members));
}

CaLibrary read_library(const std::filesystem::path& path, LibraryValidation check) {
  auto in = open_in(path);
  return read_library(in, path.string(), check);
}

Params read_library_header(const std::filesystem::path& path) {
  auto in = open_in(path);
  LineReader reader(in, path.string());
  std::string header;
  if (!reader.next(header)) reader.fail(0, "empty file");
  const auto tokens = split_tokens(reader, header);
  if (tokens.size() != 6 || tokens[0].text != "CALIB") reader.fail(1, "expected header 'CALIB count N t k v'");
  parse_int(reader, tokens[1], "a member count");
  return parse_params(reader, tokens, 2);
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
  return hex.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::exists: return "exists";
    case Verdict::nonexistent: return "nonexistent";
    case Verdict::not_found_partial: return "not-found-partial";
    case Verdict::budget_exhausted: return "budget-exhausted";
  }
  return "unknown";
}

Verdict verdict_for(std::size_t results, bool libraries_complete, bool exhausted) {
  if (results > 0) return Verdict::exists;
  if (exhausted) return Verdict::budget_exhausted;
  return libraries_complete ? Verdict::nonexistent : Verdict::not_found_partial;
}

void write_manifest(const RunManifest& m, std::ostream& out) {
  auto kv = [&](const std::string& key, const auto& value) { out << key << " = " << value << '\n'; };
  kv("tool", "cajux");
  kv("version", CAJUX_VERSION);
  kv("command", m.command);
  kv("N", m.params.N);
  kv("t", m.params.t);
  kv("k", m.params.k);
  kv("v", m.params.v);
  for (const auto& [key, value] : m.inputs) kv(key, value);
  kv("hash_algorithm", "sha256");
  auto records = [&](const std::vector<FileRecord>& list) {
    for (const auto& r : list) {
      kv(r.label + ".file", r.file);
      kv(r.label + ".sha256", r.sha256);
      for (const auto& [key, value] : r.extra) kv(r.label + "." + key, value);
    }
  };
  kv("library_count", m.libraries.size());
  records(m.libraries);
  kv("multiset_count", m.multisets.size());
  for (std::size_t i = 0; i < m.multisets.size(); ++i) {
    std::string sizes;
    for (int s : m.multisets[i]) sizes += (sizes.empty() ? "" : " ") + std::to_string(s);
    kv("multiset." + std::to_string(i), sizes);
  }
  kv("result_count", m.results.size());
  records(m.results);
  for (const auto& [key, value] : m.stats) kv("stats." + key, value);
  kv("verdict", to_string(m.verdict));
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_manifest(m, out);
  finish(out, path);
}

std::vector<std::pair<std::string, std::string>> read_manifest(const std::filesystem::path& path) {
  auto in = open_in(path);
  LineReader reader(in, path.string());
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  while (reader.next(line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) reader.fail(0, "expected 'key = value'");
    entries.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return entries;
}

}  // namespace cajux
