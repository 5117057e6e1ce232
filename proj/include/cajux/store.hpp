#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cajux/array.hpp"
#include "cajux/generator.hpp"

namespace cajux {

// CA file:       "CA N t k v", then N lines of k space-separated symbols.
// Library file:  "CALIB count N t k v", then `count` bodies in lex order,
//                separated by one blank line.
// Both are newline-terminated with no trailing whitespace. Readers are strict
// and report the offending line and column through ParseError.

void write_ca(const CoveringArray& a, std::ostream& out);
void write_ca(const CoveringArray& a, const std::filesystem::path& path);
std::string format_ca(const CoveringArray& a);

CoveringArray read_ca(std::istream& in, const std::string& source = "<stream>");
CoveringArray read_ca(const std::filesystem::path& path);

struct LibraryValidation {
  bool strength = true;  ///< every member passes verify_strength at t
  bool minimal = false;  ///< every member is its own class minimum (slow)
};

void write_library(const CaLibrary& lib, std::ostream& out);
void write_library(const CaLibrary& lib, const std::filesystem::path& path);

/// Throws ParseError on malformed text, on a member failing validation and on
/// duplicate members.
CaLibrary read_library(std::istream& in, const std::string& source = "<stream>", LibraryValidation check = {});
CaLibrary read_library(const std::filesystem::path& path, LibraryValidation check = {});

/// Parameters from the first line of a library file, without reading members.
Params read_library_header(const std::filesystem::path& path);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

enum class Verdict { exists, nonexistent, not_found_partial, budget_exhausted };

std::string_view to_string(Verdict v);

/// exists if anything was found; otherwise nonexistent only for a finished
/// run over complete libraries.
Verdict verdict_for(std::size_t results, bool libraries_complete, bool exhausted);

struct FileRecord {
  std::string label;  ///< key prefix, e.g. "library.11" or "result.0"
  std::string file;   ///< name relative to the manifest
  std::string sha256;
  std::vector<std::pair<std::string, std::string>> extra;  ///< written after file and hash
};

struct RunManifest {
  std::string command;
  Params params;
  std::vector<std::pair<std::string, std::string>> inputs;  ///< other settings, in insertion order
  std::vector<FileRecord> libraries;
  std::vector<std::vector<int>> multisets;
  std::vector<FileRecord> results;
  std::vector<std::pair<std::string, std::string>> stats;
  Verdict verdict = Verdict::exists;
};

/// `key = value` lines in a fixed order: tool, version, command, parameters,
/// inputs, hash algorithm, libraries, multisets, results, stats, verdict.
void write_manifest(const RunManifest& m, std::ostream& out);
void write_manifest(const RunManifest& m, const std::filesystem::path& path);

/// Key/value pairs in file order. Throws ParseError on a line without " = ".
std::vector<std::pair<std::string, std::string>> read_manifest(const std::filesystem::path& path);

}  // namespace cajux
