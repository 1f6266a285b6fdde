#pragma once

// CSV output. Plain comma separation (values never contain commas or
// quotes), '\n' line endings, no trailing blank line, and numbers rendered
// with std::to_chars so the output never depends on the C or C++ locale.

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "rhlab/errors.hpp"

namespace rhlab::harness {

struct CsvSeries {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    if (row.size() != headers.size()) {
      throw std::invalid_argument("csv: row has " + std::to_string(row.size()) + " fields, header has " +
                                  std::to_string(headers.size()));
    }
    rows.push_back(std::move(row));
  }

  bool operator==(const CsvSeries&) const = default;
};

// 12 significant digits, shortest of fixed/scientific.
inline std::string format_real(double v, int significant = 12) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, significant);
  if (ec != std::errc{}) throw std::runtime_error("csv: cannot render real");
  return std::string(buf.data(), end);
}

inline std::string format_int(std::int64_t v) { return std::to_string(v); }

inline std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line;
}

inline std::string render_csv(const CsvSeries& series) {
  std::string text = csv_line(series.headers);
  for (const auto& row : series.rows) {
    text += '\n';
    text += csv_line(row);
  }
  text += '\n';
  return text;
}

inline std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline CsvSeries parse_csv(std::string_view text) {
  CsvSeries series;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (first) {
      series.headers = split_fields(line);
      first = false;
    } else {
      series.add_row(split_fields(line));
    }
  }
  return series;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path partial_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".partial";
  return p;
}

inline void ensure_parent(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
}

// Moves `<path>.partial` onto `path`.
inline void promote_partial(const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::rename(partial_path(path), path, ec);
  if (ec) throw IoError("cannot rename " + partial_path(path).string() + ": " + ec.message());
}

// Writes text to `<path>.partial`, then renames it onto `path`.
inline void write_atomically(const std::filesystem::path& path, std::string_view text) {
  ensure_parent(path);
  {
    std::ofstream out(partial_path(path), std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + partial_path(path).string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + partial_path(path).string());
  }
  promote_partial(path);
}

inline void emit_csv(const CsvSeries& series, const std::filesystem::path& path) {
  write_atomically(path, render_csv(series));
}

// Streams rows into `<path>.partial`; finish() renames it into place.
class CsvAppender {
 public:
  // Fresh file with the header line.
  CsvAppender(std::filesystem::path path, const std::vector<std::string>& headers) : path_(std::move(path)) {
    ensure_parent(path_);
    out_.open(partial_path(path_), std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open " + partial_path(path_).string());
    out_ << csv_line(headers) << '\n';
    width_ = headers.size();
  }

  // Reopens an existing partial file, keeping only the rows whose first
  // column is <= keep_through. Used when resuming from a checkpoint.
  CsvAppender(std::filesystem::path path, const std::vector<std::string>& headers, std::int64_t keep_through)
      : path_(std::move(path)) {
    const auto existing = parse_csv(read_file(partial_path(path_)));
    if (existing.headers != headers) {
      throw IoError("resume: " + partial_path(path_).string() + " has columns '" + csv_line(existing.headers) +
                    "', expected '" + csv_line(headers) + "'");
    }
    CsvSeries kept{headers, {}};
    for (const auto& row : existing.rows) {
      std::int64_t n = 0;
      const auto& f = row.front();
      auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), n);
      if (ec != std::errc{} || end != f.data() + f.size()) throw IoError("resume: malformed row in partial file");
      if (n <= keep_through) kept.rows.push_back(row);
    }
    out_.open(partial_path(path_), std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open " + partial_path(path_).string());
    out_ << render_csv(kept);
    width_ = headers.size();
  }

  void append(const std::vector<std::string>& row) {
    if (row.size() != width_) throw std::invalid_argument("csv: row arity mismatch");
    out_ << csv_line(row) << '\n';
  }

  void flush() {
    out_.flush();
    if (!out_) throw IoError("write failed for " + partial_path(path_).string());
  }

  void finish() {
    flush();
    out_.close();
    promote_partial(path_);
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t width_ = 0;
};

}  // namespace rhlab::harness
