#pragma once

// Resumable Mertens run state.
//
// On-disk form is one text record of `key:value` lines in a fixed order:
//
//   format_version, n_processed, m, count_neg, count_pos, count_zero,
//   max_abs_m, argmax, max_ratio, block_length, integrity_digest
//
// integrity_digest is the 64-bit FNV-1a hash of every preceding byte
// (including the newlines), written as 16 lowercase hex digits. max_ratio
// uses the shortest round-trip decimal form so that load -> save is
// byte-identical.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "rhlab/errors.hpp"

namespace rhlab {

inline constexpr int kCheckpointFormatVersion = 1;

constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf.data(), 16);
}

struct Checkpoint {
  int format_version = kCheckpointFormatVersion;
  std::int64_t n_processed = 0;
  std::int64_t m = 0;
  std::int64_t count_neg = 0;
  std::int64_t count_pos = 0;
  std::int64_t count_zero = 0;
  std::int64_t max_abs_m = 0;
  std::int64_t argmax = 0;
  double max_ratio = 0.0;
  std::int64_t block_length = 0;
  // Filled in by serialize_checkpoint / parse_checkpoint.
  std::uint64_t integrity_digest = 0;

  bool operator==(const Checkpoint&) const = default;
};

namespace detail {

inline std::string shortest_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw IoError("checkpoint: cannot render double");
  return std::string(buf.data(), end);
}

inline void validate_checkpoint(const Checkpoint& c) {
  auto fail = [](const std::string& why) { throw CheckpointError("checkpoint rejected: " + why); };
  if (c.format_version != kCheckpointFormatVersion) {
    fail("format_version " + std::to_string(c.format_version) + ", expected " +
         std::to_string(kCheckpointFormatVersion));
  }
  if (c.n_processed < 1) fail("n_processed must be positive");
  if (c.block_length < 1) fail("block_length must be positive");
  if (c.count_neg < 0 || c.count_pos < 0 || c.count_zero < 0) fail("negative sign count");
  if (c.count_neg + c.count_pos + c.count_zero != c.n_processed) fail("sign counts do not sum to n_processed");
  if (c.m != c.count_pos - c.count_neg) fail("m differs from count_pos - count_neg");
  if (c.max_abs_m < (c.m < 0 ? -c.m : c.m)) fail("max_abs_m below |m|");
  if (c.argmax < 1 || c.argmax > c.n_processed) fail("argmax outside [1, n_processed]");
  if (!(c.max_ratio >= 0.0) || !std::isfinite(c.max_ratio)) fail("max_ratio not a finite non-negative value");
}

}  // namespace detail

// Returns the full file contents; also stores the digest back into `c`.
inline std::string serialize_checkpoint(Checkpoint& c) {
  std::string body;
  auto line = [&](std::string_view key, const std::string& value) {
    body.append(key).append(":").append(value).append("\n");
  };
  line("format_version", std::to_string(c.format_version));
  line("n_processed", std::to_string(c.n_processed));
  line("m", std::to_string(c.m));
  line("count_neg", std::to_string(c.count_neg));
  line("count_pos", std::to_string(c.count_pos));
  line("count_zero", std::to_string(c.count_zero));
  line("max_abs_m", std::to_string(c.max_abs_m));
  line("argmax", std::to_string(c.argmax));
  line("max_ratio", detail::shortest_double(c.max_ratio));
  line("block_length", std::to_string(c.block_length));
  c.integrity_digest = fnv1a64(body);
  line("integrity_digest", hex64(c.integrity_digest));
  return body;
}

inline Checkpoint parse_checkpoint(std::string_view text) {
  static constexpr std::array<std::string_view, 11> kKeys = {
      "format_version", "n_processed", "m",         "count_neg",    "count_pos",        "count_zero",
      "max_abs_m",      "argmax",      "max_ratio", "block_length", "integrity_digest"};

  std::array<std::string_view, 11> values{};
  std::size_t digest_offset = 0;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < kKeys.size(); ++k) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      throw CheckpointError("checkpoint rejected: truncated before '" + std::string(kKeys[k]) + "'");
    }
    const auto row = text.substr(pos, nl - pos);
    const auto colon = row.find(':');
    if (colon == std::string_view::npos || row.substr(0, colon) != kKeys[k]) {
      throw CheckpointError("checkpoint rejected: expected key '" + std::string(kKeys[k]) + "' on line " +
                            std::to_string(k + 1));
    }
    if (k + 1 == kKeys.size()) digest_offset = pos;
    values[k] = row.substr(colon + 1);
    pos = nl + 1;
  }
  if (pos != text.size()) throw CheckpointError("checkpoint rejected: trailing bytes after digest");

  const std::uint64_t actual = fnv1a64(text.substr(0, digest_offset));
  if (values[10] != hex64(actual)) {
    throw CheckpointError("checkpoint rejected: integrity digest mismatch (stored " + std::string(values[10]) +
                          ", computed " + hex64(actual) + ")");
  }

  auto integer = [&](std::size_t k) {
    std::int64_t v = 0;
    const auto s = values[k];
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
      throw CheckpointError("checkpoint rejected: bad integer for '" + std::string(kKeys[k]) + "'");
    }
    return v;
  };

  Checkpoint c;
  c.format_version = static_cast<int>(integer(0));
  c.n_processed = integer(1);
  c.m = integer(2);
  c.count_neg = integer(3);
  c.count_pos = integer(4);
  c.count_zero = integer(5);
  c.max_abs_m = integer(6);
  c.argmax = integer(7);
  {
    const auto s = values[8];
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), c.max_ratio);
    if (ec != std::errc{} || end != s.data() + s.size()) {
      throw CheckpointError("checkpoint rejected: bad real for 'max_ratio'");
    }
  }
  c.block_length = integer(9);
  c.integrity_digest = actual;
  detail::validate_checkpoint(c);
  return c;
}

// Writes via a sibling temp file and rename, so a failed write leaves any
// previous checkpoint untouched.
inline void checkpoint_save(Checkpoint& c, const std::filesystem::path& path) {
  detail::validate_checkpoint(c);
  const std::string text = serialize_checkpoint(c);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("checkpoint: cannot open " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("checkpoint: write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("checkpoint: cannot move into place " + path.string());
  }
}

inline Checkpoint checkpoint_resume(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("checkpoint: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str());
}

}  // namespace rhlab
