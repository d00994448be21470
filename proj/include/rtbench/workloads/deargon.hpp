// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

// Argon2 secret-recovery workload.
//
// Given an Argon2 hash in PHC string form (optionally base64-wrapped) and the
// known length of the secret, tries every lowercase string of that length in
// lexicographic order until one verifies. The work is dominated by the
// memory-hard hash; nothing here depends on a random source.

#pragma once

#include <sodium.h>

#include <charconv>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtbench/error.hpp"

namespace rtbench::deargon {

/// Malformed input: bad base64 wrapper or bad PHC string.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// Parameters that parse fine but that the Argon2 backend cannot evaluate.
class UnsupportedHash : public Error {
 public:
  using Error::Error;
};

struct PhcHash {
  std::string algorithm;  // argon2i, argon2id or argon2d
  std::uint32_t version = 0;
  std::uint32_t memory_kib = 0;
  std::uint32_t time_cost = 0;
  std::uint32_t parallelism = 0;
  std::vector<unsigned char> salt;
  std::vector<unsigned char> digest;

  bool operator==(const PhcHash&) const = default;
};

namespace detail {

inline void ensure_sodium() {
  static const int status = ::sodium_init();
  if (status < 0) throw Error("libsodium initialization failed");
}

inline std::optional<std::vector<unsigned char>> base64_decode(std::string_view text, int variant) {
  ensure_sodium();
  std::vector<unsigned char> out(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  if (::sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &len, nullptr, variant) != 0)
    return std::nullopt;
  out.resize(len);
  return out;
}

inline std::string base64_encode(std::span<const unsigned char> bytes, int variant) {
  ensure_sodium();
  std::string out(sodium_base64_ENCODED_LEN(bytes.size(), variant), '\0');
  ::sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), variant);
  out.resize(out.size() - 1);  // terminating NUL
  return out;
}

inline std::uint32_t parse_u32(std::string_view text, std::string_view what) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw DecodeError("malformed PHC string: bad " + std::string(what) + " '" + std::string(text) + "'");
  return value;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    auto pos = text.find(sep);
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return parts;
}

}  // namespace detail

/// Parses $alg$v=V$m=M,t=T,p=P$salt$digest (salt and digest in unpadded
/// standard base64).
inline PhcHash parse_phc(std::string_view text) {
  auto fields = detail::split(text, '$');
  if (fields.size() != 6 || !fields[0].empty())
    throw DecodeError("malformed PHC string: expected $alg$v=..$m=..,t=..,p=..$salt$hash");
  PhcHash h;
  h.algorithm = fields[1];
  if (h.algorithm != "argon2i" && h.algorithm != "argon2id" && h.algorithm != "argon2d")
    throw DecodeError("malformed PHC string: unknown algorithm '" + h.algorithm + "'");
  if (!fields[2].starts_with("v=")) throw DecodeError("malformed PHC string: missing version");
  h.version = detail::parse_u32(fields[2].substr(2), "version");

  bool seen_m = false, seen_t = false, seen_p = false;
  for (auto param : detail::split(fields[3], ',')) {
    auto eq = param.find('=');
    if (eq == std::string_view::npos) throw DecodeError("malformed PHC string: bad parameter '" + std::string(param) + "'");
    auto key = param.substr(0, eq);
    auto value = param.substr(eq + 1);
    auto assign = [&](bool& seen, std::uint32_t& slot) {
      if (seen) throw DecodeError("malformed PHC string: repeated parameter '" + std::string(key) + "'");
      seen = true;
      slot = detail::parse_u32(value, key);
    };
    if (key == "m") assign(seen_m, h.memory_kib);
    else if (key == "t") assign(seen_t, h.time_cost);
    else if (key == "p") assign(seen_p, h.parallelism);
    else throw DecodeError("malformed PHC string: unknown parameter '" + std::string(key) + "'");
  }
  if (!seen_m || !seen_t || !seen_p) throw DecodeError("malformed PHC string: m, t and p are all required");

  auto salt = detail::base64_decode(fields[4], sodium_base64_VARIANT_ORIGINAL_NO_PADDING);
  if (!salt || salt->empty()) throw DecodeError("malformed PHC string: bad salt encoding");
  auto digest = detail::base64_decode(fields[5], sodium_base64_VARIANT_ORIGINAL_NO_PADDING);
  if (!digest || digest->empty()) throw DecodeError("malformed PHC string: bad hash encoding");
  h.salt = std::move(*salt);
  h.digest = std::move(*digest);
  return h;
}

inline std::string to_phc_string(const PhcHash& h) {
  return "$" + h.algorithm + "$v=" + std::to_string(h.version) + "$m=" + std::to_string(h.memory_kib) +
         ",t=" + std::to_string(h.time_cost) + ",p=" + std::to_string(h.parallelism) + "$" +
         detail::base64_encode(h.salt, sodium_base64_VARIANT_ORIGINAL_NO_PADDING) + "$" +
         detail::base64_encode(h.digest, sodium_base64_VARIANT_ORIGINAL_NO_PADDING);
}

/// Raw PHC text if it starts with '$', otherwise standard base64 (padded or
/// not) wrapping a PHC string. Surrounding whitespace is ignored.
inline PhcHash decode_input(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw DecodeError("empty hash input");
  text = text.substr(first, text.find_last_not_of(" \t\r\n") - first + 1);
  if (text.front() == '$') return parse_phc(text);
  auto bytes = detail::base64_decode(text, sodium_base64_VARIANT_ORIGINAL);
  if (!bytes) bytes = detail::base64_decode(text, sodium_base64_VARIANT_ORIGINAL_NO_PADDING);
  if (!bytes) throw DecodeError("invalid base64 input");
  return parse_phc(std::string_view(reinterpret_cast<const char*>(bytes->data()), bytes->size()));
}

inline constexpr std::uint32_t kArgon2Version = 0x13;

/// Rejects parameter sets the backend cannot evaluate.
inline void check_supported(const PhcHash& h) {
  auto fail = [](const std::string& why) { throw UnsupportedHash("unsupported Argon2 parameters: " + why); };
  if (h.algorithm == "argon2d") fail("argon2d is not available");
  if (h.version != kArgon2Version) fail("only version 19 (0x13) is supported");
  if (h.time_cost < 1) fail("t must be at least 1");
  if (h.parallelism < 1 || h.parallelism > 0xFFFFFF) fail("p must be in [1, 2^24-1]");
  if (static_cast<std::uint64_t>(h.memory_kib) < 8ull * h.parallelism) fail("m must be at least 8*p KiB");
  if (h.salt.size() < 8) fail("salt must be at least 8 bytes");
  if (h.digest.size() < 4) fail("hash must be at least 4 bytes");
}

/// Recomputes Argon2 over `candidate` with the hash's own parameters and
/// salt; true iff the digest matches exactly.
inline bool verify(std::string_view candidate, const PhcHash& h) {
  check_supported(h);
  detail::ensure_sodium();
  const std::string encoded = to_phc_string(h);
  const int rc = h.algorithm == "argon2i"
                     ? ::crypto_pwhash_argon2i_str_verify(encoded.c_str(), candidate.data(), candidate.size())
                     : ::crypto_pwhash_argon2id_str_verify(encoded.c_str(), candidate.data(), candidate.size());
  return rc == 0;
}

inline constexpr std::string_view kLowercase = "abcdefghijklmnopqrstuvwxyz";

/// All strings of `length` over `alphabet`, ordered lexicographically by
/// alphabet position.
struct CandidateSpace {
  std::string alphabet{kLowercase};
  unsigned length = 1;

  /// alphabet.size()^length; throws if it does not fit in 64 bits.
  std::uint64_t size() const {
    if (alphabet.empty() || length == 0) throw ValidationError("candidate space must have symbols and length >= 1");
    std::uint64_t total = 1;
    for (unsigned i = 0; i < length; ++i) {
      if (total > std::numeric_limits<std::uint64_t>::max() / alphabet.size())
        throw ValidationError("candidate space too large");
      total *= alphabet.size();
    }
    return total;
  }
};

/// The index-th candidate: base-|alphabet| digits, most significant first.
inline std::string candidate(std::uint64_t index, const CandidateSpace& space) {
  if (index >= space.size()) throw ValidationError("candidate index " + std::to_string(index) + " out of range");
  const std::uint64_t radix = space.alphabet.size();
  std::string out(space.length, space.alphabet.front());
  for (auto pos = out.rbegin(); pos != out.rend(); ++pos) {
    *pos = space.alphabet[index % radix];
    index /= radix;
  }
  return out;
}

/// Inverse of candidate(); nullopt when `text` is not in the space.
inline std::optional<std::uint64_t> index_of(std::string_view text, const CandidateSpace& space) {
  if (text.size() != space.length) return std::nullopt;
  std::uint64_t index = 0;
  for (char c : text) {
    auto digit = space.alphabet.find(c);
    if (digit == std::string::npos) return std::nullopt;
    index = index * space.alphabet.size() + digit;
  }
  return index;
}

struct SearchResult {
  std::optional<std::string> secret;
  std::uint64_t verifications = 0;
};

/// Sequential exhaustive search; stops at the first verifying candidate.
inline SearchResult search(const PhcHash& hash, const CandidateSpace& space) {
  check_supported(hash);
  SearchResult result;
  const std::uint64_t total = space.size();
  for (std::uint64_t i = 0; i < total; ++i) {
    std::string pw = candidate(i, space);
    ++result.verifications;
    if (verify(pw, hash)) {
      result.secret = std::move(pw);
      break;
    }
  }
  return result;
}

inline constexpr unsigned kMaxSecretLength = 13;  // 26^13 < 2^64

/// Program entry: deargon [--stats] <hash> <length>. Prints the secret and
/// exits 0; exit 1 when no candidate matches, 2 on bad arguments or input.
inline int deargon_main(std::span<const std::string_view> args, std::ostream& out, std::ostream& err) {
  bool stats = false;
  std::vector<std::string_view> positional;
  for (auto a : args) {
    if (a == "--stats" || a == "-s") stats = true;
    else positional.push_back(a);
  }
  auto usage = [&] {
    err << "usage: deargon [--stats] <argon2-hash|base64> <length>\n";
    return 2;
  };
  if (positional.size() != 2) return usage();

  unsigned length = 0;
  auto len_arg = positional[1];
  auto [ptr, ec] = std::from_chars(len_arg.data(), len_arg.data() + len_arg.size(), length);
  if (len_arg.empty() || ec != std::errc() || ptr != len_arg.data() + len_arg.size() || length == 0 ||
      length > kMaxSecretLength) {
    err << "deargon: length must be an integer in [1, " << kMaxSecretLength << "]\n";
    return usage();
  }

  try {
    const PhcHash hash = decode_input(positional[0]);
    const SearchResult result = search(hash, CandidateSpace{std::string(kLowercase), length});
    if (stats) err << "verifications: " << result.verifications << "\n";
    if (!result.secret) {
      err << "not found\n";
      return 1;
    }
    out << *result.secret << "\n";
    out.flush();
    return 0;
  } catch (const Error& e) {
    err << "deargon: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rtbench::deargon
