/*
 Copyright 2026 The ltescan authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltescan {

using cplx = std::complex<double>;

/// Base error type for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

/// Parse "2026-08-10T12:34:56.5Z" or plain unix seconds into unix seconds.
double parse_time_utc(std::string_view text);
std::string format_time_utc(double unix_seconds);

/// Numeric parse that rejects trailing junk. Also accepts "a/b" fractions so
/// rates like 100e6/6 stay exact.
double parse_double_strict(std::string_view text);

/// MSB-first bit packing used for over-the-air payloads and .per files.
class BitWriter {
 public:
  void put_bit(int b);
  void put_bits(uint64_t value, int nbits); // MSB of the field first
  void append(const std::vector<uint8_t>& bits);
  size_t size() const { return bits_.size(); }
  const std::vector<uint8_t>& bits() const { return bits_; }
  std::vector<uint8_t> to_bytes() const; // zero-padded to a byte boundary

 private:
  std::vector<uint8_t> bits_; // one bit per element
};

class BitReader {
 public:
  explicit BitReader(const std::vector<uint8_t>& bits) : bits_(&bits) {}
  int get_bit(const char* field);
  uint64_t get_bits(int nbits, const char* field);
  size_t remaining() const { return bits_->size() - pos_; }
  size_t pos() const { return pos_; }
  void skip(size_t nbits, const char* field);

 private:
  const std::vector<uint8_t>* bits_;
  size_t pos_ = 0;
};

std::vector<uint8_t> bytes_to_bits(const std::vector<uint8_t>& bytes);

} // namespace ltescan
