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
#include "ltescan/util.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace ltescan {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t yr = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yr + (m <= 2));
}

} // namespace

double utc_from_civil(int year, int month, int day, int hour, int minute,
                      double second) {
  return static_cast<double>(days_from_civil(year, month, day)) * 86400.0 +
         hour * 3600.0 + minute * 60.0 + second;
}

double parse_time_utc(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw ParseError("empty timestamp");
  // ISO-8601 "YYYY-MM-DDThh:mm:ss[.frac][Z]"
  if (s.size() >= 19 && s[4] == '-' && s[7] == '-' &&
      (s[10] == 'T' || s[10] == ' ')) {
    int y = std::atoi(s.substr(0, 4).c_str());
    int mo = std::atoi(s.substr(5, 2).c_str());
    int d = std::atoi(s.substr(8, 2).c_str());
    int h = std::atoi(s.substr(11, 2).c_str());
    int mi = std::atoi(s.substr(14, 2).c_str());
    std::string secpart = s.substr(17);
    if (!secpart.empty() && (secpart.back() == 'Z' || secpart.back() == 'z'))
      secpart.pop_back();
    double sec = parse_double_strict(secpart);
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec >= 61)
      throw ParseError("invalid timestamp: " + s);
    return utc_from_civil(y, mo, d, h, mi, sec);
  }
  return parse_double_strict(s);
}

std::string format_time_utc(double unix_seconds) {
  int64_t days = static_cast<int64_t>(std::floor(unix_seconds / 86400.0));
  double rem = unix_seconds - static_cast<double>(days) * 86400.0;
  int y, mo, d;
  civil_from_days(days, y, mo, d);
  int h = static_cast<int>(rem / 3600.0);
  int mi = static_cast<int>((rem - h * 3600.0) / 60.0);
  double sec = rem - h * 3600.0 - mi * 60.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%06.3fZ", y, mo, d,
                h, mi, sec);
  return std::string(buf);
}

double parse_double_strict(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw ParseError("empty number");
  size_t slash = s.find('/');
  if (slash != std::string::npos) {
    double num = parse_double_strict(s.substr(0, slash));
    double den = parse_double_strict(s.substr(slash + 1));
    if (den == 0.0) throw ParseError("division by zero in: " + s);
    return num / den;
  }
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw ParseError("not a number: '" + s + "'");
  return v;
}

void BitWriter::put_bit(int b) { bits_.push_back(b ? 1 : 0); }

void BitWriter::put_bits(uint64_t value, int nbits) {
  for (int i = nbits - 1; i >= 0; --i) bits_.push_back((value >> i) & 1u);
}

void BitWriter::append(const std::vector<uint8_t>& bits) {
  bits_.insert(bits_.end(), bits.begin(), bits.end());
}

std::vector<uint8_t> BitWriter::to_bytes() const {
  std::vector<uint8_t> out((bits_.size() + 7) / 8, 0);
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out[i / 8] |= static_cast<uint8_t>(0x80u >> (i % 8));
  return out;
}

int BitReader::get_bit(const char* field) {
  if (pos_ >= bits_->size())
    throw ParseError(std::string("truncated payload at ") + field);
  return (*bits_)[pos_++];
}

uint64_t BitReader::get_bits(int nbits, const char* field) {
  uint64_t v = 0;
  for (int i = 0; i < nbits; ++i) v = (v << 1) | get_bit(field);
  return v;
}

void BitReader::skip(size_t nbits, const char* field) {
  if (pos_ + nbits > bits_->size())
    throw ParseError(std::string("truncated payload at ") + field);
  pos_ += nbits;
}

std::vector<uint8_t> bytes_to_bits(const std::vector<uint8_t>& bytes) {
  std::vector<uint8_t> bits;
  bits.reserve(bytes.size() * 8);
  for (uint8_t b : bytes)
    for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1u);
  return bits;
}

} // namespace ltescan
