#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace truthlat {

// Arbitrary-precision natural number. Little-endian 32-bit limbs, no
// trailing zero limbs (so the zero value has an empty limb vector).
//
// Only the operations the workbench needs are provided: ordering,
// +, -, *, capped exponentiation, bit access and decimal/hex I/O.
class BigNat {
public:
  BigNat() = default;

  BigNat(std::uint64_t v) {
    if (v != 0) {
      limbs_.push_back(static_cast<std::uint32_t>(v));
      if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
    }
  }

  static BigNat from_decimal(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("BigNat: empty decimal string");
    BigNat r;
    for (char c : s) {
      if (c < '0' || c > '9') throw std::invalid_argument("BigNat: bad decimal digit");
      r.mul_small(10);
      r.add_small(static_cast<std::uint32_t>(c - '0'));
    }
    return r;
  }

  // Value of a bit string, most significant bit first.
  static BigNat from_bits(const std::vector<bool>& bits) {
    BigNat r;
    r.limbs_.assign((bits.size() + 31) / 32, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) {
        std::size_t pos = bits.size() - 1 - i;  // LSB index
        r.limbs_[pos / 32] |= (std::uint32_t{1} << (pos % 32));
      }
    }
    r.trim();
    return r;
  }

  bool is_zero() const { return limbs_.empty(); }

  bool fits_u64() const { return limbs_.size() <= 2; }

  std::uint64_t to_u64() const {
    if (!fits_u64()) throw std::overflow_error("BigNat: does not fit in 64 bits");
    std::uint64_t v = 0;
    if (limbs_.size() > 0) v = limbs_[0];
    if (limbs_.size() > 1) v |= static_cast<std::uint64_t>(limbs_[1]) << 32;
    return v;
  }

  std::size_t bit_length() const {
    if (limbs_.empty()) return 0;
    std::uint32_t top = limbs_.back();
    std::size_t n = 0;
    while (top) { ++n; top >>= 1; }
    return (limbs_.size() - 1) * 32 + n;
  }

  bool bit(std::size_t i) const {  // LSB index 0
    std::size_t limb = i / 32;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i % 32)) & 1u;
  }

  // Binary expansion, most significant bit first. Zero gives an empty vector.
  std::vector<bool> to_bits() const {
    std::size_t n = bit_length();
    std::vector<bool> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = bit(n - 1 - i);
    return out;
  }

  friend std::strong_ordering operator<=>(const BigNat& a, const BigNat& b) {
    if (a.limbs_.size() != b.limbs_.size())
      return a.limbs_.size() <=> b.limbs_.size();
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
    }
    return std::strong_ordering::equal;
  }
  friend bool operator==(const BigNat& a, const BigNat& b) = default;

  BigNat& operator+=(const BigNat& o) {
    std::uint64_t carry = 0;
    std::size_t n = std::max(limbs_.size(), o.limbs_.size());
    limbs_.resize(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
      limbs_[i] = static_cast<std::uint32_t>(s);
      carry = s >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    return *this;
  }

  // Requires *this >= o.
  BigNat& operator-=(const BigNat& o) {
    if (*this < o) throw std::underflow_error("BigNat: negative subtraction");
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::int64_t d = static_cast<std::int64_t>(limbs_[i]) - borrow -
                       (i < o.limbs_.size() ? o.limbs_[i] : 0);
      borrow = d < 0 ? 1 : 0;
      if (d < 0) d += (std::int64_t{1} << 32);
      limbs_[i] = static_cast<std::uint32_t>(d);
    }
    trim();
    return *this;
  }

  friend BigNat operator+(BigNat a, const BigNat& b) { return a += b; }
  friend BigNat operator-(BigNat a, const BigNat& b) { return a -= b; }

  friend BigNat operator*(const BigNat& a, const BigNat& b) {
    if (a.is_zero() || b.is_zero()) return BigNat{};
    BigNat r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
        std::uint64_t cur = r.limbs_[i + j] + carry +
                            static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j];
        r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
      }
      r.limbs_[i + b.limbs_.size()] += static_cast<std::uint32_t>(carry);
    }
    r.trim();
    return r;
  }

  BigNat& operator*=(const BigNat& o) { return *this = *this * o; }

  BigNat& operator++() { add_small(1); return *this; }

  // x^y, throwing if the result would exceed max_bits bits.
  static BigNat pow_capped(const BigNat& x, const BigNat& y, std::size_t max_bits) {
    if (y.is_zero()) return BigNat{1};
    if (x.is_zero()) return BigNat{0};
    if (x == BigNat{1}) return BigNat{1};
    // result has > (y * (bitlen(x)-1)) bits; bail out before multiplying.
    if (!y.fits_u64() || y.to_u64() * (x.bit_length() - 1) > max_bits)
      throw std::overflow_error("BigNat: exponentiation exceeds cap");
    BigNat r{1};
    for (std::uint64_t i = 0, n = y.to_u64(); i < n; ++i) {
      r *= x;
      if (r.bit_length() > max_bits)
        throw std::overflow_error("BigNat: exponentiation exceeds cap");
    }
    return r;
  }

  std::string to_decimal() const {
    if (is_zero()) return "0";
    std::vector<std::uint32_t> limbs = limbs_;
    std::string out;
    while (!limbs.empty()) {
      std::uint64_t rem = 0;
      for (std::size_t i = limbs.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | limbs[i];
        limbs[i] = static_cast<std::uint32_t>(cur / 1000000000u);
        rem = cur % 1000000000u;
      }
      while (!limbs.empty() && limbs.back() == 0) limbs.pop_back();
      for (int k = 0; k < 9; ++k) {
        out.push_back(static_cast<char>('0' + rem % 10));
        rem /= 10;
      }
    }
    while (out.size() > 1 && out.back() == '0') out.pop_back();
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::string to_hex() const {
    if (is_zero()) return "0";
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      for (int sh = 28; sh >= 0; sh -= 4)
        out.push_back(digits[(limbs_[i] >> sh) & 0xF]);
    }
    out.erase(0, out.find_first_not_of('0'));
    return out;
  }

  std::size_t hash() const {
    std::size_t h = limbs_.size();
    for (auto l : limbs_) h ^= l + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }

private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  void mul_small(std::uint32_t m) {
    std::uint64_t carry = 0;
    for (auto& l : limbs_) {
      std::uint64_t cur = static_cast<std::uint64_t>(l) * m + carry;
      l = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  }

  void add_small(std::uint32_t a) {
    std::uint64_t carry = a;
    for (auto& l : limbs_) {
      if (!carry) break;
      std::uint64_t cur = l + carry;
      l = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  }

  std::vector<std::uint32_t> limbs_;
};

struct BigNatHash {
  std::size_t operator()(const BigNat& n) const { return n.hash(); }
};

}  // namespace truthlat
