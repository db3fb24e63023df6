#pragma once

#include "scenvi/core/types.hpp"

#include <cstdint>
#include <cstring>
#include <cstdio>
#include <string>

namespace scenvi {

/// FNV-1a over raw bytes; used to bind derived artifacts to the data they came from.
class Fnv1a {
public:
  Fnv1a& bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= c[i];
      h_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Fnv1a& add(double v) {
    if (v == 0.0) v = 0.0;  // fold -0
    return bytes(&v, sizeof v);
  }
  Fnv1a& add(std::int64_t v) { return bytes(&v, sizeof v); }
  Fnv1a& add(const std::string& s) { return bytes(s.data(), s.size()); }
  Fnv1a& add(const Matrix& M) {
    add(static_cast<std::int64_t>(M.rows()));
    add(static_cast<std::int64_t>(M.cols()));
    for (Index i = 0; i < M.rows(); ++i)
      for (Index j = 0; j < M.cols(); ++j) add(M(i, j));
    return *this;
  }
  Fnv1a& add(const Vector& v) {
    add(static_cast<std::int64_t>(v.size()));
    for (Index i = 0; i < v.size(); ++i) add(v[i]);
    return *this;
  }

  std::uint64_t value() const { return h_; }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

} // namespace scenvi
