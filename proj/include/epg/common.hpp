// common.hpp — shared error types and small numeric helpers.
#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace epg {

// Error hierarchy. The CLI maps these onto exit codes:
//   data_error -> 2, numeric_error -> 3 (usage errors are handled by the parser).
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid input structure: bad graph, bad dataset, unreadable file.
struct data_error : error {
  using error::error;
};

// A graph that violates the elastic-graph invariants.
struct validation_error : data_error {
  using data_error::data_error;
};

// Numerical failure: singular system after regularization, oracle mismatch.
struct numeric_error : error {
  using error::error;
};

// Compensated (Kahan) accumulator. Keeps data-loop sums reproducible to
// well below the 1e-10 relative budget regardless of split order.
class KahanSum {
public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline double sq(double x) { return x * x; }

// Full-precision, locale-independent rendering: 17 significant digits,
// the round-trip precision of IEEE double.
inline std::string format_g17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// Locale-independent parse of a full token; returns false on trailing junk.
inline bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t' || *(last - 1) == '\r')) --last;
  if (first == last) return false;
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace epg
