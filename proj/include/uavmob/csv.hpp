#ifndef UAVMOB_CSV_HPP_
#define UAVMOB_CSV_HPP_

#include <array>
#include <charconv>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace uavmob::csv {

/// Shortest decimal that parses back to the same double.
inline std::string format(double value) {
  std::array<char, 32> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return ec == std::errc{} ? std::string(buffer.data(), end) : std::string("nan");
}

/// Empty field for a missing value.
inline std::string format(const std::optional<double> &value) {
  return value ? format(*value) : std::string();
}

inline void write_row(std::ostream &out, std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (auto field : fields) {
    if (!first) {
      out << ',';
    }
    out << field;
    first = false;
  }
  out << '\n';
}

} // namespace uavmob::csv

#endif // UAVMOB_CSV_HPP_
