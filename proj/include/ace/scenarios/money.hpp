#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace ace::scenarios {

/// Fixed-point amount in integer minor units (cents) of one currency.
class Money {
 public:
  Money() = default;
  Money(std::int64_t minor, std::string currency) : minor_(minor), currency_(std::move(currency)) {}

  /// Rounds half away from zero to the nearest minor unit.
  static Money from_double(double amount, const std::string& currency);
  /// Parses `-123.45`, `7`, `0.5`; more than two decimals is an error.
  static Money parse(std::string_view text, const std::string& currency);

  std::int64_t minor() const { return minor_; }
  const std::string& currency() const { return currency_; }
  double to_double() const { return static_cast<double>(minor_) / 100.0; }
  /// `150.00`, `-0.05`.
  std::string to_string() const;
  /// {"amount": "150.00", "currency": "USD"}
  nlohmann::json to_json() const;

  /// quantity x this, rounded half away from zero.
  Money times(double quantity) const;

  Money& operator+=(const Money& o);
  Money& operator-=(const Money& o);
  friend Money operator+(Money a, const Money& b) { return a += b; }
  friend Money operator-(Money a, const Money& b) { return a -= b; }
  friend bool operator==(const Money&, const Money&) = default;
  friend bool operator<(const Money& a, const Money& b);

 private:
  std::int64_t minor_ = 0;
  std::string currency_;
};

}  // namespace ace::scenarios
