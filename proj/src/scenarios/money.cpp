#include "ace/scenarios/money.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ace/core/error.hpp"

namespace ace::scenarios {

namespace {

void same_currency(const Money& a, const Money& b) {
  if (a.currency() != b.currency())
    throw Error("mixed currencies: " + a.currency() + " and " + b.currency());
}

}  // namespace

Money Money::from_double(double amount, const std::string& currency) {
  if (!std::isfinite(amount) || std::abs(amount) > 9.0e12) throw Error("money amount out of range");
  // Round through the 6-decimal text so 0.285 is treated as written.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", std::abs(amount));
  std::string text(buf);
  auto dot = text.find('.');
  std::int64_t micro = std::stoll(text.substr(0, dot)) * 1000000 + std::stoll(text.substr(dot + 1));
  std::int64_t minor = (micro + 5000) / 10000;
  return {amount < 0 ? -minor : minor, currency};
}

Money Money::parse(std::string_view text, const std::string& currency) {
  std::string s(text);
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  std::int64_t whole = 0, frac = 0;
  int digits = 0, frac_digits = 0;
  for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i, ++digits) {
    if (whole > std::numeric_limits<std::int64_t>::max() / 10 - 10) throw Error("money amount out of range: " + s);
    whole = whole * 10 + (s[i] - '0');
  }
  if (i < s.size() && s[i] == '.') {
    for (++i; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i, ++frac_digits) {
      if (frac_digits >= 2) throw Error("money amount has more than two decimals: " + s);
      frac = frac * 10 + (s[i] - '0');
    }
  }
  if (i != s.size() || (digits == 0 && frac_digits == 0)) throw Error("malformed money amount: " + s);
  if (frac_digits == 1) frac *= 10;
  std::int64_t minor = whole * 100 + frac;
  return {neg ? -minor : minor, currency};
}

std::string Money::to_string() const {
  std::int64_t a = minor_ < 0 ? -minor_ : minor_;
  std::string cents = std::to_string(a % 100);
  if (cents.size() == 1) cents = "0" + cents;
  return (minor_ < 0 ? "-" : "") + std::to_string(a / 100) + "." + cents;
}

nlohmann::json Money::to_json() const { return {{"amount", to_string()}, {"currency", currency_}}; }

Money Money::times(double quantity) const {
  return from_double(static_cast<double>(minor_) * quantity / 100.0, currency_);
}

Money& Money::operator+=(const Money& o) {
  same_currency(*this, o);
  minor_ += o.minor_;
  return *this;
}

Money& Money::operator-=(const Money& o) {
  same_currency(*this, o);
  minor_ -= o.minor_;
  return *this;
}

bool operator<(const Money& a, const Money& b) {
  same_currency(a, b);
  return a.minor_ < b.minor_;
}

}  // namespace ace::scenarios
