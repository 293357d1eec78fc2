#include "qnls/scalar_family.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qnls {

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Power evaluation with exact fast paths for the exponents the shipped
// families actually hit in the stepper's inner loop (s = |u|^2 >= 0);
// everything else falls back to std::pow.
double pow_term(double s, double e) {
  if (e == 1.0) return s;
  if (e == 2.0) return s * s;
  if (e == 0.5) return std::sqrt(s);
  if (e == 1.5) return s * std::sqrt(s);
  if (e == 0.0) return 1.0;
  if (e == 3.0) return s * s * s;
  if (e == -0.5) return 1.0 / std::sqrt(s);
  if (e == -1.0) return 1.0 / s;
  return std::pow(s, e);
}

double parse_number(std::string_view text, const std::string& context) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad number '" + std::string(text) + "' in " + context);
  }
  return v;
}

// Splits on '+' separators, except a '+' that is part of a scientific
// exponent ("1e+06") stays inside its token.
std::vector<std::string_view> split_terms(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+' && i > 0 && s[i - 1] != 'e' && s[i - 1] != 'E') {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

}  // namespace

ScalarFamily ScalarFamily::zero() { return ScalarFamily{}; }

ScalarFamily ScalarFamily::power_sum(std::vector<PowerTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("power sum needs at least one term");
  for (const auto& t : terms) {
    if (!std::isfinite(t.coeff) || !std::isfinite(t.exponent)) {
      throw std::invalid_argument("power term has non-finite parameter");
    }
    if (t.exponent <= 0.0) {
      throw std::invalid_argument("power term exponent must be positive, got " + g17(t.exponent));
    }
  }
  std::sort(terms.begin(), terms.end(),
            [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
  ScalarFamily f;
  f.kind_ = FamilyKind::PowerSum;
  f.terms_ = std::move(terms);
  return f;
}

ScalarFamily ScalarFamily::exponential(double amplitude, double rate) {
  if (!std::isfinite(amplitude) || amplitude == 0.0) {
    throw std::invalid_argument("exponential amplitude must be finite and nonzero");
  }
  if (!std::isfinite(rate) || rate <= 0.0) {
    throw std::invalid_argument("exponential rate must be positive, got " + g17(rate));
  }
  ScalarFamily f;
  f.kind_ = FamilyKind::Exponential;
  f.amplitude_ = amplitude;
  f.rate_ = rate;
  return f;
}

ScalarFamily ScalarFamily::parse(const std::string& text) {
  const std::string_view body = trim(text);
  if (body == "zero") return zero();
  if (body.starts_with("power:")) {
    std::vector<PowerTerm> terms;
    for (std::string_view token : split_terms(body.substr(6))) {
      token = trim(token);
      const auto sep = token.find("*s^");
      if (sep == std::string_view::npos) {
        throw std::invalid_argument("power term '" + std::string(token) +
                                    "' must look like COEFF*s^EXPONENT");
      }
      terms.push_back({parse_number(token.substr(0, sep), "power coefficient"),
                       parse_number(token.substr(sep + 3), "power exponent")});
    }
    return power_sum(std::move(terms));
  }
  if (body.starts_with("exp:")) {
    const std::string_view args = body.substr(4);
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      return exponential(1.0, parse_number(args, "exponential rate"));
    }
    return exponential(parse_number(args.substr(0, comma), "exponential amplitude"),
                       parse_number(args.substr(comma + 1), "exponential rate"));
  }
  throw std::invalid_argument("unrecognized family '" + std::string(body) +
                              "' (expected zero | power:... | exp:...)");
}

double ScalarFamily::value(double s) const {
  switch (kind_) {
    case FamilyKind::Zero:
      return 0.0;
    case FamilyKind::PowerSum: {
      double acc = 0.0;
      for (const auto& t : terms_) acc += t.coeff * pow_term(s, t.exponent);
      return acc;
    }
    case FamilyKind::Exponential:
      return amplitude_ * std::exp(rate_ * s);
  }
  return 0.0;
}

double ScalarFamily::derivative(double s) const {
  switch (kind_) {
    case FamilyKind::Zero:
      return 0.0;
    case FamilyKind::PowerSum: {
      double acc = 0.0;
      for (const auto& t : terms_) acc += t.coeff * t.exponent * pow_term(s, t.exponent - 1.0);
      return acc;
    }
    case FamilyKind::Exponential:
      return amplitude_ * rate_ * std::exp(rate_ * s);
  }
  return 0.0;
}

double ScalarFamily::second_derivative(double s) const {
  switch (kind_) {
    case FamilyKind::Zero:
      return 0.0;
    case FamilyKind::PowerSum: {
      double acc = 0.0;
      for (const auto& t : terms_) {
        if (t.exponent == 1.0) continue;  // exact zero; avoids 0 * inf at s = 0
        acc += t.coeff * t.exponent * (t.exponent - 1.0) * pow_term(s, t.exponent - 2.0);
      }
      return acc;
    }
    case FamilyKind::Exponential:
      return amplitude_ * rate_ * rate_ * std::exp(rate_ * s);
  }
  return 0.0;
}

double ScalarFamily::antiderivative(double s) const {
  switch (kind_) {
    case FamilyKind::Zero:
      return 0.0;
    case FamilyKind::PowerSum: {
      double acc = 0.0;
      for (const auto& t : terms_) {
        acc += t.coeff / (t.exponent + 1.0) * pow_term(s, t.exponent + 1.0);
      }
      return acc;
    }
    case FamilyKind::Exponential:
      return amplitude_ / rate_ * std::expm1(rate_ * s);
  }
  return 0.0;
}

double ScalarFamily::min_exponent() const {
  if (kind_ != FamilyKind::PowerSum) throw std::logic_error("min_exponent: not a power sum");
  return terms_.front().exponent;
}

double ScalarFamily::max_exponent() const {
  if (kind_ != FamilyKind::PowerSum) throw std::logic_error("max_exponent: not a power sum");
  return terms_.back().exponent;
}

std::string ScalarFamily::describe() const {
  switch (kind_) {
    case FamilyKind::Zero:
      return "zero";
    case FamilyKind::PowerSum: {
      std::string out = "power:";
      for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i > 0) out += '+';
        out += g17(terms_[i].coeff) + "*s^" + g17(terms_[i].exponent);
      }
      return out;
    }
    case FamilyKind::Exponential:
      if (amplitude_ == 1.0) return "exp:" + g17(rate_);
      return "exp:" + g17(amplitude_) + "," + g17(rate_);
  }
  return "zero";
}

}  // namespace qnls
