#pragma once

#include <string>
#include <vector>

namespace qnls {

/// One term of a finite power sum: coeff * s^exponent.
struct PowerTerm {
  double coeff = 0.0;
  double exponent = 0.0;
};

enum class FamilyKind { Zero, PowerSum, Exponential };

/// A scalar function s -> f(s) on s >= 0 drawn from one of three closed
/// families: the zero function, a finite sum of powers with positive
/// exponents, or an exponential a*exp(L*s).  The class carries exact
/// derivatives and the antiderivative normalized to vanish at s = 0, so
/// downstream code never needs numeric differentiation of model inputs.
class ScalarFamily {
 public:
  ScalarFamily() = default;  // zero function

  static ScalarFamily zero();
  static ScalarFamily power_sum(std::vector<PowerTerm> terms);
  static ScalarFamily exponential(double amplitude, double rate);

  /// Parses "zero", "power:C*s^E+C*s^E+...", "exp:RATE" (unit amplitude)
  /// or "exp:AMPLITUDE,RATE".  Throws std::invalid_argument on malformed
  /// input; describe() output always round-trips.
  static ScalarFamily parse(const std::string& text);

  FamilyKind kind() const { return kind_; }
  bool is_zero() const { return kind_ == FamilyKind::Zero; }

  /// Power-sum terms, sorted by exponent ascending.  Empty for the other
  /// kinds.
  const std::vector<PowerTerm>& terms() const { return terms_; }

  /// Exponential parameters; only meaningful when kind() == Exponential.
  double amplitude() const { return amplitude_; }
  double rate() const { return rate_; }

  double value(double s) const;
  double derivative(double s) const;
  double second_derivative(double s) const;
  /// Integral of value() from 0 to s.
  double antiderivative(double s) const;

  /// Smallest / largest exponent of a power sum.  Throws std::logic_error
  /// for the other kinds.
  double min_exponent() const;
  double max_exponent() const;

  /// Canonical textual form accepted by parse().
  std::string describe() const;

 private:
  FamilyKind kind_ = FamilyKind::Zero;
  std::vector<PowerTerm> terms_;
  double amplitude_ = 0.0;
  double rate_ = 0.0;
};

}  // namespace qnls
