#pragma once

// Closed-form masses for the symmetric concave four-body configuration
//
//   q1 = (-1, 0), q2 = (1, 0), q3 = (0, t), q4 = (0, s),   t > s > 0,
//
// with gravitational constant 1. Everything here is templated on the scalar
// type so the same expressions can be evaluated in double, long double or a
// boost::multiprecision float.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "cc4/errors.hpp"

namespace cc4 {

inline constexpr double kDefaultEpsSign = 1e-9;
inline constexpr double kDefaultLambda = 1.0;

enum class Sign { Negative, Boundary, Positive };

inline const char* to_string(Sign sign) {
  switch (sign) {
    case Sign::Negative: return "negative";
    case Sign::Boundary: return "boundary";
    case Sign::Positive: return "positive";
  }
  return "?";
}

namespace detail {

template <typename Scalar>
Scalar pow3(const Scalar& x) {
  return x * x * x;
}

// (1 + x^2)^{3/2}
template <typename Scalar>
Scalar hyp3(const Scalar& x) {
  using std::sqrt;
  return pow3(Scalar(sqrt(Scalar(1) + x * x)));
}

template <typename Scalar>
bool is_finite(const Scalar& x) {
  using std::isfinite;
  return isfinite(x);
}

template <typename Scalar>
std::string describe(const Scalar& s, const Scalar& t) {
  std::ostringstream os;
  os.precision(17);
  os << "(s, t) = (" << s << ", " << t << ")";
  return os.str();
}

}  // namespace detail

/// Shape of the configuration. Always satisfies t > s > 0 with both finite.
template <typename Scalar = double>
class ShapeParams {
 public:
  static bool is_valid(const Scalar& s, const Scalar& t) {
    return detail::is_finite(s) && detail::is_finite(t) && s > Scalar(0) && t > s;
  }

  ShapeParams(const Scalar& s, const Scalar& t) : s_(s), t_(t) {
    if (!is_valid(s, t)) {
      throw InvalidInput("shape parameters require finite t > s > 0, got " +
                         detail::describe(s, t));
    }
  }

  const Scalar& s() const { return s_; }
  const Scalar& t() const { return t_; }

 private:
  Scalar s_;
  Scalar t_;
};

/// Classifies v as Boundary when |v| <= eps * max(1, scale), where scale is
/// the magnitude of the terms that produced v.
template <typename Scalar>
Sign classify_sign(const Scalar& value, const Scalar& scale, const Scalar& eps) {
  using std::abs;
  const Scalar band = eps * std::max(Scalar(1), Scalar(abs(scale)));
  if (abs(value) <= band) return Sign::Boundary;
  return value > Scalar(0) ? Sign::Positive : Sign::Negative;
}

template <typename Scalar = double>
struct SignProfile {
  Scalar p1{}, p2{}, p3{}, p4{}, p5{};
  Sign sign1{}, sign2{}, sign3{}, sign4{}, sign5{};

  std::array<Scalar, 5> values() const { return {p1, p2, p3, p4, p5}; }
  std::array<Sign, 5> signs() const { return {sign1, sign2, sign3, sign4, sign5}; }
};

/// The five discriminants whose zero sets bound the feasibility regions:
///
///   p1 = 8 - (1+t^2)^{3/2}
///   p2 = (2/sqrt(1+s^2))^3 - (sqrt(1+t^2)/(t-s))^3
///   p3 = (1+s^2)^{3/2} - 8
///   p4 = (1+s^2)^{3/2} - (t-s)^3
///   p5 = 1/(t-s)^2 + s/(1+s^2)^{3/2} - t/(1+t^2)^{3/2}
template <typename Scalar>
SignProfile<Scalar> sign_profile(const ShapeParams<Scalar>& params,
                                 const Scalar& eps_sign = Scalar(kDefaultEpsSign)) {
  using std::max;
  using std::sqrt;
  if (!(eps_sign >= Scalar(0))) throw InvalidInput("eps_sign must be non-negative");

  const Scalar& s = params.s();
  const Scalar& t = params.t();
  const Scalar gap = t - s;
  const Scalar hyp_s = detail::hyp3(s);
  const Scalar hyp_t = detail::hyp3(t);
  const Scalar gap3 = detail::pow3(gap);
  const Scalar base_term = detail::pow3(Scalar(Scalar(2) / sqrt(Scalar(1) + s * s)));
  const Scalar apex_term = detail::pow3(Scalar(sqrt(Scalar(1) + t * t) / gap));
  const Scalar inner = gap / gap3;
  const Scalar side_s = s / hyp_s;
  const Scalar side_t = t / hyp_t;

  SignProfile<Scalar> out;
  out.p1 = Scalar(8) - hyp_t;
  out.p2 = base_term - apex_term;
  out.p3 = hyp_s - Scalar(8);
  out.p4 = hyp_s - gap3;
  out.p5 = inner + side_s - side_t;

  out.sign1 = classify_sign(out.p1, max(Scalar(8), hyp_t), eps_sign);
  out.sign2 = classify_sign(out.p2, max(base_term, apex_term), eps_sign);
  out.sign3 = classify_sign(out.p3, max(Scalar(8), hyp_s), eps_sign);
  out.sign4 = classify_sign(out.p4, max(hyp_s, gap3), eps_sign);
  out.sign5 = classify_sign(out.p5, max(inner, max(side_s, side_t)), eps_sign);
  return out;
}

/// Ordinate of the center of mass forced by solvability of the reduced
/// system:  c_y = t s (1/(1+s^2)^{3/2} - 1/(1+t^2)^{3/2}) / p5.
template <typename Scalar>
Scalar center_ordinate(const ShapeParams<Scalar>& params) {
  const Scalar& s = params.s();
  const Scalar& t = params.t();
  const Scalar hyp_s = detail::hyp3(s);
  const Scalar hyp_t = detail::hyp3(t);
  const Scalar gap = t - s;
  const Scalar p5 = gap / detail::pow3(gap) + s / hyp_s - t / hyp_t;
  if (!(p5 > Scalar(0))) {
    throw std::logic_error("p5 must be positive for t > s > 0; " + detail::describe(s, t));
  }
  return t * s * (Scalar(1) / hyp_s - Scalar(1) / hyp_t) / p5;
}

template <typename Scalar = double>
struct MassSolution {
  Scalar s{}, t{};
  Scalar m1{}, m2{}, m3{}, m4{};
  Scalar lambda{};
  Scalar c_y{};
  SignProfile<Scalar> profile;
  bool feasible = false;

  std::array<Scalar, 4> masses() const { return {m1, m2, m3, m4}; }
  Scalar total_mass() const { return m1 + m2 + m3 + m4; }
  /// Center-of-mass ordinate recomputed from the masses: (s m4 + t m3) / M.
  Scalar mass_weighted_ordinate() const { return (s * m4 + t * m3) / total_mass(); }
};

/// Masses making the shape central with multiplier lambda. Infeasible shapes
/// (some mass <= 0) are returned with feasible = false, not thrown.
template <typename Scalar>
MassSolution<Scalar> solve_masses(const ShapeParams<Scalar>& params,
                                  const Scalar& lambda = Scalar(kDefaultLambda),
                                  const Scalar& eps_sign = Scalar(kDefaultEpsSign)) {
  if (!detail::is_finite(lambda) || !(lambda > Scalar(0))) {
    throw InvalidInput("lambda must be a finite positive number");
  }
  MassSolution<Scalar> out;
  out.s = params.s();
  out.t = params.t();
  out.lambda = lambda;
  out.profile = sign_profile(params, eps_sign);
  const auto& pr = out.profile;
  if (pr.sign2 == Sign::Boundary) {
    throw DegenerateDenominator("p2 vanishes at " + detail::describe(out.s, out.t) +
                                "; the closed-form masses are undefined on the p2 = 0 curve");
  }

  const Scalar& s = out.s;
  const Scalar& t = out.t;
  const Scalar gap = t - s;
  const Scalar gap3 = detail::pow3(gap);
  const Scalar hyp_s = detail::hyp3(s);
  const Scalar hyp_t = detail::hyp3(t);
  out.c_y = center_ordinate(params);
  const Scalar reach = t - out.c_y;

  out.m4 = lambda * reach / gap * pr.p1 / pr.p2;
  out.m3 = lambda * s * hyp_t / (hyp_s * hyp_s * gap3) * (pr.p3 * pr.p4) / (pr.p5 * pr.p2);
  out.m2 = lambda * Scalar(8) * hyp_t * reach / (Scalar(2) * t * hyp_s * gap3) *
           (gap3 - hyp_s) / pr.p2;
  out.m1 = out.m2;
  out.feasible = out.m1 > Scalar(0) && out.m3 > Scalar(0) && out.m4 > Scalar(0);
  return out;
}

/// The configuration whose center of mass sits exactly on q4.
template <typename Scalar = double>
struct SpecialCaseSolution {
  Scalar s{}, t{};
  Scalar m1{}, m2{}, m3{}, m4{};
  Scalar lambda{};
};

template <typename Scalar = double>
Scalar special_case_t() {
  using std::sqrt;
  return sqrt(Scalar(3));
}

template <typename Scalar = double>
Scalar special_case_s() {
  using std::sqrt;
  return Scalar(1) / sqrt(Scalar(3));
}

/// m1 = m2 = m3 = m2, m4 = (8/9) sqrt(3) lambda - (sqrt(3)/3) m2.
/// m4 within eps_sign of zero (relative to (8/9) sqrt(3) lambda) counts as
/// non-positive.
template <typename Scalar>
SpecialCaseSolution<Scalar> solve_q4_centered(const Scalar& lambda, const Scalar& m2,
                                              const Scalar& eps_sign = Scalar(kDefaultEpsSign)) {
  using std::sqrt;
  if (!detail::is_finite(lambda) || !(lambda > Scalar(0)))
    throw InvalidInput("lambda must be a finite positive number");
  if (!detail::is_finite(m2) || !(m2 > Scalar(0)))
    throw InvalidInput("m2 must be a finite positive number");

  // (8/9) sqrt3 lambda - (sqrt3/3) m2 = (sqrt3/9)(8 lambda - 3 m2)
  const Scalar excess = Scalar(8) * lambda - Scalar(3) * m2;
  if (excess <= eps_sign * Scalar(8) * lambda) {
    throw InfeasibleMass("m4 = (8/9)sqrt(3)lambda - (sqrt(3)/3)m2 is not positive; need m2 < 8 lambda / 3");
  }
  SpecialCaseSolution<Scalar> out;
  out.t = special_case_t<Scalar>();
  out.s = special_case_s<Scalar>();
  out.m1 = out.m2 = out.m3 = m2;
  out.m4 = sqrt(Scalar(3)) / Scalar(9) * excess;
  out.lambda = lambda;
  return out;
}

/// Inverse of solve_q4_centered for the multiplier:
///   lambda = 9/(8 sqrt3) (m4 + (sqrt3/3) m2).
template <typename Scalar>
Scalar lambda_for_target_m4(const Scalar& m2, const Scalar& m4_target) {
  using std::sqrt;
  if (!detail::is_finite(m2) || !(m2 > Scalar(0)))
    throw InvalidInput("m2 must be a finite positive number");
  if (!detail::is_finite(m4_target) || !(m4_target > Scalar(0)))
    throw InvalidInput("target m4 must be a finite positive number");
  const Scalar sqrt3 = sqrt(Scalar(3));
  return Scalar(9) / (Scalar(8) * sqrt3) * (m4_target + sqrt3 / Scalar(3) * m2);
}

}  // namespace cc4
