#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fbt::stats {

enum class Method : std::uint8_t { Exact, Approximate };

struct TestResult {
  std::string statistic;  // "W", "F" or "U"
  double value = 0.0;
  std::optional<std::pair<double, double>> df;
  std::optional<double> p_value;
  Method method = Method::Exact;
};

class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Shapiro-Wilk W from the published coefficient tables, 3 <= n <= 20.
// Only W is reported.
TestResult shapiro_wilk(std::span<const double> sample);

// Tabulated a_{n-i+1}, i = 1..floor(n/2), as published (4 decimals).
std::span<const double> shapiro_wilk_coefficients(std::size_t n);

// One-way ANOVA; p from the F distribution upper tail.
TestResult anova_oneway(const std::vector<std::vector<double>>& groups);

// Two-sided Mann-Whitney U = min(U_a, U_b). Exact p by enumerating every
// assignment of the pooled (mid)ranks when C(|a|+|b|, |a|) does not exceed
// kExactEnumerationLimit; otherwise tie-corrected normal approximation with
// continuity correction.
inline constexpr double kExactEnumerationLimit = 200000.0;
TestResult mann_whitney(std::span<const double> a, std::span<const double> b);

// U_a = #{a_i > b_j} + 0.5 #{a_i == b_j}.
double mann_whitney_u_a(std::span<const double> a, std::span<const double> b);

// I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double x, double a, double b);

// Upper-tail probability of F(d1, d2) at f.
double f_distribution_sf(double f, double d1, double d2);

std::string to_json(const TestResult& result);

}  // namespace fbt::stats
