#include "fbt/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"

namespace fbt::stats {

namespace {

// Shapiro & Wilk (1965), coefficients a_{n-i+1} for n = 3..20.
constexpr std::array<double, 1> kSw3 = {0.7071};
constexpr std::array<double, 2> kSw4 = {0.6872, 0.1677};
constexpr std::array<double, 2> kSw5 = {0.6646, 0.2413};
constexpr std::array<double, 3> kSw6 = {0.6431, 0.2806, 0.0875};
constexpr std::array<double, 3> kSw7 = {0.6233, 0.3031, 0.1401};
constexpr std::array<double, 4> kSw8 = {0.6052, 0.3164, 0.1743, 0.0561};
constexpr std::array<double, 4> kSw9 = {0.5888, 0.3244, 0.1976, 0.0947};
constexpr std::array<double, 5> kSw10 = {0.5739, 0.3291, 0.2141, 0.1224,
                                         0.0399};
constexpr std::array<double, 5> kSw11 = {0.5601, 0.3315, 0.2260, 0.1429,
                                         0.0695};
constexpr std::array<double, 6> kSw12 = {0.5475, 0.3325, 0.2347,
                                         0.1586, 0.0922, 0.0303};
constexpr std::array<double, 6> kSw13 = {0.5359, 0.3325, 0.2412,
                                         0.1707, 0.1099, 0.0539};
constexpr std::array<double, 7> kSw14 = {0.5251, 0.3318, 0.2460, 0.1802,
                                         0.1240, 0.0727, 0.0240};
constexpr std::array<double, 7> kSw15 = {0.5150, 0.3306, 0.2495, 0.1878,
                                         0.1353, 0.0880, 0.0433};
constexpr std::array<double, 8> kSw16 = {0.5056, 0.3290, 0.2521, 0.1939,
                                         0.1447, 0.1005, 0.0593, 0.0196};
constexpr std::array<double, 8> kSw17 = {0.4968, 0.3273, 0.2540, 0.1988,
                                         0.1524, 0.1109, 0.0725, 0.0359};
constexpr std::array<double, 9> kSw18 = {0.4886, 0.3253, 0.2553,
                                         0.2027, 0.1587, 0.1197,
                                         0.0837, 0.0496, 0.0163};
constexpr std::array<double, 9> kSw19 = {0.4808, 0.3232, 0.2561,
                                         0.2059, 0.1641, 0.1271,
                                         0.0932, 0.0612, 0.0303};
constexpr std::array<double, 10> kSw20 = {0.4734, 0.3211, 0.2565, 0.2085,
                                          0.1686, 0.1334, 0.1013, 0.0711,
                                          0.0422, 0.0140};

double log_beta_prefactor(double x, double a, double b) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
         a * std::log(x) + b * std::log1p(-x);
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 10000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw StatsError("incomplete beta: continued fraction did not converge");
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double binomial(std::size_t n, std::size_t k) {
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

// Midranks of the pooled sample (1-based), same order as the input.
std::vector<double> midranks(const std::vector<double>& pooled) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return pooled[i] < pooled[j];
  });
  std::vector<double> ranks(pooled.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::span<const double> shapiro_wilk_coefficients(std::size_t n) {
  switch (n) {
    case 3: return kSw3;
    case 4: return kSw4;
    case 5: return kSw5;
    case 6: return kSw6;
    case 7: return kSw7;
    case 8: return kSw8;
    case 9: return kSw9;
    case 10: return kSw10;
    case 11: return kSw11;
    case 12: return kSw12;
    case 13: return kSw13;
    case 14: return kSw14;
    case 15: return kSw15;
    case 16: return kSw16;
    case 17: return kSw17;
    case 18: return kSw18;
    case 19: return kSw19;
    case 20: return kSw20;
    default:
      throw StatsError("shapiro_wilk: sample size must be in 3..20, got " +
                       std::to_string(n));
  }
}

TestResult shapiro_wilk(std::span<const double> sample) {
  const std::size_t n = sample.size();
  const auto coeffs = shapiro_wilk_coefficients(n);
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  if (!(ss > 0.0) || x.front() == x.back()) {
    throw StatsError("shapiro_wilk: zero variance");
  }
  // The 4-decimal table is not exactly unit length; normalising keeps W <= 1.
  double norm2 = 0.0;
  for (double a : coeffs) norm2 += 2.0 * a * a;
  const double scale = 1.0 / std::sqrt(norm2);
  double b = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    b += coeffs[i] * scale * (x[n - 1 - i] - x[i]);
  }
  TestResult r;
  r.statistic = "W";
  r.value = std::min(1.0, b * b / ss);
  r.method = Method::Exact;
  return r;
}

TestResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw StatsError("anova: need at least two groups");
  std::size_t total = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw StatsError("anova: every group needs >= 2 values");
    total += g.size();
    grand += std::accumulate(g.begin(), g.end(), 0.0);
  }
  grand /= static_cast<double>(total);

  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& g : groups) {
    const double mean =
        std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    ssb += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (double v : g) ssw += (v - mean) * (v - mean);
  }
  const double df_between = static_cast<double>(groups.size() - 1);
  const double df_within = static_cast<double>(total - groups.size());

  // Rounding noise in the group means can leave a residue in either sum.
  double spread = 0.0;
  for (const auto& g : groups) {
    for (double v : g) spread += (v - grand) * (v - grand);
  }
  const double noise = 1e-13 * spread;
  if (ssb <= noise) ssb = 0.0;
  if (ssw <= noise) ssw = 0.0;

  TestResult r;
  r.statistic = "F";
  r.df = std::make_pair(df_between, df_within);
  r.method = Method::Exact;
  if (ssw == 0.0) {
    if (ssb > 0.0) {
      throw StatsError(
          "anova: zero within-group variance with between-group differences");
    }
    r.value = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.value = (ssb / df_between) / (ssw / df_within);
  r.p_value = f_distribution_sf(r.value, df_between, df_within);
  return r;
}

double mann_whitney_u_a(std::span<const double> a, std::span<const double> b) {
  double u = 0.0;
  for (double x : a) {
    for (double y : b) {
      if (x > y) {
        u += 1.0;
      } else if (x == y) {
        u += 0.5;
      }
    }
  }
  return u;
}

TestResult mann_whitney(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw StatsError("mann_whitney: empty sample");
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  const double mn = static_cast<double>(m) * static_cast<double>(n);
  const double u_a = mann_whitney_u_a(a, b);
  const double u = std::min(u_a, mn - u_a);

  TestResult r;
  r.statistic = "U";
  r.value = u;

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t total = m + n;
  const std::vector<double> ranks = midranks(pooled);

  if (binomial(total, m) <= kExactEnumerationLimit) {
    // U_a = R_a - m(m+1)/2 for every assignment of m pooled ranks to a.
    const double offset = 0.5 * static_cast<double>(m) * (m + 1);
    const double tol = 1e-9;
    std::vector<std::size_t> pick(m);
    std::iota(pick.begin(), pick.end(), 0);
    std::size_t hits = 0;
    std::size_t count = 0;
    while (true) {
      double rsum = 0.0;
      for (std::size_t i : pick) rsum += ranks[i];
      const double ua = rsum - offset;
      if (std::min(ua, mn - ua) <= u + tol) ++hits;
      ++count;
      // next combination in lexicographic order
      std::size_t i = m;
      while (i > 0 && pick[i - 1] == total - m + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }
    r.p_value = std::min(1.0, static_cast<double>(hits) / static_cast<double>(count));
    r.method = Method::Exact;
    return r;
  }

  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    i = j;
  }
  const double big_n = static_cast<double>(total);
  const double var = mn / 12.0 * ((big_n + 1.0) - tie_sum / (big_n * (big_n - 1.0)));
  r.method = Method::Approximate;
  if (!(var > 0.0)) {
    r.p_value = 1.0;
    return r;
  }
  const double z = std::max(0.0, std::fabs(u_a - 0.5 * mn) - 0.5) / std::sqrt(var);
  r.p_value = std::min(1.0, 2.0 * normal_sf(z));
  return r;
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw StatsError("incomplete beta: x must lie in [0, 1]");
  }
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw StatsError("incomplete beta: a and b must be positive");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x > (a + 1.0) / (a + b + 2.0)) {
    return 1.0 - regularized_incomplete_beta(1.0 - x, b, a);
  }
  const double front = std::exp(log_beta_prefactor(x, a, b)) / a;
  return std::clamp(front * beta_continued_fraction(x, a, b), 0.0, 1.0);
}

double f_distribution_sf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw StatsError("F distribution: degrees of freedom must be positive");
  }
  if (!(f > 0.0)) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(d2 / (d2 + d1 * f), 0.5 * d2, 0.5 * d1);
}

std::string to_json(const TestResult& r) {
  nlohmann::ordered_json j;
  j["statistic"] = r.statistic;
  j["value"] = r.value;
  j["df"] = r.df ? nlohmann::ordered_json::array({r.df->first, r.df->second})
                 : nlohmann::ordered_json(nullptr);
  j["p_value"] = r.p_value ? nlohmann::ordered_json(*r.p_value)
                           : nlohmann::ordered_json(nullptr);
  j["method"] = r.method == Method::Exact ? "exact" : "approximate";
  return j.dump();
}

}  // namespace fbt::stats
