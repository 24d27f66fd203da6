#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcmsim::stats {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kPiLocal = 3.14159265358979323846;

struct Sample {
  std::vector<double> values;
  std::string label;
};

// ---------------------------------------------------------------------------
// special functions

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

/// Inverse standard normal CDF by bisection on erfc; exact enough for the
/// order-statistic weights used here and free of magic constants.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0,1)");
  double lo = -12.0, hi = 12.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < p) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {
// Continued fraction for the incomplete beta (modified Lentz evaluation).
inline double betacf(double a, double b, double x) {
  constexpr double eps = 3e-16;
  constexpr double fpmin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}
}  // namespace detail

/// Regularized incomplete beta I_x(a,b) via continued fraction.
inline double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0 && b > 0.0))
    throw std::invalid_argument("regularized_incomplete_beta: a and b must be > 0");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("regularized_incomplete_beta: x must be in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = a * std::log(x) + b * std::log1p(-x) +
                          std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
  return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

/// Two-tailed p for Student's t with df degrees of freedom.
inline double student_t_two_tailed(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t_two_tailed: df must be > 0");
  if (std::isinf(t)) return 0.0;
  return regularized_incomplete_beta(df / (df + t * t), 0.5 * df, 0.5);
}

/// Upper-tail p for an F statistic.
inline double f_upper_tail(double f, double df1, double df2) {
  if (!(df1 > 0.0 && df2 > 0.0)) throw std::invalid_argument("f_upper_tail: df must be > 0");
  if (f <= 0.0) return 1.0;
  return regularized_incomplete_beta(df2 / (df2 + df1 * f), 0.5 * df2, 0.5 * df1);
}

// ---------------------------------------------------------------------------
// descriptives

struct Descriptives {
  double mean = kNaN;
  double sd = kNaN;  // n-1 denominator; NaN when n < 2
  double median = kNaN;
  double q1 = kNaN;
  double q3 = kNaN;
  double min = kNaN;
  double max = kNaN;
  int n = 0;
  bool sd_defined = false;
};

/// Linear-interpolation (type-7) quantile of already sorted data.
inline double quantile_type7(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
  const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const auto hi = static_cast<size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline Descriptives describe(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("describe: empty sample");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("describe: non-finite value");
  Descriptives d;
  d.n = static_cast<int>(values.size());
  d.mean = std::accumulate(values.begin(), values.end(), 0.0) / d.n;
  if (d.n >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - d.mean) * (v - d.mean);
    d.sd = std::sqrt(ss / (d.n - 1));
    d.sd_defined = true;
  }
  std::vector<double> s = values;
  std::sort(s.begin(), s.end());
  d.min = s.front();
  d.max = s.back();
  d.median = quantile_type7(s, 0.5);
  d.q1 = quantile_type7(s, 0.25);
  d.q3 = quantile_type7(s, 0.75);
  return d;
}

// ---------------------------------------------------------------------------
// hypothesis tests

struct TestResult {
  std::string name;
  double statistic = kNaN;
  double df1 = kNaN;  // NaN where not applicable
  double df2 = kNaN;
  double p_value = kNaN;
  bool exact = false;
  bool degenerate = false;
  std::string note;
};

inline TestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_t_test: length mismatch");
  const int n = static_cast<int>(a.size());
  if (n < 2) throw std::invalid_argument("paired_t_test: need at least 2 pairs");

  double mean_d = 0.0;
  for (int i = 0; i < n; ++i) mean_d += a[i] - b[i];
  mean_d /= n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - mean_d;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (n - 1));

  TestResult r;
  r.name = "paired_t";
  r.df1 = n - 1;
  if (sd == 0.0) {
    r.degenerate = true;
    r.note = "zero variance of differences";
    r.statistic = mean_d == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), mean_d);
    r.p_value = mean_d == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.statistic = mean_d / (sd / std::sqrt(static_cast<double>(n)));
  r.p_value = student_t_two_tailed(r.statistic, r.df1);
  return r;
}

namespace detail {
/// Mid-ranks of |values|; also returns tie-group sizes for variance
/// corrections.
inline std::vector<double> midranks(const std::vector<double>& values,
                                    std::vector<int>* tie_sizes = nullptr) {
  const int n = static_cast<int>(values.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return values[i] < values[j]; });
  std::vector<double> ranks(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double r = 0.5 * (i + j) + 1.0;  // average of ranks i+1..j+1
    for (int k = i; k <= j; ++k) ranks[idx[k]] = r;
    if (tie_sizes && j > i) tie_sizes->push_back(j - i + 1);
    i = j + 1;
  }
  return ranks;
}

/// Distribution of 2*W+ under random signs, as counts indexed by the doubled
/// statistic (mid-ranks live on a half-integer grid).
inline std::vector<double> signed_rank_null_counts(const std::vector<int>& doubled_ranks) {
  int total = 0;
  for (int r : doubled_ranks) total += r;
  std::vector<double> counts(total + 1, 0.0);
  counts[0] = 1.0;
  int reach = 0;
  for (int r : doubled_ranks) {
    for (int s = reach; s >= 0; --s)
      if (counts[s] != 0.0) counts[s + r] += counts[s];
    reach += r;
  }
  return counts;
}
}  // namespace detail

/// Wilcoxon signed-rank test on paired samples. Zero differences are
/// dropped; ties get mid-ranks. Exact null distribution for n <= 20,
/// normal approximation with continuity and tie corrections above that.
/// Reports W+ as the statistic.
inline TestResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("wilcoxon_signed_rank: length mismatch");
  std::vector<double> diffs;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back(d);
  }
  const int n = static_cast<int>(diffs.size());
  if (n == 0) throw std::invalid_argument("wilcoxon_signed_rank: all differences are zero");
  if (n < 5)
    throw std::invalid_argument("wilcoxon_signed_rank: need at least 5 nonzero differences");

  std::vector<double> abs_d(diffs.size());
  std::transform(diffs.begin(), diffs.end(), abs_d.begin(), [](double d) { return std::abs(d); });
  std::vector<int> tie_sizes;
  const std::vector<double> ranks = detail::midranks(abs_d, &tie_sizes);

  double w_plus = 0.0;
  for (int i = 0; i < n; ++i)
    if (diffs[i] > 0.0) w_plus += ranks[i];

  TestResult r;
  r.name = "wilcoxon_signed_rank";
  r.statistic = w_plus;
  if (n <= 20) {
    std::vector<int> doubled(n);
    for (int i = 0; i < n; ++i) doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
    const std::vector<double> counts = detail::signed_rank_null_counts(doubled);
    const double total = std::pow(2.0, n);
    const int obs = static_cast<int>(std::lround(2.0 * w_plus));
    double le = 0.0, ge = 0.0;
    for (int s = 0; s < static_cast<int>(counts.size()); ++s) {
      if (s <= obs) le += counts[s];
      if (s >= obs) ge += counts[s];
    }
    r.p_value = std::min(1.0, 2.0 * std::min(le, ge) / total);
    r.exact = true;
  } else {
    const double mu = n * (n + 1) / 4.0;
    double tie_term = 0.0;
    for (int t : tie_sizes) tie_term += static_cast<double>(t) * t * t - t;
    const double sigma = std::sqrt(n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0);
    if (sigma == 0.0) {
      r.degenerate = true;
      r.note = "degenerate null variance";
      r.p_value = 1.0;
      return r;
    }
    const double d = w_plus - mu;
    const double z = (d - std::copysign(std::min(0.5, std::abs(d)), d)) / sigma;
    r.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
    r.exact = false;
  }
  return r;
}

namespace detail {
/// Exact null distribution of 2*U1 for group sizes (n1, n2) over the observed
/// doubled pooled ranks; dynamic program over (taken, sum).
inline std::vector<std::vector<double>> mann_whitney_null_counts(
    const std::vector<int>& doubled_ranks, int n1) {
  int total = 0;
  for (int r : doubled_ranks) total += r;
  std::vector<std::vector<double>> counts(n1 + 1, std::vector<double>(total + 1, 0.0));
  counts[0][0] = 1.0;
  for (int r : doubled_ranks)
    for (int k = n1; k >= 1; --k)
      for (int s = total - r; s >= 0; --s)
        if (counts[k - 1][s] != 0.0) counts[k][s + r] += counts[k - 1][s];
  return counts;
}
}  // namespace detail

/// Mann-Whitney U (two-sample Wilcoxon rank-sum), two-sided. Exact
/// enumeration when n1 + n2 <= 12, tie-corrected normal approximation with
/// continuity correction otherwise. Reports U for the first sample.
inline TestResult mann_whitney_u(const std::vector<double>& x, const std::vector<double>& y) {
  const int n1 = static_cast<int>(x.size());
  const int n2 = static_cast<int>(y.size());
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("mann_whitney_u: empty group");
  if (n1 < 3 || n2 < 3) throw std::invalid_argument("mann_whitney_u: need at least 3 per group");

  std::vector<double> pooled = x;
  pooled.insert(pooled.end(), y.begin(), y.end());
  std::vector<int> tie_sizes;
  const std::vector<double> ranks = detail::midranks(pooled, &tie_sizes);
  double r1 = 0.0;
  for (int i = 0; i < n1; ++i) r1 += ranks[i];
  const double u1 = r1 - n1 * (n1 + 1) / 2.0;

  TestResult r;
  r.name = "mann_whitney_u";
  r.statistic = u1;
  const int n = n1 + n2;
  if (n <= 12) {
    std::vector<int> doubled(n);
    for (int i = 0; i < n; ++i) doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
    const auto counts = detail::mann_whitney_null_counts(doubled, n1);
    const int min_r2 = n1 * (n1 + 1);  // doubled minimal rank sum
    const int obs = static_cast<int>(std::lround(2.0 * r1)) - min_r2;
    double le = 0.0, ge = 0.0, total = 0.0;
    const auto& row = counts[n1];
    for (int s = 0; s < static_cast<int>(row.size()); ++s) {
      if (row[s] == 0.0) continue;
      total += row[s];
      if (s - min_r2 <= obs) le += row[s];
      if (s - min_r2 >= obs) ge += row[s];
    }
    r.p_value = std::min(1.0, 2.0 * std::min(le, ge) / total);
    r.exact = true;
  } else {
    const double mu = n1 * static_cast<double>(n2) / 2.0;
    double tie_term = 0.0;
    for (int t : tie_sizes) tie_term += static_cast<double>(t) * t * t - t;
    const double var =
        (n1 * static_cast<double>(n2) / 12.0) * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (var <= 0.0) {
      r.degenerate = true;
      r.note = "all pooled values tied";
      r.p_value = 1.0;
      return r;
    }
    const double d = u1 - mu;
    const double z = (d - std::copysign(std::min(0.5, std::abs(d)), d)) / std::sqrt(var);
    r.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
    r.exact = false;
  }
  return r;
}

/// Shapiro-Wilk normality test, AS R94 approximation (Royston 1995);
/// supported for 3 <= n <= 50.
inline TestResult shapiro_wilk(const std::vector<double>& x_in) {
  const int n = static_cast<int>(x_in.size());
  if (n < 3 || n > 50) throw std::invalid_argument("shapiro_wilk: n must be in [3, 50]");
  std::vector<double> x = x_in;
  std::sort(x.begin(), x.end());
  if (x.front() == x.back()) throw std::invalid_argument("shapiro_wilk: zero variance");

  std::vector<double> m(n);
  double ssumm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    m[i] = normal_quantile((i + 1 - 0.375) / (n + 0.25));
    ssumm2 += m[i] * m[i];
  }

  auto poly = [](const double* c, int k, double v) {
    double acc = 0.0, p = 1.0;
    for (int i = 0; i < k; ++i) {
      acc += c[i] * p;
      p *= v;
    }
    return acc;
  };
  static constexpr double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static constexpr double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};

  std::vector<double> a(n, 0.0);
  if (n == 3) {
    a[0] = -std::sqrt(0.5);
    a[2] = std::sqrt(0.5);
  } else {
    const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
    const double norm = std::sqrt(ssumm2);
    const double an = m[n - 1] / norm + poly(c1, 6, rsn);
    if (n > 5) {
      const double an1 = m[n - 2] / norm + poly(c2, 6, rsn);
      const double phi = (ssumm2 - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
                         (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
      for (int i = 2; i < n - 2; ++i) a[i] = m[i] / std::sqrt(phi);
      a[n - 1] = an;
      a[n - 2] = an1;
      a[0] = -an;
      a[1] = -an1;
    } else {
      const double phi = (ssumm2 - 2.0 * m[n - 1] * m[n - 1]) / (1.0 - 2.0 * an * an);
      for (int i = 1; i < n - 1; ++i) a[i] = m[i] / std::sqrt(phi);
      a[n - 1] = an;
      a[0] = -an;
    }
  }

  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += a[i] * x[i];
    den += (x[i] - mean) * (x[i] - mean);
  }
  const double w = num * num / den;

  TestResult r;
  r.name = "shapiro_wilk";
  r.statistic = w;
  r.df1 = n;
  if (n == 3) {
    const double p = 6.0 / kPiLocal * (std::asin(std::sqrt(w)) - std::asin(std::sqrt(0.75)));
    r.p_value = std::clamp(p, 0.0, 1.0);
    r.exact = true;
    return r;
  }
  double z;
  if (n <= 11) {
    const double g = -2.273 + 0.459 * n;
    const double mu = 0.5440 - 0.39978 * n + 0.025054 * n * n - 0.0006714 * n * n * n;
    const double sig = std::exp(1.3822 - 0.77857 * n + 0.062767 * n * n - 0.0020322 * n * n * n);
    z = (-std::log(g - std::log1p(-w)) - mu) / sig;
  } else {
    const double u = std::log(static_cast<double>(n));
    const double mu = -1.5861 - 0.31082 * u - 0.083751 * u * u + 0.0038915 * u * u * u;
    const double sig = std::exp(-0.4803 - 0.082676 * u + 0.0030302 * u * u);
    z = (std::log1p(-w) - mu) / sig;
  }
  r.p_value = normal_sf(z);
  return r;
}

// ---------------------------------------------------------------------------
// two-way ANOVA (condition x angle band), cell-mean sums of squares

struct AnovaRecord {
  double value = 0.0;
  int level_a = 0;  // factor A index
  int level_b = 0;  // factor B index
};

struct AnovaResult {
  TestResult factor_a;
  TestResult factor_b;
  TestResult interaction;
  double ss_a = 0.0, ss_b = 0.0, ss_ab = 0.0, ss_error = 0.0;
};

inline AnovaResult two_way_anova(const std::vector<AnovaRecord>& records, int levels_a,
                                 int levels_b) {
  if (levels_a < 2 || levels_b < 2) throw std::invalid_argument("two_way_anova: need >= 2 levels");
  const int n = static_cast<int>(records.size());
  std::vector<std::vector<std::vector<double>>> cells(
      levels_a, std::vector<std::vector<double>>(levels_b));
  for (const auto& rec : records) {
    if (rec.level_a < 0 || rec.level_a >= levels_a || rec.level_b < 0 || rec.level_b >= levels_b)
      throw std::invalid_argument("two_way_anova: level index out of range");
    cells[rec.level_a][rec.level_b].push_back(rec.value);
  }
  for (int ia = 0; ia < levels_a; ++ia)
    for (int ib = 0; ib < levels_b; ++ib)
      if (cells[ia][ib].size() < 2)
        throw std::invalid_argument("two_way_anova: empty or singleton cell (" +
                                    std::to_string(ia) + "," + std::to_string(ib) + ")");

  double grand = 0.0;
  for (const auto& rec : records) grand += rec.value;
  grand /= n;

  std::vector<double> mean_a(levels_a, 0.0), cnt_a(levels_a, 0.0);
  std::vector<double> mean_b(levels_b, 0.0), cnt_b(levels_b, 0.0);
  for (const auto& rec : records) {
    mean_a[rec.level_a] += rec.value;
    cnt_a[rec.level_a] += 1.0;
    mean_b[rec.level_b] += rec.value;
    cnt_b[rec.level_b] += 1.0;
  }
  for (int i = 0; i < levels_a; ++i) mean_a[i] /= cnt_a[i];
  for (int i = 0; i < levels_b; ++i) mean_b[i] /= cnt_b[i];

  AnovaResult out;
  for (int i = 0; i < levels_a; ++i) out.ss_a += cnt_a[i] * (mean_a[i] - grand) * (mean_a[i] - grand);
  for (int i = 0; i < levels_b; ++i) out.ss_b += cnt_b[i] * (mean_b[i] - grand) * (mean_b[i] - grand);
  for (int ia = 0; ia < levels_a; ++ia) {
    for (int ib = 0; ib < levels_b; ++ib) {
      const auto& cell = cells[ia][ib];
      double cm = std::accumulate(cell.begin(), cell.end(), 0.0) / cell.size();
      const double dev = cm - mean_a[ia] - mean_b[ib] + grand;
      out.ss_ab += cell.size() * dev * dev;
      for (double v : cell) out.ss_error += (v - cm) * (v - cm);
    }
  }

  const double df_a = levels_a - 1.0;
  const double df_b = levels_b - 1.0;
  const double df_ab = df_a * df_b;
  const double df_e = n - levels_a * static_cast<double>(levels_b);
  const double ms_e = out.ss_error / df_e;

  auto make = [&](const char* name, double ss, double df) {
    TestResult t;
    t.name = name;
    t.df1 = df;
    t.df2 = df_e;
    if (ms_e == 0.0) {
      t.statistic = ss == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      t.p_value = ss == 0.0 ? 1.0 : 0.0;
      t.degenerate = true;
      t.note = "zero error mean square";
      return t;
    }
    t.statistic = (ss / df) / ms_e;
    t.p_value = f_upper_tail(t.statistic, df, df_e);
    return t;
  };
  out.factor_a = make("anova_condition", out.ss_a, df_a);
  out.factor_b = make("anova_angle_band", out.ss_b, df_b);
  out.interaction = make("anova_interaction", out.ss_ab, df_ab);
  return out;
}

// ---------------------------------------------------------------------------
// kernel density estimation

/// Silverman's rule: 0.9 * min(sd, IQR/1.34) * n^(-1/5).
inline double silverman_bandwidth(const std::vector<double>& values) {
  const Descriptives d = describe(values);
  if (d.n < 2 || !d.sd_defined || d.sd == 0.0)
    throw std::invalid_argument("silverman_bandwidth: degenerate sample");
  const double iqr = d.q3 - d.q1;
  double spread = d.sd;
  if (iqr > 0.0) spread = std::min(d.sd, iqr / 1.34);
  return 0.9 * spread * std::pow(static_cast<double>(d.n), -0.2);
}

/// Gaussian-kernel density evaluated on a caller-supplied grid.
inline std::vector<double> kde_density(const std::vector<double>& values,
                                       const std::vector<double>& grid) {
  const double h = silverman_bandwidth(values);
  const double norm = 1.0 / (values.size() * h * std::sqrt(2.0 * kPiLocal));
  std::vector<double> density(grid.size(), 0.0);
  for (size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (double v : values) {
      const double u = (grid[g] - v) / h;
      acc += std::exp(-0.5 * u * u);
    }
    density[g] = acc * norm;
  }
  return density;
}

/// Evenly spaced evaluation grid covering the sample plus a margin of
/// several bandwidths, so the density mass is fully captured.
inline std::vector<double> kde_grid(const std::vector<double>& values, int points = 256) {
  const double h = silverman_bandwidth(values);
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn - 5.0 * h;
  const double hi = *mx + 5.0 * h;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return grid;
}

}  // namespace rcmsim::stats
