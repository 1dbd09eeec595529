#include "sharp/statval.hpp"

#include "sharp/riskcore.hpp"

#include <boost/random/uniform_int_distribution.hpp>

#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

namespace sharp {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double beta_fraction(double a, double b, double x) {
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

void require_same_length(std::span<const double> x, std::span<const double> y, std::size_t min_n,
                         const char* what) {
  if (x.size() != y.size())
    throw std::invalid_argument(std::string(what) + ": inputs differ in length");
  if (x.size() < min_n)
    throw std::invalid_argument(std::string(what) + ": need at least " + std::to_string(min_n) +
                                " observations");
}

// Counts strict inversions of v[lo, hi) while merge-sorting it.
std::int64_t count_inversions(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                              std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

struct KendallCounts {
  std::int64_t n0, n1, n2, n3, discordant;
  double tau;
};

KendallCounts kendall_counts(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  KendallCounts c{};
  c.n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const auto t = static_cast<std::int64_t>(j - i + 1);
    c.n1 += t * (t - 1) / 2;
    for (std::size_t u = i; u <= j;) {
      std::size_t v = u;
      while (v + 1 <= j && y[order[v + 1]] == y[order[u]]) ++v;
      const auto w = static_cast<std::int64_t>(v - u + 1);
      c.n3 += w * (w - 1) / 2;
      u = v + 1;
    }
    i = j + 1;
  }

  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  c.discordant = count_inversions(ys, buf, 0, n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && ys[j + 1] == ys[i]) ++j;
    const auto t = static_cast<std::int64_t>(j - i + 1);
    c.n2 += t * (t - 1) / 2;
    i = j + 1;
  }

  const double denom = std::sqrt(static_cast<double>(c.n0 - c.n1) * static_cast<double>(c.n0 - c.n2));
  if (!(denom > 0.0)) throw DegenerateError("kendall_tau_b: input is entirely tied");
  const auto numer = c.n0 - c.n1 - c.n2 + c.n3 - 2 * c.discordant;
  c.tau = std::clamp(static_cast<double>(numer) / denom, -1.0, 1.0);
  return c;
}

// P(I <= c) for the number of inversions I of a uniform random permutation of n.
double inversion_cdf(Index n, std::int64_t c) {
  std::vector<double> dist{1.0};
  for (Index m = 2; m <= n; ++m) {
    const std::size_t size = dist.size() + static_cast<std::size_t>(m - 1);
    std::vector<double> prefix(dist.size() + 1, 0.0);
    for (std::size_t i = 0; i < dist.size(); ++i) prefix[i + 1] = prefix[i] + dist[i];
    std::vector<double> next(size, 0.0);
    for (std::size_t k = 0; k < size; ++k) {
      const std::size_t hi = std::min(k, dist.size() - 1);
      const std::size_t lo = k >= static_cast<std::size_t>(m - 1) ? k - static_cast<std::size_t>(m - 1) : 0;
      if (lo <= hi) next[k] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(m);
    }
    dist = std::move(next);
  }
  double cdf = 0.0;
  for (std::int64_t k = 0; k <= c && k < static_cast<std::int64_t>(dist.size()); ++k)
    cdf += dist[static_cast<std::size_t>(k)];
  return cdf;
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double saa = da.square().sum();
  const double sbb = db.square().sum();
  if (!(saa > 0.0) || !(sbb > 0.0)) throw DegenerateError("spearman_rho: constant input");
  return std::clamp((da * db).sum() / std::sqrt(saa * sbb), -1.0, 1.0);
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> s) {
  return {s.data(), static_cast<Index>(s.size())};
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) throw std::invalid_argument("gamma_q: invalid argument");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double beta_i(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || x < 0.0 || x > 1.0) throw std::invalid_argument("beta_i: invalid argument");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("chi_square_sf: df must be positive");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * x);
}

double student_t_sf(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t_sf: df must be positive");
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  const double two_sided = beta_i(0.5 * df, 0.5, df / (df + t * t));
  return t > 0.0 ? 0.5 * two_sided : 1.0 - 0.5 * two_sided;
}

std::vector<Index> tie_groups(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  std::vector<Index> groups;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    if (j > i) groups.push_back(static_cast<Index>(j - i + 1));
    i = j + 1;
  }
  return groups;
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 2, "kendall_tau_b");
  return kendall_counts(x, y).tau;
}

CorrelationTest kendall_tau_b_test(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 2, "kendall_tau_b");
  const auto c = kendall_counts(x, y);
  const auto n = static_cast<Index>(x.size());
  CorrelationTest out{c.tau, std::nullopt};

  const auto x_ties = tie_groups(x);
  const auto y_ties = tie_groups(y);
  const std::int64_t dis = c.discordant;
  const std::int64_t reduced = std::min(dis, c.n0 - dis);
  if (x_ties.empty() && y_ties.empty() && (n <= 33 || reduced <= 1)) {
    out.p_value = std::min(1.0, 2.0 * inversion_cdf(n, reduced));
    return out;
  }

  auto sum = [](const std::vector<Index>& g, auto f) {
    double s = 0.0;
    for (Index t : g) s += f(static_cast<double>(t));
    return s;
  };
  const double nd = static_cast<double>(n);
  const double v0 = nd * (nd - 1) * (2 * nd + 5);
  const double vt = sum(x_ties, [](double t) { return t * (t - 1) * (2 * t + 5); });
  const double vu = sum(y_ties, [](double t) { return t * (t - 1) * (2 * t + 5); });
  const double t1 = sum(x_ties, [](double t) { return t * (t - 1); });
  const double u1 = sum(y_ties, [](double t) { return t * (t - 1); });
  const double t2 = sum(x_ties, [](double t) { return t * (t - 1) * (t - 2); });
  const double u2 = sum(y_ties, [](double t) { return t * (t - 1) * (t - 2); });
  double var = (v0 - vt - vu) / 18.0 + t1 * u1 / (2.0 * nd * (nd - 1));
  if (n > 2) var += t2 * u2 / (9.0 * nd * (nd - 1) * (nd - 2));
  const double s = static_cast<double>(c.n0 - c.n1 - c.n2 + c.n3 - 2 * c.discordant);
  if (var > 0.0) out.p_value = std::min(1.0, std::erfc(std::abs(s) / std::sqrt(var) / std::sqrt(2.0)));
  return out;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 2, "spearman_rho");
  return pearson(midranks(as_vector(x)), midranks(as_vector(y)));
}

CorrelationTest spearman_rho_test(std::span<const double> x, std::span<const double> y) {
  const double rho = spearman_rho(x, y);
  CorrelationTest out{rho, std::nullopt};
  const double df = static_cast<double>(x.size()) - 2.0;
  if (df < 1.0) return out;
  if (std::abs(rho) >= 1.0) {
    out.p_value = 0.0;
    return out;
  }
  const double t = rho * std::sqrt(df / (1.0 - rho * rho));
  out.p_value = std::min(1.0, 2.0 * student_t_sf(std::abs(t), df));
  return out;
}

TestResult friedman(const Eigen::Ref<const Eigen::MatrixXd>& L) {
  const Index n = L.rows(), k = L.cols();
  if (n < 2 || k < 2) throw std::invalid_argument("friedman: need n >= 2 blocks and k >= 2 treatments");
  if (!L.allFinite()) throw std::invalid_argument("friedman: missing or non-finite cells");

  Eigen::VectorXd rank_sums = Eigen::VectorXd::Zero(k);
  double tie_term = 0.0;
  for (Index q = 0; q < n; ++q) {
    const Eigen::VectorXd row = L.row(q).transpose();
    rank_sums += midranks(row);
    for (Index t : tie_groups(as_span(row))) {
      const double td = static_cast<double>(t);
      tie_term += td * td * td - td;
    }
  }

  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  TestResult r;
  r.name = "friedman";
  r.df = kd - 1.0;
  r.mean_ranks = rank_sums / nd;
  const double numer = 12.0 / (nd * kd * (kd + 1.0)) * rank_sums.squaredNorm() - 3.0 * nd * (kd + 1.0);
  const double correction = 1.0 - tie_term / (nd * kd * (kd * kd - 1.0));
  if (correction <= 1e-12) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.effect_size = 0.0;
    r.degenerate = true;
    return r;
  }
  r.statistic = std::max(0.0, numer / correction);
  r.p_value = chi_square_sf(r.statistic, kd - 1.0);
  r.effect_size = std::clamp(kendall_w(r.statistic, L.rows(), L.cols()), 0.0, 1.0);
  return r;
}

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 1, "wilcoxon_signed_rank");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (const double d = x[i] - y[i]; d != 0.0) diffs.push_back(d);

  TestResult r;
  r.name = "wilcoxon_signed_rank";
  r.n_effective = static_cast<Index>(diffs.size());
  if (diffs.empty()) {
    r.degenerate = true;
    r.p_value = 1.0;
    return r;
  }

  Eigen::VectorXd abs_d(r.n_effective);
  for (Index i = 0; i < r.n_effective; ++i) abs_d(i) = std::abs(diffs[static_cast<std::size_t>(i)]);
  const Eigen::VectorXd ranks = midranks(abs_d);
  for (Index i = 0; i < r.n_effective; ++i)
    (diffs[static_cast<std::size_t>(i)] > 0 ? r.w_plus : r.w_minus) += ranks(i);
  r.statistic = std::min(r.w_plus, r.w_minus);

  const double n = static_cast<double>(r.n_effective);
  if (r.n_effective <= kWilcoxonExactMax) {
    // Null distribution of the doubled positive-rank sum over all 2^n sign patterns.
    std::vector<std::int64_t> doubled(static_cast<std::size_t>(r.n_effective));
    std::int64_t total = 0;
    for (Index i = 0; i < r.n_effective; ++i) {
      doubled[static_cast<std::size_t>(i)] = std::llround(2.0 * ranks(i));
      total += doubled[static_cast<std::size_t>(i)];
    }
    std::vector<double> counts(static_cast<std::size_t>(total + 1), 0.0);
    counts[0] = 1.0;
    for (auto w : doubled)
      for (std::int64_t s = total; s >= w; --s) counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - w)];
    const std::int64_t observed = std::llround(2.0 * r.statistic);
    double tail = 0.0;
    for (std::int64_t s = 0; s <= observed; ++s) tail += counts[static_cast<std::size_t>(s)];
    r.p_value = std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(r.n_effective)));
    r.exact = true;
    return r;
  }

  double tie_term = 0.0;
  for (Index t : tie_groups(as_span(abs_d))) {
    const double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double mean = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  const double dev = std::max(0.0, std::abs(r.w_plus - mean) - 0.5);
  r.p_value = var > 0.0 ? std::min(1.0, 2.0 * normal_sf(dev / std::sqrt(var))) : 1.0;
  return r;
}

HolmResult holm_correct(std::span<const double> p_values, double alpha) {
  const std::size_t m = p_values.size();
  for (double p : p_values)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("holm_correct: p-value outside [0,1]");

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  HolmResult out{std::vector<bool>(m, false), Eigen::VectorXd::Zero(static_cast<Index>(m))};
  double running = 0.0;
  bool stepping = true;
  for (std::size_t i = 0; i < m; ++i) {
    const double p = p_values[order[i]];
    const double factor = static_cast<double>(m - i);
    running = std::max(running, std::min(1.0, factor * p));
    out.adjusted(static_cast<Index>(order[i])) = running;
    if (stepping && p <= alpha / factor)
      out.reject[order[i]] = true;
    else
      stepping = false;
  }
  return out;
}

std::vector<PairwiseTest> pairwise_wilcoxon(const Eigen::Ref<const Eigen::MatrixXd>& L, double alpha) {
  std::vector<PairwiseTest> out;
  for (Index a = 0; a < L.cols(); ++a)
    for (Index b = a + 1; b < L.cols(); ++b) {
      const Eigen::VectorXd xa = L.col(a), xb = L.col(b);
      out.push_back({a, b, wilcoxon_signed_rank(as_span(xa), as_span(xb)), 1.0, false});
    }
  std::vector<double> p;
  for (const auto& t : out) p.push_back(t.test.p_value);
  const auto holm = holm_correct(p, alpha);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].adjusted_p = holm.adjusted(static_cast<Index>(i));
    out[i].reject = holm.reject[i];
  }
  return out;
}

VarianceDecomposition variance_decomposition(const Eigen::Ref<const Eigen::MatrixXd>& L) {
  if (L.size() == 0 || !L.allFinite())
    throw std::invalid_argument("variance_decomposition: need a complete finite matrix");
  const double n = static_cast<double>(L.rows()), k = static_cast<double>(L.cols());
  const double grand = L.mean();

  VarianceDecomposition v;
  v.ss_total = (L.array() - grand).square().sum();
  v.ss_model = n * (L.colwise().mean().array() - grand).square().sum();
  v.ss_prompt = k * (L.rowwise().mean().array() - grand).square().sum();
  v.ss_residual = std::max(0.0, v.ss_total - v.ss_model - v.ss_prompt);
  if (!(v.ss_total > 0.0)) {
    v.degenerate = true;
    return v;
  }
  v.eta2_model = v.ss_model / v.ss_total;
  v.eta2_prompt = v.ss_prompt / v.ss_total;
  v.eta2_residual = v.ss_residual / v.ss_total;
  auto partial = [&](double ss) { return partial_eta_squared(ss, v.ss_residual); };
  v.partial_eta2_model = partial(v.ss_model);
  v.partial_eta2_prompt = partial(v.ss_prompt);
  return v;
}

SampleMetric mean_metric() {
  return [](const Eigen::Ref<const Eigen::VectorXd>& x) { return x.mean(); };
}

SampleMetric cvar_metric(double alpha) {
  return [alpha](const Eigen::Ref<const Eigen::VectorXd>& x) { return cvar(x, alpha); };
}

std::vector<Index> bootstrap_indices(std::uint64_t seed, Index replicate, Index n) {
  if (n <= 0) throw std::invalid_argument("bootstrap_indices: empty sample");
  const auto rep = static_cast<std::uint64_t>(replicate);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
  std::mt19937_64 engine(seq);
  boost::random::uniform_int_distribution<Index> pick(0, n - 1);
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (auto& i : idx) i = pick(engine);
  return idx;
}

BootstrapResult paired_bootstrap(const std::string& statistic, const SampleMetric& metric,
                                 const Eigen::Ref<const Eigen::MatrixXd>& L,
                                 const std::vector<std::string>& models, const BootstrapOptions& options) {
  const Index n = L.rows(), k = L.cols();
  if (n == 0 || k == 0) throw std::invalid_argument("paired_bootstrap: empty corpus");
  if (static_cast<Index>(models.size()) != k)
    throw std::invalid_argument("paired_bootstrap: model labels do not match matrix columns");
  if (options.replicates < 1) throw std::invalid_argument("paired_bootstrap: need B >= 1");
  if (!(options.level > 0.0 && options.level < 1.0))
    throw std::invalid_argument("paired_bootstrap: level must lie in (0,1)");

  BootstrapResult res;
  res.statistic = statistic;
  res.models = models;
  res.replicates = options.replicates;
  res.seed = options.seed;
  res.level = options.level;
  res.point.resize(k);
  for (Index m = 0; m < k; ++m) res.point(m) = metric(L.col(m));
  res.draws.resize(options.replicates, k);

  const Index B = options.replicates;
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(B)));
  std::vector<Index> failed_replicate(workers, -1);
  std::vector<std::string> failure(workers);

  auto run = [&](unsigned w) {
    Eigen::VectorXd sample(n);
    for (Index b = w; b < B; b += workers) {
      const auto idx = bootstrap_indices(options.seed, b, n);
      for (Index m = 0; m < k; ++m) {
        for (Index i = 0; i < n; ++i) sample(i) = L(idx[static_cast<std::size_t>(i)], m);
        const double value = metric(sample);
        if (!std::isfinite(value)) {
          failed_replicate[w] = b;
          failure[w] = "paired_bootstrap: non-finite " + statistic + " in replicate " +
                       std::to_string(b) + " for model '" + models[static_cast<std::size_t>(m)] + "'";
          return;
        }
        res.draws(b, m) = value;
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  Index first_bad = -1;
  std::string message;
  for (unsigned w = 0; w < workers; ++w)
    if (failed_replicate[w] >= 0 && (first_bad < 0 || failed_replicate[w] < first_bad)) {
      first_bad = failed_replicate[w];
      message = failure[w];
    }
  if (first_bad >= 0) throw std::runtime_error(message);

  const double lo_q = 0.5 * (1.0 - options.level);
  const double hi_q = 1.0 - lo_q;
  res.lo.resize(k);
  res.hi.resize(k);
  for (Index m = 0; m < k; ++m) {
    res.lo(m) = order_statistic(res.draws.col(m), lo_q);
    res.hi(m) = order_statistic(res.draws.col(m), hi_q);
  }
  for (Index a = 0; a < k; ++a)
    for (Index b = a + 1; b < k; ++b) {
      const Eigen::VectorXd delta = res.draws.col(a) - res.draws.col(b);
      BootstrapPair p{a, b, res.point(a) - res.point(b), order_statistic(delta, lo_q),
                      order_statistic(delta, hi_q), false};
      p.separable = p.lo > 0.0 || p.hi < 0.0;
      res.pairs.push_back(p);
    }
  return res;
}

}  // namespace sharp
