#pragma once

// Brute-force reference implementations. These share no code with the
// library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

/// Piecewise-linear evaluation by scanning every segment.
inline double piecewise_linear(const std::vector<std::pair<double, double>>& pts, double t) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto [t0, v0] = pts[i];
    const auto [t1, v1] = pts[i + 1];
    if (t >= t0 && t <= t1) return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
  }
  return NAN;
}

inline std::size_t bin_of(double v, double lo, double hi, std::size_t bins) {
  auto b = static_cast<std::size_t>((v - lo) * (static_cast<double>(bins) / (hi - lo)));
  return b >= bins ? bins - 1 : b;
}

/// Histogram MI with one counting pass per bin pair.
inline double histogram_mi(const std::vector<double>& x, std::size_t lag, std::size_t bins) {
  const double lo = *std::min_element(x.begin(), x.end());
  const double hi = *std::max_element(x.begin(), x.end());
  const std::size_t n = x.size() - lag;
  double mi = 0.0;
  for (std::size_t a = 0; a < bins; ++a) {
    for (std::size_t b = 0; b < bins; ++b) {
      std::size_t nab = 0, na = 0, nb = 0;
      for (std::size_t t = 0; t < n; ++t) {
        const bool ia = bin_of(x[t], lo, hi, bins) == a;
        const bool ib = bin_of(x[t + lag], lo, hi, bins) == b;
        nab += ia && ib;
        na += ia;
        nb += ib;
      }
      if (nab == 0) continue;
      const double pab = static_cast<double>(nab) / static_cast<double>(n);
      const double pa = static_cast<double>(na) / static_cast<double>(n);
      const double pb = static_cast<double>(nb) / static_cast<double>(n);
      mi += pab * std::log2(pab / (pa * pb));
    }
  }
  return mi;
}

inline double marginal_entropy(const std::vector<double>& x, std::size_t bins) {
  const double lo = *std::min_element(x.begin(), x.end());
  const double hi = *std::max_element(x.begin(), x.end());
  std::map<std::size_t, std::size_t> counts;
  for (double v : x) ++counts[bin_of(v, lo, hi, bins)];
  double h = 0.0;
  for (auto [_, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(x.size());
    h -= p * std::log2(p);
  }
  return h;
}

/// Index-arithmetic embedding: element [k][j] = x[k + j*delay].
inline std::vector<std::vector<double>> embed(const std::vector<double>& x, std::size_t m, std::size_t delay) {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k + (m - 1) * delay < x.size(); ++k) {
    std::vector<double> p;
    for (std::size_t j = 0; j < m; ++j) p.push_back(x[k + j * delay]);
    out.push_back(p);
  }
  return out;
}

/// Full distance matrix then threshold, cell by cell.
inline std::vector<std::vector<bool>> recurrence(const std::vector<std::vector<double>>& pts, double radius) {
  const std::size_t n = pts.size();
  std::vector<std::vector<bool>> rp(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // same summation order as a textbook Euclidean norm
      const auto& a = pts[std::min(i, j)];
      const auto& b = pts[std::max(i, j)];
      double s = 0.0;
      for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
      rp[i][j] = std::sqrt(s) <= radius;
    }
  }
  return rp;
}

struct Rqa {
  double rr, det, lmax, ent, lam, tt;
};

/// Finds every line by its start cell and walks it to the end.
inline Rqa rqa(const std::vector<std::vector<bool>>& rp, std::size_t lmin, std::size_t vmin) {
  const std::size_t n = rp.size();
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) total += rp[i][j];

  std::vector<std::size_t> diag, vert;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && rp[i][j] && (i == 0 || j == 0 || !rp[i - 1][j - 1])) {
        std::size_t len = 0;
        while (i + len < n && j + len < n && rp[i + len][j + len]) ++len;
        if (len >= lmin) diag.push_back(len);
      }
      if (rp[i][j] && (i == 0 || !rp[i - 1][j])) {
        std::size_t len = 0;
        while (i + len < n && rp[i + len][j]) ++len;
        if (len >= vmin) vert.push_back(len);
      }
    }
  }
  Rqa r{};
  r.rr = static_cast<double>(total) / static_cast<double>(n * n);
  std::size_t dsum = 0;
  for (auto l : diag) dsum += l;
  r.det = total == n ? 0.0 : static_cast<double>(dsum) / static_cast<double>(total - n);
  r.lmax = diag.empty() ? 0.0 : static_cast<double>(*std::max_element(diag.begin(), diag.end()));
  std::map<std::size_t, std::size_t> freq;
  for (auto l : diag) ++freq[l];
  for (auto [_, c] : freq) {
    const double p = static_cast<double>(c) / static_cast<double>(diag.size());
    r.ent -= p * std::log2(p);
  }
  std::size_t vsum = 0;
  for (auto l : vert) vsum += l;
  r.lam = static_cast<double>(vsum) / static_cast<double>(total);
  r.tt = vert.empty() ? 0.0 : static_cast<double>(vsum) / static_cast<double>(vert.size());
  return r;
}

/// All-pairs nearest-neighbor FNN on the z-scored series.
inline double fnn(const std::vector<double>& x, std::size_t m, std::size_t delay, double r_tol, double a_tol) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(x.size()));
  std::vector<double> z;
  for (double v : x) z.push_back((v - mean) / sd);

  const std::size_t n = z.size() - m * delay;
  std::size_t tested = 0, bad = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = INFINITY;
    std::size_t nn = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d2 = 0.0;
      for (std::size_t c = 0; c < m; ++c) d2 += std::pow(z[i + c * delay] - z[j + c * delay], 2);
      if (d2 <= 1e-18) continue;
      if (d2 < best) {
        best = d2;
        nn = j;
      }
    }
    if (nn == n) continue;
    ++tested;
    const double extra = std::abs(z[i + m * delay] - z[nn + m * delay]);
    if (extra / std::sqrt(best) > r_tol || std::sqrt(best + extra * extra) > a_tol) ++bad;
  }
  return static_cast<double>(bad) / static_cast<double>(tested);
}

/// MI of a joint count table: sum p log2(p / (p_row p_col)).
inline double table_mi(const std::vector<std::vector<std::size_t>>& t) {
  std::size_t n = 0;
  std::vector<std::size_t> rows(t.size(), 0), cols(t[0].size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      n += t[i][j];
      rows[i] += t[i][j];
      cols[j] += t[i][j];
    }
  double mi = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      if (t[i][j] == 0) continue;
      const double p = static_cast<double>(t[i][j]) / static_cast<double>(n);
      const double pr = static_cast<double>(rows[i]) / static_cast<double>(n);
      const double pc = static_cast<double>(cols[j]) / static_cast<double>(n);
      mi += p * std::log2(p / (pr * pc));
    }
  return mi;
}

/// Equal-frequency bucket via an O(n^2) strictly-smaller count.
inline std::vector<std::size_t> quantile_buckets(const std::vector<double>& x, std::size_t bins) {
  std::vector<std::size_t> out;
  for (double v : x) {
    std::size_t less = 0;
    for (double u : x) less += u < v;
    out.push_back(less * bins / x.size());
  }
  return out;
}

}  // namespace oracle
