#include "kst/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "kst/errors.hpp"
#include "kst/kernels.hpp"
#include "kst/quadext.hpp"

namespace kst {

namespace {

// Per-row evaluation of sum_terms over a fixed x-grid, with phi_k(x_i)
// cached once per term/component.
class RowEngine {
 public:
  RowEngine(std::span<const StageTerm> terms, std::span<const double> xs)
      : terms_(terms), m_(xs.size()) {
    cache_.resize(terms.size() * 5);
    for (size_t t = 0; t < terms.size(); ++t)
      for (int k = 0; k < 5; ++k) {
        auto& col = cache_[t * 5 + k];
        col.resize(m_);
        terms[t].phi[k]->eval_batch(xs, col);
      }
  }

  struct Scratch {
    std::vector<double> args, hv;
  };

  void sum_row(double y, std::span<double> out, Scratch& s) const {
    std::fill(out.begin(), out.end(), 0.0);
    s.args.resize(m_);
    s.hv.resize(m_);
    for (size_t t = 0; t < terms_.size(); ++t) {
      for (int k = 0; k < 5; ++k) {
        const double c = kSqrt2 * terms_[t].phi[k]->eval(y);
        const auto& px = cache_[t * 5 + k];
        for (size_t i = 0; i < m_; ++i) s.args[i] = px[i] + c;
        terms_[t].h->eval_batch(s.args, s.hv);
        kernels::add_assign(out.data(), s.hv.data(), m_);
      }
    }
  }

  size_t width() const { return m_; }

 private:
  std::span<const StageTerm> terms_;
  size_t m_;
  std::vector<std::vector<double>> cache_;
};

int clamp_threads(int threads, long rows) {
  int t = threads > 0 ? threads : scan_threads();
  t = std::clamp<long>(t, 1, std::max<long>(rows, 1));
  return t;
}

// Runs fn(first_row, last_row, worker) on `t` workers over [0, rows) and
// max-reduces the per-worker results.
template <typename Fn>
double parallel_row_max(long rows, int threads, Fn&& fn) {
  const int t = clamp_threads(threads, rows);
  if (t == 1) return fn(0L, rows);
  std::vector<double> local(static_cast<size_t>(t), 0.0);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(t));
  const long chunk = (rows + t - 1) / t;
  for (int w = 0; w < t; ++w) {
    const long first = w * chunk;
    const long last = std::min(rows, first + chunk);
    pool.emplace_back([&, w, first, last] { local[static_cast<size_t>(w)] = fn(first, last); });
  }
  for (auto& th : pool) th.join();
  double m = 0.0;
  for (double v : local) m = std::max(m, v);
  return m;
}

}  // namespace

int scan_threads() {
  if (const char* env = std::getenv("KST_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1 || v > 256) throw ConfigError("KST_THREADS must be in 1..256");
    return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::vector<double> unit_grid(int count) {
  if (count < 2) throw ConfigError("grid needs at least 2 samples per axis");
  std::vector<double> xs(static_cast<size_t>(count));
  const double d = 1.0 / (count - 1);
  for (int i = 0; i < count; ++i) xs[static_cast<size_t>(i)] = i * d;
  xs.back() = 1.0;
  return xs;
}

double sum_terms_at(std::span<const StageTerm> terms, double x, double y) {
  double s = 0.0;
  for (const auto& t : terms)
    for (int k = 0; k < 5; ++k)
      s += t.h->eval(t.phi[k]->eval(x) + kSqrt2 * t.phi[k]->eval(y));
  return s;
}

double residual_grid_max(const F2D& f, std::span<const StageTerm> terms, int g,
                         int threads) {
  const auto xs = unit_grid(g);
  const RowEngine engine(terms, xs);
  return parallel_row_max(g, threads, [&](long first, long last) {
    RowEngine::Scratch scratch;
    std::vector<double> srow(xs.size()), frow(xs.size());
    double m = 0.0;
    for (long r = first; r < last; ++r) {
      const double y = xs[static_cast<size_t>(r)];
      engine.sum_row(y, srow, scratch);
      for (size_t i = 0; i < xs.size(); ++i) frow[i] = f(xs[i], y);
      m = std::max(m, kernels::max_abs_diff(frow.data(), srow.data(), xs.size()));
    }
    return m;
  });
}

double grid_sup(const F2D& f, int g, int threads) {
  const auto xs = unit_grid(g);
  return parallel_row_max(g, threads, [&](long first, long last) {
    std::vector<double> frow(xs.size());
    double m = 0.0;
    for (long r = first; r < last; ++r) {
      const double y = xs[static_cast<size_t>(r)];
      for (size_t i = 0; i < xs.size(); ++i) frow[i] = f(xs[i], y);
      m = std::max(m, kernels::max_abs(frow.data(), xs.size()));
    }
    return m;
  });
}

double max_box_oscillation(const F2D& f, std::span<const StageTerm> terms,
                           int N, int threads) {
  if (N < 1) throw ConfigError("oscillation scan: N must be positive");
  // Probe spacing (4/N)/3 rounded up to an integer grid; a box of side 4/N
  // then spans 4 consecutive probes per axis. Windows slide over every
  // probe offset.
  const long m = std::max<long>(3L * N / 4 + ((3L * N) % 4 ? 1 : 0), 1);
  const long samples = m + 1;
  const size_t wlen = static_cast<size_t>(std::min<long>(4, samples));
  std::vector<double> xs(static_cast<size_t>(samples));
  for (long i = 0; i < samples; ++i) xs[static_cast<size_t>(i)] = static_cast<double>(i) / static_cast<double>(m);
  xs.back() = 1.0;
  const RowEngine engine(terms, xs);
  const size_t nwin = xs.size() - wlen + 1;

  // Window-end rows r in [wlen-1, samples) are partitioned across workers;
  // each worker recomputes the wlen-1 rows of overlap before its band.
  const long rows = samples;
  return parallel_row_max(rows, threads, [&](long first, long last) {
    RowEngine::Scratch scratch;
    std::vector<double> srow(xs.size()), vals(xs.size());
    std::vector<std::vector<double>> ringmax(wlen, std::vector<double>(nwin));
    std::vector<std::vector<double>> ringmin(wlen, std::vector<double>(nwin));
    double m_osc = 0.0;
    const long start = std::max<long>(0, first - static_cast<long>(wlen) + 1);
    for (long r = start; r < last; ++r) {
      const double y = xs[static_cast<size_t>(r)];
      engine.sum_row(y, srow, scratch);
      for (size_t i = 0; i < xs.size(); ++i) vals[i] = f(xs[i], y) - srow[i];
      auto& rmax = ringmax[static_cast<size_t>(r % static_cast<long>(wlen))];
      auto& rmin = ringmin[static_cast<size_t>(r % static_cast<long>(wlen))];
      for (size_t i = 0; i < nwin; ++i) {
        double hi = vals[i], lo = vals[i];
        for (size_t d = 1; d < wlen; ++d) {
          hi = std::max(hi, vals[i + d]);
          lo = std::min(lo, vals[i + d]);
        }
        rmax[i] = hi;
        rmin[i] = lo;
      }
      if (r >= static_cast<long>(wlen) - 1 && r >= first) {
        for (size_t i = 0; i < nwin; ++i) {
          double hi = ringmax[0][i], lo = ringmin[0][i];
          for (size_t d = 1; d < wlen; ++d) {
            hi = std::max(hi, ringmax[d][i]);
            lo = std::min(lo, ringmin[d][i]);
          }
          m_osc = std::max(m_osc, hi - lo);
        }
      }
    }
    return m_osc;
  });
}

std::vector<double> residual_product_grid(const F2D& f,
                                          std::span<const StageTerm> terms,
                                          std::span<const double> xs,
                                          std::span<const double> ys,
                                          int threads) {
  const RowEngine engine(terms, xs);
  std::vector<double> out(xs.size() * ys.size());
  const long rows = static_cast<long>(ys.size());
  const int t = clamp_threads(threads, rows);
  auto work = [&](long first, long last) {
    RowEngine::Scratch scratch;
    std::vector<double> srow(xs.size());
    for (long r = first; r < last; ++r) {
      const double y = ys[static_cast<size_t>(r)];
      engine.sum_row(y, srow, scratch);
      double* dst = out.data() + static_cast<size_t>(r) * xs.size();
      for (size_t i = 0; i < xs.size(); ++i) dst[i] = f(xs[i], y) - srow[i];
    }
  };
  if (t == 1) {
    work(0, rows);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (rows + t - 1) / t;
    for (int w = 0; w < t; ++w) {
      const long first = w * chunk;
      const long last = std::min(rows, first + chunk);
      if (first < last) pool.emplace_back(work, first, last);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

void for_each_grid_point(const F2D& f, std::span<const StageTerm> terms, int g,
                         const std::function<void(double, double, double, double)>& cb) {
  const auto xs = unit_grid(g);
  const RowEngine engine(terms, xs);
  RowEngine::Scratch scratch;
  std::vector<double> srow(xs.size());
  for (size_t r = 0; r < xs.size(); ++r) {
    const double y = xs[r];
    engine.sum_row(y, srow, scratch);
    for (size_t i = 0; i < xs.size(); ++i) cb(xs[i], y, f(xs[i], y), srow[i]);
  }
}

}  // namespace kst
