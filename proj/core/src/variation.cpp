#include "walshlab/variation.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace walshlab {

// ---------------------------------------------------------------------------
// WeightSequence

WeightSequence::WeightSequence(std::string name, std::function<double(std::int64_t)> rule,
                               bool divergent_reciprocals, bool monotone_rule)
    : name_(std::move(name)),
      rule_(std::move(rule)),
      divergent_reciprocals_(divergent_reciprocals),
      monotone_rule_(monotone_rule) {}

double WeightSequence::at(std::int64_t i) const {
  if (i < 1) throw std::invalid_argument("weight index must be >= 1");
  if (monotone_rule_) return std::max(1.0, rule_(i));
  if (static_cast<std::int64_t>(cache_.size()) < i) {
    cache_.reserve(static_cast<std::size_t>(i));
    while (static_cast<std::int64_t>(cache_.size()) < i) {
      const std::int64_t k = static_cast<std::int64_t>(cache_.size()) + 1;
      const double prev = cache_.empty() ? 1.0 : cache_.back();
      cache_.push_back(std::max(prev, rule_(k)));
    }
  }
  return cache_[static_cast<std::size_t>(i) - 1];
}

bool WeightSequence::clamped_below(std::int64_t n) const {
  for (std::int64_t i = 1; i <= n; ++i)
    if (rule_(i) < at(i)) return true;
  return false;
}

WeightSequence WeightSequence::ones() {
  return WeightSequence("ones", [](std::int64_t) { return 1.0; }, true, true);
}

WeightSequence WeightSequence::harmonic() {
  return WeightSequence("harmonic", [](std::int64_t n) { return static_cast<double>(n); }, true,
                        true);
}

WeightSequence WeightSequence::n_over_log() {
  return WeightSequence(
      "nlog",
      [](std::int64_t n) { return static_cast<double>(n) / std::log(static_cast<double>(n) + 1.0); },
      true, true);
}

WeightSequence WeightSequence::n_pow(double gamma) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "npow:%g", gamma);
  return WeightSequence(
      buf, [gamma](std::int64_t n) { return std::pow(static_cast<double>(n), gamma); },
      gamma <= 1.0, gamma >= 0.0);
}

WeightSequence WeightSequence::sqrt_log_family() {
  // n * alpha_n / log(n+1) with alpha_n = sqrt(log(n+1)), i.e. n / sqrt(log(n+1)).
  return WeightSequence(
      "sqrtlog",
      [](std::int64_t n) {
        return static_cast<double>(n) / std::sqrt(std::log(static_cast<double>(n) + 1.0));
      },
      true, true);
}

WeightSequence WeightSequence::cesaro_family(double s) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "cesaro:%g", s);
  return WeightSequence(
      buf,
      [s](std::int64_t n) {
        return std::pow(static_cast<double>(n), 1.0 - s) *
               std::sqrt(std::log(static_cast<double>(n) + 1.0));
      },
      s > 0.0 && s < 1.0, true);
}

std::optional<WeightSequence> WeightSequence::by_name(const std::string& name) {
  if (name == "ones") return ones();
  if (name == "harmonic") return harmonic();
  if (name == "nlog") return n_over_log();
  if (name == "sqrtlog") return sqrt_log_family();
  if (name.rfind("npow:", 0) == 0) {
    try {
      return n_pow(std::stod(name.substr(5)));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (name.rfind("cesaro:", 0) == 0) {
    try {
      return cesaro_family(std::stod(name.substr(7)));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool IntervalSystem::valid() const {
  if (!anchors.empty() && anchors.size() != intervals.size()) return false;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (!(intervals[i].first < intervals[i].second)) return false;
    if (i > 0 && intervals[i].first < intervals[i - 1].second) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Internal tables

namespace {

struct AxisTable {
  int pts = 0;
  int anchors = 0;
  bool rank1 = false;
  std::vector<double> a;      // rank-1 varying-axis factor values
  std::vector<double> b;      // rank-1 anchor-axis factor values
  std::vector<double> dense;  // pts * anchors otherwise
  std::vector<double> coord;
  std::vector<double> anchor_coord;

  double at(int p, int q) const {
    return rank1 ? a[static_cast<std::size_t>(p)] * b[static_cast<std::size_t>(q)]
                 : dense[static_cast<std::size_t>(p) * anchors + q];
  }
};

constexpr std::size_t kDenseCellCap = std::size_t{1} << 22;

std::vector<double> uniform_coords(int count, int denom_pow) {
  std::vector<double> c(static_cast<std::size_t>(count));
  const double den = static_cast<double>(std::uint64_t{1} << denom_pow);
  for (int p = 0; p < count; ++p) c[static_cast<std::size_t>(p)] = static_cast<double>(p) / den;
  return c;
}

AxisTable build_axis_table(const Function2D& f, int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("axis must be 1 or 2");
  AxisTable t;
  if (const auto* g = std::get_if<GridFunction2D>(&f)) {
    const int n = static_cast<int>(g->cells_per_axis());
    t.pts = t.anchors = n;
    if (static_cast<std::size_t>(n) * n > kDenseCellCap)
      throw std::out_of_range("grid too large for variation solvers");
    t.dense.resize(static_cast<std::size_t>(n) * n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        t.dense[static_cast<std::size_t>(p) * n + q] =
            axis == 1 ? g->cell(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q))
                      : g->cell(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(p));
    t.coord = uniform_coords(n, g->resolution());
    t.anchor_coord = t.coord;
    return t;
  }
  const auto& sep = std::get<SeparableFunction2D>(f);
  const int n = static_cast<int>((std::uint64_t{1} << sep.resolution()) + 1);
  t.pts = t.anchors = n;
  t.coord = uniform_coords(n, sep.resolution());
  t.coord.back() = 1.0;
  t.anchor_coord = t.coord;
  if (sep.terms().size() == 1) {
    t.rank1 = true;
    const auto& term = sep.terms().front();
    t.a = axis == 1 ? term.u.values() : term.v.values();
    t.b = axis == 1 ? term.v.values() : term.u.values();
    return t;
  }
  if (static_cast<std::size_t>(n) * n > kDenseCellCap)
    throw std::out_of_range("separable representation too large for variation solvers");
  t.dense.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& term : sep.terms()) {
    const auto& u = axis == 1 ? term.u.values() : term.v.values();
    const auto& v = axis == 1 ? term.v.values() : term.u.values();
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        t.dense[static_cast<std::size_t>(p) * n + q] += u[static_cast<std::size_t>(p)] * v[static_cast<std::size_t>(q)];
  }
  return t;
}

// Point-value table in (x, y) orientation for the mixed-difference solvers.
struct PointTable {
  int nx = 0, ny = 0;
  std::vector<double> v;
  std::vector<double> cx, cy;
  double at(int p, int q) const { return v[static_cast<std::size_t>(p) * ny + q]; }
  double mixed(int ax, int bx, int ay, int by) const {
    return at(ax, ay) - at(ax, by) - at(bx, ay) + at(bx, by);
  }
};

PointTable build_point_table(const Function2D& f) {
  PointTable t;
  if (const auto* g = std::get_if<GridFunction2D>(&f)) {
    const int n = static_cast<int>(g->cells_per_axis());
    t.nx = t.ny = n;
    if (static_cast<std::size_t>(n) * n > kDenseCellCap)
      throw std::out_of_range("grid too large for variation solvers");
    t.v.resize(static_cast<std::size_t>(n) * n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        t.v[static_cast<std::size_t>(p) * n + q] = g->cell(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q));
    t.cx = t.cy = uniform_coords(n, g->resolution());
    return t;
  }
  const auto& sep = std::get<SeparableFunction2D>(f);
  const int n = static_cast<int>((std::uint64_t{1} << sep.resolution()) + 1);
  t.nx = t.ny = n;
  if (static_cast<std::size_t>(n) * n > kDenseCellCap)
    throw std::out_of_range("separable representation too large for variation solvers");
  t.v.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& term : sep.terms())
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        t.v[static_cast<std::size_t>(p) * n + q] +=
            term.u.values()[static_cast<std::size_t>(p)] * term.v.values()[static_cast<std::size_t>(q)];
  t.cx = t.cy = uniform_coords(n, sep.resolution());
  t.cx.back() = t.cy.back() = 1.0;
  return t;
}

// Canonical evaluation of one candidate system: sort increments descending
// and pair them with ascending weights. Every solver and every test oracle
// uses exactly this arithmetic, so exact-mode comparisons are bitwise.
double weighted_sorted_value(std::vector<double> d, const WeightSequence& w, int shift) {
  std::sort(d.begin(), d.end(), std::greater<>());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    acc += d[i] / w.at(shift + static_cast<std::int64_t>(i));
  return acc;
}

using IndexSystem = std::vector<std::pair<int, int>>;

template <class Visit>
void for_each_system(int pts, Visit&& visit) {
  IndexSystem cur;
  auto rec = [&](auto&& self, int start) -> void {
    visit(static_cast<const IndexSystem&>(cur));
    for (int a = start; a + 1 < pts; ++a)
      for (int b = a + 1; b < pts; ++b) {
        cur.emplace_back(a, b);
        self(self, b);
        cur.pop_back();
      }
  };
  rec(rec, 0);
}

std::vector<IndexSystem> all_systems(int pts) {
  std::vector<IndexSystem> out;
  for_each_system(pts, [&](const IndexSystem& s) { out.push_back(s); });
  return out;
}

// The certified mass-fill bound (see the header for the argument).
double fill_bound(double osc, double mass, const WeightSequence& w, int shift) {
  if (osc <= 0.0 || mass <= 0.0) return 0.0;
  const std::int64_t full = static_cast<std::int64_t>(std::floor(mass / osc));
  double acc = 0.0;
  for (std::int64_t i = 1; i <= full; ++i) acc += osc / w.at(shift + i - 1);
  const double rest = mass - static_cast<double>(full) * osc;
  if (rest > 0.0) acc += rest / w.at(shift + full);
  return acc;
}

int exact_resolution_or_throw(const Function2D& f, int max_resolution, const char* what) {
  const int res = representation_resolution(f);
  if (res > max_resolution) throw std::out_of_range(std::string(what) + ": exact mode resolution cap exceeded");
  return res;
}

IntervalSystem witness_from_indices(const AxisTable& t, const IndexSystem& sys,
                                    const std::vector<int>& anchor_per_interval) {
  IntervalSystem w;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    w.intervals.emplace_back(t.coord[static_cast<std::size_t>(sys[i].first)],
                             t.coord[static_cast<std::size_t>(sys[i].second)]);
    if (!anchor_per_interval.empty())
      w.anchors.push_back(t.anchor_coord[static_cast<std::size_t>(anchor_per_interval[i])]);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Exact solvers

VariationResult exact_axis_fixed_anchor(const AxisTable& t, const WeightSequence& w) {
  double best = 0.0;
  IndexSystem best_sys;
  int best_anchor = 0;
  for (int q = 0; q < t.anchors; ++q) {
    for_each_system(t.pts, [&](const IndexSystem& sys) {
      std::vector<double> d(sys.size());
      for (std::size_t i = 0; i < sys.size(); ++i)
        d[i] = std::abs(t.at(sys[i].second, q) - t.at(sys[i].first, q));
      const double v = weighted_sorted_value(std::move(d), w, 1);
      if (v > best) {
        best = v;
        best_sys = sys;
        best_anchor = q;
      }
    });
  }
  VariationResult r;
  r.lower = r.upper = best;
  r.exact = true;
  r.witness = witness_from_indices(t, best_sys, std::vector<int>(best_sys.size(), best_anchor));
  return r;
}

struct AnchoredMax {
  std::vector<double> m;      // pts*pts upper triangle
  std::vector<int> arg;
  int pts = 0;
  double at(int a, int b) const { return m[static_cast<std::size_t>(a) * pts + b]; }
  int anchor(int a, int b) const { return arg[static_cast<std::size_t>(a) * pts + b]; }
};

AnchoredMax anchored_maxima(const AxisTable& t) {
  AnchoredMax out;
  out.pts = t.pts;
  out.m.assign(static_cast<std::size_t>(t.pts) * t.pts, 0.0);
  out.arg.assign(static_cast<std::size_t>(t.pts) * t.pts, 0);
  for (int a = 0; a < t.pts; ++a)
    for (int b = a + 1; b < t.pts; ++b) {
      double bestv = -1.0;
      int bestq = 0;
      for (int q = 0; q < t.anchors; ++q) {
        const double v = std::abs(t.at(b, q) - t.at(a, q));
        if (v > bestv) {
          bestv = v;
          bestq = q;
        }
      }
      out.m[static_cast<std::size_t>(a) * t.pts + b] = bestv;
      out.arg[static_cast<std::size_t>(a) * t.pts + b] = bestq;
    }
  return out;
}

VariationResult exact_axis_sharp(const AxisTable& t, const WeightSequence& w, int shift) {
  const AnchoredMax mx = anchored_maxima(t);
  double best = 0.0;
  IndexSystem best_sys;
  for_each_system(t.pts, [&](const IndexSystem& sys) {
    std::vector<double> d(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) d[i] = mx.at(sys[i].first, sys[i].second);
    const double v = weighted_sorted_value(std::move(d), w, shift);
    if (v > best) {
      best = v;
      best_sys = sys;
    }
  });
  VariationResult r;
  r.lower = r.upper = best;
  r.exact = true;
  std::vector<int> anchors(best_sys.size());
  for (std::size_t i = 0; i < best_sys.size(); ++i)
    anchors[i] = mx.anchor(best_sys[i].first, best_sys[i].second);
  r.witness = witness_from_indices(t, best_sys, anchors);
  return r;
}

// ---------------------------------------------------------------------------
// Heuristic solver (shared by the axis functionals)

struct Candidate {
  IndexSystem sys;
  std::vector<double> d;          // unweighted increments, same order as sys
  std::vector<int> anchors;       // per interval (may repeat one anchor)
};

// Anchored-increment oracle. Rank-1 tables reduce to the varying factor times
// a constant; dense tables can materialize the full pairwise-max matrix once
// so the dynamic programs see O(1) increments.
struct AnchoredEval {
  const AxisTable* t;
  double bmax = 0.0;  // rank-1: max |anchor factor|
  int bq = 0;         // rank-1: its argmax
  std::vector<double> m;  // dense cache, pts*pts, upper triangle

  explicit AnchoredEval(const AxisTable& table, bool materialize = false) : t(&table) {
    if (t->rank1) {
      for (int q = 0; q < t->anchors; ++q) {
        const double v = std::abs(t->b[static_cast<std::size_t>(q)]);
        if (v > bmax) {
          bmax = v;
          bq = q;
        }
      }
    } else if (materialize) {
      m.assign(static_cast<std::size_t>(t->pts) * t->pts, 0.0);
      for (int a = 0; a < t->pts; ++a)
        for (int b = a + 1; b < t->pts; ++b)
          m[static_cast<std::size_t>(a) * t->pts + b] = scan_increment(a, b);
    }
  }

  double scan_increment(int a, int b) const {
    double best = 0.0;
    for (int q = 0; q < t->anchors; ++q)
      best = std::max(best, std::abs(t->at(b, q) - t->at(a, q)));
    return best;
  }

  double increment(int a, int b) const {
    if (t->rank1)
      return std::abs(t->a[static_cast<std::size_t>(b)] - t->a[static_cast<std::size_t>(a)]) * bmax;
    if (!m.empty()) return m[static_cast<std::size_t>(a) * t->pts + b];
    return scan_increment(a, b);
  }

  int argmax_anchor(int a, int b) const {
    if (t->rank1) return bq;
    int best_q = 0;
    double best_v = -1.0;
    for (int q = 0; q < t->anchors; ++q) {
      const double v = std::abs(t->at(b, q) - t->at(a, q));
      if (v > best_v) {
        best_v = v;
        best_q = q;
      }
    }
    return best_q;
  }
};

// Unweighted DP over grid endpoints: best[c] = max sum of c nonoverlapping
// anchored increments, with witness extraction. O(pts^2 * kmax) evaluations.
struct SharpDp {
  std::vector<double> value;                 // (pts) x (kmax+1)
  std::vector<std::pair<int, int>> choice;   // backtrack: (-1,-1) = skip point
  int pts = 0, kmax = 0;
  double at(int p, int c) const { return value[static_cast<std::size_t>(p) * (kmax + 1) + c]; }
};

template <class Inc>
SharpDp sharp_dp(int pts, int kmax, Inc&& inc) {
  SharpDp dp;
  dp.pts = pts;
  dp.kmax = kmax;
  dp.value.assign(static_cast<std::size_t>(pts) * (kmax + 1), 0.0);
  dp.choice.assign(static_cast<std::size_t>(pts) * (kmax + 1), {-1, -1});
  for (int p = 1; p < pts; ++p)
    for (int c = 1; c <= kmax; ++c) {
      double best = dp.at(p - 1, c);
      std::pair<int, int> pick{-1, -1};
      for (int a = 0; a < p; ++a) {
        const double v = dp.at(a, c - 1) + inc(a, p);
        if (v > best) {
          best = v;
          pick = {a, p};
        }
      }
      dp.value[static_cast<std::size_t>(p) * (kmax + 1) + c] = best;
      dp.choice[static_cast<std::size_t>(p) * (kmax + 1) + c] = pick;
    }
  return dp;
}

IndexSystem dp_witness(const SharpDp& dp, int c) {
  IndexSystem sys;
  int p = dp.pts - 1;
  while (p > 0 && c > 0) {
    const auto pick = dp.choice[static_cast<std::size_t>(p) * (dp.kmax + 1) + c];
    if (pick.first < 0) {
      --p;
      continue;
    }
    sys.emplace_back(pick.first, pick.second);
    p = pick.first;
    --c;
  }
  std::reverse(sys.begin(), sys.end());
  return sys;
}

// Shift-independent candidate pool: every entry is a feasible system, so any
// weighted evaluation of it is a valid lower bound at any shift.
std::vector<Candidate> sharp_candidate_pool(const AxisTable& t, const AnchoredEval& ev) {
  std::vector<Candidate> pool;

  // All unit cells with a nonzero increment. The system is kept in position
  // order (the local-move pass relies on neighbor bounds); the canonical
  // evaluation sorts the increments itself.
  {
    Candidate c;
    for (int cell = 0; cell + 1 < t.pts; ++cell) {
      const double inc = ev.increment(cell, cell + 1);
      if (inc <= 0.0) continue;
      c.sys.emplace_back(cell, cell + 1);
      c.d.push_back(inc);
      c.anchors.push_back(ev.argmax_anchor(cell, cell + 1));
    }
    pool.push_back(std::move(c));
  }

  if (t.pts <= VariationLimits::dp_pool_points) {
    const int kmax = std::min(t.pts - 1, 64);
    const SharpDp dp = sharp_dp(t.pts, kmax, [&](int a, int b) { return ev.increment(a, b); });
    for (int c = 1; c <= kmax; ++c) {
      Candidate cand;
      cand.sys = dp_witness(dp, c);
      for (const auto& [a, b] : cand.sys) {
        cand.d.push_back(ev.increment(a, b));
        cand.anchors.push_back(ev.argmax_anchor(a, b));
      }
      pool.push_back(std::move(cand));
    }
  }
  return pool;
}

double candidate_value(const Candidate& c, const WeightSequence& w, int shift) {
  return weighted_sorted_value(c.d, w, shift);
}

VariationResult heuristic_axis_sharp(const AxisTable& t, const WeightSequence& w, int shift,
                                     bool polish) {
  const AnchoredEval ev(t, /*materialize=*/!t.rank1 && t.pts <= VariationLimits::dp_pool_points);
  // Certified upper bound data.
  double mass = 0.0, osc = 0.0;
  for (int c = 0; c + 1 < t.pts; ++c) mass += ev.increment(c, c + 1);
  if (t.rank1) {
    double amax = t.a[0], amin = t.a[0], bmax = 0.0;
    for (double v : t.a) {
      amax = std::max(amax, v);
      amin = std::min(amin, v);
    }
    for (double v : t.b) bmax = std::max(bmax, std::abs(v));
    osc = (amax - amin) * bmax;
  } else {
    for (int q = 0; q < t.anchors; ++q) {
      double mx = t.at(0, q), mn = t.at(0, q);
      for (int p = 1; p < t.pts; ++p) {
        mx = std::max(mx, t.at(p, q));
        mn = std::min(mn, t.at(p, q));
      }
      osc = std::max(osc, mx - mn);
    }
  }

  std::vector<Candidate> pool = sharp_candidate_pool(t, ev);
  double best = 0.0;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double v = candidate_value(pool[i], w, shift);
    if (v > best) {
      best = v;
      best_idx = i;
    }
  }

  if (polish && !pool.empty() && t.pts <= VariationLimits::dp_pool_points) {
    // Local endpoint moves on the best candidate, leftmost interval first.
    Candidate cur = pool[best_idx];
    bool improved = true;
    int rounds = 0;
    while (improved && rounds++ < 8) {
      improved = false;
      for (std::size_t i = 0; i < cur.sys.size(); ++i) {
        const int lo = i == 0 ? 0 : cur.sys[i - 1].second;
        const int hi = i + 1 < cur.sys.size() ? cur.sys[i + 1].first : t.pts - 1;
        for (const auto& [da, db] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
          const int na = cur.sys[i].first + da;
          const int nb = cur.sys[i].second + db;
          if (na < lo || nb > hi || na >= nb) continue;
          Candidate trial = cur;
          trial.sys[i] = {na, nb};
          trial.d[i] = ev.increment(na, nb);
          trial.anchors[i] = ev.argmax_anchor(na, nb);
          const double v = candidate_value(trial, w, shift);
          if (v > best) {
            best = v;
            cur = std::move(trial);
            improved = true;
          }
        }
      }
    }
    pool[best_idx] = cur;
  }

  VariationResult r;
  r.lower = best;
  r.upper = std::max(best, fill_bound(osc, mass, w, shift));
  r.exact = false;
  const Candidate& bc = pool[best_idx];
  r.witness = witness_from_indices(t, bc.sys, bc.anchors);
  return r;
}

VariationResult heuristic_axis_fixed_anchor(const AxisTable& t, const WeightSequence& w) {
  double upper = 0.0;
  double best = 0.0;
  IndexSystem best_sys;
  int best_anchor = 0;

  const bool dp_feasible = t.pts <= 65 && t.anchors <= 65;
  for (int q = 0; q < t.anchors; ++q) {
    double mass = 0.0;
    double mx = t.at(0, q), mn = t.at(0, q);
    for (int p = 0; p < t.pts; ++p) {
      mx = std::max(mx, t.at(p, q));
      mn = std::min(mn, t.at(p, q));
      if (p + 1 < t.pts) mass += std::abs(t.at(p + 1, q) - t.at(p, q));
    }
    upper = std::max(upper, fill_bound(mx - mn, mass, w, 1));

    // Unit-cell candidate on this row, in position order.
    IndexSystem sys;
    std::vector<double> d;
    for (int cell = 0; cell + 1 < t.pts; ++cell) {
      const double inc = std::abs(t.at(cell + 1, q) - t.at(cell, q));
      if (inc <= 0.0) continue;
      sys.emplace_back(cell, cell + 1);
      d.push_back(inc);
    }
    double v = weighted_sorted_value(d, w, 1);
    if (v > best) {
      best = v;
      best_sys = sys;
      best_anchor = q;
    }

    if (dp_feasible) {
      const int kmax = std::min(t.pts - 1, 32);
      const SharpDp dp = sharp_dp(t.pts, kmax, [&](int a, int b) {
        return std::abs(t.at(b, q) - t.at(a, q));
      });
      for (int c = 1; c <= kmax; ++c) {
        IndexSystem s = dp_witness(dp, c);
        std::vector<double> dd(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
          dd[i] = std::abs(t.at(s[i].second, q) - t.at(s[i].first, q));
        v = weighted_sorted_value(std::move(dd), w, 1);
        if (v > best) {
          best = v;
          best_sys = s;
          best_anchor = q;
        }
      }
    }
  }

  VariationResult r;
  r.lower = best;
  r.upper = std::max(best, upper);
  r.exact = false;
  r.witness = witness_from_indices(t, best_sys, std::vector<int>(best_sys.size(), best_anchor));
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public axis functionals

namespace {

VariationResult lambda_var_axis(const Function2D& f, int axis, const WeightSequence& w,
                                SolveMode mode) {
  if (mode == SolveMode::exact) {
    const int res = representation_resolution(f);
    if ((std::int64_t{1} << (2 * res)) > VariationLimits::exact_total_cells)
      throw std::out_of_range("lambda_var: exact mode cell cap exceeded");
    return exact_axis_fixed_anchor(build_axis_table(f, axis), w);
  }
  return heuristic_axis_fixed_anchor(build_axis_table(f, axis), w);
}

}  // namespace

VariationResult lambda_var_1(const Function2D& f, const WeightSequence& w, SolveMode mode) {
  return lambda_var_axis(f, 1, w, mode);
}

VariationResult lambda_var_2(const Function2D& f, const WeightSequence& w, SolveMode mode) {
  return lambda_var_axis(f, 2, w, mode);
}

VariationResult sharp_var(const Function2D& f, int axis, const WeightSequence& w, SolveMode mode) {
  return tail_sharp_var(f, axis, w, 1, mode);
}

VariationResult tail_sharp_var(const Function2D& f, int axis, const WeightSequence& w, int shift,
                               SolveMode mode) {
  if (shift < 1) throw std::invalid_argument("tail shift must be >= 1");
  if (mode == SolveMode::exact) {
    const int res = representation_resolution(f);
    if ((std::int64_t{1} << (2 * res)) > VariationLimits::exact_total_cells)
      throw std::out_of_range("sharp_var: exact mode cell cap exceeded");
    return exact_axis_sharp(build_axis_table(f, axis), w, shift);
  }
  return heuristic_axis_sharp(build_axis_table(f, axis), w, shift, /*polish=*/shift == 1);
}

double v_sharp(const Function2D& f, int axis, int n) {
  if (n < 1) throw std::invalid_argument("v_sharp requires n >= 1");
  return v_sharp_values(f, axis, n).back();
}

std::vector<double> v_sharp_values(const Function2D& f, int axis, int n_max) {
  if (n_max < 1) throw std::invalid_argument("v_sharp requires n >= 1");
  if (representation_resolution(f) > VariationLimits::v_sharp_resolution)
    throw std::out_of_range("v_sharp resolution cap exceeded");
  const AxisTable t = build_axis_table(f, axis);
  const AnchoredEval ev(t, /*materialize=*/!t.rank1);
  const int kmax = std::min(n_max, t.pts - 1);
  const SharpDp dp = sharp_dp(t.pts, kmax, [&](int a, int b) { return ev.increment(a, b); });
  std::vector<double> out(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    out[static_cast<std::size_t>(n) - 1] = dp.at(t.pts - 1, std::min(n, kmax));
  return out;
}

// ---------------------------------------------------------------------------
// Mixed-difference functionals

namespace {

double best_mixed_assignment(const std::vector<std::vector<double>>& m, const WeightSequence& w1,
                             const WeightSequence& w2) {
  const int kx = static_cast<int>(m.size());
  const int ky = kx == 0 ? 0 : static_cast<int>(m.front().size());
  if (kx == 0 || ky == 0) return 0.0;

  // Permute the smaller side explicitly; the other side is then optimal by
  // the rearrangement inequality on the row aggregates.
  const bool transpose = kx < ky;
  const int ks = transpose ? kx : ky;  // sigma side
  const int kr = transpose ? ky : kx;  // rearranged side
  const WeightSequence& ws = transpose ? w1 : w2;
  const WeightSequence& wr = transpose ? w2 : w1;

  std::vector<int> perm(static_cast<std::size_t>(ks));
  for (int i = 0; i < ks; ++i) perm[static_cast<std::size_t>(i)] = i;
  double best = 0.0;
  std::vector<double> agg(static_cast<std::size_t>(kr));
  do {
    for (int r = 0; r < kr; ++r) {
      double acc = 0.0;
      for (int s = 0; s < ks; ++s) {
        const double mv = transpose ? m[static_cast<std::size_t>(s)][static_cast<std::size_t>(r)]
                                    : m[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
        acc += mv / ws.at(perm[static_cast<std::size_t>(s)] + 1);
      }
      agg[static_cast<std::size_t>(r)] = acc;
    }
    best = std::max(best, weighted_sorted_value(agg, wr, 1));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Signed unit-cell mixed differences; every rectangle mixed difference is
// the sum of its cells' entries (2D telescoping).
std::vector<double> mixed_cells(const PointTable& t) {
  std::vector<double> m(static_cast<std::size_t>(t.nx - 1) * (t.ny - 1));
  for (int p = 0; p + 1 < t.nx; ++p)
    for (int q = 0; q + 1 < t.ny; ++q)
      m[static_cast<std::size_t>(p) * (t.ny - 1) + q] = t.mixed(p, p + 1, q, q + 1);
  return m;
}

struct MixedSup {
  double value = 0.0;  // sup over rectangles of |mixed difference|
  int ax = 0, bx = 1, ay = 0, by = 1;
};

// Max |subrectangle sum| of the signed cell matrix, O(nx^2 ny).
MixedSup mixed_sup(const PointTable& t, const std::vector<double>& cells) {
  MixedSup out;
  const int cx = t.nx - 1, cy = t.ny - 1;
  std::vector<double> col(static_cast<std::size_t>(cy));
  for (int a = 0; a < cx; ++a) {
    std::fill(col.begin(), col.end(), 0.0);
    for (int b = a; b < cx; ++b) {
      for (int q = 0; q < cy; ++q) col[static_cast<std::size_t>(q)] += cells[static_cast<std::size_t>(b) * cy + q];
      // max and min contiguous sums over col
      double run_max = 0.0, run_min = 0.0;
      int start_max = 0, start_min = 0;
      for (int q = 0; q < cy; ++q) {
        if (run_max <= 0.0) {
          run_max = 0.0;
          start_max = q;
        }
        run_max += col[static_cast<std::size_t>(q)];
        if (run_max > out.value) {
          out = {run_max, a, b + 1, start_max, q + 1};
        }
        if (run_min >= 0.0) {
          run_min = 0.0;
          start_min = q;
        }
        run_min += col[static_cast<std::size_t>(q)];
        if (-run_min > out.value) {
          out = {-run_min, a, b + 1, start_min, q + 1};
        }
      }
    }
  }
  return out;
}

// Top-r smallest products lambda1_i * lambda2_j (equivalently the largest
// product reciprocals), streamed from the sorted frontier.
std::vector<double> smallest_weight_products(const WeightSequence& w1, const WeightSequence& w2,
                                             std::int64_t count) {
  struct Node {
    double v;
    std::int64_t i, j;
    bool operator>(const Node& o) const { return v > o.v; }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
  heap.push({w1.at(1) * w2.at(1), 1, 1});
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  while (!heap.empty() && static_cast<std::int64_t>(out.size()) < count) {
    const Node n = heap.top();
    heap.pop();
    out.push_back(n.v);
    heap.push({w1.at(n.i + 1) * w2.at(n.j), n.i + 1, n.j});
    if (n.i == 1) heap.push({w1.at(n.i) * w2.at(n.j + 1), n.i, n.j + 1});
  }
  return out;
}

IntervalSystem witness_axis(const PointTable& t, const IndexSystem& sys, bool x_axis) {
  IntervalSystem w;
  const auto& coord = x_axis ? t.cx : t.cy;
  for (const auto& [a, b] : sys)
    w.intervals.emplace_back(coord[static_cast<std::size_t>(a)], coord[static_cast<std::size_t>(b)]);
  return w;
}

}  // namespace

VariationResult lambda_var_12(const Function2D& f, const WeightSequence& w1,
                              const WeightSequence& w2, SolveMode mode) {
  const PointTable t = build_point_table(f);

  if (mode == SolveMode::exact) {
    exact_resolution_or_throw(f, VariationLimits::exact_mixed_resolution, "lambda_var_12");
    const std::vector<IndexSystem> sx = all_systems(t.nx);
    const std::vector<IndexSystem> sy = all_systems(t.ny);
    double best = 0.0;
    const IndexSystem* bx = nullptr;
    const IndexSystem* by = nullptr;
    std::vector<std::vector<double>> m;
    for (const IndexSystem& ex : sx) {
      if (ex.empty()) continue;
      for (const IndexSystem& ey : sy) {
        if (ey.empty()) continue;
        m.assign(ex.size(), std::vector<double>(ey.size()));
        for (std::size_t i = 0; i < ex.size(); ++i)
          for (std::size_t j = 0; j < ey.size(); ++j)
            m[i][j] = std::abs(t.mixed(ex[i].first, ex[i].second, ey[j].first, ey[j].second));
        const double v = best_mixed_assignment(m, w1, w2);
        if (v > best) {
          best = v;
          bx = &ex;
          by = &ey;
        }
      }
    }
    VariationResult r;
    r.lower = r.upper = best;
    r.exact = true;
    if (bx) r.witness = witness_axis(t, *bx, true);
    if (by) r.witness_second = witness_axis(t, *by, false);
    return r;
  }

  const std::vector<double> cells = mixed_cells(t);
  double mass = 0.0;
  for (double c : cells) mass += std::abs(c);
  const MixedSup sup = mixed_sup(t, cells);

  double upper = 0.0;
  if (sup.value > 0.0) {
    const std::int64_t full = static_cast<std::int64_t>(std::floor(mass / sup.value));
    const std::vector<double> prods = smallest_weight_products(w1, w2, full + 1);
    for (std::int64_t i = 0; i < full; ++i) upper += sup.value / prods[static_cast<std::size_t>(i)];
    const double rest = mass - static_cast<double>(full) * sup.value;
    if (rest > 0.0) upper += rest / prods[static_cast<std::size_t>(full)];
  }

  // Lower bound: all unit cells, rows and columns ordered by their mass.
  const int cx = t.nx - 1, cy = t.ny - 1;
  std::vector<int> rorder(static_cast<std::size_t>(cx)), corder(static_cast<std::size_t>(cy));
  for (int i = 0; i < cx; ++i) rorder[static_cast<std::size_t>(i)] = i;
  for (int j = 0; j < cy; ++j) corder[static_cast<std::size_t>(j)] = j;
  std::vector<double> rmass(static_cast<std::size_t>(cx), 0.0), cmass(static_cast<std::size_t>(cy), 0.0);
  for (int i = 0; i < cx; ++i)
    for (int j = 0; j < cy; ++j) {
      const double v = std::abs(cells[static_cast<std::size_t>(i) * cy + j]);
      rmass[static_cast<std::size_t>(i)] += v;
      cmass[static_cast<std::size_t>(j)] += v;
    }
  std::stable_sort(rorder.begin(), rorder.end(),
                   [&](int x, int y) { return rmass[static_cast<std::size_t>(x)] > rmass[static_cast<std::size_t>(y)]; });
  std::stable_sort(corder.begin(), corder.end(),
                   [&](int x, int y) { return cmass[static_cast<std::size_t>(x)] > cmass[static_cast<std::size_t>(y)]; });
  double lower = 0.0;
  for (int i = 0; i < cx; ++i)
    for (int j = 0; j < cy; ++j)
      lower += std::abs(cells[static_cast<std::size_t>(rorder[static_cast<std::size_t>(i)]) * cy +
                              corder[static_cast<std::size_t>(j)]]) /
               (w1.at(i + 1) * w2.at(j + 1));
  // Single best rectangle.
  lower = std::max(lower, sup.value / (w1.at(1) * w2.at(1)));

  VariationResult r;
  r.lower = lower;
  r.upper = std::max(lower, upper);
  r.exact = false;
  IndexSystem ex, ey;
  for (int i = 0; i < cx; ++i) ex.emplace_back(i, i + 1);
  for (int j = 0; j < cy; ++j) ey.emplace_back(j, j + 1);
  r.witness = witness_axis(t, ex, true);
  r.witness_second = witness_axis(t, ey, false);
  return r;
}

VariationResult star_var(const Function2D& f, const WeightSequence& w, SolveMode mode) {
  const PointTable t = build_point_table(f);

  if (mode == SolveMode::exact) {
    exact_resolution_or_throw(f, VariationLimits::exact_star_resolution, "star_var");
    struct Rect {
      int ax, bx, ay, by;
      std::uint64_t mask;
      double value;
    };
    const int cy = t.ny - 1;
    std::vector<Rect> rects;
    for (int ax = 0; ax < t.nx; ++ax)
      for (int bx = ax + 1; bx < t.nx; ++bx)
        for (int ay = 0; ay < t.ny; ++ay)
          for (int by = ay + 1; by < t.ny; ++by) {
            std::uint64_t mask = 0;
            for (int p = ax; p < bx; ++p)
              for (int q = ay; q < by; ++q) mask |= std::uint64_t{1} << (p * cy + q);
            rects.push_back({ax, bx, ay, by, mask, std::abs(t.mixed(ax, bx, ay, by))});
          }

    double best = 0.0;
    std::vector<int> best_pick;
    std::vector<int> cur;
    std::vector<double> d;
    auto rec = [&](auto&& self, std::size_t start, std::uint64_t mask) -> void {
      const double v = weighted_sorted_value(d, w, 1);
      if (v > best) {
        best = v;
        best_pick = cur;
      }
      for (std::size_t r = start; r < rects.size(); ++r) {
        if (rects[r].mask & mask) continue;
        cur.push_back(static_cast<int>(r));
        d.push_back(rects[r].value);
        self(self, r + 1, mask | rects[r].mask);
        cur.pop_back();
        d.pop_back();
      }
    };
    rec(rec, 0, 0);

    VariationResult r;
    r.lower = r.upper = best;
    r.exact = true;
    for (int idx : best_pick) {
      const Rect& rc = rects[static_cast<std::size_t>(idx)];
      r.witness.intervals.emplace_back(t.cx[static_cast<std::size_t>(rc.ax)], t.cx[static_cast<std::size_t>(rc.bx)]);
      r.witness_second.intervals.emplace_back(t.cy[static_cast<std::size_t>(rc.ay)], t.cy[static_cast<std::size_t>(rc.by)]);
    }
    return r;
  }

  const std::vector<double> cells = mixed_cells(t);
  double mass = 0.0;
  for (double c : cells) mass += std::abs(c);
  const MixedSup sup = mixed_sup(t, cells);
  const double upper = fill_bound(sup.value, mass, w, 1);

  std::vector<double> abs_cells(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) abs_cells[i] = std::abs(cells[i]);
  double lower = weighted_sorted_value(abs_cells, w, 1);
  lower = std::max(lower, sup.value / w.at(1));

  VariationResult r;
  r.lower = lower;
  r.upper = std::max(lower, upper);
  r.exact = false;
  r.witness.intervals.emplace_back(t.cx[static_cast<std::size_t>(sup.ax)], t.cx[static_cast<std::size_t>(sup.bx)]);
  r.witness_second.intervals.emplace_back(t.cy[static_cast<std::size_t>(sup.ay)], t.cy[static_cast<std::size_t>(sup.by)]);
  return r;
}

DiagnosticSeries embedding_diagnostic(const Function2D& f, DiagnosticKind kind, double alpha,
                                      double beta, int j_max) {
  if (j_max < 1 || j_max > 20) throw std::invalid_argument("diagnostic depth must be in [1, 20]");
  if (kind == DiagnosticKind::thm4) {
    if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0 && alpha + beta < 1.0))
      throw std::invalid_argument("thm4 requires alpha, beta in (0,1) with alpha+beta < 1");
  }

  DiagnosticSeries out;
  for (int axis = 1; axis <= 2; ++axis) {
    std::vector<double>& sums = axis == 1 ? out.axis1 : out.axis2;
    if (kind == DiagnosticKind::thm2) {
      if (j_max > 14) throw std::invalid_argument("thm2 depth must be <= 14");
      const std::int64_t n_max = std::int64_t{1} << j_max;
      const std::vector<double> v = v_sharp_values(f, axis, static_cast<int>(n_max));
      sums.resize(static_cast<std::size_t>(n_max));
      double acc = 0.0;
      for (std::int64_t n = 1; n <= n_max; ++n) {
        const double dn = static_cast<double>(n);
        acc += v[static_cast<std::size_t>(n) - 1] * std::log(dn + 1.0) / (dn * dn);
        sums[static_cast<std::size_t>(n) - 1] = acc;
      }
    } else {
      const std::int64_t n_max = std::int64_t{1} << j_max;
      const std::vector<double> v = v_sharp_values(f, axis, static_cast<int>(n_max));
      sums.resize(static_cast<std::size_t>(j_max));
      double acc = 0.0;
      for (int j = 1; j <= j_max; ++j) {
        const double denom = std::pow(2.0, static_cast<double>(j) * (1.0 - (alpha + beta)));
        acc += v[(std::size_t{1} << j) - 1] / denom;
        sums[static_cast<std::size_t>(j) - 1] = acc;
      }
    }
  }
  return out;
}

}  // namespace walshlab
