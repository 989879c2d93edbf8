#include "pcw/random_lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "pcw/error.hpp"
#include "pcw/semantic.hpp"

namespace pcw {

using Rng = boost::random::mt19937_64;

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return boost::random::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

void validate(const DistributionParams& p) {
  if (p.m < 1) throw InvalidArgument("m must be >= 1");
  if (p.n < 1) throw InvalidArgument("n must be >= 1");
  if (p.d < 1 || p.d > p.n) throw InvalidArgument("width d must satisfy 1 <= d <= n");
}

// m clauses over variables offset+1 .. offset+n. The pool is shuffled in
// place across clauses; each partial shuffle is uniform from any start.
std::vector<std::vector<Literal>> sample_parts(int m, int n, int d, Var offset, Rng& rng) {
  std::vector<Var> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), offset + 1);
  std::vector<std::vector<Literal>> out(static_cast<std::size_t>(m));
  for (auto& lits : out) {
    for (int k = 0; k < d; ++k) {
      std::swap(pool[k], pool[uniform(rng, k, n - 1)]);
      lits.push_back({pool[k], uniform(rng, 0, 1) == 1});
    }
    std::sort(lits.begin(), lits.end(), [](const Literal& a, const Literal& b) { return a.var < b.var; });
  }
  return out;
}

bool heavier_than(int count, int d, Rational eps) {
  // count > (1 - eps) d
  return static_cast<std::int64_t>(count) * eps.denominator() >
         (eps.denominator() - eps.numerator()) * static_cast<std::int64_t>(d);
}

void check_epsilon(Rational eps) {
  if (eps <= 0 || eps >= 1) throw InvalidArgument("epsilon must lie in (0, 1)");
}

}  // namespace

Rational parse_rational(std::string_view s) {
  auto num = [&](std::string_view t) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || p != t.data() + t.size())
      throw InvalidArgument("expected a fraction p/q, got '" + std::string(s) + "'");
    return v;
  };
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(num(s));
  const std::int64_t q = num(s.substr(slash + 1));
  if (q == 0) throw InvalidArgument("zero denominator in '" + std::string(s) + "'");
  return Rational(num(s.substr(0, slash)), q);
}

std::uint64_t split_seed(std::uint64_t master, std::string_view tag, std::uint64_t index) {
  return splitmix(splitmix(master ^ splitmix(fnv1a(tag))) + index);
}

CnfFormula sample_f(const DistributionParams& p) {
  validate(p);
  Rng rng(split_seed(p.seed, "f"));
  std::vector<Clause> clauses;
  for (auto& lits : sample_parts(p.m, p.n, p.d, 0, rng)) clauses.emplace_back(std::move(lits));
  return CnfFormula(p.n, std::move(clauses));
}

TensorSample sample_tensor(const DistributionParams& p) {
  validate(p);
  Rng rx(split_seed(p.seed, "x")), ry(split_seed(p.seed, "y"));
  auto xs = sample_parts(p.m, p.n, p.d, 0, rx);
  auto ys = sample_parts(p.m, p.n, p.d, p.n, ry);
  std::vector<Clause> clauses;
  for (int i = 0; i < p.m; ++i) {
    auto lits = std::move(xs[i]);
    lits.insert(lits.end(), ys[i].begin(), ys[i].end());
    clauses.emplace_back(std::move(lits));
  }
  std::vector<Var> xv(p.n), yv(p.n);
  std::iota(xv.begin(), xv.end(), 1);
  std::iota(yv.begin(), yv.end(), p.n + 1);
  return {CnfFormula(2 * p.n, std::move(clauses)), VariablePartition(2 * p.n, std::move(xv), std::move(yv))};
}

UnsatRateReport unsat_rate(const DistributionParams& p, bool tensor, std::size_t samples,
                           const BruteForceOptions& opts) {
  validate(p);
  const int total = tensor ? 2 * p.n : p.n;
  if (total > opts.max_vars)
    throw CapExceeded("unsat rate needs brute force over " + std::to_string(total) + " variables > cap " +
                      std::to_string(opts.max_vars));
  UnsatRateReport rep;
  rep.tensor = tensor;
  for (std::size_t k = 0; k < samples; ++k) {
    DistributionParams q = p;
    q.seed = split_seed(p.seed, "sample", k);
    CnfFormula f = tensor ? sample_tensor(q).formula : sample_f(q);
    const bool unsat = !brute_force_sat(f, opts).has_value();
    rep.seeds.push_back(q.seed);
    rep.unsat.push_back(unsat);
    rep.unsat_count += unsat;
  }
  rep.rate = samples == 0 ? 0.0 : static_cast<double>(rep.unsat_count) / static_cast<double>(samples);
  return rep;
}

// ---------------------------------------------------------------------------
// Expansion

namespace {

std::uint64_t choose_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(r);
}

class VarCounter {
 public:
  explicit VarCounter(int n) : count_(static_cast<std::size_t>(n) + 1, 0) {}
  void add(const Clause& c) {
    for (const auto& l : c.literals) distinct_ += count_[l.var]++ == 0;
  }
  void remove(const Clause& c) {
    for (const auto& l : c.literals) distinct_ -= --count_[l.var] == 0;
  }
  int distinct() const { return distinct_; }

 private:
  std::vector<int> count_;
  int distinct_ = 0;
};

void enumerate_subsets(const CnfFormula& f, int s, ExpansionRow& row) {
  const std::size_t m = f.num_clauses();
  VarCounter vc(f.num_vars());
  std::vector<std::size_t> cur;
  row.min_vars = std::numeric_limits<int>::max();
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(cur.size()) == s) {
      ++row.subsets;
      if (vc.distinct() < row.min_vars) {
        row.min_vars = vc.distinct();
        row.witness = cur;
      }
      return;
    }
    for (std::size_t i = start; i + (s - cur.size()) <= m; ++i) {
      cur.push_back(i);
      vc.add(f.clause(i));
      self(self, i + 1);
      vc.remove(f.clause(i));
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

void sample_subsets(const CnfFormula& f, int s, std::uint64_t trials, std::uint64_t seed, ExpansionRow& row) {
  const std::size_t m = f.num_clauses();
  Rng rng(seed);
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  VarCounter vc(f.num_vars());
  row.min_vars = std::numeric_limits<int>::max();
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (int k = 0; k < s; ++k) {
      std::swap(idx[k], idx[uniform(rng, k, m - 1)]);
      vc.add(f.clause(idx[k]));
    }
    if (vc.distinct() < row.min_vars) {
      row.min_vars = vc.distinct();
      row.witness.assign(idx.begin(), idx.begin() + s);
      std::sort(row.witness.begin(), row.witness.end());
    }
    for (int k = 0; k < s; ++k) vc.remove(f.clause(idx[k]));
    ++row.subsets;
  }
}

}  // namespace

ExpansionReport expansion_report(const CnfFormula& f, const ExpansionOptions& opts) {
  check_epsilon(opts.epsilon);
  ExpansionReport rep;
  rep.epsilon = opts.epsilon;
  rep.d = f.width();
  const double dd = static_cast<double>(rep.d);
  rep.regime_s_max = rep.d == 0 ? 0 : static_cast<int>(std::floor(f.num_vars() / (std::exp(1.0) * dd * dd)));
  rep.s_max = opts.s_max.value_or(std::max(1, rep.regime_s_max));
  if (rep.s_max < 1) throw InvalidArgument("s_max must be >= 1");
  if (static_cast<std::size_t>(rep.s_max) > f.num_clauses())
    throw InvalidArgument("s_max exceeds the number of clauses");

  for (int s = 1; s <= rep.s_max; ++s) {
    ExpansionRow row;
    row.s = s;
    row.threshold = (Rational(1) - opts.epsilon) * Rational(static_cast<std::int64_t>(rep.d) * s);
    const std::uint64_t total = choose_capped(f.num_clauses(), s, opts.exact_budget);
    const bool fits = total <= opts.exact_budget;
    if (opts.mode == SampleMode::Exact && !fits)
      throw CapExceeded("exact expansion at s=" + std::to_string(s) + " exceeds the subset budget");
    row.exact = opts.mode == SampleMode::Exact || (opts.mode == SampleMode::Auto && fits);
    if (row.exact)
      enumerate_subsets(f, s, row);
    else
      sample_subsets(f, s, opts.trials, split_seed(opts.seed, "expansion", s), row);
    row.pass = Rational(row.min_vars) >= row.threshold;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Profiles

namespace {

// Clause parts restricted to an ordered variable list, as masks over codes
// (first listed variable most significant).
struct ProfileKernel {
  int width = 0;
  std::vector<SidePart> parts;

  ProfileKernel(const CnfFormula& f, const std::vector<Var>& vars) : width(static_cast<int>(vars.size())) {
    if (width > 63) throw CapExceeded("profiles need at most 63 variables");
    std::vector<int> bit(static_cast<std::size_t>(f.num_vars()) + 1, -1);
    for (int j = 0; j < width; ++j) bit[vars[j]] = width - 1 - j;
    for (const auto& c : f.clauses()) {
      SidePart sp;
      for (const auto& l : c.literals) {
        if (bit[l.var] < 0) continue;
        const std::uint64_t b = std::uint64_t{1} << bit[l.var];
        sp.mask |= b;
        if (l.negated) sp.falsifying |= b;
        ++sp.width;
      }
      parts.push_back(sp);
    }
  }

  Bits profile(std::uint64_t code) const {
    Bits row(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (parts[i].falsified_by(code)) row.set(i);
    return row;
  }
};

ProfileReport run_profiles(const ProfileKernel& k, const ProfileOptions& opts) {
  ProfileReport rep;
  const bool fits = k.width <= opts.exact_max_vars;
  if (opts.mode == SampleMode::Exact && !fits)
    throw CapExceeded("exact profiles enumerate 2^" + std::to_string(k.width) + " rows; cap is 2^" +
                      std::to_string(opts.exact_max_vars));
  rep.exact = opts.mode == SampleMode::Exact || (opts.mode == SampleMode::Auto && fits);
  if (rep.exact) {
    std::unordered_map<Bits, std::uint64_t> seen;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << k.width); ++code) {
      auto [it, fresh] = seen.emplace(k.profile(code), code);
      ++rep.rows;
      if (!fresh) {
        ++rep.collisions;
        if (!rep.witness) rep.witness = std::pair(it->second, code);
      }
    }
  } else {
    Rng rng(split_seed(opts.seed, "profile-pairs"));
    const std::uint64_t top = k.width == 64 ? ~0ULL : (std::uint64_t{1} << k.width) - 1;
    if (top == 0) return rep;
    for (std::uint64_t t = 0; t < opts.pairs; ++t) {
      std::uint64_t a = uniform(rng, 0, top), b = uniform(rng, 0, top);
      while (b == a) b = uniform(rng, 0, top);
      ++rep.pairs;
      if (k.profile(a) == k.profile(b)) {
        ++rep.collisions;
        if (!rep.witness) rep.witness = std::pair(std::min(a, b), std::max(a, b));
      }
    }
  }
  rep.distinct = rep.collisions == 0;
  return rep;
}

}  // namespace

ProfileReport profile_distinctness(const CnfFormula& f, const ProfileOptions& opts) {
  std::vector<Var> vars(static_cast<std::size_t>(f.num_vars()));
  std::iota(vars.begin(), vars.end(), 1);
  return run_profiles(ProfileKernel(f, vars), opts);
}

ProfileReport side_profile_distinctness(const CnfFormula& f, const VariablePartition& part, Side side,
                                        const ProfileOptions& opts) {
  if (f.num_vars() != part.num_vars()) throw InvalidArgument("formula and partition differ in variable count");
  return run_profiles(ProfileKernel(f, part.vars(side)), opts);
}

// ---------------------------------------------------------------------------
// Heavy clauses

double binary_entropy(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

double heavy_bound(int m, int d, Rational epsilon) {
  const double eps = boost::rational_cast<double>(epsilon);
  return m * std::exp2(-(1 - binary_entropy(eps)) * d + 1);
}

bool is_heavy(const Clause& c, const VariablePartition& part, Side side, int d, Rational epsilon) {
  int count = 0;
  for (const auto& l : c.literals) count += part.side_of(l.var) == side;
  return heavier_than(count, d, epsilon);
}

HeavyCounts count_heavy(const CnfFormula& f, const VariablePartition& part, Rational epsilon) {
  check_epsilon(epsilon);
  if (f.num_vars() != part.num_vars()) throw InvalidArgument("formula and partition differ in variable count");
  const int d = f.width();
  HeavyCounts h;
  std::vector<std::uint64_t> wx(static_cast<std::size_t>(f.num_vars()) + 1, 0), wy(wx);
  for (const auto& c : f.clauses()) {
    const bool hx = is_heavy(c, part, Side::X, d, epsilon);
    const bool hy = is_heavy(c, part, Side::Y, d, epsilon);
    h.z_x += hx;
    h.z_y += hy;
    for (const auto& l : c.literals) {
      wx[l.var] += hx;
      wy[l.var] += hy;
    }
  }
  h.w_x = *std::max_element(wx.begin(), wx.end());
  h.w_y = *std::max_element(wy.begin(), wy.end());
  return h;
}

PartitionReport heavy_partition_search(const CnfFormula& f, const PartitionOptions& opts) {
  check_epsilon(opts.epsilon);
  const int n = f.num_vars();
  const int d = f.width();
  PartitionReport best;
  best.epsilon = opts.epsilon;
  best.m_prime = heavy_bound(static_cast<int>(f.num_clauses()), d, opts.epsilon);
  best.w_bound = n == 0 ? 0 : best.m_prime * d / n;
  best.balance_slack = opts.balance_slack.value_or(n > 1 ? 2 * std::sqrt(n * std::log(n)) : 1.0);
  bool have = false;

  for (std::uint64_t t = 0; t < opts.max_trials; ++t) {
    Rng rng(split_seed(opts.seed, "partition", t));
    std::vector<Var> xs, ys;
    for (Var v = 1; v <= n; ++v) (uniform(rng, 0, 1) ? xs : ys).push_back(v);
    const double imbalance = std::abs(static_cast<double>(xs.size()) - n / 2.0);
    VariablePartition part(n, std::move(xs), std::move(ys));
    HeavyCounts h = count_heavy(f, part, opts.epsilon);

    const bool ok = h.z_x <= best.m_prime && h.z_y <= best.m_prime && h.w_max() <= best.w_bound &&
                    imbalance <= best.balance_slack;
    const auto score = std::max(h.z_x, h.z_y);
    if (ok || !have || score < std::max(best.counts.z_x, best.counts.z_y)) {
      best.partition = std::move(part);
      best.counts = h;
      have = true;
    }
    best.trials = t + 1;
    if (ok) {
      best.accepted = true;
      break;
    }
  }
  return best;
}

HeavySatReport heavy_sat_fraction(const CnfFormula& f, const VariablePartition& part, Side side,
                                  const HeavySatOptions& opts) {
  check_epsilon(opts.epsilon);
  if (f.num_vars() != part.num_vars()) throw InvalidArgument("formula and partition differ in variable count");
  const int d = f.width();
  const int n = f.num_vars();
  const int ns = part.size(side);

  HeavySatReport rep;
  rep.side = side;
  std::vector<SidePart> heavy;
  std::vector<std::vector<Var>> heavy_vars;
  for (const auto& c : f.clauses()) {
    if (!is_heavy(c, part, side, d, opts.epsilon)) continue;
    heavy.push_back(side_part(c, part, side));
    std::vector<Var> vs;
    for (const auto& l : c.literals)
      if (part.side_of(l.var) == side) vs.push_back(l.var);
    heavy_vars.push_back(std::move(vs));
  }
  rep.heavy_clauses = heavy.size();

  auto satisfies_all = [&](std::uint64_t code) {
    for (const auto& sp : heavy)
      if (sp.falsified_by(code)) return false;
    return true;
  };
  const bool fits = ns <= opts.exact_max_vars;
  if (opts.mode == SampleMode::Exact && !fits)
    throw CapExceeded("exact heavy-clause fraction enumerates 2^" + std::to_string(ns) + " assignments");
  rep.exact = opts.mode == SampleMode::Exact || (opts.mode == SampleMode::Auto && fits);
  if (rep.exact) {
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << ns); ++code) {
      ++rep.assignments;
      rep.satisfying += satisfies_all(code);
    }
  } else {
    Rng rng(split_seed(opts.seed, "heavy-sat"));
    const std::uint64_t top = ns == 0 ? 0 : (ns >= 64 ? ~0ULL : (std::uint64_t{1} << ns) - 1);
    for (std::uint64_t t = 0; t < opts.trials; ++t) {
      ++rep.assignments;
      rep.satisfying += satisfies_all(uniform(rng, 0, top));
    }
  }
  rep.fraction = rep.assignments == 0 ? 1.0 : static_cast<double>(rep.satisfying) / static_cast<double>(rep.assignments);

  // Local-lemma reference.
  const double m_prime = heavy_bound(static_cast<int>(f.num_clauses()), d, opts.epsilon);
  rep.q = (m_prime > 0 && d > 0) ? n / (100.0 * m_prime * d) : 0;
  rep.lll_bound = d > 0 ? std::exp(-static_cast<double>(n) / (50.0 * d)) : 0;
  std::vector<std::vector<std::size_t>> by_var(static_cast<std::size_t>(n) + 1);
  for (std::size_t i = 0; i < heavy_vars.size(); ++i)
    for (Var v : heavy_vars[i]) by_var[v].push_back(i);
  rep.lll_condition = rep.q > 0 && rep.q < 1;
  std::vector<std::size_t> stamp(heavy.size(), heavy.size());
  for (std::size_t i = 0; i < heavy.size(); ++i) {
    std::uint64_t gamma = 0;
    for (Var v : heavy_vars[i])
      for (std::size_t j : by_var[v])
        if (j != i && stamp[j] != i) {
          stamp[j] = i;
          ++gamma;
        }
    rep.gamma_max = std::max(rep.gamma_max, gamma);
    const double pr = std::exp2(-static_cast<double>(heavy[i].width));
    if (rep.q <= 0 || rep.q >= 1 || rep.q * std::pow(1 - rep.q, static_cast<double>(gamma)) < pr)
      rep.lll_condition = false;
  }
  return rep;
}

}  // namespace pcw
