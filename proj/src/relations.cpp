#include "sidonlab/relations.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "sidonlab/errors.hpp"

namespace sidonlab {

namespace {

using Wide = __int128;
using UWide = unsigned __int128;
using Key = std::vector<Wide>;  // free coordinates, then torsion residues

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ k.size();
    for (Wide v : k) {
      const auto u = static_cast<UWide>(v);
      for (std::uint64_t part : {static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(u >> 64)}) {
        h ^= part + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h *= 0xBF58476D1CE4E5B9ULL;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

Integer to_integer(UWide v) {
  Integer r = static_cast<std::uint64_t>(v >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(v);
  return r;
}

UWide saturating_add(UWide a, UWide b) {
  const UWide cap = static_cast<UWide>(1) << 126;
  const UWide s = a + b;
  return s > cap ? cap : s;
}

// Exponent values in canonical rank order: 0, 1, -1, 2, -2, …
std::vector<int> exponent_order(int n) {
  std::vector<int> out{0};
  for (int k = 1; k <= n; ++k) {
    out.push_back(k);
    out.push_back(-k);
  }
  return out;
}

class Engine {
 public:
  Engine(const GroupSpec& spec, std::span<const GroupElement> elements, int n, const RelationOptions& options)
      : spec_(spec), elems_(canonical_set(elements)), n_(n), options_(options) {
    if (n < 1) throw DomainError("relation degree n must be >= 1");
    for (const auto& g : elems_) spec.check(g);
    const std::size_t d = spec.free_rank();
    const Integer limit = Integer(1) << 120;
    for (std::size_t j = 0; j < d; ++j) {
      Integer total = 0;
      for (const auto& g : elems_) total += abs(g.free()[j]);
      if (total * n >= limit) throw ResourceError("relation sums exceed the 120-bit exact range");
    }
    for (const auto& g : elems_) {
      Key k;
      for (const auto& v : g.free()) {
        // |v| < 2^120 by the check above
        const bool neg = v < 0;
        Integer a = abs(v);
        const auto lo = static_cast<std::uint64_t>(a & Integer(std::numeric_limits<std::uint64_t>::max()));
        const auto hi = static_cast<std::uint64_t>(a >> 64);
        Wide w = static_cast<Wide>((static_cast<UWide>(hi) << 64) | lo);
        k.push_back(neg ? -w : w);
      }
      for (auto r : g.torsion()) k.push_back(r);
      base_.push_back(std::move(k));
    }
    scalar_ = d == 1 && spec.torsion_free();
    if (scalar_) {
      suffix_abs_.assign(elems_.size() + 1, 0);
      for (std::size_t i = elems_.size(); i-- > 0;) {
        const Wide v = base_[i][0];
        suffix_abs_[i] = suffix_abs_[i + 1] + (v < 0 ? -v : v);
      }
    }
  }

  const std::vector<GroupElement>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  int degree() const { return n_; }

  Key zero() const { return Key(spec_.coordinate_count(), 0); }

  void add_scaled(Key& v, std::size_t idx, int xi) const {
    const std::size_t d = spec_.free_rank();
    for (std::size_t j = 0; j < d; ++j) v[j] += base_[idx][j] * xi;
    for (std::size_t i = 0; i < spec_.torsion_rank(); ++i) {
      const Wide p = spec_.moduli()[i];
      Wide r = (v[d + i] + base_[idx][d + i] * xi) % p;
      if (r < 0) r += p;
      v[d + i] = r;
    }
  }

  Key negate(const Key& v) const {
    Key out = v;
    const std::size_t d = spec_.free_rank();
    for (std::size_t j = 0; j < d; ++j) out[j] = -out[j];
    for (std::size_t i = 0; i < spec_.torsion_rank(); ++i) {
      const Wide p = spec_.moduli()[i];
      out[d + i] = (p - out[d + i]) % p;
    }
    return out;
  }

  Key subtract(const Key& a, const Key& b) const {
    Key out = a;
    const std::size_t d = spec_.free_rank();
    for (std::size_t j = 0; j < d; ++j) out[j] -= b[j];
    for (std::size_t i = 0; i < spec_.torsion_rank(); ++i) {
      const Wide p = spec_.moduli()[i];
      Wide r = (out[d + i] - b[d + i]) % p;
      if (r < 0) r += p;
      out[d + i] = r;
    }
    return out;
  }

  static bool is_zero(const Key& v) {
    return std::all_of(v.begin(), v.end(), [](Wide x) { return x == 0; });
  }

  bool component_trivial(std::size_t idx, int xi) const {
    if (xi == 0) return true;
    Key v = zero();
    add_scaled(v, idx, xi);
    return is_zero(v);
  }

  std::uint64_t trivial_choices(std::size_t idx) const {
    std::uint64_t c = 0;
    for (int xi = -n_; xi <= n_; ++xi) c += component_trivial(idx, xi) ? 1 : 0;
    return c;
  }

  Integer trivial_count(std::size_t from) const {
    Integer t = 1;
    for (std::size_t i = from; i < elems_.size(); ++i) t *= trivial_choices(i);
    return t;
  }

  double mitm_cost(std::size_t from) const {
    const double len = static_cast<double>(elems_.size() - from);
    const double b = 2.0 * n_ + 1.0;
    return std::pow(b, std::ceil(len / 2.0)) + std::pow(b, std::floor(len / 2.0));
  }

  double dp_span(std::size_t from) const {
    return scalar_ ? 2.0 * static_cast<double>(suffix_abs_[from]) * n_ + 1.0 : std::numeric_limits<double>::infinity();
  }

  double dp_cost(std::size_t from) const {
    if (!scalar_) return std::numeric_limits<double>::infinity();
    return static_cast<double>(elems_.size() - from) * (2.0 * n_ + 1.0) * dp_span(from);
  }

  double best_cost(std::size_t from) const { return std::min(dp_cost(from), mitm_cost(from)); }

  void require_affordable(std::size_t from) const {
    const double cost = best_cost(from);
    if (cost > static_cast<double>(options_.work_cap)) {
      std::ostringstream os;
      os << "relation enumeration needs about " << cost << " steps (dp " << dp_cost(from) << ", meet-in-the-middle "
         << mitm_cost(from) << "), above the work cap of " << options_.work_cap;
      throw ResourceError(os.str());
    }
  }

  bool use_dp(std::size_t from) const { return dp_cost(from) <= mitm_cost(from); }

  // Distribution of partial sums over indices [from, m), offset by the span.
  template <class Count>
  std::vector<Count> dp_distribution(std::size_t from) const {
    const auto half = static_cast<std::int64_t>(suffix_abs_[from]) * n_;
    std::vector<Count> dist(static_cast<std::size_t>(2 * half + 1), Count(0));
    dist[static_cast<std::size_t>(half)] = Count(1);
    std::int64_t reach = 0;
    for (std::size_t i = from; i < elems_.size(); ++i) {
      const auto g = static_cast<std::int64_t>(base_[i][0]);
      const std::int64_t ag = g < 0 ? -g : g;
      std::vector<Count> next(dist.size(), Count(0));
      for (std::int64_t s = -reach; s <= reach; ++s) {
        const auto& c = dist[static_cast<std::size_t>(s + half)];
        if (c == Count(0)) continue;
        for (int xi = -n_; xi <= n_; ++xi) {
          auto& slot = next[static_cast<std::size_t>(s + xi * g + half)];
          if constexpr (std::is_same_v<Count, UWide>) {
            slot = saturating_add(slot, c);
          } else {
            slot += c;
          }
        }
      }
      reach += ag * n_;
      dist = std::move(next);
    }
    return dist;
  }

  // value -> number of exponent assignments on [lo, hi)
  std::unordered_map<Key, std::uint64_t, KeyHash> half_table(std::size_t lo, std::size_t hi) const {
    std::unordered_map<Key, std::uint64_t, KeyHash> table;
    Key v = zero();
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == hi) {
        ++table[v];
        return;
      }
      for (int xi = -n_; xi <= n_; ++xi) {
        Key saved = v;
        add_scaled(v, i, xi);
        rec(i + 1);
        v = std::move(saved);
      }
    };
    rec(lo);
    return table;
  }

  // Exact number of assignments on [from, m) summing to `target`.
  Integer count_hits(std::size_t from, const Key& target) const {
    if (from == elems_.size()) return is_zero(target) ? 1 : 0;
    require_affordable(from);
    if (use_dp(from)) {
      const auto half = static_cast<Wide>(suffix_abs_[from]) * n_;
      const Wide t = target[0];
      if (t < -half || t > half) return 0;
      const double total = std::pow(2.0 * n_ + 1.0, static_cast<double>(elems_.size() - from));
      if (total < 0x1.0p126) {
        return to_integer(dp_distribution<UWide>(from)[static_cast<std::size_t>(t + half)]);
      }
      return dp_distribution<Integer>(from)[static_cast<std::size_t>(t + half)];
    }
    const std::size_t mid = from + (elems_.size() - from + 1) / 2;
    const auto left = half_table(from, mid);
    const auto right = half_table(mid, elems_.size());
    UWide total = 0;
    for (const auto& [value, count] : right) {
      auto it = left.find(subtract(target, value));
      if (it != left.end()) total += static_cast<UWide>(it->second) * count;
    }
    return to_integer(total);
  }

  std::string method(std::size_t from) const {
    if (from == elems_.size()) return "empty";
    return use_dp(from) ? "dp" : "meet-in-the-middle";
  }

 private:
  const GroupSpec& spec_;
  std::vector<GroupElement> elems_;
  int n_;
  RelationOptions options_;
  std::vector<Key> base_;
  bool scalar_ = false;
  std::vector<Wide> suffix_abs_;
};

// Answers "does the suffix starting at i reach `target` (nontrivially)?".
// For the scalar DP case all suffix distributions are tabulated once.
class SuffixOracle {
 public:
  explicit SuffixOracle(const Engine& engine) : engine_(engine) {
    const std::size_t m = engine.size();
    trivial_.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) trivial_[i] = engine.trivial_count(i);
    if (m > 0 && engine.use_dp(0)) {
      engine.require_affordable(0);
      const double entries = static_cast<double>(m) * engine.dp_span(0);
      if (entries <= 4e7) {
        tables_.resize(m + 1);
        for (std::size_t i = 0; i <= m; ++i) tables_[i] = engine.dp_distribution<UWide>(i);
      }
    }
  }

  bool has_completion(std::size_t from, const Key& target, bool need_nontrivial) const {
    const std::size_t m = engine_.size();
    if (from == m) return Engine::is_zero(target) && !need_nontrivial;
    Integer hits;
    if (!tables_.empty()) {
      const auto& dist = tables_[from];
      const Wide half = static_cast<Wide>((dist.size() - 1) / 2);
      const Wide t = target[0];
      if (t < -half || t > half) return false;
      hits = to_integer(dist[static_cast<std::size_t>(t + half)]);
    } else {
      hits = engine_.count_hits(from, target);
    }
    if (need_nontrivial) return hits > trivial_[from];
    return hits > 0;
  }

 private:
  const Engine& engine_;
  std::vector<Integer> trivial_;
  std::vector<std::vector<UWide>> tables_;
};

std::vector<ExponentVector> enumerate_in_order(const Engine& engine, std::size_t limit) {
  std::vector<ExponentVector> found;
  if (limit == 0 || engine.size() == 0) return found;
  const SuffixOracle oracle(engine);
  if (!oracle.has_completion(0, engine.zero(), true)) return found;
  const auto order = exponent_order(engine.degree());
  std::vector<int> xi(engine.size(), 0);
  std::function<void(std::size_t, const Key&, bool)> dfs = [&](std::size_t i, const Key& value, bool nontrivial) {
    if (found.size() >= limit) return;
    if (i == engine.size()) {
      if (nontrivial && Engine::is_zero(value)) {
        found.push_back(ExponentVector{engine.elements(), xi, engine.degree()});
      }
      return;
    }
    for (int x : order) {
      if (found.size() >= limit) return;
      Key next = value;
      engine.add_scaled(next, i, x);
      const bool nt = nontrivial || !engine.component_trivial(i, x);
      if (!oracle.has_completion(i + 1, engine.negate(next), !nt)) continue;
      xi[i] = x;
      dfs(i + 1, next, nt);
      xi[i] = 0;
    }
  };
  dfs(0, engine.zero(), false);
  return found;
}

}  // namespace

std::vector<GroupElement> ExponentVector::support(const GroupSpec& spec) const {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (exponents[i] != 0 && !spec.power(elements[i], exponents[i]).is_identity()) out.push_back(elements[i]);
  }
  return out;
}

std::string ExponentVector::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < exponents.size(); ++i) os << (i ? "," : "") << exponents[i];
  os << ")";
  return os.str();
}

RelationReport count_relations(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                               const RelationOptions& options) {
  const Engine engine(spec, elements, n, options);
  RelationReport report;
  report.elements = engine.elements();
  report.degree = n;
  report.contains_identity =
      std::any_of(report.elements.begin(), report.elements.end(), [](const auto& g) { return g.is_identity(); });
  report.method = engine.method(0);
  report.estimated_work = engine.size() == 0 ? 0 : static_cast<std::uint64_t>(engine.best_cost(0));
  report.trivial_count = engine.trivial_count(0);
  report.count = engine.count_hits(0, engine.zero());
  if (report.count > report.trivial_count && options.sample_cap > 0) {
    report.sample_relations = enumerate_in_order(engine, options.sample_cap);
  }
  return report;
}

std::vector<ExponentVector> enumerate_relations(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                                                std::size_t limit, const RelationOptions& options) {
  const Engine engine(spec, elements, n, options);
  return enumerate_in_order(engine, limit);
}

std::optional<ExponentVector> find_relation(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                                            const RelationOptions& options) {
  auto found = enumerate_relations(spec, elements, n, 1, options);
  if (found.empty()) return std::nullopt;
  return std::move(found.front());
}

bool is_n_degree_independent(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                             const RelationOptions& options) {
  const Engine engine(spec, elements, n, options);
  if (engine.size() == 0) return true;
  return engine.count_hits(0, engine.zero()) == engine.trivial_count(0);
}

LengthIndependence is_n_length_independent(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                                           const RelationOptions& options) {
  if (n < 1) throw DomainError("length n must be >= 1");
  const Engine engine(spec, elements, 1, options);
  LengthIndependence out;
  const std::size_t m = engine.size();
  if (m < static_cast<std::size_t>(n)) out.vacuous = true;

  // Σ_{k<=n} C(m,k) 2^k search nodes at most.
  double nodes = 0.0, binom = 1.0;
  for (int k = 0; k <= n && k <= static_cast<int>(m); ++k) {
    nodes += binom * std::pow(2.0, k);
    binom = binom * static_cast<double>(m - static_cast<std::size_t>(k)) / (k + 1.0);
  }
  if (nodes > static_cast<double>(options.work_cap)) {
    throw ResourceError("length-independence search needs about " + std::to_string(nodes) +
                        " nodes, above the work cap of " + std::to_string(options.work_cap));
  }

  std::vector<int> xi(m, 0);
  std::function<bool(std::size_t, const Key&, int, bool)> dfs = [&](std::size_t i, const Key& value, int used,
                                                                    bool nontrivial) -> bool {
    if (nontrivial && Engine::is_zero(value)) return true;
    if (i == m || used == n) return false;
    for (int x : {1, -1}) {
      Key next = value;
      engine.add_scaled(next, i, x);
      xi[i] = x;
      if (dfs(i + 1, next, used + 1, nontrivial || !engine.component_trivial(i, x))) return true;
      xi[i] = 0;
    }
    return dfs(i + 1, value, used, nontrivial);
  };
  if (dfs(0, engine.zero(), 0, false)) {
    out.independent = false;
    out.witness = ExponentVector{engine.elements(), xi, 1};
  }
  return out;
}

std::string to_string(RemovalRule rule) {
  switch (rule) {
    case RemovalRule::most_sampled:
      return "most_sampled";
    case RemovalRule::first_in_support:
      return "first_in_support";
    case RemovalRule::last_in_support:
      return "last_in_support";
  }
  return "most_sampled";
}

RemovalRule removal_rule_from_string(const std::string& name) {
  if (name == "most_sampled") return RemovalRule::most_sampled;
  if (name == "first_in_support") return RemovalRule::first_in_support;
  if (name == "last_in_support") return RemovalRule::last_in_support;
  throw ConfigError("unknown removal rule '" + name + "'");
}

ResidualResult independent_residual(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                                    RemovalRule rule, const RelationOptions& options) {
  ResidualResult out;
  out.elements = canonical_set(elements);
  const std::size_t samples = std::max<std::size_t>(options.sample_cap, 16);
  for (;;) {
    const auto relations =
        enumerate_relations(spec, out.elements, n, rule == RemovalRule::most_sampled ? samples : 1, options);
    if (relations.empty()) break;
    const auto support = relations.front().support(spec);
    GroupElement victim = support.front();
    if (rule == RemovalRule::last_in_support) {
      victim = support.back();
    } else if (rule == RemovalRule::most_sampled) {
      std::map<GroupElement, std::size_t> score;
      for (const auto& rel : relations) {
        for (const auto& g : rel.support(spec)) ++score[g];
      }
      std::size_t best = 0;
      for (const auto& g : support) {  // support is in canonical order, so ties keep the smallest
        if (score[g] > best) {
          best = score[g];
          victim = g;
        }
      }
    }
    out.elements.erase(std::find(out.elements.begin(), out.elements.end(), victim));
    out.removed.push_back(victim);
  }
  return out;
}

}  // namespace sidonlab
