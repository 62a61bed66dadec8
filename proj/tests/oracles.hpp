#pragma once

// Brute-force reference implementations. They only use machine integers and
// direct enumeration, never the library's DP / meet-in-the-middle / grid code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "sidonlab/group.hpp"
#include "sidonlab/polynomial.hpp"

namespace oracle {

using sidonlab::Complex;
using sidonlab::GroupElement;
using sidonlab::GroupSpec;
using sidonlab::Integer;

struct Small {
  std::vector<std::int64_t> free;
  std::vector<std::int64_t> torsion;
};

inline Small shrink(const GroupElement& g) {
  Small s;
  for (const auto& v : g.free()) s.free.push_back(v.convert_to<std::int64_t>());
  s.torsion = g.torsion();
  return s;
}

inline bool is_zero_combination(const GroupSpec& spec, const std::vector<Small>& els, const std::vector<int>& xi) {
  for (std::size_t j = 0; j < spec.free_rank(); ++j) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < els.size(); ++i) s += xi[i] * els[i].free[j];
    if (s != 0) return false;
  }
  for (std::size_t j = 0; j < spec.torsion_rank(); ++j) {
    const std::int64_t p = spec.moduli()[j];
    std::int64_t s = 0;
    for (std::size_t i = 0; i < els.size(); ++i) s = ((s + xi[i] * els[i].torsion[j]) % p + p) % p;
    if (s != 0) return false;
  }
  return true;
}

inline bool term_trivial(const GroupSpec& spec, const Small& g, int e) {
  return is_zero_combination(spec, {g}, {e});
}

// Visits every ξ ∈ {-n..n}^m in canonical order: lexicographic over the
// elements, exponent values ranked 0, 1, -1, 2, -2, ...
inline void for_each_vector(std::size_t m, int n, const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> ranked{0};
  for (int k = 1; k <= n; ++k) {
    ranked.push_back(k);
    ranked.push_back(-k);
  }
  std::vector<std::size_t> idx(m, 0);
  std::vector<int> xi(m, 0);
  while (true) {
    for (std::size_t i = 0; i < m; ++i) xi[i] = ranked[idx[i]];
    if (!visit(xi)) return;
    std::size_t pos = m;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < ranked.size()) break;
      idx[pos] = 0;
      if (pos == 0) return;
    }
    if (m == 0) return;
  }
}

// elements must already be in canonical order.
inline Integer relation_count(const GroupSpec& spec, const std::vector<GroupElement>& elements, int n) {
  std::vector<Small> els;
  for (const auto& g : elements) els.push_back(shrink(g));
  Integer count = 0;
  for_each_vector(els.size(), n, [&](const std::vector<int>& xi) {
    if (is_zero_combination(spec, els, xi)) ++count;
    return true;
  });
  return count;
}

inline std::optional<std::vector<int>> first_relation(const GroupSpec& spec, const std::vector<GroupElement>& elements,
                                                      int n) {
  std::vector<Small> els;
  for (const auto& g : elements) els.push_back(shrink(g));
  std::optional<std::vector<int>> found;
  for_each_vector(els.size(), n, [&](const std::vector<int>& xi) {
    if (!is_zero_combination(spec, els, xi)) return true;
    for (std::size_t i = 0; i < els.size(); ++i) {
      if (!term_trivial(spec, els[i], xi[i])) {
        found = xi;
        return false;
      }
    }
    return true;
  });
  return found;
}

inline bool independent(const GroupSpec& spec, const std::vector<GroupElement>& elements, int n) {
  return !first_relation(spec, elements, n).has_value();
}

// Σ over zero-sum ξ of w^{#supp ξ}.
inline double weighted_relation_sum(const GroupSpec& spec, const std::vector<GroupElement>& elements, int n,
                                    double w) {
  std::vector<Small> els;
  for (const auto& g : elements) els.push_back(shrink(g));
  double total = 0.0;
  for_each_vector(els.size(), n, [&](const std::vector<int>& xi) {
    if (is_zero_combination(spec, els, xi)) {
      int support = 0;
      for (int e : xi) support += e != 0;
      total += std::pow(w, support);
    }
    return true;
  });
  return total;
}

// Coefficient-map convolution on std::map, keyed by canonical element order.
using CoeffMap = std::map<GroupElement, Complex>;

inline CoeffMap to_map(const sidonlab::TrigPolynomial& p) {
  CoeffMap m;
  for (const auto& t : p.terms()) m[t.element] += t.coefficient;
  return m;
}

inline CoeffMap convolve(const GroupSpec& spec, const CoeffMap& a, const CoeffMap& b) {
  CoeffMap out;
  for (const auto& [ga, ca] : a) {
    for (const auto& [gb, cb] : b) out[spec.combine(ga, gb)] += ca * cb;
  }
  return out;
}

// Direct evaluation Σ c e(γ·x) on a one-dimensional torus.
inline Complex eval_z(const CoeffMap& m, double x) {
  Complex s = 0.0;
  for (const auto& [g, c] : m) {
    const double f = g.free()[0].convert_to<double>();
    s += c * std::polar(1.0, 2.0 * std::numbers::pi * std::fmod(f * x, 1.0));
  }
  return s;
}

inline double scan_max_abs_z(const CoeffMap& m, std::size_t points) {
  double best = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    best = std::max(best, std::abs(eval_z(m, (static_cast<double>(k) + 0.5) / static_cast<double>(points))));
  }
  return best;
}

inline double scan_min_re_z(const CoeffMap& m, std::size_t points) {
  double best = 1e300;
  for (std::size_t k = 0; k < points; ++k) {
    best = std::min(best, eval_z(m, static_cast<double>(k) / static_cast<double>(points)).real());
  }
  return best;
}

inline std::vector<GroupElement> ints(std::initializer_list<long> values) {
  const auto z = GroupSpec::integers();
  std::vector<GroupElement> out;
  for (long v : values) out.push_back(z.scalar(v));
  return out;
}

}  // namespace oracle
