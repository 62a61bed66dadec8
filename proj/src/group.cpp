#include "sidonlab/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/functional/hash.hpp>

#include "sidonlab/errors.hpp"

namespace sidonlab {

namespace {

std::int64_t reduce_mod(std::int64_t value, std::int64_t modulus) {
  std::int64_t r = value % modulus;
  return r < 0 ? r + modulus : r;
}

std::int64_t reduce_mod(const Integer& value, std::int64_t modulus) {
  Integer r = value % modulus;
  if (r < 0) r += modulus;
  return r.convert_to<std::int64_t>();
}

}  // namespace

bool GroupElement::is_identity() const noexcept {
  return std::all_of(free_.begin(), free_.end(), [](const Integer& v) { return v == 0; }) &&
         std::all_of(torsion_.begin(), torsion_.end(), [](std::int64_t v) { return v == 0; });
}

std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
  const auto n = std::min(a.free_.size(), b.free_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.free_[i] < b.free_[i]) return std::strong_ordering::less;
    if (b.free_[i] < a.free_[i]) return std::strong_ordering::greater;
  }
  if (auto c = a.free_.size() <=> b.free_.size(); c != 0) return c;
  return a.torsion_ <=> b.torsion_;
}

std::string GroupElement::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < free_.size(); ++i) os << (i ? "," : "") << free_[i];
  if (!torsion_.empty()) {
    os << (free_.empty() ? "" : ";");
    for (std::size_t i = 0; i < torsion_.size(); ++i) os << (i ? "," : "") << torsion_[i];
  }
  os << ")";
  return os.str();
}

std::size_t GroupElementHash::operator()(const GroupElement& g) const noexcept {
  std::size_t seed = g.free().size();
  for (const auto& v : g.free()) boost::hash_combine(seed, boost::hash<Integer>{}(v));
  for (auto v : g.torsion()) boost::hash_combine(seed, v);
  return seed;
}

GroupSpec::GroupSpec(std::size_t free_rank, std::vector<std::int64_t> moduli)
    : free_rank_(free_rank), moduli_(std::move(moduli)) {
  for (auto p : moduli_) {
    if (p < 2) throw StructuralError("torsion modulus must be >= 2, got " + std::to_string(p));
  }
}

GroupElement GroupSpec::element(std::vector<Integer> free, std::vector<std::int64_t> torsion) const {
  if (free.size() != free_rank_ || torsion.size() != moduli_.size()) {
    throw StructuralError("element shape (" + std::to_string(free.size()) + "," +
                          std::to_string(torsion.size()) + ") does not match group " + to_string());
  }
  for (std::size_t i = 0; i < torsion.size(); ++i) torsion[i] = reduce_mod(torsion[i], moduli_[i]);
  return GroupElement(std::move(free), std::move(torsion));
}

GroupElement GroupSpec::scalar(const Integer& value) const {
  if (free_rank_ == 1 && moduli_.empty()) return GroupElement({value}, {});
  if (free_rank_ == 0 && moduli_.size() == 1) return GroupElement({}, {reduce_mod(value, moduli_[0])});
  throw StructuralError("scalar elements need a one-coordinate group, got " + to_string());
}

GroupElement GroupSpec::identity() const {
  return GroupElement(std::vector<Integer>(free_rank_), std::vector<std::int64_t>(moduli_.size(), 0));
}

void GroupSpec::check(const GroupElement& g) const {
  if (g.free().size() != free_rank_ || g.torsion().size() != moduli_.size()) {
    throw StructuralError("element " + g.to_string() + " does not belong to group " + to_string());
  }
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    if (g.torsion()[i] < 0 || g.torsion()[i] >= moduli_[i]) {
      throw StructuralError("unreduced residue in element " + g.to_string());
    }
  }
}

void GroupSpec::check(const DualPoint& x) const {
  if (x.free.size() != free_rank_ || x.torsion.size() != moduli_.size()) {
    throw StructuralError("dual point shape does not match group " + to_string());
  }
}

GroupElement GroupSpec::combine(const GroupElement& a, const GroupElement& b) const {
  check(a);
  check(b);
  std::vector<Integer> free(free_rank_);
  for (std::size_t i = 0; i < free_rank_; ++i) free[i] = a.free()[i] + b.free()[i];
  std::vector<std::int64_t> torsion(moduli_.size());
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    torsion[i] = (a.torsion()[i] + b.torsion()[i]) % moduli_[i];
  }
  return GroupElement(std::move(free), std::move(torsion));
}

GroupElement GroupSpec::inverse(const GroupElement& a) const {
  check(a);
  std::vector<Integer> free(free_rank_);
  for (std::size_t i = 0; i < free_rank_; ++i) free[i] = -a.free()[i];
  std::vector<std::int64_t> torsion(moduli_.size());
  for (std::size_t i = 0; i < moduli_.size(); ++i) torsion[i] = reduce_mod(-a.torsion()[i], moduli_[i]);
  return GroupElement(std::move(free), std::move(torsion));
}

GroupElement GroupSpec::power(const GroupElement& a, const Integer& k) const {
  check(a);
  std::vector<Integer> free(free_rank_);
  for (std::size_t i = 0; i < free_rank_; ++i) free[i] = a.free()[i] * k;
  std::vector<std::int64_t> torsion(moduli_.size());
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const auto p = moduli_[i];
    const auto kr = reduce_mod(k, p);
    torsion[i] = static_cast<std::int64_t>((static_cast<__int128>(a.torsion()[i]) * kr) % p);
  }
  return GroupElement(std::move(free), std::move(torsion));
}

double fractional_product(const Integer& k, double x) {
  if (x == 0.0 || k == 0) return 0.0;
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent
  // x = m * 2^(exponent - 53) with m a 53-bit integer
  const auto m = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  const int shift = 53 - exponent;
  if (shift <= 0) {
    // x is an integer, so k*x is too.
    return 0.0;
  }
  const Integer denom = Integer(1) << shift;
  Integer r = (k * m) % denom;
  if (r < 0) r += denom;
  if (r == 0) return 0.0;
  // r < 2^shift; keep the top 64 bits before converting.
  const unsigned bits = static_cast<unsigned>(msb(r)) + 1;
  if (bits > 64) {
    const unsigned drop = bits - 64;
    const auto top = static_cast<long double>((r >> drop).convert_to<std::uint64_t>());
    return static_cast<double>(std::ldexp(top, static_cast<int>(drop) - shift));
  }
  const auto value = static_cast<long double>(r.convert_to<std::uint64_t>());
  return static_cast<double>(std::ldexp(value, -shift));
}

std::complex<double> GroupSpec::evaluate(const GroupElement& gamma, const DualPoint& x) const {
  check(gamma);
  check(x);
  long double phase = 0.0L;
  for (std::size_t j = 0; j < free_rank_; ++j) phase += fractional_product(gamma.free()[j], x.free[j]);
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const auto p = moduli_[i];
    const auto r = static_cast<std::int64_t>(
        (static_cast<__int128>(gamma.torsion()[i]) * reduce_mod(x.torsion[i], p)) % p);
    phase += static_cast<long double>(r) / static_cast<long double>(p);
  }
  phase -= std::floor(phase);
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase);
  return {std::cos(angle), std::sin(angle)};
}

std::optional<Integer> GroupSpec::element_order(const GroupElement& gamma) const {
  check(gamma);
  for (const auto& v : gamma.free()) {
    if (v != 0) return std::nullopt;
  }
  Integer order = 1;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const auto p = moduli_[i];
    const auto local = p / std::gcd(p, gamma.torsion()[i]);
    order = boost::multiprecision::lcm(order, Integer(local));
  }
  return order;
}

DualPoint GroupSpec::point(std::vector<double> free, std::vector<std::int64_t> torsion) const {
  DualPoint x{std::move(free), std::move(torsion)};
  check(x);
  for (auto& v : x.free) v -= std::floor(v);
  for (std::size_t i = 0; i < moduli_.size(); ++i) x.torsion[i] = reduce_mod(x.torsion[i], moduli_[i]);
  return x;
}

std::string GroupSpec::to_string() const {
  std::ostringstream os;
  os << "Z^" << free_rank_;
  for (auto p : moduli_) os << " + Z_" << p;
  return os.str();
}

void require_same_spec(const GroupSpec& a, const GroupSpec& b) {
  if (!(a == b)) throw StructuralError("group mismatch: " + a.to_string() + " vs " + b.to_string());
}

std::vector<GroupElement> canonical_set(std::span<const GroupElement> elements) {
  std::vector<GroupElement> out(elements.begin(), elements.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PowerSetResult power_set(const GroupSpec& spec, std::span<const GroupElement> elements,
                         const Integer& k) {
  if (k < 1) throw DomainError("power_set needs k >= 1");
  std::vector<GroupElement> powers;
  powers.reserve(elements.size());
  for (const auto& g : elements) powers.push_back(spec.power(g, k));
  const auto distinct_inputs = canonical_set(elements).size();
  PowerSetResult result{canonical_set(powers), false};
  result.collisions = result.elements.size() < distinct_inputs;
  return result;
}

std::vector<GroupElement> translate_set(const GroupSpec& spec, std::span<const GroupElement> elements,
                                        const GroupElement& shift) {
  std::vector<GroupElement> out;
  out.reserve(elements.size());
  for (const auto& g : elements) out.push_back(spec.combine(g, shift));
  return out;
}

}  // namespace sidonlab
