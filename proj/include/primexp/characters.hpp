#pragma once

// Dirichlet characters mod q and their Gauss sums.

#include "primexp/arith.hpp"
#include "primexp/phase.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

namespace primexp {

inline constexpr std::uint64_t kMaxCharacterModulus = 100000;

struct CyclicGenerator {
  std::uint64_t g = 1;       // generator as a residue mod q (1 at the other prime powers)
  std::uint64_t order = 1;
  std::uint64_t prime_power = 1;
};

/// The group of characters mod q. A character is indexed by its exponent vector
/// (j_1, ..., j_r) in mixed radix over the generator orders; index 0 is principal.
/// chi(g_i) = e(j_i / d_i). Immutable once built, so concurrent reads are safe.
class CharacterTable {
 public:
  std::uint64_t q() const noexcept { return q_; }
  std::uint64_t size() const noexcept { return count_; }
  const std::vector<CyclicGenerator>& generators() const noexcept { return gens_; }
  /// lcm of the generator orders; every value is e(k/L).
  std::uint64_t order_lcm() const noexcept { return lcm_; }

  std::vector<std::uint64_t> exponents(std::uint64_t chi) const;
  std::uint64_t index_of(const std::vector<std::uint64_t>& exponents) const;
  std::uint64_t principal() const noexcept { return 0; }
  std::uint64_t conjugate(std::uint64_t chi) const;

  /// k with chi(n) = e(k/L), or -1 when gcd(n, q) > 1.
  std::int64_t log_value(std::uint64_t chi, std::int64_t n) const;
  std::complex<double> value(std::uint64_t chi, std::int64_t n) const;
  /// log_value(chi, n) for every chi in index order; gcd(n, q) must be 1.
  std::vector<std::uint64_t> log_values_at(std::int64_t n) const;
  /// e(k/L).
  const std::complex<double>& root(std::uint64_t k) const noexcept { return roots_[k]; }

  /// G(chi) by the direct phi(q)-term sum.
  std::complex<double> gauss_sum(std::uint64_t chi) const;
  /// All Gauss sums, computed once on first use.
  const std::vector<std::complex<double>>& gauss_sums() const;

  const UnitTable& additive_units() const noexcept { return units_q_; }

 private:
  friend CharacterTable build_characters(std::uint64_t q);
  CharacterTable(std::uint64_t q);

  struct Component {
    std::uint64_t prime_power = 1;
    // generator slots owned by this component and their discrete-log tables,
    // indexed by the residue mod prime_power (unused for non-units)
    std::vector<std::size_t> slots;
    std::vector<std::vector<std::uint32_t>> logs;
  };

  std::uint64_t q_;
  std::uint64_t count_ = 1;
  std::uint64_t lcm_ = 1;
  std::vector<CyclicGenerator> gens_;
  std::vector<Component> components_;
  std::vector<std::uint8_t> coprime_;  // gcd(n, q) == 1 for n mod q
  UnitTable roots_;                    // e(k/L)
  UnitTable units_q_;                  // e(k/q)

  struct GaussCache {
    std::once_flag once;
    std::vector<std::complex<double>> values;
  };
  std::shared_ptr<GaussCache> gauss_ = std::make_shared<GaussCache>();
};

/// q <= 10^5, else QTooLarge.
CharacterTable build_characters(std::uint64_t q);

std::complex<double> gauss_sum(const CharacterTable& tab, std::uint64_t chi);

/// psi(x, chi) = sum_{n <= x} f(n) chi(n), compensated. The table must cover [1, x].
std::complex<double> psi_chi(const ArithTable& table, const CharacterTable& tab, std::uint64_t chi,
                             std::uint64_t x);

/// psi(x, chi) for every chi in index order, from the residue-class sums of f mod q.
std::vector<std::complex<double>> psi_chi_all(const ArithTable& table, const CharacterTable& tab, std::uint64_t x);
/// (1/phi(q)) sum_chi chi(a) G(conj chi) chi(n), which equals e(an/q) for
/// gcd(a, q) = gcd(n, q) = 1 (NonCoprime otherwise).
std::complex<double> reconstruct_additive(const CharacterTable& tab, std::int64_t a, std::int64_t n);

}  // namespace primexp
