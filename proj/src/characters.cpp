#include "primexp/characters.hpp"

#include "primexp/error.hpp"
#include "primexp/expsum.hpp"

#include <numeric>

namespace primexp {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t primitive_root_mod_prime(std::uint64_t p) {
  if (p == 2) return 1;
  const auto factors = factorize(p - 1);
  for (std::uint64_t g = 2;; ++g) {
    bool ok = true;
    for (const auto& [r, e] : factors) {
      (void)e;
      if (powmod(g, (p - 1) / r, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

// x mod q with x = r mod pk and x = 1 mod q/pk.
std::uint64_t crt_lift(std::uint64_t r, std::uint64_t pk, std::uint64_t q) {
  const std::uint64_t rest = q / pk;
  if (rest == 1) return r % q;
  // x = 1 + rest * t, need rest * t = r - 1 (mod pk)
  const auto inv = [](std::int64_t a, std::int64_t m) {
    std::int64_t g = m, x = 0, x1 = 1, a1 = a % m;
    while (a1) {
      const std::int64_t t = g / a1;
      std::tie(g, a1) = std::make_tuple(a1, g - t * a1);
      std::tie(x, x1) = std::make_tuple(x1, x - t * x1);
    }
    return static_cast<std::uint64_t>(((x % m) + m) % m);
  };
  const std::uint64_t t = mulmod((r + pk - 1) % pk, inv(static_cast<std::int64_t>(rest % pk), static_cast<std::int64_t>(pk)), pk);
  return (1 + rest * t) % q;
}

}  // namespace

CharacterTable::CharacterTable(std::uint64_t q) : q_(q), roots_(1), units_q_(q) {}

CharacterTable build_characters(std::uint64_t q) {
  require(q >= 1, ErrorCode::InvalidArgument, "modulus must be positive");
  require(q <= kMaxCharacterModulus, ErrorCode::QTooLarge,
          "q = " + std::to_string(q) + " exceeds " + std::to_string(kMaxCharacterModulus));
  CharacterTable tab(q);

  for (const auto& [p, k] : factorize(q)) {
    std::uint64_t pk = 1;
    for (unsigned i = 0; i < k; ++i) pk *= p;
    CharacterTable::Component comp;
    comp.prime_power = pk;
    auto add_slot = [&](std::uint64_t g_local, std::uint64_t order) {
      comp.slots.push_back(tab.gens_.size());
      tab.gens_.push_back({crt_lift(g_local, pk, q), order, pk});
      comp.logs.emplace_back(pk, 0);
    };
    if (p == 2) {
      if (k == 2) {
        add_slot(3, 2);
        comp.logs[0][3] = 1;
      } else if (k >= 3) {
        // (Z/2^k)^* = <-1> x <5>
        const std::uint64_t half = pk / 4;
        add_slot(pk - 1, 2);
        add_slot(5, half);
        std::uint64_t five = 1;
        for (std::uint64_t b = 0; b < half; ++b) {
          comp.logs[0][five] = 0;
          comp.logs[1][five] = static_cast<std::uint32_t>(b);
          comp.logs[0][pk - five] = 1;
          comp.logs[1][pk - five] = static_cast<std::uint32_t>(b);
          five = five * 5 % pk;
        }
      }
    } else {
      std::uint64_t g = primitive_root_mod_prime(p);
      if (k >= 2 && powmod(g, p - 1, p * p) == 1) g += p;
      const std::uint64_t order = pk / p * (p - 1);
      add_slot(g, order);
      std::uint64_t v = 1;
      for (std::uint64_t j = 0; j < order; ++j) {
        comp.logs[0][v] = static_cast<std::uint32_t>(j);
        v = v * g % pk;
      }
    }
    tab.components_.push_back(std::move(comp));
  }

  for (const auto& gen : tab.gens_) {
    tab.count_ *= gen.order;
    tab.lcm_ = std::lcm(tab.lcm_, gen.order);
  }
  tab.roots_ = UnitTable(tab.lcm_);
  tab.coprime_.assign(q, 0);
  for (std::uint64_t n = 0; n < q; ++n) tab.coprime_[n] = gcd(n, q) == 1;
  return tab;
}

std::vector<std::uint64_t> CharacterTable::exponents(std::uint64_t chi) const {
  require(chi < count_, ErrorCode::InvalidArgument, "character index out of range");
  std::vector<std::uint64_t> out(gens_.size());
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    out[i] = chi % gens_[i].order;
    chi /= gens_[i].order;
  }
  return out;
}

std::uint64_t CharacterTable::index_of(const std::vector<std::uint64_t>& exps) const {
  require(exps.size() == gens_.size(), ErrorCode::InvalidArgument, "exponent vector length mismatch");
  std::uint64_t idx = 0;
  for (std::size_t i = gens_.size(); i-- > 0;) {
    require(exps[i] < gens_[i].order, ErrorCode::InvalidArgument, "exponent out of range");
    idx = idx * gens_[i].order + exps[i];
  }
  return idx;
}

std::uint64_t CharacterTable::conjugate(std::uint64_t chi) const {
  auto e = exponents(chi);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = (gens_[i].order - e[i]) % gens_[i].order;
  return index_of(e);
}

std::int64_t CharacterTable::log_value(std::uint64_t chi, std::int64_t n) const {
  require(chi < count_, ErrorCode::InvalidArgument, "character index out of range");
  const auto qi = static_cast<std::int64_t>(q_);
  const auto r = static_cast<std::uint64_t>(((n % qi) + qi) % qi);
  if (!coprime_[r]) return -1;
  std::uint64_t acc = 0;
  std::uint64_t rest = chi;
  for (const auto& comp : components_) {
    const std::uint64_t local = r % comp.prime_power;
    for (std::size_t s = 0; s < comp.slots.size(); ++s) {
      const auto& gen = gens_[comp.slots[s]];
      // slots are allocated in component order, so mixed-radix digits come out in sequence
      const std::uint64_t j = rest % gen.order;
      rest /= gen.order;
      acc = (acc + mulmod(j * comp.logs[s][local] % gen.order, lcm_ / gen.order, lcm_)) % lcm_;
    }
  }
  return static_cast<std::int64_t>(acc);
}

std::complex<double> CharacterTable::value(std::uint64_t chi, std::int64_t n) const {
  const std::int64_t k = log_value(chi, n);
  if (k < 0) return {0.0, 0.0};
  return roots_[static_cast<std::uint64_t>(k)];
}

std::vector<std::uint64_t> CharacterTable::log_values_at(std::int64_t n) const {
  const auto qi = static_cast<std::int64_t>(q_);
  const auto r = static_cast<std::uint64_t>(((n % qi) + qi) % qi);
  require(coprime_[r] != 0, ErrorCode::NonCoprime, "need gcd(n, q) = 1");
  // step[i]: change of the log when digit i goes up by one
  std::vector<std::uint64_t> step(gens_.size());
  for (const auto& comp : components_)
    for (std::size_t s = 0; s < comp.slots.size(); ++s) {
      const auto& gen = gens_[comp.slots[s]];
      step[comp.slots[s]] = mulmod(comp.logs[s][r % comp.prime_power] % gen.order, lcm_ / gen.order, lcm_);
    }
  std::vector<std::uint64_t> out(count_);
  std::vector<std::uint64_t> digit(gens_.size(), 0);
  std::uint64_t k = 0;
  for (std::uint64_t chi = 0; chi < count_; ++chi) {
    out[chi] = k;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      k = (k + step[i]) % lcm_;
      if (++digit[i] < gens_[i].order) break;
      digit[i] = 0;  // the full cycle brought k back to where this digit started
    }
  }
  return out;
}

std::complex<double> CharacterTable::gauss_sum(std::uint64_t chi) const {
  require(chi < count_, ErrorCode::InvalidArgument, "character index out of range");
  ComplexAcc acc;
  for (std::uint64_t b = 0; b < q_; ++b)
    if (coprime_[b]) acc.add(units_q_[b] * value(chi, static_cast<std::int64_t>(b)));
  return acc.value();
}

const std::vector<std::complex<double>>& CharacterTable::gauss_sums() const {
  std::call_once(gauss_->once, [this] {
    // same terms in the same order as gauss_sum(chi), one residue at a time
    std::vector<ComplexAcc> acc(count_);
    for (std::uint64_t b = 0; b < q_; ++b) {
      if (!coprime_[b]) continue;
      const auto logs = log_values_at(static_cast<std::int64_t>(b));
      for (std::uint64_t chi = 0; chi < count_; ++chi) acc[chi].add(units_q_[b] * roots_[logs[chi]]);
    }
    gauss_->values.resize(count_);
    for (std::uint64_t chi = 0; chi < count_; ++chi) gauss_->values[chi] = acc[chi].value();
  });
  return gauss_->values;
}

std::complex<double> gauss_sum(const CharacterTable& tab, std::uint64_t chi) { return tab.gauss_sum(chi); }

std::complex<double> psi_chi(const ArithTable& table, const CharacterTable& tab, std::uint64_t chi,
                             std::uint64_t x) {
  require(x >= 1, ErrorCode::InvalidArgument, "x must be positive");
  require(table.covers(1, x), ErrorCode::TableGap,
          "table does not cover [1, " + std::to_string(x) + "]");
  ComplexAcc acc;
  table.for_each_nonzero(1, x, [&](std::uint64_t n, double f) {
    if (gcd(n, tab.q()) == 1) acc.add(f * tab.value(chi, static_cast<std::int64_t>(n)));
  });
  return acc.value();
}

std::vector<std::complex<double>> psi_chi_all(const ArithTable& table, const CharacterTable& tab, std::uint64_t x) {
  require(x >= 1, ErrorCode::InvalidArgument, "x must be positive");
  require(table.covers(1, x), ErrorCode::TableGap,
          "table does not cover [1, " + std::to_string(x) + "]");
  const std::uint64_t q = tab.q();
  std::vector<RealAcc> sums(q);
  table.for_each_nonzero(1, x, [&](std::uint64_t n, double f) { sums[n % q].add(f); });
  std::vector<ComplexAcc> acc(tab.size());
  for (std::uint64_t b = 0; b < q; ++b) {
    const double s = sums[b].value();
    if (s == 0.0 || gcd(b, q) != 1) continue;
    const auto logs = tab.log_values_at(static_cast<std::int64_t>(b));
    for (std::uint64_t chi = 0; chi < tab.size(); ++chi) acc[chi].add(s * tab.root(logs[chi]));
  }
  std::vector<std::complex<double>> out(tab.size());
  for (std::uint64_t chi = 0; chi < tab.size(); ++chi) out[chi] = acc[chi].value();
  return out;
}

std::complex<double> reconstruct_additive(const CharacterTable& tab, std::int64_t a, std::int64_t n) {
  const auto q = static_cast<std::int64_t>(tab.q());
  const auto ua = static_cast<std::uint64_t>(((a % q) + q) % q);
  const auto un = static_cast<std::uint64_t>(((n % q) + q) % q);
  require(gcd(ua, tab.q()) == 1 && gcd(un, tab.q()) == 1, ErrorCode::NonCoprime,
          "need gcd(a, q) = gcd(n, q) = 1");
  const auto& G = tab.gauss_sums();
  // chi(a) chi(n) = chi(an), and G(conj chi) = chi(-1) conj(G(chi))
  const auto an = static_cast<std::int64_t>(static_cast<u128>(ua) * un % tab.q());
  const auto logs = tab.log_values_at(an);
  const auto minus_one = tab.log_values_at(-1);
  const std::uint64_t L = tab.order_lcm();
  ComplexAcc acc;
  for (std::uint64_t chi = 0; chi < tab.size(); ++chi)
    acc.add(tab.root((logs[chi] + minus_one[chi]) % L) * std::conj(G[chi]));
  return acc.value() / static_cast<double>(tab.size());
}

}  // namespace primexp
