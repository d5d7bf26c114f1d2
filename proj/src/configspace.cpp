#include "qeevqe/configspace.hpp"

#include <algorithm>
#include <bit>

#include "qeevqe/errors.hpp"

namespace qeevqe {

namespace {

constexpr std::size_t kMaxSpinOrbitals = 64;
constexpr std::size_t kMaxSectorSize = std::size_t{1} << 24;

// Spreads the bits of `v` onto even (offset 0) or odd (offset 1) positions.
std::uint64_t interleave(std::uint64_t v, int offset) {
  std::uint64_t out = 0;
  for (int i = 0; v != 0; ++i, v >>= 1) {
    if (v & 1U) out |= std::uint64_t{1} << (2 * i + offset);
  }
  return out;
}

// All n-bit masks with k bits set, ascending.
std::vector<std::uint64_t> combinations(std::size_t n, int k) {
  std::vector<std::uint64_t> out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  std::uint64_t v = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (v < limit) {
    out.push_back(v);
    // Gosper's hack
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
  return out;
}

}  // namespace

int Configuration::electron_count() const { return std::popcount(bits); }

std::string Configuration::to_string() const {
  std::string s(n_spin_orbitals, '0');
  for (std::size_t i = 0; i < n_spin_orbitals; ++i) {
    if (occupied(i)) s[n_spin_orbitals - 1 - i] = '1';
  }
  return s;
}

std::size_t qubits_for(std::size_t count) {
  std::size_t q = 0;
  while ((std::size_t{1} << q) < count) ++q;
  return q;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

ConfigurationSet ConfigurationSet::enumerate(std::size_t n_spin_orbitals, int n_alpha, int n_beta) {
  if (n_spin_orbitals == 0 || n_spin_orbitals % 2 != 0) {
    throw ValidationError("spin-orbital count must be positive and even");
  }
  if (n_spin_orbitals > kMaxSpinOrbitals) throw ResourceError("at most 64 spin-orbitals supported");
  const std::size_t n_spatial = n_spin_orbitals / 2;
  if (n_alpha < 0 || n_beta < 0 || static_cast<std::size_t>(n_alpha) > n_spatial ||
      static_cast<std::size_t>(n_beta) > n_spatial) {
    throw ValidationError("sector (" + std::to_string(n_alpha) + "a, " + std::to_string(n_beta) +
                          "b) does not fit in " + std::to_string(n_spatial) + " spatial orbitals");
  }
  const std::uint64_t count = binomial(n_spatial, static_cast<std::uint64_t>(n_alpha)) *
                              binomial(n_spatial, static_cast<std::uint64_t>(n_beta));
  if (count > kMaxSectorSize) throw ResourceError("sector has " + std::to_string(count) + " configurations");

  ConfigurationSet set;
  set.n_spin_orbitals_ = n_spin_orbitals;
  set.n_alpha_ = n_alpha;
  set.n_beta_ = n_beta;
  const auto alphas = combinations(n_spatial, n_alpha);
  const auto betas = combinations(n_spatial, n_beta);
  set.members_.reserve(count);
  for (std::uint64_t a : alphas) {
    const std::uint64_t ea = interleave(a, 0);
    for (std::uint64_t b : betas) set.members_.push_back(ea | interleave(b, 1));
  }
  std::sort(set.members_.begin(), set.members_.end());
  return set;
}

std::optional<std::size_t> ConfigurationSet::find(std::uint64_t bits) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), bits);
  if (it == members_.end() || *it != bits) return std::nullopt;
  return static_cast<std::size_t>(it - members_.begin());
}

std::size_t ConfigurationSet::encode_index(const Configuration& c) const {
  if (c.n_spin_orbitals != n_spin_orbitals_) throw LookupError("configuration has the wrong orbital count");
  auto k = find(c.bits);
  if (!k) throw LookupError("configuration " + c.to_string() + " is not in the sector");
  return *k;
}

Configuration ConfigurationSet::decode_index(std::size_t k) const {
  if (k >= members_.size()) {
    throw LookupError("index " + std::to_string(k) + " outside the " + std::to_string(members_.size()) +
                      "-member sector");
  }
  return {members_[k], n_spin_orbitals_};
}

std::optional<ExcitationResult> excitation_apply(const Configuration& c, std::size_t p, std::size_t q) {
  if (p >= c.n_spin_orbitals || q >= c.n_spin_orbitals) {
    throw ValidationError("excitation index out of range for " + std::to_string(c.n_spin_orbitals) +
                          " spin-orbitals");
  }
  if (!c.occupied(q)) return std::nullopt;
  if (p == q) return ExcitationResult{1, c};
  if (c.occupied(p)) return std::nullopt;
  const std::size_t lo = std::min(p, q);
  const std::size_t hi = std::max(p, q);
  // occupied orbitals strictly between lo and hi
  const std::uint64_t between = ((std::uint64_t{1} << hi) - 1) & ~((std::uint64_t{2} << lo) - 1);
  const int sign = (std::popcount(c.bits & between) % 2 == 0) ? 1 : -1;
  Configuration out = c;
  out.bits = (c.bits & ~(std::uint64_t{1} << q)) | (std::uint64_t{1} << p);
  return ExcitationResult{sign, out};
}

Configuration aufbau_configuration(std::size_t n_spin_orbitals, int n_alpha, int n_beta) {
  const std::uint64_t a = n_alpha > 0 ? (std::uint64_t{1} << n_alpha) - 1 : 0;
  const std::uint64_t b = n_beta > 0 ? (std::uint64_t{1} << n_beta) - 1 : 0;
  return {interleave(a, 0) | interleave(b, 1), n_spin_orbitals};
}

}  // namespace qeevqe
