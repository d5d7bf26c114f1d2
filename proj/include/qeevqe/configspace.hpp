#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qeevqe {

/// Occupation bitstring; bit i is the occupation of spin-orbital i.
struct Configuration {
  std::uint64_t bits = 0;
  std::size_t n_spin_orbitals = 0;

  bool occupied(std::size_t i) const { return (bits >> i) & 1U; }
  int electron_count() const;
  /// Little-endian rendering, orbital 0 rightmost: "0011".
  std::string to_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// ceil(log2(count)); zero for a single configuration.
std::size_t qubits_for(std::size_t count);

/// All configurations with n_alpha electrons on even and n_beta on odd
/// spin-orbitals, in ascending integer order. This order defines the
/// encoding map: member k <-> qubit basis state |k>.
class ConfigurationSet {
 public:
  static ConfigurationSet enumerate(std::size_t n_spin_orbitals, int n_alpha, int n_beta);

  std::size_t n_spin_orbitals() const { return n_spin_orbitals_; }
  int n_alpha() const { return n_alpha_; }
  int n_beta() const { return n_beta_; }
  int n_electrons() const { return n_alpha_ + n_beta_; }
  std::size_t size() const { return members_.size(); }
  std::size_t qubit_count() const { return qubits_for(members_.size()); }
  const std::vector<std::uint64_t>& members() const { return members_; }

  Configuration member(std::size_t k) const { return {members_.at(k), n_spin_orbitals_}; }

  /// Position of `c` in canonical order; LookupError if absent.
  std::size_t encode_index(const Configuration& c) const;
  std::optional<std::size_t> find(std::uint64_t bits) const;
  Configuration decode_index(std::size_t k) const;

 private:
  std::size_t n_spin_orbitals_ = 0;
  int n_alpha_ = 0;
  int n_beta_ = 0;
  std::vector<std::uint64_t> members_;
};

struct ExcitationResult {
  int sign = 1;
  Configuration config;
};

/// Applies E_pq = a+_p a_q. Returns nothing when the excitation annihilates
/// the configuration. The sign is the parity of the occupied orbitals
/// strictly between p and q.
std::optional<ExcitationResult> excitation_apply(const Configuration& c, std::size_t p, std::size_t q);

/// Configuration occupying the lowest n_alpha even and n_beta odd spin-orbitals.
Configuration aufbau_configuration(std::size_t n_spin_orbitals, int n_alpha, int n_beta);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace qeevqe
