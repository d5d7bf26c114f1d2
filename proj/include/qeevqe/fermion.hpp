#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qeevqe {

/// One- and two-electron integrals of the second-quantized Hamiltonian
///
///   H = core + sum_pq h1(p,q) a+_p a_q + 1/2 sum_pqrs h2(p,q,r,s) a+_p a+_q a_r a_s
///
/// over N spin-orbitals. Spin-orbital 2i is the alpha and 2i+1 the beta
/// component of spatial orbital i. h2 is in physicist ordering; for a
/// spin-restricted table h2(p,q,r,s) = (ps|qr) when spin(p) == spin(s) and
/// spin(q) == spin(r), and zero otherwise, where (ij|kl) are chemist-notation
/// spatial integrals.
///
/// Two storage modes: restricted (spatial integrals with 8-fold permutational
/// symmetry, which is what FCIDUMP carries) and general spin-orbital tensors.
class IntegralTable {
 public:
  /// Zero restricted table.
  static IntegralTable restricted(std::size_t n_spatial, int n_electrons, int ms2 = 0);
  /// Zero general table over N spin-orbitals (N even).
  static IntegralTable spin_orbital(std::size_t n_spin_orbitals, int n_electrons, int ms2 = 0);

  std::size_t n_spin_orbitals() const { return 2 * n_spatial_; }
  std::size_t n_spatial() const { return n_spatial_; }
  int n_electrons() const { return n_electrons_; }
  int ms2() const { return ms2_; }
  double core_energy() const { return core_; }
  bool is_restricted() const { return restricted_; }

  double h1(std::size_t p, std::size_t q) const;
  double h2(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const;

  /// Restricted mode only. Sets h(i,j) and h(j,i).
  void set_spatial_h1(std::size_t i, std::size_t j, double v);
  /// Restricted mode only. Sets (ij|kl) and its 7 symmetry partners.
  void set_spatial_eri(std::size_t i, std::size_t j, std::size_t k, std::size_t l, double v);
  double spatial_h1(std::size_t i, std::size_t j) const;
  double spatial_eri(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const;

  /// General mode only; sets a single element with no symmetrization.
  void set_h1(std::size_t p, std::size_t q, double v);
  void set_h2(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v);

  void set_core_energy(double e) { core_ = e; }
  void set_electrons(int n_electrons, int ms2);

  /// Checks the symmetry invariants (h1 symmetric, h2(p,q,r,s) == h2(s,r,q,p)).
  void validate(double tol = 1e-10) const;

  /// Converts a restricted table into general storage; identity otherwise.
  IntegralTable to_spin_orbital() const;

  /// Number of alpha / beta electrons implied by n_electrons and ms2.
  int n_alpha() const { return (n_electrons_ + ms2_) / 2; }
  int n_beta() const { return (n_electrons_ - ms2_) / 2; }

 private:
  IntegralTable() = default;
  static std::size_t pair_index(std::size_t i, std::size_t j);
  std::size_t eri_index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const;
  void check_spin_orbital(std::size_t p) const;

  bool restricted_ = true;
  std::size_t n_spatial_ = 0;
  int n_electrons_ = 0;
  int ms2_ = 0;
  double core_ = 0.0;
  std::vector<double> h1_;   // n_spatial^2 (restricted) or N^2
  std::vector<double> eri_;  // packed 8-fold (restricted) or N^4
};

/// Parses FCIDUMP text. Integrals are chemist notation over 1-based spatial
/// indices; `v i j 0 0` is one-electron, `v 0 0 0 0` the core energy.
IntegralTable parse_fcidump(std::string_view text);
IntegralTable read_fcidump(const std::string& path);

/// Serializes a spin-restricted table (17 significant digits, so that
/// parse(write(t)) reproduces every double bitwise). General tables are
/// accepted only if they are spin-adapted.
std::string write_fcidump(const IntegralTable& t);

/// Partition of the spatial orbitals into frozen (doubly occupied), removed
/// (empty) and active sets. All lists sorted ascending.
struct ActiveSpaceSpec {
  std::vector<std::size_t> frozen;
  std::vector<std::size_t> removed;
  std::vector<std::size_t> active;

  /// Active window [first, last] (inclusive); lower orbitals frozen, higher removed.
  static ActiveSpaceSpec from_range(std::size_t n_spatial, std::size_t first, std::size_t last);
  /// Everything active.
  static ActiveSpaceSpec full(std::size_t n_spatial);

  void validate(std::size_t n_spatial) const;
  int active_electrons(int n_electrons) const;
  std::string label() const;  // "14-19" for contiguous windows, else comma list
};

/// Frozen-core reduction. Frozen orbitals contribute their mean field to the
/// active one-body integrals and their energy to the core; removed orbitals
/// are dropped. The result is a general spin-orbital table over 2*|active|
/// spin-orbitals.
IntegralTable freeze_reduce(const IntegralTable& t, const ActiveSpaceSpec& spec);

struct OccupancyEntry {
  std::size_t index = 0;
  double eigenvalue = 0.0;  // Hartree
  double occupancy = 0.0;   // [0, 2]
};

struct OccupancyList {
  std::vector<OccupancyEntry> entries;

  void validate() const;
  /// CSV with header `index,eigenvalue,occupancy`.
  static OccupancyList parse_csv(std::string_view text);
  static OccupancyList read_csv(const std::string& path);
  std::string to_csv() const;
};

/// Picks the `max_active_mos` orbitals whose natural occupancy is farthest
/// from {0, 2}. Orbitals below the Fermi level (the lowest n_electrons/2 by
/// index) that are not picked are frozen, the rest removed.
///
/// With `active_electrons` set, the pick is split: active_electrons/2
/// orbitals from the occupied side and the remainder from the virtual side,
/// each side ranked by the same score. Ties go to the orbital closest to the
/// Fermi level.
ActiveSpaceSpec select_active_by_occupancy(const OccupancyList& occ, int n_electrons,
                                           std::size_t max_active_mos,
                                           std::optional<int> active_electrons = std::nullopt);

/// Relative energies (kcal/mol) of every tautomer for one candidate active set.
struct CandidateSet {
  std::string label;
  ActiveSpaceSpec spec;
  std::map<std::string, double> relative_kcal;
};

struct RankedCandidate {
  CandidateSet candidate;
  double deviation_kcal = 0.0;  // max over tautomers of |candidate - reference|
};

/// Sorts candidates by max-norm deviation from the full-system reference,
/// ties broken by fewer active orbitals.
std::vector<RankedCandidate> rank_candidate_sets(const std::vector<CandidateSet>& candidates,
                                                 const std::map<std::string, double>& reference_kcal);

/// H = constant + sum linear(p,q) E_pq + sum quadratic(p,r,q,s) E_pr E_qs
/// with E_pq = a+_p a_q. The delta_qr part of the two-body term has been
/// folded into `linear`.
struct ExcitationPolynomial {
  std::size_t n_spin_orbitals = 0;
  double constant = 0.0;
  std::vector<double> linear;     // [p*N + q]
  std::vector<double> quadratic;  // [((p*N + r)*N + q)*N + s]

  double linear_at(std::size_t p, std::size_t q) const { return linear[p * n_spin_orbitals + q]; }
  double quadratic_at(std::size_t p, std::size_t r, std::size_t q, std::size_t s) const {
    const std::size_t n = n_spin_orbitals;
    return quadratic[((p * n + r) * n + q) * n + s];
  }
  std::size_t quadratic_nonzeros() const;
};

ExcitationPolynomial to_excitation_form(const IntegralTable& t);

/// Options for synthetic integral generation.
struct SyntheticTableOptions {
  /// Spread of the diagonal orbital-energy ladder (Hartree); 0 gives fully random h1.
  double orbital_energy_spread = 0.0;
  double one_body_scale = 1.0;
  double two_body_scale = 0.5;
  double core_energy = 0.0;
};

/// Random spin-restricted table with 8-fold symmetric electron-repulsion
/// integrals. Deterministic in `seed`.
IntegralTable random_restricted_table(std::size_t n_spatial, int n_electrons, std::uint64_t seed,
                                      const SyntheticTableOptions& options = {});

/// Random general spin-orbital table honoring only the Hermiticity
/// symmetries h1(p,q) = h1(q,p), h2(p,q,r,s) = h2(s,r,q,p).
IntegralTable random_spin_orbital_table(std::size_t n_spin_orbitals, int n_electrons, std::uint64_t seed);

/// Multiplies every integral (and the core energy) by `factor`.
IntegralTable scaled(const IntegralTable& t, double factor);

}  // namespace qeevqe
