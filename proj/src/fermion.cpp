#include "qeevqe/fermion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "qeevqe/errors.hpp"

namespace qeevqe {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t spin(std::size_t p) { return p & 1U; }

// Parses `KEY=<int>` out of a FCIDUMP namelist header.
std::optional<long> header_int(const std::string& header, const std::string& key) {
  std::size_t pos = 0;
  while ((pos = header.find(key, pos)) != std::string::npos) {
    const bool boundary = pos == 0 || !std::isalnum(static_cast<unsigned char>(header[pos - 1]));
    std::size_t p = pos + key.size();
    while (p < header.size() && header[p] == ' ') ++p;
    if (boundary && p < header.size() && header[p] == '=') {
      ++p;
      while (p < header.size() && header[p] == ' ') ++p;
      std::size_t end = p;
      if (end < header.size() && (header[end] == '-' || header[end] == '+')) ++end;
      while (end < header.size() && std::isdigit(static_cast<unsigned char>(header[end]))) ++end;
      if (end == p) return std::nullopt;
      return std::stol(header.substr(p, end - p));
    }
    pos += key.size();
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// IntegralTable

IntegralTable IntegralTable::restricted(std::size_t n_spatial, int n_electrons, int ms2) {
  if (n_spatial == 0) throw ValidationError("integral table needs at least one orbital");
  IntegralTable t;
  t.restricted_ = true;
  t.n_spatial_ = n_spatial;
  t.h1_.assign(n_spatial * n_spatial, 0.0);
  const std::size_t npair = n_spatial * (n_spatial + 1) / 2;
  t.eri_.assign(npair * (npair + 1) / 2, 0.0);
  t.set_electrons(n_electrons, ms2);
  return t;
}

IntegralTable IntegralTable::spin_orbital(std::size_t n_spin_orbitals, int n_electrons, int ms2) {
  if (n_spin_orbitals == 0 || n_spin_orbitals % 2 != 0) {
    throw ValidationError("spin-orbital count must be positive and even, got " +
                          std::to_string(n_spin_orbitals));
  }
  IntegralTable t;
  t.restricted_ = false;
  t.n_spatial_ = n_spin_orbitals / 2;
  const std::size_t n = n_spin_orbitals;
  t.h1_.assign(n * n, 0.0);
  t.eri_.assign(n * n * n * n, 0.0);
  t.set_electrons(n_electrons, ms2);
  return t;
}

void IntegralTable::set_electrons(int n_electrons, int ms2) {
  if (n_electrons < 0) throw ValidationError("negative electron count");
  if (n_electrons > static_cast<int>(2 * n_spatial_)) {
    throw ValidationError(std::to_string(n_electrons) + " electrons do not fit in " +
                          std::to_string(2 * n_spatial_) + " spin-orbitals");
  }
  if ((n_electrons + ms2) % 2 != 0 || std::abs(ms2) > n_electrons) {
    throw ValidationError("MS2=" + std::to_string(ms2) + " inconsistent with " +
                          std::to_string(n_electrons) + " electrons");
  }
  n_electrons_ = n_electrons;
  ms2_ = ms2;
}

std::size_t IntegralTable::pair_index(std::size_t i, std::size_t j) {
  if (i < j) std::swap(i, j);
  return i * (i + 1) / 2 + j;
}

std::size_t IntegralTable::eri_index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
  return pair_index(pair_index(i, j), pair_index(k, l));
}

void IntegralTable::check_spin_orbital(std::size_t p) const {
  if (p >= 2 * n_spatial_) {
    throw ValidationError("spin-orbital index " + std::to_string(p) + " out of range");
  }
}

double IntegralTable::h1(std::size_t p, std::size_t q) const {
  if (restricted_) {
    if (spin(p) != spin(q)) return 0.0;
    return h1_[(p / 2) * n_spatial_ + q / 2];
  }
  return h1_[p * 2 * n_spatial_ + q];
}

double IntegralTable::h2(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
  if (restricted_) {
    if (spin(p) != spin(s) || spin(q) != spin(r)) return 0.0;
    return eri_[eri_index(p / 2, s / 2, q / 2, r / 2)];
  }
  const std::size_t n = 2 * n_spatial_;
  return eri_[((p * n + q) * n + r) * n + s];
}

void IntegralTable::set_spatial_h1(std::size_t i, std::size_t j, double v) {
  if (!restricted_) throw ValidationError("set_spatial_h1 on a spin-orbital table");
  if (i >= n_spatial_ || j >= n_spatial_) throw ValidationError("orbital index out of range");
  h1_[i * n_spatial_ + j] = v;
  h1_[j * n_spatial_ + i] = v;
}

void IntegralTable::set_spatial_eri(std::size_t i, std::size_t j, std::size_t k, std::size_t l, double v) {
  if (!restricted_) throw ValidationError("set_spatial_eri on a spin-orbital table");
  if (i >= n_spatial_ || j >= n_spatial_ || k >= n_spatial_ || l >= n_spatial_) {
    throw ValidationError("orbital index out of range");
  }
  eri_[eri_index(i, j, k, l)] = v;
}

double IntegralTable::spatial_h1(std::size_t i, std::size_t j) const {
  if (restricted_) return h1_[i * n_spatial_ + j];
  return h1(2 * i, 2 * j);
}

double IntegralTable::spatial_eri(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
  if (restricted_) return eri_[eri_index(i, j, k, l)];
  // (ij|kl) = h2(i k l j) with all-alpha indices
  return h2(2 * i, 2 * k, 2 * l, 2 * j);
}

void IntegralTable::set_h1(std::size_t p, std::size_t q, double v) {
  if (restricted_) throw ValidationError("set_h1 on a restricted table; use set_spatial_h1");
  check_spin_orbital(p);
  check_spin_orbital(q);
  h1_[p * 2 * n_spatial_ + q] = v;
}

void IntegralTable::set_h2(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v) {
  if (restricted_) throw ValidationError("set_h2 on a restricted table; use set_spatial_eri");
  for (std::size_t i : {p, q, r, s}) check_spin_orbital(i);
  const std::size_t n = 2 * n_spatial_;
  eri_[((p * n + q) * n + r) * n + s] = v;
}

void IntegralTable::validate(double tol) const {
  if (restricted_) return;  // symmetric by construction
  const std::size_t n = n_spin_orbitals();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (std::abs(h1(p, q) - h1(q, p)) > tol) {
        throw ValidationError("h1 not symmetric at (" + std::to_string(p) + "," + std::to_string(q) + ")");
      }
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
          if (std::abs(h2(p, q, r, s) - h2(s, r, q, p)) > tol) {
            throw ValidationError("h2 violates h2(pqrs) == h2(srqp) at (" + std::to_string(p) + "," +
                                  std::to_string(q) + "," + std::to_string(r) + "," + std::to_string(s) + ")");
          }
        }
      }
    }
  }
}

IntegralTable IntegralTable::to_spin_orbital() const {
  if (!restricted_) return *this;
  const std::size_t n = n_spin_orbitals();
  IntegralTable out = spin_orbital(n, n_electrons_, ms2_);
  out.core_ = core_;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      out.h1_[p * n + q] = h1(p, q);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) out.eri_[((p * n + q) * n + r) * n + s] = h2(p, q, r, s);
      }
    }
  }
  return out;
}

IntegralTable scaled(const IntegralTable& t, double factor) {
  IntegralTable out = t;
  // Storage is linear in every integral, so scale through the setters'
  // storage by rebuilding from accessors.
  if (t.is_restricted()) {
    const std::size_t n = t.n_spatial();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        out.set_spatial_h1(i, j, factor * t.spatial_h1(i, j));
        for (std::size_t k = 0; k < n; ++k) {
          for (std::size_t l = 0; l <= k; ++l) {
            out.set_spatial_eri(i, j, k, l, factor * t.spatial_eri(i, j, k, l));
          }
        }
      }
    }
  } else {
    const std::size_t n = t.n_spin_orbitals();
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        out.set_h1(p, q, factor * t.h1(p, q));
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t s = 0; s < n; ++s) out.set_h2(p, q, r, s, factor * t.h2(p, q, r, s));
        }
      }
    }
  }
  out.set_core_energy(factor * t.core_energy());
  return out;
}

// ---------------------------------------------------------------------------
// FCIDUMP

IntegralTable parse_fcidump(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::string header;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string upper = line;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    header += upper;
    header += ' ';
    const auto trimmed_end = upper.find_last_not_of(" \t\r");
    if (upper.find("&END") != std::string::npos ||
        (trimmed_end != std::string::npos && upper[trimmed_end] == '/' )) {
      header_done = true;
      break;
    }
  }
  if (!header_done || header.find("&FCI") == std::string::npos) {
    throw ParseError("missing &FCI ... &END header", line_no);
  }
  const auto norb = header_int(header, "NORB");
  const auto nelec = header_int(header, "NELEC");
  const auto ms2 = header_int(header, "MS2").value_or(0);
  if (!norb || *norb <= 0) throw ParseError("header lacks a positive NORB", line_no);
  if (!nelec || *nelec < 0) throw ParseError("header lacks NELEC", line_no);

  IntegralTable t = [&] {
    try {
      return IntegralTable::restricted(static_cast<std::size_t>(*norb), static_cast<int>(*nelec),
                                       static_cast<int>(ms2));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }();

  double core = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    // Fortran exponents
    std::replace(line.begin(), line.end(), 'D', 'E');
    std::replace(line.begin(), line.end(), 'd', 'e');
    std::istringstream ls(line);
    double v = 0.0;
    long i = 0, j = 0, k = 0, l = 0;
    if (!(ls >> v >> i >> j >> k >> l)) throw ParseError("expected `value i j k l`", line_no);
    std::string extra;
    if (ls >> extra) throw ParseError("trailing token '" + extra + "'", line_no);
    for (long idx : {i, j, k, l}) {
      if (idx < 0 || idx > *norb) {
        throw ValidationError("line " + std::to_string(line_no) + ": orbital index " + std::to_string(idx) +
                              " outside 0.." + std::to_string(*norb));
      }
    }
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      core = v;
    } else if (k == 0 && l == 0) {
      if (j == 0) continue;  // orbital energy entry
      if (i == 0) throw ParseError("one-electron entry with zero first index", line_no);
      t.set_spatial_h1(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), v);
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0) throw ParseError("two-electron entry with zero index", line_no);
      t.set_spatial_eri(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
                        static_cast<std::size_t>(k - 1), static_cast<std::size_t>(l - 1), v);
    }
  }
  t.set_core_energy(core);
  return t;
}

IntegralTable read_fcidump(const std::string& path) { return parse_fcidump(read_file(path)); }

std::string write_fcidump(const IntegralTable& t) {
  const std::size_t n = t.n_spatial();
  if (!t.is_restricted()) {
    // Only spin-adapted general tables have a spatial representation.
    const IntegralTable probe = [&] {
      IntegralTable r = IntegralTable::restricted(n, t.n_electrons(), t.ms2());
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          r.set_spatial_h1(i, j, t.spatial_h1(i, j));
          for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t l = 0; l <= k; ++l) r.set_spatial_eri(i, j, k, l, t.spatial_eri(i, j, k, l));
          }
        }
      }
      return r;
    }();
    const std::size_t ns = t.n_spin_orbitals();
    for (std::size_t p = 0; p < ns; ++p) {
      for (std::size_t q = 0; q < ns; ++q) {
        if (std::abs(probe.h1(p, q) - t.h1(p, q)) > 1e-12) {
          throw ValidationError("table is not spin-adapted; cannot write FCIDUMP");
        }
        for (std::size_t r = 0; r < ns; ++r) {
          for (std::size_t s = 0; s < ns; ++s) {
            if (std::abs(probe.h2(p, q, r, s) - t.h2(p, q, r, s)) > 1e-12) {
              throw ValidationError("table is not spin-adapted; cannot write FCIDUMP");
            }
          }
        }
      }
    }
    IntegralTable copy = probe;
    copy.set_core_energy(t.core_energy());
    return write_fcidump(copy);
  }

  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), " &FCI NORB=%zu,NELEC=%d,MS2=%d,\n  ORBSYM=", n, t.n_electrons(), t.ms2());
  out += buf;
  for (std::size_t i = 0; i < n; ++i) out += "1,";
  out += "\n  ISYM=1,\n &END\n";
  auto emit = [&](double v, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    std::snprintf(buf, sizeof(buf), "%.17g %zu %zu %zu %zu\n", v, i, j, k, l);
    out += buf;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double v = t.spatial_eri(i, j, k, l);
          if (v != 0.0) emit(v, i + 1, j + 1, k + 1, l + 1);
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = t.spatial_h1(i, j);
      if (v != 0.0) emit(v, i + 1, j + 1, 0, 0);
    }
  }
  emit(t.core_energy(), 0, 0, 0, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Active spaces

ActiveSpaceSpec ActiveSpaceSpec::from_range(std::size_t n_spatial, std::size_t first, std::size_t last) {
  if (first > last || last >= n_spatial) {
    throw ValidationError("active window " + std::to_string(first) + "-" + std::to_string(last) +
                          " outside 0.." + std::to_string(n_spatial - 1));
  }
  ActiveSpaceSpec s;
  for (std::size_t i = 0; i < n_spatial; ++i) {
    if (i < first) s.frozen.push_back(i);
    else if (i > last) s.removed.push_back(i);
    else s.active.push_back(i);
  }
  return s;
}

ActiveSpaceSpec ActiveSpaceSpec::full(std::size_t n_spatial) {
  return from_range(n_spatial, 0, n_spatial - 1);
}

void ActiveSpaceSpec::validate(std::size_t n_spatial) const {
  std::vector<int> seen(n_spatial, 0);
  for (const auto* list : {&frozen, &removed, &active}) {
    if (!std::is_sorted(list->begin(), list->end())) throw ValidationError("active-space lists must be sorted");
    for (std::size_t i : *list) {
      if (i >= n_spatial) throw ValidationError("orbital " + std::to_string(i) + " out of range");
      if (seen[i]++) throw ValidationError("orbital " + std::to_string(i) + " listed twice");
    }
  }
  for (std::size_t i = 0; i < n_spatial; ++i) {
    if (!seen[i]) throw ValidationError("orbital " + std::to_string(i) + " not assigned");
  }
}

int ActiveSpaceSpec::active_electrons(int n_electrons) const {
  return n_electrons - 2 * static_cast<int>(frozen.size());
}

std::string ActiveSpaceSpec::label() const {
  if (active.empty()) return "";
  bool contiguous = true;
  for (std::size_t k = 1; k < active.size(); ++k) contiguous &= active[k] == active[k - 1] + 1;
  if (contiguous) return std::to_string(active.front()) + "-" + std::to_string(active.back());
  std::string s;
  for (std::size_t k = 0; k < active.size(); ++k) s += (k ? "," : "") + std::to_string(active[k]);
  return s;
}

IntegralTable freeze_reduce(const IntegralTable& t, const ActiveSpaceSpec& spec) {
  spec.validate(t.n_spatial());
  const int n_active_e = spec.active_electrons(t.n_electrons());
  if (n_active_e < 0) {
    throw ValidationError("freezing " + std::to_string(spec.frozen.size()) + " orbitals needs " +
                          std::to_string(2 * spec.frozen.size()) + " electrons, table has " +
                          std::to_string(t.n_electrons()));
  }
  if (n_active_e > static_cast<int>(2 * spec.active.size())) {
    throw ValidationError(std::to_string(n_active_e) + " active electrons do not fit in " +
                          std::to_string(spec.active.size()) + " active orbitals");
  }
  if (spec.active.empty()) throw ValidationError("active space is empty");

  std::vector<std::size_t> frozen_so;
  for (std::size_t i : spec.frozen) {
    frozen_so.push_back(2 * i);
    frozen_so.push_back(2 * i + 1);
  }
  std::vector<std::size_t> active_so;
  for (std::size_t a : spec.active) {
    active_so.push_back(2 * a);
    active_so.push_back(2 * a + 1);
  }

  double core = t.core_energy();
  for (std::size_t i : frozen_so) core += t.h1(i, i);
  for (std::size_t i : frozen_so) {
    for (std::size_t j : frozen_so) core += 0.5 * (t.h2(i, j, j, i) - t.h2(i, j, i, j));
  }

  const std::size_t na = active_so.size();
  IntegralTable out = IntegralTable::spin_orbital(na, n_active_e, t.ms2());
  out.set_core_energy(core);
  for (std::size_t a = 0; a < na; ++a) {
    const std::size_t pa = active_so[a];
    for (std::size_t b = 0; b < na; ++b) {
      const std::size_t pb = active_so[b];
      double v = t.h1(pa, pb);
      for (std::size_t i : frozen_so) {
        v += 0.5 * (t.h2(pa, i, i, pb) + t.h2(i, pa, pb, i) - t.h2(pa, i, pb, i) - t.h2(i, pa, i, pb));
      }
      out.set_h1(a, b, v);
      for (std::size_t c = 0; c < na; ++c) {
        for (std::size_t d = 0; d < na; ++d) out.set_h2(a, b, c, d, t.h2(pa, pb, active_so[c], active_so[d]));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Occupancies

constexpr double kOccupancySlack = 1e-4;

void OccupancyList::validate() const {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.index != k) throw ValidationError("occupancy indices must be 0..n-1 in order");
    // Correlated natural occupancies overshoot [0, 2] by rounding noise.
    if (!(e.occupancy >= -kOccupancySlack && e.occupancy <= 2.0 + kOccupancySlack)) {
      throw ValidationError("occupancy of orbital " + std::to_string(k) + " outside [0, 2]");
    }
  }
}

OccupancyList OccupancyList::parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  OccupancyList out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line_no == 1 && line.find("index") != std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    OccupancyEntry e;
    if (!(ls >> e.index >> e.eigenvalue >> e.occupancy)) {
      throw ParseError("expected `index,eigenvalue,occupancy`", line_no);
    }
    out.entries.push_back(e);
  }
  out.validate();
  return out;
}

OccupancyList OccupancyList::read_csv(const std::string& path) { return parse_csv(read_file(path)); }

std::string OccupancyList::to_csv() const {
  std::string out = "index,eigenvalue,occupancy\n";
  char buf[96];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", e.index, e.eigenvalue, e.occupancy);
    out += buf;
  }
  return out;
}

ActiveSpaceSpec select_active_by_occupancy(const OccupancyList& occ, int n_electrons, std::size_t max_active_mos,
                                           std::optional<int> active_electrons) {
  occ.validate();
  const std::size_t n = occ.entries.size();
  if (max_active_mos == 0) throw ValidationError("max_active_mos must be at least 1");
  if (max_active_mos > n) throw ValidationError("max_active_mos exceeds the number of orbitals");
  if (n_electrons < 0 || n_electrons % 2 != 0) {
    throw ValidationError("occupancy selection needs an even, closed-shell electron count; got " +
                          std::to_string(n_electrons));
  }
  const std::size_t n_occupied = static_cast<std::size_t>(n_electrons / 2);
  if (n_occupied > n) throw ValidationError("more occupied orbitals than orbitals");

  struct Scored {
    std::size_t index;
    double score;
    std::size_t fermi_distance;
    bool occupied;
  };
  std::vector<Scored> occupied_side;
  std::vector<Scored> virtual_side;
  for (const auto& e : occ.entries) {
    const bool is_occ = e.index < n_occupied;
    const double score = std::min(e.occupancy, 2.0 - e.occupancy);
    const std::size_t dist = is_occ ? n_occupied - 1 - e.index : e.index - n_occupied;
    (is_occ ? occupied_side : virtual_side).push_back({e.index, score, dist, is_occ});
  }
  auto better = [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.fermi_distance != b.fermi_distance) return a.fermi_distance < b.fermi_distance;
    return a.occupied && !b.occupied;
  };

  std::vector<std::size_t> picked;
  if (active_electrons) {
    const int ae = *active_electrons;
    if (ae < 0 || ae % 2 != 0) {
      throw ValidationError("active electron count " + std::to_string(ae) +
                            " has inconsistent parity with doubly occupied frozen orbitals");
    }
    const std::size_t n_occ_pick = static_cast<std::size_t>(ae / 2);
    if (n_occ_pick > max_active_mos || n_occ_pick > occupied_side.size() ||
        max_active_mos - n_occ_pick > virtual_side.size()) {
      throw ValidationError("cannot place " + std::to_string(ae) + " electrons in " +
                            std::to_string(max_active_mos) + " active orbitals");
    }
    std::sort(occupied_side.begin(), occupied_side.end(), better);
    std::sort(virtual_side.begin(), virtual_side.end(), better);
    for (std::size_t k = 0; k < n_occ_pick; ++k) picked.push_back(occupied_side[k].index);
    for (std::size_t k = 0; k < max_active_mos - n_occ_pick; ++k) picked.push_back(virtual_side[k].index);
  } else {
    std::vector<Scored> all = occupied_side;
    all.insert(all.end(), virtual_side.begin(), virtual_side.end());
    std::sort(all.begin(), all.end(), better);
    for (std::size_t k = 0; k < max_active_mos; ++k) picked.push_back(all[k].index);
  }
  std::sort(picked.begin(), picked.end());

  ActiveSpaceSpec spec;
  spec.active = picked;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::binary_search(picked.begin(), picked.end(), i)) continue;
    (i < n_occupied ? spec.frozen : spec.removed).push_back(i);
  }
  return spec;
}

std::vector<RankedCandidate> rank_candidate_sets(const std::vector<CandidateSet>& candidates,
                                                 const std::map<std::string, double>& reference_kcal) {
  std::vector<RankedCandidate> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (c.relative_kcal.size() != reference_kcal.size()) {
      throw ValidationError("candidate " + c.label + " covers a different tautomer set than the reference");
    }
    double dev = 0.0;
    for (const auto& [label, ref] : reference_kcal) {
      auto it = c.relative_kcal.find(label);
      if (it == c.relative_kcal.end()) {
        throw ValidationError("candidate " + c.label + " lacks tautomer '" + label + "'");
      }
      dev = std::max(dev, std::abs(it->second - ref));
    }
    out.push_back({c, dev});
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    if (a.deviation_kcal != b.deviation_kcal) return a.deviation_kcal < b.deviation_kcal;
    return a.candidate.spec.active.size() < b.candidate.spec.active.size();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Excitation-operator form

std::size_t ExcitationPolynomial::quadratic_nonzeros() const {
  return static_cast<std::size_t>(std::count_if(quadratic.begin(), quadratic.end(), [](double v) { return v != 0.0; }));
}

ExcitationPolynomial to_excitation_form(const IntegralTable& t) {
  const std::size_t n = t.n_spin_orbitals();
  ExcitationPolynomial poly;
  poly.n_spin_orbitals = n;
  poly.constant = t.core_energy();
  poly.linear.assign(n * n, 0.0);
  poly.quadratic.assign(n * n * n * n, 0.0);
  // a+_p a+_q a_r a_s = delta_qr E_ps - E_pr E_qs
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t s = 0; s < n; ++s) {
      double v = t.h1(p, s);
      for (std::size_t q = 0; q < n; ++q) v += 0.5 * t.h2(p, q, q, s);
      poly.linear[p * n + s] = v;
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
          const double h = t.h2(p, q, r, s);
          if (h != 0.0) poly.quadratic[((p * n + r) * n + q) * n + s] = -0.5 * h;
        }
      }
    }
  }
  return poly;
}

// ---------------------------------------------------------------------------
// Synthetic tables

IntegralTable random_restricted_table(std::size_t n_spatial, int n_electrons, std::uint64_t seed,
                                      const SyntheticTableOptions& options) {
  IntegralTable t = IntegralTable::restricted(n_spatial, n_electrons, 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < n_spatial; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double v = options.one_body_scale * u(rng);
      if (i == j && options.orbital_energy_spread > 0.0) {
        const double frac = n_spatial > 1 ? static_cast<double>(i) / static_cast<double>(n_spatial - 1) : 0.0;
        v = options.orbital_energy_spread * (frac - 0.5) + 0.1 * options.one_body_scale * u(rng);
      } else if (options.orbital_energy_spread > 0.0) {
        v *= 0.1;
      }
      t.set_spatial_h1(i, j, v);
    }
  }
  for (std::size_t i = 0; i < n_spatial; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      for (std::size_t k = 0; k < n_spatial; ++k) {
        for (std::size_t l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          double v = options.two_body_scale * u(rng);
          // Coulomb-like integrals (ii|kk) are positive in real molecules.
          if (i == j && k == l) v = std::abs(v) + 0.5 * options.two_body_scale;
          t.set_spatial_eri(i, j, k, l, v);
        }
      }
    }
  }
  t.set_core_energy(options.core_energy);
  return t;
}

IntegralTable random_spin_orbital_table(std::size_t n_spin_orbitals, int n_electrons, std::uint64_t seed) {
  IntegralTable t = IntegralTable::spin_orbital(n_spin_orbitals, n_electrons, n_electrons % 2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = n_spin_orbitals;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q <= p; ++q) {
      const double v = u(rng);
      t.set_h1(p, q, v);
      t.set_h1(q, p, v);
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
          // visit each {pqrs, srqp} orbit once
          if (std::tie(p, q, r, s) > std::tie(s, r, q, p)) continue;
          const double v = 0.5 * u(rng);
          t.set_h2(p, q, r, s, v);
          t.set_h2(s, r, q, p, v);
        }
      }
    }
  }
  t.set_core_energy(u(rng));
  return t;
}

}  // namespace qeevqe
