#pragma once

namespace qeevqe {

/// CODATA 2018 Hartree energy times Avogadro's number, divided by 4184 J/kcal.
inline constexpr double kKcalPerMolPerHartree = 627.509474;

/// 1 kcal/mol expressed in Hartree.
inline constexpr double kChemicalAccuracyHartree = 1.0 / kKcalPerMolPerHartree;

inline constexpr double hartree_to_kcal(double e) { return e * kKcalPerMolPerHartree; }
inline constexpr double kcal_to_hartree(double e) { return e / kKcalPerMolPerHartree; }

}  // namespace qeevqe
