// Text formats for lattices, fields, invariant sets and reconstruction reports.
//
// Fields and invariant sets are JSON documents. Doubles are written in the
// shortest form that parses back to the same bits, so save/load is exact.
#ifndef MAGRIGID_IO_HPP_
#define MAGRIGID_IO_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "magrigid/inversion.hpp"

namespace magrigid::io {

nlohmann::json lattice_to_json(const Lattice& lattice);
Lattice lattice_from_json(const nlohmann::json& j);

/// Upper half-plane records {m, n, re, im}; the reader also accepts files that
/// list both halves and then checks each conjugate pair.
std::string field_to_string(const FourierField2D& field, const std::string& kind);
FourierField2D field_from_string(const std::string& text);

/// Header (lattice, b0, l, K, N, jacobian) and one record
/// {delta_a, delta_b, k, Fre, Fim, Gre, Gim} per direction and k = 1..K.
/// Records with k < 0 are accepted on read and must be conjugates of k > 0.
std::string invariants_to_string(const InvariantSet& set);
InvariantSet invariants_from_string(const std::string& text);

std::string report_to_text(const ReconstructionReport& report);
/// delta_a,delta_b,min_sprime,composition_residual,b_error,v_error
std::string report_to_csv(const ReconstructionReport& report);

std::string read_file(const std::filesystem::path& path);
/// Throws std::runtime_error when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& text);

void save_field(const std::filesystem::path& path, const FourierField2D& field,
                const std::string& kind);
FourierField2D load_field(const std::filesystem::path& path);
void save_invariants(const std::filesystem::path& path, const InvariantSet& set);
InvariantSet load_invariants(const std::filesystem::path& path);

/// Full-precision decimal for CSV and reports.
std::string format_double(double value);

}  // namespace magrigid::io

#endif  // MAGRIGID_IO_HPP_
