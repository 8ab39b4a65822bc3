#include "magrigid/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace magrigid::io {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(where + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(where + ": field '" + key + "' has the wrong type");
  }
}

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(what + ": " + e.what());
  }
}

void check_header(const json& j, const std::string& format) {
  if (required<std::string>(j, "format", format) != format) {
    throw FormatError("not a " + format + " document");
  }
  if (required<int>(j, "version", format) != kFormatVersion) {
    throw FormatError(format + ": unsupported version");
  }
}

bool upper_half(DualIndex beta) { return beta.n > 0 || (beta.n == 0 && beta.m > 0); }

bool conjugate_match(Complex a, Complex b) {
  return std::abs(a - std::conj(b)) <= 1e-12 * std::max(std::abs(a), 1e-300);
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

json lattice_to_json(const Lattice& lattice) {
  return json{{"e1", {lattice.e1().x, lattice.e1().y}}, {"e2", {lattice.e2().x, lattice.e2().y}}};
}

Lattice lattice_from_json(const json& j) {
  const auto e1 = required<std::vector<double>>(j, "e1", "lattice");
  const auto e2 = required<std::vector<double>>(j, "e2", "lattice");
  if (e1.size() != 2 || e2.size() != 2) throw FormatError("lattice: e1 and e2 need two entries");
  try {
    return Lattice({e1[0], e1[1]}, {e2[0], e2[1]});
  } catch (const InputError& e) {
    throw FormatError(std::string("lattice: ") + e.what());
  }
}

std::string field_to_string(const FourierField2D& field, const std::string& kind) {
  json records = json::array();
  for (const auto& [beta, c] : field.coeffs()) {
    if (!upper_half(beta)) continue;
    records.push_back({{"m", beta.m}, {"n", beta.n}, {"re", c.real()}, {"im", c.imag()}});
  }
  json j{{"format", "magrigid-field"},
         {"version", kFormatVersion},
         {"kind", kind},
         {"lattice", lattice_to_json(field.lattice())},
         {"mean", field.mean()},
         {"coefficients", std::move(records)}};
  return j.dump(1) + "\n";
}

FourierField2D field_from_string(const std::string& text) {
  const json j = parse(text, "field");
  check_header(j, "magrigid-field");
  const Lattice lattice = lattice_from_json(required<json>(j, "lattice", "field"));
  const double mean = required<double>(j, "mean", "field");
  const json records = required<json>(j, "coefficients", "field");
  if (!records.is_array()) throw FormatError("field: coefficients must be a list");

  std::map<DualIndex, Complex> given;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string where = "field record " + std::to_string(i);
    const DualIndex beta{required<std::int64_t>(records[i], "m", where),
                         required<std::int64_t>(records[i], "n", where)};
    const Complex c{required<double>(records[i], "re", where),
                    required<double>(records[i], "im", where)};
    if (beta == DualIndex{0, 0}) throw FormatError(where + ": (0,0) belongs in 'mean'");
    if (!given.emplace(beta, c).second) throw FormatError(where + ": duplicate index");
  }
  std::map<DualIndex, Complex> coeffs;
  for (const auto& [beta, c] : given) {
    const auto partner = given.find(-beta);
    if (partner != given.end() && !conjugate_match(partner->second, c)) {
      std::ostringstream os;
      os << "field record (" << beta.m << "," << beta.n
         << ") is not the conjugate of its partner";
      throw FormatError(os.str());
    }
    coeffs[beta] = c;
    if (partner == given.end()) coeffs[-beta] = std::conj(c);
  }
  return FourierField2D(lattice, mean, std::move(coeffs));
}

std::string invariants_to_string(const InvariantSet& set) {
  json records = json::array();
  for (const auto& dir : set.directions) {
    for (std::size_t k = 0; k < dir.F.size(); ++k) {
      records.push_back({{"delta_a", dir.direction.a()},
                         {"delta_b", dir.direction.b()},
                         {"k", static_cast<std::int64_t>(k + 1)},
                         {"Fre", dir.F[k].real()},
                         {"Fim", dir.F[k].imag()},
                         {"Gre", dir.G[k].real()},
                         {"Gim", dir.G[k].imag()}});
    }
  }
  json j{{"format", "magrigid-invariants"},
         {"version", kFormatVersion},
         {"lattice", lattice_to_json(set.lattice)},
         {"b0", set.b0},
         {"l", set.l},
         {"K", set.K},
         {"N", set.N},
         {"jacobian", set.jacobian},
         {"records", std::move(records)}};
  return j.dump(1) + "\n";
}

InvariantSet invariants_from_string(const std::string& text) {
  const json j = parse(text, "invariants");
  check_header(j, "magrigid-invariants");
  InvariantSet set{lattice_from_json(required<json>(j, "lattice", "invariants")),
                   required<double>(j, "b0", "invariants"),
                   required<std::int64_t>(j, "l", "invariants"),
                   required<std::int64_t>(j, "K", "invariants"),
                   required<std::int64_t>(j, "N", "invariants"),
                   required<double>(j, "jacobian", "invariants"),
                   {}};
  if (set.l != 1 && set.l != -1) throw FormatError("invariants: l must be +-1");
  if (set.K < 1) throw FormatError("invariants: K must be >= 1");
  if (std::abs(set.jacobian - set.lattice.area()) > 1e-12 * set.lattice.area()) {
    throw FormatError("invariants: jacobian does not match the lattice area");
  }
  const json records = required<json>(j, "records", "invariants");
  if (!records.is_array()) throw FormatError("invariants: records must be a list");

  struct Entry {
    Complex F, G;
  };
  std::map<std::pair<PrimitiveDirection, std::int64_t>, Entry> entries;
  std::set<PrimitiveDirection> dirs;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const json& r = records[i];
    const std::string where = "invariant record " + std::to_string(i);
    const auto a = required<std::int64_t>(r, "delta_a", where);
    const auto b = required<std::int64_t>(r, "delta_b", where);
    const auto k = required<std::int64_t>(r, "k", where);
    const std::string label = where + " (delta=(" + std::to_string(a) + "," + std::to_string(b) +
                              "), k=" + std::to_string(k) + ")";
    std::optional<PrimitiveDirection> delta;
    try {
      delta.emplace(a, b);
    } catch (const InputError& e) {
      throw FormatError(label + ": " + e.what());
    }
    if (k == 0 || std::abs(k) > set.K) throw FormatError(label + ": k out of range");
    const Entry e{{required<double>(r, "Fre", where), required<double>(r, "Fim", where)},
                  {required<double>(r, "Gre", where), required<double>(r, "Gim", where)}};
    if (!entries.emplace(std::make_pair(*delta, k), e).second) {
      throw FormatError(label + ": duplicate record");
    }
    dirs.insert(*delta);
  }
  for (const auto& [key, e] : entries) {
    if (key.second > 0) continue;
    const auto partner = entries.find({key.first, -key.second});
    const std::string label = "invariant record (delta=(" + std::to_string(key.first.a()) + "," +
                              std::to_string(key.first.b()) + "), k=" + std::to_string(key.second) + ")";
    if (partner == entries.end()) throw FormatError(label + ": no matching k > 0 record");
    if (!conjugate_match(e.F, partner->second.F) || !conjugate_match(e.G, partner->second.G)) {
      throw FormatError(label + ": breaks conjugate symmetry F(-k) = conj F(k)");
    }
  }
  for (const auto& delta : dirs) {
    DirectionInvariants dir{delta, {}, {}};
    for (std::int64_t k = 1; k <= set.K; ++k) {
      const auto it = entries.find({delta, k});
      if (it == entries.end()) {
        throw FormatError("invariants: direction (" + std::to_string(delta.a()) + "," +
                          std::to_string(delta.b()) + ") is missing k = " + std::to_string(k));
      }
      dir.F.push_back(it->second.F);
      dir.G.push_back(it->second.G);
    }
    set.directions.push_back(std::move(dir));
  }
  return set;
}

std::string report_to_text(const ReconstructionReport& report) {
  std::ostringstream os;
  os << "reconstruction report\n";
  os << "directions: " << report.directions.size() << " (max primitive norm "
     << report.max_primitive_norm << ")\n";
  os << "K: " << report.K << "\n";
  os << "M: " << report.M << "\n";
  os << "b0: " << format_double(report.B.mean()) << "\n";
  os << "reconstructed B coefficients: " << report.B.coeffs().size() << "\n";
  os << "reconstructed V coefficients: " << report.V.coeffs().size() << "\n";
  os << "hypothesis margin of reconstructed B: " << format_double(report.b_margin) << "\n";
  double min_sprime = INFINITY, worst_residual = 0.0;
  for (const auto& d : report.directions) {
    min_sprime = std::min(min_sprime, d.min_sprime);
    worst_residual = std::max(worst_residual, d.composition_residual);
  }
  os << "min s'(y) over directions: " << format_double(min_sprime) << "\n";
  os << "max composition residual: " << format_double(worst_residual) << "\n";
  if (report.b_errors) {
    os << "B relative L2 coefficient error: " << format_double(report.b_errors->rel_l2) << "\n";
    os << "B relative Linf coefficient error: " << format_double(report.b_errors->rel_linf) << "\n";
  }
  if (report.v_errors) {
    os << "V relative L2 coefficient error: " << format_double(report.v_errors->rel_l2) << "\n";
    os << "V relative Linf coefficient error: " << format_double(report.v_errors->rel_linf) << "\n";
  }
  return os.str();
}

std::string report_to_csv(const ReconstructionReport& report) {
  std::ostringstream os;
  os << "delta_a,delta_b,min_sprime,composition_residual,b_error,v_error\n";
  for (const auto& d : report.directions) {
    os << d.direction.a() << "," << d.direction.b() << "," << format_double(d.min_sprime) << ","
       << format_double(d.composition_residual) << ","
       << (d.b_error ? format_double(*d.b_error) : "") << ","
       << (d.v_error ? format_double(*d.v_error) : "") << "\n";
  }
  return os.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void save_field(const std::filesystem::path& path, const FourierField2D& field,
                const std::string& kind) {
  write_file(path, field_to_string(field, kind));
}

FourierField2D load_field(const std::filesystem::path& path) {
  return field_from_string(read_file(path));
}

void save_invariants(const std::filesystem::path& path, const InvariantSet& set) {
  write_file(path, invariants_to_string(set));
}

InvariantSet load_invariants(const std::filesystem::path& path) {
  return invariants_from_string(read_file(path));
}

}  // namespace magrigid::io
