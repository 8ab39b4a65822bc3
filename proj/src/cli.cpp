#include "magrigid/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "magrigid/io.hpp"
#include "magrigid/operators.hpp"
#include "magrigid/plot.hpp"
#include "magrigid/spectral.hpp"

namespace magrigid::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kKeys{"lattice", "b0_sign", "b0", "seed", "bandwidth", "v_bandwidth",
                                  "target_margin", "v_amplitude", "K", "M", "N", "N2",
                                  "max_primitive_norm", "generic_radius", "sweep_K", "heatmap_grid",
                                  "allow_inadmissible", "B_file", "V_file", "out"};

template <typename T>
void read(const json& j, const char* key, T& into) {
  if (!j.contains(key)) return;
  try {
    into = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("config: field '") + key + "' has the wrong type");
  }
}

Vec2 read_vec(const json& j, const char* key) {
  std::vector<double> v;
  read(j, key, v);
  if (v.size() != 2) throw InputError(std::string("config: lattice.") + key + " needs two numbers");
  return {v[0], v[1]};
}

std::string describe(const PrimitiveDirection& d) {
  return "(" + std::to_string(d.a()) + "," + std::to_string(d.b()) + ")";
}

// Runs one stage; on failure writes "<stage>: <message>" and returns false.
bool stage(const char* name, std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return true;
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << "\n";
  }
  return false;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
}

std::pair<FourierField2D, FourierField2D> synthesize_fields(const ExperimentConfig& c) {
  const Lattice lattice = c.lattice();
  FourierField2D B = random_admissible_field(c.seed, lattice, c.bandwidth, c.target_margin);
  if (c.b0_sign < 0) B = FourierField2D(lattice, -B.mean(), B.coeffs());
  FourierField2D V = random_potential_field(c.seed, lattice, c.v_bandwidth, c.v_amplitude);
  return {std::move(B), std::move(V)};
}

std::string flux_text(const FluxQuantization& f) {
  std::ostringstream os;
  if (f.rational) {
    os << f.rational->num;
    if (f.rational->den != 1) os << "/" << f.rational->den;
  } else {
    os << io::format_double(f.value) << " (no rational with denominator <= 64)";
  }
  return os.str();
}

void describe_fields(const FourierField2D& B, const FourierField2D& V, std::ostream& log) {
  const double margin = hypothesis_margin(B, default_margin_grid(B));
  log << "b0 = " << io::format_double(B.mean()) << "\n";
  log << "flux integer l = " << flux_text(flux_integer(B.lattice(), B.mean())) << "\n";
  log << "hypothesis margin |b0| - max|B - b0| = " << io::format_double(margin) << " ("
      << io::format_double(margin / std::abs(B.mean())) << " |b0|)\n";
  log << "B coefficients: " << B.coeffs().size() << ", V coefficients: " << V.coeffs().size() << "\n";
}

ForwardParams forward_params(const ExperimentConfig& c) {
  ForwardParams p;
  p.max_primitive_norm = c.max_primitive_norm;
  p.K = c.K;
  p.N = c.N;
  p.require_hypothesis = !c.allow_inadmissible;
  return p;
}

InverseParams inverse_params(const ExperimentConfig& c) {
  InverseParams p;
  p.M = c.M;
  p.K = c.K;
  return p;
}

void tail_summary(const InvariantSet& set, std::ostream& log) {
  log << "invariants: " << set.directions.size() << " directions, K = " << set.K << ", N = " << set.N
      << "\n";
  for (const auto& dir : set.directions) {
    double tail_f = 0.0, tail_g = 0.0;
    for (std::int64_t k = set.K / 2 + 1; k <= set.K; ++k) {
      tail_f = std::max(tail_f, std::abs(dir.F[static_cast<std::size_t>(k - 1)]));
      tail_g = std::max(tail_g, std::abs(dir.G[static_cast<std::size_t>(k - 1)]));
    }
    log << "  delta " << describe(dir.direction) << ": max |F_k| over k > K/2 = "
        << io::format_double(tail_f) << ", max |G_k| = " << io::format_double(tail_g) << "\n";
  }
}

void write_reconstruction(const ReconstructionReport& report, const fs::path& out) {
  io::save_field(out / "B_rec.json", report.B, "B");
  io::save_field(out / "V_rec.json", report.V, "V");
  io::write_file(out / "report.txt", io::report_to_text(report));
  io::write_file(out / "directions.csv", io::report_to_csv(report));
}

void check_preconditions(const FourierField2D& B, const FourierField2D& V) {
  const auto flux = flux_integer(B.lattice(), B.mean());
  if (!flux.is_unit()) {
    throw InputError("flux integer l = " + flux_text(flux) + " but reconstruction needs l = +-1");
  }
  const double margin = hypothesis_margin(B, default_margin_grid(B));
  if (!(margin > 0.0)) {
    throw HypothesisError("hypothesis |B - b0| < |b0| fails: margin " + io::format_double(margin), margin);
  }
  if (V.mean() != 0.0) throw InputError("V must have mean zero");
}

std::string sprime_csv(const InvariantSet& set, std::int64_t K, std::int64_t M) {
  std::vector<std::vector<double>> columns;
  std::ostringstream os;
  os << "y";
  for (const auto& dir : set.directions) {
    os << ",(" << dir.direction.a() << " " << dir.direction.b() << ")";
    const auto f = density_coefficients(std::span(dir.F).first(static_cast<std::size_t>(K)), set.l);
    columns.push_back(synthesize_sprime(f, M));
  }
  os << "\n";
  for (std::int64_t j = 0; j <= M; ++j) {
    os << io::format_double(static_cast<double>(j) / static_cast<double>(M));
    for (const auto& col : columns) os << "," << io::format_double(col[static_cast<std::size_t>(j % M)]);
    os << "\n";
  }
  return os.str();
}

std::string heatmap_csv(const FourierField2D& B, const FourierField2D& B_rec, std::int64_t n) {
  std::ostringstream os;
  os << "u,v,x,y,B_true,B_rec\n";
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      const double u = static_cast<double>(i) / static_cast<double>(n);
      const double v = static_cast<double>(j) / static_cast<double>(n);
      const Vec2 x = B.lattice().point(u, v);
      os << io::format_double(u) << "," << io::format_double(v) << "," << io::format_double(x.x) << ","
         << io::format_double(x.y) << "," << io::format_double(eval_field(B, x)) << ","
         << io::format_double(eval_field(B_rec, x)) << "\n";
    }
  }
  return os.str();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InputError("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw InputError("config: unknown field '" + key + "'");
  }
  ExperimentConfig c;
  if (j.contains("lattice")) {
    const json& l = j.at("lattice");
    if (!l.is_object()) throw InputError("config: lattice must be an object with e1, e2");
    for (const auto& [key, value] : l.items()) {
      if (key != "e1" && key != "e2") throw InputError("config: unknown field 'lattice." + key + "'");
    }
    if (l.contains("e1")) c.e1 = read_vec(l, "e1");
    if (l.contains("e2")) c.e2 = read_vec(l, "e2");
  }
  read(j, "b0_sign", c.b0_sign);
  if (j.contains("b0") && !j.at("b0").is_null()) {
    double b0 = 0.0;
    read(j, "b0", b0);
    c.b0 = b0;
  }
  read(j, "seed", c.seed);
  read(j, "bandwidth", c.bandwidth);
  c.v_bandwidth = c.bandwidth;
  read(j, "v_bandwidth", c.v_bandwidth);
  read(j, "target_margin", c.target_margin);
  read(j, "v_amplitude", c.v_amplitude);
  read(j, "K", c.K);
  read(j, "M", c.M);
  read(j, "N", c.N);
  read(j, "N2", c.N2);
  read(j, "max_primitive_norm", c.max_primitive_norm);
  read(j, "generic_radius", c.generic_radius);
  std::erase_if(c.sweep_K, [&](std::int64_t k) { return k > c.K; });
  read(j, "sweep_K", c.sweep_K);
  read(j, "heatmap_grid", c.heatmap_grid);
  read(j, "allow_inadmissible", c.allow_inadmissible);
  std::string path;
  if (j.contains("B_file")) {
    read(j, "B_file", path);
    c.B_file = path;
  }
  if (j.contains("V_file")) {
    read(j, "V_file", path);
    c.V_file = path;
  }
  if (j.contains("out")) {
    read(j, "out", path);
    c.out = path;
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  const std::string text = io::read_file(path);
  try {
    return config_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw InputError("config " + path.string() + ": " + e.what());
  }
}

json config_to_json(const ExperimentConfig& c) {
  json j{{"lattice", {{"e1", {c.e1.x, c.e1.y}}, {"e2", {c.e2.x, c.e2.y}}}},
         {"b0_sign", c.b0_sign},
         {"seed", c.seed},
         {"bandwidth", c.bandwidth},
         {"v_bandwidth", c.v_bandwidth},
         {"target_margin", c.target_margin},
         {"v_amplitude", c.v_amplitude},
         {"K", c.K},
         {"M", c.M},
         {"N", c.N},
         {"N2", c.N2},
         {"max_primitive_norm", c.max_primitive_norm},
         {"generic_radius", c.generic_radius},
         {"sweep_K", c.sweep_K},
         {"heatmap_grid", c.heatmap_grid},
         {"allow_inadmissible", c.allow_inadmissible},
         {"out", c.out.string()}};
  if (c.b0) j["b0"] = *c.b0;
  if (c.B_file) j["B_file"] = c.B_file->string();
  if (c.V_file) j["V_file"] = c.V_file->string();
  return j;
}

void validate(const ExperimentConfig& c) {
  (void)c.lattice();
  const auto need = [](bool ok, const std::string& what) {
    if (!ok) throw InputError("config: " + what);
  };
  need(c.b0_sign == 1 || c.b0_sign == -1, "b0_sign must be +1 or -1");
  need(!c.b0 || (std::isfinite(*c.b0) && *c.b0 != 0.0), "b0 must be finite and nonzero");
  need(c.bandwidth >= 0 && c.v_bandwidth >= 0, "bandwidths must be >= 0");
  need(c.target_margin > 0.0 && c.target_margin < 1.0, "target_margin must lie in (0, 1)");
  need(c.v_amplitude >= 0.0, "v_amplitude must be >= 0");
  need(c.K >= 1, "K must be >= 1");
  need(c.M >= 4 * c.K, "M must be at least 4K");
  need(c.N >= 0, "N must be >= 0 (0 selects the default)");
  need(c.N2 >= 64, "N2 must be >= 64");
  need(c.max_primitive_norm >= 1, "max_primitive_norm must be >= 1");
  need(c.generic_radius > 0.0, "generic_radius must be > 0");
  need(c.heatmap_grid >= 4, "heatmap_grid must be >= 4");
  for (const auto k : c.sweep_K) need(k >= 1 && k <= c.K, "sweep_K entries must lie in [1, K]");
  need(c.B_file.has_value() == c.V_file.has_value(), "B_file and V_file go together");
  need(!c.out.empty(), "out must name a directory");
}

int cmd_synth(const ExperimentConfig& config, std::ostream& log, std::ostream& err) {
  std::optional<std::pair<FourierField2D, FourierField2D>> fields;
  if (!stage("synth", err, [&] {
        make_dir(config.out);
        fields = synthesize_fields(config);
        io::save_field(config.out / "B.json", fields->first, "B");
        io::save_field(config.out / "V.json", fields->second, "V");
      })) {
    return 1;
  }
  describe_fields(fields->first, fields->second, log);
  log << "wrote " << (config.out / "B.json").string() << " and " << (config.out / "V.json").string() << "\n";
  return 0;
}

int cmd_forward(const ExperimentConfig& config, const fs::path& B_path, const fs::path& V_path,
                std::ostream& log, std::ostream& err) {
  std::optional<FourierField2D> B, V;
  if (!stage("load", err, [&] {
        B = io::load_field(B_path);
        V = io::load_field(V_path);
      })) {
    return 1;
  }
  std::optional<InvariantSet> set;
  if (!stage("forward", err, [&] { set = compute_invariant_set(*B, *V, forward_params(config)); })) return 1;
  if (!stage("write", err, [&] {
        make_dir(config.out);
        io::save_invariants(config.out / "invariants.json", *set);
      })) {
    return 1;
  }
  tail_summary(*set, log);
  log << "wrote " << (config.out / "invariants.json").string() << "\n";
  return 0;
}

int cmd_invert(const ExperimentConfig& config, const fs::path& invariants_path, std::ostream& log,
               std::ostream& err) {
  std::optional<InvariantSet> set;
  if (!stage("load", err, [&] { set = io::load_invariants(invariants_path); })) return 1;
  std::optional<ReconstructionReport> report;
  InverseParams params = inverse_params(config);
  params.K = std::min(params.K, set->K);
  if (!stage("invert", err, [&] { report = reconstruct(*set, params); })) return 1;
  if (!stage("write", err, [&] {
        make_dir(config.out);
        write_reconstruction(*report, config.out);
      })) {
    return 1;
  }
  log << io::report_to_text(*report);
  return 0;
}

int cmd_roundtrip(const ExperimentConfig& config, std::ostream& log, std::ostream& err) {
  const fs::path& out = config.out;
  std::optional<std::pair<FourierField2D, FourierField2D>> fields;
  const bool from_files = config.B_file.has_value();
  if (!stage(from_files ? "load" : "synth", err, [&] {
        make_dir(out);
        if (from_files) {
          fields.emplace(io::load_field(*config.B_file), io::load_field(*config.V_file));
        } else {
          fields = synthesize_fields(config);
        }
        io::save_field(out / "B.json", fields->first, "B");
        io::save_field(out / "V.json", fields->second, "V");
      })) {
    return 1;
  }
  const auto& [B, V] = *fields;
  describe_fields(B, V, log);
  if (std::max(B.max_index(), V.max_index()) > config.max_primitive_norm) {
    log << "note: coefficients beyond max_primitive_norm = " << config.max_primitive_norm
        << " cannot be reconstructed\n";
  }
  if (!config.allow_inadmissible && !stage("precondition", err, [&] { check_preconditions(B, V); })) {
    return 1;
  }

  std::optional<InvariantSet> set;
  if (!stage("forward", err, [&] {
        set = compute_invariant_set(B, V, forward_params(config));
        io::save_invariants(out / "invariants.json", *set);
      })) {
    return 1;
  }
  tail_summary(*set, log);

  std::optional<ReconstructionReport> report;
  if (!stage("invert", err, [&] {
        report = reconstruct(*set, inverse_params(config));
        attach_errors(*report, B, V);
        write_reconstruction(*report, out);
      })) {
    return 1;
  }
  log << io::report_to_text(*report);

  if (!stage("sweep", err, [&] {
        std::ostringstream os;
        os << "K,B_rel_l2,B_rel_linf,V_rel_l2,V_rel_linf\n";
        for (const auto k : config.sweep_K) {
          InverseParams p = inverse_params(config);
          p.K = k;
          os << k;
          try {
            ReconstructionReport r = reconstruct(*set, p);
            attach_errors(r, B, V);
            os << "," << io::format_double(r.b_errors->rel_l2) << "," << io::format_double(r.b_errors->rel_linf)
               << "," << io::format_double(r.v_errors->rel_l2) << "," << io::format_double(r.v_errors->rel_linf);
          } catch (const std::exception& e) {
            log << "sweep K = " << k << ": " << e.what() << "\n";
            os << ",,,,";
          }
          os << "\n";
        }
        io::write_file(out / "sweep.csv", os.str());
        io::write_file(out / "sprime.csv", sprime_csv(*set, report->K, config.M));
        io::write_file(out / "heatmap.csv", heatmap_csv(B, report->B, config.heatmap_grid));
      })) {
    return 1;
  }

  if (!stage("plot", err, [&] {
        io::write_file(out / "heatmap_B.svg", plot::heatmap_svg(plot::parse_csv(io::read_file(out / "heatmap.csv"))));
        io::write_file(out / "sprime.svg", plot::sprime_svg(plot::parse_csv(io::read_file(out / "sprime.csv"))));
        io::write_file(out / "sweep.svg", plot::sweep_svg(plot::parse_csv(io::read_file(out / "sweep.csv"))));
      })) {
    return 1;
  }
  log << "wrote results to " << out.string() << "\n";
  return 0;
}

int cmd_check(const ExperimentConfig& config, std::ostream& log, std::ostream& err) {
  return stage("check", err, [&] {
           const Lattice lattice = config.lattice();
           log << "lattice e1 = (" << io::format_double(lattice.e1().x) << ", " << io::format_double(lattice.e1().y)
               << "), e2 = (" << io::format_double(lattice.e2().x) << ", " << io::format_double(lattice.e2().y)
               << "), area = " << io::format_double(lattice.area()) << "\n";
           const auto generic = is_generic(lattice, config.generic_radius);
           log << "genericity within radius " << io::format_double(config.generic_radius) << ": ";
           if (generic.generic) {
             log << "generic\n";
           } else {
             const auto [a, b] = *generic.witness;
             const Vec2 pa = lattice.point(a);
             log << "not generic, |d| = |d'| = " << io::format_double(norm(pa)) << " for d = (" << a.m << ","
                 << a.n << "), d' = (" << b.m << "," << b.n << ")\n";
           }
           const double b0 = config.b0.value_or(b0_for_unit_flux(lattice, config.b0_sign));
           const auto flux = flux_integer(lattice, b0);
           log << "b0 = " << io::format_double(b0) << "\n";
           log << "flux integer l = " << flux_text(flux) << "\n";
           log << "commutator |exp(i v2.e1) - exp(i v1.e2)| = "
               << io::format_double(std::abs(commutator_phase(lattice, b0))) << "\n";
           if (flux.rational && flux.rational->den > 1) {
             const auto q = flux.rational->den;
             log << "T1 and T2 do not commute; on the sublattice {" << q << " e1, e2} the flux integer is "
                 << flux.rational->num << "\n";
           }
         })
             ? 0
             : 1;
}

}  // namespace magrigid::cli
