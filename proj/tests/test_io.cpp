#include <doctest.h>

#include <filesystem>

#include "magrigid/io.hpp"

using namespace magrigid;

namespace {

const Lattice kOblique({1, 0}, {0.3, 1.1});

InvariantSet small_set() {
  ForwardParams params;
  params.max_primitive_norm = 2;
  params.K = 6;
  return compute_invariant_set(random_admissible_field(7, kOblique, 3, 0.2),
                               random_potential_field(7, kOblique, 3, 1.0), params);
}

nlohmann::json doc(const std::string& text) { return nlohmann::json::parse(text); }

}  // namespace

TEST_CASE("format_double round-trips bits") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 5.7119866428905333, 1e22}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("field save/load is exact") {
  const auto B = random_admissible_field(3, kOblique, 4, 0.2);
  const std::string text = io::field_to_string(B, "B");
  const auto back = io::field_from_string(text);
  CHECK(back == B);
  CHECK(io::field_to_string(back, "B") == text);
  // Only one half-plane is written.
  CHECK(doc(text)["coefficients"].size() * 2 == B.coeffs().size());
}

TEST_CASE("field loader accepts both halves and checks them") {
  auto j = doc(io::field_to_string(random_admissible_field(4, kOblique, 2, 0.2), "B"));
  const auto original = io::field_from_string(j.dump());
  auto both = j;
  for (const auto& r : j["coefficients"]) {
    both["coefficients"].push_back({{"m", -r["m"].get<int>()},
                                    {"n", -r["n"].get<int>()},
                                    {"re", r["re"]},
                                    {"im", -r["im"].get<double>()}});
  }
  CHECK(io::field_from_string(both.dump()) == original);

  auto broken = both;
  broken["coefficients"].back()["im"] = 1.0 + broken["coefficients"].back()["im"].get<double>();
  CHECK_THROWS_AS(io::field_from_string(broken.dump()), FormatError);

  auto dup = j;
  dup["coefficients"].push_back(j["coefficients"][0]);
  CHECK_THROWS_AS(io::field_from_string(dup.dump()), FormatError);

  auto origin = j;
  origin["coefficients"].push_back({{"m", 0}, {"n", 0}, {"re", 1.0}, {"im", 0.0}});
  CHECK_THROWS_AS(io::field_from_string(origin.dump()), FormatError);

  auto wrong = j;
  wrong["format"] = "something-else";
  CHECK_THROWS_AS(io::field_from_string(wrong.dump()), FormatError);
  auto missing = j;
  missing.erase("mean");
  CHECK_THROWS_AS(io::field_from_string(missing.dump()), FormatError);
  CHECK_THROWS_AS(io::field_from_string("{not json"), FormatError);
  auto flat = j;
  flat["lattice"]["e2"] = {2.0, 0.0};
  CHECK_THROWS_AS(io::field_from_string(flat.dump()), FormatError);
}

TEST_CASE("invariants save/load is bit-exact") {
  const auto set = small_set();
  const std::string text = io::invariants_to_string(set);
  const auto back = io::invariants_from_string(text);
  CHECK(io::invariants_to_string(back) == text);
  REQUIRE(back.directions.size() == set.directions.size());
  for (std::size_t i = 0; i < set.directions.size(); ++i) {
    CHECK(back.directions[i].direction == set.directions[i].direction);
    CHECK(back.directions[i].F == set.directions[i].F);
    CHECK(back.directions[i].G == set.directions[i].G);
  }
  CHECK(back.b0 == set.b0);
  CHECK(back.N == set.N);
  CHECK(doc(text)["records"].size() == set.directions.size() * 6);
}

TEST_CASE("invariants loader validation names the record") {
  const auto j = doc(io::invariants_to_string(small_set()));

  auto with_negative = j;
  auto r = j["records"][2];
  r["k"] = -r["k"].get<int>();
  r["Fim"] = -r["Fim"].get<double>();
  r["Gim"] = -r["Gim"].get<double>();
  with_negative["records"].push_back(r);
  CHECK_NOTHROW(io::invariants_from_string(with_negative.dump()));

  auto corrupt = with_negative;
  corrupt["records"].back()["Fim"] = 0.5 + r["Fim"].get<double>();
  try {
    io::invariants_from_string(corrupt.dump());
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("conjugate") != std::string::npos);
    CHECK(msg.find("k=" + std::to_string(r["k"].get<int>())) != std::string::npos);
  }

  auto gap = j;
  gap["records"].erase(3);
  CHECK_THROWS_WITH_AS(io::invariants_from_string(gap.dump()), doctest::Contains("missing k"), FormatError);

  auto noncanonical = j;
  noncanonical["records"][0]["delta_a"] = -1;
  noncanonical["records"][0]["delta_b"] = 0;
  CHECK_THROWS_WITH_AS(io::invariants_from_string(noncanonical.dump()),
                       doctest::Contains("invariant record 0"), FormatError);

  auto big_k = j;
  big_k["records"][0]["k"] = 99;
  CHECK_THROWS_AS(io::invariants_from_string(big_k.dump()), FormatError);

  auto dup = j;
  dup["records"].push_back(j["records"][0]);
  CHECK_THROWS_WITH_AS(io::invariants_from_string(dup.dump()), doctest::Contains("duplicate"), FormatError);

  auto jac = j;
  jac["jacobian"] = 2.0;
  CHECK_THROWS_AS(io::invariants_from_string(jac.dump()), FormatError);

  auto bad_l = j;
  bad_l["l"] = 2;
  CHECK_THROWS_AS(io::invariants_from_string(bad_l.dump()), FormatError);

  auto typed = j;
  typed["records"][1]["Fre"] = "zero";
  CHECK_THROWS_WITH_AS(io::invariants_from_string(typed.dump()), doctest::Contains("invariant record 1"),
                       FormatError);
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "magrigid_test_io";
  std::filesystem::create_directories(dir);
  const auto B = random_admissible_field(2, kOblique, 2, 0.2);
  io::save_field(dir / "B.json", B, "B");
  CHECK(io::load_field(dir / "B.json") == B);
  const auto set = small_set();
  io::save_invariants(dir / "inv.json", set);
  CHECK(io::invariants_to_string(io::load_invariants(dir / "inv.json")) == io::invariants_to_string(set));
  CHECK_THROWS(io::load_field(dir / "absent.json"));
  CHECK_THROWS(io::write_file(dir / "no" / "such" / "dir.json", "x"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("report text and csv") {
  RoundtripParams params;
  params.forward.K = 16;
  params.forward.max_primitive_norm = 2;
  params.inverse.M = 128;
  const auto B = random_admissible_field(1, kOblique, 2, 0.2);
  const auto V = random_potential_field(1, kOblique, 2, 1.0);
  const auto report = roundtrip(B, V, params);
  const std::string csv = io::report_to_csv(report);
  CHECK(csv.rfind("delta_a,delta_b,min_sprime,composition_residual,b_error,v_error\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(report.directions.size()) + 1);
  const std::string text = io::report_to_text(report);
  CHECK(text.find("B relative Linf coefficient error") != std::string::npos);
  CHECK(io::report_to_text(roundtrip(B, V, params)) == text);
}
