#include "spr/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace spr::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::format, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return json(v).dump();
}

}  // namespace

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(ErrorKind::format, "expected a number, got " + j.dump());
}

json norm_to_json(const NormSpec& norm) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LpNorm>) return {{"variant", "Lp"}, {"p", n.p}};
        else if constexpr (std::is_same_v<T, SupNorm>) return {{"variant", "Sup"}};
        else if constexpr (std::is_same_v<T, LorentzNorm>) return {{"variant", "Lorentz"}, {"p", n.p}, {"q", n.q}};
        else return {{"variant", "Polyhedral"}, {"functionals", n.functionals}};
      },
      norm);
}

NormSpec norm_from_json(const json& j) {
  try {
    const auto variant = field(j, "variant").get<std::string>();
    if (variant == "Lp") return LpNorm{field(j, "p").get<double>()};
    if (variant == "Sup") return SupNorm{};
    if (variant == "Lorentz") return LorentzNorm{field(j, "p").get<double>(), field(j, "q").get<double>()};
    if (variant == "Polyhedral")
      return PolyhedralNorm{field(j, "functionals").get<std::vector<std::vector<double>>>()};
    fail(ErrorKind::format, "unknown norm variant '" + variant + "'");
  } catch (const json::exception& e) {
    fail(ErrorKind::format, std::string("bad norm description: ") + e.what());
  }
}

json vector_entries(const LatticeVector& x) {
  json out = json::array();
  const bool complex_field = x.space().field() == Field::complex;
  for (const auto& z : x.entries()) {
    if (complex_field) out.push_back({z.real(), z.imag()});
    else out.push_back({z.real()});
  }
  return out;
}

json subspace_to_json(const Subspace& e) {
  const AtomSpace& space = e.ambient();
  json basis = json::array();
  for (const auto& b : e.basis()) basis.push_back(vector_entries(b));
  return {{"field", space.field() == Field::real ? "real" : "complex"},
          {"weights", std::vector<double>(space.weights().begin(), space.weights().end())},
          {"norm", norm_to_json(space.norm_spec())},
          {"basis", basis}};
}

Subspace subspace_from_json(const json& j) {
  try {
    const auto field_name = field(j, "field").get<std::string>();
    require(field_name == "real" || field_name == "complex", ErrorKind::format, "field must be real or complex");
    const Field f = field_name == "real" ? Field::real : Field::complex;
    auto space = std::make_shared<const AtomSpace>(field(j, "weights").get<std::vector<double>>(),
                                                   norm_from_json(field(j, "norm")), f);
    std::vector<LatticeVector> basis;
    for (const auto& vec : field(j, "basis")) {
      require(vec.is_array(), ErrorKind::format, "basis vectors must be arrays");
      std::vector<Scalar> z;
      for (const auto& entry : vec) {
        require(entry.is_array() && (entry.size() == 1 || entry.size() == 2), ErrorKind::format,
                "basis entries must be [re] or [re, im]");
        z.emplace_back(entry[0].get<double>(), entry.size() == 2 ? entry[1].get<double>() : 0.0);
      }
      require(z.size() == space->atom_count(), ErrorKind::format, "basis vector length does not match weights");
      basis.emplace_back(space, std::move(z));
    }
    return Subspace(space, std::move(basis));
  } catch (const json::exception& e) {
    fail(ErrorKind::format, std::string("bad subspace document: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::format) throw;
    fail(ErrorKind::format, std::string("invalid subspace: ") + e.what());
  }
}

json certificate_to_json(const SPRCertificate& cert) {
  json witnesses = json::array();
  for (const auto& w : cert.witnesses)
    witnesses.push_back(
        {{"role", w.role}, {"value", number(w.value)}, {"f", vector_entries(w.f)}, {"g", vector_entries(w.g)}});
  json out = {{"epsilon_upper", number(cert.epsilon_upper)},
              {"spr_lower", number(cert.spr_lower)},
              {"pr_failure", cert.pr_failure},
              {"method", cert.method},
              {"tolerance", number(cert.tolerance)},
              {"seed", cert.seed},
              {"budget",
               {{"pairs", cert.budget.pairs},
                {"refine_starts", cert.budget.refine_starts},
                {"refine_evaluations", cert.budget.refine_evaluations},
                {"grid_step", cert.budget.grid_step}}},
              {"witnesses", witnesses}};
  if (cert.epsilon_lower) out["epsilon_lower"] = number(*cert.epsilon_lower);
  if (cert.spr_interval)
    out["interval"] = json::array({number(cert.spr_interval->first), number(cert.spr_interval->second)});
  return out;
}

json witness_to_json(const WitnessPair& w, const WitnessReport& report) {
  return {{"f_prime", vector_entries(w.f_prime)},
          {"g_prime", vector_entries(w.g_prime)},
          {"r_star", w.r_star},
          {"k_factor", w.k_factor},
          {"lambda", {w.lambda.real(), w.lambda.imag()}},
          {"slacks", {{"phase", report.slack_phase}, {"norm", report.slack_norm}, {"modulus", report.slack_modulus}}},
          {"pass", report.pass}};
}

json perturbation_to_json(const PerturbationReport& r) {
  return {{"d1h", r.d1h},
          {"threshold", r.threshold},
          {"c_prime", r.c_prime ? json(number(*r.c_prime)) : json("inadmissible")}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::format, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::format, "cannot write '" + path + "'");
  out << contents;
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::format, "'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string csv_header() { return "variant,params,r,epsilon_upper,epsilon_lower,spr_lower,method,seed"; }

std::string csv_row(const std::string& variant, const std::string& params, double r, const SPRCertificate& cert) {
  std::ostringstream os;
  os << variant << ",\"" << params << "\"," << format_double(r) << ',' << format_double(cert.epsilon_upper) << ','
     << (cert.epsilon_lower ? format_double(*cert.epsilon_lower) : "") << ',' << format_double(cert.spr_lower) << ','
     << cert.method << ',' << cert.seed;
  return os.str();
}

}  // namespace spr::io
