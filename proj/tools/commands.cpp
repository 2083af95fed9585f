#include "commands.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "spr/constructions.hpp"
#include "spr/io.hpp"
#include "spr/metrics.hpp"
#include "spr/oracle.hpp"
#include "spr/parallel.hpp"
#include "spr/perturbation.hpp"
#include "spr/witness.hpp"

namespace spr::cli {

using io::json;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  require(ctx != nullptr, ErrorKind::numerical, "cannot allocate a digest context");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, data.data(), data.size());
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

namespace {

struct ConstructFlags {
  std::string variant;
  std::size_t n = 3;
  std::size_t m = 0;
  std::optional<double> p;
  double q = 1.5;
  std::size_t big_n = 0;
  std::size_t resolution = 0;
};

struct BudgetFlags {
  std::size_t pairs = 4000;
  std::size_t starts = 10;
  int evals = 600;
  std::optional<double> grid;
};

void add_construct_flags(CLI::App* sub, ConstructFlags& f) {
  sub->add_option("--variant", f.variant,
                  "gaussian | q-stable | rademacher-spike | rademacher-spike-l2 | pr-not-spr | scattered-ck | "
                  "threed | threed-embedded");
  sub->add_option("--n", f.n, "dimension of random spans");
  sub->add_option("--m", f.m, "atom count of random spans");
  sub->add_option("--p", f.p, "L_p exponent of the ambient norm");
  sub->add_option("--q", f.q, "stability index for q-stable spans");
  sub->add_option("--N", f.big_n, "family size for the explicit constructions");
  sub->add_option("--resolution", f.resolution, "atoms per unit interval (power of two)");
}

void add_budget_flags(CLI::App* sub, BudgetFlags& b) {
  sub->add_option("--pairs", b.pairs, "random pairs sampled")->capture_default_str();
  sub->add_option("--starts", b.starts, "Nelder-Mead refinement starts")->capture_default_str();
  sub->add_option("--evals", b.evals, "evaluations per refinement")->capture_default_str();
  sub->add_option("--grid", b.grid, "grid step (radians) for 2D certification");
}

SearchBudget to_budget(const BudgetFlags& b) {
  SearchBudget s;
  s.pairs = b.pairs;
  s.refine_starts = b.starts;
  s.refine_evaluations = b.evals;
  s.grid_step = b.grid.value_or(0.0);
  return s;
}

ConstructionRecipe to_recipe(const ConstructFlags& f, std::uint64_t seed, std::ostream& err) {
  require(!f.variant.empty(), ErrorKind::usage, "--variant is required");
  ConstructionRecipe r;
  r.variant = f.variant;
  r.seed = seed;
  r.q = f.q;
  const bool family = f.variant == "rademacher-spike" || f.variant == "rademacher-spike-l2" ||
                      f.variant == "pr-not-spr" || f.variant == "scattered-ck";
  if (family) {
    require(f.big_n > 0, ErrorKind::usage, "--N is required for variant " + f.variant);
    r.n = f.big_n;
  } else {
    r.n = f.n;
  }
  r.m = f.m ? f.m : 16 * r.n;
  if (f.variant == "gaussian") r.p = f.p.value_or(2.0);
  else if (f.variant == "q-stable") r.p = f.p.value_or(1.0);
  else if (f.variant == "rademacher-spike") r.p = f.p.value_or(4.0);
  else r.p = f.p.value_or(2.0);
  if (f.variant.rfind("rademacher", 0) == 0)
    r.resolution = f.resolution ? f.resolution : (std::size_t{1} << std::min<std::size_t>(r.n + 1, 40));
  if (f.variant == "q-stable" && !q_stable_integrable(r.p, r.q))
    err << "warning: q-stable samples are not in L_p for p >= q (p=" << r.p << ", q=" << r.q << ")\n";
  return r;
}

std::string recipe_params(const ConstructionRecipe& r) {
  std::ostringstream os;
  os << "n=" << r.n;
  if (r.variant == "gaussian" || r.variant == "q-stable") os << ";m=" << r.m;
  if (r.variant == "q-stable") os << ";q=" << r.q;
  os << ";p=" << r.p;
  if (r.resolution) os << ";resolution=" << r.resolution;
  return os.str();
}

json option_values(const CLI::App* sub) {
  json params = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--help" || name == "-h") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      params[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

json file_digest(const std::string& path) { return {{"path", path}, {"sha256", sha256_hex(io::read_file(path))}}; }

struct Run {
  std::vector<std::string> argv;
  std::string command;
  std::uint64_t seed = 0;
  json inputs = json::array();
  json outputs = json::array();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  json manifest(const CLI::App* sub) const {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {{"command", command},   {"argv", argv},       {"params", option_values(sub)},
            {"seed", seed},         {"tool_version", kToolVersion}, {"inputs", inputs},
            {"outputs", outputs},   {"threads", worker_count()},    {"wall_time_seconds", wall}};
  }
};

/// Digest of the report with the wall-time field removed.
std::string report_digest(json report) {
  report.erase("report_digest");
  if (report.contains("manifest")) {
    report["manifest"].erase("wall_time_seconds");
    report["manifest"].erase("threads");
  }
  return sha256_hex(report.dump());
}

json finish_report(const Run& run, const CLI::App* sub, json result) {
  json report = {{"command", run.command}, {"result", std::move(result)}, {"manifest", run.manifest(sub)}};
  report["report_digest"] = report_digest(report);
  return report;
}

Subspace load(Run& run, const std::string& path) {
  require(!path.empty(), ErrorKind::usage, "--in is required");
  run.inputs.push_back(file_digest(path));
  return io::subspace_from_json(io::read_json(path));
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::domain:
    case ErrorKind::dimension:
      return usage;
    case ErrorKind::format:
      return input_format;
    default:
      return numerical;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"spr_lab: stable phase retrieval constants on discretized Banach lattices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::uint64_t seed = 0;
  std::string in_path, out_path, target_path, target_out, manifest_path;
  ConstructFlags cflags;
  BudgetFlags bflags;

  auto* construct = app.add_subcommand("construct", "build a subspace family and write it as JSON");
  add_construct_flags(construct, cflags);
  construct->add_option("--seed", seed)->capture_default_str();
  construct->add_option("--out", out_path, "subspace JSON path")->required();
  construct->add_option("--manifest", manifest_path, "write the run manifest here");

  auto* certify_cmd = app.add_subcommand("certify", "bound eps* and the optimal SPR constant");
  certify_cmd->add_option("--in", in_path, "subspace JSON")->required();
  add_budget_flags(certify_cmd, bflags);
  certify_cmd->add_option("--seed", seed)->capture_default_str();
  certify_cmd->add_option("--out", out_path, "report JSON path");

  std::size_t wi = 0, wj = 1, wrandom = 0;
  auto* witness_cmd = app.add_subcommand("witness", "tighten pairs into almost orthogonal witnesses");
  witness_cmd->add_option("--in", in_path, "subspace JSON")->required();
  witness_cmd->add_option("--i", wi, "index of f in the basis")->capture_default_str();
  witness_cmd->add_option("--j", wj, "index of g in the basis")->capture_default_str();
  witness_cmd->add_option("--random", wrandom, "tighten this many random pairs instead");
  witness_cmd->add_option("--seed", seed)->capture_default_str();
  witness_cmd->add_option("--out", out_path, "report JSON path");

  std::optional<double> epsilon, c_value;
  std::size_t samples = 256;
  auto* perturb_cmd = app.add_subcommand("perturb", "one-sided Hausdorff distance and perturbed SPR constant");
  perturb_cmd->add_option("--in", in_path, "subspace JSON of E")->required();
  perturb_cmd->add_option("--target", target_path, "subspace JSON of F");
  perturb_cmd->add_option("--epsilon", epsilon, "perturb E's basis by this relative amount instead");
  perturb_cmd->add_option("--c", c_value, "SPR constant of E (default: grid certificate for 2D E)");
  perturb_cmd->add_option("--samples", samples, "unit vectors of F sampled")->capture_default_str();
  perturb_cmd->add_option("--target-out", target_out, "write the perturbed F here");
  perturb_cmd->add_option("--seed", seed)->capture_default_str();
  perturb_cmd->add_option("--out", out_path, "report JSON path");
  perturb_cmd->excludes(perturb_cmd->get_option("--target"));
  perturb_cmd->get_option("--target")->excludes(perturb_cmd->get_option("--epsilon"));

  std::vector<double> r_list;
  auto* sweep_cmd = app.add_subcommand("sweep", "certify a family under L_r for a list of r");
  add_construct_flags(sweep_cmd, cflags);
  sweep_cmd->add_option("--in", in_path, "subspace JSON (instead of --variant)");
  sweep_cmd->add_option("--r", r_list, "comma separated exponents")->delimiter(',')->required();
  add_budget_flags(sweep_cmd, bflags);
  sweep_cmd->add_option("--seed", seed)->capture_default_str();
  sweep_cmd->add_option("--out", out_path, "CSV path");

  auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest or report");
  replay_cmd->add_option("--manifest", manifest_path, "manifest or report JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  Run run;
  run.argv = args;
  run.seed = seed;
  try {
    if (replay_cmd->parsed()) {
      json doc = io::read_json(manifest_path);
      if (doc.contains("manifest")) doc = doc["manifest"];
      require(doc.contains("argv") && doc["argv"].is_array(), ErrorKind::format, "manifest has no argv");
      return cli::run(doc["argv"].get<std::vector<std::string>>(), out, err);
    }

    if (construct->parsed()) {
      run.command = "construct";
      const auto recipe = to_recipe(cflags, seed, err);
      const Subspace e = build(recipe);
      io::write_file(out_path, io::subspace_to_json(e).dump() + "\n");
      run.outputs.push_back(file_digest(out_path));
      json result = {{"variant", recipe.variant},
                     {"params", recipe_params(recipe)},
                     {"atoms", e.ambient().atom_count()},
                     {"dimension", e.dimension()},
                     {"norm", describe(e.ambient().norm_spec())}};
      const json report = finish_report(run, construct, std::move(result));
      if (!manifest_path.empty()) io::write_file(manifest_path, report.dump(2) + "\n");
      out << report.dump(2) << "\n";
      return ok;
    }

    if (certify_cmd->parsed()) {
      run.command = "certify";
      const Subspace e = load(run, in_path);
      const SearchBudget budget = to_budget(bflags);
      if (budget.pairs < 1000) err << "warning: small sampling budget (" << budget.pairs << " pairs)\n";
      const SPRCertificate cert = certify(e, budget, seed);
      json result = io::certificate_to_json(cert);
      if (bflags.grid && cert.epsilon_lower) {
        const auto s = sandwich_check(cert, cert.spr_lower);
        result["sandwich"] = {{"pass", s.pass},
                              {"lower_bound", io::number(s.lower_bound)},
                              {"upper_bound", io::number(s.upper_bound)},
                              {"lower_slack", io::number(s.lower_slack)},
                              {"upper_slack", io::number(s.upper_slack)}};
      } else if (bflags.grid) {
        err << "warning: grid certification needs a 2-dimensional subspace; reporting sampled bounds\n";
      }
      const json report = finish_report(run, certify_cmd, std::move(result));
      if (!out_path.empty()) io::write_file(out_path, report.dump(2) + "\n");
      out << report.dump(2) << "\n";
      return ok;
    }

    if (witness_cmd->parsed()) {
      run.command = "witness";
      const Subspace e = load(run, in_path);
      json items = json::array();
      auto add = [&](const LatticeVector& f, const LatticeVector& g) {
        const WitnessPair w = tighten(f, g);
        items.push_back(io::witness_to_json(w, verify_witness(w, f, g)));
      };
      if (wrandom > 0) {
        require(e.dimension() >= 2, ErrorKind::dimension, "random witnesses need dimension >= 2");
        for (std::size_t k = 0; k < wrandom; ++k) {
          auto rng = sample_rng(seed, k, 31);
          std::normal_distribution<double> gauss;
          std::vector<Scalar> a(e.dimension()), b(e.dimension());
          const bool cx = e.field() == Field::complex;
          for (auto& z : a) z = Scalar(gauss(rng), cx ? gauss(rng) : 0.0);
          for (auto& z : b) z = Scalar(gauss(rng), cx ? gauss(rng) : 0.0);
          add(e.combine(a), e.combine(b));
        }
      } else {
        require(wi < e.dimension() && wj < e.dimension() && wi != wj, ErrorKind::usage,
                "--i and --j must be distinct basis indices");
        add(e.basis()[wi], e.basis()[wj]);
      }
      const json report = finish_report(run, witness_cmd, {{"witnesses", items}});
      if (!out_path.empty()) io::write_file(out_path, report.dump(2) + "\n");
      out << report.dump(2) << "\n";
      return ok;
    }

    if (perturb_cmd->parsed()) {
      run.command = "perturb";
      const Subspace e = load(run, in_path);
      require(!target_path.empty() || epsilon, ErrorKind::usage, "give --target or --epsilon");
      std::optional<Subspace> f;
      if (!target_path.empty()) {
        f = load(run, target_path);
      } else {
        require(*epsilon >= 0.0, ErrorKind::usage, "--epsilon must be nonnegative");
        std::vector<LatticeVector> basis;
        const bool cx = e.field() == Field::complex;
        for (std::size_t j = 0; j < e.dimension(); ++j) {
          auto rng = sample_rng(seed, j, 32);
          std::normal_distribution<double> gauss;
          std::vector<Scalar> d(e.ambient().atom_count());
          for (auto& z : d) z = Scalar(gauss(rng), cx ? gauss(rng) : 0.0);
          const LatticeVector dv(e.ambient_ptr(), std::move(d));
          basis.push_back(e.basis()[j] + dv.scaled(*epsilon * e.basis()[j].norm() / dv.norm()));
        }
        f = Subspace(e.ambient_ptr(), std::move(basis));
        if (!target_out.empty()) {
          io::write_file(target_out, io::subspace_to_json(*f).dump() + "\n");
          run.outputs.push_back(file_digest(target_out));
        }
      }
      double c = 0.0;
      if (c_value) {
        c = *c_value;
      } else {
        require(e.dimension() == 2, ErrorKind::usage, "--c is required unless E is 2-dimensional");
        SearchBudget budget;
        budget.pairs = 2000;
        const SPRCertificate cert = certify(e, budget, seed);
        require(cert.spr_interval && std::isfinite(cert.spr_interval->second), ErrorKind::not_certified,
                "could not certify an SPR constant for E");
        c = cert.spr_interval->second;
      }
      HausdorffBudget hb;
      hb.samples = samples;
      json result = io::perturbation_to_json(perturbation_report(e, *f, c, hb, seed));
      result["c"] = c;
      const json report = finish_report(run, perturb_cmd, std::move(result));
      if (!out_path.empty()) io::write_file(out_path, report.dump(2) + "\n");
      out << report.dump(2) << "\n";
      return ok;
    }

    if (sweep_cmd->parsed()) {
      run.command = "sweep";
      std::string variant = "file", params;
      std::optional<Subspace> e;
      if (!in_path.empty()) {
        e = load(run, in_path);
        params = "in=" + in_path;
      } else {
        const auto recipe = to_recipe(cflags, seed, err);
        e = build(recipe);
        variant = recipe.variant;
        params = recipe_params(recipe);
      }
      for (double r : r_list) require(r >= 1.0 && std::isfinite(r), ErrorKind::usage, "every r must be >= 1");
      const SearchBudget budget = to_budget(bflags);
      std::ostringstream csv;
      csv << io::csv_header() << "\n";
      json rows = json::array();
      for (double r : r_list) {
        const SPRCertificate cert = certify(e->with_norm(LpNorm{r}), budget, seed);
        csv << io::csv_row(variant, params, r, cert) << "\n";
        rows.push_back({{"r", r},
                        {"epsilon_upper", io::number(cert.epsilon_upper)},
                        {"spr_lower", io::number(cert.spr_lower)},
                        {"method", cert.method}});
      }
      if (!out_path.empty()) {
        io::write_file(out_path, csv.str());
        run.outputs.push_back(file_digest(out_path));
      }
      const json report = finish_report(run, sweep_cmd, {{"rows", rows}, {"csv", csv.str()}});
      out << report.dump(2) << "\n";
      return ok;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return numerical;
  }
  return usage;
}

}  // namespace spr::cli
