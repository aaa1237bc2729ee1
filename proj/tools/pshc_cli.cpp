#include "pshc/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int emit(const pshc::Json& doc, const std::optional<std::string>& path) {
  const std::string text = pshc::serialize(doc);
  if (!path) {
    std::cout << text;
    return std::cout ? kExitOk : kExitIo;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open " << *path << " for writing\n";
    return kExitIo;
  }
  f << text;
  f.close();
  if (!f) {
    std::cerr << "error: write to " << *path << " failed\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-Hermitian curvature toolkit"};
  app.require_subcommand(1);

  pshc::RunConfig cfg;
  std::vector<std::string> families;
  std::vector<std::string> params;
  std::string out;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--family", families, "Model family (su_pq, sp_p_R, so_p_2, so_star_2p, heisenberg)");
    sub->add_option("--params", params, "Comma-separated parameters, one list per --family");
    sub->add_option("--seed", cfg.seeds, "Random seed (repeatable)");
    sub->add_option("--samples", cfg.samples, "Curvature samples per model")->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "Residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "Output file (default: stdout)");
  };

  CLI::App* table = app.add_subcommand("table", "Constants table for the symmetric models");
  CLI::App* model = app.add_subcommand("model", "Invariant report for one or more models");
  CLI::App* verify = app.add_subcommand("verify", "Run the verification suites");
  for (CLI::App* sub : {table, model, verify}) add_common(sub);
  verify->add_option("--trials", cfg.trials, "Random trials per identity")->check(CLI::PositiveNumber);
  verify->add_flag("--negative-control", cfg.negative_control,
                   "Feed every identity inputs that violate its hypotheses");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (!out.empty()) cfg.output_path = out;
  try {
    if (families.size() != params.size())
      throw std::invalid_argument("each --family needs a matching --params");
    for (std::size_t i = 0; i < families.size(); ++i)
      cfg.models.push_back({families[i], pshc::parse_params(params[i])});
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*table) {
      cfg.command = "table";
      return emit(pshc::cmd_table(cfg), cfg.output_path);
    }
    if (*model) {
      cfg.command = "model";
      return emit(pshc::cmd_model(cfg), cfg.output_path);
    }
    cfg.command = "verify";
    pshc::VerifyOutcome v = pshc::cmd_verify(cfg);
    int rc = emit(v.doc, cfg.output_path);
    if (rc != kExitOk) return rc;
    return v.pass ? kExitOk : kExitVerifyFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
}
