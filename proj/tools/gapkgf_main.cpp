// gapkgf command-line front end.
//
//   gapkgf compute <config> [-o DIR] [--verify]
//   gapkgf verify <config>
//   gapkgf tables check <path>
//
// Exit codes: 0 success, 2 config/validation error, 3 verification failure,
// 4 I/O error. GAPKGF_THREADS sets the worker count.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "gapkgf/cli/config.hpp"
#include "gapkgf/cli/run.hpp"
#include "gapkgf/cli/verify.hpp"
#include "gapkgf/materials.hpp"
#include "gapkgf/occupation.hpp"
#include "gapkgf/table_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kVerifyFailed = 3;
constexpr int kIoError = 4;

int exit_code_for(gapkgf::ErrorCode code) {
  switch (code) {
    case gapkgf::ErrorCode::IoError: return kIoError;
    default: return kConfigError;
  }
}

unsigned thread_count() {
  const char* env = std::getenv("GAPKGF_THREADS");
  if (!env || !*env) return std::max(1u, std::thread::hardware_concurrency());
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024)
    throw gapkgf::Error(gapkgf::ErrorCode::ConfigError, std::string("GAPKGF_THREADS: expected 1..1024, got '") + env + "'");
  return static_cast<unsigned>(n);
}

int compute(const std::string& config, const std::string& out_dir, bool verify) {
  const auto cfg = gapkgf::cli::parse_config(config);
  const auto report = gapkgf::cli::run(cfg, out_dir, {thread_count(), verify});
  std::cout << "digest " << report.digest << "\n";
  if (cfg.outputs.map) std::cout << "map: " << report.map_records << " records\n";
  if (cfg.outputs.spectrum || cfg.outputs.plot) std::cout << "spectrum: " << report.spectrum_points << " frequencies\n";
  const std::size_t failures = report.point_errors.size() + report.spectrum_errors.size();
  if (failures > 0) std::cerr << "warning: " << failures << " points failed; see " << out_dir << "/report.json\n";
  std::cout << "wrote";
  for (const auto& f : report.files) std::cout << " " << f;
  std::cout << " to " << out_dir << "\n";
  if (report.verification) {
    gapkgf::cli::print_report(std::cout, *report.verification);
    if (!report.verification->passed()) return kVerifyFailed;
  }
  return kOk;
}

int verify(const std::string& config) {
  const auto cfg = gapkgf::cli::parse_config(config);
  const auto report = gapkgf::cli::verify(cfg);
  gapkgf::cli::print_report(std::cout, report);
  if (report.passed()) return kOk;
  for (const auto& c : report.checks)
    if (c.status == gapkgf::cli::CheckStatus::Fail) std::cerr << "failed check: " << c.name << "\n";
  return kVerifyFailed;
}

int tables_check(const std::string& path) {
  std::size_t columns = 0;
  {
    auto in = gapkgf::detail::open_input(path);
    columns = gapkgf::detail::sniff_columns(in);
  }
  if (columns == 3) {
    const auto model = gapkgf::load_permittivity_table(path);
    gapkgf::validate_model(model);
    const auto& t = std::get<gapkgf::material::Table>(model);
    std::cout << path << ": permittivity table, " << t.omega.size() << " samples, omega in [" << t.omega.front()
              << ", " << t.omega.back() << "]\n";
  } else if (columns == 4) {
    const auto t = gapkgf::load_occupation_table(path);
    std::cout << path << ": occupation table, " << t.omega().size() << " x " << t.q().size() << " grid, omega in ["
              << t.omega().front() << ", " << t.omega().back() << "], q in [" << t.q().front() << ", " << t.q().back()
              << "]\n";
  } else {
    throw gapkgf::Error(gapkgf::ErrorCode::ParseError,
                        path + ": expected 3 columns (omega,re_eps,im_eps) or 4 (omega,q,n_s,n_p), found " +
                            std::to_string(columns));
  }
  std::cout << "ok\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keldysh Green functions of photons between planar interfaces"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = "out";
  bool with_verify = false;
  auto* compute_cmd = app.add_subcommand("compute", "evaluate the configured outputs");
  compute_cmd->add_option("config", config, "scenario config file")->required();
  compute_cmd->add_option("-o,--output", out_dir, "output directory")->capture_default_str();
  compute_cmd->add_flag("--verify", with_verify, "also run the verification suite");

  auto* verify_cmd = app.add_subcommand("verify", "run the invariant checks on a scenario");
  verify_cmd->add_option("config", config, "scenario config file")->required();

  std::string table;
  auto* tables_cmd = app.add_subcommand("tables", "data table utilities");
  tables_cmd->require_subcommand(1);
  auto* check_cmd = tables_cmd->add_subcommand("check", "parse and validate a permittivity or occupation table");
  check_cmd->add_option("path", table, "table file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*compute_cmd) return compute(config, out_dir, with_verify);
    if (*verify_cmd) return verify(config);
    if (*check_cmd) return tables_check(table);
  } catch (const gapkgf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kConfigError;
}
