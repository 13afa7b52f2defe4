#include "kdeform/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

void add_model_options(CLI::App& app, kdeform::RunConfig& cfg, std::string& warping) {
  app.add_option("--model", cfg.model.kind, "flat_ball | cone_round_sphere | warped_generic")
      ->check(CLI::IsMember(kdeform::model_names()));
  app.add_option("-n,--n", cfg.model.n, "complex dimension (cone: m)");
  app.add_option("-c,--c", cfg.model.c, "deformation constant");
  app.add_option("--warping", warping, "warped_generic f: affine:a,b or quadratic:a,b,c");
  app.add_option("--sphere-dim", cfg.model.sphere_dim, "warped_generic sphere dimension");
  app.add_option("--t-min", cfg.model.t_min, "warped_generic lower t");
  app.add_option("--t-max", cfg.model.t_max, "warped_generic upper t");
  app.add_flag("--cone-J", cfg.model.cone_complex_structure,
               "attach the flat cone complex structure to warped_generic");
  app.add_option("--samples", cfg.n_samples, "sample points per check");
  app.add_option("--seed", cfg.seed, "64-bit run seed");
  app.add_option("-o,--output", cfg.output_path, "output file (default stdout)");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify the closed-conformal deformation of Kaehler metrics numerically"};
  app.require_subcommand(1);

  kdeform::RunConfig cfg;
  std::string warping = "affine:1,0";
  std::string checks;
  double tol_first = 0.0, tol_second = 0.0;
  int directions = 2;
  std::vector<double> radii{0.0, 0.5, 0.9, 0.99};

  auto* run = app.add_subcommand("run", "run the verification suite and write a report");
  add_model_options(*run, cfg, warping);
  run->add_option("--checks", checks, "comma-separated check ids (default all)");
  run->add_option("--tol-first", tol_first, "override tolerance of first-order checks");
  run->add_option("--tol-second", tol_second, "override tolerance of second-order checks");

  app.add_subcommand("list-checks", "print every check with its identity");

  auto* decay = app.add_subcommand("decay-table", "CSV of K, K~ and the decay bounds");
  add_model_options(*decay, cfg, warping);
  decay->add_option("--directions", directions, "directions per sample point");

  auto* growth = app.add_subcommand("length-growth", "CSV of radial g~-lengths in the ball");
  add_model_options(*growth, cfg, warping);
  growth->add_option("--radii", radii, "radii to tabulate")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.model.warping = kdeform::WarpingFunction::parse(warping);
    if (app.got_subcommand("list-checks")) {
      emit("", kdeform::render_check_list());
      return 0;
    }
    if (run->parsed()) {
      cfg.checks = split(checks);
      if (run->count("--tol-first")) cfg.first_order_tolerance = tol_first;
      if (run->count("--tol-second")) cfg.second_order_tolerance = tol_second;
      const kdeform::VerificationReport report = kdeform::run_suite(cfg);
      emit(cfg.output_path, kdeform::render_report(report));
      return report.all_pass() ? 0 : 1;
    }
    if (decay->parsed()) {
      emit(cfg.output_path, kdeform::decay_table_csv(cfg, directions));
      return 0;
    }
    if (growth->parsed()) {
      emit(cfg.output_path, kdeform::length_growth_csv(cfg, radii));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
