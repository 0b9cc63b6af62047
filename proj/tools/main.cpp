// Command-line front end. Subcommands: analyze-system | gowers | average |
// fourier | decompose | verify. Results go to stdout as JSON; logs and
// warnings go to stderr. Exit codes: 0 success, 1 failed verification
// assertions, 2 validation error, 3 budget error.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "hofa/analytic.hpp"
#include "hofa/codec.hpp"
#include "hofa/errors.hpp"
#include "hofa/experiments.hpp"
#include "hofa/factors.hpp"
#include "hofa/linear_system.hpp"

namespace {

using hofa::json;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

json value_json(hofa::cplx z) {
  if (std::abs(z.imag()) <= 1e-12) return json(z.real());
  return json{{"re", z.real()}, {"im", z.imag()}};
}

void warn_if_unbounded(const hofa::DenseFunction& f, const std::string& label) {
  if (!f.bounded()) {
    std::cerr << "warning: " << label << " has sup norm " << f.sup_norm()
              << " > 1; disk-hypothesis bounds may not apply\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"exact higher-order Fourier analysis on F_p^n"};
  app.require_subcommand(1);

  // analyze-system
  auto* analyze_cmd = app.add_subcommand("analyze-system", "complexities of a form system");
  std::string analyze_file;
  analyze_cmd->add_option("--file", analyze_file, "system JSON file")->required();

  // gowers
  auto* gowers_cmd = app.add_subcommand("gowers", "Gowers uniformity norm");
  std::uint32_t gowers_k = 2;
  std::string gowers_fn;
  std::string gowers_method = "auto";
  std::uint64_t max_points = hofa::kDefaultPointBudget;
  gowers_cmd->add_option("--k", gowers_k, "norm order")->required();
  gowers_cmd->add_option("--fn", gowers_fn, "function JSON file")->required();
  gowers_cmd->add_option("--method", gowers_method, "auto|direct|recursive");
  gowers_cmd->add_option("--max-points", max_points, "direct-path evaluation budget");

  // average
  auto* avg_cmd = app.add_subcommand("average", "linear-form average");
  std::string avg_system;
  std::vector<std::string> avg_fns;
  std::string avg_method = "naive";
  avg_cmd->add_option("--system", avg_system, "system JSON file")->required();
  avg_cmd->add_option("--fn", avg_fns, "function JSON file(s), one per form or a single one")
      ->required();
  avg_cmd->add_option("--method", avg_method, "naive|fourier (fourier needs a single function)");

  // fourier
  auto* fourier_cmd = app.add_subcommand("fourier", "Fourier transform of a function");
  std::string fourier_fn;
  std::string fourier_method = "direct";
  bool fourier_inverse = false;
  fourier_cmd->add_option("--fn", fourier_fn, "function JSON file")->required();
  fourier_cmd->add_option("--method", fourier_method, "direct|radix");
  fourier_cmd->add_flag("--inverse", fourier_inverse, "treat input as a spectrum");

  // decompose
  auto* dec_cmd = app.add_subcommand("decompose", "structured + uniform decomposition");
  std::string dec_fn;
  hofa::DecomposeConfig dec_cfg;
  std::string growth_text;
  bool regularize = false;
  dec_cmd->add_option("--fn", dec_fn, "function JSON file")->required();
  dec_cmd->add_option("--d", dec_cfg.d, "factor degree bound")->required();
  dec_cmd->add_option("--epsilon", dec_cfg.epsilon, "residual norm target")->required();
  dec_cmd->add_option("--delta", dec_cfg.delta, "correlation threshold (default epsilon/2)");
  dec_cmd->add_option("--max-steps", dec_cfg.max_steps, "step cap (default ceil(1/delta^2)+1)");
  dec_cmd->add_option("--growth", growth_text, "growth function, e.g. \"r(C)=C+1\"");
  dec_cmd->add_flag("--regularize", regularize, "refine the factor to certified high rank");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run verification experiments");
  std::string suite = "all";
  std::string out_path;
  verify_cmd->add_option("--suite", suite,
                         "all|strong_independence|avg_approx|invariance|pipeline6");
  verify_cmd->add_option("--out", out_path, "also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  Stopwatch timer;
  if (*analyze_cmd) {
    const hofa::LinearSystem system = hofa::system_from_json(hofa::load_json_file(analyze_file));
    json out = hofa::complexity_report_to_json(hofa::analyze(system));
    out["runtime_ms"] = timer.ms();
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (*gowers_cmd) {
    const hofa::DenseFunction f = hofa::function_from_json(hofa::load_json_file(gowers_fn));
    warn_if_unbounded(f, "function");
    hofa::GowersMethod method = hofa::GowersMethod::automatic;
    if (gowers_method == "direct") {
      method = hofa::GowersMethod::direct;
    } else if (gowers_method == "recursive") {
      method = hofa::GowersMethod::recursive;
    } else if (gowers_method != "auto") {
      throw hofa::ValidationError("unknown gowers method");
    }
    const double value = hofa::gowers_norm(f, gowers_k, method, max_points);
    std::cout << json{{"value", value}, {"method", gowers_method}, {"runtime_ms", timer.ms()}}
                     .dump(2)
              << "\n";
    return 0;
  }

  if (*avg_cmd) {
    const hofa::LinearSystem system = hofa::system_from_json(hofa::load_json_file(avg_system));
    std::vector<hofa::DenseFunction> fs;
    for (const auto& path : avg_fns) {
      fs.push_back(hofa::function_from_json(hofa::load_json_file(path)));
      warn_if_unbounded(fs.back(), path);
    }
    hofa::cplx value;
    if (avg_method == "fourier") {
      if (fs.size() != 1) {
        throw hofa::ValidationError("the Fourier route averages a single function");
      }
      value = hofa::t_average_fourier(system, fs[0]);
    } else if (avg_method == "naive") {
      value = fs.size() == 1 ? hofa::t_average_naive(system, fs[0])
                             : hofa::t_average_naive(system, fs);
    } else {
      throw hofa::ValidationError("unknown average method");
    }
    std::cout << json{{"value", value_json(value)},
                      {"method", avg_method},
                      {"runtime_ms", timer.ms()}}
                     .dump(2)
              << "\n";
    return 0;
  }

  if (*fourier_cmd) {
    const hofa::FourierMethod method = fourier_method == "radix" ? hofa::FourierMethod::radix
                                                                 : hofa::FourierMethod::direct;
    const json input = hofa::load_json_file(fourier_fn);
    json out;
    if (fourier_inverse) {
      const hofa::DenseFunction spec_fn = hofa::function_from_json(input);
      hofa::Spectrum spec(spec_fn.p(), spec_fn.n(), spec_fn.values());
      out = hofa::function_to_json(hofa::inverse_fourier(spec, method));
    } else {
      out = hofa::spectrum_to_json(hofa::fourier(hofa::function_from_json(input), method));
    }
    out["method"] = fourier_method;
    out["runtime_ms"] = timer.ms();
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (*dec_cmd) {
    const hofa::DenseFunction f = hofa::function_from_json(hofa::load_json_file(dec_fn));
    warn_if_unbounded(f, "function");
    if (!growth_text.empty()) dec_cfg.growth = hofa::GrowthSpec::parse(growth_text);
    dec_cfg.regularize = regularize;
    const hofa::DecomposeResult result = hofa::decompose(f, dec_cfg);
    json out = hofa::decompose_result_to_json(result);
    out["runtime_ms"] = timer.ms();
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (*verify_cmd) {
    const auto reports = hofa::run_suite(suite);
    const json out = hofa::suite_to_json(reports);
    std::cerr << hofa::suite_table(reports);
    std::cout << out.dump(2) << "\n";
    if (!out_path.empty()) hofa::save_json_file(out_path, out);
    return out["all_passed"].get<bool>() ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hofa::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const hofa::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
