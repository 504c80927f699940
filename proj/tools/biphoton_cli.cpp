// Command-line front end: scan / map / fit / report / validate.
//
// Exit codes: 0 ok, 2 config error, 3 physics-domain error, 4 analysis error.

#include "biphoton/analysis.hpp"
#include "biphoton/config.hpp"
#include "biphoton/counting.hpp"
#include "biphoton/detection.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/io.hpp"
#include "biphoton/random.hpp"
#include "biphoton/scans.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPhysics = 3;
constexpr int kExitAnalysis = 4;

// Keeps counting draws independent of the dephasing MC stream.
constexpr std::uint64_t kCountStream = 0x636f756e74ull;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    bool svg = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

biphoton::RunConfig load_config(const GlobalOptions& opts) {
    if (opts.config_path.empty()) throw std::runtime_error("--config is required");
    auto config = biphoton::config_from_json_text(read_file(opts.config_path));
    if (opts.seed_override) config.seed = *opts.seed_override;
    return config;
}

void attach_counts(biphoton::ScanResult& result, const biphoton::CountingConfig& counting,
                   double coincidence_window, std::uint64_t seed) {
    const double accidental = biphoton::accidental_rate(
        counting.singles1_cps, counting.singles2_cps, coincidence_window);
    for (std::size_t i = 0; i < result.samples.size(); ++i) {
        auto& sample = result.samples[i];
        const auto record = biphoton::sample_counts(
            counting.peak_rate_cps * sample.ideal_rate, accidental,
            counting.integration_time_s,
            biphoton::derive_seed(seed ^ kCountStream, static_cast<std::uint64_t>(i)));
        sample.counts = static_cast<double>(record.counts);
        sample.error = record.count_error;
    }
}

int cmd_scan(const GlobalOptions& opts) {
    const auto config = load_config(opts);
    if (!config.scan) throw std::runtime_error("scan command requires a 'scan' config block");

    biphoton::ScanResult result;
    if (config.dephasing && config.dephasing->sigma_theta_rad > 0.0) {
        result = biphoton::dephased_scan(*config.scan, config.setup,
                                         config.dephasing->sigma_theta_rad,
                                         config.dephasing->mc_samples, config.seed);
    } else {
        result = biphoton::run_scan(*config.scan, config.setup);
    }
    if (config.counting) {
        attach_counts(result, *config.counting, config.setup.coincidence_window, config.seed);
    }

    const std::string manifest = biphoton::manifest_json_text(config, "scan");
    fs::create_directories(opts.out_dir);
    const fs::path csv_path = fs::path(opts.out_dir) / "scan.csv";
    biphoton::atomic_write_text(csv_path, biphoton::scan_csv_text(result, manifest));
    biphoton::atomic_write_text(fs::path(opts.out_dir) / "scan.json", manifest + "\n");
    if (opts.svg) {
        biphoton::atomic_write_text(fs::path(opts.out_dir) / "scan.svg",
                                    biphoton::scan_svg_text(result, manifest));
    }
    std::cout << "wrote " << csv_path.string() << " (" << result.samples.size()
              << " points, Lambda = " << result.derived.period * 1e6 << " um)\n";
    return kExitOk;
}

int cmd_map(const GlobalOptions& opts) {
    const auto config = load_config(opts);
    if (!config.map) throw std::runtime_error("map command requires a 'map' config block");
    const auto derived = biphoton::derive(config.setup);
    const auto state = biphoton::prepare_from_hwp(config.map->alpha, config.map->theta);

    const int n = config.map->points;
    const double extent = config.map->extent_xi;
    std::vector<double> rates;
    rates.reserve(static_cast<std::size_t>(n) * n);
    double peak = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xi1 = -extent + 2.0 * extent * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double xi2 = -extent + 2.0 * extent * j / (n - 1);
            const double rate = biphoton::rate_narrow(state, xi1 * derived.period,
                                                      xi2 * derived.period, config.setup);
            rates.push_back(rate);
            peak = std::max(peak, rate);
        }
    }
    if (peak <= 0.0) peak = 1.0;

    const std::string manifest = biphoton::manifest_json_text(config, "map");
    std::string csv = "# manifest: " + json::parse(manifest).dump() + "\n";
    csv += "xi1,xi2,rate_norm\n";
    char buf[128];
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const double xi1 = -extent + 2.0 * extent * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double xi2 = -extent + 2.0 * extent * j / (n - 1);
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", xi1, xi2,
                          rates[idx++] / peak);
            csv += buf;
        }
    }
    fs::create_directories(opts.out_dir);
    const fs::path csv_path = fs::path(opts.out_dir) / "map.csv";
    biphoton::atomic_write_text(csv_path, csv);
    biphoton::atomic_write_text(fs::path(opts.out_dir) / "map.json", manifest + "\n");
    std::cout << "wrote " << csv_path.string() << " (" << n << "x" << n << " grid)\n";
    return kExitOk;
}

json model_to_json(const biphoton::FitResult& fit) {
    json obj;
    obj["model"] = {{"baseline", fit.model.baseline},
                    {"amplitude", fit.model.amplitude},
                    {"envelope_sigma", fit.model.envelope_sigma},
                    {"period_s", fit.model.period_s},
                    {"phase0", fit.model.phase0},
                    {"visibility", fit.model.visibility},
                    {"clamped", fit.model.clamped}};
    obj["uncertainties"] = {{"baseline", fit.uncertainties.baseline},
                            {"amplitude", fit.uncertainties.amplitude},
                            {"envelope_sigma", fit.uncertainties.envelope_sigma},
                            {"period_s", fit.uncertainties.period_s},
                            {"phase0", fit.uncertainties.phase0},
                            {"visibility", fit.uncertainties.visibility}};
    obj["residual_norm"] = fit.residual_norm;
    obj["iterations"] = fit.iterations;
    obj["converged"] = fit.converged;
    obj["envelope_only"] = fit.envelope_only;
    obj["lambda_reported"] = fit.lambda_reported;
    obj["lambda_reported_se"] = fit.lambda_reported_se;
    return obj;
}

std::optional<biphoton::OpticalSetup> setup_for_fit(const GlobalOptions& opts,
                                                    const std::optional<std::string>& manifest) {
    if (!opts.config_path.empty()) {
        return biphoton::config_from_json_text(read_file(opts.config_path)).setup;
    }
    if (manifest) {
        return biphoton::config_from_json_text(*manifest).setup;
    }
    return std::nullopt;
}

int cmd_fit(const GlobalOptions& opts, const std::string& csv_path) {
    const auto csv = biphoton::read_scan_csv(csv_path);
    const auto samples = biphoton::fit_samples_from_csv(csv);
    biphoton::FitOptions options;
    options.with_envelope = csv.param_in_meters;
    const auto fit = biphoton::fit_fringe(samples, {}, options);

    json out = model_to_json(fit);
    if (csv.manifest_json) out["manifest"] = json::parse(*csv.manifest_json);

    std::string report_text;
    const auto setup = setup_for_fit(opts, csv.manifest_json);
    if (setup && csv.param_in_meters) {
        const auto rep = biphoton::compare(fit, *setup);
        report_text = rep.text();
        out["comparison"] = {{"lambda_fitted", rep.lambda_fitted},
                             {"lambda_se", rep.lambda_se},
                             {"lambda_theory", rep.lambda_theory},
                             {"lambda_ratio", rep.lambda_ratio},
                             {"envelope_fitted_s", rep.envelope_fitted_s},
                             {"envelope_theory_s", rep.envelope_theory_s},
                             {"envelope_ratio", rep.envelope_ratio},
                             {"visibility", rep.visibility},
                             {"visibility_se", rep.visibility_se},
                             {"classical_bound", rep.classical_bound},
                             {"exceedance_sigmas", rep.exceedance_sigmas}};
    } else {
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "visibility %.4f +- %.4f, period %.6g, converged in %d iterations\n",
                      fit.model.visibility, fit.uncertainties.visibility, fit.model.period_s,
                      fit.iterations);
        report_text = buf;
    }

    fs::create_directories(opts.out_dir);
    const fs::path json_path = fs::path(opts.out_dir) / "fit.json";
    biphoton::atomic_write_text(json_path, out.dump(2) + "\n");
    biphoton::atomic_write_text(fs::path(opts.out_dir) / "fit_report.txt", report_text);
    std::cout << report_text;
    return kExitOk;
}

int cmd_report(const GlobalOptions& opts, const std::string& fit_path) {
    const json obj = json::parse(read_file(fit_path));
    biphoton::FitResult fit;
    const auto& m = obj.at("model");
    fit.model.baseline = m.at("baseline").get<double>();
    fit.model.amplitude = m.at("amplitude").get<double>();
    fit.model.envelope_sigma = m.at("envelope_sigma").get<double>();
    fit.model.period_s = m.at("period_s").get<double>();
    fit.model.phase0 = m.at("phase0").get<double>();
    fit.model.visibility = m.at("visibility").get<double>();
    const auto& u = obj.at("uncertainties");
    fit.uncertainties.visibility = u.at("visibility").get<double>();
    fit.uncertainties.period_s = u.at("period_s").get<double>();
    fit.lambda_reported = obj.at("lambda_reported").get<double>();
    fit.lambda_reported_se = obj.at("lambda_reported_se").get<double>();
    fit.converged = obj.at("converged").get<bool>();
    if (!fit.converged) throw biphoton::NoConvergence("report: stored fit did not converge");

    std::optional<std::string> manifest;
    if (obj.contains("manifest")) manifest = obj.at("manifest").dump();
    const auto setup = setup_for_fit(opts, manifest);
    if (!setup) throw std::runtime_error("report: need --config or an embedded manifest");
    std::cout << biphoton::compare(fit, *setup).text();
    return kExitOk;
}

int cmd_validate(const GlobalOptions& opts) {
    if (opts.config_path.empty()) throw std::runtime_error("--config is required");
    const json obj = json::parse(read_file(opts.config_path));
    if (!obj.is_object() || !obj.contains("setup")) {
        throw std::runtime_error("config requires a 'setup' object");
    }
    const auto setup = biphoton::setup_from_json_text(obj.at("setup").dump(), false);
    const auto violations = biphoton::validate(setup);
    if (violations.empty()) {
        std::cout << "ok\n";
        return kExitOk;
    }
    for (const auto& v : violations) std::cout << "violation: " << v << "\n";
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Far-field two-photon coincidence pattern simulator"};
    app.require_subcommand(1);

    GlobalOptions opts;
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Override the config seed");
    app.add_option("--config", opts.config_path, "JSON configuration file");
    app.add_option("--out", opts.out_dir, "Output directory (default: .)");
    app.add_flag("--svg", opts.svg, "Also emit an SVG line plot");

    auto* scan = app.add_subcommand("scan", "Run a measurement scan, write CSV + manifest");
    auto* map = app.add_subcommand("map", "Evaluate the 2D coincidence map (Fig.-2 style)");
    auto* fit = app.add_subcommand("fit", "Fit the fringe model to a scan CSV");
    auto* report = app.add_subcommand("report", "Render the theory comparison for a fit JSON");
    auto* validate_cmd = app.add_subcommand("validate", "Check the setup invariants");

    std::string fit_csv, fit_json;
    fit->add_option("csv", fit_csv, "Scan CSV to fit")->required();
    report->add_option("fit_json", fit_json, "fit.json produced by the fit command")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    if (*seed_opt) opts.seed_override = seed_value;

    try {
        if (scan->parsed()) return cmd_scan(opts);
        if (map->parsed()) return cmd_map(opts);
        if (fit->parsed()) return cmd_fit(opts, fit_csv);
        if (report->parsed()) return cmd_report(opts, fit_json);
        if (validate_cmd->parsed()) return cmd_validate(opts);
    } catch (const biphoton::NoConvergence& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const biphoton::DegenerateData& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const biphoton::NyquistViolation& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return kExitPhysics;
    } catch (const biphoton::NotNormalized& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return kExitPhysics;
    } catch (const biphoton::InvalidSetup& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
