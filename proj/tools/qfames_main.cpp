#include "qfames/experiment.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

namespace {

qfames::ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return qfames::parse_experiment_config(nlohmann::json::parse(in));
}

std::vector<double> parse_t_list(const std::string& arg) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < arg.size()) {
        std::size_t next = arg.find(',', pos);
        if (next == std::string::npos) next = arg.size();
        out.push_back(std::stod(arg.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "qfames: spectral filtering, eigenvalue-cluster location, multiplicity counting\n"
        "and projected-observable estimation from generalized-Hadamard-test data.\n"
        "Energies are reported in normalized units together with norm_scale; worker\n"
        "count honors QFAMES_WORKERS."};
    app.require_subcommand(1);

    std::string config_path, t_list, preset_name, out_dir;
    double h = 0.01, dt = 0.01;

    auto* run = app.add_subcommand("run", "Run the full pipeline from a JSON config; writes "
                                          "dods.json, landscape.csv (theta,frobenius_norm), "
                                          "singular_values.csv (theta_star,rank_index,"
                                          "singular_value,above_threshold), observable.json "
                                          "and manifest.json into output_dir.");
    run->add_option("config", config_path, "experiment config JSON")->required();

    auto* sweep = app.add_subcommand("sweep-T", "Error vs filter width for qfames and the "
                                                "single-state qmegs baseline; writes sweep.csv "
                                                "with columns seed,method,T,T_max,T_total,error "
                                                "(T_max = sigma*T, T_total = L*R*N*sigma*T).");
    sweep->add_option("config", config_path, "experiment config JSON")->required();
    sweep->add_option("--T", t_list, "comma separated filter widths, e.g. 40,80,160")->required();

    auto* anc = app.add_subcommand("ancilla-check", "Ancilla-free reconstruction errors per "
                                                    "(l,r) pair and convergence ratios under "
                                                    "(h,dt) halving; writes "
                                                    "reconstruction_report.json.");
    anc->add_option("config", config_path, "experiment config JSON")->required();
    anc->add_option("--h", h, "imaginary displacement step")->capture_default_str();
    anc->add_option("--dt", dt, "integration grid step")->capture_default_str();

    auto* preset = app.add_subcommand("preset", "Emit (or run, with --out) a canned experiment "
                                                "config: illustrative | tfim | toric-torus-2x4 | "
                                                "toric-cyl-2x4.");
    preset->add_option("name", preset_name, "preset name")->required();
    preset->add_option("--out", out_dir, "run the preset and write results to this directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return qfames::cmd_run(load_config(config_path), std::cout);
        }
        if (sweep->parsed()) {
            return qfames::cmd_sweep_t(load_config(config_path), parse_t_list(t_list), std::cout);
        }
        if (anc->parsed()) {
            return qfames::cmd_ancilla_check(load_config(config_path), h, dt, std::cout);
        }
        if (preset->parsed()) {
            qfames::ExperimentConfig config = qfames::preset_config(preset_name);
            if (out_dir.empty()) {
                std::cout << qfames::experiment_config_to_json(config).dump(2) << '\n';
                return 0;
            }
            config.output_dir = out_dir;
            return qfames::cmd_run(config, std::cout);
        }
    } catch (const std::invalid_argument& err) {
        std::cerr << "validation error: " << err.what() << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "numerical failure: " << err.what() << '\n';
        return 2;
    }
    return 0;
}
