#include "app.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cvqkd/cvqkd.hpp"
#include "io.hpp"

namespace cvqkd::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
    double sigma2 = 2.0;
    double beta = 2.0;
    double phi = 0.0;
    double eta = 1.0;
    int order = 64;
    double tail_mass = 1e-10;
    std::uint64_t seed = 20180433;
    std::string out_dir = ".";
    std::string sweep_text;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--sigma2", opt.sigma2, "Modulation variance per quadrature");
    cmd->add_option("--beta", opt.beta, "Local-oscillator amplitude");
    cmd->add_option("--phi", opt.phi, "Local-oscillator phase (radians)");
    cmd->add_option("--eta", opt.eta, "Channel transmissivity in [0,1]");
    cmd->add_option("--order", opt.order, "Quadrature order per dimension")
        ->check(CLI::Range(8, 256));
    cmd->add_option("--tail-mass", opt.tail_mass, "Truncation tail mass");
    cmd->add_option("--seed", opt.seed, "Random seed (sampling commands)");
    cmd->add_option("--out", opt.out_dir, "Output directory");
    cmd->add_option("--sweep", opt.sweep_text, "Sweep VAR:START:STOP:POINTS");
}

TruncationPolicy policy_from(const CommonOptions& opt) {
    TruncationPolicy policy;
    policy.tail_mass = opt.tail_mass;
    policy.validate();
    return policy;
}

ProtocolParams params_from(const CommonOptions& opt) {
    ProtocolParams p;
    p.sigma2 = opt.sigma2;
    p.beta = opt.beta;
    p.phi = opt.phi;
    p.eta = opt.eta;
    p.validate();
    return p;
}

std::string join_args(int argc, char** argv) {
    std::string cmd;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) cmd += ' ';
        cmd += argv[i];
    }
    return cmd;
}

nlohmann::json common_parameters(const CommonOptions& opt) {
    nlohmann::json j;
    j["sigma2"] = opt.sigma2;
    j["beta"] = opt.beta;
    j["phi"] = opt.phi;
    j["eta"] = opt.eta;
    j["order"] = opt.order;
    j["tail_mass"] = opt.tail_mass;
    j["max_cutoff"] = TruncationPolicy{}.max_cutoff;
    j["seed"] = opt.seed;
    if (!opt.sweep_text.empty()) j["sweep"] = opt.sweep_text;
    return j;
}

fs::path prepare_out_dir(const CommonOptions& opt) {
    fs::path dir(opt.out_dir);
    if (!dir.empty()) fs::create_directories(dir);
    return dir;
}

std::vector<double> sweep_or_point(const CommonOptions& opt,
                                   const std::string& default_sweep,
                                   std::string& variable) {
    if (!opt.sweep_text.empty()) {
        const SweepSpec spec = parse_sweep(opt.sweep_text);
        variable = spec.variable;
        return spec.values();
    }
    if (!default_sweep.empty()) {
        const SweepSpec spec = parse_sweep(default_sweep);
        variable = spec.variable;
        return spec.values();
    }
    variable.clear();
    return {};
}

ProtocolParams with_variable(ProtocolParams base, const std::string& variable,
                             double value) {
    if (variable == "eta") base.eta = value;
    if (variable == "beta") base.beta = value;
    if (variable == "sigma2") base.sigma2 = value;
    return base;
}

// ---------------------------------------------------------------- mi ----

struct MiOptions {
    CommonOptions common;
    std::string scheme = "hd";
};

int cmd_mi(const MiOptions& opt, const std::string& command_line) {
    const TruncationPolicy policy = policy_from(opt.common);
    const fs::path dir = prepare_out_dir(opt.common);

    std::string variable;
    std::vector<double> values = sweep_or_point(opt.common, "", variable);

    RunManifest manifest;
    manifest.command = command_line;
    manifest.parameters = common_parameters(opt.common);
    manifest.parameters["scheme"] = opt.scheme;

    CsvWriter csv(dir / "mi.csv",
                  {"scheme", "sigma2", "beta", "phi", "eta", "order", "mi_bits"});

    auto emit = [&](const ProtocolParams& p) {
        double mi = 0.0;
        if (opt.scheme == "hd") {
            mi = hd_mutual_info_ab(p.sigma2, p.eta);
        } else {
            const QuadratureGrid grid = build_grid(p.sigma2, opt.common.order);
            const CountSupport support = count_support(p, policy, grid);
            if (support.saturated) {
                manifest.warnings.push_back("count support saturated max_cutoff");
            }
            mi = pnr_mutual_info(p, grid, support);
        }
        csv.add_row({opt.scheme, format_double(p.sigma2), format_double(p.beta),
                     format_double(p.phi), format_double(p.eta),
                     std::to_string(opt.common.order), format_double(mi)});
    };

    const ProtocolParams base = params_from(opt.common);
    if (values.empty()) {
        emit(base);
    } else {
        for (double v : values) emit(with_variable(base, variable, v));
    }

    manifest.outputs.push_back((dir / "mi.csv").string());
    csv.write();
    manifest.write(dir / "mi.manifest.json");
    return 0;
}

// --------------------------------------------------------- threshold ----

struct ThresholdOptions {
    CommonOptions common;
    double tol = 1e-3;
};

int cmd_threshold(const ThresholdOptions& opt, const std::string& command_line) {
    const TruncationPolicy policy = policy_from(opt.common);
    const fs::path dir = prepare_out_dir(opt.common);

    std::string variable;
    std::vector<double> values =
        sweep_or_point(opt.common, "sigma2:1:3:9", variable);
    if (variable != "sigma2") {
        throw CLI::ValidationError("threshold", "threshold sweeps sigma2 only");
    }

    RunManifest manifest;
    manifest.command = command_line;
    manifest.parameters = common_parameters(opt.common);
    manifest.parameters["tol"] = opt.tol;

    CsvWriter csv(dir / "threshold.csv", {"sigma2", "beta_th", "tol"});
    for (double s2 : values) {
        std::string cell;
        try {
            cell = format_double(beta_threshold(s2, opt.tol, opt.common.order, policy));
        } catch (const std::runtime_error& e) {
            manifest.warnings.push_back("sigma2=" + format_double(s2) + ": " + e.what());
        }
        csv.add_row({format_double(s2), cell, format_double(opt.tol)});
    }

    manifest.outputs.push_back((dir / "threshold.csv").string());
    csv.write();
    manifest.write(dir / "threshold.manifest.json");
    return 0;
}

// --------------------------------------------------------------- kgr ----

struct KgrOptions {
    CommonOptions common;
    std::string scheme = "hd";
    std::string attack = "individual";
    std::string direction = "dr";
};

RateQuery query_from(const KgrOptions& opt, const ProtocolParams& params) {
    RateQuery q;
    q.scheme = opt.scheme == "hd" ? Scheme::HD : Scheme::PNR;
    q.attack = opt.attack == "individual" ? Attack::Individual : Attack::Collective;
    q.direction = opt.direction == "dr" ? Direction::Direct : Direction::Reverse;
    q.params = params;
    q.numerics.grid_order = opt.common.order;
    q.numerics.policy.tail_mass = opt.common.tail_mass;
    return q;
}

void add_kgr_row(CsvWriter& csv, const KgrOptions& opt, const ProtocolParams& p,
                 const KgrPoint& point) {
    csv.add_row({opt.scheme, opt.attack, opt.direction, format_double(p.sigma2),
                 format_double(p.beta), format_double(p.eta),
                 format_double(point.delta_i), format_double(point.info_first),
                 format_double(point.info_second),
                 format_double(point.second_error_bound)});
}

int cmd_kgr(const KgrOptions& opt, const std::string& command_line) {
    const fs::path dir = prepare_out_dir(opt.common);

    std::string variable;
    std::vector<double> values =
        sweep_or_point(opt.common, "eta:0.05:1.0:20", variable);

    RunManifest manifest;
    manifest.command = command_line;
    manifest.parameters = common_parameters(opt.common);
    manifest.parameters["scheme"] = opt.scheme;
    manifest.parameters["attack"] = opt.attack;
    manifest.parameters["direction"] = opt.direction;

    CsvWriter csv(dir / "kgr.csv",
                  {"scheme", "attack", "direction", "sigma2", "beta", "eta",
                   "delta_i_bits", "info_first", "info_second", "trunc_warning"});

    const ProtocolParams base = params_from(opt.common);
    for (double v : values) {
        const ProtocolParams p = with_variable(base, variable, v);
        const KgrPoint point = kgr_point(query_from(opt, p));
        if (point.truncation_saturated) {
            manifest.warnings.push_back(variable + "=" + format_double(v) +
                                        ": truncation saturated max_cutoff");
        }
        add_kgr_row(csv, opt, p, point);
    }

    manifest.outputs.push_back((dir / "kgr.csv").string());
    csv.write();
    manifest.write(dir / "kgr.manifest.json");
    return 0;
}

// ------------------------------------------------------------ figure ----

struct FigureOptions {
    CommonOptions common;
    int id = 2;
};

int cmd_figure(const FigureOptions& opt, const std::string& command_line) {
    const TruncationPolicy policy = policy_from(opt.common);
    const fs::path dir = prepare_out_dir(opt.common);

    RunManifest manifest;
    manifest.command = command_line;
    manifest.parameters = common_parameters(opt.common);
    manifest.parameters["figure"] = opt.id;

    auto write_curve = [&](const std::string& name, CsvWriter& csv) {
        csv.write();
        manifest.outputs.push_back((dir / name).string());
    };

    if (opt.id == 2) {
        // Lossless mutual information against the LO amplitude, photon
        // counting vs homodyne, for three modulation variances.
        const SweepSpec betas{"beta", 0.25, 4.0, 16};
        for (int s = 1; s <= 3; ++s) {
            const double sigma2 = s;
            const QuadratureGrid grid = build_grid(sigma2, opt.common.order);
            const std::string pnr_name = "figure2_pnr_sigma2_" + std::to_string(s) + ".csv";
            const std::string hd_name = "figure2_hd_sigma2_" + std::to_string(s) + ".csv";
            CsvWriter pnr_csv(dir / pnr_name, {"scheme", "sigma2", "beta", "phi",
                                               "eta", "order", "mi_bits"});
            CsvWriter hd_csv(dir / hd_name, {"scheme", "sigma2", "beta", "phi",
                                             "eta", "order", "mi_bits"});
            const double hd = hd_mutual_info_ab(sigma2, 1.0);
            for (double beta : betas.values()) {
                ProtocolParams p;
                p.sigma2 = sigma2;
                p.beta = beta;
                p.eta = 1.0;
                const CountSupport support = count_support(p, policy, grid);
                if (support.saturated) {
                    manifest.warnings.push_back("beta=" + format_double(beta) +
                                                ": count support saturated");
                }
                const double mi = pnr_mutual_info(p, grid, support);
                pnr_csv.add_row({"pnr", format_double(sigma2), format_double(beta),
                                 "0", "1", std::to_string(opt.common.order),
                                 format_double(mi)});
                hd_csv.add_row({"hd", format_double(sigma2), format_double(beta), "0",
                                "1", std::to_string(opt.common.order),
                                format_double(hd)});
            }
            write_curve(pnr_name, pnr_csv);
            write_curve(hd_name, hd_csv);
        }
    } else if (opt.id == 3) {
        const std::string name = "figure3_beta_threshold.csv";
        CsvWriter csv(dir / name, {"sigma2", "beta_th", "tol"});
        const SweepSpec sigmas{"sigma2", 1.0, 3.0, 9};
        const double tol = 1e-3;
        for (double s2 : sigmas.values()) {
            std::string cell;
            try {
                cell = format_double(beta_threshold(s2, tol, opt.common.order, policy));
            } catch (const std::runtime_error& e) {
                manifest.warnings.push_back("sigma2=" + format_double(s2) + ": " +
                                            e.what());
            }
            csv.add_row({format_double(s2), cell, format_double(tol)});
        }
        write_curve(name, csv);
    } else if (opt.id == 4 || opt.id == 5) {
        // Key rates against transmissivity at the headline parameter point:
        // four curves (scheme x reconciliation direction).
        const Attack attack = opt.id == 4 ? Attack::Individual : Attack::Collective;
        const std::string attack_name = to_string(attack);
        const SweepSpec etas{"eta", 0.05, 1.0, 20};
        for (Scheme scheme : {Scheme::HD, Scheme::PNR}) {
            for (Direction direction : {Direction::Direct, Direction::Reverse}) {
                const std::string name = "figure" + std::to_string(opt.id) + "_" +
                                         to_string(scheme) + "_" +
                                         to_string(direction) + ".csv";
                CsvWriter csv(dir / name,
                              {"scheme", "attack", "direction", "sigma2", "beta",
                               "eta", "delta_i_bits", "info_first", "info_second",
                               "trunc_warning"});
                for (double eta : etas.values()) {
                    RateQuery q;
                    q.scheme = scheme;
                    q.attack = attack;
                    q.direction = direction;
                    q.params.sigma2 = opt.common.sigma2;
                    q.params.beta = opt.common.beta;
                    q.params.phi = opt.common.phi;
                    q.params.eta = eta;
                    q.numerics.grid_order = opt.common.order;
                    q.numerics.policy.tail_mass = opt.common.tail_mass;
                    const KgrPoint point = kgr_point(q);
                    if (point.truncation_saturated) {
                        manifest.warnings.push_back(
                            name + " eta=" + format_double(eta) + ": truncation saturated");
                    }
                    csv.add_row({to_string(scheme), attack_name, to_string(direction),
                                 format_double(q.params.sigma2),
                                 format_double(q.params.beta), format_double(eta),
                                 format_double(point.delta_i),
                                 format_double(point.info_first),
                                 format_double(point.info_second),
                                 format_double(point.second_error_bound)});
                }
                write_curve(name, csv);
            }
        }
    } else {
        throw CLI::ValidationError("figure", "figure id must be 2, 3, 4 or 5");
    }

    manifest.write(dir / ("figure" + std::to_string(opt.id) + ".manifest.json"));
    return 0;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"Secret key rates for coherent-state CV-QKD with homodyne or "
                 "photon-number-resolving detection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    const std::string command_line = join_args(argc, argv);

    MiOptions mi;
    CLI::App* mi_cmd = app.add_subcommand("mi", "Mutual information between "
                                                "sender and receiver");
    mi_cmd->add_option("--scheme", mi.scheme, "hd or pnr")
        ->required()
        ->check(CLI::IsMember({"hd", "pnr"}));
    add_common_flags(mi_cmd, mi.common);

    ThresholdOptions th;
    CLI::App* th_cmd = app.add_subcommand(
        "threshold", "LO amplitude where photon counting overtakes homodyne");
    th_cmd->add_option("--tol", th.tol, "Bisection tolerance on beta");
    add_common_flags(th_cmd, th.common);

    KgrOptions kgr;
    CLI::App* kgr_cmd = app.add_subcommand("kgr", "Secret key generation rate");
    kgr_cmd->add_option("--scheme", kgr.scheme, "hd or pnr")
        ->required()
        ->check(CLI::IsMember({"hd", "pnr"}));
    kgr_cmd->add_option("--attack", kgr.attack, "individual or collective")
        ->required()
        ->check(CLI::IsMember({"individual", "collective"}));
    kgr_cmd->add_option("--direction", kgr.direction, "dr or rr")
        ->required()
        ->check(CLI::IsMember({"dr", "rr"}));
    add_common_flags(kgr_cmd, kgr.common);

    FigureOptions fig;
    CLI::App* fig_cmd = app.add_subcommand("figure", "Emit a full figure dataset");
    fig_cmd->add_option("id", fig.id, "Figure id (2-5)")->required();
    add_common_flags(fig_cmd, fig.common);

    SelfcheckOptions sc;
    CLI::App* sc_cmd = app.add_subcommand("selfcheck", "Oracle-agreement suite");
    sc_cmd->add_flag("--fast", sc.fast, "Reduce the Monte Carlo sample count");
    sc_cmd->add_option("--tolerance", sc.tolerance,
                       "Entropy-agreement tolerance in bits");
    sc_cmd->add_option("--seed", sc.seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (mi_cmd->parsed()) return cmd_mi(mi, command_line);
        if (th_cmd->parsed()) return cmd_threshold(th, command_line);
        if (kgr_cmd->parsed()) return cmd_kgr(kgr, command_line);
        if (fig_cmd->parsed()) return cmd_figure(fig, command_line);
        if (sc_cmd->parsed()) return run_selfcheck(sc);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

} // namespace cvqkd::cli
