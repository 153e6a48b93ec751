// multalpha: expected error costs of single- and multi-alpha tests from
// scenario files, cost-optimal alphas, ladder mappings and the standard
// reproductions.
//
// Exit codes: 0 success, 2 input or contract error, 3 numerical failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "multalpha/multalpha.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace multalpha;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ContractError(std::string(what) + ": empty list entry");
        out.push_back(parse_double(item.substr(b, e - b + 1)));
    }
    if (out.empty()) throw ContractError(std::string(what) + ": empty list");
    return out;
}

std::string join(const std::vector<double>& v, const std::string& sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + format_label(v[i]);
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ContractError("cannot write '" + path.string() + "'");
    out << content;
}

// ---------------------------------------------------------------------------
// cost

struct CostArgs {
    std::string scenario;
    std::string format = "text";
};

int run_cost(const CostArgs& args) {
    const auto spec = load_scenario(args.scenario);
    const ResolvedScenario scn(spec);
    const auto b = scn.cost();
    const auto& ladder = scn.ladder();
    if (args.format == "json") {
        json j;
        j["schema_version"] = 1;
        j["omega0"] = b.omega0;
        j["omega1"] = b.omega1;
        j["total"] = b.total;
        j["per_level"] = json::array();
        for (std::size_t m = 0; m < ladder.size(); ++m) {
            j["per_level"].push_back({{"alpha", ladder[m]}, {"cost", b.per_level[m]}});
        }
        j["weights"] = b.weights ? json(*b.weights) : json(nullptr);
        std::cout << j.dump(2) << "\n";
    } else if (args.format == "csv") {
        std::cout << "quantity,alpha,value\n";
        for (std::size_t m = 0; m < ladder.size(); ++m) {
            std::cout << "single," << format_shortest(ladder[m]) << "," << format_shortest(b.per_level[m]) << "\n";
            if (b.weights) {
                std::cout << "weight," << format_shortest(ladder[m]) << "," << format_shortest((*b.weights)[m]) << "\n";
            }
        }
        std::cout << "omega0,," << format_shortest(b.omega0) << "\n";
        std::cout << "omega1,," << format_shortest(b.omega1) << "\n";
        std::cout << "total,," << format_shortest(b.total) << "\n";
    } else {
        if (spec.name) std::cout << *spec.name << "\n";
        std::cout << "alphas: " << join(std::vector<double>(ladder.levels().begin(), ladder.levels().end())) << "\n";
        for (std::size_t m = 0; m < ladder.size(); ++m) {
            std::cout << "  single-level cost at alpha " << format_label(ladder[m]) << ": "
                      << format_fixed(b.per_level[m], 4);
            if (b.weights) std::cout << "  (weight " << format_fixed((*b.weights)[m], 4) << ")";
            std::cout << "\n";
        }
        std::cout << "multi-alpha cost: " << format_fixed(b.total, 4) << "  (type I " << format_fixed(b.omega0, 4)
                  << ", type II " << format_fixed(b.omega1, 4) << ")\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeArgs {
    std::string scenario;
    std::string bounds;
    int resolution = 200;
    std::string trace;
    std::string format = "text";
};

int run_optimize(const OptimizeArgs& args) {
    const ResolvedScenario scn(load_scenario(args.scenario));
    SearchOptions opt;
    opt.resolution = args.resolution;
    if (!args.bounds.empty()) {
        const auto b = parse_list(args.bounds, "--bounds");
        if (b.size() != 2) throw ContractError("--bounds: expected lo,hi");
        opt.bounds = {b[0], b[1]};
    }
    const auto o = scn.optimize(opt);
    if (!args.trace.empty()) {
        std::string csv = "alpha,cost\n";
        for (const auto& p : o.trace) csv += format_shortest(p.alpha) + "," + format_shortest(p.cost) + "\n";
        write_file(args.trace, csv);
    }
    if (args.format == "json") {
        json j{{"schema_version", 1},
               {"alpha_star", o.alpha_star},
               {"alpha_star_rounded", o.rounded()},
               {"cost_star", o.cost_star},
               {"bounds", {opt.bounds.lo, opt.bounds.hi}},
               {"resolution", opt.resolution}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "optimal alpha: " << format_fixed(o.alpha_star, 2) << " (" << format_shortest(o.alpha_star)
                  << ")\n";
        std::cout << "optimal cost: " << format_fixed(o.cost_star, 4) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// ladder

struct LadderArgs {
    std::optional<double> alpha1;
    std::string costs;
    std::string ladder;
    std::optional<double> q1;
};

int run_ladder(const LadderArgs& args) {
    const bool from_costs = args.alpha1 || !args.costs.empty();
    const bool scale = !args.ladder.empty() || args.q1;
    if (from_costs == scale) {
        throw ContractError("ladder: give either --alpha1 with --costs, or --ladder with --q1");
    }
    if (from_costs) {
        if (!args.alpha1 || args.costs.empty()) throw ContractError("ladder: --alpha1 and --costs go together");
        const auto c0 = parse_list(args.costs, "--costs");
        const auto l = ladder_from_costs(*args.alpha1, c0);
        std::cout << join(std::vector<double>(l.levels().begin(), l.levels().end())) << "\n";
    } else {
        if (args.ladder.empty() || !args.q1) throw ContractError("ladder: --ladder and --q1 go together");
        const auto q = population_scale(*args.q1, AlphaLadder(parse_list(args.ladder, "--ladder")));
        std::vector<double> rounded;
        for (double v : q) rounded.push_back(std::round(v));
        std::cout << join(rounded) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// reproduce

struct ReproduceArgs {
    std::string target;
    std::uint64_t seed = 42;
    std::size_t runs = 2000;
    std::string out = ".";
};

void emit_table(const fs::path& dir, const std::string& stem, const CostTable& t) {
    write_file(dir / (stem + ".txt"), render_table(t, TableFormat::Text));
    write_file(dir / (stem + ".csv"), render_table(t, TableFormat::Csv));
}

json provenance(const ReproduceArgs& args, json parameters) {
    return json{{"target", args.target},
                {"engine", "multalpha"},
                {"engine_version", MULTALPHA_VERSION},
                {"seed", args.seed},
                {"runs", args.runs},
                {"parameters", std::move(parameters)}};
}

json drug_params_json(const MolnupiravirParams& p) {
    return {{"cT", p.cT},
            {"cH", p.cH},
            {"r1", p.r1},
            {"per_group_n", p.per_group_n},
            {"incidence", p.incidence},
            {"boundary_M", p.boundary()},
            {"n_variant", p.variant == RiskDiffVariant::TotalN ? "total" : "per_group"}};
}

json anticipated_json(const AnticipatedScenario& s) {
    return {{"boundary_M", s.boundary},         {"anticipated_offset", s.anticipated_offset},
            {"anticipated_sd", s.anticipated_sd}, {"true_sd", s.true_sd},
            {"design_alpha", s.design_alpha},     {"design_power", s.design_power},
            {"max_total_n", s.max_total_n},       {"min_offset", s.min_offset}};
}

void reproduce_table1(const ReproduceArgs& args, const fs::path& dir) {
    const MolnupiravirParams base;
    emit_table(dir, "table1", table1(base, table1_risk_differences(), table1_prevalences(), drug_study_ladder()));

    // Variant comparison: n read per group, and M rounded to three decimals.
    MolnupiravirParams per_group = base;
    per_group.variant = RiskDiffVariant::PerGroupN;
    MolnupiravirParams rounded = base;
    rounded.round_boundary = true;
    std::string report = "Table 1 variants\n\n[default: n = total subjects, M = -cT/cH]\n";
    report += render_table(table1(base, table1_risk_differences(), table1_prevalences(), drug_study_ladder()));
    report += "\n[n = per-group size in the standard deviations]\n";
    report += render_table(table1(per_group, table1_risk_differences(), table1_prevalences(), drug_study_ladder()));
    report += "\n[M rounded to -0.018]\n";
    report += render_table(table1(rounded, table1_risk_differences(), table1_prevalences(), drug_study_ladder()));
    write_file(dir / "table1_variants.txt", report);

    write_file(dir / "table1.provenance.json",
               provenance(args, {{"drug", drug_params_json(base)},
                                 {"ladder", {0.25, 0.05, 0.001}},
                                 {"risk_differences", table1_risk_differences()},
                                 {"prevalences", table1_prevalences()}})
                       .dump(2) +
                   "\n");
}

void reproduce_table2(const ReproduceArgs& args, const fs::path& dir) {
    const MolnupiravirParams p;
    emit_table(dir, "table2", table2(p, table2_distributions(), drug_study_ladder()));
    const auto model = p.model();
    for (const auto& [mu, sd] : table2_distributions()) {
        const ContinuousPrevalence prev{mu, sd, model.boundary(), Direction::Below};
        PlotOptions po;
        po.sample_effect = -0.02;
        po.x_range = Interval{-0.1, 0.06};
        write_file(dir / ("table2_scenario_mu" + format_shortest(mu) + "_sd" + format_shortest(sd) + ".svg"),
                   plot_scenario(prev, model, {0.05, 0.23}, po));
    }
    json dists = json::array();
    for (const auto& [mu, sd] : table2_distributions()) dists.push_back({{"mean", mu}, {"sd", sd}});
    write_file(dir / "table2.provenance.json",
               provenance(args, {{"drug", drug_params_json(p)}, {"ladder", {0.25, 0.05, 0.001}}, {"distributions", dists}})
                       .dump(2) +
                   "\n");
}

void reproduce_table3(const ReproduceArgs& args, const fs::path& dir) {
    const AnticipatedScenario base;
    auto t = table3(base);
    t.notes.push_back("Anticipated effects N(M + 0.4, 0.1); teams needing more than 300 subjects excluded.");
    emit_table(dir, "table3", t);

    AnticipatedScenario uncapped = base;
    uncapped.max_total_n = 0.0;
    auto tu = table3(uncapped);
    tu.notes.push_back("Anticipated effects N(M + 0.4, 0.1); no sample-size cap.");
    emit_table(dir, "table3_uncapped", tu);

    AnticipatedScenario narrow = base;
    narrow.anticipated_sd = 0.01;
    auto tn = table3(narrow);
    tn.notes.push_back("Sensitivity: anticipated effects N(M + 0.4, 0.01).");
    emit_table(dir, "table3_sd0.01", tn);

    write_file(dir / "table3.provenance.json",
               provenance(args, {{"scenario", anticipated_json(base)},
                                 {"ladder", {0.25, 0.025}},
                                 {"cost_ratios", {10, 4, 1}},
                                 {"true_mean_offsets", {-0.1, 0.0, 0.4}},
                                 {"variants", {"table3_uncapped: max_total_n = 0", "table3_sd0.01: anticipated_sd = 0.01"}}})
                       .dump(2) +
                   "\n");
}

void reproduce_sim(const ReproduceArgs& args, const fs::path& dir, const AlphaLadder& ladder) {
    emit_table(dir, args.target + "_dichotomous", simulation_table_dichotomous(ladder, args.runs, args.seed));
    emit_table(dir, args.target + "_continuous", simulation_table_continuous(ladder, args.runs, args.seed));
    write_file(dir / (args.target + ".provenance.json"),
               provenance(args, {{"ladder", std::vector<double>(ladder.levels().begin(), ladder.levels().end())},
                                 {"cost_ranges", {{0, 100}, {0, 25}}},
                                 {"df_mode", "t"},
                                 {"substreams", "seed + run index"}})
                       .dump(2) +
                   "\n");
}

void reproduce_fig1(const ReproduceArgs& args, const fs::path& dir) {
    const AnticipatedScenario scn;
    const auto f = fig1_data(scn);
    std::string a = "effect,true_density,anticipated_density\n";
    for (std::size_t i = 0; i < f.effect.size(); ++i) {
        a += format_shortest(f.effect[i]) + "," + format_shortest(f.true_density[i]) + "," +
             format_shortest(f.anticipated_density[i]) + "\n";
    }
    std::string b = "anticipated_effect,group_size\n";
    for (std::size_t i = 0; i < f.anticipated.size(); ++i) {
        b += format_shortest(f.anticipated[i]) + "," + std::to_string(f.group_size[i]) + "\n";
    }
    std::string c = "group_size,density\n";
    for (std::size_t i = 0; i < f.sample_size.size(); ++i) {
        c += format_shortest(f.sample_size[i]) + "," + format_shortest(f.sample_size_density[i]) + "\n";
    }
    write_file(dir / "fig1a.csv", a);
    write_file(dir / "fig1b.csv", b);
    write_file(dir / "fig1c.csv", c);
    write_file(dir / "fig1.provenance.json", provenance(args, {{"scenario", anticipated_json(scn)}}).dump(2) + "\n");
}

int run_reproduce(const ReproduceArgs& args) {
    const fs::path dir(args.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ContractError("cannot create output directory '" + args.out + "': " + ec.message());
    if (args.runs < 1) throw ContractError("--runs must be at least 1");
    if (args.target == "table1") {
        reproduce_table1(args, dir);
    } else if (args.target == "table2") {
        reproduce_table2(args, dir);
    } else if (args.target == "table3") {
        reproduce_table3(args, dir);
    } else if (args.target == "s3a") {
        reproduce_sim(args, dir, {0.025, 0.0025});
    } else if (args.target == "s3b") {
        reproduce_sim(args, dir, {0.025, 0.0025, 0.0005});
    } else if (args.target == "fig1") {
        reproduce_fig1(args, dir);
    } else {
        throw ContractError("unknown reproduce target '" + args.target +
                            "' (expected table1, table2, table3, s3a, s3b or fig1)");
    }
    std::cout << "wrote " << args.target << " artifacts to " << dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expected error costs of single- and multi-alpha tests"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(MULTALPHA_VERSION));

    CostArgs cost_args;
    auto* cost = app.add_subcommand("cost", "Expected single- and multi-alpha costs of a scenario file");
    cost->add_option("scenario", cost_args.scenario, "Scenario JSON file")->required();
    cost->add_option("--format", cost_args.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));

    OptimizeArgs opt_args;
    auto* optimize = app.add_subcommand("optimize", "Cost-optimal single alpha for a scenario file");
    optimize->add_option("scenario", opt_args.scenario, "Scenario JSON file")->required();
    optimize->add_option("--bounds", opt_args.bounds, "Search bounds lo,hi within (0, 0.5]");
    optimize->add_option("--resolution", opt_args.resolution, "Coarse grid points")->check(CLI::Range(2, 100000));
    optimize->add_option("--trace", opt_args.trace, "Write the coarse (alpha, cost) grid as CSV");
    optimize->add_option("--format", opt_args.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    ReproduceArgs rep_args;
    auto* reproduce = app.add_subcommand("reproduce", "Write a standard reproduction with provenance");
    reproduce->add_option("target", rep_args.target, "table1, table2, table3, s3a, s3b or fig1")->required();
    reproduce->add_option("--seed", rep_args.seed, "Master seed for simulations");
    reproduce->add_option("--runs", rep_args.runs, "Simulation runs per cell");
    reproduce->add_option("--out", rep_args.out, "Output directory");

    LadderArgs lad_args;
    auto* ladder = app.add_subcommand("ladder", "Alpha ladder from costs, or population scale from a ladder");
    ladder->add_option("--alpha1", lad_args.alpha1, "Least stringent alpha");
    ladder->add_option("--costs", lad_args.costs, "Type I costs C0(1..k), comma separated");
    ladder->add_option("--ladder", lad_args.ladder, "Alpha ladder, comma separated");
    ladder->add_option("--q1", lad_args.q1, "Decision scale at the first level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*cost) return run_cost(cost_args);
        if (*optimize) return run_optimize(opt_args);
        if (*reproduce) return run_reproduce(rep_args);
        if (*ladder) return run_ladder(lad_args);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
