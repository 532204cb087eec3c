// aqec: construct subsystem codes and noise channels, build the transpose
// recovery, and verify correctability bounds at desk scale.
//
// Exit codes: 0 all checked bounds satisfied, 1 usage/input/precondition
// error, 2 at least one bound violated.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>

#include "aqec/json_io.hpp"
#include "aqec/scenarios.hpp"

using namespace aqec;

namespace {

struct Sources {
    SubsystemCode code;
    KrausChannel noise;
    std::optional<ProductFactors> factors;
};

bool is_gallery_name(const std::string& s) {
    for (const std::string& n : gallery_names())
        if (n == s) return true;
    return false;
}

Sources resolve_sources(const std::string& code_src, const std::string& noise_src,
                        const GalleryParams& params) {
    Sources out;
    std::optional<GalleryEntry> code_entry, noise_entry;
    if (is_gallery_name(code_src)) code_entry = gallery(code_src, params);
    if (is_gallery_name(noise_src))
        noise_entry = (code_src == noise_src) ? code_entry : gallery(noise_src, params);

    if (code_entry)
        out.code = code_entry->code;
    else
        out.code = code_from_json(load_json_file(code_src));

    if (noise_entry) {
        out.noise = noise_entry->noise;
        out.factors = noise_entry->factors;
    } else {
        out.noise = channel_from_json(load_json_file(noise_src));
    }

    if (out.noise.dim_in() != out.code.d_h)
        throw std::invalid_argument("noise acts on dimension " + std::to_string(out.noise.dim_in()) +
                                    " but the code lives in dimension " + std::to_string(out.code.d_h));
    const double dom = (out.noise.domain - code_projector(out.code)).norm();
    if (dom > 1e-8)
        throw std::invalid_argument(
            "noise is trace-preserving on a projector that differs from the code projector by " +
            std::to_string(dom) +
            "; restrict the channel to the code (Kraus E_i -> E_i P) before running");
    return out;
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&now));
    return buf;
}

std::string human_line(const BoundReport& r) {
    std::ostringstream os;
    os.precision(6);
    os << (r.satisfied ? "  ok   " : "  FAIL ") << r.name << ": " << r.lhs << " <= ";
    if (r.meta.contains("eta_op_upper") && r.meta.contains("d_a") &&
        r.name.find("f_bound") != std::string::npos) {
        const double eta = r.meta["eta_op_upper"].get<double>();
        os << eta << "*f(" << eta << ";" << r.meta["d_a"].get<int>() << ") = ";
    }
    os << r.rhs << "   (slack " << r.slack << ", tol " << r.tol << ")";
    if (r.informational) os << "  [informational]";
    return os.str();
}

int run_command(const std::string& code_src, const std::string& noise_src,
                const std::string& scenario, const ScenarioConfig& cfg,
                const GalleryParams& params, const std::string& out_path,
                const std::string& format) {
    const Sources src = resolve_sources(code_src, noise_src, params);

    std::vector<BoundReport> reports;
    std::vector<SkippedScenario> skipped;
    const Mat mixed_b =
        Mat::Identity(src.code.d_b, src.code.d_b) / std::max(1.0, static_cast<double>(src.code.d_b));

    if (scenario == "all") {
        RunAllResult all = run_all(src.code, src.noise, src.factors ? &*src.factors : nullptr, cfg);
        reports = std::move(all.reports);
        skipped = std::move(all.skipped);
    } else if (scenario == "perfect_check") {
        reports = scenario_perfect_check(src.code, src.noise, cfg);
    } else if (scenario == "subspace") {
        reports = scenario_subspace(src.code, src.noise, cfg);
    } else if (scenario == "product") {
        if (!src.factors)
            throw std::invalid_argument(
                "the product scenario needs noise with explicit A/B factors (gallery entries "
                "'product' or 'b_eraser')");
        reports = scenario_product_channel(src.code, *src.factors, cfg);
    } else if (scenario == "maxmixed") {
        reports = scenario_maxmixed_b(src.code, src.noise, cfg);
    } else if (scenario == "state_dependent") {
        reports = scenario_state_dependent(src.code, src.noise, mixed_b, cfg);
    } else if (scenario == "b_correctable") {
        reports = scenario_b_correctable(src.code, src.noise, cfg);
    } else if (scenario == "b_scrambling") {
        reports = scenario_b_scrambling(src.code, src.noise, cfg);
    } else {
        throw std::invalid_argument("unknown scenario '" + scenario + "'");
    }

    bool all_ok = true;
    for (const BoundReport& r : reports)
        if (!r.informational && !r.satisfied) all_ok = false;

    std::string text;
    if (format == "json") {
        Json doc{{"command", "run"},
                 {"code", code_src},
                 {"noise", noise_src},
                 {"scenario", scenario},
                 {"seed", cfg.seed},
                 {"restarts", cfg.restarts},
                 {"timestamp", iso_timestamp()},
                 {"all_satisfied", all_ok}};
        Json rj = Json::array();
        for (const BoundReport& r : reports) rj.push_back(report_to_json(r));
        doc["reports"] = std::move(rj);
        Json sj = Json::array();
        for (const SkippedScenario& s : skipped)
            sj.push_back(Json{{"scenario", s.name}, {"reason", s.reason}});
        doc["skipped"] = std::move(sj);
        text = doc.dump(2) + "\n";
    } else if (format == "csv") {
        text = reports_to_csv(reports);
    } else if (format == "human") {
        std::ostringstream os;
        os << "scenario " << scenario << " on code=" << code_src << " noise=" << noise_src
           << " (seed " << cfg.seed << ")\n";
        for (const BoundReport& r : reports) os << human_line(r) << "\n";
        for (const SkippedScenario& s : skipped)
            os << "  skip " << s.name << ": " << s.reason << "\n";
        os << (all_ok ? "all bounds satisfied\n" : "BOUND VIOLATION\n");
        text = os.str();
    } else {
        throw std::invalid_argument("unknown format '" + format + "'");
    }

    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
    return all_ok ? 0 : 2;
}

int describe_command(const std::string& name, const GalleryParams& params) {
    if (is_gallery_name(name)) {
        const GalleryEntry g = gallery(name, params);
        std::cout << name << ": d_a=" << g.code.d_a << ", d_b=" << g.code.d_b
                  << ", d_h=" << g.code.d_h << ", kraus=" << g.noise.size() << "\n";
        if (name == "bitflip3")
            std::cout << "  3-qubit repetition code; single bit flips with probability p=" << params.p
                      << " per qubit.\n";
        if (name == "gauge422")
            std::cout << "  4-qubit code with one logical and one gauge qubit; Pauli noise of "
                         "strength p="
                      << params.p << " on the gauge qubit.\n";
        if (name == "ad4")
            std::cout << "  4-qubit amplitude-damping code; per-qubit damping gamma=" << params.gamma
                      << ".\n";
        if (name == "product")
            std::cout << "  bit flip (p=" << params.p << ") on A times depolarizing (s="
                      << params.depol << ") on B.\n";
        if (name == "b_eraser")
            std::cout << "  identity on A times the channel sending every B state to |0><0|.\n";
        return 0;
    }
    struct Entry {
        const char* name;
        const char* text;
    };
    static const Entry scenarios[] = {
        {"perfect_check",
         "residuals of P E_i^dag E(P)^{-1/2} E_j P = P_A (x) B_ij (+ Delta_ij) and of "
         "P E_i^dag E_j P = P_A (x) B'_ij; perfect correctability means all Delta vanish, and "
         "then the transpose channel recovers A exactly (eta_P = 0)."},
        {"subspace",
         "for d_b = 1 checks eta_op <= eta_P and eta_P <= eta_op * f(eta_op; d_A) with "
         "f(eta; d) = ((d+1) - eta)/(1 + (d-1) eta), using the see-saw upper bound for eta_op, "
         "plus the per-state bound 1 - eta{psi} <= sqrt([1+(d_A-1)eta{C}][1 - eta_P{psi}])."},
        {"product",
         "for noise F_A (x) F_B checks that the transpose channel of the product equals the "
         "product of the factor transpose channels (Choi distance), and certifies the A factor "
         "via the subspace bounds."},
        {"maxmixed",
         "for the family rho_A (x) I/d_B checks eta_P{C_0} <= eta_op{C} * f(eta_op{C}; d_A), "
         "the averaged-channel Kraus form E_i V (I (x) |s>)/sqrt(d_B), and the family ordering "
         "eta_op{C_0} <= eta_op{C} evaluated on C_0."},
        {"state_dependent",
         "for a fixed reference state phi_B checks eta_{P_phi}{C_phi} <= eta_op{C_phi} * "
         "f(eta_op{C_phi}; d_A) for the state-dependent transpose channel with Kraus "
         "(P_A (x) sqrt(phi_B)) E_i^dag [E(P_A (x) phi_B)]^{-1/2}."},
        {"b_correctable",
         "when B is perfectly correctable checks that the recovered-A fidelity is independent "
         "of rho_B, equals sum_ij |<psi|A_ij|psi>|^2, and satisfies eta_P <= eta_op * "
         "f(eta_op; d_A)."},
        {"b_scrambling",
         "estimates the contraction delta with ||E(rho_A (x) rho_B) - E(rho_A (x) I/d_B)||_tr "
         "<= delta ||rho_B - I/d_B||_tr and checks the chain bound eta_op + delta >= 1 - "
         "sqrt([1+(d_A-1)eta_op](1 - eta_P{psi (x) rho_B} + delta)) per sampled state; the "
         "first-order form eta_P <= (d_A+1) eta_op + 3 delta is reported informationally."},
        {"all", "runs every scenario applicable to the pair and lists the skipped ones."},
    };
    for (const Entry& e : scenarios)
        if (name == e.name) {
            std::cout << e.name << ": " << e.text << "\n";
            return 0;
        }
    std::cerr << "unknown name '" << name << "' (gallery: ";
    for (const std::string& n : gallery_names()) std::cerr << n << " ";
    std::cerr << "; scenarios: perfect_check subspace product maxmixed state_dependent "
                 "b_correctable b_scrambling all)\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subsystem-code construction and transpose-channel bound verification"};
    app.require_subcommand(1);

    std::string code_src, noise_src, scenario = "all", out_path, format = "human";
    std::string config_path;
    GalleryParams params;
    ScenarioConfig cfg;
    bool serial = false;
    bool seed_given = false;

    CLI::App* run = app.add_subcommand("run", "run bound-verification scenarios");
    run->add_option("--code", code_src, "gallery name or code JSON path")->required();
    run->add_option("--noise", noise_src, "gallery name or channel JSON path")->required();
    run->add_option("--scenario", scenario,
                    "perfect_check|subspace|product|maxmixed|state_dependent|b_correctable|"
                    "b_scrambling|all");
    auto* seed_opt = run->add_option("--seed", cfg.seed, "optimizer seed (env AQEC_SEED as fallback)");
    run->add_option("--restarts", cfg.restarts, "optimizer restarts per maximization");
    run->add_option("--p", params.p, "bit-flip / gauge-Pauli probability for gallery pairs");
    run->add_option("--gamma", params.gamma, "amplitude-damping strength for gallery pairs");
    run->add_option("--depol", params.depol, "depolarizing strength of gallery B factors");
    run->add_option("--tol.order", cfg.tol_order, "tolerance for definitional orderings");
    run->add_option("--tol.fbound", cfg.tol_fbound, "tolerance for eta*f(eta;d) bounds");
    run->add_option("--tol.slack", cfg.tol_slack, "tolerance for estimated bound chains");
    run->add_option("--tol.choi", cfg.tol_choi, "tolerance for Choi-matrix equality");
    run->add_option("--tol.spread", cfg.tol_spread, "tolerance for B-independence spreads");
    run->add_option("--tol.perfect", cfg.tol_perfect, "tolerance for perfect-QEC residuals");
    run->add_option("--out", out_path, "write the report here instead of stdout");
    run->add_option("--format", format, "json|csv|human");
    run->add_option("--config", config_path, "JSON config file (flags override it)");
    run->add_flag("--serial", serial, "disable the OpenMP sweep kernels");

    std::string describe_name;
    CLI::App* describe = app.add_subcommand("describe", "describe a gallery pair or scenario");
    describe->add_option("name", describe_name, "gallery or scenario name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (describe->parsed()) return describe_command(describe_name, params);

        // Precedence: defaults < config file < flags.
        if (!config_path.empty()) {
            const Json jc = load_json_file(config_path);
            ScenarioConfig file_cfg;
            GalleryParams file_params;
            if (jc.contains("seed")) file_cfg.seed = jc["seed"].get<std::uint64_t>();
            if (jc.contains("restarts")) file_cfg.restarts = jc["restarts"].get<int>();
            if (jc.contains("tolerances")) {
                const Json& t = jc["tolerances"];
                if (t.contains("order")) file_cfg.tol_order = t["order"].get<double>();
                if (t.contains("fbound")) file_cfg.tol_fbound = t["fbound"].get<double>();
                if (t.contains("slack")) file_cfg.tol_slack = t["slack"].get<double>();
                if (t.contains("choi")) file_cfg.tol_choi = t["choi"].get<double>();
                if (t.contains("spread")) file_cfg.tol_spread = t["spread"].get<double>();
                if (t.contains("perfect")) file_cfg.tol_perfect = t["perfect"].get<double>();
            }
            if (jc.contains("p")) file_params.p = jc["p"].get<double>();
            if (jc.contains("gamma")) file_params.gamma = jc["gamma"].get<double>();
            if (jc.contains("depol")) file_params.depol = jc["depol"].get<double>();
            // Flags already wrote into cfg/params; fill the rest from the file.
            if (run->count("--seed") == 0) cfg.seed = file_cfg.seed;
            if (run->count("--restarts") == 0) cfg.restarts = file_cfg.restarts;
            if (run->count("--tol.order") == 0) cfg.tol_order = file_cfg.tol_order;
            if (run->count("--tol.fbound") == 0) cfg.tol_fbound = file_cfg.tol_fbound;
            if (run->count("--tol.slack") == 0) cfg.tol_slack = file_cfg.tol_slack;
            if (run->count("--tol.choi") == 0) cfg.tol_choi = file_cfg.tol_choi;
            if (run->count("--tol.spread") == 0) cfg.tol_spread = file_cfg.tol_spread;
            if (run->count("--tol.perfect") == 0) cfg.tol_perfect = file_cfg.tol_perfect;
            if (run->count("--p") == 0) params.p = file_params.p;
            if (run->count("--gamma") == 0) params.gamma = file_params.gamma;
            if (run->count("--depol") == 0) params.depol = file_params.depol;
        }
        seed_given = seed_opt->count() > 0 ||
                     (!config_path.empty() && load_json_file(config_path).contains("seed"));
        if (!seed_given) {
            if (const char* env = std::getenv("AQEC_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
        }
        cfg.mode = serial ? ExecMode::serial : ExecMode::parallel;

        return run_command(code_src, noise_src, scenario, cfg, params, out_path, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
