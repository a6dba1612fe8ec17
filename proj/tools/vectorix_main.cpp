// vectorix: ordered Tomlinson-Harashima precoding simulator for multi-line
// downstream channels. Subcommands: gen-channel, rates, sweep-bdo, verify,
// hist-weakest. Exit codes: 0 ok, 1 usage, 2 data error, 3 invariant failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vectorix/evaluate.hpp"
#include "vectorix/linksim.hpp"
#include "vectorix/qr.hpp"
#include "vectorix/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vectorix;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

struct RunConfig {
    std::string channel_path;  // empty = synthetic
    int lines = 8;
    std::uint64_t seed = 1;
    double band_start_hz = 2.1e6;
    double band_end_hz = 212e6;
    double tone_spacing_hz = 51.75e3;
    double length_m = 100.0;
    double direct_atten_coeff = 4.0e-5;
    double fext_slope = 1.25e-8;
    double fext_asymmetry_spread = 3.0;

    double transmit_psd_dbm_hz = -76.0;
    double noise_psd_dbm_hz = -140.0;
    double shannon_gap_db = 9.8;
    double margin_db = 6.0;
    double coding_gain_db = 5.0;
    int b_min = 2;
    int b_max = 12;
    double framing_overhead = 0.12;

    std::vector<std::string> schemes;    // empty = full comparison set
    std::vector<std::string> orderings;  // extra THP orderings
    std::vector<double> bdo_grid_mhz;    // empty = linear default grid
    std::string out_dir = ".";
    int max_tones = 0;  // 0 = all
    long symbols = 400;
    std::string inject_fault;  // test hook: "zf" or "power"
    bool json_only = false;
    bool csv_only = false;

    GapParams gap() const {
        GapParams g;
        g.shannon_gap_db = shannon_gap_db;
        g.margin_db = margin_db;
        g.coding_gain_db = coding_gain_db;
        g.b_min = b_min;
        g.b_max = b_max;
        g.gamma_base_db = transmit_psd_dbm_hz - noise_psd_dbm_hz;
        return g;
    }
};

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config '" + path + "'");
    json j = json::parse(in);
    const auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("channel", cfg.channel_path);
    get("lines", cfg.lines);
    get("seed", cfg.seed);
    get("band_start_hz", cfg.band_start_hz);
    get("band_end_hz", cfg.band_end_hz);
    get("tone_spacing_hz", cfg.tone_spacing_hz);
    get("length_m", cfg.length_m);
    get("direct_atten_coeff", cfg.direct_atten_coeff);
    get("fext_slope", cfg.fext_slope);
    get("fext_asymmetry_spread", cfg.fext_asymmetry_spread);
    get("transmit_psd_dbm_hz", cfg.transmit_psd_dbm_hz);
    get("noise_psd_dbm_hz", cfg.noise_psd_dbm_hz);
    get("shannon_gap_db", cfg.shannon_gap_db);
    get("margin_db", cfg.margin_db);
    get("coding_gain_db", cfg.coding_gain_db);
    get("b_min", cfg.b_min);
    get("b_max", cfg.b_max);
    get("framing_overhead", cfg.framing_overhead);
    get("schemes", cfg.schemes);
    get("orderings", cfg.orderings);
    get("bdo_grid_mhz", cfg.bdo_grid_mhz);
    get("out_dir", cfg.out_dir);
}

SyntheticCableSpec cable_spec(const RunConfig& cfg) {
    SyntheticCableSpec spec;
    spec.lines = cfg.lines;
    spec.length_m = cfg.length_m;
    spec.seed = cfg.seed;
    spec.direct_atten_coeff = cfg.direct_atten_coeff;
    spec.fext_slope = cfg.fext_slope;
    spec.fext_asymmetry_spread = cfg.fext_asymmetry_spread;
    return spec;
}

ChannelSet load_or_generate(const RunConfig& cfg) {
    ChannelSet set;
    if (!cfg.channel_path.empty()) {
        set = load_channel(cfg.channel_path);
    } else {
        const TonePlan plan =
            TonePlan::from_band(cfg.band_start_hz, cfg.band_end_hz, cfg.tone_spacing_hz);
        set = generate_synthetic(cable_spec(cfg), plan);
    }
    if (cfg.max_tones > 0 && cfg.max_tones < set.count()) {
        set.tones.resize(static_cast<std::size_t>(cfg.max_tones));
        set.plan.count = cfg.max_tones;
    }
    set.validate();
    return set;
}

OrderingStrategy::Kind parse_ordering_kind(const std::string& token) {
    if (token == "identity") return OrderingStrategy::Kind::Identity;
    if (token == "vb") return OrderingStrategy::Kind::Vb;
    if (token == "ivb") return OrderingStrategy::Kind::Ivb;
    if (token == "do") return OrderingStrategy::Kind::Do;
    throw Error("unknown ordering '" + token + "'");
}

// Tokens: identity | vb | ivb | do | do-ivb:<MHz> | ivb-do:<MHz>
OrderingStrategy parse_ordering(const std::string& token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) {
        OrderingStrategy s;
        s.kind = parse_ordering_kind(token);
        return s;
    }
    const std::string head = token.substr(0, colon);
    const double mhz = std::stod(token.substr(colon + 1));
    if (head == "do-ivb")
        return OrderingStrategy::freq_share(OrderingStrategy::Kind::Do,
                                            OrderingStrategy::Kind::Ivb, mhz * 1e6);
    if (head == "ivb-do")
        return OrderingStrategy::freq_share(OrderingStrategy::Kind::Ivb,
                                            OrderingStrategy::Kind::Do, mhz * 1e6);
    throw Error("unknown ordering '" + token + "'");
}

std::vector<SchemeSpec> scheme_list(const RunConfig& cfg) {
    std::vector<SchemeSpec> list;
    if (cfg.schemes.empty())
        list = SchemeSpec::comparison_set();
    else
        for (const std::string& name : cfg.schemes) list.push_back(SchemeSpec::from_acronym(name));
    for (const std::string& token : cfg.orderings)
        list.push_back(SchemeSpec{SchemeKind::ThpOrdered, parse_ordering(token)});
    for (const SchemeSpec& s : list) s.validate();
    return list;
}

void ensure_out_dir(const RunConfig& cfg) {
    if (!cfg.out_dir.empty() && cfg.out_dir != ".") fs::create_directories(cfg.out_dir);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

int cmd_gen_channel(const RunConfig& cfg, const std::string& out_file) {
    const TonePlan plan =
        TonePlan::from_band(cfg.band_start_hz, cfg.band_end_hz, cfg.tone_spacing_hz);
    ChannelSet set = generate_synthetic(cable_spec(cfg), plan);
    if (cfg.max_tones > 0 && cfg.max_tones < set.count()) {
        set.tones.resize(static_cast<std::size_t>(cfg.max_tones));
        set.plan.count = cfg.max_tones;
    }
    save_channel(set, out_file);
    std::cout << "wrote " << out_file << " (" << set.count() << " tones, L=" << set.lines
              << ")\n";
    return kExitOk;
}

int cmd_rates(const RunConfig& cfg) {
    const ChannelSet set = load_or_generate(cfg);
    const GapParams gap = cfg.gap();
    std::vector<RateReport> reports;
    for (const SchemeSpec& scheme : scheme_list(cfg))
        reports.push_back(evaluate_scheme(set, scheme, gap, cfg.framing_overhead));

    ensure_out_dir(cfg);
    if (!cfg.json_only) {
        write_text_file(out_path(cfg, "rates.csv"), rates_csv(reports));
        write_text_file(out_path(cfg, "rates_per_line.csv"), rates_per_line_csv(reports));
    }
    if (!cfg.csv_only) write_text_file(out_path(cfg, "rates.json"), rates_json(reports));

    std::cout << rates_csv(reports);
    return kExitOk;
}

int cmd_sweep_bdo(const RunConfig& cfg) {
    const ChannelSet set = load_or_generate(cfg);
    const GapParams gap = cfg.gap();
    const double band_hz = set.plan.count * set.plan.delta_f_hz;

    std::vector<double> grid_hz;
    if (cfg.bdo_grid_mhz.empty()) {
        for (int i = 0; i <= 8; ++i) grid_hz.push_back(band_hz * i / 8.0);
    } else {
        for (double mhz : cfg.bdo_grid_mhz) grid_hz.push_back(mhz * 1e6);
    }

    std::vector<SweepRow> rows;
    for (const char* direction : {"DO-IVB", "IVB-DO"}) {
        const bool do_low = std::string(direction) == "DO-IVB";
        for (double b_do : grid_hz) {
            // b_do is the bandwidth assigned to dynamic ordering; the split
            // offset is measured from the low edge.
            const double split =
                std::clamp(do_low ? b_do : band_hz - b_do, 0.0, band_hz);
            const OrderingStrategy strategy = OrderingStrategy::freq_share(
                do_low ? OrderingStrategy::Kind::Do : OrderingStrategy::Kind::Ivb,
                do_low ? OrderingStrategy::Kind::Ivb : OrderingStrategy::Kind::Do, split);
            const RateReport r = evaluate_scheme(
                set, SchemeSpec{SchemeKind::ThpOrdered, strategy}, gap, cfg.framing_overhead);
            rows.push_back(SweepRow{direction, b_do, r.mean_mbps, r.min_mbps});
        }
    }

    ensure_out_dir(cfg);
    write_text_file(out_path(cfg, "sweep_bdo.csv"), sweep_csv(rows));
    std::cout << sweep_csv(rows);
    return kExitOk;
}

int cmd_hist_weakest(const RunConfig& cfg) {
    const ChannelSet set = load_or_generate(cfg);
    const std::vector<long> counts = weakest_line_histogram(set);
    ensure_out_dir(cfg);
    write_text_file(out_path(cfg, "hist_weakest.csv"), hist_csv(counts));
    std::cout << hist_csv(counts);
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    const ChannelSet set = load_or_generate(cfg);
    const GapParams gap = cfg.gap();
    int failures = 0;
    const auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS  " : "FAIL  ") << name;
        if (!detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };

    // Block-level invariants on every tone and scheme: ZF residual and
    // per-line feedforward power.
    for (const SchemeSpec& scheme : scheme_list(cfg)) {
        double worst_zf = 0.0;
        double worst_power = 0.0;
        int singular = 0;
        const bool ordered =
            scheme.kind == SchemeKind::ThpOrdered || scheme.kind == SchemeKind::ErThp;
        OrderingPlan plan;
        if (ordered) plan = plan_orderings(set, scheme.ordering, gap);
        bool faulted = false;
        for (int t = 0; t < set.count(); ++t) {
            try {
                const CMatrix& h = set.tone(t);
                PrecoderBlocks blocks = build_scheme_blocks(
                    h, scheme,
                    ordered ? plan.perms[static_cast<std::size_t>(t)]
                            : Permutation::identity(set.lines));
                if (!cfg.inject_fault.empty() && !faulted && scheme.kind == SchemeKind::Thp) {
                    if (cfg.inject_fault == "zf") blocks.F(0, 0) += Complex(1e-3, 0.0);
                    if (cfg.inject_fault == "power") blocks.F.row(0) *= 1.1;
                    faulted = true;
                }
                worst_zf = std::max(worst_zf, verify_zf(blocks, h));
                for (int i = 0; i < blocks.lines(); ++i)
                    worst_power = std::max(worst_power, blocks.F.row(i).squaredNorm());
            } catch (const SingularMatrixError&) {
                ++singular;
            } catch (const ConvergenceError&) {
                ++singular;
            }
        }
        report("zf-residual " + scheme.label(), worst_zf < 1e-9,
               "max " + std::to_string(worst_zf) +
                   (singular ? ", skipped tones " + std::to_string(singular) : ""));
        report("feedforward-power " + scheme.label(), worst_power <= 1.0 + 1e-12,
               "max row power " + std::to_string(worst_power));
    }

    // Noise-free end-to-end round trip. The power check subtracts three
    // standard errors of the Monte Carlo estimate so short runs do not trip
    // on sampling noise.
    for (const SchemeSpec& scheme : scheme_list(cfg)) {
        const E2eSummary sum = verify_e2e(set, scheme, gap, cfg.symbols, 0.0, cfg.seed);
        report("noise-free-e2e " + scheme.label(),
               sum.total_errors == 0 && sum.max_tx_power_excess <= 1.02,
               std::to_string(sum.total_errors) + " errors / " +
                   std::to_string(sum.total_symbols) + " symbols, max power " +
                   std::to_string(sum.max_tx_power) + " (-3se " +
                   std::to_string(sum.max_tx_power_excess) + ")");
    }

    // Ordered THP with identity order must reproduce the reference scheme.
    {
        bool equal = true;
        for (int t = 0; t < set.count() && equal; ++t) {
            try {
                const PrecoderBlocks a = build_reference_thp(set.tone(t));
                const PrecoderBlocks b =
                    build_ordered_thp(set.tone(t), Permutation::identity(set.lines));
                equal = max_abs(a.E - b.E) == 0.0 && max_abs(a.B - b.B) == 0.0 &&
                        max_abs(a.F - b.F) == 0.0 && max_abs(a.G - b.G) == 0.0;
            } catch (const SingularMatrixError&) {
            }
        }
        report("identity-order-equivalence", equal, "");
    }

    // Equal-rate family: every line carries the same load.
    {
        const RateReport er = evaluate_scheme(set, SchemeSpec::from_acronym("ER-THP"), gap,
                                              cfg.framing_overhead);
        bool equal = true;
        for (double v : er.line_mbps) equal = equal && v == er.line_mbps[0];
        report("equal-rate-lines", equal, "");
    }

    // Ordering oracles on small seeded channels.
    {
        int dominated = 0, agree = 0, pivot_ok = 0;
        const int trials = 50;
        for (int L : {3, 4}) {
            for (int i = 0; i < trials; ++i) {
                const CMatrix h = random_channel(L, 9000 + static_cast<std::uint64_t>(i));
                const CMatrix a = h.adjoint();
                const Permutation opt = exhaustive_maxmin_order(a);
                double opt_min = 1e300, vb_min = 1e300;
                const QrFactorization fo = forced_order_qr(a, opt);
                const QrFactorization fv = sorted_qr(a);
                for (int k = 0; k < L; ++k) {
                    opt_min = std::min(opt_min, std::norm(fo.R(k, k)));
                    vb_min = std::min(vb_min, std::norm(fv.R(k, k)));
                }
                if (opt_min >= vb_min * (1.0 - 1e-12)) ++dominated;
                if (std::abs(opt_min - vb_min) <= 1e-9 * opt_min) ++agree;

                const QrFactorization fp = pivoted_qr(a);
                double max_col = 0.0;
                for (int j = 0; j < L; ++j) max_col = std::max(max_col, a.col(j).squaredNorm());
                if (std::abs(std::norm(fp.R(0, 0)) - max_col) <= 1e-9 * max_col) ++pivot_ok;
            }
        }
        report("oracle-dominance", dominated == 2 * trials,
               std::to_string(dominated) + "/" + std::to_string(2 * trials));
        report("pivot-max-first", pivot_ok == 2 * trials, "");
        std::cout << "INFO  weakest-first/exhaustive agreement: " << agree << "/" << 2 * trials
                  << "\n";
    }

    if (failures > 0) {
        std::cout << failures << " invariant check(s) failed\n";
        return kExitInvariant;
    }
    std::cout << "all invariant checks passed\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ordered Tomlinson-Harashima precoding simulator"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env_seed = std::getenv("VECTORIX_SEED")) cfg.seed = std::strtoull(env_seed, nullptr, 10);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override it)");

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--channel", cfg.channel_path, "channel file to load");
        cmd->add_flag("--synthetic", "generate the synthetic cable (default)");
        cmd->add_option("--lines", cfg.lines, "number of lines");
        cmd->add_option("--seed", cfg.seed, "generator seed (env VECTORIX_SEED fallback)");
        cmd->add_option("--band-start", cfg.band_start_hz, "band start [Hz]");
        cmd->add_option("--band-end", cfg.band_end_hz, "band end [Hz]");
        cmd->add_option("--tone-spacing", cfg.tone_spacing_hz, "tone spacing [Hz]");
        cmd->add_option("--length-m", cfg.length_m, "cable length [m]");
        cmd->add_option("--tones", cfg.max_tones, "cap the number of tones");
        cmd->add_option("--out", cfg.out_dir, "output directory");
    };

    CLI::App* gen = app.add_subcommand("gen-channel", "write a synthetic channel file");
    std::string gen_out = "channel.csv";
    add_common(gen);
    gen->add_option("--out-file", gen_out, "output channel file");

    CLI::App* rates = app.add_subcommand("rates", "per-scheme rate table");
    add_common(rates);
    rates->add_option("--schemes", cfg.schemes, "scheme acronyms")->delimiter(',');
    rates->add_option("--orderings", cfg.orderings,
                      "extra THP orderings (identity,vb,ivb,do,do-ivb:<MHz>,ivb-do:<MHz>)")
        ->delimiter(',');
    rates->add_flag("--json", cfg.json_only, "JSON output only");
    rates->add_flag("--csv", cfg.csv_only, "CSV output only");

    CLI::App* sweep = app.add_subcommand("sweep-bdo", "frequency-sharing bandwidth sweep");
    add_common(sweep);
    sweep->add_option("--bdo-grid", cfg.bdo_grid_mhz, "bandwidth grid [MHz]")->delimiter(',');

    CLI::App* verify = app.add_subcommand("verify", "run invariant checks");
    add_common(verify);
    verify->add_option("--schemes", cfg.schemes, "scheme acronyms")->delimiter(',');
    verify->add_option("--symbols", cfg.symbols,
                       "symbols per tone for the round trip (short runs make "
                       "the power estimate noisy; keep >= 200)");
    verify->add_option("--inject-fault", cfg.inject_fault,
                       "test hook: corrupt one precoder (zf|power)");

    CLI::App* hist = app.add_subcommand("hist-weakest", "weakest-line histogram");
    add_common(hist);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!config_path.empty()) {
            RunConfig from_file;
            if (const char* env_seed = std::getenv("VECTORIX_SEED"))
                from_file.seed = std::strtoull(env_seed, nullptr, 10);
            apply_config_file(from_file, config_path);
            // Re-apply CLI values on top of the file by re-parsing.
            cfg = from_file;
            app.clear();
            try {
                app.parse(argc, argv);
            } catch (const CLI::ParseError& e) {
                const int code = app.exit(e);
                return code == 0 ? kExitOk : kExitUsage;
            }
        }

        if (gen->parsed()) return cmd_gen_channel(cfg, gen_out);
        if (rates->parsed()) return cmd_rates(cfg);
        if (sweep->parsed()) return cmd_sweep_bdo(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (hist->parsed()) return cmd_hist_weakest(cfg);
    } catch (const ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
