// qrlab: one binary for every study on this bench -- two-channel selector
// replication, reference-ledger verification, detection planning, velocity
// uncertainty audits, lineage survival comparisons, and direct reduction
// sampling.  Every run prints the full effective configuration so any output
// can be reproduced from the report alone.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qrlab/bias.hpp"
#include "qrlab/errors.hpp"
#include "qrlab/evolution.hpp"
#include "qrlab/peptide.hpp"
#include "qrlab/quantum.hpp"
#include "qrlab/refcheck.hpp"
#include "qrlab/rng.hpp"
#include "qrlab/selector.hpp"
#include "qrlab/trinomial.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qrlab;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;

/// A problem the user can fix: bad flag value, malformed config or spec
/// file, unusable output path.  Reported on stderr with exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

/// Bias strength from its textual form: a non-negative real, or "inf" for
/// the maximal-influence limit.
double parse_beta(const std::string& text) {
    const std::string t = lower(text);
    if (t == "inf" || t == "infinite" || t == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    try {
        std::size_t consumed = 0;
        const double value = std::stod(t, &consumed);
        if (consumed == t.size() && !std::isnan(value) && value >= 0.0) return value;
    } catch (const std::exception&) {
    }
    throw ConfigError("invalid beta '" + text + "': expected a non-negative real or 'inf'");
}

json beta_json(double beta) {
    if (std::isinf(beta)) return json("inf");
    return json(beta);
}

BiasVariant parse_variant(const std::string& name) {
    const std::string t = lower(name);
    if (t == "original") return BiasVariant::Original;
    if (t == "modified") return BiasVariant::Modified;
    throw ConfigError("invalid bias variant '" + name + "': expected original or modified");
}

OriginKind parse_origin(const std::string& name) {
    const std::string t = lower(name);
    if (t == "external") return OriginKind::External;
    if (t == "cm") return OriginKind::CMInternal;
    throw ConfigError("invalid origin '" + name + "': expected external or cm");
}

Association parse_association(const std::string& name) {
    const std::string t = lower(name);
    if (t == "correct") return Association::Correct;
    if (t == "wrong") return Association::Wrong;
    throw ConfigError("invalid association '" + name + "': expected correct or wrong");
}

/// Config-file overlay with flag precedence: a key fills its parameter only
/// when the matching flag was not given on the command line.  Unknown keys
/// are rejected so typos cannot silently fall back to defaults.
class Overlay {
public:
    Overlay(const std::string& path, const std::map<std::string, CLI::Option*>& options) {
        if (path.empty()) return;
        std::ifstream is(path, std::ios::binary);
        if (!is) throw ConfigError("cannot read config file: " + path);
        try {
            cfg_ = json::parse(is);
        } catch (const json::exception& e) {
            throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
        }
        if (!cfg_.is_object()) {
            throw ConfigError("config file " + path + " must hold a JSON object");
        }
        for (const auto& item : cfg_.items()) {
            if (options.find(item.key()) == options.end()) {
                throw ConfigError("unknown config key '" + item.key() + "' in " + path);
            }
        }
        options_ = options;
    }

    template <typename T>
    void get(const std::string& key, T& target) const {
        const json* value = lookup(key);
        if (value == nullptr) return;
        try {
            target = value->get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config key '" + key + "' has the wrong type");
        }
    }

    /// For values that are numbers in JSON but strings on the command line
    /// (beta, which admits "inf").
    void get_number_or_string(const std::string& key, std::string& target) const {
        const json* value = lookup(key);
        if (value == nullptr) return;
        if (value->is_string()) {
            target = value->get<std::string>();
        } else if (value->is_number()) {
            target = value->dump();
        } else {
            throw ConfigError("config key '" + key + "' has the wrong type");
        }
    }

private:
    const json* lookup(const std::string& key) const {
        if (cfg_.is_null()) return nullptr;
        const auto option = options_.find(key);
        if (option != options_.end() && option->second != nullptr &&
            option->second->count() > 0) {
            return nullptr;  // explicit flag wins over the config file
        }
        const auto it = cfg_.find(key);
        return it == cfg_.end() ? nullptr : &*it;
    }

    json cfg_;
    std::map<std::string, CLI::Option*> options_;
};

/// Writes through a temp file plus rename so a target file is either absent,
/// fully old, or fully new -- never truncated mid-write.
void write_file_atomic(const fs::path& target, const std::string& content) {
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ConfigError("cannot write output file: " + target.string());
        os << content;
        os.flush();
        if (!os) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw std::runtime_error("failed to finalize " + target.string() + ": " + ec.message());
    }
}

fs::path require_out_dir(const std::string& out) {
    const fs::path dir(out.empty() ? "." : out);
    if (!fs::is_directory(dir)) {
        throw ConfigError("output directory does not exist: " + dir.string());
    }
    return dir;
}

// ---------------------------------------------------------------------------
// replicate
// ---------------------------------------------------------------------------

struct ReplicateArgs {
    std::uint64_t seed = 1;
    std::uint64_t trials = 2500;
    std::string bias_variant = "modified";
    std::string beta = "0";
    std::string origin = "external";
    double rate_l = 1.0;
    double rate_r = 1.0;
    unsigned threads = 1;
    double threshold = 1.0;
    std::string out = ".";
    std::string format = "csv";
    std::string config_path;
    std::map<std::string, CLI::Option*> options;
};

int cmd_replicate(ReplicateArgs a) {
    const Overlay overlay(a.config_path, a.options);
    overlay.get("seed", a.seed);
    overlay.get("trials", a.trials);
    overlay.get("bias_variant", a.bias_variant);
    overlay.get_number_or_string("beta", a.beta);
    overlay.get("origin", a.origin);
    overlay.get("rate_l", a.rate_l);
    overlay.get("rate_r", a.rate_r);
    overlay.get("threads", a.threads);
    overlay.get("threshold", a.threshold);
    overlay.get("out", a.out);
    overlay.get("format", a.format);

    ApparatusConfig config;
    config.rate_l = a.rate_l;
    config.rate_r = a.rate_r;
    config.bias = BiasModel{parse_variant(a.bias_variant), parse_beta(a.beta)};
    config.origin_mode = parse_origin(a.origin);
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (a.trials < 1) throw ConfigError("trials must be >= 1");
    if (a.threads < 1) throw ConfigError("threads must be >= 1");
    if (!(a.threshold > 0.0) || !std::isfinite(a.threshold)) {
        throw ConfigError("threshold must be a positive real");
    }
    const std::string format = lower(a.format);
    if (format != "csv" && format != "json-report") {
        throw ConfigError("invalid format '" + a.format + "': expected csv or json-report");
    }
    const fs::path out_dir = require_out_dir(a.out);

    const json cfg{{"seed", a.seed},
                   {"trials", a.trials},
                   {"bias_variant", lower(a.bias_variant)},
                   {"beta", beta_json(parse_beta(a.beta))},
                   {"origin", lower(a.origin)},
                   {"rate_l", a.rate_l},
                   {"rate_r", a.rate_r},
                   {"threads", a.threads},
                   {"threshold", a.threshold},
                   {"out", a.out},
                   {"format", format}};

    const ExperimentResult result = run_experiment(config, a.trials, a.seed, a.threads);
    const ExperimentTally& tally = result.tally;

    // Plug-in estimate of the left-channel probability from the
    // perception-only part; degenerate values leave the statistics block
    // unavailable but the report still complete.
    const double p0_hat = static_cast<double>(tally.n_l) / static_cast<double>(tally.n);
    std::optional<NullModel> model;
    std::optional<StatsReport> stats;
    if (p0_hat > 0.0 && p0_hat < 1.0) {
        model = null_model(p0_hat);
        stats = z_statistic(tally, *model, a.threshold);
    }

    std::ostringstream csv;
    write_trial_csv(csv, result.records);

    std::string report_name;
    std::string report_text;
    if (format == "csv") {
        std::ostringstream os;
        os << "two-channel selector replication\n"
           << "config : " << cfg.dump() << "\n"
           << "plug-in p0 : N_L / N estimated from this run\n";
        if (stats) {
            write_stats_report(os, tally, *model, *stats);
        } else {
            write_tally(os, tally);
            os << "statistics : unavailable (plug-in p0 = " << p0_hat
               << " is degenerate; every perception-part trial lit the same lamp)\n";
        }
        report_name = "report.txt";
        report_text = os.str();
    } else {
        json jr;
        jr["kind"] = "replicate";
        jr["config"] = cfg;
        jr["tally"] = json{{"n", tally.n},   {"n_s", tally.n_s}, {"n_l", tally.n_l},
                           {"u", tally.u},   {"d", tally.d},     {"e", tally.e}};
        if (stats) {
            jr["stats"] = json{{"available", true},
                               {"p0", model->p0},
                               {"q0", model->q0},
                               {"p", model->p},
                               {"q", model->q},
                               {"r", model->r},
                               {"sigma_ud", stats->sigma_ud},
                               {"sigma_u", stats->sigma_u},
                               {"expected_u", stats->expected_u},
                               {"z", stats->z},
                               {"threshold", stats->threshold},
                               {"within_threshold", stats->within_one_sigma},
                               {"u_within_sigma", stats->u_within_sigma},
                               {"d_within_sigma", stats->d_within_sigma}};
        } else {
            jr["stats"] = json{{"available", false},
                               {"reason", "degenerate plug-in p0"},
                               {"p0", p0_hat}};
        }
        report_name = "report.json";
        report_text = jr.dump(2) + "\n";
    }

    write_file_atomic(out_dir / "trials.csv", csv.str());
    write_file_atomic(out_dir / report_name, report_text);
    std::cout << "wrote " << (out_dir / "trials.csv").string() << "\n"
              << "wrote " << (out_dir / report_name).string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckArgs {
    std::uint64_t n = 2500;
    std::uint64_t n_s = 1244;
    std::uint64_t n_l = 1261;
    std::uint64_t u = 632;
    std::uint64_t d = 615;
    std::string config_path;
    std::map<std::string, CLI::Option*> options;
};

int cmd_check(CheckArgs a) {
    const Overlay overlay(a.config_path, a.options);
    overlay.get("n", a.n);
    overlay.get("n_s", a.n_s);
    overlay.get("n_l", a.n_l);
    overlay.get("u", a.u);
    overlay.get("d", a.d);

    ReferenceExperiment data;
    data.n = a.n;
    data.n_s = a.n_s;
    data.n_l = a.n_l;
    data.u = a.u;
    data.d = a.d;

    const json cfg{{"n", a.n}, {"n_s", a.n_s}, {"n_l", a.n_l}, {"u", a.u}, {"d", a.d}};
    std::cout << "reference ledger verification\n"
              << "config : " << cfg.dump() << "\n";
    const ReferenceCheckResult result = check_reference(data);
    write_reference_report(std::cout, result);
    return result.all_pass ? kExitOk : kExitInternal;
}

// ---------------------------------------------------------------------------
// power
// ---------------------------------------------------------------------------

struct PowerArgs {
    double delta = 0.01;
    double k = 3.0;
    std::string config_path;
    std::map<std::string, CLI::Option*> options;
};

int cmd_power(PowerArgs a) {
    const Overlay overlay(a.config_path, a.options);
    overlay.get("delta", a.delta);
    overlay.get("k", a.k);

    std::uint64_t trials = 0;
    try {
        trials = required_trials(a.delta, a.k);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    // The unscoped-variant strength that shifts a fair two-branch trial by
    // exactly delta: solve p e^-b / (p e^-b + 1 - p) = 1/2 - delta at p=1/2.
    const double beta = std::log((0.5 + a.delta) / (0.5 - a.delta));

    const json cfg{{"delta", a.delta}, {"k", a.k}};
    char full[64];
    std::snprintf(full, sizeof(full), "%.12g", beta);
    std::cout << "detection planning\n"
              << "config : " << cfg.dump() << "\n"
              << "per-trial shift      : " << a.delta << "\n"
              << "significance target  : " << a.k << " sigma\n"
              << "required trials      : " << trials << "\n"
              << "equivalent unscoped bias strength : " << full
              << "  (produces the shift on a fair apparatus)\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// peptide
// ---------------------------------------------------------------------------

struct PeptideArgs {
    double mass_u = 10000.0;
    double dx = 1e-8;
    double time = 0.1;
    double claimed = 0.063;
    std::string config_path;
    std::map<std::string, CLI::Option*> options;
};

int cmd_peptide(PeptideArgs a) {
    const Overlay overlay(a.config_path, a.options);
    overlay.get("mass_u", a.mass_u);
    overlay.get("dx", a.dx);
    overlay.get("time", a.time);
    overlay.get("claimed", a.claimed);

    PeptideReport report;
    try {
        report = make_peptide_report(Particle{a.mass_u, a.dx}, a.time, a.claimed);
    } catch (const NonPositiveInput& e) {
        throw ConfigError(e.what());
    }
    const json cfg{
        {"mass_u", a.mass_u}, {"dx", a.dx}, {"time", a.time}, {"claimed", a.claimed}};
    std::cout << "localization-limited velocity audit\n"
              << "config : " << cfg.dump() << "\n";
    write_peptide_report(std::cout, report);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// evolve
// ---------------------------------------------------------------------------

struct EvolveArgs {
    std::uint64_t seed = 1;
    std::uint32_t population = 10000;
    std::uint32_t generations = 50;
    std::string beta = "2";
    std::string bias_variant = "modified";
    double bonus = 0.1;
    double hazard = 1.0;
    std::string association = "correct";
    std::string out = ".";
    std::string config_path;
    std::map<std::string, CLI::Option*> options;
};

int cmd_evolve(EvolveArgs a) {
    const Overlay overlay(a.config_path, a.options);
    overlay.get("seed", a.seed);
    overlay.get("population", a.population);
    overlay.get("generations", a.generations);
    overlay.get_number_or_string("beta", a.beta);
    overlay.get("bias_variant", a.bias_variant);
    overlay.get("bonus", a.bonus);
    overlay.get("hazard", a.hazard);
    overlay.get("association", a.association);
    overlay.get("out", a.out);

    Genotype genotype;
    genotype.association = parse_association(a.association);
    genotype.autonomic_escape_bonus = a.bonus;
    LineageConfig config;
    config.bias = BiasModel{parse_variant(a.bias_variant), parse_beta(a.beta)};
    config.population = a.population;
    config.hazard_per_encounter = a.hazard;
    config.generations = a.generations;
    try {
        config.validate(genotype);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const fs::path out_dir = require_out_dir(a.out);

    const json cfg{{"seed", a.seed},
                   {"population", a.population},
                   {"generations", a.generations},
                   {"beta", beta_json(parse_beta(a.beta))},
                   {"bias_variant", lower(a.bias_variant)},
                   {"bonus", a.bonus},
                   {"hazard", a.hazard},
                   {"association", lower(a.association)},
                   {"out", a.out}};

    const SurvivalCurves curves = run_lineages(genotype, config, a.seed);

    std::ostringstream csv;
    write_survival_csv(csv, curves);
    write_file_atomic(out_dir / "survival.csv", csv.str());

    const auto extinction = [](const std::vector<double>& curve) -> std::string {
        for (std::size_t g = 0; g < curve.size(); ++g) {
            if (curve[g] == 0.0) return std::to_string(g);
        }
        return "-";
    };
    char line[96];
    std::cout << "lineage survival comparison\n"
              << "config : " << cfg.dump() << "\n"
              << "final alive fraction after " << a.generations << " generations"
              << " (extinction generation, - if none)\n";
    std::snprintf(line, sizeof(line), "  conscious : %.9g  (%s)\n", curves.conscious.back(),
                  extinction(curves.conscious).c_str());
    std::cout << line;
    std::snprintf(line, sizeof(line), "  autonomic : %.9g  (%s)\n", curves.autonomic.back(),
                  extinction(curves.autonomic).c_str());
    std::cout << line;
    std::snprintf(line, sizeof(line), "  tandem    : %.9g  (%s)\n", curves.tandem.back(),
                  extinction(curves.tandem).c_str());
    std::cout << line;
    std::cout << "wrote " << (out_dir / "survival.csv").string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

struct ReduceArgs {
    std::string spec_path;
    std::uint64_t samples = 1;
    std::uint64_t seed = 1;
    std::string bias_variant = "modified";
    std::string beta = "0";
    bool normalize = false;
    std::string config_path;
    std::map<std::string, CLI::Option*> options;
};

Superposition parse_superposition_spec(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read superposition spec: " + path);
    json spec;
    try {
        spec = json::parse(is);
    } catch (const json::exception& e) {
        throw ConfigError("spec file " + path + " is not valid JSON: " + e.what());
    }
    if (!spec.is_object() || !spec.contains("branches") || !spec["branches"].is_array() ||
        spec["branches"].empty()) {
        throw ConfigError("spec must be an object with a non-empty 'branches' array");
    }
    std::vector<Branch> branches;
    for (const json& jb : spec["branches"]) {
        if (!jb.is_object() || !jb.contains("label") || !jb.contains("modulus")) {
            throw ConfigError("every branch needs at least 'label' and 'modulus'");
        }
        Branch branch;
        try {
            branch.label = jb.at("label").get<std::string>();
            branch.amplitude.modulus = jb.at("modulus").get<double>();
            branch.amplitude.phase = jb.value("phase", 0.0);
            branch.valence = jb.value("valence", 0.0);
            if (jb.contains("origin")) {
                const json& origin = jb.at("origin");
                if (origin.is_string() && lower(origin.get<std::string>()) == "external") {
                    branch.origin = Origin::external();
                } else if (origin.is_object() && origin.contains("cm") &&
                           origin.contains("group")) {
                    branch.origin = Origin::cm_internal(origin.at("cm").get<std::uint32_t>(),
                                                        origin.at("group").get<std::uint32_t>());
                } else {
                    throw ConfigError(
                        "branch origin must be \"external\" or {\"cm\": id, \"group\": id}");
                }
            }
        } catch (const json::exception& e) {
            throw ConfigError(std::string("malformed branch in spec: ") + e.what());
        }
        branches.push_back(std::move(branch));
    }
    try {
        return Superposition(std::move(branches));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid superposition: ") + e.what());
    }
}

int cmd_reduce(ReduceArgs a) {
    const Overlay overlay(a.config_path, a.options);
    overlay.get("spec", a.spec_path);
    overlay.get("samples", a.samples);
    overlay.get("seed", a.seed);
    overlay.get("bias_variant", a.bias_variant);
    overlay.get_number_or_string("beta", a.beta);
    overlay.get("normalize", a.normalize);

    if (a.spec_path.empty()) throw ConfigError("a superposition spec file is required (--spec)");
    if (a.samples < 1) throw ConfigError("samples must be >= 1");
    const BiasModel bias{parse_variant(a.bias_variant), parse_beta(a.beta)};

    Superposition state = parse_superposition_spec(a.spec_path);
    if (a.normalize) {
        try {
            state = normalize(state);
        } catch (const AllZeroAmplitudes& e) {
            throw ConfigError(e.what());
        }
    }
    if (bias.strength > 0.0) {
        if (!state.is_normalized(1e-9)) {
            throw ConfigError(
                "bias needs a normalized state; pass --normalize or fix the spec moduli");
        }
        try {
            state = apply_bias(state, bias);
        } catch (const EmptyGroup& e) {
            throw ConfigError(e.what());
        }
    }

    const json cfg{{"spec", a.spec_path},      {"samples", a.samples},
                   {"seed", a.seed},           {"bias_variant", lower(a.bias_variant)},
                   {"beta", beta_json(bias.strength)}, {"normalize", a.normalize}};

    RandomStream rng(a.seed);
    std::vector<std::uint64_t> counts(state.size(), 0);
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < state.size(); ++i) index_of[state[i].label] = i;
    for (std::uint64_t s = 0; s < a.samples; ++s) {
        ++counts[index_of[reduce(state, rng).label]];
    }

    std::cout << "reduction sampling\n"
              << "config : " << cfg.dump() << "\n"
              << "samples : " << a.samples << "\n"
              << "label  count  frequency\n";
    char line[160];
    for (std::size_t i = 0; i < state.size(); ++i) {
        std::snprintf(line, sizeof(line), "%-6s %6llu  %.9g\n", state[i].label.c_str(),
                      static_cast<unsigned long long>(counts[i]),
                      static_cast<double>(counts[i]) / static_cast<double>(a.samples));
        std::cout << line;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "qrlab -- stochastic-reduction laboratory bench: selector replication, "
        "reference verification, detection planning, velocity audits, lineage "
        "survival, and reduction sampling"};
    app.require_subcommand(1);

    ReplicateArgs rep;
    CLI::App* replicate = app.add_subcommand(
        "replicate", "run N two-part selector trials and write trials.csv plus a report");
    rep.options["seed"] = replicate->add_option("--seed", rep.seed, "master seed");
    rep.options["trials"] = replicate->add_option("--trials", rep.trials, "trial count");
    rep.options["bias_variant"] =
        replicate->add_option("--bias-variant", rep.bias_variant, "original|modified");
    rep.options["beta"] = replicate->add_option("--beta", rep.beta, "bias strength or 'inf'");
    rep.options["origin"] =
        replicate->add_option("--origin", rep.origin, "trial-state origin tag: external|cm");
    rep.options["rate_l"] = replicate->add_option("--rate-l", rep.rate_l, "left counter rate");
    rep.options["rate_r"] = replicate->add_option("--rate-r", rep.rate_r, "right counter rate");
    rep.options["threads"] = replicate->add_option("--threads", rep.threads, "worker threads");
    rep.options["threshold"] =
        replicate->add_option("--threshold", rep.threshold, "decision threshold in sigma units");
    rep.options["out"] = replicate->add_option("--out", rep.out, "output directory");
    rep.options["format"] =
        replicate->add_option("--format", rep.format, "report flavor: csv|json-report");
    replicate->add_option("--config", rep.config_path, "JSON config file (flags override)");

    CheckArgs chk;
    CLI::App* check = app.add_subcommand(
        "check", "verify the built-in reference run's internal identities");
    chk.options["n"] = check->add_option("--n", chk.n, "trials");
    chk.options["n_s"] = check->add_option("--n-s", chk.n_s, "part-1 shocks");
    chk.options["n_l"] = check->add_option("--n-l", chk.n_l, "part-2 left lamps");
    chk.options["u"] = check->add_option("--u", chk.u, "up steps");
    chk.options["d"] = check->add_option("--d", chk.d, "down steps");
    check->add_option("--config", chk.config_path, "JSON config file (flags override)");

    PowerArgs pow;
    CLI::App* power = app.add_subcommand(
        "power", "trials required to detect a per-trial probability shift");
    pow.options["delta"] = power->add_option("--delta", pow.delta, "per-trial shift");
    pow.options["k"] = power->add_option("--k", pow.k, "significance target in sigma");
    power->add_option("--config", pow.config_path, "JSON config file (flags override)");

    PeptideArgs pep;
    CLI::App* peptide = app.add_subcommand(
        "peptide", "minimum velocity uncertainty of a localized particle, with claim audit");
    pep.options["mass_u"] = peptide->add_option("--mass-u", pep.mass_u, "mass in u");
    pep.options["dx"] = peptide->add_option("--dx", pep.dx, "position uncertainty in metres");
    pep.options["time"] = peptide->add_option("--time", pep.time, "ballistic drift time in s");
    pep.options["claimed"] =
        peptide->add_option("--claimed", pep.claimed, "claimed spread in metres (0 = no audit)");
    peptide->add_option("--config", pep.config_path, "JSON config file (flags override)");

    EvolveArgs evo;
    CLI::App* evolve = app.add_subcommand(
        "evolve", "survival curves for conscious/autonomic/tandem escape lineages");
    evo.options["seed"] = evolve->add_option("--seed", evo.seed, "master seed");
    evo.options["population"] =
        evolve->add_option("--population", evo.population, "organisms per lineage");
    evo.options["generations"] =
        evolve->add_option("--generations", evo.generations, "encounters per organism");
    evo.options["beta"] = evolve->add_option("--beta", evo.beta, "bias strength or 'inf'");
    evo.options["bias_variant"] =
        evolve->add_option("--bias-variant", evo.bias_variant, "original|modified");
    evo.options["bonus"] = evolve->add_option("--bonus", evo.bonus, "autonomic escape bonus");
    evo.options["hazard"] =
        evolve->add_option("--hazard", evo.hazard, "death probability per continued contact");
    evo.options["association"] =
        evolve->add_option("--association", evo.association, "valence wiring: correct|wrong");
    evo.options["out"] = evolve->add_option("--out", evo.out, "output directory");
    evolve->add_option("--config", evo.config_path, "JSON config file (flags override)");

    ReduceArgs red;
    CLI::App* reduce_cmd = app.add_subcommand(
        "reduce", "sample reductions of a superposition described in a JSON spec");
    red.options["spec"] =
        reduce_cmd->add_option("--spec", red.spec_path, "superposition spec file");
    red.options["samples"] = reduce_cmd->add_option("--samples", red.samples, "sample count");
    red.options["seed"] = reduce_cmd->add_option("--seed", red.seed, "master seed");
    red.options["bias_variant"] =
        reduce_cmd->add_option("--bias-variant", red.bias_variant, "original|modified");
    red.options["beta"] =
        reduce_cmd->add_option("--beta", red.beta, "bias strength or 'inf' (0 = no bias)");
    red.options["normalize"] =
        reduce_cmd->add_flag("--normalize", red.normalize, "normalize the spec state first");
    reduce_cmd->add_option("--config", red.config_path, "JSON config file (flags override)");

    try {
        app.parse(argc, argv);
        if (replicate->parsed()) return cmd_replicate(rep);
        if (check->parsed()) return cmd_check(chk);
        if (power->parsed()) return cmd_power(pow);
        if (peptide->parsed()) return cmd_peptide(pep);
        if (evolve->parsed()) return cmd_evolve(evo);
        if (reduce_cmd->parsed()) return cmd_reduce(red);
        std::cerr << "no subcommand selected\n";
        return kExitConfig;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
