#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "honeytrap/arff.hpp"
#include "honeytrap/decorate.hpp"
#include "honeytrap/errors.hpp"
#include "honeytrap/eval.hpp"
#include "honeytrap/features.hpp"
#include "honeytrap/model_io.hpp"
#include "honeytrap/simnet.hpp"
#include "honeytrap/simnet_io.hpp"
#include "manifest.hpp"

namespace honeytrap::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::uint64_t seed = 42;
    bool seed_given = false;
    std::size_t jobs = 1;
    fs::path out = ".";
};

struct LearnOptions {
    fs::path data;
    std::string class_name = "class";
    decorate::DecorateParams params;
    std::size_t k = 10;
    std::string positive = "mal";
    double fn_cost = 20.0;
    double fp_cost = 1.0;
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError(fmt::format("cannot create directory '{}': {}", dir.string(), ec.message()));
    }
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.flush();
    if (!out) {
        throw IoError(fmt::format("cannot write '{}'", path.string()));
    }
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
    std::ostringstream buf;
    fn(buf);
    write_file(path, buf.str());
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot read '{}'", path.string()));
    }
    return in;
}

arff::Dataset load_dataset(const fs::path& path, std::string_view class_name) {
    auto in = open_input(path);
    return arff::designate_class(arff::parse(in), class_name);
}

nlohmann::json params_json(const decorate::DecorateParams& p) {
    return {{"c_size", p.c_size}, {"i_max", p.i_max}, {"r_size", p.r_size}, {"seed", p.seed},
            {"min_leaf", p.tree.min_leaf}};
}

void add_learn_options(CLI::App* cmd, LearnOptions& opt, bool with_data = true) {
    if (with_data) {
        cmd->add_option("--data", opt.data, "ARFF dataset")->required();
        cmd->add_option("--class", opt.class_name, "name of the class attribute")->capture_default_str();
    }
    cmd->add_option("--c-size", opt.params.c_size, "desired ensemble size")->capture_default_str();
    cmd->add_option("--i-max", opt.params.i_max, "maximum DECORATE trials")->capture_default_str();
    cmd->add_option("--r-size", opt.params.r_size, "artificial examples as a fraction of the training set")
        ->capture_default_str();
    cmd->add_option("--min-leaf", opt.params.tree.min_leaf, "minimum leaf weight of the base trees")
        ->capture_default_str();
}

void add_eval_options(CLI::App* cmd, LearnOptions& opt) {
    cmd->add_option("--k", opt.k, "cross-validation folds")->capture_default_str();
    cmd->add_option("--positive", opt.positive, "positive class for curves and fp_rate")->capture_default_str();
    cmd->add_option("--fn-cost", opt.fn_cost, "cost of a missed positive in the cost/benefit sweep")
        ->capture_default_str();
    cmd->add_option("--fp-cost", opt.fp_cost, "cost of a false alarm in the cost/benefit sweep")
        ->capture_default_str();
}

std::string class_counts(const std::vector<simnet::Profile>& profiles) {
    std::size_t mal = 0;
    for (const auto& p : profiles) {
        mal += p.truth_label == simnet::Label::Malicious ? 1 : 0;
    }
    return fmt::format("mal {}, leg {}", mal, profiles.size() - mal);
}

// --- pipeline steps, shared by the individual commands and demo ---

simnet::SimConfig effective_config(const std::string& config_path, const Globals& g) {
    simnet::SimConfig config = config_path.empty() ? simnet::SimConfig{} : simnet::load_config(config_path);
    if (g.seed_given) {
        config.seed = g.seed;
    }
    config.validate();
    return config;
}

void step_simulate(const simnet::SimConfig& config, const fs::path& dir, Manifest& manifest, std::ostream& out) {
    const auto sim = simnet::run_simulation(config);
    const auto harvested =
        simnet::harvest(sim.profiles, sim.events, config.harvest_cap, config.seed, config.control_fraction);
    const auto stats = simnet::honeypot_stats(sim.events, config.n_honeypots, config.n_days);

    std::vector<simnet::Profile> trapped;
    for (const auto& p : sim.profiles) {
        if (p.honeypot_interactions > 0) {
            trapped.push_back(p);
        }
    }

    write_file(dir / "config.conf", simnet::serialize_config(config));
    write_with(dir / "profiles.tsv", [&](std::ostream& o) { simnet::write_profiles(o, sim.profiles); });
    write_with(dir / "harvested.tsv", [&](std::ostream& o) { simnet::write_profiles(o, harvested); });
    write_with(dir / "events.csv", [&](std::ostream& o) { simnet::write_events(o, sim.events); });
    write_with(dir / "honeypots.csv", [&](std::ostream& o) { simnet::write_honeypot_stats(o, stats); });
    for (const char* name : {"config.conf", "profiles.tsv", "harvested.tsv", "events.csv", "honeypots.csv"}) {
        manifest.add_output(dir / name);
    }

    out << fmt::format("simulated {} profiles ({}), {} honeypot contacts\n", sim.profiles.size(),
                       class_counts(sim.profiles), sim.events.size());
    out << fmt::format("trapped {} profiles ({})\n", trapped.size(), class_counts(trapped));
    out << fmt::format("harvested {} profiles ({})\n", harvested.size(), class_counts(harvested));
}

features::FeatureGroup parse_group(std::string_view name) {
    if (name == "full") {
        return features::FeatureGroup::combined();
    }
    return features::FeatureGroup::parse(name);
}

arff::Dataset step_extract(const fs::path& profiles_path, std::string_view group, const fs::path& dir,
                           Manifest& manifest, std::ostream& out) {
    auto in = open_input(profiles_path);
    const auto profiles = simnet::read_profiles(in);
    std::vector<features::FeatureVector> vectors;
    vectors.reserve(profiles.size());
    for (const auto& p : profiles) {
        vectors.push_back(features::extract(p));
    }
    arff::Dataset dataset = features::build_dataset(vectors);
    if (group != "full") {
        dataset = features::project_dataset(dataset, parse_group(group));
    }
    write_with(dir / "dataset.arff", [&](std::ostream& o) { arff::write(o, dataset); });
    write_with(dir / "features.csv", [&](std::ostream& o) { features::write_csv(o, vectors); });
    manifest.add_output(dir / "dataset.arff");
    manifest.add_output(dir / "features.csv");
    out << fmt::format("extracted {} instances, {} attributes (group {})\n", dataset.size(),
                       dataset.num_attributes(), group);
    return dataset;
}

void step_train(const arff::Dataset& dataset, const decorate::DecorateParams& params, const fs::path& dir,
                Manifest& manifest, std::ostream& out) {
    const auto model = decorate::train_decorate(dataset, params);
    write_with(dir / "model.txt", [&](std::ostream& o) { decorate::save_model(o, model); });
    manifest.add_output(dir / "model.txt");
    out << fmt::format("trained {} members in {} trials, training error {:.4f}\n", model.size(), model.trials(),
                       model.training_error());
}

void write_evaluation(const eval::EvalReport& report, const std::vector<eval::Prediction>& predictions,
                      const LearnOptions& opt, std::string_view title, const fs::path& dir, Manifest& manifest,
                      std::ostream& out) {
    const auto cost = eval::CostMatrix::binary(report.positive, opt.fn_cost, opt.fp_cost);
    const auto cb = eval::cost_benefit(predictions, report.labels, report.positive, cost);
    const std::string text =
        eval::format_report(report, title) + "\n" + eval::format_cost_benefit(cb, report.labels, report.positive);
    write_file(dir / "report.txt", text);
    write_file(dir / "report.json", eval::report_json(report, &cb));
    write_with(dir / "threshold_curve.csv",
               [&](std::ostream& o) { eval::write_threshold_curve(o, report.threshold_curve); });
    write_with(dir / "margin_curve.csv", [&](std::ostream& o) { eval::write_margin_curve(o, report.margin_curve); });
    for (const char* name : {"report.txt", "report.json", "threshold_curve.csv", "margin_curve.csv"}) {
        manifest.add_output(dir / name);
    }
    out << text;
}

void step_cross_validate(const arff::Dataset& dataset, const LearnOptions& opt, const Globals& g,
                         const fs::path& dir, Manifest& manifest, std::ostream& out) {
    const auto cv = eval::cross_validate(dataset, opt.params, opt.k, g.seed, opt.positive, g.jobs);
    write_evaluation(cv.report, cv.predictions, opt, fmt::format("Stratified cross-validation ({} folds)", opt.k),
                     dir, manifest, out);
}

void step_ablate(const arff::Dataset& dataset, const LearnOptions& opt, const Globals& g, const fs::path& dir,
                 Manifest& manifest, std::ostream& out) {
    const std::vector<features::FeatureGroup> groups{features::FeatureGroup::traditional(),
                                                     features::FeatureGroup::honeypot_based(),
                                                     features::FeatureGroup::combined()};
    const auto rows = eval::ablation(dataset, groups, opt.params, opt.k, g.seed, opt.positive, g.jobs);
    write_with(dir / "ablation.csv", [&](std::ostream& o) { eval::write_ablation_csv(o, rows); });
    manifest.add_output(dir / "ablation.csv");
    out << "=== Feature-set ablation ===\n\n" << eval::format_ablation(rows);
}

Manifest begin(std::string command, const std::vector<std::string>& args, const Globals& g) {
    ensure_dir(g.out);
    Manifest m;
    m.command = std::move(command);
    m.args = args;
    m.seed = g.seed;
    return m;
}

void finish(const Manifest& manifest, const Globals& g) {
    write_manifest(g.out / fmt::format("{}.manifest.json", manifest.command), manifest);
}

int replay(const fs::path& manifest_path, std::ostream& out, std::ostream& err) {
    const Manifest recorded = read_manifest(manifest_path);
    if (recorded.command == "replay") {
        throw ConfigError("a replay manifest cannot itself be replayed");
    }
    for (const auto& [path, hash] : recorded.inputs) {
        if (sha256_file(path) != hash) {
            err << fmt::format("warning: input '{}' changed since the manifest was written\n", path);
        }
    }
    std::ostringstream sink;
    const int code = run(recorded.args, sink, err);
    if (code != kExitOk) {
        return code;
    }
    std::size_t mismatches = 0;
    for (const auto& [path, hash] : recorded.outputs) {
        const std::string now = fs::exists(path) ? sha256_file(path) : std::string("<missing>");
        if (now != hash) {
            ++mismatches;
            err << fmt::format("mismatch: {} (recorded {}, now {})\n", path, hash, now);
        }
    }
    if (mismatches > 0) {
        err << fmt::format("replay of '{}': {} of {} outputs differ\n", recorded.command, mismatches,
                           recorded.outputs.size());
        return kExitMismatch;
    }
    out << fmt::format("replay of '{}': {} outputs identical\n", recorded.command, recorded.outputs.size());
    return kExitOk;
}

int exit_code_for(const Error& e) {
    return e.category() == Error::Category::Environment ? kExitEnvironment : kExitInput;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Honeypot-based malicious profile detection pipeline", "honeytrap"};
    app.set_version_flag("--version", HONEYTRAP_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    auto* seed_opt = app.add_option("--seed", g.seed, "seed for simulation, folds and DECORATE")->capture_default_str();
    app.add_option("--jobs", g.jobs, "parallel cross-validation folds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", g.out, "output directory")->capture_default_str();

    std::string config_path;
    auto* simulate = app.add_subcommand("simulate", "run the honeypot simulation and harvest profiles");
    simulate->add_option("--config", config_path, "simulation config file (defaults are built in)");

    fs::path profiles_path;
    std::string group = "full";
    auto* extract = app.add_subcommand("extract", "compute feature vectors and write an ARFF dataset");
    extract->add_option("--profiles", profiles_path, "profiles file written by simulate")->required();
    extract->add_option("--group", group, "full, combined, traditional or honeypot")
        ->check(CLI::IsMember({"full", "combined", "traditional", "honeypot"}))
        ->capture_default_str();

    LearnOptions opt;
    auto* train = app.add_subcommand("train", "train a DECORATE ensemble");
    add_learn_options(train, opt);

    fs::path model_path;
    auto* evaluate = app.add_subcommand("evaluate", "cross-validate, or score a saved model on a dataset");
    add_learn_options(evaluate, opt);
    add_eval_options(evaluate, opt);
    evaluate->add_option("--model", model_path, "score this model instead of cross-validating");

    auto* ablate = app.add_subcommand("ablate", "cross-validate each feature group");
    add_learn_options(ablate, opt);
    add_eval_options(ablate, opt);

    auto* predict = app.add_subcommand("predict", "write class probabilities of a saved model");
    predict->add_option("--model", model_path, "model file")->required();
    predict->add_option("--data", opt.data, "ARFF dataset")->required();
    predict->add_option("--class", opt.class_name, "name of the class attribute")->capture_default_str();

    auto* demo = app.add_subcommand("demo", "simulate, extract, cross-validate and ablate in one go");
    demo->add_option("--config", config_path, "simulation config file (defaults are built in)");
    add_learn_options(demo, opt, false);
    add_eval_options(demo, opt);

    fs::path manifest_path;
    auto* replay_cmd = app.add_subcommand("replay", "re-run a command from its manifest and compare hashes");
    replay_cmd->add_option("--manifest", manifest_path, "manifest written by an earlier run")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInput;
    }
    g.seed_given = seed_opt->count() > 0;
    opt.params.seed = g.seed;

    try {
        if (replay_cmd->parsed()) {
            return replay(manifest_path, out, err);
        }
        if (simulate->parsed()) {
            const auto config = effective_config(config_path, g);
            auto m = begin("simulate", args, g);
            m.seed = config.seed;
            m.config = {{"config_file", config_path}};
            if (!config_path.empty()) {
                m.add_input(config_path);
            }
            step_simulate(config, g.out, m, out);
            finish(m, g);
        } else if (extract->parsed()) {
            auto m = begin("extract", args, g);
            m.config = {{"group", group}};
            m.add_input(profiles_path);
            (void)step_extract(profiles_path, group, g.out, m, out);
            finish(m, g);
        } else if (train->parsed()) {
            auto m = begin("train", args, g);
            m.config = params_json(opt.params);
            m.add_input(opt.data);
            step_train(load_dataset(opt.data, opt.class_name), opt.params, g.out, m, out);
            finish(m, g);
        } else if (evaluate->parsed()) {
            auto m = begin("evaluate", args, g);
            m.config = params_json(opt.params);
            m.config["k"] = opt.k;
            m.config["positive"] = opt.positive;
            m.config["fn_cost"] = opt.fn_cost;
            m.config["fp_cost"] = opt.fp_cost;
            m.add_input(opt.data);
            const auto dataset = load_dataset(opt.data, opt.class_name);
            if (model_path.empty()) {
                step_cross_validate(dataset, opt, g, g.out, m, out);
            } else {
                m.add_input(model_path);
                auto in = open_input(model_path);
                const auto model = decorate::load_model(in);
                decorate::check_compatible(model, dataset);
                std::vector<eval::Prediction> predictions;
                for (std::size_t r = 0; r < dataset.size(); ++r) {
                    if (const auto c = dataset.class_of(r)) {
                        predictions.push_back({model.predict(dataset.row(r)), *c});
                    }
                }
                const auto report = eval::make_report(predictions, model.class_labels(),
                                                      eval::class_index_of(dataset, opt.positive));
                write_evaluation(report, predictions, opt, "Evaluation on supplied data", g.out, m, out);
            }
            finish(m, g);
        } else if (ablate->parsed()) {
            auto m = begin("ablate", args, g);
            m.config = params_json(opt.params);
            m.config["k"] = opt.k;
            m.config["positive"] = opt.positive;
            m.add_input(opt.data);
            step_ablate(load_dataset(opt.data, opt.class_name), opt, g, g.out, m, out);
            finish(m, g);
        } else if (predict->parsed()) {
            auto m = begin("predict", args, g);
            m.add_input(model_path);
            m.add_input(opt.data);
            auto in = open_input(model_path);
            const auto model = decorate::load_model(in);
            const auto dataset = load_dataset(opt.data, opt.class_name);
            decorate::check_compatible(model, dataset);
            write_with(g.out / "predictions.csv", [&](std::ostream& o) {
                o << "row,predicted";
                for (const auto& label : model.class_labels()) {
                    o << ",p_" << label;
                }
                o << '\n';
                for (std::size_t r = 0; r < dataset.size(); ++r) {
                    const auto dist = model.predict(dataset.row(r));
                    o << r << ',' << model.class_labels()[decorate::argmax(dist)];
                    for (double p : dist) {
                        o << ',' << fmt::format("{:.6f}", p);
                    }
                    o << '\n';
                }
            });
            m.add_output(g.out / "predictions.csv");
            out << fmt::format("wrote {} predictions\n", dataset.size());
            finish(m, g);
        } else if (demo->parsed()) {
            const auto config = effective_config(config_path, g);
            auto m = begin("demo", args, g);
            m.seed = config.seed;
            m.config = params_json(opt.params);
            m.config["k"] = opt.k;
            m.config["config_file"] = config_path;
            if (!config_path.empty()) {
                m.add_input(config_path);
            }
            step_simulate(config, g.out, m, out);
            const auto dataset = step_extract(g.out / "harvested.tsv", "full", g.out, m, out);
            out << '\n';
            // creation_date is an export column only; learning uses the feature groups
            step_cross_validate(features::project_dataset(dataset, features::FeatureGroup::combined()), opt, g,
                                g.out, m, out);
            out << '\n';
            step_ablate(dataset, opt, g, g.out, m, out);
            finish(m, g);
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitMismatch;
    }
}

}  // namespace honeytrap::cli
