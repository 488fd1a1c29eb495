// Command-line driver for the mixprior library: build model classes,
// construct discrete priors, evaluate log-loss, verify regret bounds and run
// the adversarial lower-bound probe.
//
// Exit codes: 0 success / all rows pass, 1 bound violations, 2 input error,
// 3 enumeration budget exceeded, 4 artifact consistency (digest) mismatch.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <mixprior/mixprior.hpp>

namespace {

using mixprior::json;

json load_json(const std::string &path) {
    return json::parse(mixprior::read_file(path));
}

void write_with_manifest(const std::string &out_path, const std::string &content,
                         const std::vector<std::pair<std::string, std::string>> &inputs) {
    mixprior::atomic_write(out_path, content);
    auto manifest = mixprior::make_manifest(
        inputs, {{std::filesystem::path(out_path).filename().string(),
                  mixprior::digest_hex(content)}});
    mixprior::atomic_write(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

int cmd_build_class(const std::string &spec_path, const std::string &out_path) {
    auto model_class = mixprior::build_class(load_json(spec_path));
    std::string content = mixprior::class_to_json(model_class).dump(2) + "\n";
    write_with_manifest(out_path, content,
                        {{spec_path, mixprior::file_digest(spec_path)}});
    std::cout << model_class.size() << " measures\n";
    return 0;
}

int cmd_construct(const std::string &class_path, const std::string &rho_path,
                  int horizon, const std::string &out_path) {
    auto model_class = mixprior::build_class(load_json(class_path));
    auto rho = mixprior::measure_from_json(load_json(rho_path));
    auto prior = mixprior::assemble_prior(model_class, rho, horizon);
    std::string content =
        mixprior::prior_to_json(prior, mixprior::class_digest(model_class), horizon)
            .dump(2) +
        "\n";
    write_with_manifest(out_path, content,
                        {{class_path, mixprior::file_digest(class_path)},
                         {rho_path, mixprior::file_digest(rho_path)}});
    std::cout << prior.components().size() << " components, total weight "
              << mixprior::format_double(prior.total_weight()) << "\n";
    return 0;
}

int cmd_evaluate(const std::string &mu_path, const std::string &rho_path, int horizon,
                 std::size_t mc_samples, std::uint64_t seed,
                 const std::string &out_path) {
    auto mu = mixprior::measure_from_json(load_json(mu_path));
    auto rho = mixprior::measure_from_json(load_json(rho_path));
    json result{{"mu", mu->identity()}, {"rho", rho->identity()}, {"n", horizon}};
    if (mc_samples > 0) {
        auto est = mixprior::mc_loss(*mu, *rho, horizon, mc_samples, seed);
        result["method"] = "monte-carlo";
        result["loss_bits"] = est.infinite ? json("inf") : json(est.mean);
        result["std_error_bits"] = est.std_error;
        result["samples"] = est.sample_count;
        result["seed"] = seed;
    } else {
        double loss = mixprior::cumulative_kl(*mu, *rho, horizon);
        result["method"] = "exact";
        result["loss_bits"] = std::isinf(loss) ? json("inf") : json(loss);
    }
    std::string content = result.dump(2) + "\n";
    if (out_path.empty())
        std::cout << content;
    else
        mixprior::atomic_write(out_path, content);
    return 0;
}

int cmd_verify(const std::string &prior_path, const std::string &class_path,
               const std::string &rho_path, int horizon, const std::string &out_path) {
    auto loaded = mixprior::prior_from_json(load_json(prior_path));
    auto model_class = mixprior::build_class(load_json(class_path));
    auto rho = mixprior::measure_from_json(load_json(rho_path));
    std::string digest = mixprior::class_digest(model_class);
    if (!loaded.class_digest.empty() && loaded.class_digest != digest)
        throw mixprior::ConsistencyError("prior dump was built for class " +
                                         loaded.class_digest + ", got " + digest);
    if (loaded.max_horizon > 0 && horizon > loaded.max_horizon)
        throw mixprior::InputError("prior dump covers horizons up to " +
                                   std::to_string(loaded.max_horizon));

    auto reports = mixprior::verify_regret_bound(model_class, rho, loaded.prior, horizon);
    std::ostringstream csv;
    mixprior::write_report_csv(csv, reports);
    mixprior::atomic_write(out_path, csv.str());

    std::size_t failures = 0;
    for (const auto &r : reports)
        if (!r.pass)
            ++failures;
    std::cout << reports.size() << " rows, " << failures << " failures\n";
    return failures == 0 ? 0 : 1;
}

int cmd_lower_bound(const std::string &prior_path, const std::string &profile, int k_max,
                    const std::string &out_path, const std::string &plot_path) {
    std::unique_ptr<mixprior::DiscretePrior> prior;
    if (!prior_path.empty()) {
        auto loaded = mixprior::prior_from_json(load_json(prior_path));
        prior = std::make_unique<mixprior::DiscretePrior>(std::move(loaded.prior));
    } else if (profile == "uniform") {
        prior = std::make_unique<mixprior::DiscretePrior>(
            mixprior::uniform_dirac_prior(k_max));
    } else if (profile == "geometric") {
        prior = std::make_unique<mixprior::DiscretePrior>(
            mixprior::geometric_prefix_prior(k_max));
    } else if (profile == "single-delta") {
        prior = std::make_unique<mixprior::DiscretePrior>(mixprior::single_delta_prior());
    } else {
        throw mixprior::InputError("need --prior or --profile "
                                   "uniform|geometric|single-delta");
    }

    auto curve = mixprior::theta_curve(*prior, k_max);
    mixprior::atomic_write(out_path, mixprior::curve_to_json(curve).dump(2) + "\n");
    if (!plot_path.empty()) {
        std::ostringstream tsv;
        tsv << "n\twitness_regret_bits\n";
        for (const auto &w : curve)
            tsv << w.n << '\t'
                << (std::isinf(w.actual_regret) ? "inf"
                                                : mixprior::format_double(w.actual_regret))
                << '\n';
        mixprior::atomic_write(plot_path, tsv.str());
    }
    std::cout << curve.size() << " probe times\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"discrete-prior Bayesian predictors with verifiable regret bounds"};
    app.require_subcommand(1);

    std::string spec_path, class_path, rho_path, prior_path, mu_path;
    std::string out_path, plot_path, profile;
    int horizon = 0, k_max = 0;
    std::size_t mc_samples = 0;
    std::uint64_t seed = 1;

    auto *build = app.add_subcommand("build-class", "expand a class spec to canonical form");
    build->add_option("--spec", spec_path, "class spec JSON")->required();
    build->add_option("--out", out_path, "canonical class file")->required();

    auto *construct = app.add_subcommand("construct", "build the covering prior");
    construct->add_option("--class", class_path, "class file")->required();
    construct->add_option("--rho", rho_path, "reference predictor spec")->required();
    construct->add_option("--horizon", horizon, "max horizon N (>= 3)")->required();
    construct->add_option("--out", out_path, "prior dump")->required();

    auto *evaluate = app.add_subcommand("evaluate", "cumulative KL of one pair");
    evaluate->add_option("--mu", mu_path, "data measure spec")->required();
    evaluate->add_option("--rho", rho_path, "predictor spec")->required();
    evaluate->add_option("--horizon", horizon, "horizon n")->required();
    evaluate->add_option("--mc", mc_samples, "Monte Carlo sample count (0 = exact)");
    evaluate->add_option("--seed", seed, "Monte Carlo seed");
    evaluate->add_option("--out", out_path, "result JSON (stdout if omitted)");

    auto *verify = app.add_subcommand("verify", "check the regret bound per (measure, n)");
    verify->add_option("--prior", prior_path, "prior dump")->required();
    verify->add_option("--class", class_path, "class file")->required();
    verify->add_option("--rho", rho_path, "reference predictor spec")->required();
    verify->add_option("--horizon", horizon, "max horizon N")->required();
    verify->add_option("--out", out_path, "CSV report")->required();

    auto *lower = app.add_subcommand("lower-bound", "adversarial witness curve");
    lower->add_option("--prior", prior_path, "prior dump over the Dirac class");
    lower->add_option("--profile", profile, "uniform | geometric | single-delta");
    lower->add_option("--k", k_max, "class truncation K")->required();
    lower->add_option("--out", out_path, "curve JSON")->required();
    lower->add_option("--plot-data", plot_path, "two-column TSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed())
            return cmd_build_class(spec_path, out_path);
        if (construct->parsed())
            return cmd_construct(class_path, rho_path, horizon, out_path);
        if (evaluate->parsed())
            return cmd_evaluate(mu_path, rho_path, horizon, mc_samples, seed, out_path);
        if (verify->parsed())
            return cmd_verify(prior_path, class_path, rho_path, horizon, out_path);
        if (lower->parsed())
            return cmd_lower_bound(prior_path, profile, k_max, out_path, plot_path);
    } catch (const mixprior::BudgetError &e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const mixprior::ConsistencyError &e) {
        std::cerr << "consistency error: " << e.what() << "\n";
        return 4;
    } catch (const mixprior::InputError &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
