#include "adriana/data_ingest.hpp"
#include "adriana/error.hpp"
#include "adriana/metrics.hpp"
#include "adriana/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace adriana;

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

PipelineConfig load_config(const GlobalOptions& options) {
    PipelineConfig config;
    if (!options.config_path.empty())
        config = pipeline_config_from_tree(ConfigTree::parse_file(options.config_path));
    if (options.seed) config.seed = *options.seed;
    if (options.out_dir) config.out_dir = *options.out_dir;
    return config;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << content;
}

struct PreparedSeries {
    std::string tag;
    SeriesKind kind;
    std::vector<std::int64_t> cumulative;
    DailySeries daily;
    ScalerParams scaler;
    std::vector<double> scaled;
    std::size_t prefix_len = 0;
};

std::vector<PreparedSeries> prepare(const PipelineConfig& config, bool transform) {
    const std::pair<const char*, SeriesKind> jobs[] = {
        {"confirmed", SeriesKind::Confirmed},
        {"recovered", SeriesKind::Recovered},
        {"deaths", SeriesKind::Death},
    };
    const std::string* paths[] = {&config.confirmed_path, &config.recovered_path,
                                  &config.deaths_path};
    std::vector<PreparedSeries> out;
    for (std::size_t s = 0; s < 3; ++s) {
        if (paths[s]->empty())
            throw Error(ErrorCode::InvalidConfig,
                        std::string("missing data path for ") + jobs[s].first);
        PreparedSeries prepared;
        prepared.tag = jobs[s].first;
        prepared.kind = jobs[s].second;
        const auto parsed = parse_jhu_csv(read_file(*paths[s]));
        const CumulativeSeries selected = select_country(parsed, config.country);
        prepared.cumulative = selected.values;
        prepared.daily = to_daily(selected, jobs[s].second).series;
        if (transform) {
            const DifferencedSeries diffs = difference(prepared.daily.values, 1);
            prepared.prefix_len = static_cast<std::size_t>(
                config.train_fraction * static_cast<double>(diffs.values.size()));
            prepared.scaler = minmax_fit(
                std::span<const double>(diffs.values.data(), prepared.prefix_len));
            prepared.scaled = minmax_apply(diffs.values, prepared.scaler);
        }
        out.push_back(std::move(prepared));
    }
    return out;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::unique_ptr<Model> train_one(const PipelineConfig& config, const PreparedSeries& series,
                                 std::uint64_t stream, const ModelSpec& base_spec,
                                 WindowedDataset* test_out) {
    ModelSpec spec = base_spec;
    spec.hyper["seed"] = static_cast<double>(mix_seed(config.seed, stream));
    const auto window = static_cast<std::size_t>(spec.get("window_size", 9.0));
    if (series.scaled.size() <= window + 1)
        throw Error(ErrorCode::SeriesTooShort, "series shorter than the window");
    const WindowedDataset dataset = make_windows(series.scaled, window);
    auto [train, test] = chrono_split(dataset, config.train_fraction);
    if (test_out) *test_out = std::move(test);
    const bool neural = spec.kind == ModelKind::Mlp || spec.kind == ModelKind::Gru ||
                        spec.kind == ModelKind::Lstm;
    if (neural && train.size() >= 10) {
        const std::size_t core = train.size() - train.size() / 10;
        return fit_model(spec, slice(train, 0, core), slice(train, core, train.size()));
    }
    return fit_model(spec, train, WindowedDataset{});
}

int cmd_ingest(const PipelineConfig& config) {
    for (const auto& series : prepare(config, false))
        write_file(config.out_dir + "/" + series.tag + "_daily.csv",
                   to_canonical_csv(series.daily));
    std::cout << "wrote daily series for " << config.country << " to " << config.out_dir
              << '\n';
    return 0;
}

int cmd_analyze(const PipelineConfig& config) {
    std::ostringstream adf_out;
    adf_out.precision(10);
    std::ostringstream acf_csv;
    acf_csv.precision(17);
    acf_csv << "series,lag,value,band\n";
    std::ostringstream pacf_csv;
    pacf_csv.precision(17);
    pacf_csv << "series,lag,value\n";
    for (const auto& series : prepare(config, false)) {
        std::vector<double> cumulative(series.cumulative.begin(), series.cumulative.end());
        const AdfResult cumulative_adf = adf_test(cumulative);
        const AdfResult daily_adf = adf_test(series.daily.values);
        adf_out << series.tag << " cumulative statistic=" << cumulative_adf.statistic
                << " p=" << cumulative_adf.p_value << " lags=" << cumulative_adf.lags_used
                << " stationary_5pct=" << cumulative_adf.reject_unit_root_at_5pct << '\n';
        adf_out << series.tag << " daily statistic=" << daily_adf.statistic
                << " p=" << daily_adf.p_value << " lags=" << daily_adf.lags_used
                << " stationary_5pct=" << daily_adf.reject_unit_root_at_5pct << '\n';

        const std::size_t max_lag = std::min<std::size_t>(40, series.daily.values.size() / 2);
        const AcfResult correlations = acf(series.daily.values, max_lag);
        const auto partials = pacf(series.daily.values, max_lag);
        for (std::size_t lag = 0; lag <= max_lag; ++lag) {
            acf_csv << series.tag << ',' << lag << ',' << correlations.values[lag] << ','
                    << correlations.confidence_half_width << '\n';
            pacf_csv << series.tag << ',' << lag << ',' << partials[lag] << '\n';
        }
    }
    write_file(config.out_dir + "/acf.csv", acf_csv.str());
    write_file(config.out_dir + "/pacf.csv", pacf_csv.str());
    write_file(config.out_dir + "/adf.txt", adf_out.str());
    std::cout << adf_out.str();
    return 0;
}

int cmd_optimize(const PipelineConfig& config) {
    const auto series_list = prepare(config, true);
    for (std::size_t s = 0; s < series_list.size(); ++s) {
        const auto& series = series_list[s];
        const std::span<const double> prefix(series.scaled.data(), series.prefix_len);
        GaConfig ga;
        ga.population_size = config.ga_population;
        ga.generations = config.ga_generations;
        ga.gene_length = config.ga_gene_length;
        ga.seed = mix_seed(config.seed, 100 + s);
        ga.search_space = default_search_space(config.model.kind);
        const std::uint64_t fitness_seed = mix_seed(config.seed, 200 + s);
        const GaResult result =
            run_ga(ga, [&](const std::map<std::string, double>& hyper) {
                ModelSpec candidate{config.model.kind, hyper};
                candidate.hyper["seed"] = static_cast<double>(fitness_seed);
                const auto window = static_cast<std::size_t>(candidate.get("window_size", 9.0));
                if (prefix.size() <= window + config.cv_folds)
                    return std::numeric_limits<double>::infinity();
                try {
                    return evaluate_fitness(candidate, make_windows(prefix, window),
                                            config.cv_folds);
                } catch (const Error&) {
                    return std::numeric_limits<double>::infinity();
                }
            });

        std::ostringstream history;
        history.precision(17);
        history << "generation,best,mean\n";
        for (std::size_t g = 0; g < result.history.size(); ++g)
            history << g << ',' << result.history[g].best << ',' << result.history[g].mean
                    << '\n';
        write_file(config.out_dir + "/" + series.tag + "_ga_history.csv", history.str());

        std::ostringstream best;
        best.precision(17);
        best << "kind = \"" << to_string(config.model.kind) << "\"\n";
        best << "fitness = " << result.best_fitness << '\n';
        for (const auto& [key, value] : result.best_hyperparameters)
            best << key << " = " << value << '\n';
        write_file(config.out_dir + "/" + series.tag + "_best_params.toml", best.str());
        std::cout << series.tag << " best fitness " << result.best_fitness << '\n';
    }
    return 0;
}

int cmd_train(const PipelineConfig& config) {
    const auto series_list = prepare(config, true);
    for (std::size_t s = 0; s < series_list.size(); ++s) {
        const auto model = train_one(config, series_list[s], s, config.model, nullptr);
        std::ostringstream text;
        model->save(text);
        write_file(config.out_dir + "/" + series_list[s].tag + "_model.txt", text.str());
        std::cout << series_list[s].tag << " trained " << to_string(model->kind())
                  << ", final loss " << model->training_report().final_loss << '\n';
    }
    return 0;
}

int cmd_forecast(const PipelineConfig& config) {
    const auto series_list = prepare(config, true);
    for (std::size_t s = 0; s < series_list.size(); ++s) {
        const auto& series = series_list[s];
        std::unique_ptr<Model> model;
        const std::string model_path = config.out_dir + "/" + series.tag + "_model.txt";
        if (std::filesystem::exists(model_path)) {
            std::ifstream in(model_path);
            model = load_model(in);
        } else {
            model = train_one(config, series, s, config.model, nullptr);
        }
        const std::size_t window = model->window_size();
        if (series.scaled.size() < window)
            throw Error(ErrorCode::SeriesTooShort, "series shorter than the window");
        ScaleTrace trace;
        trace.scaler = series.scaler;
        trace.integration_tail = {series.daily.values.back()};
        const std::span<const double> last_window(
            series.scaled.data() + series.scaled.size() - window, window);
        const Forecast forecast =
            recursive_forecast(*model, last_window, config.horizon, trace);

        DailySeries forecast_series;
        forecast_series.region_name = series.daily.region_name;
        forecast_series.kind = series.kind;
        forecast_series.start_date = series.daily.start_date.plus_days(
            static_cast<std::int64_t>(series.daily.values.size()));
        forecast_series.values = forecast.values;
        write_file(config.out_dir + "/" + series.tag + "_forecast.csv",
                   to_canonical_csv(forecast_series));
        std::cout << series.tag << " forecast " << forecast.values.size() << " days\n";
    }
    return 0;
}

int cmd_evaluate(const PipelineConfig& config, const std::vector<std::string>& model_names) {
    std::vector<ModelKind> kinds;
    if (model_names.empty())
        kinds = {ModelKind::Lstm, ModelKind::Gru,  ModelKind::Mlp,   ModelKind::Linear,
                 ModelKind::Ar,   ModelKind::Tree, ModelKind::Forest, ModelKind::Boost,
                 ModelKind::SvrLinear, ModelKind::Arima110};
    else
        for (const auto& name : model_names) kinds.push_back(model_kind_from_string(name));

    const auto series_list = prepare(config, true);
    std::string metrics_csv = "series,model,scale,rmse,mae,r2\n";
    std::vector<EvalReport> mean_reports;
    for (const ModelKind kind : kinds) {
        ModelSpec spec = config.model;
        spec.kind = kind;
        double sum_rmse = 0.0, sum_mae = 0.0, sum_r2 = 0.0;
        for (std::size_t s = 0; s < series_list.size(); ++s) {
            WindowedDataset test;
            const auto model = train_one(config, series_list[s], s, spec, &test);
            std::vector<double> predicted(test.size());
            for (std::size_t i = 0; i < test.size(); ++i)
                predicted[i] = predict_tail(*model, test.inputs[i]);
            const double m_rmse = rmse(test.targets, predicted);
            const double m_mae = mae(test.targets, predicted);
            const double m_r2 = r2(test.targets, predicted);
            sum_rmse += m_rmse;
            sum_mae += m_mae;
            sum_r2 += m_r2;
            std::ostringstream row;
            row.precision(17);
            row << series_list[s].tag << ',' << to_string(kind) << ",normalized," << m_rmse
                << ',' << m_mae << ',' << m_r2 << '\n';
            metrics_csv += row.str();
        }
        EvalReport mean;
        mean.model_name = to_string(kind);
        mean.rmse = sum_rmse / 3.0;
        mean.mae = sum_mae / 3.0;
        mean.r2 = sum_r2 / 3.0;
        mean.scale = MetricScale::Normalized;
        mean_reports.push_back(mean);
        std::ostringstream row;
        row.precision(17);
        row << "mean," << to_string(kind) << ",normalized," << mean.rmse << ',' << mean.mae
            << ',' << mean.r2 << '\n';
        metrics_csv += row.str();
    }
    write_file(config.out_dir + "/metrics.csv", metrics_csv);

    std::string ranking_csv = "model,score,mean_rank\n";
    for (const auto& ranked : rank_models(mean_reports)) {
        std::ostringstream row;
        row << ranked.model_name << ',' << ranked.score << ',' << ranked.mean_rank << '\n';
        ranking_csv += row.str();
        std::cout << ranked.model_name << " score " << ranked.score << '\n';
    }
    write_file(config.out_dir + "/ranking.csv", ranking_csv);
    return 0;
}

int cmd_seir(const PipelineConfig& config, const std::vector<double>& init) {
    SeirState initial;
    if (init.size() == 4) {
        initial.s = init[0];
        initial.e = init[1];
        initial.i = init[2];
        initial.r = init[3];
    } else {
        initial.e = config.seir_initial_exposed;
        initial.i = config.seir_initial_infectious;
        initial.s = config.seir.population - initial.e - initial.i;
    }
    const SeirTrajectory trajectory = simulate(initial, config.seir, config.seir_horizon);
    std::ostringstream csv;
    csv.precision(17);
    csv << "day,s,e,i,r\n";
    for (std::size_t d = 0; d < trajectory.daily.size(); ++d) {
        const SeirState& state = trajectory.daily[d];
        csv << d << ',' << state.s << ',' << state.e << ',' << state.i << ',' << state.r
            << '\n';
    }
    write_file(config.out_dir + "/seir.csv", csv.str());
    std::cout << "R0 = " << r0(config.seir) << ", wrote " << trajectory.daily.size()
              << " days\n";
    return 0;
}

int cmd_des(const PipelineConfig& config) {
    SeirState initial;
    initial.e = config.seir_initial_exposed;
    initial.i = config.seir_initial_infectious;
    initial.s = config.seir.population - initial.e - initial.i;
    const SeirTrajectory trajectory = simulate(initial, config.seir, config.seir_horizon);
    const auto arrivals = arrivals_from_seir(trajectory, config.seir.sigma,
                                             config.admission_fraction,
                                             mix_seed(config.seed, 300));
    const DesReport report = run(config.des, arrivals, config.seir_horizon);
    const auto [peak_day, peak_beds] = peak_demand(report);

    std::ostringstream csv;
    csv << "day,occupancy,queue_length\n";
    for (std::size_t d = 0; d < report.occupancy.size(); ++d)
        csv << d << ',' << report.occupancy[d] << ',' << report.queue_length[d] << '\n';
    write_file(config.out_dir + "/des_occupancy.csv", csv.str());

    std::ostringstream summary;
    summary << "admitted " << report.admitted << '\n';
    summary << "recovered " << report.recovered << '\n';
    summary << "died " << report.died << '\n';
    summary << "still_in_treatment " << report.still_in_treatment << '\n';
    summary << "still_waiting " << report.still_waiting << '\n';
    summary << "peak_day " << peak_day << '\n';
    summary << "peak_occupancy " << peak_beds << '\n';
    summary << "bed_capacity " << config.des.bed_capacity << '\n';
    write_file(config.out_dir + "/des_report.txt", summary.str());
    std::cout << summary.str();
    return 0;
}

int cmd_run(const PipelineConfig& config) {
    const RunManifest manifest = run_pipeline(config);
    std::cout << "completed " << manifest.stages.size() << " stages, manifest at "
              << config.out_dir << "/manifest.json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"epidemic forecasting pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // let --config/--seed/--out follow the subcommand

    GlobalOptions options;
    std::uint64_t seed_value = 0;
    std::string out_value;
    app.add_option("--config", options.config_path, "config file (key-value tree)");
    auto* seed_opt = app.add_option("--seed", seed_value, "override the run seed");
    auto* out_opt = app.add_option("--out", out_value, "override the output directory");

    std::vector<std::string> evaluate_models;
    auto* ingest = app.add_subcommand("ingest", "parse sources into daily series");
    auto* analyze = app.add_subcommand("analyze", "stationarity diagnostics");
    auto* optimize = app.add_subcommand("optimize", "GA hyperparameter search");
    auto* train = app.add_subcommand("train", "fit the configured model per series");
    auto* forecast = app.add_subcommand("forecast", "multi-step forecast per series");
    auto* evaluate = app.add_subcommand("evaluate", "compare model families on the test span");
    evaluate->add_option("--models", evaluate_models, "model names to compare");
    auto* seir = app.add_subcommand("seir", "deterministic SEIR simulation");
    double beta = -1.0, sigma = -1.0, gamma = -1.0, population = -1.0, dt = -1.0;
    std::int64_t days = -1;
    std::vector<double> init;
    seir->add_option("--beta", beta, "transmission rate per day");
    seir->add_option("--sigma", sigma, "incubation rate per day");
    seir->add_option("--gamma", gamma, "recovery rate per day");
    seir->add_option("--population", population, "total population");
    seir->add_option("--days", days, "horizon in days");
    seir->add_option("--dt", dt, "Euler step size in days");
    seir->add_option("--init", init, "initial s,e,i,r")->delimiter(',')->expected(4);
    auto* des = app.add_subcommand("des", "hospital discrete-event simulation");
    des->add_option("--days", days, "horizon in days");
    auto* run_cmd = app.add_subcommand("run", "full pipeline with manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (seed_opt->count()) options.seed = seed_value;
        if (out_opt->count()) options.out_dir = out_value;
        PipelineConfig config = load_config(options);
        if (beta >= 0.0) config.seir.beta = beta;
        if (sigma >= 0.0) config.seir.sigma = sigma;
        if (gamma >= 0.0) config.seir.gamma = gamma;
        if (population > 0.0) config.seir.population = population;
        if (dt > 0.0) config.seir.dt = dt;
        if (days > 0) config.seir_horizon = static_cast<std::size_t>(days);
        if (ingest->parsed()) return cmd_ingest(config);
        if (analyze->parsed()) return cmd_analyze(config);
        if (optimize->parsed()) return cmd_optimize(config);
        if (train->parsed()) return cmd_train(config);
        if (forecast->parsed()) return cmd_forecast(config);
        if (evaluate->parsed()) return cmd_evaluate(config, evaluate_models);
        if (seir->parsed()) return cmd_seir(config, init);
        if (des->parsed()) return cmd_des(config);
        if (run_cmd->parsed()) return cmd_run(config);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const Error& error) {
        const bool validation = error.code() == ErrorCode::InvalidConfig ||
                                error.code() == ErrorCode::HorizonTooLarge;
        std::cerr << "error: " << error.what() << '\n';
        return validation ? 1 : 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    }
}
