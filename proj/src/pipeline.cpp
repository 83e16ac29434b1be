#include "adriana/pipeline.hpp"

#include "adriana/data_ingest.hpp"
#include "adriana/error.hpp"
#include "adriana/metrics.hpp"
#include "adriana/stationarity.hpp"

#include <json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>

namespace adriana {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << content;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::string hex64(std::uint64_t value) {
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(value));
    return buffer;
}

bool is_neural(ModelKind kind) {
    return kind == ModelKind::Mlp || kind == ModelKind::Gru || kind == ModelKind::Lstm;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct SeriesJob {
    const char* tag;
    SeriesKind kind;
    const std::string* path;
};

std::array<SeriesJob, 3> jobs_of(const PipelineConfig& config) {
    return {{{"confirmed", SeriesKind::Confirmed, &config.confirmed_path},
             {"recovered", SeriesKind::Recovered, &config.recovered_path},
             {"deaths", SeriesKind::Death, &config.deaths_path}}};
}

void append_array(std::ostringstream& out, const char* key, std::span<const double> values) {
    out << key << " = [";
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ", " : "") << values[i];
    out << "]\n";
}

} // namespace

void PipelineConfig::validate() const {
    if (confirmed_path.empty() || recovered_path.empty() || deaths_path.empty())
        throw Error(ErrorCode::InvalidConfig, "all three data file paths are required");
    if (country.empty()) throw Error(ErrorCode::InvalidConfig, "country is required");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(ErrorCode::InvalidConfig, "train_fraction must lie in (0, 1)");
    if (horizon == 0 || horizon > kMaxForecastHorizon)
        throw Error(ErrorCode::HorizonTooLarge,
                    "horizon must lie in [1, " + std::to_string(kMaxForecastHorizon) + "]");
    if (model.get("window_size", 9.0) < 2.0)
        throw Error(ErrorCode::InvalidConfig, "window_size must be at least 2");
    if (cv_folds == 0) throw Error(ErrorCode::InvalidConfig, "cv_folds must be positive");
    if (!(admission_fraction >= 0.0 && admission_fraction <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "admission_fraction must lie in [0, 1]");
    if (!(seir.dt > 0.0 && seir.dt <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "seir dt must lie in (0, 1]");
    if (seir_horizon == 0) throw Error(ErrorCode::InvalidConfig, "seir horizon must be positive");
    if (out_dir.empty()) throw Error(ErrorCode::InvalidConfig, "output directory is required");
    des.validate();
}

std::string PipelineConfig::snapshot() const {
    std::ostringstream out;
    out.precision(17);
    out << "[data]\n";
    out << "confirmed = \"" << confirmed_path << "\"\n";
    out << "recovered = \"" << recovered_path << "\"\n";
    out << "deaths = \"" << deaths_path << "\"\n";
    out << "country = \"" << country << "\"\n";
    out << "\n[run]\n";
    out << "train_fraction = " << train_fraction << '\n';
    out << "horizon = " << horizon << '\n';
    out << "seed = " << seed << '\n';
    out << "optimize = " << (optimize ? "true" : "false") << '\n';
    out << "cv_folds = " << cv_folds << '\n';
    out << "admission_fraction = " << admission_fraction << '\n';
    out << "out_dir = \"" << out_dir << "\"\n";
    out << "\n[model]\n";
    out << "kind = \"" << to_string(model.kind) << "\"\n";
    out << "\n[model.hyper]\n";
    for (const auto& [key, value] : model.hyper) out << key << " = " << value << '\n';
    out << "\n[ga]\n";
    out << "population = " << ga_population << '\n';
    out << "generations = " << ga_generations << '\n';
    out << "gene_length = " << ga_gene_length << '\n';
    out << "\n[seir]\n";
    out << "beta = " << seir.beta << '\n';
    out << "sigma = " << seir.sigma << '\n';
    out << "gamma = " << seir.gamma << '\n';
    out << "population = " << seir.population << '\n';
    out << "dt = " << seir.dt << '\n';
    out << "initial_exposed = " << seir_initial_exposed << '\n';
    out << "initial_infectious = " << seir_initial_infectious << '\n';
    out << "horizon = " << seir_horizon << '\n';
    out << "\n[des]\n";
    out << "bed_capacity = " << des.bed_capacity << '\n';
    out << "seed = " << des.seed << '\n';
    append_array(out, "severity_probabilities", des.severity_probabilities);
    append_array(out, "age_probabilities", des.age_probabilities);
    append_array(out, "duration_mean", des.duration_mean);
    append_array(out, "duration_spread", des.duration_spread);
    append_array(out, "death_mild", des.death_probability[0]);
    append_array(out, "death_severe", des.death_probability[1]);
    append_array(out, "death_critical", des.death_probability[2]);
    return out.str();
}

DesConfig des_config_from_tree(const ConfigTree& tree, const std::string& prefix,
                               DesConfig base) {
    DesConfig config = base;
    const auto key = [&](const char* name) { return prefix + "." + name; };
    config.bed_capacity =
        static_cast<std::size_t>(tree.get_int(key("bed_capacity"),
                                              static_cast<std::int64_t>(config.bed_capacity)));
    config.seed = tree.get_u64(key("seed"), config.seed);
    const auto fill = [&](const char* name, auto& target) {
        if (!tree.has(key(name))) return;
        const auto values = tree.get_array(key(name));
        if (values.size() != target.size())
            throw Error(ErrorCode::InvalidConfig,
                        key(name) + " needs " + std::to_string(target.size()) + " entries");
        for (std::size_t i = 0; i < target.size(); ++i) target[i] = values[i];
    };
    fill("severity_probabilities", config.severity_probabilities);
    fill("age_probabilities", config.age_probabilities);
    fill("duration_mean", config.duration_mean);
    fill("duration_spread", config.duration_spread);
    fill("death_mild", config.death_probability[0]);
    fill("death_severe", config.death_probability[1]);
    fill("death_critical", config.death_probability[2]);
    return config;
}

SeirParams seir_params_from_tree(const ConfigTree& tree, const std::string& prefix) {
    SeirParams params;
    const auto key = [&](const char* name) { return prefix + "." + name; };
    params.beta = tree.get_double(key("beta"), params.beta);
    params.sigma = tree.get_double(key("sigma"), params.sigma);
    params.gamma = tree.get_double(key("gamma"), params.gamma);
    params.population = tree.get_double(key("population"), params.population);
    params.dt = tree.get_double(key("dt"), params.dt);
    return params;
}

PipelineConfig pipeline_config_from_tree(const ConfigTree& tree) {
    PipelineConfig config;
    config.confirmed_path = tree.get_string("data.confirmed", config.confirmed_path);
    config.recovered_path = tree.get_string("data.recovered", config.recovered_path);
    config.deaths_path = tree.get_string("data.deaths", config.deaths_path);
    config.country = tree.get_string("data.country", config.country);
    config.train_fraction = tree.get_double("run.train_fraction", config.train_fraction);
    config.horizon = static_cast<std::size_t>(
        tree.get_int("run.horizon", static_cast<std::int64_t>(config.horizon)));
    config.seed = tree.get_u64("run.seed", config.seed);
    config.optimize = tree.get_bool("run.optimize", config.optimize);
    config.cv_folds = static_cast<std::size_t>(
        tree.get_int("run.cv_folds", static_cast<std::int64_t>(config.cv_folds)));
    config.admission_fraction =
        tree.get_double("run.admission_fraction", config.admission_fraction);
    config.out_dir = tree.get_string("run.out_dir", config.out_dir);
    if (tree.has("model.kind")) {
        config.model.kind = model_kind_from_string(tree.get_string("model.kind"));
        config.model.hyper.clear();
    }
    for (const auto& key : tree.keys_with_prefix("model.hyper"))
        config.model.hyper[key.substr(std::string("model.hyper.").size())] =
            tree.get_double(key);
    config.ga_population = static_cast<std::size_t>(
        tree.get_int("ga.population", static_cast<std::int64_t>(config.ga_population)));
    config.ga_generations = static_cast<std::size_t>(
        tree.get_int("ga.generations", static_cast<std::int64_t>(config.ga_generations)));
    config.ga_gene_length = static_cast<std::size_t>(
        tree.get_int("ga.gene_length", static_cast<std::int64_t>(config.ga_gene_length)));
    config.seir = seir_params_from_tree(tree);
    config.seir_initial_exposed =
        tree.get_double("seir.initial_exposed", config.seir_initial_exposed);
    config.seir_initial_infectious =
        tree.get_double("seir.initial_infectious", config.seir_initial_infectious);
    config.seir_horizon = static_cast<std::size_t>(
        tree.get_int("seir.horizon", static_cast<std::int64_t>(config.seir_horizon)));
    if (tree.has("run.des_config"))
        // external DES preset; inline [des] keys below still override it
        config.des =
            des_config_from_tree(ConfigTree::parse_file(tree.get_string("run.des_config")));
    config.des = des_config_from_tree(tree, "des", config.des);
    return config;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string digest_file(const std::string& path) { return hex64(fnv1a(read_file(path))); }

const StageRecord* RunManifest::find_stage(const std::string& name) const {
    for (const auto& stage : stages)
        if (stage.name == name) return &stage;
    return nullptr;
}

void RunManifest::save(const std::string& path) const {
    json doc;
    doc["tool_version"] = tool_version;
    doc["seed"] = seed;
    doc["created_at"] = created_at;
    doc["out_dir"] = out_dir;
    doc["config_snapshot"] = config_snapshot;
    doc["config_digest"] = config_digest;
    doc["completed"] = completed;
    doc["failed_stage"] = failed_stage;
    doc["stages"] = json::array();
    for (const auto& stage : stages) {
        json entry;
        entry["name"] = stage.name;
        entry["outputs"] = stage.outputs;
        entry["digests"] = stage.digests;
        doc["stages"].push_back(std::move(entry));
    }
    write_file(path, doc.dump(2) + "\n");
}

RunManifest RunManifest::load(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedHeader, std::string("manifest: ") + e.what());
    }
    RunManifest manifest;
    try {
        manifest.tool_version = doc.at("tool_version").get<std::string>();
        manifest.seed = doc.at("seed").get<std::uint64_t>();
        manifest.created_at = doc.at("created_at").get<std::string>();
        manifest.out_dir = doc.at("out_dir").get<std::string>();
        manifest.config_snapshot = doc.at("config_snapshot").get<std::string>();
        manifest.config_digest = doc.at("config_digest").get<std::string>();
        manifest.completed = doc.at("completed").get<bool>();
        manifest.failed_stage = doc.at("failed_stage").get<std::string>();
        for (const auto& entry : doc.at("stages")) {
            StageRecord stage;
            stage.name = entry.at("name").get<std::string>();
            stage.outputs = entry.at("outputs").get<std::vector<std::string>>();
            stage.digests = entry.at("digests").get<std::vector<std::string>>();
            manifest.stages.push_back(std::move(stage));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedHeader, std::string("manifest: ") + e.what());
    }
    return manifest;
}

namespace {

struct SeriesState {
    DailySeries daily;
    std::vector<std::int64_t> cumulative;
    ModelSpec spec;                       // effective hyperparameters
    ScalerParams scaler;
    std::vector<double> scaled;           // scaled differenced series
    std::size_t prefix_len = 0;           // scaler fit on this many values
    std::unique_ptr<Model> model;
    WindowedDataset test;
    std::vector<double> predicted_norm;
};

void add_stage(RunManifest& manifest, const std::string& out_dir, const std::string& name,
               std::vector<std::string> outputs) {
    StageRecord stage;
    stage.name = name;
    for (const auto& file : outputs) stage.digests.push_back(digest_file(out_dir + "/" + file));
    stage.outputs = std::move(outputs);
    manifest.stages.push_back(std::move(stage));
}

std::string metrics_row(const std::string& series, const std::string& model,
                        const char* scale, double rmse_v, double mae_v, double r2_v) {
    std::ostringstream out;
    out.precision(17);
    out << series << ',' << model << ',' << scale << ',' << rmse_v << ',' << mae_v << ','
        << r2_v << '\n';
    return out.str();
}

} // namespace

RunManifest run_pipeline(const PipelineConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);

    RunManifest manifest;
    manifest.seed = config.seed;
    manifest.out_dir = config.out_dir;
    manifest.created_at = utc_timestamp();
    manifest.config_snapshot = config.snapshot();
    manifest.config_digest = hex64(fnv1a(manifest.config_snapshot));
    const std::string manifest_path = config.out_dir + "/manifest.json";

    const auto jobs = jobs_of(config);
    std::array<SeriesState, 3> states;
    std::string current_stage = "ingest";

    try {
        // ingest
        {
            std::vector<std::string> outputs;
            for (std::size_t s = 0; s < jobs.size(); ++s) {
                const auto& job = jobs[s];
                const auto parsed = parse_jhu_csv(read_file(*job.path));
                const CumulativeSeries selected = select_country(parsed, config.country);
                states[s].cumulative = selected.values;
                states[s].daily = to_daily(selected, job.kind).series;
                const std::string file = std::string(job.tag) + "_daily.csv";
                write_file(config.out_dir + "/" + file, to_canonical_csv(states[s].daily));
                outputs.push_back(file);
            }
            add_stage(manifest, config.out_dir, "ingest", std::move(outputs));
        }

        // stationarity diagnostics
        current_stage = "stationarity";
        {
            std::vector<std::string> outputs;
            std::ostringstream adf_out;
            adf_out.precision(10);
            std::ostringstream acf_csv;
            acf_csv.precision(17);
            acf_csv << "series,lag,value,band\n";
            std::ostringstream pacf_csv;
            pacf_csv.precision(17);
            pacf_csv << "series,lag,value\n";
            for (std::size_t s = 0; s < jobs.size(); ++s) {
                std::vector<double> cumulative(states[s].cumulative.begin(),
                                               states[s].cumulative.end());
                const AdfResult cumulative_adf = adf_test(cumulative);
                const AdfResult daily_adf = adf_test(states[s].daily.values);
                adf_out << jobs[s].tag << " cumulative statistic=" << cumulative_adf.statistic
                        << " p=" << cumulative_adf.p_value
                        << " lags=" << cumulative_adf.lags_used
                        << " stationary_5pct=" << cumulative_adf.reject_unit_root_at_5pct
                        << '\n';
                adf_out << jobs[s].tag << " daily statistic=" << daily_adf.statistic
                        << " p=" << daily_adf.p_value << " lags=" << daily_adf.lags_used
                        << " stationary_5pct=" << daily_adf.reject_unit_root_at_5pct << '\n';

                const std::size_t max_lag =
                    std::min<std::size_t>(40, states[s].daily.values.size() / 2);
                const AcfResult correlations = acf(states[s].daily.values, max_lag);
                const std::vector<double> partials = pacf(states[s].daily.values, max_lag);
                for (std::size_t lag = 0; lag <= max_lag; ++lag) {
                    acf_csv << jobs[s].tag << ',' << lag << ',' << correlations.values[lag]
                            << ',' << correlations.confidence_half_width << '\n';
                    pacf_csv << jobs[s].tag << ',' << lag << ',' << partials[lag] << '\n';
                }
            }
            write_file(config.out_dir + "/acf.csv", acf_csv.str());
            write_file(config.out_dir + "/pacf.csv", pacf_csv.str());
            write_file(config.out_dir + "/adf.txt", adf_out.str());
            outputs.push_back("acf.csv");
            outputs.push_back("pacf.csv");
            outputs.push_back("adf.txt");
            add_stage(manifest, config.out_dir, "stationarity", std::move(outputs));
        }

        // transform: difference once, then min-max fitted on the training
        // prefix only (the test span never touches the scaler)
        current_stage = "transform";
        {
            std::vector<std::string> outputs;
            for (std::size_t s = 0; s < jobs.size(); ++s) {
                auto& state = states[s];
                const DifferencedSeries diffs = difference(state.daily.values, 1);
                state.prefix_len = static_cast<std::size_t>(
                    config.train_fraction * static_cast<double>(diffs.values.size()));
                if (state.prefix_len < 2)
                    throw Error(ErrorCode::SeriesTooShort, "training prefix below 2 values");
                state.scaler = minmax_fit(
                    std::span<const double>(diffs.values.data(), state.prefix_len));
                state.scaled = minmax_apply(diffs.values, state.scaler);

                std::ostringstream toml;
                toml.precision(17);
                toml << "d = 1\n";
                toml << "scaler_min = " << state.scaler.min << '\n';
                toml << "scaler_max = " << state.scaler.max << '\n';
                toml << "integration_tail = [" << state.daily.values.back() << "]\n";
                toml << "fit_prefix = " << state.prefix_len << '\n';
                const std::string file = std::string(jobs[s].tag) + "_transform.toml";
                write_file(config.out_dir + "/" + file, toml.str());
                outputs.push_back(file);
            }
            add_stage(manifest, config.out_dir, "transform", std::move(outputs));
        }

        // optional hyperparameter search on the training prefix
        if (config.optimize) {
            current_stage = "optimize";
            std::vector<std::string> outputs;
            for (std::size_t s = 0; s < jobs.size(); ++s) {
                auto& state = states[s];
                const std::span<const double> prefix(state.scaled.data(), state.prefix_len);
                GaConfig ga;
                ga.population_size = config.ga_population;
                ga.generations = config.ga_generations;
                ga.gene_length = config.ga_gene_length;
                ga.seed = mix_seed(config.seed, 100 + s);
                ga.search_space = default_search_space(config.model.kind);
                const std::uint64_t fitness_seed = mix_seed(config.seed, 200 + s);
                const GaResult result = run_ga(ga, [&](const std::map<std::string, double>&
                                                           hyper) {
                    ModelSpec candidate{config.model.kind, hyper};
                    candidate.hyper["seed"] = static_cast<double>(fitness_seed);
                    const auto window =
                        static_cast<std::size_t>(candidate.get("window_size", 9.0));
                    if (prefix.size() <= window + config.cv_folds)
                        return std::numeric_limits<double>::infinity();
                    try {
                        return evaluate_fitness(candidate, make_windows(prefix, window),
                                                config.cv_folds);
                    } catch (const Error&) {
                        return std::numeric_limits<double>::infinity();
                    }
                });
                for (const auto& [key, value] : result.best_hyperparameters)
                    state.spec.hyper[key] = value;

                std::ostringstream history;
                history.precision(17);
                history << "generation,best,mean\n";
                for (std::size_t g = 0; g < result.history.size(); ++g)
                    history << g << ',' << result.history[g].best << ','
                            << result.history[g].mean << '\n';
                const std::string history_file = std::string(jobs[s].tag) + "_ga_history.csv";
                write_file(config.out_dir + "/" + history_file, history.str());
                outputs.push_back(history_file);

                std::ostringstream best;
                best.precision(17);
                best << "kind = \"" << to_string(config.model.kind) << "\"\n";
                best << "fitness = " << result.best_fitness << '\n';
                for (const auto& [key, value] : result.best_hyperparameters)
                    best << key << " = " << value << '\n';
                const std::string best_file = std::string(jobs[s].tag) + "_best_params.toml";
                write_file(config.out_dir + "/" + best_file, best.str());
                outputs.push_back(best_file);
            }
            add_stage(manifest, config.out_dir, "optimize", std::move(outputs));
        }

        // train
        current_stage = "train";
        {
            std::vector<std::string> outputs;
            for (std::size_t s = 0; s < jobs.size(); ++s) {
                auto& state = states[s];
                state.spec.kind = config.model.kind;
                for (const auto& [key, value] : config.model.hyper)
                    if (!state.spec.hyper.count(key)) state.spec.hyper[key] = value;
                state.spec.hyper["seed"] = static_cast<double>(mix_seed(config.seed, s));

                const auto window = static_cast<std::size_t>(state.spec.get("window_size", 9.0));
                if (state.scaled.size() <= window + 1)
                    throw Error(ErrorCode::SeriesTooShort, "series shorter than the window");
                const WindowedDataset dataset = make_windows(state.scaled, window);
                auto [train, test] = chrono_split(dataset, config.train_fraction);
                state.test = std::move(test);

                if (is_neural(config.model.kind) && train.size() >= 10) {
                    // hold the newest tenth of training out for early stopping
                    const std::size_t core = train.size() - train.size() / 10;
                    state.model = fit_model(state.spec, slice(train, 0, core),
                                            slice(train, core, train.size()));
                } else {
                    state.model = fit_model(state.spec, train, WindowedDataset{});
                }

                std::ostringstream model_text;
                state.model->save(model_text);
                const std::string file = std::string(jobs[s].tag) + "_model.txt";
                write_file(config.out_dir + "/" + file, model_text.str());
                outputs.push_back(file);
            }
            add_stage(manifest, config.out_dir, "train", std::move(outputs));
        }

        // evaluate: one-step-ahead over the held-out test span
        current_stage = "evaluate";
        {
            std::vector<std::string> outputs;
            std::string metrics_csv = "series,model,scale,rmse,mae,r2\n";
            for (std::size_t s = 0; s < jobs.size(); ++s) {
                auto& state = states[s];
                state.predicted_norm.resize(state.test.size());
                for (std::size_t i = 0; i < state.test.size(); ++i)
                    state.predicted_norm[i] = predict_tail(*state.model, state.test.inputs[i]);

                metrics_csv += metrics_row(
                    jobs[s].tag, to_string(config.model.kind), "normalized",
                    rmse(state.test.targets, state.predicted_norm),
                    mae(state.test.targets, state.predicted_norm),
                    r2(state.test.targets, state.predicted_norm));

                // back to counts: undo min-max, then add the previous
                // observed daily value
                const auto predicted_diff = minmax_invert(state.predicted_norm, state.scaler);
                const std::size_t w = state.test.window_size;
                const std::size_t train_count =
                    state.scaled.size() - w - state.test.size();
                std::vector<double> predicted_raw(state.test.size());
                std::vector<double> actual_raw(state.test.size());
                DailySeries predicted_series;
                predicted_series.region_name = state.daily.region_name;
                predicted_series.kind = jobs[s].kind;
                predicted_series.start_date = state.daily.start_date.plus_days(
                    static_cast<std::int64_t>(train_count + w + 1));
                for (std::size_t i = 0; i < state.test.size(); ++i) {
                    const std::size_t j = train_count + i;
                    predicted_raw[i] = state.daily.values[j + w] + predicted_diff[i];
                    actual_raw[i] = state.daily.values[j + w + 1];
                }
                predicted_series.values = predicted_raw;
                metrics_csv += metrics_row(jobs[s].tag, to_string(config.model.kind), "raw",
                                           rmse(actual_raw, predicted_raw),
                                           mae(actual_raw, predicted_raw),
                                           r2(actual_raw, predicted_raw));

                const std::string file = std::string(jobs[s].tag) + "_predicted.csv";
                write_file(config.out_dir + "/" + file, to_canonical_csv(predicted_series));
                outputs.push_back(file);
            }
            write_file(config.out_dir + "/metrics.csv", metrics_csv);
            outputs.push_back("metrics.csv");
            add_stage(manifest, config.out_dir, "evaluate", std::move(outputs));
        }

        // forecast
        current_stage = "forecast";
        {
            std::vector<std::string> outputs;
            for (std::size_t s = 0; s < jobs.size(); ++s) {
                auto& state = states[s];
                const std::size_t window = state.model->window_size();
                ScaleTrace trace;
                trace.scaler = state.scaler;
                trace.integration_tail = {state.daily.values.back()};
                const std::span<const double> last_window(
                    state.scaled.data() + state.scaled.size() - window, window);
                const Forecast forecast =
                    recursive_forecast(*state.model, last_window, config.horizon, trace);

                DailySeries forecast_series;
                forecast_series.region_name = state.daily.region_name;
                forecast_series.kind = jobs[s].kind;
                forecast_series.start_date = state.daily.start_date.plus_days(
                    static_cast<std::int64_t>(state.daily.values.size()));
                forecast_series.values = forecast.values;
                const std::string file = std::string(jobs[s].tag) + "_forecast.csv";
                write_file(config.out_dir + "/" + file, to_canonical_csv(forecast_series));
                outputs.push_back(file);
            }
            add_stage(manifest, config.out_dir, "forecast", std::move(outputs));
        }

        // seir
        current_stage = "seir";
        SeirTrajectory trajectory;
        {
            SeirState initial;
            initial.e = config.seir_initial_exposed;
            initial.i = config.seir_initial_infectious;
            initial.s = config.seir.population - initial.e - initial.i;
            trajectory = simulate(initial, config.seir, config.seir_horizon);

            std::ostringstream csv;
            csv.precision(17);
            csv << "day,s,e,i,r\n";
            for (std::size_t d = 0; d < trajectory.daily.size(); ++d) {
                const SeirState& state = trajectory.daily[d];
                csv << d << ',' << state.s << ',' << state.e << ',' << state.i << ','
                    << state.r << '\n';
            }
            write_file(config.out_dir + "/seir.csv", csv.str());
            add_stage(manifest, config.out_dir, "seir", {"seir.csv"});
        }

        // des
        current_stage = "des";
        {
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
            add_stage(manifest, config.out_dir, "des",
                      {"des_occupancy.csv", "des_report.txt"});
        }

        // plot data
        current_stage = "plot";
        {
            auto files = emit_plot_data(manifest);
            add_stage(manifest, config.out_dir, "plot", std::move(files));
        }
    } catch (const Error& error) {
        manifest.failed_stage = current_stage;
        manifest.save(manifest_path);
        throw Error(error.code(), "stage '" + current_stage + "' failed: " + error.what());
    } catch (const std::exception& error) {
        manifest.failed_stage = current_stage;
        manifest.save(manifest_path);
        throw Error(ErrorCode::IoError,
                    "stage '" + current_stage + "' failed: " + std::string(error.what()));
    }

    manifest.completed = true;
    manifest.save(manifest_path);
    return manifest;
}

std::vector<std::string> emit_plot_data(const RunManifest& manifest) {
    const StageRecord* ingest = manifest.find_stage("ingest");
    const StageRecord* evaluated = manifest.find_stage("evaluate");
    const StageRecord* forecast = manifest.find_stage("forecast");
    if (!ingest || !evaluated || !forecast || forecast->outputs.empty())
        throw Error(ErrorCode::IncompleteRun, "run is missing forecast artifacts");

    const char* tags[] = {"confirmed", "recovered", "deaths"};
    const SeriesKind kinds[] = {SeriesKind::Confirmed, SeriesKind::Recovered,
                                SeriesKind::Death};
    std::vector<std::string> written;
    for (std::size_t s = 0; s < 3; ++s) {
        const std::string tag = tags[s];
        const DailySeries actual = parse_canonical_csv(
            read_file(manifest.out_dir + "/" + tag + "_daily.csv"), kinds[s], tag);
        const DailySeries predicted = parse_canonical_csv(
            read_file(manifest.out_dir + "/" + tag + "_predicted.csv"), kinds[s], tag);
        const DailySeries forecasted = parse_canonical_csv(
            read_file(manifest.out_dir + "/" + tag + "_forecast.csv"), kinds[s], tag);

        std::ostringstream csv;
        csv.precision(17);
        csv << "day,kind,value\n";
        const auto emit = [&](const DailySeries& series, const char* kind) {
            const std::int64_t offset =
                series.start_date.days_since_epoch() - actual.start_date.days_since_epoch();
            for (std::size_t i = 0; i < series.values.size(); ++i)
                csv << offset + static_cast<std::int64_t>(i) << ',' << kind << ','
                    << series.values[i] << '\n';
        };
        emit(actual, "actual");
        emit(predicted, "predicted");
        emit(forecasted, "forecast");
        const std::string file = tag + "_plot.csv";
        write_file(manifest.out_dir + "/" + file, csv.str());
        written.push_back(file);
    }
    return written;
}

} // namespace adriana
