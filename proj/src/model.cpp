#include "adriana/model.hpp"

#include "adriana/classic.hpp"
#include "adriana/error.hpp"
#include "adriana/neural.hpp"
#include "adriana/tree.hpp"

#include <istream>
#include <ostream>

namespace adriana {

const char* to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::Mlp: return "mlp";
    case ModelKind::Gru: return "gru";
    case ModelKind::Lstm: return "lstm";
    case ModelKind::Linear: return "lr";
    case ModelKind::Ar: return "ar";
    case ModelKind::Arima110: return "arima110";
    case ModelKind::Tree: return "dtr";
    case ModelKind::Forest: return "rfr";
    case ModelKind::Boost: return "xgbr";
    case ModelKind::SvrLinear: return "svr";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
    for (ModelKind kind :
         {ModelKind::Mlp, ModelKind::Gru, ModelKind::Lstm, ModelKind::Linear, ModelKind::Ar,
          ModelKind::Arima110, ModelKind::Tree, ModelKind::Forest, ModelKind::Boost,
          ModelKind::SvrLinear})
        if (name == to_string(kind)) return kind;
    throw Error(ErrorCode::InvalidConfig, "unknown model kind '" + name + "'");
}

void Model::check_window(std::span<const double> window) const {
    if (window.size() != window_size())
        throw Error(ErrorCode::WindowSizeMismatch,
                    "expected " + std::to_string(window_size()) + ", got " +
                        std::to_string(window.size()));
}

void Model::save(std::ostream& out) const {
    out << "adriana-model v1\n";
    out << "kind " << to_string(kind()) << '\n';
    out.precision(17);
    for (const auto& [key, value] : hyperparameters()) out << "hyper " << key << ' ' << value << '\n';
    const auto params = parameters();
    out << "params " << params.size() << '\n';
    for (std::size_t i = 0; i < params.size(); ++i)
        out << params[i] << (i % 8 == 7 ? '\n' : ' ');
    if (params.size() % 8 != 0) out << '\n';
    out << "end\n";
}

namespace {

std::size_t hyper_size_t(const std::map<std::string, double>& hyper, const std::string& key) {
    const auto it = hyper.find(key);
    if (it == hyper.end())
        throw Error(ErrorCode::InvalidConfig, "missing hyperparameter '" + key + "'");
    return static_cast<std::size_t>(it->second);
}

std::unique_ptr<Model> reconstruct(ModelKind kind, const std::map<std::string, double>& hyper,
                                   std::vector<double> params) {
    switch (kind) {
    case ModelKind::Mlp:
    case ModelKind::Gru:
    case ModelKind::Lstm: {
        ModelSpec spec{kind, hyper};
        return std::make_unique<NeuralModel>(network_config_from_spec(spec),
                                             std::move(params));
    }
    case ModelKind::Linear:
    case ModelKind::Ar:
    case ModelKind::SvrLinear: {
        const std::size_t n_weights = hyper_size_t(hyper, "n_weights");
        if (params.size() != n_weights + 1)
            throw Error(ErrorCode::LengthMismatch, "linear parameter count");
        const double intercept = params.back();
        params.pop_back();
        return std::make_unique<LinearModel>(kind, std::move(params), intercept,
                                             hyper_size_t(hyper, "window_size"));
    }
    case ModelKind::Arima110:
        if (params.size() != 3)
            throw Error(ErrorCode::LengthMismatch, "arima parameter count");
        return std::make_unique<Arima110Model>(params[0], params[1], params[2]);
    case ModelKind::Tree: {
        TreeConfig config{hyper_size_t(hyper, "max_depth"), hyper_size_t(hyper, "min_split"),
                          hyper_size_t(hyper, "min_leaf")};
        return std::make_unique<TreeModel>(params, hyper_size_t(hyper, "window_size"), config);
    }
    case ModelKind::Forest: {
        ForestConfig config;
        config.estimators = hyper_size_t(hyper, "estimators");
        config.max_depth = hyper_size_t(hyper, "max_depth");
        config.min_split = hyper_size_t(hyper, "min_split");
        config.min_leaf = hyper_size_t(hyper, "min_leaf");
        config.bootstrap = hyper.at("bootstrap") != 0.0;
        config.seed = static_cast<std::uint64_t>(hyper.at("seed"));
        const std::size_t window = hyper_size_t(hyper, "window_size");
        TreeConfig tree_config{config.max_depth, config.min_split, config.min_leaf};
        std::size_t at = 0;
        auto take = [&]() -> double {
            if (at >= params.size())
                throw Error(ErrorCode::LengthMismatch, "truncated forest parameters");
            return params[at++];
        };
        const auto n_trees = static_cast<std::size_t>(take());
        std::vector<TreeModel> trees;
        trees.reserve(n_trees);
        for (std::size_t m = 0; m < n_trees; ++m) {
            const auto len = static_cast<std::size_t>(take());
            if (at + len > params.size())
                throw Error(ErrorCode::LengthMismatch, "truncated forest parameters");
            trees.emplace_back(std::span<const double>(params.data() + at, len), window,
                               tree_config);
            at += len;
        }
        return std::make_unique<ForestModel>(std::move(trees), window, config);
    }
    case ModelKind::Boost: {
        BoostConfig config;
        config.estimators = hyper_size_t(hyper, "estimators");
        config.learning_rate = hyper.at("learning_rate");
        config.max_depth = hyper_size_t(hyper, "max_depth");
        const std::size_t window = hyper_size_t(hyper, "window_size");
        TreeConfig tree_config{config.max_depth, 2, 1};
        std::size_t at = 0;
        auto take = [&]() -> double {
            if (at >= params.size())
                throw Error(ErrorCode::LengthMismatch, "truncated boost parameters");
            return params[at++];
        };
        const double base = take();
        const auto n_stages = static_cast<std::size_t>(take());
        std::vector<TreeModel> stages;
        stages.reserve(n_stages);
        for (std::size_t m = 0; m < n_stages; ++m) {
            const auto len = static_cast<std::size_t>(take());
            if (at + len > params.size())
                throw Error(ErrorCode::LengthMismatch, "truncated boost parameters");
            stages.emplace_back(std::span<const double>(params.data() + at, len), window,
                                tree_config);
            at += len;
        }
        return std::make_unique<BoostModel>(base, std::move(stages), window, config);
    }
    }
    throw Error(ErrorCode::InvalidConfig, "unhandled model kind");
}

} // namespace

std::unique_ptr<Model> load_model(std::istream& in) {
    std::string token;
    std::string version;
    in >> token >> version;
    if (token != "adriana-model" || version != "v1")
        throw Error(ErrorCode::MalformedHeader, "not an adriana-model v1 document");
    std::optional<ModelKind> kind;
    std::map<std::string, double> hyper;
    std::vector<double> params;
    while (in >> token) {
        if (token == "kind") {
            std::string name;
            in >> name;
            kind = model_kind_from_string(name);
        } else if (token == "hyper") {
            std::string key;
            double value;
            in >> key >> value;
            hyper[key] = value;
        } else if (token == "params") {
            std::size_t count = 0;
            in >> count;
            params.resize(count);
            for (auto& v : params)
                if (!(in >> v)) throw Error(ErrorCode::MalformedHeader, "truncated parameters");
        } else if (token == "end") {
            break;
        } else {
            throw Error(ErrorCode::MalformedHeader, "unexpected token '" + token + "'");
        }
    }
    if (!kind) throw Error(ErrorCode::MalformedHeader, "missing kind");
    return reconstruct(*kind, hyper, std::move(params));
}

std::vector<double> invert_scale(std::span<const double> values, const ScaleTrace& trace) {
    std::vector<double> out(values.begin(), values.end());
    if (trace.scaler) out = minmax_invert(out, *trace.scaler);
    // reintegrate one differencing level at a time, innermost first
    for (std::size_t level = trace.integration_tail.size(); level-- > 0;) {
        double running = trace.integration_tail[level];
        for (auto& v : out) {
            running += v;
            v = running;
        }
    }
    return out;
}

double predict_tail(const Model& model, std::span<const double> window) {
    if (window.size() < model.window_size())
        throw Error(ErrorCode::WindowSizeMismatch,
                    "window narrower than the model: " + std::to_string(window.size()) +
                        " < " + std::to_string(model.window_size()));
    return model.predict(window.subspan(window.size() - model.window_size()));
}

Forecast recursive_forecast(const Model& model, std::span<const double> last_window,
                            std::size_t horizon, const ScaleTrace& trace) {
    if (horizon > kMaxForecastHorizon)
        throw Error(ErrorCode::HorizonTooLarge,
                    std::to_string(horizon) + " > " + std::to_string(kMaxForecastHorizon));
    if (horizon == 0) throw Error(ErrorCode::InvalidConfig, "horizon must be >= 1");
    if (last_window.size() != model.window_size())
        throw Error(ErrorCode::WindowSizeMismatch,
                    "expected " + std::to_string(model.window_size()) + ", got " +
                        std::to_string(last_window.size()));

    std::vector<double> window(last_window.begin(), last_window.end());
    std::vector<double> path;
    path.reserve(horizon);
    for (std::size_t step = 0; step < horizon; ++step) {
        const double next = model.predict(window);
        path.push_back(next);
        window.erase(window.begin());
        window.push_back(next);
    }

    Forecast forecast;
    forecast.horizon = horizon;
    forecast.scale_trace = trace;
    forecast.values = invert_scale(path, trace);
    return forecast;
}

} // namespace adriana
