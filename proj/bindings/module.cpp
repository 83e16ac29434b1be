#include "adriana/data_ingest.hpp"
#include "adriana/des.hpp"
#include "adriana/error.hpp"
#include "adriana/metrics.hpp"
#include "adriana/pipeline.hpp"
#include "adriana/seir.hpp"
#include "adriana/stationarity.hpp"
#include "adriana/surrogates.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace adriana;

PYBIND11_MODULE(_adriana, m) {
    m.doc() = "epidemic forecasting pipeline core";

    py::register_exception<Error>(m, "AdrianaError");

    py::class_<AdfResult>(m, "AdfResult")
        .def_readonly("statistic", &AdfResult::statistic)
        .def_readonly("p_value", &AdfResult::p_value)
        .def_readonly("lags_used", &AdfResult::lags_used)
        .def_readonly("reject_unit_root_at_5pct", &AdfResult::reject_unit_root_at_5pct);

    m.def("adf_test", [](const std::vector<double>& series) { return adf_test(series); });
    m.def("acf", [](const std::vector<double>& series, std::size_t max_lag) {
        const AcfResult result = acf(series, max_lag);
        return py::make_tuple(result.values, result.confidence_half_width);
    });
    m.def("pacf",
          [](const std::vector<double>& series, std::size_t max_lag) { return pacf(series, max_lag); });
    m.def("difference", [](const std::vector<double>& series, std::size_t d) {
        const DifferencedSeries result = difference(series, d);
        return py::make_tuple(result.values, result.seeds);
    });
    m.def("undifference", [](const std::vector<double>& diffs, const std::vector<double>& seeds) {
        return undifference(diffs, seeds);
    });
    m.def("minmax_fit", [](const std::vector<double>& series) {
        const ScalerParams params = minmax_fit(series);
        return py::make_tuple(params.min, params.max);
    });
    m.def("minmax_apply", [](const std::vector<double>& series, double lo, double hi) {
        return minmax_apply(series, ScalerParams{lo, hi});
    });
    m.def("minmax_invert", [](const std::vector<double>& series, double lo, double hi) {
        return minmax_invert(series, ScalerParams{lo, hi});
    });

    m.def("rmse", [](const std::vector<double>& a, const std::vector<double>& p) {
        return rmse(a, p);
    });
    m.def("mae", [](const std::vector<double>& a, const std::vector<double>& p) {
        return mae(a, p);
    });
    m.def("r2", [](const std::vector<double>& a, const std::vector<double>& p) {
        return r2(a, p);
    });

    py::class_<SeirParams>(m, "SeirParams")
        .def(py::init<>())
        .def_readwrite("beta", &SeirParams::beta)
        .def_readwrite("sigma", &SeirParams::sigma)
        .def_readwrite("gamma", &SeirParams::gamma)
        .def_readwrite("population", &SeirParams::population)
        .def_readwrite("dt", &SeirParams::dt);

    m.def("seir_simulate", [](double exposed, double infectious, const SeirParams& params,
                              std::size_t horizon) {
        SeirState initial;
        initial.e = exposed;
        initial.i = infectious;
        initial.s = params.population - exposed - infectious;
        const SeirTrajectory trajectory = simulate(initial, params, horizon);
        std::vector<std::array<double, 4>> rows;
        rows.reserve(trajectory.daily.size());
        for (const SeirState& state : trajectory.daily)
            rows.push_back({state.s, state.e, state.i, state.r});
        return rows;
    });
    m.def("r0", [](const SeirParams& params) { return r0(params); });

    m.def("train_and_forecast",
          [](const std::string& kind, const std::map<std::string, double>& hyper,
             const std::vector<double>& series, double train_fraction, std::size_t horizon) {
              ModelSpec spec{model_kind_from_string(kind), hyper};
              const auto window = static_cast<std::size_t>(spec.get("window_size", 9.0));
              const WindowedDataset dataset = make_windows(series, window);
              auto [train, test] = chrono_split(dataset, train_fraction);
              const auto model = fit_model(spec, train, test);
              const std::span<const double> last(series.data() + series.size() - window,
                                                 window);
              const Forecast forecast = recursive_forecast(*model, last, horizon, {});
              return forecast.values;
          });

    m.def("run_pipeline_from_config", [](const std::string& config_path) {
        const PipelineConfig config =
            pipeline_config_from_tree(ConfigTree::parse_file(config_path));
        const RunManifest manifest = run_pipeline(config);
        std::vector<std::string> stages;
        for (const auto& stage : manifest.stages) stages.push_back(stage.name);
        return py::make_tuple(manifest.completed, stages, manifest.config_digest);
    });
}
