#include "adriana/model.hpp"

#include "adriana/classic.hpp"
#include "adriana/neural.hpp"
#include "adriana/surrogates.hpp"
#include "adriana/tree.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace adriana;
using testutil::throws_code;

namespace {

WindowedDataset training_data(std::size_t window, std::uint64_t seed) {
    const auto raw = testutil::lcg_normals(seed, 60 + window);
    std::vector<double> series(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        series[i] = 0.5 + 0.2 * std::tanh(raw[i]);
    return make_windows(series, window);
}

std::unique_ptr<Model> fit_kind(ModelKind kind, const WindowedDataset& train) {
    ModelSpec spec;
    spec.kind = kind;
    spec.hyper = {{"neurons", 5.0}, {"max_epochs", 5.0}, {"seed", 3.0},
                  {"estimators", 4.0}, {"min_split", 2.0}, {"min_leaf", 1.0}};
    return fit_model(spec, train, WindowedDataset{});
}

} // namespace

TEST_CASE("model names round-trip") {
    for (ModelKind kind :
         {ModelKind::Mlp, ModelKind::Gru, ModelKind::Lstm, ModelKind::Linear,
          ModelKind::Ar, ModelKind::Arima110, ModelKind::Tree, ModelKind::Forest,
          ModelKind::Boost, ModelKind::SvrLinear}) {
        CHECK(model_kind_from_string(to_string(kind)) == kind);
    }
    CHECK(std::string(to_string(ModelKind::Lstm)) == "lstm");
    CHECK(std::string(to_string(ModelKind::Tree)) == "dtr");
    CHECK(std::string(to_string(ModelKind::Boost)) == "xgbr");
    CHECK_THROWS_AS(model_kind_from_string("nope"), Error);
}

TEST_CASE("every model kind survives save and load") {
    const auto train = training_data(4, 19);
    for (ModelKind kind :
         {ModelKind::Mlp, ModelKind::Gru, ModelKind::Lstm, ModelKind::Linear,
          ModelKind::Ar, ModelKind::Arima110, ModelKind::Tree, ModelKind::Forest,
          ModelKind::Boost, ModelKind::SvrLinear}) {
        CAPTURE(to_string(kind));
        const auto model = fit_kind(kind, train);

        std::stringstream stream;
        model->save(stream);
        const auto loaded = load_model(stream);

        CHECK(loaded->kind() == model->kind());
        CHECK(loaded->window_size() == model->window_size());
        CHECK(loaded->parameters() == model->parameters());
        for (std::size_t i = 0; i < 5; ++i) {
            const auto& window = train.inputs[i];
            CHECK(predict_tail(*loaded, window) ==
                  doctest::Approx(predict_tail(*model, window)).epsilon(1e-12));
        }
    }
}

TEST_CASE("loading malformed model text fails cleanly") {
    std::stringstream empty;
    CHECK(throws_code(ErrorCode::MalformedHeader, [&] { load_model(empty); }));

    std::stringstream wrong("some-other-tool v9\n");
    CHECK(throws_code(ErrorCode::MalformedHeader, [&] { load_model(wrong); }));
}

TEST_CASE("predict_tail uses the trailing window") {
    const LinearModel model(ModelKind::Linear, {2.0}, 1.0, 1);
    const std::vector<double> wide{9.0, 9.0, 9.0, 3.0};
    CHECK(predict_tail(model, wide) == doctest::Approx(7.0));

    const Arima110Model arima(0.5, 0.0, 0.0);
    const std::vector<double> window{1.0, 2.0, 4.0, 7.0};
    // trailing pair (4, 7): 7 + 0.5 * 3
    CHECK(predict_tail(arima, window) == doctest::Approx(8.5));

    CHECK(throws_code(ErrorCode::WindowSizeMismatch,
                      [&] { predict_tail(arima, std::vector<double>{1.0}); }));
}

TEST_CASE("recursive_forecast horizon one equals a single prediction") {
    const auto train = training_data(3, 23);
    const auto model = fit_kind(ModelKind::Linear, train);
    const std::vector<double> window{0.4, 0.5, 0.6};
    const auto forecast = recursive_forecast(*model, window, 1, ScaleTrace{});
    REQUIRE(forecast.values.size() == 1);
    CHECK(forecast.values[0] == doctest::Approx(model->predict(window)));
}

TEST_CASE("a fixed-point model forecasts a constant path") {
    // y = last value: every recursive step repeats the last window entry
    const LinearModel model(ModelKind::Linear, {0.0, 1.0}, 0.0, 2);
    const auto forecast =
        recursive_forecast(model, std::vector<double>{1.0, 4.0}, 10, ScaleTrace{});
    for (double v : forecast.values) CHECK(v == doctest::Approx(4.0));
}

TEST_CASE("recursive_forecast validates its inputs") {
    const LinearModel model(ModelKind::Linear, {1.0}, 0.0, 1);
    const std::vector<double> window{1.0};
    CHECK(throws_code(ErrorCode::HorizonTooLarge,
                      [&] { recursive_forecast(model, window, 501, ScaleTrace{}); }));
    CHECK(throws_code(ErrorCode::InvalidConfig,
                      [&] { recursive_forecast(model, window, 0, ScaleTrace{}); }));
    CHECK(throws_code(ErrorCode::WindowSizeMismatch, [&] {
        recursive_forecast(model, std::vector<double>{1.0, 2.0}, 5, ScaleTrace{});
    }));
    const auto ok = recursive_forecast(model, window, 500, ScaleTrace{});
    CHECK(ok.values.size() == 500);
}

TEST_CASE("invert_scale undoes normalization then reintegrates") {
    ScaleTrace trace;
    trace.scaler = ScalerParams{0.0, 2.0};
    trace.integration_tail = {10.0};

    // normalized diff 0.5 -> raw diff 1.0 -> first value 10 + 1 = 11
    const auto inverted = invert_scale(std::vector<double>{0.5, 0.5}, trace);
    REQUIRE(inverted.size() == 2);
    CHECK(inverted[0] == doctest::Approx(11.0));
    CHECK(inverted[1] == doctest::Approx(12.0));

    // no trace means values pass through untouched
    const auto passthrough = invert_scale(std::vector<double>{1.5, 2.5}, ScaleTrace{});
    CHECK(passthrough == std::vector<double>{1.5, 2.5});
}

TEST_CASE("double differencing reintegrates innermost first") {
    // original series 1, 4, 9, 16 -> d1: 3, 5, 7 -> d2: 2, 2
    // forecasting two more d2 values of 2 must continue 25, 36
    ScaleTrace trace;
    trace.integration_tail = {16.0, 7.0};
    const auto inverted = invert_scale(std::vector<double>{2.0, 2.0}, trace);
    CHECK(inverted[0] == doctest::Approx(25.0));
    CHECK(inverted[1] == doctest::Approx(36.0));
}

TEST_CASE("forecast through a scale trace matches the manual inversion") {
    const auto train = training_data(3, 29);
    const auto model = fit_kind(ModelKind::Ar, train);

    ScaleTrace trace;
    trace.scaler = ScalerParams{-1.0, 3.0};
    trace.integration_tail = {100.0};

    const std::vector<double> window{0.4, 0.5, 0.6};
    const auto forecast = recursive_forecast(*model, window, 5, trace);

    // recompute by hand: recursive raw path, then invert
    std::vector<double> path(window);
    std::vector<double> raw;
    for (std::size_t step = 0; step < 5; ++step) {
        const double next = model->predict(std::span(path).last(3));
        raw.push_back(next);
        path.push_back(next);
    }
    const auto expected = invert_scale(raw, trace);
    REQUIRE(forecast.values.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(forecast.values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}
