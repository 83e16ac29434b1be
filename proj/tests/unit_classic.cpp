#include "adriana/classic.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace adriana;
using testutil::throws_code;

namespace {

// Independent 2x2 normal-equations solve for y = a + b*x.
std::pair<double, double> ols_oracle(const std::vector<double>& x,
                                     const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    const double intercept = (sy * sxx - sx * sxy) / det;
    const double slope = (n * sxy - sx * sy) / det;
    return {intercept, slope};
}

WindowedDataset lag1_dataset(const std::vector<double>& x, const std::vector<double>& y) {
    WindowedDataset dataset;
    dataset.window_size = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dataset.inputs.push_back({x[i]});
        dataset.targets.push_back(y[i]);
    }
    return dataset;
}

} // namespace

TEST_CASE("fit_linear recovers an exact linear law") {
    const std::vector<double> x{0, 1, 2, 3, 4, 5};
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i] + 1.0;

    const auto model = fit_linear(lag1_dataset(x, y));
    CHECK(model->coefficient() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(model->intercept() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(model->predict(std::vector<double>{10.0}) == doctest::Approx(21.0));
}

TEST_CASE("fit_linear rejects a constant regressor") {
    const std::vector<double> x(6, 3.0);
    const std::vector<double> y{1, 2, 3, 4, 5, 6};
    CHECK(throws_code(ErrorCode::SingularDesign, [&] { fit_linear(lag1_dataset(x, y)); }));
}

TEST_CASE("fit_linear matches the normal-equations oracle") {
    testutil::Lcg lcg(23);
    for (std::size_t trial = 0; trial < 100; ++trial) {
        std::vector<double> x(30), y(30);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = lcg.uniform() * 20.0 - 10.0;
            y[i] = 3.0 * x[i] - 2.0 + (lcg.uniform() - 0.5);
        }
        const auto model = fit_linear(lag1_dataset(x, y));
        const auto [intercept, slope] = ols_oracle(x, y);
        CHECK(model->coefficient() == doctest::Approx(slope).epsilon(1e-8));
        CHECK(model->intercept() == doctest::Approx(intercept).epsilon(1e-8));
    }
}

TEST_CASE("fit_ar recovers the AR(1) coefficient") {
    const auto series = testutil::ar1(0.8, 2000, 17);
    const auto model = fit_ar(series, 1);
    CHECK(model->coefficient() == doctest::Approx(0.8).epsilon(0.07));
}

TEST_CASE("fit_ar on white noise finds no structure") {
    const auto noise = testutil::lcg_normals(29, 2000);
    const auto model = fit_ar(noise, 3);
    for (double w : model->weights()) CHECK(std::abs(w) < 0.1);
}

TEST_CASE("fit_ar order one equals lag-1 OLS") {
    const auto series = testutil::ar1(0.6, 300, 37);
    const auto ar = fit_ar(series, 1);

    std::vector<double> x(series.begin(), series.end() - 1);
    std::vector<double> y(series.begin() + 1, series.end());
    const auto ols = fit_linear(lag1_dataset(x, y));

    CHECK(ar->coefficient() == doctest::Approx(ols->coefficient()).epsilon(1e-10));
    CHECK(ar->intercept() == doctest::Approx(ols->intercept()).epsilon(1e-10));
}

TEST_CASE("fit_ar needs enough samples") {
    const std::vector<double> series{1, 2, 3, 4};
    CHECK(throws_code(ErrorCode::SeriesTooShort, [&] { fit_ar(series, 2); }));
}

TEST_CASE("arima(1,1,0) is AR(1) on the differences") {
    const auto walk = testutil::random_walk(43, 400);
    const auto arima = fit_arima_110(walk);

    const auto diffed = difference(walk, 1);
    const auto ar = fit_ar(diffed.values, 1);
    CHECK(arima->phi() == doctest::Approx(ar->coefficient()).epsilon(1e-9));
    CHECK(arima->intercept() == doctest::Approx(ar->intercept()).epsilon(1e-9));

    // random-walk increments are uncorrelated
    CHECK(std::abs(arima->phi()) < 0.05);

    // prediction reintegrates: x_t + c + phi * (x_t - x_{t-1})
    const std::vector<double> window{3.0, 5.0};
    CHECK(arima->predict(window) ==
          doctest::Approx(5.0 + arima->intercept() + arima->phi() * 2.0));
    CHECK(arima->window_size() == 2);
    CHECK(std::isfinite(arima->aic()));
}

TEST_CASE("svr with targets inside the epsilon tube stays at zero") {
    WindowedDataset train;
    train.window_size = 1;
    for (std::size_t i = 0; i < 20; ++i) {
        train.inputs.push_back({static_cast<double>(i) / 20.0});
        train.targets.push_back(0.1);  // all within epsilon = 0.6 of zero
    }
    const auto model = fit_svr_linear(train);
    CHECK(std::abs(model->coefficient()) < 1e-9);
    CHECK(std::abs(model->intercept()) < 1e-9);
}

TEST_CASE("svr fits exactly linear data") {
    WindowedDataset train;
    train.window_size = 1;
    testutil::Lcg lcg(3);
    for (std::size_t i = 0; i < 50; ++i) {
        const double x = lcg.uniform() * 2.0 - 1.0;
        train.inputs.push_back({x});
        train.targets.push_back(0.7 * x + 0.2);
    }
    SvrConfig config;
    config.epsilon = 0.01;
    config.iterations = 5000;
    const auto model = fit_svr_linear(train, config);

    double total = 0.0;
    for (std::size_t i = 0; i < train.size(); ++i) {
        const double err = model->predict(train.inputs[i]) - train.targets[i];
        total += err * err;
    }
    CHECK(std::sqrt(total / static_cast<double>(train.size())) < 0.05);
}

TEST_CASE("svr final loss never exceeds the zero-weight loss") {
    WindowedDataset train;
    train.window_size = 2;
    testutil::Lcg lcg(5);
    for (std::size_t i = 0; i < 40; ++i) {
        train.inputs.push_back({lcg.uniform(), lcg.uniform()});
        train.targets.push_back(lcg.uniform() * 4.0 - 2.0);
    }
    SvrConfig config;
    config.epsilon = 0.3;
    const auto model = fit_svr_linear(train, config);

    double zero_loss = 0.0;
    for (double t : train.targets)
        zero_loss += std::max(std::abs(t) - config.epsilon, 0.0);
    zero_loss /= static_cast<double>(train.size());

    CHECK(model->training_report().final_loss <= zero_loss + 1e-12);
}
