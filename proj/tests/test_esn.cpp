#include <doctest.h>

#include <stdexcept>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "vralloc/esn.hpp"

using namespace vralloc;

TEST_SUITE_BEGIN("esn");

namespace {

// Independent spectral-radius oracle via Gelfand's formula with repeated
// squaring: rho = lim ||W^(2^k)||^(1/2^k). Fifty squarings push the
// polynomial Jordan factor far below 1e-9.
double gelfand_radius(Eigen::MatrixXd m, int squarings = 50) {
    double log_power = 0.0;  // log ||W^(2^k)||_F accumulated across scales
    double norm = m.norm();
    for (int k = 0; k < squarings; ++k) {
        m /= norm;
        m = (m * m).eval();
        log_power = 2.0 * (log_power + std::log(norm));
        norm = m.norm();
    }
    return std::exp((log_power + std::log(norm)) / std::pow(2.0, squarings));
}

}  // namespace

TEST_CASE("reservoir scaling hits the requested spectral radius") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const EsnNet net = esn_init(100, 5, seed, 0.9);
        CHECK(gelfand_radius(net.reservoir_weights) == doctest::Approx(0.9).epsilon(1e-6));
    }
    const EsnNet wide = esn_init(40, 2, 9, 0.5);
    CHECK(gelfand_radius(wide.reservoir_weights) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("initialization is deterministic and starts silent") {
    const EsnNet a = esn_init(30, 4, 123);
    const EsnNet b = esn_init(30, 4, 123);
    CHECK(a.input_weights == b.input_weights);
    CHECK(a.reservoir_weights == b.reservoir_weights);
    CHECK(a.readout == b.readout);
    CHECK(esn_predict(a) == 0.0);  // zero readout, zero state

    const EsnNet c = esn_init(30, 4, 124);
    CHECK(a.reservoir_weights != c.reservoir_weights);
}

TEST_CASE("state update is elementwise tanh of the affine map") {
    EsnNet net;
    net.input_weights = Eigen::MatrixXd::Zero(2, 1);
    net.reservoir_weights = Eigen::MatrixXd::Zero(2, 2);
    net.readout = Eigen::RowVectorXd::Zero(2);
    net.state = Eigen::VectorXd::Zero(2);
    esn_update_state(net, Eigen::VectorXd::Zero(1));
    CHECK(net.state(0) == 0.0);
    CHECK(net.state(1) == 0.0);

    // Hand-set 2x2 weights, hand-computed tanh values.
    net.reservoir_weights << 0.5, -0.25, 0.125, 0.75;
    net.input_weights << 1.0, -2.0;
    net.state << 0.2, -0.4;
    Eigen::VectorXd input(1);
    input << 0.3;
    esn_update_state(net, input);
    CHECK(net.state(0) == doctest::Approx(std::tanh(0.5 * 0.2 + -0.25 * -0.4 + 1.0 * 0.3)));
    CHECK(net.state(1) == doctest::Approx(std::tanh(0.125 * 0.2 + 0.75 * -0.4 + -2.0 * 0.3)));

    Eigen::VectorXd wrong(2);
    CHECK_THROWS_AS(esn_update_state(net, wrong), std::invalid_argument);
}

TEST_CASE("state entries stay in (-1,1) and the norm below sqrt(N)") {
    EsnNet net = esn_init(64, 3, 5);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        Eigen::VectorXd x(3);
        x << u(rng), u(rng), u(rng);
        esn_update_state(net, x);
        CHECK(net.state.cwiseAbs().maxCoeff() < 1.0);
        CHECK(net.state.norm() <= std::sqrt(64.0));
    }
}

TEST_CASE("echo-state washout: the state contracts once inputs stop") {
    EsnNet net = esn_init(80, 2, 21, 0.9);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd x(2);
        x << u(rng), u(rng);
        esn_update_state(net, x);
    }
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    double prev = net.state.norm();
    CHECK(prev > 0.0);
    for (int t = 0; t < 100; ++t) {
        esn_update_state(net, zero);
        const double cur = net.state.norm();
        CHECK(cur <= prev);
        prev = cur;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("prediction is the readout dot product") {
    EsnNet net = esn_init(10, 2, 31);
    Eigen::VectorXd x(2);
    x << 0.4, 0.6;
    esn_update_state(net, x);
    CHECK(esn_predict(net) == 0.0);  // readout still zero

    net.readout = Eigen::RowVectorXd::Zero(10);
    net.readout(3) = 1.0;
    CHECK(esn_predict(net) == doctest::Approx(net.state(3)));

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10; ++i) net.readout(i) = u(rng);
    double manual = 0.0;
    for (int i = 0; i < 10; ++i) manual += net.readout(i) * net.state(i);
    CHECK(esn_predict(net) == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("readout training is exactly the LMS rule") {
    EsnNet net = esn_init(12, 2, 41, 0.9, 0.1);
    Eigen::VectorXd x(2);
    x << 0.9, 0.1;
    esn_update_state(net, x);

    // Training toward the current prediction changes nothing.
    const Eigen::RowVectorXd before = net.readout;
    esn_train_readout(net, esn_predict(net));
    CHECK(net.readout == before);

    // One step moves the prediction by lr*||state||^2*(target - y).
    const double target = 0.8;
    const double y0 = esn_predict(net);
    const double norm2 = net.state.squaredNorm();
    esn_train_readout(net, target);
    const double y1 = esn_predict(net);
    CHECK(y1 - y0 == doctest::Approx(net.learning_rate * norm2 * (target - y0)).epsilon(1e-10));
}

TEST_CASE("repeated training on a fixed state contracts while lr*||mu||^2 < 2") {
    EsnNet net = esn_init(50, 1, 51, 0.9, 0.0);
    Eigen::VectorXd x(1);
    x << 0.7;
    esn_update_state(net, x);
    const double norm2 = net.state.squaredNorm();
    net.learning_rate = 1.5 / norm2;  // inside the stability band

    const double target = 1.0;
    double err = std::abs(target - esn_predict(net));
    for (int k = 0; k < 30; ++k) {
        esn_train_readout(net, target);
        const double cur = std::abs(target - esn_predict(net));
        CHECK(cur < err);
        err = cur;
    }
    CHECK(err < 1e-3);
}

TEST_CASE("single-unit net: one LMS step moves y by the lr*mu^2 fraction") {
    EsnNet net;
    net.input_weights = Eigen::MatrixXd::Zero(1, 1);
    net.input_weights(0, 0) = 1.0;
    net.reservoir_weights = Eigen::MatrixXd::Zero(1, 1);
    net.readout = Eigen::RowVectorXd::Zero(1);
    net.state = Eigen::VectorXd::Zero(1);
    net.learning_rate = 0.25;
    Eigen::VectorXd x(1);
    x << 0.5;
    esn_update_state(net, x);
    const double mu = std::tanh(0.5);
    CHECK(net.state(0) == doctest::Approx(mu));

    const double target = 2.0;
    esn_train_readout(net, target);
    // y moved from 0 toward target by lr*mu^2.
    CHECK(esn_predict(net) == doctest::Approx(net.learning_rate * mu * mu * target));
}

TEST_SUITE_END();
