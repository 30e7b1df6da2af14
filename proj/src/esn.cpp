#include "vralloc/esn.hpp"

#include <Eigen/Eigenvalues>
#include <random>
#include <stdexcept>

#include "vralloc/rng.hpp"

namespace vralloc {

double spectral_radius(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

EsnNet esn_init(int units, int input_dim, std::uint64_t seed, double target_radius,
                double learning_rate) {
    if (units < 1) throw std::invalid_argument("reservoir needs at least one unit");
    if (input_dim < 1) throw std::invalid_argument("input dimension must be >= 1");

    auto rng = make_stream(seed, Stream::Agent);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);

    EsnNet net;
    net.learning_rate = learning_rate;
    net.input_weights.resize(units, input_dim);
    for (int r = 0; r < units; ++r) {
        for (int c = 0; c < input_dim; ++c) net.input_weights(r, c) = uniform(rng);
    }
    net.reservoir_weights.resize(units, units);
    for (int r = 0; r < units; ++r) {
        for (int c = 0; c < units; ++c) net.reservoir_weights(r, c) = uniform(rng);
    }
    const double radius = spectral_radius(net.reservoir_weights);
    if (radius > 0.0) {
        net.reservoir_weights *= target_radius / radius;
    }
    net.readout = Eigen::RowVectorXd::Zero(units);
    net.state = Eigen::VectorXd::Zero(units);
    return net;
}

Eigen::VectorXd esn_candidate_state(const EsnNet& net, const Eigen::VectorXd& input) {
    if (input.size() != net.input_weights.cols()) {
        throw std::invalid_argument("ESN input dimension mismatch");
    }
    return (net.reservoir_weights * net.state + net.input_weights * input).array().tanh();
}

void esn_update_state(EsnNet& net, const Eigen::VectorXd& input) {
    net.state = esn_candidate_state(net, input);
}

double esn_predict(const EsnNet& net) {
    return net.readout.dot(net.state);
}

double esn_predict_at(const EsnNet& net, const Eigen::VectorXd& state) {
    return net.readout.dot(state);
}

double esn_train_readout(EsnNet& net, double target) {
    const double error = target - esn_predict(net);
    net.readout += net.learning_rate * error * net.state.transpose();
    return error;
}

}  // namespace vralloc
