#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace vralloc {

/// Echo state network with a fixed random reservoir and an online-trained
/// linear readout. The reservoir matrix is rescaled at init so its spectral
/// radius sits strictly below 1, which gives the fading-memory property.
struct EsnNet {
    Eigen::MatrixXd input_weights;      // N_w x input_dim
    Eigen::MatrixXd reservoir_weights;  // N_w x N_w
    Eigen::RowVectorXd readout;         // 1 x N_w
    Eigen::VectorXd state;              // N_w
    double learning_rate = 0.03;

    int units() const { return static_cast<int>(state.size()); }
    int input_dim() const { return static_cast<int>(input_weights.cols()); }
};

/// Largest eigenvalue magnitude (dense solve).
double spectral_radius(const Eigen::MatrixXd& m);

/// Input and reservoir entries i.i.d. uniform on [-1,1]; reservoir rescaled
/// to the requested spectral radius; readout zero; state zero. Deterministic
/// given seed.
EsnNet esn_init(int units, int input_dim, std::uint64_t seed, double target_radius = 0.9,
                double learning_rate = 0.03);

/// state <- tanh(W*state + W_in*input). Throws on dimension mismatch.
void esn_update_state(EsnNet& net, const Eigen::VectorXd& input);

/// The state the net would move to on `input`, without committing it.
Eigen::VectorXd esn_candidate_state(const EsnNet& net, const Eigen::VectorXd& input);

/// Readout applied to the current state.
double esn_predict(const EsnNet& net);
double esn_predict_at(const EsnNet& net, const Eigen::VectorXd& state);

/// One LMS step on the current state: W_out += lr*(target - y)*state^T.
/// Returns the prediction error (target - y) before the update.
double esn_train_readout(EsnNet& net, double target);

}  // namespace vralloc
