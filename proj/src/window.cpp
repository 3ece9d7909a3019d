#include "hgogp/window.hpp"

#include <cmath>
#include <string>

#include "hgogp/errors.hpp"

namespace hgogp {

SlidingWindow::SlidingWindow(std::size_t capacity, double trigger_distance)
    : capacity_(capacity), trigger_(trigger_distance) {
    if (capacity_ < 1) {
        throw ArgumentError("window capacity must be at least 1");
    }
    if (!(trigger_ > 0.0) || !std::isfinite(trigger_)) {
        throw ArgumentError("window trigger distance must be positive");
    }
}

bool SlidingWindow::offer(double t, const PointRef& x, const Eigen::VectorXd& z_hat, double measurement) {
    if (!samples_.empty()) {
        const WindowSample& last = samples_.back();
        if (!(t > last.time)) {
            throw ArgumentError("window: sample time " + std::to_string(t) + " does not exceed last stored time " +
                                std::to_string(last.time));
        }
        if (x.size() != last.state.size() || z_hat.size() != last.targets.size()) {
            throw ArgumentError("window: sample dimensions differ from stored samples");
        }
        if (!((x - last.state).norm() > trigger_)) {
            return false;
        }
    }
    samples_.push_back(WindowSample{t, x, z_hat, measurement});
    if (samples_.size() > capacity_) {
        samples_.pop_front();
    }
    ++accepted_;
    return true;
}

const Eigen::VectorXd& SlidingWindow::last_state() const {
    if (samples_.empty()) {
        throw StateError("window is empty");
    }
    return samples_.back().state;
}

Eigen::MatrixXd SlidingWindow::states() const {
    if (samples_.empty()) {
        return {};
    }
    Eigen::MatrixXd x(samples_.front().state.size(), static_cast<Eigen::Index>(samples_.size()));
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        x.col(static_cast<Eigen::Index>(i)) = samples_[i].state;
    }
    return x;
}

Dataset SlidingWindow::as_dataset(std::size_t k, double noise_variance) const {
    if (samples_.empty()) {
        throw StateError("as_dataset: window is empty");
    }
    const auto r = static_cast<std::size_t>(samples_.front().targets.size());
    if (k >= r) {
        throw ArgumentError("as_dataset: derivative order " + std::to_string(k) + " out of range [0, " +
                            std::to_string(r - 1) + "]");
    }
    Eigen::VectorXd y(static_cast<Eigen::Index>(samples_.size()));
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        y[static_cast<Eigen::Index>(i)] = samples_[i].targets[static_cast<Eigen::Index>(k)];
    }
    return Dataset(states(), std::move(y), noise_variance);
}

Dataset SlidingWindow::measurement_dataset(double noise_variance) const {
    if (samples_.empty()) {
        throw StateError("measurement_dataset: window is empty");
    }
    Eigen::VectorXd y(static_cast<Eigen::Index>(samples_.size()));
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (std::isnan(samples_[i].measurement)) {
            throw StateError("measurement_dataset: sample " + std::to_string(i) + " has no recorded measurement");
        }
        y[static_cast<Eigen::Index>(i)] = samples_[i].measurement;
    }
    return Dataset(states(), std::move(y), noise_variance);
}

}  // namespace hgogp
